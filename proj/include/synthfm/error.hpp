#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace synthfm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operation required a nonempty (or non-full) mask.
class EmptyMaskError : public Error {
public:
    using Error::Error;
};

class DegenerateMaskError : public Error {
public:
    using Error::Error;
};

class DegeneratePolygonError : public Error {
public:
    using Error::Error;
};

/// Two rasters of different dimensions were combined.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Negative prompts were requested but the dilated band is empty.
class NoBandError : public Error {
public:
    using Error::Error;
};

class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

/// A stochastic generator exhausted its retry budget.
class GenerationError : public Error {
public:
    GenerationError(const std::string& what, std::uint64_t seed)
        : Error(what + " (seed " + std::to_string(seed) + ")"), seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace synthfm
