#pragma once

#include <chrono>
#include <map>
#include <string>

namespace synthfm {

/// Accumulated wall time per named generation stage.
struct StageTimes {
    std::map<std::string, double> seconds;

    void add(const std::string& stage, double s) { seconds[stage] += s; }
    void merge(const StageTimes& other)
    {
        for (const auto& [k, v] : other.seconds)
            seconds[k] += v;
    }
};

/// Adds the lifetime of the scope to `times` (no-op when null).
class ScopedStage {
public:
    ScopedStage(StageTimes* times, std::string stage)
        : times_(times), stage_(std::move(stage)), start_(std::chrono::steady_clock::now())
    {
    }
    ~ScopedStage()
    {
        if (times_ != nullptr)
            times_->add(stage_, std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
    }
    ScopedStage(const ScopedStage&) = delete;
    ScopedStage& operator=(const ScopedStage&) = delete;

private:
    StageTimes* times_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace synthfm
