#pragma once

#include <span>
#include <vector>

#include "synthfm/image.hpp"

namespace synthfm {

/// 2 |a ∩ b| / (|a| + |b|); 1.0 when both masks are empty.
/// Throws ShapeError on a dimension mismatch.
double dice(const BinaryMask& a, const BinaryMask& b);

struct PairedScores {
    std::vector<double> a;
    std::vector<double> b;
};

enum class Tails { two, one_greater };

struct TTestResult {
    double t_statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Student's paired t-test on d = a - b with the sample (n - 1) standard
/// deviation. Zero differences give t = 0, p = 1; constant nonzero
/// differences throw DegenerateVarianceError.
TTestResult paired_t_test(const PairedScores& scores, Tails tails = Tails::two);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double x, double a, double b);

/// Two-tailed p-value of Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

enum class Significance {
    strong,      ///< p < 0.001
    significant, ///< 0.001 <= p < 0.05
    none,        ///< p >= 0.05
};

Significance classify(double p_value);
const char* to_string(Significance s);

struct Summary {
    double mean = 0.0;
    double sd = 0.0; ///< sample standard deviation (0 for n < 2)
};

Summary summarize(std::span<const double> values);

} // namespace synthfm
