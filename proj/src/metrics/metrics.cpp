#include "synthfm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synthfm/kernels.hpp"

namespace synthfm {

double dice(const BinaryMask& a, const BinaryMask& b)
{
    require_same_shape(a, b, "dice");
    const auto& k = kernels::active();
    const auto na = k.count_nonzero(a.data(), a.size());
    const auto nb = k.count_nonzero(b.data(), b.size());
    if (na + nb == 0)
        return 1.0;
    const auto both = k.count_and(a.data(), b.data(), a.size());
    return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
static double beta_continued_fraction(double x, double a, double b)
{
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            break;
    }
    return h;
}

double incomplete_beta(double x, double a, double b)
{
    if (!(a > 0.0 && b > 0.0))
        throw DomainError("incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0 || x == 1.0)
        return x;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The fraction converges fast for x < (a + 1) / (a + b + 2); use symmetry otherwise.
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(x, a, b) / a;
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_tailed(double t, double df)
{
    if (std::isinf(t))
        return 0.0;
    return incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
}

TTestResult paired_t_test(const PairedScores& scores, Tails tails)
{
    const std::size_t n = scores.a.size();
    if (scores.b.size() != n)
        throw ShapeError("paired_t_test: score vectors differ in length");
    if (n < 2)
        throw DomainError("paired_t_test needs at least 2 pairs");

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = scores.a[i] - scores.b[i];
    TTestResult r;
    r.degrees_of_freedom = static_cast<int>(n) - 1;
    // Checked on the raw differences: a rounded mean can leave a spurious tiny sd.
    if (std::all_of(d.begin(), d.end(), [&](double v) { return v == d.front(); })) {
        if (d.front() != 0.0)
            throw DegenerateVarianceError("paired_t_test: differences are constant and nonzero");
        r.t_statistic = 0.0;
        r.p_value = 1.0;
        return r;
    }
    const Summary s = summarize(d);
    r.t_statistic = s.mean / (s.sd / std::sqrt(static_cast<double>(n)));
    const double two = student_t_two_tailed(r.t_statistic, r.degrees_of_freedom);
    if (tails == Tails::two)
        r.p_value = two;
    else
        r.p_value = r.t_statistic >= 0.0 ? two / 2.0 : 1.0 - two / 2.0;
    return r;
}

Significance classify(double p_value)
{
    if (p_value < 0.001)
        return Significance::strong;
    if (p_value < 0.05)
        return Significance::significant;
    return Significance::none;
}

const char* to_string(Significance s)
{
    switch (s) {
    case Significance::strong: return "p<0.001";
    case Significance::significant: return "0.001<=p<0.05";
    case Significance::none: return "p>=0.05";
    }
    return "unknown";
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    if (values.empty())
        return s;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2)
        return s;
    double ss = 0.0;
    for (double v : values)
        ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return s;
}

} // namespace synthfm
