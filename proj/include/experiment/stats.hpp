#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace htn::exp {

/// Regularized incomplete beta function I_x(a, b), by continued fraction.
double incomplete_beta(double a, double b, double x);

/// P(T > t) for Student's t with `df` degrees of freedom (df > 0, real).
double student_t_sf(double t, double df);

struct TestReport {
    std::string group_a;
    std::string group_b;
    double t_statistic = 0.0;
    double p_value = 1.0;  ///< two-tailed
    double df = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double mean_a = 0.0;
    double mean_b = 0.0;
};

/// Welch's unequal-variance two-sample t-test, two-tailed.
///
/// Both samples need at least two values; std::invalid_argument otherwise.
/// When both samples have zero variance the statistic is undefined and the
/// report carries t = 0, p = 1 for equal means, or t = +/-inf, p = 0 for
/// different means (df is then n_a + n_b - 2).
TestReport welch_t(std::span<const double> a, std::span<const double> b, std::string group_a = "a",
                   std::string group_b = "b");

}  // namespace htn::exp
