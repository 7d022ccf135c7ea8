#include "experiment/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace htn::exp {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
// Converges quickly for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10'000;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta: continued fraction did not converge");
}

// I_x(a, b) given both x and y = 1 - x, so callers can pass a y computed
// without cancellation.
double incomplete_beta_xy(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta: x must lie in [0, 1]");
    return incomplete_beta_xy(a, b, x, 1.0 - x);
}

double student_t_sf(double t, double df) {
    if (!(df > 0.0)) throw std::domain_error("student t: degrees of freedom must be positive");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    const double t2 = t * t;
    // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    const double tail2 = incomplete_beta_xy(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2));
    return t > 0 ? 0.5 * tail2 : 1.0 - 0.5 * tail2;
}

TestReport welch_t(std::span<const double> a, std::span<const double> b, std::string group_a, std::string group_b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t: each sample needs at least two values");

    TestReport r;
    r.group_a = std::move(group_a);
    r.group_b = std::move(group_b);
    r.n_a = a.size();
    r.n_b = b.size();
    r.mean_a = mean_of(a);
    r.mean_b = mean_of(b);

    const double na = static_cast<double>(r.n_a);
    const double nb = static_cast<double>(r.n_b);
    const double qa = variance_of(a, r.mean_a) / na;
    const double qb = variance_of(b, r.mean_b) / nb;
    const double se2 = qa + qb;
    const double diff = r.mean_a - r.mean_b;

    if (se2 == 0.0) {
        r.df = na + nb - 2.0;
        if (diff == 0.0) {
            r.t_statistic = 0.0;
            r.p_value = 1.0;
        } else {
            r.t_statistic = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
        }
        return r;
    }

    r.t_statistic = diff / std::sqrt(se2);
    r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    r.p_value = std::min(1.0, 2.0 * student_t_sf(std::fabs(r.t_statistic), r.df));
    return r;
}

}  // namespace htn::exp
