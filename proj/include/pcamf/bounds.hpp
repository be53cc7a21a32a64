// Concentration and approximation bounds: the Chernov density interval, the
// Kullback-Leibler divergences behind it, DeMoivre-Laplace CLT intervals
// with the 1.96/1.64 constants, and the map approximation-error bounds.
#pragma once

#include <cmath>
#include <stdexcept>

#include "pcamf/numeric.hpp"

namespace pcamf {

enum class IntervalMethod { chernov, clt };

struct Interval {
    double center = 0.0;
    double half_width = 0.0;
    double level = 0.0;
    IntervalMethod method = IntervalMethod::clt;
    bool clipped_lo = false;
    bool clipped_hi = false;

    double lo() const noexcept { return clipped_lo ? 0.0 : center - half_width; }
    double hi() const noexcept { return clipped_hi ? 1.0 : center + half_width; }
    bool contains(double x) const noexcept { return x >= lo() && x <= hi(); }
};

namespace detail {

inline double xlogx_ratio(double x, double y) noexcept {
    // x log(x/y) with the x -> 0 limit 0
    return x == 0.0 ? 0.0 : x * std::log(x / y);
}

inline Interval clip(Interval iv) noexcept {
    iv.clipped_lo = iv.center - iv.half_width < 0.0;
    iv.clipped_hi = iv.center + iv.half_width > 1.0;
    return iv;
}

} // namespace detail

// h_+(eps): KL divergence between p+eps and p.
inline double kl_plus(double p, double eps) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("kl_plus: p must be in (0,1)");
    if (!(eps >= 0.0 && eps <= 1.0 - p)) throw std::domain_error("kl_plus: eps out of range");
    return detail::xlogx_ratio(p + eps, p) + detail::xlogx_ratio(1.0 - p - eps, 1.0 - p);
}

// h_-(eps) = h_+(-eps)
inline double kl_minus(double p, double eps) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("kl_minus: p must be in (0,1)");
    if (!(eps >= 0.0 && eps <= p)) throw std::domain_error("kl_minus: eps out of range");
    return detail::xlogx_ratio(p - eps, p) + detail::xlogx_ratio(1.0 - p + eps, 1.0 - p);
}

// |rho - mu| <= sqrt(mu(1-mu)/n * 2 log(2/delta)) with probability >= 1-delta.
inline Interval chernov_interval(double mu, int n, double delta) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::domain_error("chernov_interval: mu in [0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("chernov_interval: delta in (0,1)");
    if (n < 1) throw std::domain_error("chernov_interval: n >= 1");
    Interval iv;
    iv.center = mu;
    iv.level = 1.0 - delta;
    iv.method = IntervalMethod::chernov;
    iv.half_width = (mu == 0.0 || mu == 1.0)
                        ? 0.0
                        : std::sqrt(mu * (1.0 - mu) / n * 2.0 * std::log(2.0 / delta));
    return detail::clip(iv);
}

// CLT interval with the fixed constants z = 1.96 (95%) and z = 1.64 (90%).
inline Interval clt_interval(double mu, double sigma2, double level) {
    if (sigma2 < 0.0) throw std::domain_error("clt_interval: sigma2 must be >= 0");
    double z = 0.0;
    if (std::fabs(level - 0.95) < 1e-12) z = 1.96;
    else if (std::fabs(level - 0.90) < 1e-12) z = 1.64;
    else throw std::invalid_argument("clt_interval: level must be 0.90 or 0.95");
    Interval iv;
    iv.center = mu;
    iv.level = level;
    iv.method = IntervalMethod::clt;
    iv.half_width = z * std::sqrt(sigma2);
    return detail::clip(iv);
}

// |p_rg - p_grid^nu| <= |p - 1/2| * 2 exp(-(n-1) eps^2 / (p_e(1-p_e)) + log n)
inline double rg_error_bound(int n, double p_edge, double p, double eps) {
    if (!(p_edge > 0.0 && p_edge < 1.0)) throw std::domain_error("rg_error_bound: p_e in (0,1)");
    if (!(eps > 0.0)) throw std::domain_error("rg_error_bound: eps must be > 0");
    const double expo = -(n - 1) * eps * eps / (p_edge * (1.0 - p_edge)) +
                        std::log(static_cast<double>(n));
    return std::fabs(p - 0.5) * 2.0 * std::exp(expo);
}

// |p_rg,G - p_grid,G^nu| <= |p - 1/2| * 2 exp(-(n-G) eps^2 / (p_w(1-p_w)) + log(n-G+1))
inline double sw_error_bound(int n, int gamma, double p_wire, double p, double eps) {
    if (!(p_wire > 0.0 && p_wire < 1.0)) throw std::domain_error("sw_error_bound: p_w in (0,1)");
    if (!(eps > 0.0)) throw std::domain_error("sw_error_bound: eps must be > 0");
    if (n <= gamma) throw std::domain_error("sw_error_bound: n must exceed gamma");
    const double expo = -(n - gamma) * eps * eps / (p_wire * (1.0 - p_wire)) +
                        std::log(static_cast<double>(n - gamma + 1));
    return std::fabs(p - 0.5) * 2.0 * std::exp(expo);
}

// Default eps for bound-vs-empirical comparisons: one standard deviation of
// the degree concentration scale.
inline double default_eps_rg(int n, double p_edge) {
    return std::sqrt(p_edge * (1.0 - p_edge) / (n - 1));
}
inline double default_eps_sw(int n, int gamma, double p_wire) {
    return std::sqrt(p_wire * (1.0 - p_wire) / (n - gamma));
}

} // namespace pcamf
