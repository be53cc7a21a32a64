// Exact big-rational evaluation of every mean-field map, used by the test
// and verification suites as the independent reference. Inputs are the
// exact dyadic rationals of the doubles fed to the production code, so the
// two sides evaluate literally the same expression.
#pragma once

#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "pcamf/mean_field.hpp"

namespace pcamf::oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// exact dyadic rational of a finite double
inline Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("oracle: non-finite input");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp); // x = mant * 2^exp, |mant| in [0.5, 1)
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53)); // integral
    Rational r(scaled);
    const int shift = exp - 53;
    if (shift >= 0)
        r *= Rational(BigInt(1) << shift);
    else
        r /= Rational(BigInt(1) << -shift);
    return r;
}

inline BigInt binom(int n, int k) {
    if (k < 0 || k > n) return BigInt(0);
    if (k > n - k) k = n - k;
    BigInt c(1);
    for (int i = 0; i < k; ++i) {
        c *= (n - i);
        c /= (i + 1);
    }
    return c;
}

inline Rational pow_r(const Rational& base, int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

inline Rational xi(int k, int r, const Rational& p) {
    return 2 * r <= k ? p : Rational(1) - p;
}

inline Rational binom_pmf(int k, int r, const Rational& q) {
    return Rational(binom(k, r)) * pow_r(q, r) * pow_r(Rational(1) - q, k - r);
}

inline Rational xi_binom_sum(int k, const Rational& rho, const Rational& p, int r_lo, int r_hi) {
    Rational s(0);
    for (int r = r_lo; r <= r_hi && r <= k; ++r) s += xi(k, r, p) * binom_pmf(k, r, rho);
    return s;
}

inline Rational p_grid(int gamma, const Rational& p, const Rational& rho) {
    return xi_binom_sum(gamma, rho, p, 0, gamma);
}

inline Rational p_rg(int n, const Rational& pe, const Rational& p, const Rational& rho) {
    Rational s(0);
    for (int k = 0; k <= n - 1; ++k)
        s += xi_binom_sum(k, rho, p, 0, k) * binom_pmf(n - 1, k, pe);
    return s;
}

inline Rational p_grid_pe(int n, int nu, const Rational& pe, const Rational& p,
                          const Rational& rho) {
    const Rational x = rho * pe;
    Rational s(0);
    for (int r = 0; r <= n - 1; ++r) s += xi(nu, r, p) * binom_pmf(n - 1, r, x);
    return s;
}

inline Rational p_sw_full(int n, int gamma, const Rational& pw, const Rational& p,
                          const Rational& rho, bool literal) {
    Rational s(0);
    for (int k = gamma; k <= n - 1; ++k)
        s += xi_binom_sum(k, rho, p, 0, literal ? k - gamma : k) * binom_pmf(n - 1, k, pw);
    return s;
}

inline Rational p_rg_gamma(int n, int gamma, const Rational& pw, const Rational& p,
                           const Rational& rho, bool literal) {
    Rational s(0);
    for (int k = gamma + 1; k <= n - 1; ++k)
        s += xi_binom_sum(k, rho, p, 0, literal ? k - gamma : k) * binom_pmf(n - 1, k, pw);
    return s;
}

inline Rational p_grid_gamma_nu(int gamma, int nu, const Rational& p, const Rational& rho,
                                bool literal) {
    const int r_lo = literal ? gamma + 1 : 0;
    if (nu < r_lo) return Rational(0);
    return xi_binom_sum(nu, rho, p, r_lo, nu);
}

inline Rational p_sw_composite(int n, int gamma, int nu, const Rational& pw, const Rational& p,
                               const Rational& rho, bool literal) {
    const Rational t1 = p_grid(gamma, p, rho) * pow_r(Rational(1) - pw, n - gamma);
    const Rational t2 = p_grid_gamma_nu(gamma, nu, p, rho, literal);
    return Rational(gamma, n) * t1 + Rational(n - gamma, n) * t2;
}

// Theorem-2 variance of the composite split.
inline Rational sigma2_sw(int n, int gamma, int nu, const Rational& pw, const Rational& p,
                          const Rational& rho, bool literal) {
    const Rational g1 = p_grid(gamma, p, rho) * pow_r(Rational(1) - pw, n - gamma);
    const Rational g2 = p_grid_gamma_nu(gamma, nu, p, rho, literal);
    const Rational n2 = Rational(n) * Rational(n);
    return Rational(gamma) / n2 * g1 * (Rational(1) - g1) +
           Rational(n - gamma) / n2 * g2 * (Rational(1) - g2);
}

// |impl - exact| / |exact| as a double; exact zero demands exact zero.
inline double relative_error(double impl, const Rational& exact) {
    if (exact == 0) return impl == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const Rational diff = from_double(impl) - exact;
    return std::fabs(static_cast<double>(diff / exact));
}

} // namespace pcamf::oracle
