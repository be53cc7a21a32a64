// Numerical utilities: compensated summation, log-factorials, binomial pmf.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcamf {

// Warning channel: non-fatal conditions (disconnected random graph,
// degenerate nu) go through here. Replaceable for quiet/test runs.
inline std::function<void(std::string_view)>& warning_handler() {
    static std::function<void(std::string_view)> handler = [](std::string_view msg) {
        std::fputs("pcamf: warning: ", stderr);
        std::fwrite(msg.data(), 1, msg.size(), stderr);
        std::fputc('\n', stderr);
    };
    return handler;
}

inline void warn(std::string_view msg) {
    if (warning_handler()) warning_handler()(msg);
}

// Kahan-Neumaier compensated accumulator.
class KahanSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Compensated sum in increasing-magnitude order; consumes the buffer.
inline double sorted_kahan_sum(std::vector<double>& terms) noexcept {
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    KahanSum acc;
    for (double t : terms) acc.add(t);
    return acc.value();
}

// log(n!) from a table; falls back to lgamma beyond the table.
inline double log_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(1 << 16);
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i)
            t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    if (static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double log_binom(int n, int k) {
    if (k < 0 || n < 0 || k > n) throw std::domain_error("log_binom: require 0 <= k <= n");
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

namespace detail {

// Exact double binomial coefficients for small n (C(30,15) < 2^53).
inline double binom_coeff_small(int n, int k) noexcept {
    double c = 1.0;
    if (k > n - k) k = n - k;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

// pmf term with precomputed log(q), log1p(-q); caller guarantees 0 < q < 1.
inline double log_pmf(int k, int r, double log_q, double log_1q) {
    return log_binom(k, r) + r * log_q + (k - r) * log_1q;
}

} // namespace detail

// Binomial pmf C(k,r) q^r (1-q)^(k-r); log-space for k > 30.
inline double binom_pmf(int k, int r, double q) {
    if (r < 0 || r > k) throw std::domain_error("binom_pmf: require 0 <= r <= k");
    if (q < 0.0 || q > 1.0) throw std::domain_error("binom_pmf: require 0 <= q <= 1");
    if (q == 0.0) return r == 0 ? 1.0 : 0.0;
    if (q == 1.0) return r == k ? 1.0 : 0.0;
    if (k <= 30)
        return detail::binom_coeff_small(k, r) * std::pow(q, r) * std::pow(1.0 - q, k - r);
    return std::exp(detail::log_pmf(k, r, std::log(q), std::log1p(-q)));
}

// floor with a guard against binary representation error in products like
// 0.7 * 10 = 6.999999999999996 (the real-number value is intended).
inline int guarded_floor(double x) noexcept {
    return static_cast<int>(std::floor(x + 1e-9));
}

inline double clamp01(double x) noexcept {
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

} // namespace pcamf
