// Exact finite-state analysis of the density chain n rho_{t+1} ~ B(n, mu(rho_t)).
//
// The kernel over active-node counts {0..n} is dense; desk-scale n only.
#pragma once

#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "pcamf/mean_field.hpp"
#include "pcamf/numeric.hpp"

namespace pcamf {

class TransitionKernel {
public:
    TransitionKernel(int n, std::vector<double> p) : n_(n), P_(std::move(p)) {
        if (static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1) != P_.size())
            throw std::invalid_argument("TransitionKernel: bad matrix size");
    }

    int n() const noexcept { return n_; }
    double operator()(int k, int r) const noexcept {
        return P_[static_cast<std::size_t>(k) * (n_ + 1) + static_cast<std::size_t>(r)];
    }
    std::span<const double> row(int k) const noexcept {
        return {P_.data() + static_cast<std::size_t>(k) * (n_ + 1),
                static_cast<std::size_t>(n_ + 1)};
    }

private:
    int n_;
    std::vector<double> P_; // row-major (n+1) x (n+1)
};

// P[k][r] = C(n,r) m^r (1-m)^(n-r) with m = map(k/n). For odd-symmetric maps
// the rows k > n/2 are mirrored from row n-k so that the exact symmetry
// P[k][r] = P[n-k][n-r] holds bit-for-bit.
inline TransitionKernel build_kernel(int n, const MeanFieldMap& map) {
    if (n < 1 || n > 2000) throw std::invalid_argument("build_kernel: need 1 <= n <= 2000 (dense)");
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    std::vector<double> P(dim * dim, 0.0);
    const bool mirror = map.odd_symmetric();
    for (int k = 0; k <= n; ++k) {
        if (mirror && 2 * k > n) {
            for (int r = 0; r <= n; ++r)
                P[static_cast<std::size_t>(k) * dim + static_cast<std::size_t>(r)] =
                    P[static_cast<std::size_t>(n - k) * dim + static_cast<std::size_t>(n - r)];
            continue;
        }
        const double m = map(static_cast<double>(k) / static_cast<double>(n));
        for (int r = 0; r <= n; ++r)
            P[static_cast<std::size_t>(k) * dim + static_cast<std::size_t>(r)] = binom_pmf(n, r, m);
    }
    return TransitionKernel(n, std::move(P));
}

namespace detail {

inline void check_distribution(std::span<const double> pi) {
    double sum = 0.0;
    for (double v : pi) {
        if (v < 0.0) throw std::domain_error("distribution has a negative entry");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw std::domain_error("distribution does not sum to 1");
}

inline std::vector<double> kernel_step(const TransitionKernel& K, const std::vector<double>& pi) {
    const int n = K.n();
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        const double w = pi[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        const auto row = K.row(k);
        for (int r = 0; r <= n; ++r) out[static_cast<std::size_t>(r)] += w * row[r];
    }
    return out;
}

} // namespace detail

// pi_{t+1} = pi_t P for T steps; returns all T+1 distributions. Mass drift
// beyond 1e-10 is treated as a numerical failure before renormalising.
inline std::vector<std::vector<double>> evolve(const TransitionKernel& K,
                                               const std::vector<double>& pi0, int T) {
    if (static_cast<int>(pi0.size()) != K.n() + 1)
        throw std::domain_error("evolve: pi0 has wrong length");
    detail::check_distribution(pi0);
    std::vector<std::vector<double>> seq;
    seq.reserve(static_cast<std::size_t>(T) + 1);
    seq.push_back(pi0);
    for (int t = 0; t < T; ++t) {
        auto next = detail::kernel_step(K, seq.back());
        double mass = 0.0;
        for (double v : next) mass += v;
        if (std::fabs(mass - 1.0) > 1e-10)
            throw std::runtime_error("evolve: probability mass drifted by more than 1e-10");
        for (double& v : next) v /= mass;
        seq.push_back(std::move(next));
    }
    return seq;
}

// Power iteration to the leading left eigenvector; stops when the total
// variation change falls below tol.
inline std::vector<double> stationary(const TransitionKernel& K, double tol = 1e-12,
                                      int max_iter = 200000) {
    const int n = K.n();
    std::vector<double> pi(static_cast<std::size_t>(n) + 1,
                           1.0 / static_cast<double>(n + 1));
    for (int it = 0; it < max_iter; ++it) {
        auto next = detail::kernel_step(K, pi);
        double mass = 0.0;
        for (double v : next) mass += v;
        for (double& v : next) v /= mass;
        double tv = 0.0;
        for (std::size_t i = 0; i < pi.size(); ++i) tv += std::fabs(next[i] - pi[i]);
        pi = std::move(next);
        if (0.5 * tv < tol) return pi;
    }
    double tv = 0.0;
    {
        auto next = detail::kernel_step(K, pi);
        for (std::size_t i = 0; i < pi.size(); ++i) tv += std::fabs(next[i] - pi[i]);
    }
    throw std::runtime_error("stationary: no convergence after " + std::to_string(max_iter) +
                             " iterations; last TV residual " + std::to_string(0.5 * tv));
}

inline double mean_density(const std::vector<double>& pi) {
    const int n = static_cast<int>(pi.size()) - 1;
    double m = 0.0;
    for (int k = 0; k <= n; ++k)
        m += pi[static_cast<std::size_t>(k)] * (static_cast<double>(k) / static_cast<double>(n));
    return m;
}

inline void write_kernel_csv(std::ostream& os, const TransitionKernel& K) {
    const int n = K.n();
    for (int k = 0; k <= n; ++k) {
        const auto row = K.row(k);
        for (int r = 0; r <= n; ++r) os << (r ? "," : "") << row[r];
        os << "\n";
    }
}

inline void write_distribution_csv(std::ostream& os, const std::vector<double>& pi) {
    os << "k,pi\n";
    for (std::size_t k = 0; k < pi.size(); ++k) os << k << "," << pi[k] << "\n";
}

} // namespace pcamf
