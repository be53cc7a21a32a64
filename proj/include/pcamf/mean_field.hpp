// Mean-field density maps rho -> mu(rho) for the majority-rule PCA.
//
// Six map variants cover the three topologies:
//   grid          mu_grid, fixed neighbourhood gamma
//   rg_full       random-graph marginal over the binomial degree distribution
//   rg_nu         grid map at the expected degree nu = floor(p_e (n-1))
//   grid_pe       variant keeping the edge probability inside the kernel
//   sw_full       small-world marginal (inner sum truncated at k - gamma;
//                 SwSumMode::extended lifts the truncation)
//   sw_composite  two-term split: lattice term x (1-p_w)^(n-gamma) plus the
//                 shortcut term truncated to r in [gamma+1, nu]
//
// All sums collect their terms and accumulate them compensated in
// increasing-magnitude order; values stay exact relative to a big-rational
// oracle to ~1e-14 for desk-scale n.
#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcamf/numeric.hpp"

namespace pcamf {

enum class MapKind { grid, rg_full, rg_nu, grid_pe, sw_full, sw_composite };

// Inner-sum upper limit of the small-world marginal: `literal` follows the
// displayed truncation r <= k - gamma; `extended` runs r all the way to k
// (sensitivity mode; also the variant whose fixed points track simulations).
enum class SwSumMode { literal, extended };

inline std::string_view map_tag(MapKind k) noexcept {
    switch (k) {
        case MapKind::grid: return "grid";
        case MapKind::rg_full: return "rg_full";
        case MapKind::rg_nu: return "rg_nu";
        case MapKind::grid_pe: return "grid_pe";
        case MapKind::sw_full: return "sw_full";
        case MapKind::sw_composite: return "sw_composite";
    }
    return "?";
}

namespace detail {

// majority rule xi_k(r): p when at most half the k neighbours are active
constexpr double xi_majority(int k, int r, double p) noexcept {
    return 2 * r <= k ? p : 1.0 - p;
}

inline void check_rho(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("rho must be in [0,1]");
}

// Scratch for term collection; maps are pure, scratch is per-thread.
inline std::vector<double>& term_buffer() {
    thread_local std::vector<double> buf;
    buf.clear();
    return buf;
}

// pmf over r of B(k, rho) multiplied by xi, appended to terms with weight w.
// Handles rho in {0,1} exactly.
inline void append_xi_binom_terms(std::vector<double>& terms, int k, double rho, double p,
                                  double w, int r_lo, int r_hi) {
    if (r_hi < r_lo || w == 0.0) return;
    if (rho == 0.0) {
        if (r_lo == 0) terms.push_back(w * xi_majority(k, 0, p));
        return;
    }
    if (rho == 1.0) {
        if (r_hi == k) terms.push_back(w * xi_majority(k, k, p));
        return;
    }
    const double lr = std::log(rho), l1r = std::log1p(-rho);
    for (int r = r_lo; r <= r_hi; ++r)
        terms.push_back(w * xi_majority(k, r, p) * std::exp(log_pmf(k, r, lr, l1r)));
}

} // namespace detail

// nu = floor(p_e (n-1)) for the random graph, floor(p_w (n-gamma)) for the
// small world; guarded_floor recovers the intended integer from doubles.
inline int nu_random(int n, double p_edge) { return guarded_floor(p_edge * (n - 1)); }
inline int nu_smallworld(int n, int gamma, double p_wire) {
    return guarded_floor(p_wire * (n - gamma));
}

// mu_grid: sum_r xi_gamma(r) C(gamma,r) rho^r (1-rho)^(gamma-r)
inline double p_grid(int gamma, double p, double rho) {
    detail::check_rho(rho);
    if (gamma < 0) throw std::domain_error("p_grid: gamma must be >= 0");
    auto& terms = detail::term_buffer();
    detail::append_xi_binom_terms(terms, gamma, rho, p, 1.0, 0, gamma);
    return sorted_kahan_sum(terms);
}

// Same map through the partial binomial sum q_{gamma/2}:
// p q(rho) + (1-p)(1 - q(rho)); must agree with p_grid to 1e-14.
inline double p_grid_threshold_form(int gamma, double p, double rho) {
    detail::check_rho(rho);
    auto& terms = detail::term_buffer();
    for (int r = 0; 2 * r <= gamma; ++r) terms.push_back(binom_pmf(gamma, r, rho));
    const double q = sorted_kahan_sum(terms);
    return p * q + (1.0 - p) * (1.0 - q);
}

// Random-graph marginal (double sum over degree k and active count r).
inline double p_rg(int n, double p_edge, double p, double rho) {
    detail::check_rho(rho);
    if (n < 2) throw std::domain_error("p_rg: n must be >= 2");
    if (!(p_edge > 0.0 && p_edge < 1.0)) throw std::domain_error("p_rg: p_edge in (0,1)");
    auto& terms = detail::term_buffer();
    const double lpe = std::log(p_edge), l1pe = std::log1p(-p_edge);
    for (int k = 0; k <= n - 1; ++k) {
        const double w = std::exp(detail::log_pmf(n - 1, k, lpe, l1pe));
        detail::append_xi_binom_terms(terms, k, rho, p, w, 0, k);
    }
    return sorted_kahan_sum(terms);
}

// Collapsed random-graph map: grid map at the expected degree.
inline double p_grid_nu(int n, double p_edge, double p, double rho) {
    const int nu = nu_random(n, p_edge);
    if (nu < 1)
        throw std::invalid_argument("p_grid_nu: floor(p_e (n-1)) = 0, graph too sparse");
    return p_grid(nu, p, rho);
}

// Variant keeping p_e inside the kernel (error-comparison experiments only).
inline double p_grid_pe(int n, double p_edge, double p, double rho) {
    detail::check_rho(rho);
    if (n < 2) throw std::domain_error("p_grid_pe: n must be >= 2");
    const int nu = nu_random(n, p_edge);
    const double x = rho * p_edge;
    auto& terms = detail::term_buffer();
    if (x == 0.0) return detail::xi_majority(nu, 0, p);
    const double lx = std::log(x), l1x = std::log1p(-x);
    for (int r = 0; r <= n - 1; ++r)
        terms.push_back(detail::xi_majority(nu, r, p) *
                        std::exp(detail::log_pmf(n - 1, r, lx, l1x)));
    return sorted_kahan_sum(terms);
}

// Small-world marginal over the shortcut degree distribution.
inline double p_sw_full(int n, int gamma, double p_wire, double p, double rho,
                        SwSumMode mode = SwSumMode::literal) {
    detail::check_rho(rho);
    if (n <= gamma) throw std::domain_error("p_sw_full: n must exceed gamma");
    if (!(p_wire > 0.0 && p_wire < 1.0)) throw std::domain_error("p_sw_full: p_wire in (0,1)");
    auto& terms = detail::term_buffer();
    const double lpw = std::log(p_wire), l1pw = std::log1p(-p_wire);
    for (int k = gamma; k <= n - 1; ++k) {
        const double w = std::exp(detail::log_pmf(n - 1, k, lpw, l1pw));
        const int hi = mode == SwSumMode::literal ? k - gamma : k;
        detail::append_xi_binom_terms(terms, k, rho, p, w, 0, hi);
    }
    return sorted_kahan_sum(terms);
}

// The shortcut part alone, degrees k > gamma (what Corollary 1 bounds).
inline double p_rg_gamma(int n, int gamma, double p_wire, double p, double rho,
                         SwSumMode mode = SwSumMode::literal) {
    detail::check_rho(rho);
    if (n <= gamma + 1) throw std::domain_error("p_rg_gamma: n must exceed gamma+1");
    auto& terms = detail::term_buffer();
    const double lpw = std::log(p_wire), l1pw = std::log1p(-p_wire);
    for (int k = gamma + 1; k <= n - 1; ++k) {
        const double w = std::exp(detail::log_pmf(n - 1, k, lpw, l1pw));
        const int hi = mode == SwSumMode::literal ? k - gamma : k;
        detail::append_xi_binom_terms(terms, k, rho, p, w, 0, hi);
    }
    return sorted_kahan_sum(terms);
}

// Collapsed shortcut term: sum_{r=gamma+1}^{nu} xi_nu(r) C(nu,r) rho^r (1-rho)^(nu-r).
// An empty range (nu <= gamma) is 0; flagged once through the warning channel.
inline double p_grid_gamma_nu(int n, int gamma, double p_wire, double p, double rho,
                              SwSumMode mode = SwSumMode::literal) {
    detail::check_rho(rho);
    const int nu = nu_smallworld(n, gamma, p_wire);
    const int r_lo = mode == SwSumMode::literal ? gamma + 1 : 0;
    if (nu < r_lo) {
        static thread_local bool warned = false;
        if (!warned) {
            warned = true;
            warn("p_grid_gamma_nu: nu = " + std::to_string(nu) +
                 " leaves an empty shortcut sum; term is 0");
        }
        return 0.0;
    }
    auto& terms = detail::term_buffer();
    detail::append_xi_binom_terms(terms, nu, rho, p, 1.0, r_lo, nu);
    return sorted_kahan_sum(terms);
}

// Lattice term of the split: p_grid(gamma) x (1-p_w)^(n-gamma).
inline double p_grid_sw(int n, int gamma, double p_wire, double p, double rho) {
    return p_grid(gamma, p, rho) * std::pow(1.0 - p_wire, n - gamma);
}

// mu_sw = (gamma/n) p_grid_sw + ((n-gamma)/n) p_grid_gamma_nu
inline double p_sw_composite(int n, int gamma, double p_wire, double p, double rho,
                             SwSumMode mode = SwSumMode::literal) {
    if (n <= gamma) throw std::domain_error("p_sw_composite: n must exceed gamma");
    const double g = static_cast<double>(gamma), nn = static_cast<double>(n);
    return (g / nn) * p_grid_sw(n, gamma, p_wire, p, rho) +
           ((nn - g) / nn) * p_grid_gamma_nu(n, gamma, p_wire, p, rho, mode);
}

// d mu_grid / d rho, analytic, with the r in {0, gamma} singular factors
// taken as their term-by-term limits; valid on the closed interval.
inline double mf_derivative(int gamma, double p, double rho) {
    detail::check_rho(rho);
    auto& terms = detail::term_buffer();
    for (int r = 0; r <= gamma; ++r) {
        const double xi = detail::xi_majority(gamma, r, p);
        const double c = std::exp(log_binom(gamma, r));
        // d/drho [rho^r (1-rho)^(g-r)] = r rho^(r-1)(1-rho)^(g-r) - (g-r) rho^r (1-rho)^(g-r-1)
        if (r > 0)
            terms.push_back(xi * c * r * std::pow(rho, r - 1) * std::pow(1.0 - rho, gamma - r));
        if (r < gamma)
            terms.push_back(-xi * c * (gamma - r) * std::pow(rho, r) *
                            std::pow(1.0 - rho, gamma - r - 1));
    }
    return sorted_kahan_sum(terms);
}

// A mean-field map as a value: evaluate, differentiate, variance.
class MeanFieldMap {
public:
    static MeanFieldMap grid(int gamma, double p, int n) {
        MeanFieldMap m(MapKind::grid, n, gamma, p);
        return m;
    }
    static MeanFieldMap rg_full(int n, double p_edge, double p) {
        MeanFieldMap m(MapKind::rg_full, n, 0, p);
        m.p_edge_ = p_edge;
        return m;
    }
    static MeanFieldMap rg_nu(int n, double p_edge, double p) {
        MeanFieldMap m(MapKind::rg_nu, n, 0, p);
        m.p_edge_ = p_edge;
        m.nu_ = nu_random(n, p_edge);
        if (m.nu_ < 1)
            throw std::invalid_argument("MeanFieldMap::rg_nu: floor(p_e (n-1)) = 0");
        return m;
    }
    static MeanFieldMap grid_pe(int n, double p_edge, double p) {
        MeanFieldMap m(MapKind::grid_pe, n, 0, p);
        m.p_edge_ = p_edge;
        m.nu_ = nu_random(n, p_edge);
        return m;
    }
    static MeanFieldMap sw_full(int n, int gamma, double p_wire, double p,
                                SwSumMode mode = SwSumMode::literal) {
        MeanFieldMap m(MapKind::sw_full, n, gamma, p);
        m.p_wire_ = p_wire;
        m.mode_ = mode;
        return m;
    }
    static MeanFieldMap sw_composite(int n, int gamma, double p_wire, double p,
                                     SwSumMode mode = SwSumMode::literal) {
        MeanFieldMap m(MapKind::sw_composite, n, gamma, p);
        m.p_wire_ = p_wire;
        m.mode_ = mode;
        m.nu_ = nu_smallworld(n, gamma, p_wire);
        return m;
    }

    double operator()(double rho) const {
        switch (kind_) {
            case MapKind::grid: return p_grid(gamma_, p_, rho);
            case MapKind::rg_full: return p_rg(n_, p_edge_, p_, rho);
            case MapKind::rg_nu: return p_grid(nu_, p_, rho);
            case MapKind::grid_pe: return p_grid_pe(n_, p_edge_, p_, rho);
            case MapKind::sw_full: return p_sw_full(n_, gamma_, p_wire_, p_, rho, mode_);
            case MapKind::sw_composite:
                return p_sw_composite(n_, gamma_, p_wire_, p_, rho, mode_);
        }
        throw std::logic_error("MeanFieldMap: bad kind");
    }

    // Analytic for the grid-form maps, central finite differences (h=1e-6,
    // one-sided at the endpoints) otherwise.
    double derivative(double rho) const {
        if (kind_ == MapKind::grid) return mf_derivative(gamma_, p_, rho);
        if (kind_ == MapKind::rg_nu) return mf_derivative(nu_, p_, rho);
        const double h = 1e-6;
        const double lo = rho - h >= 0.0 ? rho - h : rho;
        const double hi = rho + h <= 1.0 ? rho + h : rho;
        return ((*this)(hi) - (*this)(lo)) / (hi - lo);
    }

    // Variance of rho_{t+1}: mu(1-mu)/n for the binomial-evolution maps,
    // the two-term expression for the composite small-world split.
    double sigma2(double rho) const {
        if (kind_ == MapKind::sw_composite) {
            const double g1 = p_grid_sw(n_, gamma_, p_wire_, p_, rho);
            const double g2 = p_grid_gamma_nu(n_, gamma_, p_wire_, p_, rho, mode_);
            const double g = static_cast<double>(gamma_), nn = static_cast<double>(n_);
            return (g / (nn * nn)) * g1 * (1.0 - g1) +
                   ((nn - g) / (nn * nn)) * g2 * (1.0 - g2);
        }
        const double m = (*this)(rho);
        return m * (1.0 - m) / static_cast<double>(n_);
    }

    // Exact odd symmetry mu(1-rho) = 1 - mu(rho) holds for grid-form maps
    // with odd neighbourhood size.
    bool odd_symmetric() const noexcept {
        if (kind_ == MapKind::grid) return gamma_ % 2 == 1;
        if (kind_ == MapKind::rg_nu) return nu_ % 2 == 1;
        return false;
    }

    MapKind kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }
    int gamma() const noexcept { return gamma_; }
    int nu() const noexcept { return nu_; }
    double p() const noexcept { return p_; }
    double p_edge() const noexcept { return p_edge_; }
    double p_wire() const noexcept { return p_wire_; }
    SwSumMode mode() const noexcept { return mode_; }

    std::string describe() const {
        std::ostringstream os;
        os << map_tag(kind_) << " n=" << n_ << " p=" << p_;
        if (kind_ == MapKind::grid) os << " gamma=" << gamma_;
        if (kind_ == MapKind::rg_full || kind_ == MapKind::rg_nu || kind_ == MapKind::grid_pe)
            os << " p_e=" << p_edge_;
        if (kind_ == MapKind::sw_full || kind_ == MapKind::sw_composite)
            os << " gamma=" << gamma_ << " p_w=" << p_wire_
               << " mode=" << (mode_ == SwSumMode::literal ? "literal" : "extended");
        if (nu_ > 0) os << " nu=" << nu_;
        return os.str();
    }

private:
    MeanFieldMap(MapKind kind, int n, int gamma, double p)
        : kind_(kind), n_(n), gamma_(gamma), p_(p) {
        if (n < 1) throw std::invalid_argument("MeanFieldMap: n must be >= 1");
        if (!(p >= 0.0 && p <= 0.5))
            throw std::invalid_argument("MeanFieldMap: p must be in [0, 0.5]");
    }

    MapKind kind_;
    int n_;
    int gamma_;
    double p_;
    double p_edge_ = 0.0;
    double p_wire_ = 0.0;
    int nu_ = 0;
    SwSumMode mode_ = SwSumMode::literal;
};

// Spec-facing variance helper (n may differ from the map's own n).
inline double sigma2_for(const MeanFieldMap& map, int n, double rho) {
    if (map.kind() == MapKind::sw_composite && n == map.n()) return map.sigma2(rho);
    if (map.kind() == MapKind::sw_composite) {
        const double g1 = p_grid_sw(map.n(), map.gamma(), map.p_wire(), map.p(), rho);
        const double g2 = p_grid_gamma_nu(map.n(), map.gamma(), map.p_wire(), map.p(), rho,
                                          map.mode());
        const double g = map.gamma(), nn = static_cast<double>(n);
        return (g / (nn * nn)) * g1 * (1.0 - g1) + ((nn - g) / (nn * nn)) * g2 * (1.0 - g2);
    }
    const double m = map(rho);
    return m * (1.0 - m) / static_cast<double>(n);
}

} // namespace pcamf
