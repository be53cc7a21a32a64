// Synchronous majority-rule PCA on an arbitrary graph.
//
// State updates are totalistic and symmetric: a node with r active
// neighbours out of deg(x) activates with probability p when 2r <= deg(x)
// and 1-p otherwise. Each node uses its own degree. Per-step draws are
// keyed by (seed, t, node) so a step can be evaluated in any order.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pcamf/graph.hpp"
#include "pcamf/mean_field.hpp"
#include "pcamf/rng.hpp"

namespace pcamf {

struct RuleParams {
    double p = 0.0; // switching probability, swept over (0, 0.5] in practice

    explicit RuleParams(double p_) : p(p_) {
        if (!(p >= 0.0 && p <= 0.5))
            throw std::invalid_argument("RuleParams: p must be in [0, 0.5]");
    }
};

struct PcaState {
    std::vector<std::uint8_t> states;
    std::int64_t t = 0;

    double density() const noexcept {
        std::int64_t ones = 0;
        for (auto s : states) ones += s;
        return states.empty() ? 0.0 : static_cast<double>(ones) / static_cast<double>(states.size());
    }
};

struct DensitySeries {
    std::vector<double> values; // rho_0 .. rho_T, each a multiple of 1/n
    int n = 0;
    std::string topology;       // metadata for the CSV comment block
    double p = 0.0;
    std::uint64_t seed = 0;
};

// xi with argument checking (the map-side xi is the unchecked hot path).
inline double majority_prob(int k, int r, double p) {
    if (r < 0 || r > k) throw std::domain_error("majority_prob: require 0 <= r <= k");
    return detail::xi_majority(k, r, p);
}

// Default initial configuration: active count m ~ uniform{0,...,n}, then m
// nodes chosen without replacement. An explicit rho0 switches to iid
// Bernoulli(rho0) per node.
inline PcaState initial_state(const Graph& g, std::optional<double> rho0, std::uint64_t seed) {
    const int n = g.n();
    PcaState st;
    st.states.assign(static_cast<std::size_t>(n), 0);
    st.t = 0;
    if (rho0) {
        if (!(*rho0 >= 0.0 && *rho0 <= 1.0))
            throw std::invalid_argument("initial_state: rho0 must be in [0,1]");
        for (int x = 0; x < n; ++x)
            st.states[static_cast<std::size_t>(x)] =
                bernoulli(*rho0, seed, RngStream::init_bernoulli, static_cast<std::uint64_t>(x)) ? 1 : 0;
        return st;
    }
    const auto m = uniform_below(counter_hash(seed, RngStream::init_count),
                                 static_cast<std::uint64_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        const auto j = uniform_below(
            counter_hash(seed, RngStream::init_shuffle, static_cast<std::uint64_t>(i)),
            static_cast<std::uint64_t>(i));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (std::uint64_t i = 0; i < m; ++i) st.states[static_cast<std::size_t>(order[i])] = 1;
    return st;
}

// One synchronous step: counts are taken on the old state for every node.
inline PcaState step(const Graph& g, const PcaState& state, RuleParams rule, std::uint64_t seed) {
    const int n = g.n();
    if (static_cast<int>(state.states.size()) != n)
        throw std::invalid_argument("step: state length must equal graph size");
    PcaState next;
    next.states.assign(static_cast<std::size_t>(n), 0);
    next.t = state.t + 1;
    const auto t_key = static_cast<std::uint64_t>(state.t);
    for (int x = 0; x < n; ++x) {
        int r = 0;
        for (std::int32_t y : g.neighbors(x)) r += state.states[static_cast<std::size_t>(y)];
        const int k = g.degree(x);
        const double prob = 2 * r <= k ? rule.p : 1.0 - rule.p;
        const double u = to_unit(counter_hash(seed, RngStream::step, t_key,
                                              static_cast<std::uint64_t>(x)));
        next.states[static_cast<std::size_t>(x)] = u < prob ? 1 : 0;
    }
    return next;
}

// Run T steps and record the density orbit rho_0 .. rho_T.
inline DensitySeries run(const Graph& g, RuleParams rule, std::optional<double> rho0, int T,
                         std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("run: T must be >= 1");
    DensitySeries series;
    series.n = g.n();
    series.p = rule.p;
    series.seed = seed;
    series.values.reserve(static_cast<std::size_t>(T) + 1);

    PcaState st = initial_state(g, rho0, seed);
    series.values.push_back(st.density());

    // the step loop keeps the two buffers alive instead of reallocating
    PcaState next;
    next.states.assign(st.states.size(), 0);
    const int n = g.n();
    for (int tstep = 0; tstep < T; ++tstep) {
        const auto t_key = static_cast<std::uint64_t>(st.t);
        int ones = 0;
        for (int x = 0; x < n; ++x) {
            int r = 0;
            for (std::int32_t y : g.neighbors(x)) r += st.states[static_cast<std::size_t>(y)];
            const int k = g.degree(x);
            const double prob = 2 * r <= k ? rule.p : 1.0 - rule.p;
            const double u = to_unit(counter_hash(seed, RngStream::step, t_key,
                                                  static_cast<std::uint64_t>(x)));
            const std::uint8_t s = u < prob ? 1 : 0;
            next.states[static_cast<std::size_t>(x)] = s;
            ones += s;
        }
        next.t = st.t + 1;
        std::swap(st.states, next.states);
        st.t = next.t;
        series.values.push_back(static_cast<double>(ones) / static_cast<double>(n));
    }
    return series;
}

// CSV with "#" metadata comments, then "t,rho" rows.
inline void write_density_csv(std::ostream& os, const DensitySeries& s) {
    os << "# topology: " << s.topology << "\n";
    os << "# p: " << s.p << "\n";
    os << "# seed: " << s.seed << "\n";
    os << "t,rho\n";
    for (std::size_t t = 0; t < s.values.size(); ++t) os << t << "," << s.values[t] << "\n";
}

} // namespace pcamf
