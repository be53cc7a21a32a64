// Deterministic, seeded verification experiments: snippet analysis of
// density traces, confidence-interval coverage sweeps, bifurcation data
// with interval bands, and side-by-side evolution traces. All outputs are
// CSV; identical config + base seed gives byte-identical files.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pcamf/bounds.hpp"
#include "pcamf/dynamics.hpp"
#include "pcamf/graph.hpp"
#include "pcamf/mean_field.hpp"
#include "pcamf/pca.hpp"
#include "pcamf/rng.hpp"

namespace pcamf {

struct SweepConfig {
    std::vector<TopologyKind> kinds{TopologyKind::torus, TopologyKind::random_graph,
                                    TopologyKind::smallworld};
    std::vector<int> n_values{16, 25, 49, 100};
    std::vector<int> t_values{50, 100, 200, 500, 5000};
    std::vector<double> p_values{0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> p_edge_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> p_wire_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int runs = 100;
    std::uint64_t base_seed = 1;
    double delta_snip = 0.4;
    std::vector<double> levels{0.90, 0.95};
    int gamma = 4;                     // torus neighbourhood / small-world base degree
    std::optional<double> rho0 = 0.5;  // nullopt = engine default (uniform count)
    int threads = 0;                   // 0 = hardware concurrency

    void validate() const {
        if (kinds.empty() || n_values.empty() || t_values.empty() || p_values.empty())
            throw std::invalid_argument("SweepConfig: empty sweep list");
        if (runs < 1) throw std::invalid_argument("SweepConfig: runs must be >= 1");
        if (!(delta_snip > 0.0)) throw std::invalid_argument("SweepConfig: delta_snip > 0");
        for (double p : p_values)
            if (!(p >= 0.0 && p <= 0.5))
                throw std::invalid_argument("SweepConfig: p values must be in [0, 0.5]");
        for (double q : p_edge_values)
            if (!(q > 0.0 && q < 1.0))
                throw std::invalid_argument("SweepConfig: p_edge values must be in (0,1)");
        for (double q : p_wire_values)
            if (!(q > 0.0 && q < 1.0))
                throw std::invalid_argument("SweepConfig: p_wire values must be in (0,1)");
        if (rho0 && !(*rho0 >= 0.0 && *rho0 <= 1.0))
            throw std::invalid_argument("SweepConfig: rho0 must be in [0,1]");
    }
};

struct CoverageRow {
    std::string structure;
    int T = 0;
    int n = 0;
    double pe_pw = 0.0; // NaN for torus
    double p = 0.0;
    double coverage90 = 0.0;
    double coverage95 = 0.0;
    long snippet_count = 0;
    bool valid = true;
    std::string note;
};

// Cut the series wherever |rho_{t+1} - rho_t| > delta; means of the maximal
// uncut segments separate residence periods on different branches.
inline std::vector<double> snippets(std::span<const double> series, double delta = 0.4) {
    if (series.empty()) throw std::invalid_argument("snippets: series is empty");
    if (!(delta > 0.0)) throw std::invalid_argument("snippets: delta must be > 0");
    std::vector<double> means;
    std::size_t start = 0;
    for (std::size_t t = 0; t + 1 < series.size(); ++t) {
        if (std::fabs(series[t + 1] - series[t]) > delta) {
            KahanSum acc;
            for (std::size_t i = start; i <= t; ++i) acc.add(series[i]);
            means.push_back(acc.value() / static_cast<double>(t + 1 - start));
            start = t + 1;
        }
    }
    KahanSum acc;
    for (std::size_t i = start; i < series.size(); ++i) acc.add(series[i]);
    means.push_back(acc.value() / static_cast<double>(series.size() - start));
    return means;
}

inline std::vector<double> snippets(const DensitySeries& s, double delta = 0.4) {
    return snippets(std::span<const double>(s.values), delta);
}

// Per-run seed: hash(base, structure, n, T, p, p_e/p_w, run index). Cells are
// independent; deleting one cell cannot shift another cell's randomness.
inline std::uint64_t cell_seed(std::uint64_t base, TopologyKind kind, int n, int T, double p,
                               double pe_pw, int run_index) {
    std::uint64_t h = counter_hash(base, static_cast<std::uint64_t>(kind) + 11,
                                   static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(T));
    h = counter_hash(h, static_cast<std::uint64_t>(std::llround(p * 1e6)),
                     static_cast<std::uint64_t>(std::llround(pe_pw * 1e6)),
                     static_cast<std::uint64_t>(run_index));
    return h;
}

// The mean-field map whose fixed points the coverage intervals are centred
// on. The small world uses the untruncated marginal: the truncated variants
// develop spurious (rho ~ 0) or repelling diagonal crossings at small p and
// their "branches" do not track the simulated ones.
inline MeanFieldMap centering_map(TopologyKind kind, int n, int gamma, double pe_pw, double p) {
    switch (kind) {
        case TopologyKind::torus: return MeanFieldMap::grid(gamma, p, n);
        case TopologyKind::random_graph: return MeanFieldMap::rg_nu(n, pe_pw, p);
        case TopologyKind::smallworld:
            return MeanFieldMap::sw_full(n, gamma, pe_pw, p, SwSumMode::extended);
    }
    throw std::invalid_argument("centering_map: bad kind");
}

inline std::vector<FixedPoint> attracting_points(const std::vector<FixedPoint>& fps) {
    std::vector<FixedPoint> out;
    for (const auto& fp : fps)
        if (fp.stability == Stability::attracting) out.push_back(fp);
    return out;
}

namespace detail {

template <typename F>
void parallel_for(int count, int threads, F&& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

inline Graph build_cell_graph(TopologyKind kind, int n, int gamma, double pe_pw,
                              std::uint64_t seed) {
    switch (kind) {
        case TopologyKind::torus: {
            if (gamma == 4 || gamma == 8) {
                const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
                if (side * side != n)
                    throw std::invalid_argument("torus cell: n must be a perfect square");
                return build_torus(side, gamma);
            }
            return build_torus(n, gamma); // 1-D ring torus
        }
        case TopologyKind::random_graph:
            return build_random(n, pe_pw, derive_seed(seed, RngStream::graph));
        case TopologyKind::smallworld:
            return build_smallworld(n, gamma, pe_pw, derive_seed(seed, RngStream::graph));
    }
    throw std::invalid_argument("build_cell_graph: bad kind");
}

} // namespace detail

// Snippet means of `runs` seeded simulations of one sweep cell, in run order.
inline std::vector<double> cell_snippet_means(const SweepConfig& cfg, TopologyKind kind, int n,
                                              int T, double p, double pe_pw) {
    std::vector<std::vector<double>> by_run(static_cast<std::size_t>(cfg.runs));
    detail::parallel_for(cfg.runs, cfg.threads, [&](int run_idx) {
        const std::uint64_t rs = cell_seed(cfg.base_seed, kind, n, T, p, pe_pw, run_idx);
        const Graph g = detail::build_cell_graph(kind, n, cfg.gamma, pe_pw, rs);
        const DensitySeries series =
            run(g, RuleParams(p), cfg.rho0, T, derive_seed(rs, RngStream::run));
        by_run[static_cast<std::size_t>(run_idx)] = snippets(series, cfg.delta_snip);
    });
    std::vector<double> means;
    for (const auto& v : by_run) means.insert(means.end(), v.begin(), v.end());
    return means;
}

// Coverage of the 90%/95% CLT intervals centred on the nearest attracting
// mean-field fixed point, per snippet mean. At a fixed point the interval
// variance is rho*(1-rho*)/n (the topology theorems' sigma^2 with mu = rho*).
inline std::vector<CoverageRow> coverage_table(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<CoverageRow> rows;
    for (TopologyKind kind : cfg.kinds) {
        const std::vector<double> no_pe{std::nan("")};
        const std::vector<double>& pe_list = kind == TopologyKind::torus ? no_pe
                                             : kind == TopologyKind::random_graph
                                                 ? cfg.p_edge_values
                                                 : cfg.p_wire_values;
        for (int T : cfg.t_values)
            for (int n : cfg.n_values)
                for (double pe_pw : pe_list)
                    for (double p : cfg.p_values) {
                        CoverageRow row;
                        row.structure = std::string(kind_tag(kind));
                        row.T = T;
                        row.n = n;
                        row.pe_pw = pe_pw;
                        row.p = p;
                        try {
                            const MeanFieldMap map = centering_map(kind, n, cfg.gamma,
                                                                   std::isnan(pe_pw) ? 0.0 : pe_pw, p);
                            const auto branches = attracting_points(find_fixed_points(map));
                            if (branches.empty())
                                throw std::runtime_error("no attracting fixed point");
                            const auto means = cell_snippet_means(cfg, kind, n, T, p,
                                                                  std::isnan(pe_pw) ? 0.0 : pe_pw);
                            long in90 = 0, in95 = 0;
                            for (double m : means) {
                                const FixedPoint* nearest = &branches.front();
                                for (const auto& b : branches)
                                    if (std::fabs(b.rho_star - m) <
                                        std::fabs(nearest->rho_star - m))
                                        nearest = &b;
                                const double s2 =
                                    nearest->rho_star * (1.0 - nearest->rho_star) / n;
                                if (clt_interval(nearest->rho_star, s2, 0.90).contains(m)) ++in90;
                                if (clt_interval(nearest->rho_star, s2, 0.95).contains(m)) ++in95;
                            }
                            row.snippet_count = static_cast<long>(means.size());
                            row.coverage90 = means.empty() ? 0.0
                                                           : static_cast<double>(in90) /
                                                                 static_cast<double>(means.size());
                            row.coverage95 = means.empty() ? 0.0
                                                           : static_cast<double>(in95) /
                                                                 static_cast<double>(means.size());
                        } catch (const std::exception& e) {
                            row.valid = false;
                            row.note = e.what();
                        }
                        rows.push_back(std::move(row));
                    }
    }
    return rows;
}

inline void write_coverage_csv(std::ostream& os, const std::vector<CoverageRow>& rows) {
    os << std::setprecision(12);
    os << "structure,T,n,pe_pw,p,coverage90,coverage95,snippets,note\n";
    for (const auto& r : rows) {
        os << r.structure << "," << r.T << "," << r.n << ",";
        if (std::isnan(r.pe_pw)) os << "-";
        else os << r.pe_pw;
        os << "," << r.p << ",";
        if (r.valid)
            os << r.coverage90 << "," << r.coverage95 << "," << r.snippet_count << ",\n";
        else
            os << ",,0,invalid: " << r.note << "\n";
    }
}

// Bifurcation branches with interval bands plus Monte-Carlo snippet means:
// section 1 "p,branch_rho,hw90,hw95" (attracting branches over a fine p
// sweep), section 2 "p,rho_hat" (simulated snippet means at the config's p
// values). Fig.-7-style data, plotting left to the consumer.
inline void bifurcation_with_intervals(std::ostream& os, TopologyKind kind, int n, int T,
                                       double pe_pw, const SweepConfig& cfg,
                                       const std::vector<double>& p_sweep = default_p_sweep()) {
    os << std::setprecision(12);
    os << "p,branch_rho,hw90,hw95\n";
    for (double p : p_sweep) {
        const MeanFieldMap map =
            centering_map(kind, n, cfg.gamma, kind == TopologyKind::torus ? 0.0 : pe_pw, p);
        for (const auto& b : attracting_points(find_fixed_points(map))) {
            const double s2 = b.rho_star * (1.0 - b.rho_star) / n;
            os << p << "," << b.rho_star << "," << clt_interval(b.rho_star, s2, 0.90).half_width
               << "," << clt_interval(b.rho_star, s2, 0.95).half_width << "\n";
        }
    }
    os << "p,rho_hat\n";
    for (double p : cfg.p_values) {
        const auto means = cell_snippet_means(cfg, kind, n, T, p,
                                              kind == TopologyKind::torus ? 0.0 : pe_pw);
        for (double m : means) os << p << "," << m << "\n";
    }
}

// Single-run density trace next to the mean-field orbit started from the
// same realised rho_0: "t,rho_sim,rho_mf".
inline void evolution_trace(std::ostream& os, const TopologySpec& spec, RuleParams rule, int T,
                            std::uint64_t seed, std::optional<double> rho0 = std::nullopt) {
    const Graph g = build_graph(spec);
    DensitySeries series = run(g, rule, rho0, T, seed);
    series.topology = spec.describe();
    const MeanFieldMap map =
        centering_map(spec.kind, g.n(), spec.gamma,
                      spec.kind == TopologyKind::random_graph ? spec.p_edge : spec.p_wire, rule.p);
    const auto mf = iterate(map, series.values.front(), T);
    os << std::setprecision(12);
    os << "# topology: " << series.topology << "\n";
    os << "# p: " << rule.p << "\n";
    os << "# seed: " << seed << "\n";
    os << "t,rho_sim,rho_mf\n";
    for (std::size_t t = 0; t < series.values.size(); ++t)
        os << t << "," << series.values[t] << "," << mf[t] << "\n";
}

} // namespace pcamf
