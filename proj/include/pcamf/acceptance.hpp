// Built-in verification suite: eleven end-to-end checks of the library's
// analytical claims against independent oracles and seeded simulations.
// Used by the `pcamf verify` subcommand and by the acceptance test binary.
//
// Check 10 (small-world phase-transition witness) is known not to occur
// under the per-pair Newman-Watts construction this library implements: the
// density branches sit at p and 1-p, roughly 13 binomial standard
// deviations apart at n=100, so no branch-to-branch excursion can fire in
// any feasible run. The check still executes and reports what it saw.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcamf/detail/exact_oracle.hpp"
#include "pcamf/pcamf.hpp"

namespace pcamf::acceptance {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t seed = 97;
    int threads = 0; // 0 = hardware concurrency
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Failure {
    std::ostringstream msg;
    bool failed = false;

    template <typename T>
    void expect(bool ok, const T& what) {
        if (!ok) {
            if (failed) msg << "; ";
            msg << what;
            failed = true;
        }
    }
};

inline std::vector<double> rho_grid(int points) {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
    return g;
}

// ---- 1. grid gamma=5 critical point at 7/30 ------------------------------
inline CheckResult check_critical_point() {
    CheckResult r{1, "critical point gamma=5 equals 7/30", false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    auto family = [](double p) { return MeanFieldMap::grid(5, p, 100); };
    const auto pc = critical_point(family);
    f.expect(pc.has_value(), "no critical point found");
    if (pc) f.expect(std::fabs(*pc - 7.0 / 30.0) <= 1e-6,
                     "p_crit=" + std::to_string(*pc) + " not within 1e-6 of 7/30");
    r.seconds = seconds_since(t0);
    f.expect(r.seconds < 1.0, "took " + std::to_string(r.seconds) + "s (budget 1s)");
    r.pass = !f.failed;
    std::ostringstream d;
    d << "p_crit=" << (pc ? *pc : -1.0) << " target=" << 7.0 / 30.0;
    r.detail = f.failed ? f.msg.str() : d.str();
    return r;
}

// ---- 2. critical point grows with gamma ----------------------------------
inline CheckResult check_monotone_critical_point() {
    CheckResult r{2, "critical point monotone in gamma (5 < 15 < 0.5)", false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    auto fam = [](int gamma) {
        return [gamma](double p) { return MeanFieldMap::grid(gamma, p, 100); };
    };
    const auto p5 = critical_point(fam(5));
    const auto p15 = critical_point(fam(15));
    f.expect(p5 && p15, "critical point missing");
    if (p5 && p15) {
        f.expect(*p5 < *p15, "p_crit(5) >= p_crit(15)");
        f.expect(*p15 < 0.5, "p_crit(15) >= 0.5");
    }
    r.seconds = seconds_since(t0);
    f.expect(r.seconds < 5.0, "took " + std::to_string(r.seconds) + "s (budget 5s)");
    r.pass = !f.failed;
    std::ostringstream d;
    d << "p_crit(5)=" << (p5 ? *p5 : -1) << " p_crit(15)=" << (p15 ? *p15 : -1);
    r.detail = f.failed ? f.msg.str() : d.str();
    return r;
}

// ---- 3. fixed-point structure below/above the critical point -------------
inline CheckResult check_fixed_point_structure() {
    CheckResult r{3, "fixed-point structure gamma=5 at p=0.15 / p=0.35", false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    const auto low = find_fixed_points(MeanFieldMap::grid(5, 0.15, 100));
    f.expect(low.size() == 3, "p=0.15: expected 3 fixed points, got " + std::to_string(low.size()));
    if (low.size() == 3) {
        f.expect(low[0].stability == Stability::attracting, "p=0.15: lower branch not attracting");
        f.expect(low[1].stability == Stability::repelling, "p=0.15: centre not repelling");
        f.expect(low[2].stability == Stability::attracting, "p=0.15: upper branch not attracting");
        f.expect(std::fabs(low[1].rho_star - 0.5) <= 1e-8, "p=0.15: centre not at 0.5");
        f.expect(std::fabs(low[0].rho_star + low[2].rho_star - 1.0) <= 1e-8,
                 "p=0.15: branches not symmetric about 0.5");
    }
    const auto high = find_fixed_points(MeanFieldMap::grid(5, 0.35, 100));
    f.expect(high.size() == 1, "p=0.35: expected 1 fixed point, got " + std::to_string(high.size()));
    if (high.size() == 1) {
        f.expect(high[0].stability == Stability::attracting, "p=0.35: 0.5 not attracting");
        f.expect(std::fabs(high[0].rho_star - 0.5) <= 1e-8, "p=0.35: fixed point not at 0.5");
    }
    r.seconds = seconds_since(t0);
    r.pass = !f.failed;
    std::ostringstream d;
    if (low.size() == 3)
        d << "p=0.15 branches " << low[0].rho_star << "/" << low[2].rho_star
          << " slope(0.5)=" << low[1].slope;
    r.detail = f.failed ? f.msg.str() : d.str();
    return r;
}

// ---- 4. random-graph map equivalence sharpens with n ----------------------
inline CheckResult check_rg_map_equivalence() {
    CheckResult r{4, "sup|p_rg - p_grid_nu| shrinks with n and respects the bound", false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    const auto grid = rho_grid(101);
    std::ostringstream d;
    for (double p : {0.1, 0.3}) {
        double sup[2] = {0.0, 0.0};
        const int ns[2] = {25, 100};
        for (int i = 0; i < 2; ++i) {
            for (double rho : grid)
                sup[i] = std::max(sup[i], std::fabs(p_rg(ns[i], 0.4, p, rho) -
                                                    p_grid_nu(ns[i], 0.4, p, rho)));
            const double bound = rg_error_bound(ns[i], 0.4, p, default_eps_rg(ns[i], 0.4));
            f.expect(sup[i] <= bound, "bound violated at n=" + std::to_string(ns[i]));
        }
        f.expect(sup[1] < sup[0], "sup at n=100 not smaller (p=" + std::to_string(p) + ")");
        d << "p=" << p << ": sup25=" << sup[0] << " sup100=" << sup[1] << "  ";
    }
    r.seconds = seconds_since(t0);
    r.pass = !f.failed;
    r.detail = f.failed ? f.msg.str() : d.str();
    return r;
}

// ---- 5. small-world analogue with the Corollary-1 bound -------------------
// The literal truncated pair has an n-independent sup of 1-p at rho=1 (the
// inner sum excludes r=k), so the shrinkage statement is checked on the
// extended mode; the bound must hold in both modes and the literal sups are
// reported.
inline CheckResult check_sw_map_equivalence() {
    CheckResult r{5, "sup|p_rg_gamma - p_grid_gamma_nu| (extended) shrinks with n, bound holds",
                  false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    const auto grid = rho_grid(101);
    std::ostringstream d;
    for (double pw : {0.3, 0.4})
        for (double p : {0.1, 0.3}) {
            double sup_ext[2] = {0.0, 0.0}, sup_lit[2] = {0.0, 0.0};
            const int ns[2] = {25, 100};
            for (int i = 0; i < 2; ++i) {
                for (double rho : grid) {
                    sup_ext[i] = std::max(
                        sup_ext[i],
                        std::fabs(p_rg_gamma(ns[i], 4, pw, p, rho, SwSumMode::extended) -
                                  p_grid_gamma_nu(ns[i], 4, pw, p, rho, SwSumMode::extended)));
                    sup_lit[i] = std::max(
                        sup_lit[i],
                        std::fabs(p_rg_gamma(ns[i], 4, pw, p, rho, SwSumMode::literal) -
                                  p_grid_gamma_nu(ns[i], 4, pw, p, rho, SwSumMode::literal)));
                }
                const double bound = sw_error_bound(ns[i], 4, pw, p, default_eps_sw(ns[i], 4, pw));
                f.expect(sup_ext[i] <= bound && sup_lit[i] <= bound,
                         "bound violated at n=" + std::to_string(ns[i]));
            }
            f.expect(sup_ext[1] < sup_ext[0],
                     "extended sup at n=100 not smaller (pw=" + std::to_string(pw) +
                         ", p=" + std::to_string(p) + ")");
            d << "pw=" << pw << " p=" << p << ": ext " << sup_ext[0] << "->" << sup_ext[1]
              << " (literal " << sup_lit[0] << "->" << sup_lit[1] << ")  ";
        }
    r.seconds = seconds_since(t0);
    r.pass = !f.failed;
    r.detail = f.failed ? f.msg.str() : d.str();
    return r;
}

// ---- 6. exact-oracle equivalence of every map -----------------------------
inline CheckResult check_oracle_equivalence() {
    CheckResult r{6, "maps match the exact rational oracle to 1e-12; derivative matches FD",
                  false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    double worst = 0.0;
    const auto grid = rho_grid(21);
    auto track = [&](double rel, const char* what) {
        worst = std::max(worst, rel);
        f.expect(rel <= 1e-12, std::string(what) + " rel err " + std::to_string(rel));
    };

    for (const auto& [gamma, p] : std::vector<std::pair<int, double>>{
             {4, 0.2}, {5, 0.15}, {5, 0.35}, {15, 0.1}}) {
        const auto pr = oracle::from_double(p);
        for (double rho : grid)
            track(oracle::relative_error(p_grid(gamma, p, rho),
                                         oracle::p_grid(gamma, pr, oracle::from_double(rho))),
                  "p_grid");
    }
    for (const auto& [n, pe, p] : std::vector<std::tuple<int, double, double>>{
             {12, 0.4, 0.2}, {25, 0.3, 0.1}, {50, 0.5, 0.35}}) {
        const auto per = oracle::from_double(pe), pr = oracle::from_double(p);
        const int nu = nu_random(n, pe);
        for (double rho : grid) {
            const auto rr = oracle::from_double(rho);
            track(oracle::relative_error(p_rg(n, pe, p, rho), oracle::p_rg(n, per, pr, rr)),
                  "p_rg");
            track(oracle::relative_error(p_grid_nu(n, pe, p, rho), oracle::p_grid(nu, pr, rr)),
                  "p_grid_nu");
            track(oracle::relative_error(p_grid_pe(n, pe, p, rho),
                                         oracle::p_grid_pe(n, nu, per, pr, rr)),
                  "p_grid_pe");
        }
    }
    for (const auto& [n, pw, p] : std::vector<std::tuple<int, double, double>>{
             {25, 0.3, 0.1}, {50, 0.5, 0.35}}) {
        const auto pwr = oracle::from_double(pw), pr = oracle::from_double(p);
        const int nu = nu_smallworld(n, 4, pw);
        for (double rho : grid) {
            const auto rr = oracle::from_double(rho);
            for (bool literal : {true, false}) {
                const auto mode = literal ? SwSumMode::literal : SwSumMode::extended;
                track(oracle::relative_error(p_sw_full(n, 4, pw, p, rho, mode),
                                             oracle::p_sw_full(n, 4, pwr, pr, rr, literal)),
                      "p_sw_full");
                track(oracle::relative_error(p_sw_composite(n, 4, pw, p, rho, mode),
                                             oracle::p_sw_composite(n, 4, nu, pwr, pr, rr, literal)),
                      "p_sw_composite");
            }
        }
    }
    // analytic derivative vs central finite differences of the map
    double worst_fd = 0.0;
    for (int gamma : {4, 5, 15})
        for (double p : {0.15, 0.35})
            for (double rho = 0.01; rho < 0.995; rho += 0.02) {
                const double h = 1e-6;
                const double fd = (p_grid(gamma, p, rho + h) - p_grid(gamma, p, rho - h)) / (2 * h);
                worst_fd = std::max(worst_fd, std::fabs(mf_derivative(gamma, p, rho) - fd));
            }
    f.expect(worst_fd <= 1e-6, "derivative vs FD gap " + std::to_string(worst_fd));
    r.seconds = seconds_since(t0);
    r.pass = !f.failed;
    std::ostringstream d;
    d << "worst map rel err " << worst << ", worst derivative-FD gap " << worst_fd;
    r.detail = f.failed ? f.msg.str() : d.str();
    return r;
}

// ---- 7. transition kernels -------------------------------------------------
inline CheckResult check_kernels() {
    CheckResult r{7, "kernel rows stochastic, odd-gamma symmetry exact, stationary consistent",
                  false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    auto row_sums_ok = [&](const TransitionKernel& K) {
        for (int k = 0; k <= K.n(); ++k) {
            KahanSum s;
            for (double v : K.row(k)) {
                if (v < 0.0) return false;
                s.add(v);
            }
            if (std::fabs(s.value() - 1.0) > 1e-12) return false;
        }
        return true;
    };
    const auto K16 = build_kernel(16, MeanFieldMap::grid(5, 0.15, 16));
    const auto K16e = build_kernel(16, MeanFieldMap::grid(4, 0.2, 16));
    const auto K100 = build_kernel(100, MeanFieldMap::rg_nu(100, 0.5, 0.3));
    f.expect(row_sums_ok(K16), "row sums off (n=16, gamma=5)");
    f.expect(row_sums_ok(K16e), "row sums off (n=16, gamma=4)");
    f.expect(row_sums_ok(K100), "row sums off (n=100, rg_nu)");
    for (const auto* K : {&K16, &K100}) {
        bool exact = true;
        for (int k = 0; k <= K->n(); ++k)
            for (int rr = 0; rr <= K->n(); ++rr)
                if ((*K)(k, rr) != (*K)(K->n() - k, K->n() - rr)) exact = false;
        f.expect(exact, "odd-gamma symmetry not exact");
    }
    for (double p : {0.15, 0.35}) {
        const auto K = build_kernel(16, MeanFieldMap::grid(4, p, 16));
        const auto pi = stationary(K);
        const auto next = pcamf::detail::kernel_step(K, pi);
        double l1 = 0.0;
        for (std::size_t i = 0; i < pi.size(); ++i) l1 += std::fabs(next[i] - pi[i]);
        f.expect(l1 < 1e-10, "stationary residual " + std::to_string(l1));
    }
    r.seconds = seconds_since(t0);
    r.pass = !f.failed;
    r.detail = f.failed ? f.msg.str() : "all kernels stochastic, symmetric, stationary residual < 1e-10";
    return r;
}

// ---- 8. Chernov interval coverage -----------------------------------------
inline CheckResult check_chernov_coverage(const Options& opt) {
    CheckResult r{8, "Chernov interval: 2.72 sigma multiplier, empirical coverage >= 0.95",
                  false, "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    const double mult = std::sqrt(2.0 * std::log(2.0 / 0.05));
    f.expect(std::fabs(mult - 2.72) <= 0.005,
             "multiplier " + std::to_string(mult) + " not 2.72 to 3 figures");
    std::ostringstream d;
    d << "multiplier=" << mult;
    for (double mu : {0.1, 0.3, 0.5})
        for (int n : {16, 100}) {
            const Interval iv = chernov_interval(mu, n, 0.05);
            const int draws = 10000;
            int inside = 0;
            for (int i = 0; i < draws; ++i) {
                int count = 0;
                for (int x = 0; x < n; ++x)
                    count += bernoulli(mu, opt.seed, RngStream::chain,
                                       static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(x))
                                 ? 1
                                 : 0;
                if (iv.contains(static_cast<double>(count) / n)) ++inside;
            }
            const double cov = static_cast<double>(inside) / draws;
            f.expect(cov >= 0.95, "coverage " + std::to_string(cov) + " at mu=" +
                                      std::to_string(mu) + " n=" + std::to_string(n));
            d << "  (" << mu << "," << n << ")=" << cov;
        }
    r.seconds = seconds_since(t0);
    r.pass = !f.failed;
    r.detail = f.failed ? f.msg.str() : d.str();
    return r;
}

// ---- 9. Table-style coverage reproduction ---------------------------------
inline CheckResult check_table_coverage(const Options& opt) {
    CheckResult r{9, "coverage: rg n=100 pe=0.5 T=5000 (dip at p=0.3), sw n=100 pw=0.5", false,
                  "", 0.0};
    const auto t0 = Clock::now();
    Failure f;
    std::ostringstream d;

    SweepConfig cfg;
    cfg.kinds = {TopologyKind::random_graph};
    cfg.n_values = {100};
    cfg.t_values = {5000};
    cfg.p_values = {0.1, 0.2, 0.3, 0.4, 0.5};
    cfg.p_edge_values = {0.5};
    cfg.runs = 100;
    cfg.base_seed = opt.seed;
    cfg.rho0 = 0.5;
    cfg.threads = opt.threads;
    const auto rg_rows = coverage_table(cfg);
    double dip = -1.0, min_other = 2.0;
    d << "rg:";
    for (const auto& row : rg_rows) {
        f.expect(row.valid, "invalid rg row: " + row.note);
        d << " p=" << row.p << ":" << row.coverage95;
        if (std::fabs(row.p - 0.3) < 1e-9) dip = row.coverage95;
        else {
            min_other = std::min(min_other, row.coverage95);
            f.expect(row.coverage95 >= 0.90,
                     "rg coverage95 " + std::to_string(row.coverage95) + " < 0.90 at p=" +
                         std::to_string(row.p));
        }
    }
    f.expect(dip >= 0.84 && dip <= 0.98, "p=0.3 coverage " + std::to_string(dip) +
                                             " outside 0.91 +/- 0.07");
    f.expect(dip <= min_other, "p=0.3 is not the coverage dip");

    cfg.kinds = {TopologyKind::smallworld};
    cfg.p_wire_values = {0.5};
    const auto sw_rows = coverage_table(cfg);
    d << "  sw:";
    for (const auto& row : sw_rows) {
        f.expect(row.valid, "invalid sw row: " + row.note);
        d << " p=" << row.p << ":" << row.coverage95;
        f.expect(row.coverage95 >= 0.94 - 0.05,
                 "sw coverage95 " + std::to_string(row.coverage95) + " < 0.89 at p=" +
                     std::to_string(row.p));
    }
    r.seconds = seconds_since(t0);
    r.pass = !f.failed;
    r.detail = (f.failed ? f.msg.str() + "  " : "") + d.str();
    return r;
}

// ---- 10. phase-transition witness ------------------------------------------
inline CheckResult check_phase_transition_witness(const Options& opt) {
    CheckResult r{10, "small-world branch-to-branch jump (n=100, pw=0.9, p=0.1, T=5e4, 20 seeds)",
                  false, "", 0.0};
    const auto t0 = Clock::now();
    const int n_seeds = 20, T = 50000;
    std::vector<int> cuts(n_seeds, 0), jumps(n_seeds, 0);
    std::vector<double> max_steps(n_seeds, 0.0);
    std::vector<std::uint64_t> seeds(n_seeds, 0);
    pcamf::detail::parallel_for(n_seeds, opt.threads, [&](int i) {
        const std::uint64_t seed = counter_hash(opt.seed, RngStream::run, 1000 + i);
        seeds[static_cast<std::size_t>(i)] = seed;
        const Graph g = build_smallworld(100, 4, 0.9, derive_seed(seed, RngStream::graph));
        const DensitySeries s = run(g, RuleParams(0.1), std::nullopt, T, seed);
        const auto means = snippets(s, 0.4);
        cuts[static_cast<std::size_t>(i)] = static_cast<int>(means.size()) - 1;
        for (std::size_t j = 0; j + 1 < means.size(); ++j)
            if ((means[j] - 0.5) * (means[j + 1] - 0.5) < 0.0)
                ++jumps[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t + 1 < s.values.size(); ++t)
            max_steps[static_cast<std::size_t>(i)] =
                std::max(max_steps[static_cast<std::size_t>(i)],
                         std::fabs(s.values[t + 1] - s.values[t]));
    });
    int total_cuts = 0, total_jumps = 0;
    double max_step = 0.0;
    std::vector<std::uint64_t> jump_seeds;
    for (int i = 0; i < n_seeds; ++i) {
        total_cuts += cuts[static_cast<std::size_t>(i)];
        total_jumps += jumps[static_cast<std::size_t>(i)];
        max_step = std::max(max_step, max_steps[static_cast<std::size_t>(i)]);
        if (jumps[static_cast<std::size_t>(i)] > 0)
            jump_seeds.push_back(seeds[static_cast<std::size_t>(i)]);
    }
    r.seconds = seconds_since(t0);
    r.pass = total_jumps >= 1;
    std::ostringstream d;
    d << "jumps=" << total_jumps << " cuts=" << total_cuts << " max one-step |drho|=" << max_step
      << " over " << n_seeds << " seeds (base " << opt.seed << ")";
    if (!jump_seeds.empty()) {
        d << "; jump seeds:";
        for (auto s : jump_seeds) d << " " << s;
    } else {
        d << "; no witness: with per-pair NW shortcuts every node has degree ~90, the branches "
             "sit at 0.1/0.9 and a crossing needs a ~13 sigma density fluctuation";
    }
    r.detail = d.str();
    return r;
}

// ---- 11. byte-identical sweeps ---------------------------------------------
inline CheckResult check_determinism(const Options& opt) {
    CheckResult r{11, "identical sweep config produces byte-identical CSV", false, "", 0.0};
    const auto t0 = Clock::now();
    SweepConfig cfg;
    cfg.kinds = {TopologyKind::torus, TopologyKind::random_graph};
    cfg.n_values = {16};
    cfg.t_values = {50};
    cfg.p_values = {0.1, 0.3};
    cfg.p_edge_values = {0.5};
    cfg.runs = 10;
    cfg.base_seed = opt.seed;
    cfg.threads = opt.threads;
    std::ostringstream a, b;
    write_coverage_csv(a, coverage_table(cfg));
    write_coverage_csv(b, coverage_table(cfg));
    r.pass = !a.str().empty() && a.str() == b.str();
    r.seconds = seconds_since(t0);
    r.detail = r.pass ? "two sweeps, " + std::to_string(a.str().size()) + " bytes each, identical"
                      : "outputs differ";
    return r;
}

} // namespace detail

inline std::vector<CheckResult> run_all(std::ostream& log, const Options& opt = {}) {
    using namespace detail;
    std::vector<CheckResult> results;
    const std::vector<std::function<CheckResult()>> checks{
        [] { return check_critical_point(); },
        [] { return check_monotone_critical_point(); },
        [] { return check_fixed_point_structure(); },
        [] { return check_rg_map_equivalence(); },
        [] { return check_sw_map_equivalence(); },
        [] { return check_oracle_equivalence(); },
        [] { return check_kernels(); },
        [&] { return check_chernov_coverage(opt); },
        [&] { return check_table_coverage(opt); },
        [&] { return check_phase_transition_witness(opt); },
        [&] { return check_determinism(opt); },
    };
    for (const auto& c : checks) {
        CheckResult res;
        try {
            res = c();
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        log << (res.pass ? "PASS" : "FAIL") << "  [" << res.id << "] " << res.name << " ("
            << res.seconds << "s)\n      " << res.detail << "\n";
        results.push_back(std::move(res));
    }
    int failed = 0;
    for (const auto& res : results)
        if (!res.pass) ++failed;
    log << (failed == 0 ? "all checks passed\n"
                        : std::to_string(failed) + " check(s) failed\n");
    return results;
}

inline bool all_passed(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return false;
    return true;
}

} // namespace pcamf::acceptance
