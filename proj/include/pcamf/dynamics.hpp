// One-dimensional discrete-time dynamics of a mean-field map: orbits,
// fixed points with stability, critical points in p, bifurcation diagrams.
#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pcamf/mean_field.hpp"
#include "pcamf/numeric.hpp"

namespace pcamf {

enum class Stability { attracting, repelling, marginal };

inline std::string_view stability_tag(Stability s) noexcept {
    switch (s) {
        case Stability::attracting: return "attracting";
        case Stability::repelling: return "repelling";
        case Stability::marginal: return "marginal";
    }
    return "?";
}

struct FixedPoint {
    double rho_star = 0.0;
    double slope = 0.0;
    Stability stability = Stability::marginal;
};

// Orbit rho_{k+1} = map(rho_k), clamped to [0,1] against rounding spill.
inline std::vector<double> iterate(const MeanFieldMap& map, double rho0, int steps) {
    if (!(rho0 >= 0.0 && rho0 <= 1.0)) throw std::domain_error("iterate: rho0 must be in [0,1]");
    std::vector<double> orbit;
    orbit.reserve(static_cast<std::size_t>(steps) + 1);
    double rho = rho0;
    orbit.push_back(rho);
    for (int k = 0; k < steps; ++k) {
        rho = clamp01(map(rho));
        orbit.push_back(rho);
    }
    return orbit;
}

namespace detail {

constexpr double kMarginalBand = 1e-6; // |slope|-1 within this band -> marginal

inline Stability classify_slope(double slope) noexcept {
    const double a = std::fabs(slope);
    if (std::fabs(a - 1.0) <= kMarginalBand) return Stability::marginal;
    return a < 1.0 ? Stability::attracting : Stability::repelling;
}

} // namespace detail

// Scan g(rho) = map(rho) - rho for sign changes on a uniform grid and refine
// each bracket by bisection. Continuity on [0,1] guarantees at least one
// fixed point for these maps.
inline std::vector<FixedPoint> find_fixed_points(const MeanFieldMap& map,
                                                 double resolution = 1e-4,
                                                 double tol = 1e-10) {
    if (!(resolution > 0.0 && resolution <= 0.25))
        throw std::invalid_argument("find_fixed_points: bad resolution");
    const int cells = static_cast<int>(std::ceil(1.0 / resolution));
    auto g = [&map](double rho) { return map(rho) - rho; };

    std::vector<double> roots;
    double x0 = 0.0, g0 = g(0.0);
    for (int i = 1; i <= cells; ++i) {
        const double x1 = i == cells ? 1.0 : i * resolution;
        const double g1 = g(x1);
        if (g0 == 0.0) roots.push_back(x0);
        if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
            double a = x0, b = x1, ga = g0;
            while (b - a > tol) {
                const double m = 0.5 * (a + b);
                const double gm = g(m);
                if (gm == 0.0) { a = b = m; break; }
                if ((ga < 0.0) != (gm < 0.0)) b = m;
                else { a = m; ga = gm; }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        g0 = g1;
    }
    if (g0 == 0.0) roots.push_back(1.0);

    std::vector<FixedPoint> out;
    for (double r : roots) {
        if (!out.empty() && std::fabs(out.back().rho_star - r) < 10.0 * tol) continue;
        FixedPoint fp;
        fp.rho_star = r;
        fp.slope = map.derivative(r);
        fp.stability = detail::classify_slope(fp.slope);
        out.push_back(fp);
    }
    return out;
}

// Root of slope(0.5; p) = 1 over p: the pitchfork critical point of a
// symmetric family (odd gamma). nullopt when no sign change exists.
inline std::optional<double> critical_point(
    const std::function<MeanFieldMap(double)>& family, double p_lo = 1e-4, double p_hi = 0.5,
    double tol = 1e-6) {
    auto slope_excess = [&family](double p) { return family(p).derivative(0.5) - 1.0; };
    double ga = slope_excess(p_lo), gb = slope_excess(p_hi);
    if (ga == 0.0) return p_lo;
    if (gb == 0.0) return p_hi;
    if ((ga < 0.0) == (gb < 0.0)) return std::nullopt; // no bifurcation detected
    double a = p_lo, b = p_hi;
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double gm = slope_excess(m);
        if (gm == 0.0) return m;
        if ((ga < 0.0) != (gm < 0.0)) b = m;
        else { a = m; ga = gm; }
    }
    return 0.5 * (a + b);
}

struct BifurcationDiagram {
    std::vector<double> p_values;
    // per p: `keep` tail samples from rho0 followed by `keep` from 1-rho0
    std::vector<std::vector<double>> attractor_samples;
    std::vector<std::vector<FixedPoint>> fixed_points;
    int keep = 50;
    std::string meta;
};

inline std::vector<double> default_p_sweep(double lo = 0.005, double hi = 0.5,
                                           double step = 0.005) {
    std::vector<double> ps;
    for (int i = 0;; ++i) {
        const double p = lo + i * step;
        if (p > hi + 1e-12) break;
        ps.push_back(p < hi ? p : hi);
    }
    return ps;
}

// Iterate each p column from rho0 and from 1-rho0 (both branches of a
// symmetric split show up this way), discard the transient, keep the tail.
inline BifurcationDiagram bifurcation(const std::function<MeanFieldMap(double)>& family,
                                      const std::vector<double>& p_values, int transient = 1000,
                                      int keep = 50, double rho0 = 0.25) {
    if (transient < 0 || keep < 1) throw std::invalid_argument("bifurcation: bad transient/keep");
    BifurcationDiagram d;
    d.p_values = p_values;
    d.keep = keep;
    d.attractor_samples.resize(p_values.size());
    d.fixed_points.resize(p_values.size());
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        const MeanFieldMap map = family(p_values[i]);
        auto& samples = d.attractor_samples[i];
        samples.reserve(2 * static_cast<std::size_t>(keep));
        for (double start : {rho0, 1.0 - rho0}) {
            double rho = start;
            for (int k = 0; k < transient; ++k) rho = clamp01(map(rho));
            for (int k = 0; k < keep; ++k) {
                rho = clamp01(map(rho));
                samples.push_back(rho);
            }
        }
        d.fixed_points[i] = find_fixed_points(map);
        d.meta = map.describe();
    }
    return d;
}

inline void write_diagram_csv(std::ostream& os, const BifurcationDiagram& d) {
    os << "p,sample_index,rho\n";
    for (std::size_t i = 0; i < d.p_values.size(); ++i)
        for (std::size_t j = 0; j < d.attractor_samples[i].size(); ++j)
            os << d.p_values[i] << "," << j << "," << d.attractor_samples[i][j] << "\n";
}

inline void write_fixed_points_csv(std::ostream& os, const BifurcationDiagram& d) {
    os << "p,rho_star,slope,stability\n";
    for (std::size_t i = 0; i < d.p_values.size(); ++i)
        for (const FixedPoint& fp : d.fixed_points[i])
            os << d.p_values[i] << "," << fp.rho_star << "," << fp.slope << ","
               << stability_tag(fp.stability) << "\n";
}

} // namespace pcamf
