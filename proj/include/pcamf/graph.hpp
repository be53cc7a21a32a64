// Graph substrates for the PCA: torus lattices, Erdos-Renyi random graphs
// and Newman-Watts small worlds, all built deterministically from a seed.
//
// A Graph is an immutable CSR adjacency structure: symmetric, loop-free,
// duplicate-free, neighbours sorted per node. Edge sampling is keyed by
// (seed, pair index) so construction is order-independent.
#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcamf/numeric.hpp"
#include "pcamf/rng.hpp"

namespace pcamf {

enum class TopologyKind { torus, random_graph, smallworld };

inline std::string_view kind_tag(TopologyKind k) noexcept {
    switch (k) {
        case TopologyKind::torus: return "torus";
        case TopologyKind::random_graph: return "random";
        case TopologyKind::smallworld: return "smallworld";
    }
    return "?";
}

inline TopologyKind kind_from_tag(std::string_view tag) {
    if (tag == "torus") return TopologyKind::torus;
    if (tag == "random") return TopologyKind::random_graph;
    if (tag == "smallworld") return TopologyKind::smallworld;
    throw std::invalid_argument("unknown topology tag: " + std::string(tag));
}

class Graph {
public:
    Graph(int n, TopologyKind kind, const std::vector<std::vector<std::int32_t>>& adjacency)
        : n_(n), kind_(kind) {
        offsets_.reserve(static_cast<std::size_t>(n) + 1);
        offsets_.push_back(0);
        for (int x = 0; x < n; ++x) {
            const auto& nb = adjacency[static_cast<std::size_t>(x)];
            for (std::size_t i = 0; i < nb.size(); ++i) {
                const std::int32_t y = nb[i];
                if (y < 0 || y >= n) throw std::invalid_argument("Graph: neighbour out of range");
                if (y == x) throw std::invalid_argument("Graph: self-loop");
                if (i > 0 && nb[i - 1] >= y)
                    throw std::invalid_argument("Graph: neighbours must be sorted and unique");
                neighbors_.push_back(y);
            }
            offsets_.push_back(static_cast<std::int32_t>(neighbors_.size()));
        }
        // symmetry: y in adj[x] <=> x in adj[y]
        for (int x = 0; x < n; ++x)
            for (std::int32_t y : neighbors(x)) {
                const auto row = neighbors(y);
                if (!std::binary_search(row.begin(), row.end(), x))
                    throw std::invalid_argument("Graph: adjacency not symmetric");
            }
    }

    int n() const noexcept { return n_; }
    TopologyKind kind() const noexcept { return kind_; }
    int degree(int x) const noexcept { return offsets_[x + 1] - offsets_[x]; }
    std::span<const std::int32_t> neighbors(int x) const noexcept {
        return {neighbors_.data() + offsets_[x], static_cast<std::size_t>(degree(x))};
    }
    std::int64_t edge_count() const noexcept {
        return static_cast<std::int64_t>(neighbors_.size()) / 2;
    }

    bool operator==(const Graph& o) const noexcept {
        return n_ == o.n_ && kind_ == o.kind_ && offsets_ == o.offsets_ && neighbors_ == o.neighbors_;
    }

private:
    int n_;
    TopologyKind kind_;
    std::vector<std::int32_t> offsets_;
    std::vector<std::int32_t> neighbors_;
};

struct TopologySpec {
    TopologyKind kind = TopologyKind::torus;
    int n = 0;         // node count (random/smallworld); torus uses side
    int side = 0;      // torus lattice side
    int gamma = 4;     // base neighbourhood size (torus/smallworld)
    double p_edge = 0.0;
    double p_wire = 0.0;
    std::uint64_t seed = 0;

    std::string describe() const {
        std::ostringstream os;
        os << "kind=" << kind_tag(kind);
        if (kind == TopologyKind::torus)
            os << " side=" << side << " gamma=" << gamma;
        else
            os << " n=" << n;
        if (kind == TopologyKind::random_graph) os << " p_edge=" << p_edge;
        if (kind == TopologyKind::smallworld) os << " gamma=" << gamma << " p_wire=" << p_wire;
        os << " seed=" << seed;
        return os.str();
    }
};

namespace detail {

// index of unordered pair (u, v), u < v, in lexicographic order
constexpr std::uint64_t pair_index(int n, int u, int v) noexcept {
    const auto un = static_cast<std::uint64_t>(u);
    return un * static_cast<std::uint64_t>(n) - un * (un + 1) / 2 +
           static_cast<std::uint64_t>(v - u - 1);
}

inline Graph from_sets(int n, TopologyKind kind, std::vector<std::vector<std::int32_t>> adj) {
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return Graph(n, kind, adj);
}

// ring lattice: gamma/2 neighbours on each side
inline void add_ring(std::vector<std::vector<std::int32_t>>& adj, int n, int gamma) {
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= gamma / 2; ++d) {
            const int j = (i + d) % n;
            adj[static_cast<std::size_t>(i)].push_back(static_cast<std::int32_t>(j));
            adj[static_cast<std::size_t>(j)].push_back(static_cast<std::int32_t>(i));
        }
}

inline void add_torus2d(std::vector<std::vector<std::int32_t>>& adj, int side, bool moore) {
    auto id = [side](int r, int c) {
        return ((r % side + side) % side) * side + ((c % side + side) % side);
    };
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            const int x = id(r, c);
            auto link = [&](int y) {
                if (y > x) {
                    adj[static_cast<std::size_t>(x)].push_back(static_cast<std::int32_t>(y));
                    adj[static_cast<std::size_t>(y)].push_back(static_cast<std::int32_t>(x));
                }
            };
            link(id(r, c + 1));
            link(id(r + 1, c));
            if (moore) {
                link(id(r + 1, c + 1));
                link(id(r + 1, c - 1));
            }
        }
}

} // namespace detail

// Torus: gamma=4 (von Neumann) or gamma=8 (Moore) on a side x side lattice;
// any other even gamma builds a 1-D ring of `side` nodes with gamma/2
// neighbours on each side. Periodic wrap must not collapse edges.
inline Graph build_torus(int side, int gamma) {
    if (side < 2) throw std::invalid_argument("build_torus: side must be >= 2");
    if (gamma == 4 || gamma == 8) {
        if (side < 3)
            throw std::invalid_argument("build_torus: side < 3 makes periodic neighbours collide");
        const int n = side * side;
        std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
        detail::add_torus2d(adj, side, gamma == 8);
        return detail::from_sets(n, TopologyKind::torus, std::move(adj));
    }
    if (gamma >= 2 && gamma % 2 == 0) {
        const int n = side;
        if (gamma > n - 2)
            throw std::invalid_argument("build_torus: ring gamma too large for n");
        std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
        detail::add_ring(adj, n, gamma);
        return detail::from_sets(n, TopologyKind::torus, std::move(adj));
    }
    throw std::invalid_argument("build_torus: unsupported gamma (need 4, 8 or even ring size)");
}

inline bool is_connected(const Graph& g);

// G_rg(n, p_edge): each unordered pair is an edge independently with
// probability p_edge; the draw for a pair depends only on (seed, pair index).
inline Graph build_random(int n, double p_edge, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("build_random: n must be >= 2");
    if (!(p_edge > 0.0 && p_edge < 1.0))
        throw std::invalid_argument("build_random: p_edge must be in (0,1)");
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (bernoulli(p_edge, seed, RngStream::edge_pair, detail::pair_index(n, u, v))) {
                adj[static_cast<std::size_t>(u)].push_back(static_cast<std::int32_t>(v));
                adj[static_cast<std::size_t>(v)].push_back(static_cast<std::int32_t>(u));
            }
    Graph g = detail::from_sets(n, TopologyKind::random_graph, std::move(adj));
    if (!is_connected(g))
        warn("random graph (n=" + std::to_string(n) + ") is disconnected; the mean-field theory presumes connectivity");
    return g;
}

enum class SmallWorldBase { ring, torus2d };

// Newman-Watts small world: base lattice plus shortcuts. Every unordered
// pair not already in the lattice is added independently with probability
// p_wire; base edges are never removed, so deg(x) >= gamma everywhere.
inline Graph build_smallworld(int n, int gamma, double p_wire, std::uint64_t seed,
                              SmallWorldBase base = SmallWorldBase::ring) {
    if (gamma >= n) throw std::invalid_argument("build_smallworld: gamma must be < n");
    if (!(p_wire > 0.0 && p_wire < 1.0))
        throw std::invalid_argument("build_smallworld: p_wire must be in (0,1)");
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
    if (base == SmallWorldBase::ring) {
        if (gamma < 2 || gamma % 2 != 0 || gamma > n - 2)
            throw std::invalid_argument("build_smallworld: ring base needs even gamma <= n-2");
        detail::add_ring(adj, n, gamma);
    } else {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (side * side != n || side < 3)
            throw std::invalid_argument("build_smallworld: 2-D base needs square n with side >= 3");
        if (gamma != 4 && gamma != 8)
            throw std::invalid_argument("build_smallworld: 2-D base needs gamma 4 or 8");
        detail::add_torus2d(adj, side, gamma == 8);
    }
    // lattice membership for O(1) pair tests
    std::vector<std::vector<std::int32_t>> lattice = adj;
    for (auto& row : lattice) std::sort(row.begin(), row.end());
    for (int u = 0; u < n; ++u) {
        const auto& lu = lattice[static_cast<std::size_t>(u)];
        for (int v = u + 1; v < n; ++v) {
            if (std::binary_search(lu.begin(), lu.end(), v)) continue;
            if (bernoulli(p_wire, seed, RngStream::edge_pair, detail::pair_index(n, u, v))) {
                adj[static_cast<std::size_t>(u)].push_back(static_cast<std::int32_t>(v));
                adj[static_cast<std::size_t>(v)].push_back(static_cast<std::int32_t>(u));
            }
        }
    }
    return detail::from_sets(n, TopologyKind::smallworld, std::move(adj));
}

inline bool is_connected(const Graph& g) {
    if (g.n() == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int x = q.front();
        q.pop();
        for (std::int32_t y : g.neighbors(x))
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                ++count;
                q.push(y);
            }
    }
    return count == g.n();
}

// Smallest edge probability giving P(connected) ~ target_prob:
// P(connected) = exp(-exp(-lambda)) with p_e = (log n + lambda)/n.
inline double connectivity_threshold(int n, double target_prob) {
    if (n < 2) throw std::invalid_argument("connectivity_threshold: n must be >= 2");
    if (!(target_prob > 0.0 && target_prob < 1.0))
        throw std::invalid_argument("connectivity_threshold: target_prob must be in (0,1)");
    const double lambda = -std::log(-std::log(target_prob));
    return (std::log(static_cast<double>(n)) + lambda) / static_cast<double>(n);
}

inline Graph build_graph(const TopologySpec& spec) {
    switch (spec.kind) {
        case TopologyKind::torus: return build_torus(spec.side, spec.gamma);
        case TopologyKind::random_graph: return build_random(spec.n, spec.p_edge, spec.seed);
        case TopologyKind::smallworld:
            return build_smallworld(spec.n, spec.gamma, spec.p_wire, spec.seed);
    }
    throw std::invalid_argument("build_graph: bad kind");
}

// Edge-list text format: header "n=<int> kind=<tag>", then "u v" per edge,
// 0-indexed, u < v, lexicographically sorted. Round-trips bit-exactly.
inline void write_edge_list(std::ostream& os, const Graph& g) {
    os << "n=" << g.n() << " kind=" << kind_tag(g.kind()) << "\n";
    for (int u = 0; u < g.n(); ++u)
        for (std::int32_t v : g.neighbors(u))
            if (v > u) os << u << " " << v << "\n";
}

inline Graph read_edge_list(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::invalid_argument("edge list: missing header");
    int n = 0;
    std::string tag;
    {
        std::istringstream hs(header);
        std::string nfield, kfield;
        hs >> nfield >> kfield;
        if (nfield.rfind("n=", 0) != 0 || kfield.rfind("kind=", 0) != 0)
            throw std::invalid_argument("edge list: bad header: " + header);
        n = std::stoi(nfield.substr(2));
        tag = kfield.substr(5);
    }
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
    int u = 0, v = 0;
    while (is >> u >> v) {
        if (u < 0 || v < 0 || u >= n || v >= n || u >= v)
            throw std::invalid_argument("edge list: bad edge");
        adj[static_cast<std::size_t>(u)].push_back(static_cast<std::int32_t>(v));
        adj[static_cast<std::size_t>(v)].push_back(static_cast<std::int32_t>(u));
    }
    return detail::from_sets(n, kind_from_tag(tag), std::move(adj));
}

} // namespace pcamf
