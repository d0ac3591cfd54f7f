#pragma once

#include <random>
#include <string>
#include <vector>

#include "mg/graph.hpp"
#include "mg/scalar.hpp"

namespace fixtures {

template <class S>
mg::MetrizedGraph<S> build(int vertices, std::vector<mg::Edge<S>> edges) {
    std::vector<std::string> names;
    for (int i = 1; i <= vertices; ++i) names.push_back("v" + std::to_string(i));
    return mg::MetrizedGraph<S>(std::move(names), std::move(edges));
}

/// Circle graph on three vertices, edge order (v1,v2), (v1,v3), (v2,v3).
template <class S>
mg::MetrizedGraph<S> circle(S a, S b, S c) {
    return build<S>(3, {{"e1", 0, 1, std::move(a)},
                        {"e2", 0, 2, std::move(b)},
                        {"e3", 1, 2, std::move(c)}});
}

/// Tree on six vertices, edge order (v1,v3), (v2,v3), (v3,v4), (v4,v5), (v4,v6).
template <class S>
mg::MetrizedGraph<S> tree(S a, S b, S c, S d, S e) {
    return build<S>(6, {{"e1", 0, 2, std::move(a)},
                        {"e2", 1, 2, std::move(b)},
                        {"e3", 2, 3, std::move(c)},
                        {"e4", 3, 4, std::move(d)},
                        {"e5", 3, 5, std::move(e)}});
}

/// Unit tetrahedron, edge order (v1,v2), (v1,v3), (v1,v4), (v2,v3), (v2,v4), (v3,v4).
template <class S>
mg::MetrizedGraph<S> tetrahedron() {
    return build<S>(4, {{"e1", 0, 1, S(1)},
                        {"e2", 0, 2, S(1)},
                        {"e3", 0, 3, S(1)},
                        {"e4", 1, 2, S(1)},
                        {"e5", 1, 3, S(1)},
                        {"e6", 2, 3, S(1)}});
}

template <class S>
mg::MetrizedGraph<S> single_edge(S len) {
    return build<S>(2, {{"e1", 0, 1, std::move(len)}});
}

/// Mixed fixture exercising every formula branch: a triangle core and a
/// pendant path of two bridges.
/// Vertices v1..v5; edges: triangle (v1,v2,v3), bridges v3-v4 and v4-v5.
template <class S>
mg::MetrizedGraph<S> kite() {
    return build<S>(5, {{"e1", 0, 1, S(1)},
                        {"e2", 0, 2, S(2)},
                        {"e3", 1, 2, S(2)},
                        {"e4", 2, 3, S(1)},
                        {"e5", 3, 4, S(3)}});
}

/// Scalar-independent description of a random test graph. Lengths are
/// small-denominator rationals so both arithmetic modes see the same graph.
struct RandomGraph {
    int vertices = 0;
    struct E {
        int p, q, num, den;
    };
    std::vector<E> edges;
};

inline RandomGraph random_graph(std::mt19937_64& rng, int min_v = 3, int max_v = 8,
                                int max_e = 16, bool allow_degenerate = true) {
    RandomGraph d;
    std::uniform_int_distribution<int> vcount(min_v, max_v);
    d.vertices = vcount(rng);
    std::uniform_int_distribution<int> num(1, 12), den(1, 8);
    // random spanning tree keeps it connected
    for (int v = 1; v < d.vertices; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        d.edges.push_back({parent(rng), v, num(rng), den(rng)});
    }
    std::uniform_int_distribution<int> extra_count(0, std::max(0, std::min(max_e - (d.vertices - 1), d.vertices + 2)));
    int extras = extra_count(rng);
    std::uniform_int_distribution<int> pick(0, d.vertices - 1);
    std::uniform_int_distribution<int> kind(0, 9);
    for (int i = 0; i < extras; ++i) {
        int p = pick(rng);
        int q = pick(rng);
        if (!allow_degenerate && p == q) q = (q + 1) % d.vertices;
        // occasional forced self-loop to exercise refinement
        if (allow_degenerate && kind(rng) == 0) q = p;
        d.edges.push_back({p, q, num(rng), den(rng)});
    }
    return d;
}

template <class S>
mg::MetrizedGraph<S> instantiate(const RandomGraph& d) {
    std::vector<mg::Edge<S>> edges;
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        const auto& e = d.edges[i];
        edges.push_back(mg::Edge<S>{"e" + std::to_string(i + 1), e.p, e.q,
                                    S(e.num) / S(e.den)});
    }
    return build<S>(d.vertices, std::move(edges));
}

/// Random point on the graph in original coordinates: a vertex one time in
/// five, otherwise a lattice offset m/16 of a random edge (endpoints
/// included, so canonicalization gets exercised).
template <class S>
mg::Point<S> random_point(std::mt19937_64& rng, const mg::MetrizedGraph<S>& g) {
    std::uniform_int_distribution<int> kind(0, 4);
    if (g.edge_count() == 0 || kind(rng) == 0) {
        std::uniform_int_distribution<int> v(0, g.vertex_count() - 1);
        return mg::Point<S>::at_vertex(v(rng));
    }
    std::uniform_int_distribution<int> e(0, g.edge_count() - 1);
    std::uniform_int_distribution<int> m(0, 16);
    int edge = e(rng);
    S off = g.edge(edge).length * S(m(rng)) / S(16);
    return g.canonical(mg::Point<S>::on_edge(edge, std::move(off)));
}

}  // namespace fixtures
