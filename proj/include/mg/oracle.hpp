#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mg/errors.hpp"
#include "mg/graph.hpp"
#include "mg/laplacian.hpp"
#include "mg/network.hpp"
#include "mg/scalar.hpp"

namespace mg {
namespace detail {

/// Graph with a set of interior points inserted as genuine valence-2
/// vertices, plus the vertex index realizing each requested point.
template <class S>
struct Insertion {
    MetrizedGraph<S> graph;
    std::vector<int> vertex_of_point;
};

template <class S>
Insertion<S> insert_points(const MetrizedGraph<S>& g, const std::vector<Point<S>>& points) {
    std::vector<std::vector<S>> cuts(g.edge_count());
    std::map<std::pair<int, S>, int> interior_vertex;
    std::vector<Point<S>> canon;
    canon.reserve(points.size());
    for (const Point<S>& p : points) {
        Point<S> cp = g.canonical(p);
        canon.push_back(cp);
        if (!cp.is_vertex()) interior_vertex.emplace(std::pair<int, S>(cp.edge, cp.offset), -1);
    }
    for (const auto& [key, unused] : interior_vertex) cuts[key.first].push_back(key.second);

    std::vector<std::string> names = g.vertex_names();
    std::vector<Edge<S>> edges;
    int counter = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge<S>& ed = g.edge(e);
        if (cuts[e].empty()) {
            edges.push_back(ed);
            continue;
        }
        int prev = ed.p;
        S prev_off(0);
        int piece = 0;
        for (const S& off : cuts[e]) {  // std::map already sorted offsets
            int v = static_cast<int>(names.size());
            names.push_back(ed.id + "@" + std::to_string(++counter));
            interior_vertex[{e, off}] = v;
            edges.push_back(Edge<S>{ed.id + "@s" + std::to_string(++piece), prev, v,
                                    off - prev_off});
            prev = v;
            prev_off = off;
        }
        edges.push_back(
            Edge<S>{ed.id + "@s" + std::to_string(++piece), prev, ed.q, ed.length - prev_off});
    }

    Insertion<S> out{MetrizedGraph<S>(std::move(names), std::move(edges)), {}};
    out.vertex_of_point.reserve(canon.size());
    for (const Point<S>& cp : canon)
        out.vertex_of_point.push_back(cp.is_vertex()
                                          ? cp.vertex
                                          : interior_vertex.at({cp.edge, cp.offset}));
    return out;
}

}  // namespace detail

/// Pairwise resistances between arbitrary points, computed by inserting the
/// interior points as subdivision vertices and rerunning the Laplacian
/// pipeline on the enlarged graph. Subdivision at valence-2 points leaves
/// the metric structure, hence every resistance, unchanged — this shares no
/// code with the piecewise closed forms beyond the Laplacian routines.
template <class S>
DenseMatrix<S> oracle_resistance(const MetrizedGraph<S>& g, const std::vector<Point<S>>& points) {
    detail::Insertion<S> ins = detail::insert_points(g, points);
    DenseMatrix<S> pinv = pseudo_inverse(build_laplacian(ins.graph));
    const int n = static_cast<int>(points.size());
    DenseMatrix<S> out = DenseMatrix<S>::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            S v = resistance(pinv, ins.vertex_of_point[i], ins.vertex_of_point[j]);
            out(i, j) = v;
            out(j, i) = std::move(v);
        }
    return out;
}

/// The exact discretization defect of oracle_tau: the slope of r along an
/// edge is linear, so the squared slope is quadratic and the secant rule
/// misses exactly A^2 L^3 / (12 k^2) per non-bridge edge, where
/// A = (L - r(endpoints)) / L^2. In exact arithmetic
/// oracle_tau(g, k) == tau_constant(g) - tau_quadrature_defect(g, k).
template <class S>
S tau_quadrature_defect(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, int k) {
    S acc(0);
    for (int e = 0; e < g.edge_count(); ++e) {
        if (g.is_bridge(e)) continue;
        const Edge<S>& ed = g.edge(e);
        const S& len = ed.length;
        S a = (len - resistance(pinv, ed.p, ed.q)) / (len * len);
        acc += a * a * len * len * len;
    }
    return acc / (S(12) * S(k) * S(k));
}

/// Quadrature estimate of the tau constant: subdivide every edge into k
/// pieces, compute r(base, .) at all nodes from the subdivided Laplacian,
/// and sum squared secant slopes. The slope of r along an edge is linear,
/// so the error shrinks like 1/k^2; on trees the secants are exact.
template <class S>
S oracle_tau(const MetrizedGraph<S>& g, int k) {
    if (k < 2) throw GraphError("tau quadrature needs at least 2 subdivisions per edge");
    std::vector<Point<S>> points;
    points.reserve(static_cast<std::size_t>(g.edge_count()) * (k - 1));
    for (int e = 0; e < g.edge_count(); ++e) {
        const S& len = g.edge(e).length;
        for (int m = 1; m < k; ++m) points.push_back(Point<S>::on_edge(e, len * S(m) / S(k)));
    }
    detail::Insertion<S> ins = detail::insert_points(g, points);
    DenseMatrix<S> pinv = pseudo_inverse(build_laplacian(ins.graph));

    const int base = 0;
    S acc(0);
    std::size_t cursor = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge<S>& ed = g.edge(e);
        S step = ed.length / S(k);
        S prev = resistance(pinv, base, ed.p);
        for (int m = 1; m <= k; ++m) {
            int node = m == k ? ed.q : ins.vertex_of_point[cursor++];
            S cur = resistance(pinv, base, node);
            S slope = (cur - prev) / step;
            acc += slope * slope * step;
            prev = std::move(cur);
        }
    }
    return acc / S(4);
}

}  // namespace mg
