#pragma once

#include <utility>

#include "mg/errors.hpp"
#include "mg/graph.hpp"
#include "mg/network.hpp"
#include "mg/scalar.hpp"

namespace mg {

/// r(p, x) for a vertex p and a point x on edge e, as a quadratic in the
/// offset. On a bridge the quadratic degenerates to a slope-one line whose
/// direction depends on which component holds p.
template <class S>
S vertex_point_resistance(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, int p, int e,
                          const S& x) {
    const Edge<S>& ed = g.edge(e);
    const S& len = ed.length;
    if (g.is_bridge(e)) {
        if (g.side_of(e, p) == Side::P) return x + resistance(pinv, p, ed.p);
        return (len - x) + resistance(pinv, p, ed.q);
    }
    S r_ends = resistance(pinv, ed.p, ed.q);
    S quad = (len - r_ends) / (len * len);
    S lin = (len - r_ends + resistance(pinv, p, ed.q) - resistance(pinv, p, ed.p)) / len;
    return -x * x * quad + x * lin + resistance(pinv, p, ed.p);
}

/// r(x, y) for two points on one edge.
template <class S>
S same_edge_resistance(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, int e, const S& x,
                       const S& y) {
    const Edge<S>& ed = g.edge(e);
    S d = x < y ? y - x : x - y;
    if (g.is_bridge(e)) return d;
    S r_ends = resistance(pinv, ed.p, ed.q);
    return d - d * d * (ed.length - r_ends) / (ed.length * ed.length);
}

/// r(x, y) for interior points of two distinct edges. Non-bridge pairs use
/// the six-term expansion with vertex voltages; a bridge splits the graph,
/// so the value decomposes as the walk to the bridge end plus a
/// vertex-to-point resistance in the rest.
template <class S>
S cross_edge_resistance(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, int ei, const S& x,
                        int ej, const S& y) {
    if (ei == ej) throw GraphError("cross-edge form requires distinct edges");
    const Edge<S>& a = g.edge(ei);
    const Edge<S>& b = g.edge(ej);
    if (g.is_bridge(ei)) {
        if (g.side_of(ei, b.p) == Side::P)
            return x + vertex_point_resistance(g, pinv, a.p, ej, y);
        return (a.length - x) + vertex_point_resistance(g, pinv, a.q, ej, y);
    }
    if (g.is_bridge(ej)) {
        if (g.side_of(ej, a.p) == Side::P)
            return y + vertex_point_resistance(g, pinv, b.p, ei, x);
        return (b.length - y) + vertex_point_resistance(g, pinv, b.q, ei, x);
    }
    const S& li = a.length;
    const S& lj = b.length;
    S ri = resistance(pinv, a.p, a.q);
    S rj = resistance(pinv, b.p, b.q);
    return -x * x * (li - ri) / (li * li) - y * y * (lj - rj) / (lj * lj) +
           S(2) * x * y / (li * lj) *
               (voltage(pinv, b.p, a.p, b.q) - voltage(pinv, b.p, a.q, b.q)) +
           x / li * (li - S(2) * voltage(pinv, a.p, a.q, b.p)) +
           y / lj * (lj - S(2) * voltage(pinv, b.p, a.p, b.q)) +
           resistance(pinv, a.p, b.p);
}

/// r(x, y) for arbitrary points. Points are canonicalized first (endpoint
/// offsets become vertices), then dispatched: vertex/vertex lookup,
/// vertex/interior quadratic, same-edge, or cross-edge. The cross-edge
/// branch fixes the edge-pair orientation by index so r(x,y) and r(y,x)
/// run through identical arithmetic.
template <class S>
S resistance(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, const Point<S>& x,
             const Point<S>& y) {
    Point<S> cx = g.canonical(x);
    Point<S> cy = g.canonical(y);
    if (cx.is_vertex() && cy.is_vertex()) return resistance(pinv, cx.vertex, cy.vertex);
    if (cx.is_vertex()) return vertex_point_resistance(g, pinv, cx.vertex, cy.edge, cy.offset);
    if (cy.is_vertex()) return vertex_point_resistance(g, pinv, cy.vertex, cx.edge, cx.offset);
    if (cx.edge == cy.edge) return same_edge_resistance(g, pinv, cx.edge, cx.offset, cy.offset);
    if (cx.edge > cy.edge) std::swap(cx, cy);
    return cross_edge_resistance(g, pinv, cx.edge, cx.offset, cy.edge, cy.offset);
}

/// j_x(y,z) for arbitrary points via 2 j_x(y,z) = r(x,y) + r(x,z) - r(y,z).
template <class S>
S voltage(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, const Point<S>& x,
          const Point<S>& y, const Point<S>& z) {
    return (resistance(g, pinv, x, y) + resistance(g, pinv, x, z) - resistance(g, pinv, y, z)) /
           S(2);
}

}  // namespace mg
