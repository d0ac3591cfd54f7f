#pragma once

#include <functional>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "mg/errors.hpp"
#include "mg/graph.hpp"
#include "mg/network.hpp"
#include "mg/pointwise.hpp"
#include "mg/scalar.hpp"

namespace mg {

/// Tau constant: one quarter of the integral of the squared slope of
/// r(p, .) over the graph, for any fixed base vertex p. On each non-bridge
/// edge r(p, x) = A x^2 + B x + C, so the edge contributes
/// 4 A^2 L^3 / 3 + 2 A B L^2 + B^2 L; bridge edges have slope +-1 and
/// contribute their length. The result does not depend on the base vertex.
template <class S>
S tau_constant(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, int base_vertex = 0) {
    S acc(0);
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge<S>& e = g.edge(i);
        const S& len = e.length;
        if (g.is_bridge(i)) {
            acc += len;
            continue;
        }
        S r_ends = resistance(pinv, e.p, e.q);
        S a = -(len - r_ends) / (len * len);
        S b = (len - r_ends + resistance(pinv, base_vertex, e.q) -
               resistance(pinv, base_vertex, e.p)) /
              len;
        acc += S(4) * a * a * len * len * len / S(3) + S(2) * a * b * len * len + b * b * len;
    }
    return acc / S(4);
}

/// Arakelov-Green function for the canonical measure: tau - r(x,y)/2.
template <class S>
S green_can(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, const S& tau,
            const Point<S>& x, const Point<S>& y) {
    return tau - resistance(g, pinv, x, y) / S(2);
}

/// Closed form of the canonical Green function restricted to one edge:
/// g = c_const + c_quad (x-y)^2 + c_abs |x-y|, with c_abs = -1/2 always and
/// c_quad = 0 exactly when the edge is a bridge.
template <class S>
struct SameEdgeForm {
    S c_abs, c_quad, c_const;
};

/// Closed form on an ordered pair of distinct edges (x on the first, y on
/// the second): g = c_xx x^2 + c_yy y^2 + c_xy xy + c_x x + c_y y + c_const.
/// c_xx = 0 exactly when the first edge is a bridge, likewise c_yy.
template <class S>
struct CrossEdgeForm {
    S c_xx, c_yy, c_xy, c_x, c_y, c_const;
};

template <class S>
using GreenForm = std::variant<SameEdgeForm<S>, CrossEdgeForm<S>>;

template <class S>
S evaluate(const GreenForm<S>& form, const S& x, const S& y) {
    if (const auto* same = std::get_if<SameEdgeForm<S>>(&form)) {
        S d = x < y ? y - x : x - y;
        return same->c_const + same->c_quad * d * d + same->c_abs * d;
    }
    const auto& c = std::get<CrossEdgeForm<S>>(form);
    return c.c_xx * x * x + c.c_yy * y * y + c.c_xy * x * y + c.c_x * x + c.c_y * y + c.c_const;
}

/// The e-by-e table of piecewise closed forms of the canonical Green
/// function: entry (i, j) covers x on edge i, y on edge j.
template <class S>
class ValueMatrix {
public:
    ValueMatrix(int edge_count, S tau)
        : e_(edge_count),
          tau_(std::move(tau)),
          entries_(static_cast<std::size_t>(edge_count) * edge_count,
                   GreenForm<S>(SameEdgeForm<S>{})) {}

    int edge_count() const { return e_; }
    const S& tau() const { return tau_; }

    const GreenForm<S>& entry(int i, int j) const { return entries_[index(i, j)]; }
    GreenForm<S>& entry(int i, int j) { return entries_[index(i, j)]; }

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || i >= e_ || j < 0 || j >= e_) throw GraphError("value-matrix index out of range");
        return static_cast<std::size_t>(i) * e_ + j;
    }

    int e_;
    S tau_;
    std::vector<GreenForm<S>> entries_;
};

namespace detail {

inline void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    threads = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

template <class S>
CrossEdgeForm<S> swap_roles(const CrossEdgeForm<S>& c) {
    return CrossEdgeForm<S>{c.c_yy, c.c_xx, c.c_xy, c.c_y, c.c_x, c.c_const};
}

template <class S>
SameEdgeForm<S> diagonal_form(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv,
                              const S& tau, int i) {
    const Edge<S>& e = g.edge(i);
    S quad(0);
    if (!g.is_bridge(i)) {
        S r_ends = resistance(pinv, e.p, e.q);
        quad = (e.length - r_ends) / (S(2) * e.length * e.length);
    }
    return SameEdgeForm<S>{S(-1) / S(2), std::move(quad), tau};
}

// Cross-edge coefficients written purely in terms of vertex resistances;
// the equivalent voltage-function form is asserted against this one in the
// test suite.
template <class S>
CrossEdgeForm<S> cross_form(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, const S& tau,
                            int i, int j) {
    const Edge<S>& a = g.edge(i);
    const Edge<S>& b = g.edge(j);
    const S& li = a.length;
    const S& lj = b.length;
    const bool bi = g.is_bridge(i);
    const bool bj = g.is_bridge(j);
    const S half = S(1) / S(2);

    if (bi && bj) {
        Side si = g.side_of(i, b.p);  // side of e_i holding e_j (and y)
        Side sj = g.side_of(j, a.p);  // side of e_j holding e_i (and x)
        int end_i = si == Side::P ? a.p : a.q;
        int end_j = sj == Side::P ? b.p : b.q;
        S walk = resistance(pinv, end_i, end_j);
        if (si == Side::Q) walk += li;
        if (sj == Side::Q) walk += lj;
        return CrossEdgeForm<S>{S(0),
                                S(0),
                                S(0),
                                si == Side::P ? -half : half,
                                sj == Side::P ? -half : half,
                                tau - walk / S(2)};
    }
    if (bi) {
        S rj = resistance(pinv, b.p, b.q);
        S c_yy = (lj - rj) / (S(2) * lj * lj);
        if (g.side_of(i, b.p) == Side::P) {
            S r_ap = resistance(pinv, a.p, b.p);
            S c_y = -(lj - rj + resistance(pinv, a.p, b.q) - r_ap) / (S(2) * lj);
            return CrossEdgeForm<S>{S(0), std::move(c_yy), S(0), -half, std::move(c_y),
                                    tau - r_ap / S(2)};
        }
        S r_qp = resistance(pinv, a.q, b.p);
        S c_y = -(lj - rj + resistance(pinv, a.q, b.q) - r_qp) / (S(2) * lj);
        return CrossEdgeForm<S>{S(0), std::move(c_yy), S(0), half, std::move(c_y),
                                tau - (li + r_qp) / S(2)};
    }
    if (bj) return swap_roles(cross_form(g, pinv, tau, j, i));

    S ri = resistance(pinv, a.p, a.q);
    S rj = resistance(pinv, b.p, b.q);
    S r_pp = resistance(pinv, a.p, b.p);
    S r_pq = resistance(pinv, a.p, b.q);
    S r_qp = resistance(pinv, a.q, b.p);
    S r_qq = resistance(pinv, a.q, b.q);
    return CrossEdgeForm<S>{(li - ri) / (S(2) * li * li),
                            (lj - rj) / (S(2) * lj * lj),
                            -(r_pp - r_pq - r_qp + r_qq) / (S(2) * li * lj),
                            -(li - ri + r_qp - r_pp) / (S(2) * li),
                            -(lj - rj + r_pq - r_pp) / (S(2) * lj),
                            tau - r_pp / S(2)};
}

}  // namespace detail

/// Builds the full value matrix. Entry (j, i) is the role swap of (i, j),
/// never an independent recomputation. Construction can fan out across
/// edge pairs.
template <class S>
ValueMatrix<S> value_matrix(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, const S& tau,
                            int threads = 1) {
    const int e = g.edge_count();
    ValueMatrix<S> z(e, tau);
    detail::parallel_for(e, threads, [&](int i) {
        z.entry(i, i) = detail::diagonal_form(g, pinv, tau, i);
        for (int j = i + 1; j < e; ++j) {
            CrossEdgeForm<S> c = detail::cross_form(g, pinv, tau, i, j);
            z.entry(j, i) = detail::swap_roles(c);
            z.entry(i, j) = std::move(c);
        }
    });
    return z;
}

namespace detail {

/// Deterministic edge representation of a canonical point: interior points
/// keep their edge; a vertex is placed at the matching end of its
/// lowest-indexed incident edge. Any representation evaluates identically
/// by continuity.
template <class S>
std::pair<int, S> edge_coordinates(const MetrizedGraph<S>& g, const Point<S>& canonical_point) {
    if (!canonical_point.is_vertex())
        return {canonical_point.edge, canonical_point.offset};
    const auto& inc = g.incident(canonical_point.vertex);
    if (inc.empty()) throw GraphError("isolated vertex has no edge representation");
    int e = inc.front().first;
    for (const auto& [cand, other] : inc) e = std::min(e, cand);
    const Edge<S>& ed = g.edge(e);
    return {e, ed.p == canonical_point.vertex ? S(0) : ed.length};
}

}  // namespace detail

/// Evaluates the canonical Green function through the value matrix; must
/// agree with green_can evaluated directly.
template <class S>
S evaluate(const ValueMatrix<S>& z, const MetrizedGraph<S>& g, const Point<S>& x,
           const Point<S>& y) {
    auto [ei, xo] = detail::edge_coordinates(g, g.canonical(x));
    auto [ej, yo] = detail::edge_coordinates(g, g.canonical(y));
    if (ei == ej) return evaluate(z.entry(ei, ei), xo, yo);
    return evaluate(z.entry(ei, ej), xo, yo);
}

/// Formal combination of vertices with integer or rational coefficients.
template <class S>
struct Divisor {
    std::vector<S> coefficients;  // indexed by vertex

    S degree() const {
        S d(0);
        for (const S& c : coefficients) d += c;
        return d;
    }
};

/// Divisor with its cached Green-function constant c(D).
template <class S>
struct DivisorGreen {
    Divisor<S> divisor;
    S degree;
    S constant;
};

template <class S>
DivisorGreen<S> make_divisor_green(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv,
                                   const S& tau, Divisor<S> d) {
    if (static_cast<int>(d.coefficients.size()) != g.vertex_count())
        throw GraphError("divisor has the wrong number of vertex coefficients");
    S deg = d.degree();
    if (deg == S(-2)) throw GraphError("divisor degree -2 is not admissible");
    S pairs(0);
    for (int q = 0; q < g.vertex_count(); ++q) {
        if (d.coefficients[q] == S(0)) continue;
        for (int s = 0; s < g.vertex_count(); ++s) {
            if (d.coefficients[s] == S(0)) continue;
            pairs += d.coefficients[q] * d.coefficients[s] * resistance(pinv, q, s);
        }
    }
    S c = (S(8) * tau * (deg + S(1)) + pairs) / (S(2) * (deg + S(2)) * (deg + S(2)));
    return DivisorGreen<S>{std::move(d), std::move(deg), std::move(c)};
}

/// Arakelov-Green function of the admissible measure attached to a divisor:
/// ( sum_s a_s j_s(x,y) + 4 tau - r(x,y) ) / (deg D + 2) - c(D).
/// Reduces to the canonical Green function when D = 0.
template <class S>
S green_divisor(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv, const S& tau,
                const DivisorGreen<S>& dg, const Point<S>& x, const Point<S>& y) {
    S rxy = resistance(g, pinv, x, y);
    S sum(0);
    for (int s = 0; s < g.vertex_count(); ++s) {
        const S& a = dg.divisor.coefficients[s];
        if (a == S(0)) continue;
        Point<S> base = Point<S>::at_vertex(s);
        S js = (resistance(g, pinv, base, x) + resistance(g, pinv, base, y) - rxy) / S(2);
        sum += a * js;
    }
    return (sum + S(4) * tau - rxy) / (dg.degree + S(2)) - dg.constant;
}

}  // namespace mg
