#pragma once

#include <variant>

#include "mg/errors.hpp"
#include "mg/graph.hpp"
#include "mg/laplacian.hpp"
#include "mg/scalar.hpp"

namespace mg {

/// Effective resistance between two vertices, read off the pseudoinverse:
/// r(p,q) = l+_pp - 2 l+_pq + l+_qq.
template <class S>
S resistance(const DenseMatrix<S>& pinv, int p, int q) {
    return pinv(p, p) - S(2) * pinv(p, q) + pinv(q, q);
}

/// Voltage function on vertices: j_p(q,s) = l+_pp - l+_pq - l+_ps + l+_qs.
/// Symmetric in q and s; zero whenever q or s equals the base vertex p.
template <class S>
S voltage(const DenseMatrix<S>& pinv, int p, int q, int s) {
    return pinv(p, p) - pinv(p, q) - pinv(p, s) + pinv(q, s);
}

template <class S>
DenseMatrix<S> resistance_matrix(const DenseMatrix<S>& pinv) {
    const Eigen::Index n = pinv.rows();
    DenseMatrix<S> r = DenseMatrix<S>::Zero(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = p + 1; q < n; ++q) {
            S v = resistance(pinv, static_cast<int>(p), static_cast<int>(q));
            r(p, q) = v;
            r(q, p) = std::move(v);
        }
    return r;
}

/// Circuit reduction of the edge-deleted graph with respect to edge e_i and
/// vertex p: the Y of resistances R_a (to p_i), R_b (to q_i), R_c (to p),
/// plus R_i = R_a + R_b, the end-to-end resistance in the deleted graph.
template <class S>
struct ConnectedReduction {
    S Ri, Ra, Rb, Rc;
};

/// Bridge case: the deleted graph is disconnected, the reduction degenerates
/// and only the component containing p matters.
struct BridgeReduction {
    Side side;
};

template <class S>
using EdgeDeletedData = std::variant<ConnectedReduction<S>, BridgeReduction>;

template <class S>
EdgeDeletedData<S> edge_deleted_data(const MetrizedGraph<S>& g, const DenseMatrix<S>& pinv,
                                     int e, int p) {
    if (g.is_bridge(e)) return BridgeReduction{g.side_of(e, p)};
    const Edge<S>& ed = g.edge(e);
    const S& len = ed.length;
    S r_ends = resistance(pinv, ed.p, ed.q);
    S gap = len - r_ends;
    if (!(gap > S(0)))
        throw NumericError("edge resistance reached the edge length on a non-bridge edge '" +
                           ed.id + "'");
    S ri = len * r_ends / gap;
    S denom = len + ri;
    S r_pp = resistance(pinv, p, ed.p);
    S diff = (r_pp - resistance(pinv, p, ed.q)) * denom / len;
    S ra = (ri + diff) / S(2);
    S rb = (ri - diff) / S(2);
    S rc = r_pp - ra * (len + rb) / denom;
    return ConnectedReduction<S>{std::move(ri), std::move(ra), std::move(rb), std::move(rc)};
}

}  // namespace mg
