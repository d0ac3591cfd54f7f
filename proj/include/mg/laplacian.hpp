#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <optional>
#include <string>

#include "mg/errors.hpp"
#include "mg/graph.hpp"
#include "mg/scalar.hpp"

namespace mg {

/// Discrete Laplacian of an adequate graph: off-diagonal entries are the
/// negated conductances -1/L_k, diagonals make every row sum to zero.
template <class S>
DenseMatrix<S> build_laplacian(const MetrizedGraph<S>& g) {
    if (!g.adequate())
        throw GraphError("graph is not adequate; refine self-loops and parallel edges first");
    const int n = g.vertex_count();
    DenseMatrix<S> lap = DenseMatrix<S>::Zero(n, n);
    for (const Edge<S>& e : g.edges()) {
        S w = S(1) / e.length;
        lap(e.p, e.p) += w;
        lap(e.q, e.q) += w;
        lap(e.p, e.q) -= w;
        lap(e.q, e.p) -= w;
    }
    return lap;
}

namespace detail {

/// Exact Gauss-Jordan inverse. Pivots on the first nonzero entry; fine for
/// field scalars where there is no roundoff to manage.
template <class S>
DenseMatrix<S> invert_exact(DenseMatrix<S> m) {
    const Eigen::Index n = m.rows();
    DenseMatrix<S> inv = DenseMatrix<S>::Identity(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index piv = -1;
        for (Eigen::Index r = col; r < n; ++r)
            if (m(r, col) != S(0)) {
                piv = r;
                break;
            }
        if (piv < 0)
            throw NumericError("rank-deficient system: graph appears disconnected");
        if (piv != col) {
            m.row(piv).swap(m.row(col));
            inv.row(piv).swap(inv.row(col));
        }
        S d = m(col, col);
        m.row(col) /= d;
        inv.row(col) /= d;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col) continue;
            S f = m(r, col);
            if (f != S(0)) {
                m.row(r) -= f * m.row(col);
                inv.row(r) -= f * inv.row(col);
            }
        }
    }
    return inv;
}

inline DenseMatrix<double> invert_spd(const DenseMatrix<double>& m) {
    Eigen::LDLT<DenseMatrix<double>> ldlt(m);
    if (ldlt.info() != Eigen::Success)
        throw NumericError("symmetric factorization failed");
    const auto d = ldlt.vectorD().cwiseAbs();
    if (!(d.minCoeff() > d.maxCoeff() * 1e-13))
        throw NumericError("rank-deficient system: graph appears disconnected");
    return ldlt.solve(DenseMatrix<double>::Identity(m.rows(), m.cols()));
}

}  // namespace detail

/// Moore-Penrose pseudoinverse of a connected-graph Laplacian, computed as
/// (L + J/v)^-1 - J/v. The shift is invertible because the kernel of L is
/// spanned by the all-ones vector.
template <class S>
DenseMatrix<S> pseudo_inverse(const DenseMatrix<S>& lap) {
    if (lap.rows() != lap.cols()) throw NumericError("Laplacian must be square");
    const Eigen::Index n = lap.rows();
    if (n == 0) throw NumericError("empty Laplacian");
    S shift = S(1) / S(static_cast<int>(n));
    DenseMatrix<S> shifted = lap + DenseMatrix<S>::Constant(n, n, shift);
    DenseMatrix<S> inv;
    if constexpr (is_exact_v<S>)
        inv = detail::invert_exact(std::move(shifted));
    else
        inv = detail::invert_spd(shifted);
    return inv - DenseMatrix<S>::Constant(n, n, shift);
}

/// Float-mode conditioning advisory: extreme edge-length ratios make the
/// Laplacian solve lose digits.
template <class S>
std::optional<std::string> condition_warning(const MetrizedGraph<S>& g) {
    double lo = 0, hi = 0;
    bool first = true;
    for (const Edge<S>& e : g.edges()) {
        double len = to_double(e.length);
        if (first) {
            lo = hi = len;
            first = false;
        } else {
            lo = std::min(lo, len);
            hi = std::max(hi, len);
        }
    }
    if (!first && lo > 0 && hi / lo > 1e12)
        return "edge-length ratio exceeds 1e12; float-mode results may lose precision";
    return std::nullopt;
}

}  // namespace mg
