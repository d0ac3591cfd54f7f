#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mg/errors.hpp"
#include "mg/scalar.hpp"

namespace mg {

/// Oriented edge: parameter 0 sits at vertex `p`, parameter `length` at `q`.
/// The orientation is fixed when the graph is built and never flipped; all
/// piecewise formulas depend on it.
template <class S>
struct Edge {
    std::string id;
    int p = -1;
    int q = -1;
    S length{};
};

/// Component label of a bridge edge: P is the side containing the edge's
/// first endpoint, Q the side containing the second.
enum class Side { P, Q };

/// A location on the graph: either a vertex or a strictly interior point of
/// an edge, measured from the edge's first endpoint.
template <class S>
struct Point {
    int vertex = -1;
    int edge = -1;
    S offset{};

    static Point at_vertex(int v) {
        Point pt;
        pt.vertex = v;
        return pt;
    }
    static Point on_edge(int e, S off) {
        Point pt;
        pt.edge = e;
        pt.offset = std::move(off);
        return pt;
    }
    bool is_vertex() const { return vertex >= 0; }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.is_vertex() != b.is_vertex()) return false;
        if (a.is_vertex()) return a.vertex == b.vertex;
        return a.edge == b.edge && a.offset == b.offset;
    }
};

/// A finite connected graph with positive edge lengths, treated as a
/// one-dimensional metric space. Immutable after construction; safe to share
/// across concurrent readers.
///
/// A graph built by refine_adequate() additionally records how its edges and
/// inserted vertices map back to the coordinates of the graph it refined.
template <class S>
class MetrizedGraph {
public:
    MetrizedGraph(std::vector<std::string> vertex_names, std::vector<Edge<S>> edges)
        : names_(std::move(vertex_names)), edges_(std::move(edges)) {
        validate();
        index();
        identity_provenance();
    }

    int vertex_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<std::string>& vertex_names() const { return names_; }
    const std::string& vertex_name(int v) const { return names_[check_vertex(v)]; }
    const std::vector<Edge<S>>& edges() const { return edges_; }
    const Edge<S>& edge(int e) const { return edges_[check_edge(e)]; }

    std::optional<int> find_vertex(std::string_view name) const {
        auto it = vertex_by_name_.find(std::string(name));
        if (it == vertex_by_name_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<int> find_edge(std::string_view id) const {
        auto it = edge_by_id_.find(std::string(id));
        if (it == edge_by_id_.end()) return std::nullopt;
        return it->second;
    }
    int vertex_index(std::string_view name) const {
        if (auto v = find_vertex(name)) return *v;
        throw GraphError("unknown vertex '" + std::string(name) + "'");
    }
    int edge_index(std::string_view id) const {
        if (auto e = find_edge(id)) return *e;
        throw GraphError("unknown edge '" + std::string(id) + "'");
    }

    S total_length() const {
        S total(0);
        for (const auto& e : edges_) total += e.length;
        return total;
    }

    /// True when the vertex set is adequate: no self-loops and no two edges
    /// sharing the same endpoint pair.
    bool adequate() const { return adequate_; }

    /// Incident (edge index, opposite vertex) pairs; a self-loop appears twice.
    const std::vector<std::pair<int, int>>& incident(int v) const {
        return adjacency_[check_vertex(v)];
    }

    /// True iff deleting the interior of the edge disconnects the graph.
    /// Decided structurally at construction time, never numerically.
    bool is_bridge(int e) const { return bridge_[check_edge(e)]; }

    /// Which component of the bridge-deleted graph contains vertex `p`.
    Side side_of(int e, int p) const {
        check_edge(e);
        check_vertex(p);
        if (!bridge_[e]) throw GraphError("edge '" + edges_[e].id + "' is not a bridge");
        return reaches_without(edges_[e].p, p, e) ? Side::P : Side::Q;
    }

    // -- refinement provenance -------------------------------------------
    // Identity for graphs built directly; populated by refine_adequate().

    bool refined() const { return refined_; }
    int original_vertex_count() const { return orig_vertex_count_; }
    int original_edge_count() const { return orig_edge_count_; }

    /// Refined edge indices covering an original edge, in parameter order.
    const std::vector<int>& refined_edges_of(int original_edge) const {
        if (original_edge < 0 || original_edge >= orig_edge_count_)
            throw GraphError("original edge index out of range");
        return segments_of_orig_[original_edge];
    }

    /// Maps a point in original-edge coordinates onto this graph.
    Point<S> to_refined(const Point<S>& p) const {
        if (p.is_vertex()) {
            if (p.vertex < 0 || p.vertex >= orig_vertex_count_)
                throw GraphError("original vertex index out of range");
            return p;
        }
        const auto& segs = refined_edges_of(p.edge);
        if (!(p.offset >= S(0)) || !(p.offset <= orig_edge_length_[p.edge]))
            throw GraphError("point offset outside original edge");
        S acc(0);
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const S& len = edges_[segs[k]].length;
            if (p.offset <= acc + len || k + 1 == segs.size()) {
                S off = p.offset - acc;
                if (off > len) off = len;  // float drift at the last segment
                return canonical(Point<S>::on_edge(segs[k], std::move(off)));
            }
            acc += len;
        }
        throw GraphError("edge offset beyond edge length");
    }

    /// Maps a point of this graph back to original-edge coordinates.
    Point<S> to_original(const Point<S>& p) const {
        Point<S> cp = canonical(p);
        if (cp.is_vertex()) {
            if (cp.vertex < orig_vertex_count_) return cp;
            const auto& loc = inserted_origin_[cp.vertex - orig_vertex_count_];
            return Point<S>::on_edge(loc.first, loc.second);
        }
        const auto& origin = edge_origin_[cp.edge];
        return Point<S>::on_edge(origin.first, origin.second + cp.offset);
    }

    /// Validates a point and folds end-of-edge offsets onto the endpoint
    /// vertices so that formula-branch selection is unambiguous.
    Point<S> canonical(const Point<S>& p) const {
        if (p.is_vertex()) {
            check_vertex(p.vertex);
            return p;
        }
        const Edge<S>& e = edge(p.edge);
        if (!(p.offset >= S(0)) || !(p.offset <= e.length))
            throw GraphError("point offset outside edge '" + e.id + "'");
        if (p.offset == S(0)) return Point<S>::at_vertex(e.p);
        if (p.offset == e.length) return Point<S>::at_vertex(e.q);
        return p;
    }

private:
    template <class T>
    friend MetrizedGraph<T> refine_adequate(const MetrizedGraph<T>& g);

    std::vector<std::string> names_;
    std::vector<Edge<S>> edges_;
    std::unordered_map<std::string, int> vertex_by_name_;
    std::unordered_map<std::string, int> edge_by_id_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
    std::vector<bool> bridge_;
    bool adequate_ = true;

    bool refined_ = false;
    int orig_vertex_count_ = 0;
    int orig_edge_count_ = 0;
    std::vector<std::vector<int>> segments_of_orig_;
    std::vector<S> orig_edge_length_;
    std::vector<std::pair<int, S>> edge_origin_;      // per edge: (orig edge, start)
    std::vector<std::pair<int, S>> inserted_origin_;  // per vertex >= orig count

    int check_vertex(int v) const {
        if (v < 0 || v >= vertex_count()) throw GraphError("vertex index out of range");
        return v;
    }
    int check_edge(int e) const {
        if (e < 0 || e >= edge_count()) throw GraphError("edge index out of range");
        return e;
    }

    void validate() {
        if (names_.empty()) throw GraphError("graph has no vertices");
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty()) throw GraphError("empty vertex name");
            if (!vertex_by_name_.emplace(names_[i], static_cast<int>(i)).second)
                throw GraphError("duplicate vertex '" + names_[i] + "'");
        }
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            Edge<S>& e = edges_[i];
            if (e.id.empty()) throw GraphError("empty edge id");
            if (!edge_by_id_.emplace(e.id, static_cast<int>(i)).second)
                throw GraphError("duplicate edge id '" + e.id + "'");
            if (e.p < 0 || e.p >= vertex_count() || e.q < 0 || e.q >= vertex_count())
                throw GraphError("edge '" + e.id + "' references an unknown vertex");
            if (!(e.length > S(0)))
                throw GraphError("nonpositive length on edge '" + e.id + "'");
        }
    }

    void index() {
        adjacency_.assign(names_.size(), {});
        std::map<std::pair<int, int>, int> pair_count;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge<S>& e = edges_[i];
            adjacency_[e.p].emplace_back(static_cast<int>(i), e.q);
            adjacency_[e.q].emplace_back(static_cast<int>(i), e.p);
            if (e.p == e.q)
                adequate_ = false;
            else if (++pair_count[std::minmax(e.p, e.q)] > 1)
                adequate_ = false;
        }
        if (!connected()) throw GraphError("disconnected graph");
        find_bridges();
    }

    bool connected() const {
        std::vector<char> seen(names_.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& [e, w] : adjacency_[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        return std::find(seen.begin(), seen.end(), 0) == seen.end();
    }

    bool reaches_without(int from, int target, int skipped_edge) const {
        std::vector<char> seen(names_.size(), 0);
        std::vector<int> stack{from};
        seen[from] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == target) return true;
            for (const auto& [e, w] : adjacency_[v]) {
                if (e == skipped_edge || seen[w]) continue;
                seen[w] = 1;
                stack.push_back(w);
            }
        }
        return seen[target] != 0;
    }

    // Iterative lowlink search. Tracks the incoming edge index, not the
    // parent vertex, so parallel edges and self-loops are never bridges.
    void find_bridges() {
        const int n = vertex_count();
        bridge_.assign(edges_.size(), false);
        std::vector<int> disc(n, -1), low(n, 0), parent_edge(n, -1);
        std::vector<std::size_t> next(n, 0);
        int time = 0;
        for (int root = 0; root < n; ++root) {
            if (disc[root] >= 0) continue;
            std::vector<int> stack{root};
            disc[root] = low[root] = time++;
            while (!stack.empty()) {
                int v = stack.back();
                if (next[v] < adjacency_[v].size()) {
                    auto [e, w] = adjacency_[v][next[v]++];
                    if (e == parent_edge[v]) continue;
                    if (disc[w] < 0) {
                        disc[w] = low[w] = time++;
                        parent_edge[w] = e;
                        stack.push_back(w);
                    } else {
                        low[v] = std::min(low[v], disc[w]);
                    }
                } else {
                    stack.pop_back();
                    if (!stack.empty()) {
                        int u = stack.back();
                        low[u] = std::min(low[u], low[v]);
                        if (low[v] > disc[u]) bridge_[parent_edge[v]] = true;
                    }
                }
            }
        }
    }

    void identity_provenance() {
        orig_vertex_count_ = vertex_count();
        orig_edge_count_ = edge_count();
        segments_of_orig_.resize(edges_.size());
        edge_origin_.resize(edges_.size());
        orig_edge_length_.resize(edges_.size());
        for (int e = 0; e < edge_count(); ++e) {
            segments_of_orig_[e] = {e};
            edge_origin_[e] = {e, S(0)};
            orig_edge_length_[e] = edges_[e].length;
        }
    }
};

template <class S>
Point<S> canonicalize(const MetrizedGraph<S>& g, const Point<S>& p) {
    return g.canonical(p);
}

template <class S>
bool is_bridge(const MetrizedGraph<S>& g, int e) {
    return g.is_bridge(e);
}

template <class S>
Side side_of(const MetrizedGraph<S>& g, int e, int p) {
    return g.side_of(e, p);
}

/// Returns a graph with an adequate vertex set and an identical metric
/// structure. Self-loops are cut at two equally spaced interior points into
/// three equal segments; within each parallel-edge group every edge after
/// the first is cut at its midpoint. Graphs that are already adequate come
/// back unchanged with an identity coordinate map.
template <class S>
MetrizedGraph<S> refine_adequate(const MetrizedGraph<S>& g) {
    if (g.adequate()) return g;

    std::vector<std::string> names = g.vertex_names();
    std::vector<Edge<S>> edges;
    std::vector<std::vector<int>> segments(g.edge_count());
    std::vector<std::pair<int, S>> edge_origin;
    std::vector<std::pair<int, S>> inserted_origin;
    std::map<std::pair<int, int>, int> seen_pair;

    auto add_vertex = [&](const std::string& name, int orig_edge, S offset) {
        names.push_back(name);
        inserted_origin.emplace_back(orig_edge, std::move(offset));
        return static_cast<int>(names.size()) - 1;
    };
    auto add_segment = [&](int orig, std::string id, int p, int q, S len, S start) {
        segments[orig].push_back(static_cast<int>(edges.size()));
        edge_origin.emplace_back(orig, std::move(start));
        edges.push_back(Edge<S>{std::move(id), p, q, std::move(len)});
    };

    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge<S>& e = g.edge(i);
        if (e.p == e.q) {
            S third = e.length / S(3);
            int a = add_vertex(e.id + ".v1", i, third);
            int b = add_vertex(e.id + ".v2", i, third + third);
            add_segment(i, e.id + ".1", e.p, a, third, S(0));
            add_segment(i, e.id + ".2", a, b, third, third);
            add_segment(i, e.id + ".3", b, e.q, third, third + third);
            continue;
        }
        auto [it, first_in_group] = seen_pair.try_emplace(std::minmax(e.p, e.q), i);
        if (first_in_group) {
            add_segment(i, e.id, e.p, e.q, e.length, S(0));
        } else {
            S half = e.length / S(2);
            int m = add_vertex(e.id + ".v1", i, half);
            add_segment(i, e.id + ".1", e.p, m, half, S(0));
            add_segment(i, e.id + ".2", m, e.q, half, half);
        }
    }

    MetrizedGraph<S> out(std::move(names), std::move(edges));
    out.refined_ = true;
    out.orig_vertex_count_ = g.vertex_count();
    out.orig_edge_count_ = g.edge_count();
    out.segments_of_orig_ = std::move(segments);
    out.edge_origin_ = std::move(edge_origin);
    out.inserted_origin_ = std::move(inserted_origin);
    out.orig_edge_length_.clear();
    for (const auto& e : g.edges()) out.orig_edge_length_.push_back(e.length);
    return out;
}

}  // namespace mg
