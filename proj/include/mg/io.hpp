#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "mg/errors.hpp"
#include "mg/graph.hpp"
#include "mg/green.hpp"
#include "mg/scalar.hpp"

namespace mg {

/// Mode-independent graph description as read from disk. Lengths stay as
/// text so each arithmetic mode can parse them on its own terms: exact mode
/// reads "5/2", "2.5" or "3" exactly; float mode goes through strtod.
struct GraphSpec {
    struct EdgeSpec {
        std::string id, from, to, length;
    };
    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
};

namespace detail {

inline std::string number_text(const nlohmann::json& j, const char* what) {
    if (j.is_string()) return j.get<std::string>();
    // dump() of a JSON number is its shortest round-trip decimal, which the
    // exact parser then reads as a true decimal fraction.
    if (j.is_number()) return j.dump();
    throw ParseError(std::string(what) + " must be a number or a string");
}

}  // namespace detail

inline GraphSpec parse_graph_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid graph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("graph JSON needs 'vertices' and 'edges'");
    GraphSpec spec;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_string()) throw ParseError("vertex names must be strings");
        spec.vertices.push_back(v.get<std::string>());
    }
    for (const auto& e : j.at("edges")) {
        if (!e.is_object() || !e.contains("id") || !e.contains("from") || !e.contains("to") ||
            !e.contains("length"))
            throw ParseError("each edge needs 'id', 'from', 'to', 'length'");
        spec.edges.push_back(GraphSpec::EdgeSpec{e.at("id").get<std::string>(),
                                                 e.at("from").get<std::string>(),
                                                 e.at("to").get<std::string>(),
                                                 detail::number_text(e.at("length"), "length")});
    }
    return spec;
}

template <class S>
MetrizedGraph<S> graph_from_spec(const GraphSpec& spec) {
    std::vector<std::string> names = spec.vertices;
    std::vector<Edge<S>> edges;
    edges.reserve(spec.edges.size());
    std::unordered_map<std::string, int> idx;
    for (std::size_t i = 0; i < names.size(); ++i) idx.emplace(names[i], static_cast<int>(i));
    for (const auto& e : spec.edges) {
        auto from = idx.find(e.from);
        auto to = idx.find(e.to);
        if (from == idx.end()) throw GraphError("edge '" + e.id + "' references unknown vertex '" + e.from + "'");
        if (to == idx.end()) throw GraphError("edge '" + e.id + "' references unknown vertex '" + e.to + "'");
        edges.push_back(Edge<S>{e.id, from->second, to->second, parse_scalar<S>(e.length)});
    }
    return MetrizedGraph<S>(std::move(names), std::move(edges));
}

/// Parses the external graph file format into a validated graph.
template <class S>
MetrizedGraph<S> parse_graph(const std::string& text) {
    return graph_from_spec<S>(parse_graph_spec(text));
}

/// Point syntax: a bare vertex name, or "<edge-id>:<offset>" with the offset
/// in original-edge coordinates.
template <class S>
Point<S> parse_point(const MetrizedGraph<S>& g, const std::string& token) {
    if (auto v = g.find_vertex(token)) return Point<S>::at_vertex(*v);
    auto colon = token.rfind(':');
    if (colon == std::string::npos)
        throw ParseError("point '" + token + "' is neither a vertex nor edge:offset");
    std::string edge_id = token.substr(0, colon);
    auto e = g.find_edge(edge_id);
    if (!e) throw GraphError("unknown edge '" + edge_id + "' in point '" + token + "'");
    S off = parse_scalar<S>(token.substr(colon + 1));
    return g.canonical(Point<S>::on_edge(*e, std::move(off)));
}

/// Divisor file: JSON object mapping vertex names to coefficients.
template <class S>
Divisor<S> parse_divisor(const MetrizedGraph<S>& g, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid divisor JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("divisor JSON must be an object");
    Divisor<S> d;
    d.coefficients.assign(g.vertex_count(), S(0));
    for (const auto& [name, value] : j.items())
        d.coefficients[g.vertex_index(name)] = parse_scalar<S>(detail::number_text(value, "coefficient"));
    return d;
}

// -- serialization ---------------------------------------------------------

template <class S>
nlohmann::json matrix_to_json(const DenseMatrix<S>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_scalar(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class S>
std::string matrix_to_csv(const DenseMatrix<S>& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_scalar(m(i, j));
        }
        out += '\n';
    }
    return out;
}

template <class S>
nlohmann::json value_matrix_to_json(const ValueMatrix<S>& z, const MetrizedGraph<S>& g) {
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 0; i < z.edge_count(); ++i)
        for (int j = 0; j < z.edge_count(); ++j) {
            const GreenForm<S>& form = z.entry(i, j);
            nlohmann::json item{{"i", i}, {"j", j}};
            if (const auto* same = std::get_if<SameEdgeForm<S>>(&form)) {
                item["kind"] = "same";
                item["c_abs"] = format_scalar(same->c_abs);
                item["c_quad"] = format_scalar(same->c_quad);
                item["c_const"] = format_scalar(same->c_const);
            } else {
                const auto& c = std::get<CrossEdgeForm<S>>(form);
                item["kind"] = "cross";
                item["c_xx"] = format_scalar(c.c_xx);
                item["c_yy"] = format_scalar(c.c_yy);
                item["c_xy"] = format_scalar(c.c_xy);
                item["c_x"] = format_scalar(c.c_x);
                item["c_y"] = format_scalar(c.c_y);
                item["c_const"] = format_scalar(c.c_const);
            }
            entries.push_back(std::move(item));
        }
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge<S>& e : g.edges())
        edges.push_back({{"id", e.id},
                         {"from", g.vertex_name(e.p)},
                         {"to", g.vertex_name(e.q)},
                         {"length", format_scalar(e.length)}});
    return {{"tau", format_scalar(z.tau())}, {"edges", std::move(edges)},
            {"entries", std::move(entries)}};
}

template <class S>
ValueMatrix<S> value_matrix_from_json(const nlohmann::json& j) {
    S tau = parse_scalar<S>(j.at("tau").get<std::string>());
    int e = static_cast<int>(j.at("edges").size());
    ValueMatrix<S> z(e, tau);
    for (const auto& item : j.at("entries")) {
        int i = item.at("i").get<int>();
        int k = item.at("j").get<int>();
        auto coeff = [&](const char* name) { return parse_scalar<S>(item.at(name).get<std::string>()); };
        if (item.at("kind").get<std::string>() == "same")
            z.entry(i, k) = SameEdgeForm<S>{coeff("c_abs"), coeff("c_quad"), coeff("c_const")};
        else
            z.entry(i, k) = CrossEdgeForm<S>{coeff("c_xx"), coeff("c_yy"), coeff("c_xy"),
                                             coeff("c_x"), coeff("c_y"), coeff("c_const")};
    }
    return z;
}

namespace detail {

/// One term of the resistance polynomial printed inside "tau - (1/2)(...)".
template <class S>
void append_term(std::string& out, const S& coeff, const char* monomial) {
    if (coeff == S(0)) return;
    S c = coeff;
    if (out.empty()) {
        if (c < S(0)) {
            out += "-";
            c = -c;
        }
    } else {
        out += c < S(0) ? " - " : " + ";
        if (c < S(0)) c = -c;
    }
    std::string cs = format_scalar(c);
    if (*monomial == '\0') {
        out += cs;
    } else {
        if (cs != "1") out += cs + " ";
        out += monomial;
    }
}

}  // namespace detail

/// Prints one value-matrix entry in the paper's shape: the constant tau
/// minus half of the resistance polynomial of the edge pair.
template <class S>
std::string format_green_form(const GreenForm<S>& form, const S& tau) {
    const S minus_two(-2);
    std::string poly;
    if (const auto* same = std::get_if<SameEdgeForm<S>>(&form)) {
        detail::append_term(poly, S((same->c_const - tau) * minus_two), "");
        detail::append_term(poly, S(same->c_abs * minus_two), "|x-y|");
        detail::append_term(poly, S(same->c_quad * minus_two), "(x-y)^2");
    } else {
        const auto& c = std::get<CrossEdgeForm<S>>(form);
        detail::append_term(poly, S((c.c_const - tau) * minus_two), "");
        detail::append_term(poly, S(c.c_x * minus_two), "x");
        detail::append_term(poly, S(c.c_xx * minus_two), "x^2");
        detail::append_term(poly, S(c.c_y * minus_two), "y");
        detail::append_term(poly, S(c.c_xy * minus_two), "x y");
        detail::append_term(poly, S(c.c_yy * minus_two), "y^2");
    }
    if (poly.empty()) poly = "0";
    return "tau - (1/2)(" + poly + ")";
}

}  // namespace mg
