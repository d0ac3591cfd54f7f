#include "mg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "mg/graph.hpp"
#include "mg/green.hpp"
#include "mg/io.hpp"
#include "mg/laplacian.hpp"
#include "mg/network.hpp"
#include "mg/oracle.hpp"
#include "mg/pointwise.hpp"
#include "mg/scalar.hpp"

namespace mg::cli {
namespace {

struct Usage : Error {
    using Error::Error;
};

struct Options {
    std::string command;
    std::string graph_file;
    bool exact = false;
    std::string format = "pretty";
    std::vector<std::string> at;
    std::string divisor_file;
    int pairs = 100;
    int tau_k = 100;
    unsigned long long seed = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("METRIZED_GREEN_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) hw = std::min<unsigned long>(hw, static_cast<unsigned long>(v));
    }
    return static_cast<int>(hw);
}

template <class S>
nlohmann::json envelope(const Options& opt) {
    return {{"command", opt.command}, {"mode", scalar_mode_name<S>()}, {"graph", opt.graph_file}};
}

void emit_json(std::ostream& out, nlohmann::json env, nlohmann::json payload) {
    env["payload"] = std::move(payload);
    out << env.dump(2) << "\n";
}

template <class S>
void print_matrix_pretty(std::ostream& out, const std::vector<std::string>& labels,
                         const DenseMatrix<S>& m) {
    std::size_t width = 1;
    for (const auto& l : labels) width = std::max(width, l.size());
    std::vector<std::string> cells(static_cast<std::size_t>(m.rows() * m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            auto& c = cells[static_cast<std::size_t>(i * m.cols() + j)];
            c = format_scalar(m(i, j));
            width = std::max(width, c.size());
        }
    auto pad = [&](const std::string& s) {
        out << std::setw(static_cast<int>(width) + 2) << s;
    };
    pad("");
    for (const auto& l : labels) pad(l);
    out << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        pad(labels[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            pad(cells[static_cast<std::size_t>(i * m.cols() + j)]);
        out << "\n";
    }
}

template <class S>
struct Session {
    GraphSpec spec;
    MetrizedGraph<S> original;
    MetrizedGraph<S> graph;  // adequate refinement of `original`
    DenseMatrix<S> pinv;

    explicit Session(const Options& opt)
        : spec(parse_graph_spec(read_file(opt.graph_file))),
          original(graph_from_spec<S>(spec)),
          graph(refine_adequate(original)),
          pinv(pseudo_inverse(build_laplacian(graph))) {}

    Point<S> point(const std::string& token) const {
        Point<S> p;
        try {
            p = parse_point(original, token);
        } catch (const ParseError& e) {
            throw Usage(e.what());
        }
        return graph.to_refined(p);
    }
};

template <class S>
std::vector<Point<S>> two_points(const Session<S>& s, const Options& opt) {
    if (opt.at.size() != 2)
        throw Usage("expected exactly two --at points, got " + std::to_string(opt.at.size()));
    return {s.point(opt.at[0]), s.point(opt.at[1])};
}

template <class S>
void emit_scalar(std::ostream& out, const Options& opt, nlohmann::json payload,
                 const S& value) {
    if (opt.format == "json") {
        payload["value"] = format_scalar(value);
        emit_json(out, envelope<S>(opt), std::move(payload));
    } else {
        out << format_scalar(value) << "\n";
    }
}

template <class S>
void emit_matrix(std::ostream& out, const Options& opt, const std::vector<std::string>& labels,
                 const DenseMatrix<S>& m) {
    if (opt.format == "json") {
        nlohmann::json payload{{"labels", labels}, {"matrix", matrix_to_json(m)}};
        emit_json(out, envelope<S>(opt), std::move(payload));
    } else if (opt.format == "csv") {
        out << matrix_to_csv(m);
    } else {
        print_matrix_pretty(out, labels, m);
    }
}

template <class S>
int cmd_info(const Session<S>& s, const Options& opt, std::ostream& out) {
    const auto& g0 = s.original;
    const auto& g = s.graph;
    std::vector<std::string> bridges;
    for (int e = 0; e < g.edge_count(); ++e)
        if (g.is_bridge(e)) bridges.push_back(g.edge(e).id);
    if (opt.format == "json") {
        nlohmann::json edges = nlohmann::json::array();
        for (const Edge<S>& e : g0.edges())
            edges.push_back({{"id", e.id},
                             {"from", g0.vertex_name(e.p)},
                             {"to", g0.vertex_name(e.q)},
                             {"length", format_scalar(e.length)}});
        nlohmann::json payload{
            {"vertices", g0.vertex_names()},
            {"edges", std::move(edges)},
            {"total_length", format_scalar(g0.total_length())},
            {"adequate", g0.adequate()},
            {"refined", {{"vertices", g.vertex_count()}, {"edges", g.edge_count()}}},
            {"bridges", bridges}};
        emit_json(out, envelope<S>(opt), std::move(payload));
    } else {
        out << "vertices: " << g0.vertex_count() << ", edges: " << g0.edge_count()
            << ", total length: " << format_scalar(g0.total_length()) << "\n";
        out << "adequate: " << (g0.adequate() ? "yes" : "no");
        if (!g0.adequate())
            out << " (refined to " << g.vertex_count() << " vertices, " << g.edge_count()
                << " edges)";
        out << "\n";
        out << "bridges:";
        for (const auto& b : bridges) out << " " << b;
        if (bridges.empty()) out << " none";
        out << "\n";
    }
    return 0;
}

template <class S>
int cmd_value_matrix(const Session<S>& s, const Options& opt, std::ostream& out) {
    S tau = tau_constant(s.graph, s.pinv);
    ValueMatrix<S> z = value_matrix(s.graph, s.pinv, tau, thread_budget());
    const auto& g = s.graph;
    if (opt.format == "json") {
        emit_json(out, envelope<S>(opt), value_matrix_to_json(z, g));
    } else if (opt.format == "csv") {
        out << "i,j,edge_i,edge_j,kind,c_xx,c_yy,c_xy,c_x,c_y,c_abs,c_quad,c_const\n";
        for (int i = 0; i < z.edge_count(); ++i)
            for (int j = 0; j < z.edge_count(); ++j) {
                const GreenForm<S>& f = z.entry(i, j);
                out << i << ',' << j << ',' << g.edge(i).id << ',' << g.edge(j).id << ',';
                if (const auto* same = std::get_if<SameEdgeForm<S>>(&f))
                    out << "same,,,,,," << format_scalar(same->c_abs) << ','
                        << format_scalar(same->c_quad) << ',' << format_scalar(same->c_const);
                else {
                    const auto& c = std::get<CrossEdgeForm<S>>(f);
                    out << "cross," << format_scalar(c.c_xx) << ',' << format_scalar(c.c_yy)
                        << ',' << format_scalar(c.c_xy) << ',' << format_scalar(c.c_x) << ','
                        << format_scalar(c.c_y) << ",,," << format_scalar(c.c_const);
                }
                out << "\n";
            }
    } else {
        out << "tau = " << format_scalar(tau) << "\n";
        for (int i = 0; i < z.edge_count(); ++i)
            for (int j = 0; j < z.edge_count(); ++j)
                out << "z[" << g.edge(i).id << "][" << g.edge(j).id
                    << "] = " << format_green_form(z.entry(i, j), tau) << "\n";
    }
    return 0;
}

template <class S>
Point<S> random_point(std::mt19937_64& rng, const MetrizedGraph<S>& g) {
    std::uniform_int_distribution<int> kind(0, 4);
    if (g.edge_count() == 0 || kind(rng) == 0) {
        std::uniform_int_distribution<int> v(0, g.vertex_count() - 1);
        return Point<S>::at_vertex(v(rng));
    }
    std::uniform_int_distribution<int> e(0, g.edge_count() - 1);
    int edge = e(rng);
    const S& len = g.edge(edge).length;
    if constexpr (is_exact_v<S>) {
        std::uniform_int_distribution<int> num(0, 64);
        return g.canonical(Point<S>::on_edge(edge, len * S(num(rng)) / S(64)));
    } else {
        std::uniform_real_distribution<double> off(0.0, 1.0);
        return g.canonical(Point<S>::on_edge(edge, len * off(rng)));
    }
}

template <class S>
int cmd_verify(const Session<S>& s, const Options& opt, std::ostream& out) {
    const auto& g = s.graph;
    std::mt19937_64 rng(opt.seed);

    std::vector<Point<S>> xs, ys;
    for (int i = 0; i < opt.pairs; ++i) {
        xs.push_back(g.to_refined(random_point(rng, s.original)));
        ys.push_back(g.to_refined(random_point(rng, s.original)));
    }

    double max_res_dev = 0;
    const int chunk = 8;  // pairs per oracle call
    for (std::size_t lo = 0; lo < xs.size(); lo += chunk) {
        std::size_t hi = std::min(xs.size(), lo + chunk);
        std::vector<Point<S>> batch;
        for (std::size_t i = lo; i < hi; ++i) {
            batch.push_back(xs[i]);
            batch.push_back(ys[i]);
        }
        DenseMatrix<S> orc = oracle_resistance(g, batch);
        for (std::size_t i = lo; i < hi; ++i) {
            S direct = resistance(g, s.pinv, xs[i], ys[i]);
            S dev = direct - orc(2 * (i - lo), 2 * (i - lo) + 1);
            max_res_dev = std::max(max_res_dev, std::abs(to_double(dev)));
        }
    }

    S tau = tau_constant(g, s.pinv);
    ValueMatrix<S> z = value_matrix(g, s.pinv, tau, thread_budget());
    double max_z_dev = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        S dev = evaluate(z, g, xs[i], ys[i]) - green_can(g, s.pinv, tau, xs[i], ys[i]);
        max_z_dev = std::max(max_z_dev, std::abs(to_double(dev)));
    }

    // Quadrature cross-check: the secant rule on the k-subdivided graph must
    // land exactly tau_quadrature_defect below the closed form.
    double tau_dev;
    bool tau_exact_mode = is_exact_v<S> && opt.tau_k <= 16;
    if constexpr (is_exact_v<S>) {
        if (tau_exact_mode) {
            S quad = oracle_tau(g, opt.tau_k);
            S expected = tau - tau_quadrature_defect(g, s.pinv, opt.tau_k);
            tau_dev = std::abs(to_double(quad - expected));
        } else {
            MetrizedGraph<double> gd = refine_adequate(graph_from_spec<double>(s.spec));
            DenseMatrix<double> pd = pseudo_inverse(build_laplacian(gd));
            double quad = oracle_tau(gd, opt.tau_k);
            double expected =
                tau_constant(gd, pd) - tau_quadrature_defect(gd, pd, opt.tau_k);
            tau_dev = std::abs(quad - expected);
        }
    } else {
        S quad = oracle_tau(g, opt.tau_k);
        S expected = tau - tau_quadrature_defect(g, s.pinv, opt.tau_k);
        tau_dev = std::abs(to_double(quad - expected));
    }

    double scale = 1.0 + std::abs(to_double(tau));
    bool pass;
    if constexpr (is_exact_v<S>)
        pass = max_res_dev == 0 && max_z_dev == 0 && (tau_exact_mode ? tau_dev == 0 : tau_dev <= 1e-8 * scale);
    else
        pass = max_res_dev <= 1e-9 * scale && max_z_dev <= 1e-9 * scale && tau_dev <= 1e-8 * scale;

    if (opt.format == "json") {
        nlohmann::json payload{{"pairs", opt.pairs},
                               {"seed", opt.seed},
                               {"tau_k", opt.tau_k},
                               {"resistance_max_abs_dev", max_res_dev},
                               {"value_matrix_max_abs_dev", max_z_dev},
                               {"tau_quadrature_abs_dev", tau_dev},
                               {"pass", pass}};
        emit_json(out, envelope<S>(opt), std::move(payload));
    } else {
        out << "pointwise vs subdivision oracle, " << opt.pairs
            << " pairs: max |dev| = " << max_res_dev << "\n";
        out << "value matrix vs direct green: max |dev| = " << max_z_dev << "\n";
        out << "tau quadrature (k=" << opt.tau_k << ") vs closed form: |dev| = " << tau_dev
            << "\n";
        out << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? 0 : 1;
}

template <class S>
int dispatch(const Options& opt, std::ostream& out, std::ostream& err) {
    Session<S> s(opt);
    if constexpr (!is_exact_v<S>) {
        if (auto warn = condition_warning(s.graph)) err << "warning: " << *warn << "\n";
    }
    const auto& g = s.graph;

    if (opt.command == "info") return cmd_info(s, opt, out);
    if (opt.command == "laplacian") {
        emit_matrix(out, opt, g.vertex_names(), build_laplacian(g));
        return 0;
    }
    if (opt.command == "pinv") {
        emit_matrix(out, opt, g.vertex_names(), s.pinv);
        return 0;
    }
    if (opt.command == "resistance-matrix") {
        emit_matrix(out, opt, g.vertex_names(), resistance_matrix(s.pinv));
        return 0;
    }
    if (opt.command == "resistance") {
        auto pts = two_points(s, opt);
        emit_scalar(out, opt, {{"points", opt.at}}, resistance(g, s.pinv, pts[0], pts[1]));
        return 0;
    }
    if (opt.command == "tau") {
        emit_scalar(out, opt, {}, tau_constant(g, s.pinv));
        return 0;
    }
    if (opt.command == "green") {
        auto pts = two_points(s, opt);
        S tau = tau_constant(g, s.pinv);
        nlohmann::json payload{{"points", opt.at}, {"tau", format_scalar(tau)}};
        emit_scalar(out, opt, std::move(payload), green_can(g, s.pinv, tau, pts[0], pts[1]));
        return 0;
    }
    if (opt.command == "value-matrix") return cmd_value_matrix(s, opt, out);
    if (opt.command == "green-d") {
        if (opt.divisor_file.empty()) throw Usage("green-d requires --divisor");
        auto pts = two_points(s, opt);
        Divisor<S> d = parse_divisor(g, read_file(opt.divisor_file));
        S tau = tau_constant(g, s.pinv);
        DivisorGreen<S> dg = make_divisor_green(g, s.pinv, tau, std::move(d));
        nlohmann::json payload{{"points", opt.at},
                               {"divisor", opt.divisor_file},
                               {"degree", format_scalar(dg.degree)},
                               {"c", format_scalar(dg.constant)}};
        emit_scalar(out, opt, std::move(payload),
                    green_divisor(g, s.pinv, tau, dg, pts[0], pts[1]));
        return 0;
    }
    if (opt.command == "verify") return cmd_verify(s, opt, out);
    throw Usage("unknown subcommand '" + opt.command + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("mgreen");
    for (const auto& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"resistance, tau and Arakelov-Green computations on metrized graphs"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"info", "graph summary: counts, total length, refinement, bridges"},
        {"laplacian", "discrete Laplacian of the (refined) graph"},
        {"pinv", "Moore-Penrose pseudoinverse of the Laplacian"},
        {"resistance-matrix", "pairwise vertex resistance matrix"},
        {"resistance", "resistance between two points (--at twice)"},
        {"tau", "tau constant"},
        {"green", "canonical Arakelov-Green function at two points"},
        {"value-matrix", "per-edge-pair closed forms of the Green function"},
        {"green-d", "Arakelov-Green function of a divisor measure"},
        {"verify", "cross-check closed forms against the subdivision oracle"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-g,--graph", opt.graph_file, "graph JSON file")->required();
        sub->add_flag("--exact", opt.exact, "exact rational arithmetic");
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "pretty"}));
        if (name == "resistance" || name == "green" || name == "green-d")
            sub->add_option("--at", opt.at, "point: vertex name or edge:offset");
        if (name == "green-d") sub->add_option("--divisor", opt.divisor_file, "divisor JSON file");
        if (name == "verify") {
            sub->add_option("--pairs", opt.pairs, "random point pairs to test")
                ->check(CLI::PositiveNumber);
            sub->add_option("--tau-k", opt.tau_k, "subdivisions per edge for the tau quadrature")
                ->check(CLI::Range(2, 1000000));
            sub->add_option("--seed", opt.seed, "random seed");
        }
        sub->callback([&opt, name = name] { opt.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (opt.exact)
            return dispatch<Rational>(opt, out, err);
        return dispatch<double>(opt, out, err);
    } catch (const Usage& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mg::cli
