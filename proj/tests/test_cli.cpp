#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "mg/cli.hpp"
#include "mg/green.hpp"
#include "mg/io.hpp"
#include "mg/pointwise.hpp"
#include "support/fixtures.hpp"

using mg::Point;
using mg::Rational;
using S = Rational;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = mg::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content)
        : path("mgtest_" + name) {
        std::ofstream f(path);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

const char* kTetrahedron = R"({
  "vertices": ["v1", "v2", "v3", "v4"],
  "edges": [
    {"id": "e1", "from": "v1", "to": "v2", "length": 1},
    {"id": "e2", "from": "v1", "to": "v3", "length": 1},
    {"id": "e3", "from": "v1", "to": "v4", "length": 1},
    {"id": "e4", "from": "v2", "to": "v3", "length": 1},
    {"id": "e5", "from": "v2", "to": "v4", "length": 1},
    {"id": "e6", "from": "v3", "to": "v4", "length": 1}
  ]
})";

const char* kTree = R"({
  "vertices": ["v1", "v2", "v3", "v4", "v5", "v6"],
  "edges": [
    {"id": "e1", "from": "v1", "to": "v3", "length": 1},
    {"id": "e2", "from": "v2", "to": "v3", "length": 1},
    {"id": "e3", "from": "v3", "to": "v4", "length": 1},
    {"id": "e4", "from": "v4", "to": "v5", "length": 1},
    {"id": "e5", "from": "v4", "to": "v6", "length": 1}
  ]
})";

}  // namespace

TEST_CASE("tau on the tetrahedron, exact and float") {
    TempFile f("k4.json", kTetrahedron);
    auto exact = invoke({"tau", "-g", f.path, "--exact"});
    CHECK(exact.code == 0);
    CHECK(exact.out == "5/16\n");
    auto approx = invoke({"tau", "-g", f.path});
    CHECK(approx.code == 0);
    CHECK(approx.out == "0.3125\n");
}

TEST_CASE("resistance between K4 vertices") {
    TempFile f("k4.json", kTetrahedron);
    auto r = invoke({"resistance", "-g", f.path, "--at", "v1", "--at", "v2", "--exact"});
    CHECK(r.code == 0);
    CHECK(r.out == "1/2\n");
}

TEST_CASE("green on the tree at two midpoints") {
    TempFile f("tree.json", kTree);
    auto r = invoke({"green", "-g", f.path, "--at", "e2:0.5", "--at", "e4:0.5", "--exact"});
    CHECK(r.code == 0);
    CHECK(r.out == "1/4\n");
    // fraction offsets parse too
    auto r2 = invoke({"green", "-g", f.path, "--at", "e2:1/2", "--at", "e4:1/2", "--exact"});
    CHECK(r2.out == "1/4\n");
}

TEST_CASE("green-d with a divisor file") {
    TempFile f("k4.json", kTetrahedron);
    TempFile d("div.json", R"({"v1": 1})");
    auto r = invoke({"green-d", "-g", f.path, "--divisor", d.path, "--at", "v2", "--at", "v3",
                     "--exact"});
    CHECK(r.code == 0);
    CHECK(r.out == "1/18\n");
}

TEST_CASE("json envelope carries command, mode and payload") {
    TempFile f("k4.json", kTetrahedron);
    auto r = invoke({"tau", "-g", f.path, "--exact", "--format", "json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("command") == "tau");
    CHECK(j.at("mode") == "rational");
    CHECK(j.at("payload").at("value") == "5/16");
}

TEST_CASE("laplacian and pinv emit matrices") {
    TempFile f("k4.json", kTetrahedron);
    auto csv = invoke({"laplacian", "-g", f.path, "--exact", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.substr(0, 11) == "3,-1,-1,-1\n");
    auto j = nlohmann::json::parse(
        invoke({"pinv", "-g", f.path, "--exact", "--format", "json"}).out);
    CHECK(j.at("payload").at("matrix")[0][0] == "3/16");
    auto rm = invoke({"resistance-matrix", "-g", f.path, "--exact", "--format", "csv"});
    CHECK(rm.out.substr(0, 10) == "0,1/2,1/2,");
}

TEST_CASE("value-matrix json round-trips and reevaluates") {
    TempFile f("tree.json", kTree);
    auto r = invoke({"value-matrix", "-g", f.path, "--exact", "--format", "json"});
    CHECK(r.code == 0);
    auto payload = nlohmann::json::parse(r.out).at("payload");
    auto z = mg::value_matrix_from_json<S>(payload);

    auto g = refine_adequate(mg::parse_graph<S>(kTree));
    auto pinv = mg::pseudo_inverse(mg::build_laplacian(g));
    S tau = mg::tau_constant(g, pinv);
    CHECK(z.tau() == tau);
    std::mt19937_64 rng(101);
    for (int i = 0; i < 40; ++i) {
        Point<S> x = fixtures::random_point(rng, g);
        Point<S> y = fixtures::random_point(rng, g);
        CHECK(mg::evaluate(z, g, x, y) == mg::green_can(g, pinv, tau, x, y));
    }
}

TEST_CASE("value-matrix pretty format shows the paper-style forms") {
    TempFile f("tree.json", kTree);
    auto r = invoke({"value-matrix", "-g", f.path, "--exact"});
    CHECK(r.code == 0);
    CHECK(r.out.find("tau = 5/4") != std::string::npos);
    CHECK(r.out.find("tau - (1/2)(") != std::string::npos);
    CHECK(r.out.find("|x-y|") != std::string::npos);
}

TEST_CASE("verify passes on well-formed graphs") {
    TempFile f("k4.json", kTetrahedron);
    auto exact = invoke({"verify", "-g", f.path, "--exact", "--pairs", "12", "--tau-k", "6"});
    CHECK(exact.code == 0);
    CHECK(exact.out.find("PASS") != std::string::npos);
    auto fl = invoke({"verify", "-g", f.path, "--pairs", "12", "--tau-k", "25"});
    CHECK(fl.code == 0);
}

TEST_CASE("info summarizes the graph") {
    TempFile f("tree.json", kTree);
    auto r = invoke({"info", "-g", f.path, "--format", "json"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("payload").at("adequate") == true);
    CHECK(j.at("payload").at("bridges").size() == 5);
    CHECK(j.at("payload").at("total_length") == "5");
}

TEST_CASE("exit codes: usage errors are 2, validation errors are 1") {
    TempFile f("k4.json", kTetrahedron);
    CHECK(invoke({"no-such-command"}).code == 2);
    CHECK(invoke({"tau"}).code == 2);  // missing -g
    CHECK(invoke({"resistance", "-g", f.path, "--at", "v1"}).code == 2);  // one point
    CHECK(invoke({"resistance", "-g", f.path, "--at", "v1;bad", "--at", "v2"}).code == 2);
    CHECK(invoke({"resistance", "-g", f.path, "--at", "e1:zz", "--at", "v2"}).code == 2);

    CHECK(invoke({"tau", "-g", "missing_file.json"}).code == 1);
    CHECK(invoke({"resistance", "-g", f.path, "--at", "e1:7", "--at", "v2"}).code == 1);
    TempFile bad("bad.json", R"({"vertices": ["a","b","c"], "edges": [
        {"id":"e1","from":"a","to":"b","length":1}]})");
    CHECK(invoke({"tau", "-g", bad.path}).code == 1);  // disconnected
    auto help = invoke({"--help"});
    CHECK(help.code == 0);
}

TEST_CASE("non-adequate input refines transparently for point queries") {
    TempFile f("loop.json", R"({
      "vertices": ["v"],
      "edges": [{"id": "e1", "from": "v", "to": "v", "length": 3}]
    })");
    // circle of circumference 3: r(x,y) with arc 1 is 1*2/3
    auto r = invoke({"resistance", "-g", f.path, "--at", "e1:0", "--at", "e1:1", "--exact"});
    CHECK(r.code == 0);
    CHECK(r.out == "2/3\n");
}
