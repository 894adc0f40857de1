#include "agm/export.hpp"
#include "cli.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

using agm::aq::Aquarium;
using agm::aq::Vertex;
using agm::ff::Field;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = agm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) n += line.find(needle) != std::string::npos;
    return n;
}

}  // namespace

TEST_CASE("CSV round trip") {
    for (std::string spec : {"11", "13", "3^2", "5^2", "29"}) {
        CAPTURE(spec);
        Field F = Field::parse(spec);
        Aquarium A = Aquarium::build(F);
        std::ostringstream out;
        agm::io::write_csv(out, A);
        std::istringstream in(out.str());
        auto edges = agm::io::read_csv(in, F);
        std::set<std::pair<Vertex, Vertex>> read(edges.begin(), edges.end()), built;
        for (agm::aq::VertexId v = 0; v < A.size(); ++v)
            for (agm::aq::VertexId w : A.graph().children(v))
                if (w != agm::aq::kNone) built.insert({A.vertex(v), A.vertex(w)});
        CHECK(edges.size() == A.graph().edge_count());
        CHECK(read == built);
    }
    std::istringstream bad("a,b,a',b'\n1,2,3\n");
    CHECK_THROWS_AS(agm::io::read_csv(bad, Field(11, 1)), agm::PreconditionError);
    std::istringstream not_vertex("1,1,2,3\n");
    CHECK_THROWS_AS(agm::io::read_csv(not_vertex, Field(11, 1)), agm::PreconditionError);
}

TEST_CASE("DOT export of F_11") {
    Run r = run({"export", "--field", "11", "--format", "dot"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("digraph \"A(F_11)\" {\n", 0) == 0);
    CHECK(count_lines(r.out, "[label=") == 80);
    CHECK(count_lines(r.out, " -> ") == Aquarium::build(Field(11, 1)).graph().edge_count());
    CHECK(r.out.find("[label=\"1,3\"]") != std::string::npos);

    Run colored = run({"export", "--field", "13", "--format", "dot", "--color"});
    CHECK(count_lines(colored.out, "color=steelblue") == 96);
    CHECK(count_lines(colored.out, "color=gray60") == 24);
}

TEST_CASE("exports are byte stable across runs and thread counts") {
    for (std::string fmt : {"dot", "graphml", "csv"}) {
        Run a = run({"export", "--field", "3^3", "--format", fmt});
        Run b = run({"--threads", "3", "export", "--field", "3^3", "--format", fmt});
        Run c = run({"--threads", "1", "export", "--field", "3^3", "--format", fmt});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
    }
    Run g = run({"export", "--field", "3^2", "--format", "graphml", "--color"});
    CHECK(count_lines(g.out, "<node ") == 48);
    CHECK(count_lines(g.out, ">turtle<") == 16);
}

TEST_CASE("F_9 edge list is the turtle") {
    Run r = run({"export", "--field", "3^2", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    Field F(3, 2);
    auto edges = agm::io::read_csv(in, F);
    CHECK(edges.size() == 32);
    std::map<Vertex, int> out_degree;
    for (auto& [u, v] : edges) ++out_degree[u];
    CHECK(out_degree.size() == 16);
    for (auto& [v, k] : out_degree) CHECK(k == 2);
}

TEST_CASE("CLI commands") {
    Run b = run({"build", "--field", "11"});
    CHECK(b.code == 0);
    CHECK(b.out.find("vertices: 80\n") != std::string::npos);
    CHECK(run({"build", "--field", "3^2"}).out.find("vertices: 48\n") != std::string::npos);

    Run bad = run({"build", "--field", "4"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("p not prime") != std::string::npos);

    Run j = run({"build", "--field", "13", "--format", "json"});
    auto parsed = nlohmann::json::parse(j.out);
    CHECK(parsed["schema"] == 1);
    CHECK(parsed["vertices"] == 120);

    Run c = run({"census", "--field", "13"});
    CHECK(c.out.find("jellyfish: 0\n") != std::string::npos);
    CHECK(c.out.find("type acyclic: 0\n") != std::string::npos);
    CHECK(c.out.find("type jellyfish: 0\n") != std::string::npos);
    CHECK(c.out.find("type turtle: 0\n") != std::string::npos);

    auto census = nlohmann::json::parse(run({"census", "--field", "5^3", "--format", "json"}).out);
    bool found = false;
    for (const auto& s : census["notable"])
        found |= s["type"] == "jellyfish" && s["size"] == 48 && s["head_lengths"] == std::vector<int>{6};
    CHECK(found);

    Run curve = run({"curve", "--field", "17", "--lambda", "2"});
    auto cj = nlohmann::json::parse(curve.out);
    CHECK(cj["schema"] == 1);
    CHECK(cj["order"] == 16);
    CHECK(cj["lambda"] == "2");

    auto ext = nlohmann::json::parse(run({"curve", "--field", "3^2", "--lambda", "1+1*t"}).out);
    CHECK(ext["lambda"] == "1+1*t");

    Run comp = run({"component", "--field", "13", "--a", "1", "--b", "3", "--extend", "2", "--format", "json"});
    REQUIRE(comp.code == 0);
    auto levels = nlohmann::json::parse(comp.out)["levels"];
    REQUIRE(levels.size() == 2);
    CHECK(levels[0]["type"] == "fish");
    CHECK(levels[1]["size"].get<std::uint64_t>() > levels[0]["size"].get<std::uint64_t>());
    CHECK(run({"component", "--field", "13", "--a", "1", "--b", "1"}).code == 2);

    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"build"}).code == 2);
    CHECK(run({"export", "--field", "11", "--format", "png"}).code == 2);
}

TEST_CASE("verify exit-code matrix") {
    Run pass = run({"verify", "--field", "13", "--check", "identity"});
    CHECK(pass.code == 0);
    auto report = nlohmann::json::parse(pass.out);
    CHECK(report["schema"] == 1);
    CHECK(report["reports"][0]["status"] == "pass");
    CHECK(report["reports"][0]["ledger"]["lhs"] == 48);

    CHECK(run({"verify", "--field", "13", "--check", "identity", "--inject-edge-fault"}).code == 1);
    CHECK(run({"verify", "--field", "13", "--check", "ms", "--s", "-2"}).code == 3);
    CHECK(run({"verify", "--field", "15", "--check", "identity"}).code == 2);
    CHECK(run({"verify", "--field", "11", "--check", "identity"}).code == 2);
    CHECK(run({"verify", "--field", "13", "--check", "bogus"}).code == 2);
    CHECK(run({"verify", "--field", "29", "--check", "multiplicity"}).code == 0);
    CHECK(run({"verify", "--field", "13", "--check", "taxonomy", "--inject-edge-fault"}).code == 1);
}

TEST_CASE("budgets from flags and environment") {
    CHECK(run({"--max-q", "100", "build", "--field", "101"}).code == 2);
    CHECK(run({"--memory-cap", "1KB", "build", "--field", "101"}).code == 2);
    setenv("AGM_MAX_Q", "100", 1);
    CHECK(run({"build", "--field", "101"}).code == 2);
    CHECK(run({"--max-q", "1000", "build", "--field", "101"}).code == 0);
    unsetenv("AGM_MAX_Q");
    CHECK(run({"build", "--field", "101"}).code == 0);
}
