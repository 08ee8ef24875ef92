#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "forestrips/json_io.hpp"

using namespace frips;

namespace {

const FieldContext F5(5);

System golden_iet() {
    Scalar l1(Rational(-1, 2), Rational(1, 2), F5);
    Scalar l2(Rational(3, 2), Rational(-1, 2), F5);
    return iet_to_system(F5, {l1, l2}, {2, 1}, IndependenceDecl::declared);
}

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(FORESTRIPS_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string tmp_file(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/frips_test_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

} // namespace

TEST_CASE("document round trip is byte stable") {
    SystemDocument doc{golden_iet(), {{"name", "golden"}}};
    std::string once = render_document(doc);
    SystemDocument back = parse_document(once);
    std::string twice = render_document(back);
    CHECK(once == twice);
    CHECK(back.system.generator_count() == 2);
    CHECK(back.system.independence() == IndependenceDecl::declared);
    CHECK(back.metadata.at("name") == "golden");
    CHECK(back.system.forest().total_length() == Scalar::one(F5));
}

TEST_CASE("documents with violations are rejected with located errors") {
    std::string zero_len = R"({
      "field": {"d": 0},
      "trees": [{"vertices": [0, 1], "edges": [{"from": 0, "to": 1, "len": "0"}]}]
    })";
    CHECK_THROWS_WITH_AS(parse_document(zero_len),
                         doctest::Contains("edge length must be positive"), ValidationError);

    std::string distorted = R"({
      "field": {"d": 0},
      "trees": [{"vertices": [0, 1], "edges": [{"from": 0, "to": 1, "len": "2"}]}],
      "generators": [{"name": "a",
        "domain": [{"vertex": 0}, {"vertex": 1}],
        "anchors": [[{"vertex": 0}, {"vertex": 0}], [{"vertex": 1}, {"edge": 0, "offset": "1"}]]}]
    })";
    try {
        parse_document(distorted);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("distorts distance") != std::string::npos);
        CHECK(std::string(e.what()).find("generators[0]") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_document("not json"), ParseError);
    CHECK_THROWS_AS(parse_document("{}"), ParseError);
}

TEST_CASE("point specs") {
    System s = golden_iet();
    const Forest& f = s.forest();
    CHECK(points_equal(parse_point_spec(f, "v1"), f.vertex_point(1)));
    CHECK(points_equal(parse_point_spec(f, "e0@1/2"), f.edge_point(0, Scalar::ratio(1, 2, F5))));
    CHECK_THROWS_AS(parse_point_spec(f, "x3"), ParseError);
    Point p = parse_point_spec(f, "e0@(-1+sqrt(5))/2");
    CHECK(point_to_json(f, p).at("offset") == "-1/2+1/2*sqrt(5)");
}

TEST_CASE("cli: golden pipeline") {
    CliResult iet = run_cli("iet --lengths \"(-1+sqrt(5))/2,(3-sqrt(5))/2\" --perm \"2,1\" "
                            "--field-d 5 -o /tmp/frips_golden.json");
    REQUIRE(iet.code == 0);

    CliResult idx = run_cli("index /tmp/frips_golden.json --max-steps 5");
    CHECK(idx.code == 0);
    Json j = Json::parse(idx.out);
    CHECK(j.at("index").at("value") == 2);
    CHECK(j.at("index").at("method") == "halted-exact");

    CliResult graph = run_cli("graph /tmp/frips_golden.json --dot /tmp/frips_golden.dot");
    CHECK(graph.code == 0);
    CHECK(Json::parse(graph.out).at("graph_index") == 2);
    std::ifstream dot("/tmp/frips_golden.dot");
    std::string dot_text((std::istreambuf_iterator<char>(dot)), {});
    CHECK(dot_text.find("digraph") != std::string::npos);
    CHECK(dot_text.find("a1") != std::string::npos);

    CliResult cls = run_cli("classify /tmp/frips_golden.json --max-steps 5 --depth 8");
    CHECK(cls.code == 0);
    Json cj = Json::parse(cls.out);
    CHECK(cj.at("classification").at("label") == "surface_type");
    CHECK(cj.at("certificates").at("contracting") == true);

    CliResult cay = run_cli("cayley /tmp/frips_golden.json --point e0@1/3 --depth 6");
    CHECK(cay.code == 0);
    CHECK(Json::parse(cay.out).at("vertices") == 13);

    // deterministic output
    CliResult idx2 = run_cli("index /tmp/frips_golden.json --max-steps 5");
    CHECK(idx.out == idx2.out);
}

TEST_CASE("cli: collapsing chain halts with index 0") {
    CliResult iet = run_cli("iet --lengths \"1,1,1\" --perm \"1,2,3\" -o /tmp/frips_id3.json");
    REQUIRE(iet.code == 0);
    // build the shift system by hand instead: domain [0,2] inside [0,3]
    std::string chain = R"({
      "field": {"d": 0},
      "trees": [{"vertices": [0, 1], "edges": [{"from": 0, "id": 0, "len": "3", "to": 1}]}],
      "generators": [{"name": "a",
        "domain": [{"vertex": 0}, {"edge": 0, "offset": "2"}],
        "anchors": [[{"vertex": 0}, {"edge": 0, "offset": "1"}],
                    [{"edge": 0, "offset": "2"}, {"vertex": 1}]]}]
    })";
    std::string path = tmp_file("chain.json", chain);
    CliResult r = run_cli("run " + path + " --max-steps 10");
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("halted") == true);
    CHECK(j.at("final").at("graph_index") == 0);
    CHECK(j.at("final").at("components") == 0);

    CliResult step = run_cli("step " + path + " -o /tmp/frips_step.json --moves");
    CHECK(step.code == 0);
    CHECK(Json::parse(step.out).at("pieces") == 1);
    CliResult val = run_cli("validate /tmp/frips_step.json");
    CHECK(val.code == 0);
    CHECK(Json::parse(val.out).at("total_length") == "1");
}

TEST_CASE("cli: exit codes") {
    std::string bad = tmp_file("corrupt.json", "{broken");
    CHECK(run_cli("validate " + bad).code == 2);

    std::string zero = tmp_file("zero.json", R"({
      "field": {"d": 0},
      "trees": [{"vertices": [0, 1], "edges": [{"from": 0, "to": 1, "len": "0"}]}]
    })");
    CHECK(run_cli("validate " + zero).code == 2);

    // identity exchange: certificate is a negative analysis result
    run_cli("iet --lengths \"1\" --perm \"1\" -o /tmp/frips_one.json");
    CHECK(run_cli("cert /tmp/frips_one.json --depth 5").code == 1);
    // golden passes
    CHECK(run_cli("cert /tmp/frips_golden.json --depth 12").code == 0);
    // missing subcommand
    CHECK(run_cli("").code == 2);
}
