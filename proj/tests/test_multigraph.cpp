#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "forestrips/multigraph.hpp"

using namespace frips;

namespace {

MultiGraph rose(int petals) {
    MultiGraph g;
    g.add_vertex(0);
    for (int i = 0; i < petals; ++i) g.add_edge(i, 0, 0);
    return g;
}

MultiGraph path(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(i);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i, i + 1);
    return g;
}

MultiGraph cycle(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(i);
    for (int i = 0; i < n; ++i) g.add_edge(i, i, (i + 1) % n);
    return g;
}

MultiGraph random_graph(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nv(1, 6), ne(0, 8);
    int v = nv(rng);
    MultiGraph g;
    for (int i = 0; i < v; ++i) g.add_vertex(i);
    std::uniform_int_distribution<int> pick(0, v - 1);
    int edges = ne(rng);
    for (int i = 0; i < edges; ++i) g.add_edge(i, pick(rng), pick(rng));
    return g;
}

/// Brute-force core: one pass strips all valence<=1 vertices simultaneously;
/// repeat to a fixed point.
MultiGraph fixed_point_core(MultiGraph g) {
    for (;;) {
        std::vector<int> bad;
        for (const auto& v : g.vertices)
            if (g.valence(v.id) <= 1) bad.push_back(v.id);
        if (bad.empty()) return g;
        MultiGraph next;
        for (const auto& v : g.vertices)
            if (std::find(bad.begin(), bad.end(), v.id) == bad.end()) next.vertices.push_back(v);
        for (const auto& e : g.edges)
            if (next.has_vertex(e.from) && next.has_vertex(e.to)) next.edges.push_back(e);
        g = next;
    }
}

bool same_graph(const MultiGraph& a, const MultiGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
    for (const auto& v : a.vertices)
        if (!b.has_vertex(v.id)) return false;
    for (const auto& e : a.edges) {
        bool found = false;
        for (const auto& f : b.edges)
            if (f.id == e.id && f.from == e.from && f.to == e.to) found = true;
        if (!found) return false;
    }
    return true;
}

} // namespace

TEST_CASE("core: paths vanish, cycles stay, pendants get stripped") {
    CHECK(graph_core(path(3)).vertex_count() == 0);
    CHECK(same_graph(graph_core(cycle(5)), cycle(5)));
    MultiGraph g = cycle(3);
    g.add_vertex(10);
    g.add_edge(10, 1, 10); // pendant
    MultiGraph c = graph_core(g);
    CHECK(c.vertex_count() == 3);
    CHECK(c.edge_count() == 3);
    CHECK(!c.has_vertex(10));
}

TEST_CASE("index values") {
    // graph with vertex indices 2, 0, 1, -1 and total index 2
    MultiGraph g;
    for (int i = 1; i <= 4; ++i) g.add_vertex(i);
    g.add_edge(0, 1, 2);
    g.add_edge(1, 2, 3);
    g.add_edge(2, 3, 1);
    g.add_edge(3, 1, 4);
    g.add_edge(4, 1, 3);
    CHECK(g.valence(1) == 4);
    CHECK(g.valence(2) == 2);
    CHECK(g.valence(3) == 3);
    CHECK(g.valence(4) == 1);
    CHECK(graph_index(g) == 2);
    CHECK(graph_index_via_core(g) == 2);

    CHECK(graph_index(path(4)) == 0);
    for (int n = 1; n <= 5; ++n) CHECK(graph_index(rose(n)) == 2 * n - 2);
    // loops count twice for valence: a rose survives its own core
    CHECK(graph_core(rose(1)).edge_count() == 1);
}

TEST_CASE("core oracle and index formulas agree on random graphs") {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 600; ++it) {
        MultiGraph g = random_graph(rng);
        CHECK(same_graph(graph_core(g), fixed_point_core(g)));
        CHECK(graph_index(g) == graph_index_via_core(g));
    }
}

TEST_CASE("morphisms") {
    MultiGraph g = cycle(3);
    // identity
    GraphMorphism id{g, g, {{0, 0}, {1, 1}, {2, 2}}, {{0, 0}, {1, 1}, {2, 2}}};
    auto rid = morphism_index_check(id);
    CHECK(rid.injective_on_edges);
    CHECK(rid.source_index == rid.target_index);

    // subgraph inclusion: path of 2 inside the cycle
    MultiGraph sub;
    sub.add_vertex(0);
    sub.add_vertex(1);
    sub.add_edge(0, 0, 1);
    GraphMorphism incl{sub, g, {{0, 0}, {1, 1}}, {{0, 0}}};
    auto rincl = morphism_index_check(incl);
    CHECK(rincl.injective_on_edges);
    CHECK(rincl.source_index <= rincl.target_index);

    // a fold: two parallel edges mapped to one
    MultiGraph par;
    par.add_vertex(0);
    par.add_vertex(1);
    par.add_edge(0, 0, 1);
    par.add_edge(1, 0, 1);
    MultiGraph single;
    single.add_vertex(0);
    single.add_vertex(1);
    single.add_edge(0, 0, 1);
    GraphMorphism fold{par, single, {{0, 0}, {1, 1}}, {{0, 0}, {1, 0}}};
    CHECK(!morphism_index_check(fold).injective_on_edges);

    // incidence violation rejected
    GraphMorphism bad{sub, g, {{0, 0}, {1, 2}}, {{0, 0}}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("morphism index inequality on random subgraph inclusions") {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 200; ++it) {
        MultiGraph g = random_graph(rng);
        if (g.edge_count() == 0) continue;
        // random subgraph: keep a random subset of edges, all vertices
        MultiGraph sub;
        sub.vertices = g.vertices;
        GraphMorphism m;
        std::uniform_int_distribution<int> coin(0, 1);
        for (const auto& e : g.edges)
            if (coin(rng)) {
                sub.edges.push_back(e);
                m.edge_map[e.id] = e.id;
            }
        m.source = sub;
        m.target = g;
        for (const auto& v : g.vertices) m.vertex_map[v.id] = v.id;
        auto r = morphism_index_check(m);
        CHECK(r.injective_on_edges);
        CHECK(r.source_index <= r.target_index);
    }
}

TEST_CASE("dot output is deterministic") {
    MultiGraph g;
    g.add_vertex(2, "two");
    g.add_vertex(1, "one");
    g.add_edge(5, 2, 1, "x");
    g.add_edge(3, 1, 1, "y");
    std::string d1 = to_dot(g), d2 = to_dot(g);
    CHECK(d1 == d2);
    CHECK(d1.find("v1 [label=\"one\"]") != std::string::npos);
    CHECK(d1.find("v1 -> v1 [label=\"y\"]") < d1.find("v2 -> v1 [label=\"x\"]"));
}
