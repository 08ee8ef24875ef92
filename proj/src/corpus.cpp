#include "forestrips/corpus.hpp"

#include <algorithm>
#include <numeric>

namespace frips::corpus {

namespace {

long draw(std::mt19937_64& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

} // namespace

Forest random_forest(std::mt19937_64& rng, FieldContext field, const ForestConfig& cfg) {
    int trees = static_cast<int>(draw(rng, cfg.min_trees, cfg.max_trees));
    int budget = static_cast<int>(draw(rng, cfg.min_edges, cfg.max_edges));
    std::vector<Forest::TreeSpec> specs;
    int vid = 0, eid = 0;
    for (int t = 0; t < trees; ++t) {
        int remaining_trees = trees - t - 1;
        int edges = t + 1 == trees ? budget
                                   : static_cast<int>(draw(rng, 1, std::max<long>(1, budget - remaining_trees)));
        budget -= edges;
        Forest::TreeSpec spec;
        spec.vertices.push_back(vid++);
        for (int e = 0; e < edges; ++e) {
            int attach = spec.vertices[draw(rng, 0, spec.vertices.size() - 1)];
            spec.vertices.push_back(vid);
            Scalar len = Scalar::ratio(draw(rng, 1, cfg.max_num), draw(rng, 1, cfg.max_den), field);
            spec.edges.push_back({eid++, attach, vid++, len});
        }
        specs.push_back(std::move(spec));
    }
    return Forest(field, std::move(specs));
}

Point random_point(std::mt19937_64& rng, const Forest& f) {
    auto eids = f.edge_ids();
    if (eids.empty() || draw(rng, 0, 5) == 0) {
        auto vids = f.vertex_ids();
        return f.vertex_point(vids[draw(rng, 0, vids.size() - 1)]);
    }
    int eid = eids[draw(rng, 0, eids.size() - 1)];
    Scalar t = Scalar::ratio(draw(rng, 0, 12), 12, f.field());
    return f.edge_point(eid, f.edge_length(eid) * t);
}

Point random_point_in_tree(std::mt19937_64& rng, const Forest& f, int tree) {
    for (;;) {
        Point p = random_point(rng, f);
        if (f.tree_of(p) == tree) return p;
    }
}

System random_system(std::mt19937_64& rng, FieldContext field, const SystemConfig& cfg) {
    Forest f = random_forest(rng, field, cfg.forest);
    int want = static_cast<int>(draw(rng, cfg.min_generators, cfg.max_generators));
    std::vector<PartialIsometry> gens;
    int attempts = 0;
    while (static_cast<int>(gens.size()) < want && attempts < 200) {
        ++attempts;
        int t0 = static_cast<int>(draw(rng, 0, f.tree_count() - 1));
        Point p = random_point_in_tree(rng, f, t0);
        Point q = draw(rng, 0, 4) == 0 ? p : random_point_in_tree(rng, f, t0);
        Scalar len = f.distance(p, q);

        int t1 = static_cast<int>(draw(rng, 0, f.tree_count() - 1));
        Point p_img = random_point_in_tree(rng, f, t1);
        // place the far endpoint toward a leaf with enough room
        std::vector<int> leaves = f.leaf_vertices(t1);
        std::shuffle(leaves.begin(), leaves.end(), rng);
        std::optional<Point> q_img;
        for (int leaf : leaves) {
            Point lp = f.vertex_point(leaf);
            if (f.distance(p_img, lp) >= len) {
                q_img = f.point_at(p_img, lp, len);
                break;
            }
        }
        if (!q_img) continue;
        std::string name = "a" + std::to_string(gens.size() + 1);
        std::vector<std::pair<Point, Point>> anchors;
        if (points_equal(p, q))
            anchors = {{p, p_img}};
        else
            anchors = {{p, p_img}, {q, *q_img}};
        gens.push_back(PartialIsometry::build(f, name, f.make_subtree({p, q}), anchors));
    }
    if (gens.empty()) {
        // guaranteed fallback: a point map between two random spots
        Point p = random_point(rng, f);
        Point q = random_point_in_tree(rng, f, f.tree_of(p));
        gens.push_back(PartialIsometry::build(f, "a1", f.make_subtree({p}), {{p, q}}));
    }
    return System(f, std::move(gens));
}

std::vector<int> random_irreducible_permutation(std::mt19937_64& rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    if (n == 1) return perm;
    for (int tries = 0; tries < 1000; ++tries) {
        std::shuffle(perm.begin(), perm.end(), rng);
        bool irreducible = true;
        std::vector<int> pos(n + 1);
        for (int j = 0; j < n; ++j) pos[perm[j]] = j;
        for (int k = 1; k < n; ++k) {
            int maxpos = 0;
            for (int i = 1; i <= k; ++i) maxpos = std::max(maxpos, pos[i]);
            if (maxpos == k - 1) irreducible = false; // 1..k occupy the first k slots
        }
        if (irreducible) return perm;
    }
    throw InternalError("no irreducible permutation found");
}

System random_quadratic_iet(std::mt19937_64& rng, int n, FieldContext field) {
    std::vector<Scalar> lengths;
    bool has_root_part = false;
    for (int i = 0; i < n; ++i) {
        for (;;) {
            Rational p(draw(rng, 1, 4), draw(rng, 1, 3));
            Rational q(draw(rng, -1, 1), draw(rng, 2, 5));
            Scalar len(p, q, field);
            if (len.sign() > 0) {
                lengths.push_back(len);
                if (!len.is_rational()) has_root_part = true;
                break;
            }
        }
    }
    if (!has_root_part && field.d > 1) {
        // force at least one genuinely irrational length
        lengths[0] = lengths[0] + Scalar::root_multiple(Rational(1, 3), field);
    }
    return iet_to_system(field, lengths, random_irreducible_permutation(rng, n));
}

MultiGraph random_multigraph(std::mt19937_64& rng, int max_vertices, int max_edges) {
    int v = static_cast<int>(draw(rng, 1, max_vertices));
    MultiGraph g;
    for (int i = 0; i < v; ++i) g.add_vertex(i);
    int e = static_cast<int>(draw(rng, 0, max_edges));
    for (int i = 0; i < e; ++i)
        g.add_edge(i, static_cast<int>(draw(rng, 0, v - 1)), static_cast<int>(draw(rng, 0, v - 1)));
    return g;
}

std::pair<Forest, std::vector<Subtree>> random_covering_family(std::mt19937_64& rng,
                                                               FieldContext field) {
    ForestConfig cfg;
    cfg.min_trees = cfg.max_trees = 1;
    cfg.min_edges = 1;
    cfg.max_edges = 7;
    Forest f = random_forest(rng, field, cfg);

    // leaves in planar (depth-first) order around the tree
    std::vector<int> order;
    std::vector<int> stack{0};
    std::vector<bool> seen(f.vertex_count(), false);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = true;
        if (f.degree(v) <= 1) order.push_back(v);
        std::vector<int> nbrs;
        for (int eid : f.edge_ids()) {
            if (f.edge_from(eid) == v) nbrs.push_back(f.edge_to(eid));
            if (f.edge_to(eid) == v) nbrs.push_back(f.edge_from(eid));
        }
        std::sort(nbrs.rbegin(), nbrs.rend());
        for (int w : nbrs)
            if (!seen[w]) stack.push_back(w);
    }

    std::vector<Subtree> family;
    int m = static_cast<int>(order.size());
    for (int i = 0; i < m; ++i)
        family.push_back(
            f.arc_subtree(f.vertex_point(order[i]), f.vertex_point(order[(i + 1) % m])));
    return {std::move(f), std::move(family)};
}

} // namespace frips::corpus
