#include "forestrips/machine.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>

namespace frips {

namespace {

int log_level() {
    static int level = [] {
        const char* v = std::getenv("RIPS_LOG");
        return v ? std::atoi(v) : 0;
    }();
    return level;
}

/// A stage component during the move decomposition: a set of surviving
/// pieces plus its convex hull in the ambient forest.
struct Entry {
    int tree;
    std::vector<int> piece_ids;
    Subtree hull;
    int parent = -1; // entry index at the previous stage
};

// (generator index, source entry, target entry); sorted lists double as
// stage graphs with the position as the edge id.
using EdgeKey = std::tuple<int, int, int>;

MultiGraph keys_to_graph(const System& s, std::size_t vertices,
                         const std::vector<EdgeKey>& keys) {
    MultiGraph g;
    for (std::size_t i = 0; i < vertices; ++i) g.add_vertex(static_cast<int>(i));
    int eid = 0;
    for (const auto& [gi, from, to] : keys)
        g.add_edge(eid++, from, to, s.generators()[gi].name());
    return g;
}

} // namespace

RipsStep elementary_step(const System& s) {
    const Forest& f = s.forest();
    std::vector<Letter> alphabet = s.letters();

    // Surviving locus: union of pairwise intersections of letter domains.
    std::vector<Subtree> raw;
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        for (std::size_t j = i + 1; j < alphabet.size(); ++j)
            if (auto k = f.intersect(s.letter_domain(alphabet[i]), s.letter_domain(alphabet[j])))
                raw.push_back(*k);

    // Merge overlapping intersections into components.
    std::vector<int> leader(raw.size());
    std::iota(leader.begin(), leader.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (leader[x] != x) x = leader[x] = leader[leader[x]];
        return x;
    };
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (raw[i].tree != raw[j].tree || find(i) == find(j)) continue;
            if (f.intersect(raw[i], raw[j])) leader[find(i)] = find(j);
        }
    std::map<int, std::vector<Point>> groups;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto& pts = groups[find(static_cast<int>(i))];
        pts.insert(pts.end(), raw[i].generators.begin(), raw[i].generators.end());
    }
    std::vector<Subtree> pieces;
    for (const auto& [root, pts] : groups) pieces.push_back(f.make_subtree(pts));
    std::sort(pieces.begin(), pieces.end(), [&](const Subtree& a, const Subtree& b) {
        return f.subtree_key(a) < f.subtree_key(b);
    });

    RipsStep step{.fixed_point = false,
                  .next = s,
                  .pieces = pieces,
                  .peripheral_length = Scalar::zero(f.field()),
                  .arcs_length = Scalar::zero(f.field())};

    // Fixed point: every component survives whole.
    if (static_cast<int>(pieces.size()) == f.tree_count()) {
        bool all_whole = true;
        for (const auto& p : pieces)
            if (!f.subtree_equal(p, f.whole_tree(p.tree))) all_whole = false;
        if (all_whole) {
            step.fixed_point = true;
            MultiGraph g = s.associated_graph();
            step.tau.source = g;
            step.tau.target = g;
            for (const auto& v : g.vertices) step.tau.vertex_map[v.id] = v.id;
            for (const auto& e : g.edges) step.tau.edge_map[e.id] = e.id;
            step.preliminary = step.tau;
            step.parent_generator.resize(s.generator_count());
            std::iota(step.parent_generator.begin(), step.parent_generator.end(), 0);
            return step;
        }
    }

    // Rebuild the surviving pieces as a standalone forest.
    Materialization transfer = f.materialize(pieces);

    // Restrict every generator to every ordered pair of pieces.
    std::vector<PartialIsometry> next_gens;
    std::vector<std::vector<PartialIsometry>> per_gen(s.generator_count());
    std::vector<std::vector<int>> per_gen_parent(s.generator_count());
    for (int gi = 0; gi < s.generator_count(); ++gi) {
        const PartialIsometry& g = s.generators()[gi];
        for (std::size_t p0 = 0; p0 < pieces.size(); ++p0) {
            if (pieces[p0].tree != g.domain().tree) continue;
            for (std::size_t p1 = 0; p1 < pieces.size(); ++p1) {
                if (pieces[p1].tree != g.range().tree) continue;
                auto r = g.restricted(f, pieces[p0], pieces[p1]);
                if (!r) continue;
                std::vector<std::pair<Point, Point>> anchors;
                std::vector<Point> dom_pts;
                for (const auto& [src, dst] : r->anchors())
                    anchors.emplace_back(transfer.to_new(f, static_cast<int>(p0), src),
                                         transfer.to_new(f, static_cast<int>(p1), dst));
                for (const auto& a : anchors) dom_pts.push_back(a.first);
                Subtree dom = transfer.forest->make_subtree(dom_pts);
                per_gen[gi].push_back(
                    PartialIsometry::build(*transfer.forest, g.name(), dom, anchors));
                per_gen_parent[gi].push_back(gi);
            }
        }
    }
    for (int gi = 0; gi < s.generator_count(); ++gi) {
        for (std::size_t k = 0; k < per_gen[gi].size(); ++k) {
            PartialIsometry iso = per_gen[gi][k];
            if (per_gen[gi].size() > 1)
                iso.set_name(iso.name() + "." + std::to_string(k));
            next_gens.push_back(std::move(iso));
            step.parent_generator.push_back(per_gen_parent[gi][k]);
        }
    }
    step.next = System(*transfer.forest, std::move(next_gens), s.independence(),
                       s.certified_depth());

    // --- move decomposition in ambient coordinates ---------------------------
    // Preliminary move: erase everything outside the convex hulls.
    std::vector<Entry> entries;
    for (int t = 0; t < f.tree_count(); ++t) {
        std::vector<int> in_tree;
        std::vector<Point> pts;
        for (std::size_t p = 0; p < pieces.size(); ++p)
            if (pieces[p].tree == t) {
                in_tree.push_back(static_cast<int>(p));
                pts.insert(pts.end(), pieces[p].generators.begin(), pieces[p].generators.end());
            }
        Scalar hull_len = Scalar::zero(f.field());
        if (!in_tree.empty()) {
            Subtree hull = f.make_subtree(pts);
            hull_len = f.subtree_length(hull);
            entries.push_back(Entry{t, in_tree, hull, -1});
        }
        step.peripheral_length += f.tree_length(t) - hull_len;
    }

    // Non-emptiness of a restriction without building it: does some point of
    // k0 inside the domain land in k1?
    auto nonempty = [&](int gi, const Subtree& k0, const Subtree& k1) -> bool {
        const PartialIsometry& g = s.generators()[gi];
        if (k0.tree != g.domain().tree || k1.tree != g.range().tree) return false;
        auto dom = f.intersect(g.domain(), k0);
        if (!dom) return false;
        std::vector<Point> imgs;
        for (const auto& p : dom->generators) imgs.push_back(g.apply(f, p));
        return f.intersect(Subtree{k1.tree, std::move(imgs)}, k1).has_value();
    };
    auto all_keys = [&](const std::vector<Entry>& es) {
        std::vector<EdgeKey> keys;
        for (int gi = 0; gi < s.generator_count(); ++gi)
            for (std::size_t e0 = 0; e0 < es.size(); ++e0)
                for (std::size_t e1 = 0; e1 < es.size(); ++e1)
                    if (nonempty(gi, es[e0].hull, es[e1].hull))
                        keys.emplace_back(gi, static_cast<int>(e0), static_cast<int>(e1));
        std::sort(keys.begin(), keys.end());
        return keys;
    };

    std::vector<EdgeKey> keys = all_keys(entries);
    MultiGraph prev_graph = keys_to_graph(s, entries.size(), keys);
    {
        // hull stage -> graph(S); injective on edges since hulls are unique per tree
        GraphMorphism pre;
        pre.source = prev_graph;
        pre.target = s.associated_graph();
        for (std::size_t i = 0; i < entries.size(); ++i)
            pre.vertex_map[static_cast<int>(i)] = entries[i].tree;
        for (std::size_t e = 0; e < keys.size(); ++e)
            pre.edge_map[static_cast<int>(e)] = std::get<0>(keys[e]);
        pre.validate();
        if (!pre.injective_on_edges())
            throw InternalError("peripheral move must be injective on edges");
        if (graph_index(prev_graph) > graph_index(pre.target))
            throw InternalError("peripheral move increased the graph index");
        step.preliminary = pre;
    }

    // Bridge arcs: split entries until every entry is a single piece.
    for (;;) {
        int which = -1;
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].piece_ids.size() >= 2) which = static_cast<int>(i);
        if (which < 0) break;
        Entry cur = entries[which];

        // candidate pieces: disjoint from the hull of the others
        int chosen = -1;
        Subtree chosen_rest_hull = cur.hull;
        std::string best_key;
        for (int pid : cur.piece_ids) {
            std::vector<Point> rest;
            for (int other : cur.piece_ids)
                if (other != pid)
                    rest.insert(rest.end(), pieces[other].generators.begin(),
                                pieces[other].generators.end());
            Subtree rest_hull = f.make_subtree(rest);
            if (f.intersect(pieces[pid], rest_hull)) continue;
            std::string key = f.subtree_key(pieces[pid]);
            if (chosen < 0 || key < best_key) {
                chosen = pid;
                best_key = key;
                chosen_rest_hull = rest_hull;
            }
        }
        if (chosen < 0)
            throw InternalError("no detachable piece in a multi-piece component");

        // the open arc between the chosen piece and the rest
        Point y0 = chosen_rest_hull.generators[0];
        Point x = f.project(pieces[chosen], y0);
        Point y = f.project(chosen_rest_hull, x);
        Scalar arc_len = f.distance(x, y);
        if (arc_len.sign() <= 0) throw InternalError("bridge arc has zero length");

        RipsMove move{MoveType::split_vertex, cur.tree, x, y, arc_len, std::nullopt, 0, 0};
        for (const Letter& l : alphabet) {
            const PartialIsometry& iso = s.letter_isometry(l);
            if (!iso.defined_at(f, x) || !iso.defined_at(f, y)) continue;
            Point ix = iso.apply(f, x), iy = iso.apply(f, y);
            bool landed = false;
            for (const auto& entry : entries)
                if (f.member(entry.hull, ix) && f.member(entry.hull, iy)) landed = true;
            if (landed) {
                move.type = MoveType::split_edge;
                move.split_generator = s.letter_name(l);
                break;
            }
        }

        // split: entry `which` -> {chosen piece} and {rest}
        std::vector<Entry> next_entries;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (static_cast<int>(i) == which) continue;
            Entry e = entries[i];
            e.parent = static_cast<int>(i);
            next_entries.push_back(e);
        }
        std::vector<int> rest_ids;
        for (int pid : cur.piece_ids)
            if (pid != chosen) rest_ids.push_back(pid);
        int part_a = static_cast<int>(next_entries.size());
        next_entries.push_back(Entry{cur.tree, {chosen}, pieces[chosen], which});
        int part_b = static_cast<int>(next_entries.size());
        next_entries.push_back(Entry{cur.tree, rest_ids, chosen_rest_hull, which});

        // stage edges: keep everything away from the split, recompute around it
        auto remap = [&](int old) { return old < which ? old : old - 1; };
        std::vector<EdgeKey> next_keys;
        for (const auto& [gi, a, b] : keys)
            if (a != which && b != which) next_keys.emplace_back(gi, remap(a), remap(b));
        for (int gi = 0; gi < s.generator_count(); ++gi) {
            for (int half : {part_a, part_b}) {
                for (std::size_t o = 0; o < next_entries.size(); ++o) {
                    int other = static_cast<int>(o);
                    if (nonempty(gi, next_entries[half].hull, next_entries[other].hull))
                        next_keys.emplace_back(gi, half, other);
                    if (other != part_a && other != part_b &&
                        nonempty(gi, next_entries[other].hull, next_entries[half].hull))
                        next_keys.emplace_back(gi, other, half);
                }
            }
        }
        std::sort(next_keys.begin(), next_keys.end());
        next_keys.erase(std::unique(next_keys.begin(), next_keys.end()), next_keys.end());
        MultiGraph next_graph = keys_to_graph(s, next_entries.size(), next_keys);

        GraphMorphism m;
        m.source = next_graph;
        m.target = prev_graph;
        for (std::size_t i = 0; i < next_entries.size(); ++i)
            m.vertex_map[static_cast<int>(i)] = next_entries[i].parent;
        for (std::size_t e = 0; e < next_keys.size(); ++e) {
            auto [gi, a, b] = next_keys[e];
            EdgeKey parent_key{gi, next_entries[a].parent, next_entries[b].parent};
            auto it = std::lower_bound(keys.begin(), keys.end(), parent_key);
            if (it == keys.end() || *it != parent_key)
                throw InternalError("move morphism: fine edge has no coarse image");
            m.edge_map[static_cast<int>(e)] = static_cast<int>(it - keys.begin());
        }
        m.validate();

        move.index_before = graph_index(prev_graph);
        move.index_after = graph_index(next_graph);
        if (move.type == MoveType::split_edge && move.index_after != move.index_before)
            throw InternalError("split-edge move changed the graph index");
        if (move.index_after > move.index_before)
            throw InternalError("move increased the graph index");
        step.arcs_length += arc_len;
        step.moves.push_back(std::move(move));
        step.move_morphisms.push_back(std::move(m));
        entries = std::move(next_entries);
        keys = std::move(next_keys);
        prev_graph = std::move(next_graph);
    }

    // The final stage is the graph of the output system.
    if (keys.size() != static_cast<std::size_t>(step.next.generator_count()))
        throw InternalError("move decomposition does not end at the output graph");

    // Composite morphism graph(next) -> graph(S).
    {
        GraphMorphism tau;
        tau.source = step.next.associated_graph();
        tau.target = s.associated_graph();
        for (std::size_t p = 0; p < pieces.size(); ++p)
            tau.vertex_map[static_cast<int>(p)] = pieces[p].tree;
        for (int j = 0; j < step.next.generator_count(); ++j)
            tau.edge_map[j] = step.parent_generator[j];
        tau.validate();
        step.tau = tau;
    }

    // Length bookkeeping of the arc partition: hulls = pieces + arcs.
    Scalar pieces_len = Scalar::zero(f.field());
    for (const auto& p : pieces) pieces_len += f.subtree_length(p);
    Scalar hulls_len = f.total_length() - step.peripheral_length;
    if (hulls_len - pieces_len != step.arcs_length)
        throw InternalError("erased arcs do not partition the hull remainder");

    step.transfer = std::move(transfer);

    if (log_level() >= 1)
        std::cerr << "[rips] step: " << pieces.size() << " pieces, " << step.moves.size()
                  << " moves, erased " << (step.peripheral_length + step.arcs_length).str()
                  << "\n";
    return step;
}

bool reduced_condition_ii(const System& s, const std::vector<Subtree>& pieces) {
    const Forest& f = s.forest();
    for (const Letter& l : s.letters()) {
        for (const Point& g : s.letter_domain(l).generators) {
            bool survives = false;
            for (const auto& p : pieces)
                if (f.member(p, g)) survives = true;
            if (!survives) return false;
        }
    }
    return true;
}

ReducedReport is_reduced(const System& s, int depth, long max_nodes) {
    if (depth < 1) throw ValidationError("reducedness depth must be >= 1");
    RipsStep step = elementary_step(s);
    ReducedReport report{ReducedStatus::unknown_at_depth, depth, true, {}};

    const Forest& f = s.forest();
    for (const Letter& l : s.letters()) {
        for (const Point& g : s.letter_domain(l).generators) {
            bool survives = false;
            for (const auto& p : step.pieces)
                if (f.member(p, g)) survives = true;
            if (!survives) {
                report.condition_ii = false;
                report.status = ReducedStatus::not_reduced;
                report.witness = "extremal point " + f.point_key(g) + " of dom(" +
                                 s.letter_name(l) + ") is erased by one step";
                return report;
            }
        }
    }

    if (step.fixed_point) {
        // every point lies in two domains, so every trajectory tree branches forever
        report.status = ReducedStatus::reduced;
        return report;
    }

    for (const Point& p : representative_points(s)) {
        auto t = s.trajectory_tree(p, depth, max_nodes);
        if (t.complete()) {
            report.status = ReducedStatus::not_reduced;
            report.witness = "trajectory tree of " + f.point_key(p) + " is finite (" +
                             std::to_string(t.nodes.size()) + " words)";
            return report;
        }
    }
    return report;
}

namespace {

StageStats make_stats(const System& s, int stage, bool cond_ii) {
    const Forest& f = s.forest();
    Scalar maxdiam = Scalar::zero(f.field());
    for (int t = 0; t < f.tree_count(); ++t)
        maxdiam = max(maxdiam, f.diameter(f.whole_tree(t)));
    return StageStats{stage,
                      f.tree_count(),
                      s.generator_count(),
                      graph_index(s.associated_graph()),
                      f.total_length(),
                      maxdiam,
                      cond_ii};
}

} // namespace

RipsRun run_machine(const System& s0, const RunOptions& opts) {
    RipsRun run;
    run.systems.push_back(s0);
    for (int k = 0; k < opts.max_steps; ++k) {
        const System& cur = run.systems.back();
        RipsStep step = elementary_step(cur);
        bool cond_ii = reduced_condition_ii(cur, step.pieces);
        run.stages.push_back(make_stats(cur, k, cond_ii));
        if (step.fixed_point) {
            run.halted = true;
            run.halt_stage = k;
            return run;
        }
        int before = graph_index(cur.associated_graph());
        int after = graph_index(step.next.associated_graph());
        if (after > before) throw InternalError("graph index increased across a step");
        run.systems.push_back(step.next);
        run.steps.push_back(std::move(step));
        if (run.systems.back().forest().tree_count() > opts.max_components) break;
    }
    // ran out of steps (or components) without halting; stats for the last
    // stage do not include a step, so its condition flag stays false
    if (run.stages.size() < run.systems.size()) {
        StageStats last = make_stats(run.systems.back(), run.last_stage(), false);
        run.stages.push_back(std::move(last));
    }
    run.budget_exhausted = true;
    return run;
}

LimitGraphView limit_graph_view(const RipsRun& run, std::optional<int> stage) {
    LimitGraphView view;
    if (run.halted) {
        view.exact = true;
        view.stage = run.halt_stage;
    } else {
        if (!stage) throw ValidationError("non-halted run needs an explicit stage");
        view.stage = *stage;
        if (view.stage < 0 || view.stage > run.last_stage())
            throw ValidationError("stage outside the run");
    }
    view.graph = run.systems[run.halted ? run.last_stage() : view.stage].associated_graph();
    for (int k = 0; k < view.stage && k < static_cast<int>(run.steps.size()); ++k)
        view.tau_chain.push_back(run.steps[k].tau);
    if (graph_index(view.graph) > graph_index(run.systems[0].associated_graph()))
        throw InternalError("limit view exceeds the initial graph index");
    return view;
}

} // namespace frips
