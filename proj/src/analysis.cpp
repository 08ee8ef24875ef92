#include "forestrips/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace frips {

namespace {

/// Triple-intersection enumeration over an explicit family of subtrees.
/// Returns the points lying in >= 3 members; throws on a fat triple.
std::vector<Point> triple_points(const Forest& f, const std::vector<Subtree>& family,
                                 const std::vector<std::string>& names) {
    std::vector<Point> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            auto ij = f.intersect(family[i], family[j]);
            if (!ij) continue;
            for (std::size_t k = j + 1; k < family.size(); ++k) {
                auto ijk = f.intersect(*ij, family[k]);
                if (!ijk) continue;
                if (f.diameter(*ijk).sign() > 0)
                    throw TripleOverlapError(
                        "three domains share a non-degenerate arc",
                        names[i] + " & " + names[j] + " & " + names[k] + " share " +
                            f.subtree_key(*ijk));
                if (seen.insert(f.point_key(ijk->generators[0])).second)
                    out.push_back(ijk->generators[0]);
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Point& a, const Point& b) { return compare_points(a, b) < 0; });
    return out;
}

/// Singular point records of a system whose step is a fixed point (so the
/// remaining forest is the limit set and omega-valence equals valence).
std::vector<PointIndexRecord> enumerate_singular(const System& s) {
    const Forest& f = s.forest();
    std::vector<Subtree> family;
    std::vector<std::string> names;
    for (const Letter& l : s.letters()) {
        family.push_back(s.letter_domain(l));
        names.push_back(s.letter_name(l));
    }
    std::vector<PointIndexRecord> out;
    for (const Point& p : triple_points(f, family, names)) {
        int v = point_valence(s, p);
        out.push_back(PointIndexRecord{p, v, v, v - 2});
    }
    return out;
}

} // namespace

std::vector<PointIndexRecord> singular_points(const System& s) {
    if (!s.independence_assumed())
        throw PreconditionError(
            "singular point enumeration needs an independence declaration or certificate");
    if (!elementary_step(s).fixed_point)
        throw PreconditionError("some point lies in fewer than two domains");
    return enumerate_singular(s);
}

IndexResult system_index(const System& s, const RipsRun& run) {
    IndexResult result;
    if (!run.halted) {
        result.exact = false;
        result.stage = run.last_stage();
        result.value = run.stages.back().graph_index;
        result.method = "stage-" + std::to_string(result.stage) + "-bound";
        return result;
    }

    const System& last_system = run.final_system();
    result.exact = true;
    result.stage = run.halt_stage;
    result.method = "halted-exact";
    result.final_graph_index = graph_index(last_system.associated_graph());
    if (last_system.forest().tree_count() == 0) {
        result.value = 0;
        if (result.final_graph_index != 0)
            throw InternalError("empty system with non-zero graph index");
        return result;
    }

    result.singular = enumerate_singular(last_system);
    int total = 0;
    for (const auto& r : result.singular) total += r.index;
    result.value = total;

    // Cross-check against the graph of the halted system.
    if (result.value != result.final_graph_index)
        throw InternalError("index mismatch: points give " + std::to_string(result.value) +
                            " but the graph gives " + std::to_string(result.final_graph_index) +
                            " (bug or false independence declaration)");

    // Cross-check the covering-family count componentwise.
    const Forest& f = last_system.forest();
    for (int t = 0; t < f.tree_count(); ++t) {
        int letters_here = 0;
        for (const Letter& l : last_system.letters())
            if (last_system.letter_domain(l).tree == t) ++letters_here;
        int here = 0;
        for (const auto& r : result.singular)
            if (f.tree_of(r.point) == t) here += r.index;
        if (here != letters_here - 2)
            throw InternalError("componentwise index differs from its letter count - 2");
    }
    return result;
}

int index_surface_lemma_check(const Forest& f, int tree, const std::vector<Subtree>& family) {
    if (family.size() < 2) throw PreconditionError("covering family needs at least two members");
    for (const auto& k : family)
        if (k.tree != tree) throw PreconditionError("family member outside the component");

    // Coverage >= 2 everywhere: cell decomposition against the family.
    std::map<int, std::vector<Scalar>> cuts;
    std::map<int, std::set<std::string>> seen;
    for (const auto& k : family)
        for (const auto& g : k.generators)
            if (!g.is_vertex && seen[g.id].insert(g.offset.str()).second)
                cuts[g.id].push_back(g.offset);
    auto coverage = [&](const Point& p) {
        int c = 0;
        for (const auto& k : family)
            if (f.member(k, p)) ++c;
        return c;
    };
    for (int vid : f.tree_vertices(tree)) {
        if (coverage(f.vertex_point(vid)) < 2)
            throw PreconditionError("point v" + std::to_string(vid) + " is covered once or less");
    }
    for (int eid : f.tree_edges(tree)) {
        std::vector<Scalar> offs{Scalar::zero(f.field())};
        if (auto it = cuts.find(eid); it != cuts.end()) {
            std::sort(it->second.begin(), it->second.end());
            offs.insert(offs.end(), it->second.begin(), it->second.end());
        }
        offs.push_back(f.edge_length(eid));
        for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
            Point mid = f.edge_point(eid, (offs[i] + offs[i + 1]).half());
            if (coverage(mid) < 2)
                throw PreconditionError("cell around " + f.point_key(mid) +
                                        " is covered once or less");
            if (i > 0 && coverage(f.edge_point(eid, offs[i])) < 2)
                throw PreconditionError("cut point " + f.point_key(f.edge_point(eid, offs[i])) +
                                        " is covered once or less");
        }
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < family.size(); ++i) names.push_back("K" + std::to_string(i));
    int total = 0;
    for (const Point& p : triple_points(f, family, names)) total += coverage(p) - 2;
    return total;
}

Scalar finite_forest_integral(const System& s) {
    if (!s.independence_assumed())
        throw PreconditionError(
            "the integral inequality needs an independence declaration or certificate");
    const Forest& f = s.forest();
    Scalar total = Scalar::zero(f.field());
    auto cuts = edge_cuts(s);
    for (int eid : f.edge_ids()) {
        std::vector<Scalar> offs{Scalar::zero(f.field())};
        if (auto it = cuts.find(eid); it != cuts.end())
            offs.insert(offs.end(), it->second.begin(), it->second.end());
        offs.push_back(f.edge_length(eid));
        for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
            Point mid = f.edge_point(eid, (offs[i] + offs[i + 1]).half());
            long v = point_valence(s, mid);
            total += Scalar::integer(v - 2, f.field()) * (offs[i + 1] - offs[i]);
        }
    }
    return total;
}

long long rough_index_bound(int n) {
    if (n < 0) throw ValidationError("negative generator count");
    long long nn = n;
    return nn * (2 * nn - 1) * (2 * nn - 2) * (2 * nn - 2) / 3;
}

long long rough_index_bound(const System& s) { return rough_index_bound(s.generator_count()); }

Classification classify(const System& s, const RipsRun& run, const ClassifyOptions& opts) {
    Classification c{ClassificationLabel::mixed_or_unknown,
                     run.last_stage(),
                     run.halted,
                     run.halted ? run.halt_stage : -1,
                     run.stages.back().max_component_diameter,
                     "",
                     run.stages.front().graph_index,
                     std::nullopt,
                     std::nullopt,
                     opts.window};

    auto cert = s.independence_certificate(opts.depth);
    switch (s.independence()) {
        case IndependenceDecl::none: c.independence = "none"; break;
        case IndependenceDecl::declared: c.independence = "declared"; break;
        case IndependenceDecl::certified:
            c.independence = "certified(depth " + std::to_string(s.certified_depth()) + ")";
            break;
    }
    c.independence += cert.certified    ? "; depth-" + std::to_string(opts.depth) + " certificate: independent"
                      : cert.contracting ? "; depth-" + std::to_string(opts.depth) + " certificate: contracting"
                                         : "; depth-" + std::to_string(opts.depth) + " certificate: not contracting";

    if (run.halted) {
        c.label = ClassificationLabel::surface_type;
        IndexResult idx = system_index(s, run);
        c.exact_index = idx.value;
        auto red = is_reduced(s, opts.depth);
        if (red.status == ReducedStatus::reduced) {
            c.maximal_index = (idx.value == c.initial_graph_index);
            if (cert.certified && !*c.maximal_index)
                throw InternalError("halted reduced independent system without maximal index");
        }
        return c;
    }

    // Evidence of a totally disconnected limit: diameters halve across windows.
    int last = run.last_stage();
    if (last >= opts.window) {
        bool halving = true;
        for (int k = 0; k + opts.window <= last && halving; ++k) {
            Scalar early = run.stages[k].max_component_diameter;
            Scalar late = run.stages[k + opts.window].max_component_diameter;
            if (late + late > early) halving = false;
        }
        if (halving) c.label = ClassificationLabel::levitt_evidence;
    }
    return c;
}

System iet_to_system(FieldContext field, const std::vector<Scalar>& lengths,
                     const std::vector<int>& permutation, IndependenceDecl decl,
                     int certified_depth) {
    int n = static_cast<int>(lengths.size());
    if (n == 0) throw ValidationError("an interval exchange needs at least one length");
    for (const auto& l : lengths) {
        if (l.field() != field) throw FieldMismatchError("length in the wrong field");
        if (l.sign() <= 0) throw ValidationError("interval lengths must be positive");
    }
    if (static_cast<int>(permutation.size()) != n)
        throw ValidationError("permutation size differs from the number of lengths");
    std::vector<bool> hit(n, false);
    for (int p : permutation) {
        if (p < 1 || p > n || hit[p - 1]) throw ValidationError("not a permutation of 1..n");
        hit[p - 1] = true;
    }

    Scalar total = Scalar::zero(field);
    for (const auto& l : lengths) total += l;
    Forest f(field, {{.vertices = {0, 1}, .edges = {{0, 0, 1, total}}}});

    // top cut positions and bottom start of each subinterval
    std::vector<Scalar> top_start{Scalar::zero(field)};
    for (int i = 0; i < n; ++i) top_start.push_back(top_start.back() + lengths[i]);
    std::vector<Scalar> bottom_start(n, Scalar::zero(field));
    Scalar acc = Scalar::zero(field);
    for (int j = 0; j < n; ++j) {
        bottom_start[permutation[j] - 1] = acc;
        acc += lengths[permutation[j] - 1];
    }

    std::vector<PartialIsometry> gens;
    for (int i = 0; i < n; ++i) {
        Point d0 = f.edge_point(0, top_start[i]);
        Point d1 = f.edge_point(0, top_start[i + 1]);
        Point r0 = f.edge_point(0, bottom_start[i]);
        Point r1 = f.edge_point(0, bottom_start[i] + lengths[i]);
        gens.push_back(PartialIsometry::build(f, "a" + std::to_string(i + 1),
                                              f.make_subtree({d0, d1}), {{d0, r0}, {d1, r1}}));
    }
    return System(f, std::move(gens), decl, certified_depth);
}

} // namespace frips
