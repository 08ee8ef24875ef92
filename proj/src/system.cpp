#include "forestrips/system.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace frips {

int compare_letters(const Letter& a, const Letter& b) {
    if (a.gen != b.gen) return a.gen < b.gen ? -1 : 1;
    if (a.inv != b.inv) return a.inv ? 1 : -1;
    return 0;
}

int compare_words(const Word& a, const Word& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        int c = compare_letters(a[i], b[i]);
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

Word reduce_word(const Word& w) {
    Word out;
    for (const Letter& l : w) {
        if (!out.empty() && out.back().is_inverse_of(l))
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

System::System(Forest forest, std::vector<PartialIsometry> generators,
               IndependenceDecl independence, int certified_depth)
    : forest_(std::move(forest)),
      gens_(std::move(generators)),
      independence_(independence),
      certified_depth_(certified_depth) {
    std::set<std::string> names;
    for (const auto& g : gens_) {
        if (!names.insert(g.name()).second)
            throw ValidationError("duplicate generator name " + g.name());
        if (g.domain().tree < 0 || g.domain().tree >= forest_.tree_count() ||
            g.range().tree < 0 || g.range().tree >= forest_.tree_count())
            throw ValidationError("generator " + g.name() + " references a missing component");
    }
    inverses_.reserve(gens_.size());
    for (const auto& g : gens_) inverses_.push_back(g.inverse());
}

std::vector<Letter> System::letters() const {
    std::vector<Letter> out;
    for (int i = 0; i < generator_count(); ++i) {
        out.push_back(Letter{i, false});
        out.push_back(Letter{i, true});
    }
    return out;
}

const PartialIsometry& System::letter_isometry(const Letter& l) const {
    return l.inv ? inverses_.at(l.gen) : gens_.at(l.gen);
}

std::string System::letter_name(const Letter& l) const {
    return l.inv ? gens_.at(l.gen).name() + "^-1" : gens_.at(l.gen).name();
}

Word System::parse_word(const std::vector<std::string>& names) const {
    Word w;
    for (const std::string& n : names) {
        bool inv = n.size() > 3 && n.substr(n.size() - 3) == "^-1";
        std::string base = inv ? n.substr(0, n.size() - 3) : n;
        int idx = -1;
        for (int i = 0; i < generator_count(); ++i)
            if (gens_[i].name() == base) idx = i;
        if (idx < 0) throw ValidationError("unknown generator name " + base);
        w.push_back(Letter{idx, inv});
    }
    return w;
}

MultiGraph System::associated_graph() const {
    MultiGraph g;
    for (int t = 0; t < forest_.tree_count(); ++t) g.add_vertex(t, "K" + std::to_string(t));
    for (int i = 0; i < generator_count(); ++i)
        g.add_edge(i, gens_[i].domain().tree, gens_[i].range().tree, gens_[i].name());
    return g;
}

std::optional<PartialIsometry> System::word_isometry(const Word& reduced) const {
    if (reduced.empty()) throw ValidationError("the empty word has no single partial isometry");
    std::optional<PartialIsometry> acc = letter_isometry(reduced[0]);
    for (std::size_t i = 1; i < reduced.size() && acc; ++i)
        acc = PartialIsometry::compose_pair(forest_, *acc, letter_isometry(reduced[i]));
    return acc;
}

System::WordDomain System::word_domain(const Word& w) const {
    WordDomain out;
    out.reduced = reduce_word(w);
    out.was_reduced = (out.reduced.size() == w.size());
    if (out.reduced.empty()) {
        for (int t = 0; t < forest_.tree_count(); ++t)
            out.domains.push_back(forest_.whole_tree(t));
        return out;
    }
    auto iso = word_isometry(out.reduced);
    if (iso) out.domains.push_back(iso->domain());
    return out;
}

System::Certificate System::independence_certificate(int depth, long max_nodes) const {
    if (depth < 1) throw ValidationError("certificate depth must be >= 1");
    Certificate cert;
    cert.depth = depth;
    cert.profile.assign(depth, Scalar::zero(forest_.field()));
    cert.max_diameter = Scalar::zero(forest_.field());

    struct Item {
        PartialIsometry iso;
        Word word;
    };
    // Depth-first in letter order; the first strict maximum found at full
    // depth is the lexicographically least witness.
    std::vector<Item> stack;
    std::vector<Letter> alphabet = letters();
    std::sort(alphabet.begin(), alphabet.end(),
              [](const Letter& a, const Letter& b) { return compare_letters(a, b) < 0; });

    auto visit = [&](const PartialIsometry& iso, const Word& word) {
        int k = static_cast<int>(word.size());
        Scalar diam = forest_.diameter(iso.domain());
        if (diam > cert.profile[k - 1]) cert.profile[k - 1] = diam;
        if (k == depth && (cert.witness.empty() || diam > cert.max_diameter)) {
            cert.max_diameter = diam;
            cert.witness = word;
        }
    };

    std::deque<Item> work;
    for (auto it = alphabet.rbegin(); it != alphabet.rend(); ++it)
        work.push_front(Item{letter_isometry(*it), Word{*it}});
    while (!work.empty()) {
        if (++cert.nodes_visited > max_nodes) {
            cert.budget_exhausted = true;
            break;
        }
        Item item = std::move(work.front());
        work.pop_front();
        visit(item.iso, item.word);
        if (static_cast<int>(item.word.size()) == depth) continue;
        for (auto it = alphabet.rbegin(); it != alphabet.rend(); ++it) {
            if (it->is_inverse_of(item.word.back())) continue;
            auto next = PartialIsometry::compose_pair(forest_, item.iso, letter_isometry(*it));
            if (!next) continue;
            Word nw = item.word;
            nw.push_back(*it);
            work.push_front(Item{std::move(*next), std::move(nw)});
        }
    }

    if (!cert.budget_exhausted) {
        cert.max_diameter = cert.profile[depth - 1];
        cert.certified = cert.max_diameter.is_zero();
        // Strict decrease over the second half of the profile. A plateau means
        // the word domains stopped shrinking, which is the signature of a
        // dependent family (an identity-like word keeps a whole interval).
        int half = (depth + 1) / 2;
        cert.contracting = cert.certified || cert.max_diameter < cert.profile[half - 1];
    }
    return cert;
}

System::TrajectoryView System::trajectory_tree(const Point& p, int depth, long max_nodes) const {
    if (depth < 0) throw ValidationError("trajectory depth must be >= 0");
    forest_.tree_of(p); // validates the point's component
    TrajectoryView view;
    view.base = p;
    view.depth = depth;
    view.nodes.push_back(TrajectoryNode{-1, Letter{}, p, 0, {}});
    std::vector<Letter> alphabet = letters();

    std::deque<int> work{0};
    long budget = max_nodes;
    while (!work.empty()) {
        int ni = work.front();
        work.pop_front();
        const Point at = view.nodes[ni].at;
        const int d = view.nodes[ni].depth;
        view.max_depth = std::max(view.max_depth, d);
        for (const Letter& l : alphabet) {
            if (ni != 0 && l.is_inverse_of(view.nodes[ni].via)) continue;
            const PartialIsometry& iso = letter_isometry(l);
            if (!iso.defined_at(forest_, at)) continue;
            if (d == depth) {
                view.truncated = true; // an extension exists beyond the horizon
                continue;
            }
            if (--budget < 0) {
                view.budget_exhausted = true;
                return view;
            }
            int child = static_cast<int>(view.nodes.size());
            view.nodes.push_back(TrajectoryNode{ni, l, iso.apply(forest_, at), d + 1, {}});
            view.nodes[ni].children.push_back(child);
            work.push_back(child);
        }
    }
    return view;
}

Word System::TrajectoryView::word_of(int node) const {
    Word w;
    while (node != 0) {
        w.push_back(nodes[node].via);
        node = nodes[node].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

System::CayleyView System::cayley_view(const Point& p, int depth, long max_nodes) const {
    TrajectoryView traj = trajectory_tree(p, depth, max_nodes);
    CayleyView view;
    view.truncated = traj.truncated;
    view.budget_exhausted = traj.budget_exhausted;

    std::map<std::string, int> vertex_of;
    auto vertex_id = [&](const Point& q) {
        std::string key = forest_.point_key(q);
        auto it = vertex_of.find(key);
        if (it != vertex_of.end()) return it->second;
        int id = static_cast<int>(view.points.size());
        vertex_of[key] = id;
        view.points.push_back(q);
        view.graph.add_vertex(id, key);
        return id;
    };

    // Edges modulo orientation: a tree edge for letter a^-1 is the reverse of
    // one for a, so normalize every edge to its positive letter.
    std::set<std::tuple<int, int, int>> seen; // (gen, from, to)
    vertex_id(traj.nodes[0].at);
    std::vector<std::tuple<int, int, int>> normalized;
    for (std::size_t ni = 1; ni < traj.nodes.size(); ++ni) {
        const auto& node = traj.nodes[ni];
        int child_v = vertex_id(node.at);
        int parent_v = vertex_id(traj.nodes[node.parent].at);
        int from = node.via.inv ? child_v : parent_v;
        int to = node.via.inv ? parent_v : child_v;
        auto key = std::make_tuple(node.via.gen, from, to);
        if (seen.insert(key).second) normalized.push_back(key);
    }
    std::sort(normalized.begin(), normalized.end());
    int eid = 0;
    for (const auto& [gen, from, to] : normalized)
        view.graph.add_edge(eid++, from, to, gens_[gen].name());

    view.core = graph_core(view.graph);
    view.core_index_sum = 0;
    for (const auto& v : view.core.vertices) view.core_index_sum += view.core.valence(v.id) - 2;
    return view;
}

std::map<int, std::vector<Scalar>> edge_cuts(const System& s) {
    std::map<int, std::set<std::string>> seen;
    std::map<int, std::vector<Scalar>> cuts;
    auto add = [&](const Point& p) {
        if (p.is_vertex) return;
        if (seen[p.id].insert(p.offset.str()).second) cuts[p.id].push_back(p.offset);
    };
    for (const Letter& l : s.letters())
        for (const Point& g : s.letter_domain(l).generators) add(g);
    for (auto& [eid, offs] : cuts)
        std::sort(offs.begin(), offs.end());
    return cuts;
}

std::vector<Point> representative_points(const System& s) {
    const Forest& f = s.forest();
    std::vector<Point> out;
    for (int vid : f.vertex_ids()) out.push_back(f.vertex_point(vid));
    auto cuts = edge_cuts(s);
    for (int eid : f.edge_ids()) {
        std::vector<Scalar> offs{Scalar::zero(f.field())};
        if (auto it = cuts.find(eid); it != cuts.end())
            offs.insert(offs.end(), it->second.begin(), it->second.end());
        offs.push_back(f.edge_length(eid));
        for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
            if (i > 0) out.push_back(f.edge_point(eid, offs[i]));
            out.push_back(f.edge_point(eid, (offs[i] + offs[i + 1]).half()));
        }
    }
    return out;
}

int point_valence(const System& s, const Point& p) {
    int v = 0;
    for (const Letter& l : s.letters())
        if (s.forest().member(s.letter_domain(l), p)) ++v;
    return v;
}

} // namespace frips
