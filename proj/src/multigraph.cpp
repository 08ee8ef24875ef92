#include "forestrips/multigraph.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace frips {

void MultiGraph::add_vertex(int id, std::string label) {
    if (has_vertex(id)) throw ValidationError("duplicate graph vertex id " + std::to_string(id));
    vertices.push_back(Vertex{id, std::move(label)});
}

void MultiGraph::add_edge(int id, int from, int to, std::string label) {
    for (const auto& e : edges)
        if (e.id == id) throw ValidationError("duplicate graph edge id " + std::to_string(id));
    if (!has_vertex(from) || !has_vertex(to))
        throw ValidationError("edge endpoint does not exist");
    edges.push_back(Edge{id, from, to, std::move(label)});
}

bool MultiGraph::has_vertex(int id) const {
    for (const auto& v : vertices)
        if (v.id == id) return true;
    return false;
}

int MultiGraph::valence(int vertex_id) const {
    int val = 0;
    for (const auto& e : edges) {
        if (e.from == vertex_id) ++val;
        if (e.to == vertex_id) ++val;
    }
    return val;
}

std::vector<std::vector<int>> MultiGraph::components() const {
    std::map<int, int> leader;
    for (const auto& v : vertices) leader[v.id] = v.id;
    std::function<int(int)> find = [&](int x) {
        while (leader[x] != x) x = leader[x] = leader[leader[x]];
        return x;
    };
    for (const auto& e : edges) leader[find(e.from)] = find(e.to);
    std::map<int, std::vector<int>> groups;
    for (const auto& v : vertices) groups[find(v.id)].push_back(v.id);
    std::vector<std::vector<int>> out;
    for (auto& [root, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        out.push_back(ids);
    }
    return out;
}

MultiGraph graph_core(const MultiGraph& g) {
    std::set<int> keep_v, keep_e;
    for (const auto& v : g.vertices) keep_v.insert(v.id);
    for (const auto& e : g.edges) keep_e.insert(e.id);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& v : g.vertices) {
            if (!keep_v.count(v.id)) continue;
            int val = 0;
            int last_edge = -1;
            for (const auto& e : g.edges) {
                if (!keep_e.count(e.id)) continue;
                if (e.from == v.id) ++val, last_edge = e.id;
                if (e.to == v.id) ++val, last_edge = e.id;
            }
            if (val == 0) {
                keep_v.erase(v.id);
                changed = true;
            } else if (val == 1) {
                keep_v.erase(v.id);
                keep_e.erase(last_edge);
                changed = true;
            }
        }
    }
    MultiGraph out;
    for (const auto& v : g.vertices)
        if (keep_v.count(v.id)) out.vertices.push_back(v);
    for (const auto& e : g.edges)
        if (keep_e.count(e.id)) out.edges.push_back(e);
    return out;
}

int graph_index(const MultiGraph& g) {
    int total = 0;
    for (const auto& comp : g.components()) {
        int nv = static_cast<int>(comp.size());
        int ne = 0;
        std::set<int> in_comp(comp.begin(), comp.end());
        for (const auto& e : g.edges)
            if (in_comp.count(e.from)) ++ne;
        total += std::max(0, 2 * (ne - nv));
    }
    return total;
}

int graph_index_via_core(const MultiGraph& g) {
    MultiGraph core = graph_core(g);
    int total = 0;
    for (const auto& v : core.vertices) total += core.valence(v.id) - 2;
    return total;
}

void GraphMorphism::validate() const {
    for (const auto& v : source.vertices) {
        auto it = vertex_map.find(v.id);
        if (it == vertex_map.end()) throw ValidationError("morphism misses a vertex");
        if (!target.has_vertex(it->second))
            throw ValidationError("morphism image vertex does not exist");
    }
    for (const auto& e : source.edges) {
        auto it = edge_map.find(e.id);
        if (it == edge_map.end()) throw ValidationError("morphism misses an edge");
        const MultiGraph::Edge* img = nullptr;
        for (const auto& te : target.edges)
            if (te.id == it->second) img = &te;
        if (!img) throw ValidationError("morphism image edge does not exist");
        if (vertex_map.at(e.from) != img->from || vertex_map.at(e.to) != img->to)
            throw ValidationError("morphism does not respect incidence on edge " +
                                  std::to_string(e.id));
    }
}

bool GraphMorphism::injective_on_edges() const {
    std::set<int> seen;
    for (const auto& [src, dst] : edge_map)
        if (!seen.insert(dst).second) return false;
    return true;
}

MorphismIndexReport morphism_index_check(const GraphMorphism& m) {
    m.validate();
    return MorphismIndexReport{m.injective_on_edges(), graph_index(m.source),
                               graph_index(m.target)};
}

GraphMorphism compose_morphisms(const GraphMorphism& outer, const GraphMorphism& inner) {
    GraphMorphism out;
    out.source = inner.source;
    out.target = outer.target;
    for (const auto& [v, mid] : inner.vertex_map) out.vertex_map[v] = outer.vertex_map.at(mid);
    for (const auto& [e, mid] : inner.edge_map) out.edge_map[e] = outer.edge_map.at(mid);
    out.validate();
    return out;
}

std::string to_dot(const MultiGraph& g, const std::string& name) {
    MultiGraph sorted = g;
    std::sort(sorted.vertices.begin(), sorted.vertices.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(sorted.edges.begin(), sorted.edges.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::ostringstream out;
    out << "digraph " << name << " {\n";
    for (const auto& v : sorted.vertices) {
        out << "  v" << v.id;
        if (!v.label.empty()) out << " [label=\"" << v.label << "\"]";
        out << ";\n";
    }
    for (const auto& e : sorted.edges) {
        out << "  v" << e.from << " -> v" << e.to;
        if (!e.label.empty()) out << " [label=\"" << e.label << "\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace frips
