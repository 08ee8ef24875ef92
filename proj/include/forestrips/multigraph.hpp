#pragma once

#include <map>
#include <string>
#include <vector>

#include "forestrips/errors.hpp"

namespace frips {

/// Finite oriented multigraph: loops and parallel edges allowed. Valence of a
/// vertex counts edge ends, so a loop contributes two.
struct MultiGraph {
    struct Vertex {
        int id;
        std::string label;
    };
    struct Edge {
        int id;
        int from, to;
        std::string label;
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    void add_vertex(int id, std::string label = {});
    void add_edge(int id, int from, int to, std::string label = {});
    bool has_vertex(int id) const;
    int valence(int vertex_id) const;
    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }

    /// Vertex ids grouped by connected component, deterministic order.
    std::vector<std::vector<int>> components() const;
};

/// Largest subgraph with every valence >= 2; computed by recursively erasing
/// valence-0 vertices and valence-1 vertices with their incident edge.
/// Vertex/edge ids survive into the result. May be empty.
MultiGraph graph_core(const MultiGraph& g);

/// Sum over components of max(0, 2(#E - #V)).
int graph_index(const MultiGraph& g);

/// Same number computed as sum of (valence - 2) over core vertices.
int graph_index_via_core(const MultiGraph& g);

/// Morphism of oriented multigraphs; respects oriented incidence.
struct GraphMorphism {
    MultiGraph source, target;
    std::map<int, int> vertex_map;
    std::map<int, int> edge_map;

    void validate() const;
    bool injective_on_edges() const;
};

struct MorphismIndexReport {
    bool injective_on_edges;
    int source_index;
    int target_index;
};

MorphismIndexReport morphism_index_check(const GraphMorphism& m);

/// Composition target(first) <- source(second); first.source must equal
/// second.target structurally.
GraphMorphism compose_morphisms(const GraphMorphism& outer, const GraphMorphism& inner);

/// Deterministic DOT rendering (sorted ids).
std::string to_dot(const MultiGraph& g, const std::string& name = "G");

} // namespace frips
