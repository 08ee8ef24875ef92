#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forestrips/system.hpp"

namespace frips {

enum class MoveType { split_vertex, split_edge };

/// One elementary move: removal of an open bridge arc between two halves of a
/// component, tagged by whether a letter was defined across it.
struct RipsMove {
    MoveType type;
    int tree;              // ambient tree of the arc
    Point arc_from, arc_to; // closure endpoints (ambient points)
    Scalar arc_length;
    std::optional<std::string> split_generator; // letter defined across, for split_edge
    int index_before, index_after;              // stage graph indices around the move
};

/// Result of one elementary step: erase every point lying in fewer than two
/// letter domains, restrict the generators to the surviving components.
struct RipsStep {
    bool fixed_point = false;
    System next;

    std::vector<Subtree> pieces; // surviving components, ambient coordinates, canonical order
    Scalar peripheral_length;   // erased outside the convex hull of the pieces
    Scalar arcs_length;         // total length of erased bridge arcs
    std::vector<RipsMove> moves;

    GraphMorphism tau;                         // graph(next) -> graph(S)
    GraphMorphism preliminary;                 // hull stage -> graph(S), edge-injective
    std::vector<GraphMorphism> move_morphisms; // stage i -> stage i-1, one per move
    std::vector<int> parent_generator;         // next generator -> source generator index

    std::optional<Materialization> transfer; // ambient -> next forest point maps
};

RipsStep elementary_step(const System& s);

/// Extremal points of every letter domain survive one step (exact check).
bool reduced_condition_ii(const System& s, const std::vector<Subtree>& pieces);

enum class ReducedStatus { reduced, not_reduced, unknown_at_depth };

struct ReducedReport {
    ReducedStatus status;
    int depth;
    bool condition_ii;
    std::string witness; // for not_reduced: what failed and where
};

/// Tri-state reducedness: condition (ii) is decided exactly; the infinite
/// trajectory condition is certified outright for step fixed points, refuted
/// by any provably finite trajectory tree, and otherwise reported unknown at
/// the probed depth.
ReducedReport is_reduced(const System& s, int depth, long max_nodes = 200000);

struct StageStats {
    int stage;
    int components;
    int edges;
    int graph_index;
    Scalar total_length;
    Scalar max_component_diameter;
    bool condition_ii; // of the step leaving this stage (true at a halt)
};

struct RunOptions {
    int max_steps = 100;
    int max_components = 100000; // stop when a stage outgrows this
};

struct RipsRun {
    std::vector<System> systems; // S_0..S_n
    std::vector<RipsStep> steps; // steps[k]: S_k -> S_{k+1}
    std::vector<StageStats> stages;
    bool halted = false;
    int halt_stage = -1;
    bool budget_exhausted = false;

    const System& final_system() const { return systems.back(); }
    int last_stage() const { return static_cast<int>(systems.size()) - 1; }
};

/// Iterate the elementary step until it fixes the system or a budget runs
/// out. Checks the graph-index monotonicity and the per-move index relations
/// as it goes.
RipsRun run_machine(const System& s0, const RunOptions& opts = {});

struct LimitGraphView {
    MultiGraph graph;
    bool exact = false; // halted: the view is the limit graph itself
    int stage = 0;
    std::vector<GraphMorphism> tau_chain; // graph(S_{k+1}) -> graph(S_k), k < stage
};

/// The limit graph when the run halted; otherwise a stage-k upper
/// approximation (the stage defaults to the last one computed).
LimitGraphView limit_graph_view(const RipsRun& run, std::optional<int> stage = std::nullopt);

} // namespace frips
