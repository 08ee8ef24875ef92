#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forestrips/machine.hpp"

namespace frips {

struct PointIndexRecord {
    Point point;
    int valence;       // letters defined at the point
    int omega_valence; // letters sending the point into the limit set
    int index;         // omega_valence - 2
};

/// All points lying in three or more letter domains, by enumerating triple
/// intersections. Requires every point to lie in at least two domains (the
/// step fixes the system) and an independence declaration; a non-degenerate
/// triple intersection refutes those hypotheses and raises TripleOverlapError.
std::vector<PointIndexRecord> singular_points(const System& s);

struct IndexResult {
    bool exact = false;
    int value = 0;      // exact value, or an upper bound
    std::string method; // "halted-exact" or "stage-k-bound"
    int stage = 0;
    std::vector<PointIndexRecord> singular; // exact results, final-system coordinates
    int final_graph_index = 0;              // cross-check for exact results
};

/// Exact system index when the run halted (the remaining forest is the limit
/// set); otherwise the best graph-index bound along the run.
IndexResult system_index(const System& s, const RipsRun& run);

/// Sum of (valence - 2) over the singular points of a finite covering family
/// of subtrees of one component. Under the hypotheses (any three distinct
/// members meet in at most one point, every point lies in at least two) the
/// sum equals #family - 2 independently of the geometry.
int index_surface_lemma_check(const Forest& f, int tree, const std::vector<Subtree>& family);

/// Exact integral of (valence - 2) over the forest with respect to length:
/// constant on the open cells cut out by all domain boundaries.
Scalar finite_forest_integral(const System& s);

/// Coarse a-priori bound N(2N-1)(2N-2)^2/3 on the index of any system whose
/// points are all covered twice, N = number of generators.
long long rough_index_bound(int generator_count);
long long rough_index_bound(const System& s);

enum class ClassificationLabel { surface_type, levitt_evidence, mixed_or_unknown };

struct Classification {
    ClassificationLabel label;
    int stage;       // last stage inspected
    bool halted;
    int halt_stage;  // -1 when not halted
    Scalar max_component_diameter; // at the last stage
    std::string independence;      // declaration plus certificate summary
    int initial_graph_index;
    std::optional<int> exact_index;          // halted runs
    std::optional<bool> maximal_index;       // halted + certified reduced
    int window;                              // halving window for the evidence rule
};

struct ClassifyOptions {
    int depth = 10;  // independence / reducedness probe depth
    int window = 10; // diameters must halve over every `window` stages
};

/// surface_type iff the run halted. levitt_evidence when the run kept going
/// and the maximal component diameter halves over every window of stages;
/// that is labeled evidence, never a verdict. Everything else is
/// mixed_or_unknown at the reached stage.
Classification classify(const System& s, const RipsRun& run, const ClassifyOptions& opts = {});

/// The system of an interval exchange: one interval of the summed length,
/// one generator per subinterval translating it to its place in the
/// rearranged order. permutation[j] = 1-based index of the subinterval that
/// comes j-th after the exchange.
System iet_to_system(FieldContext field, const std::vector<Scalar>& lengths,
                     const std::vector<int>& permutation,
                     IndependenceDecl decl = IndependenceDecl::none, int certified_depth = 0);

} // namespace frips
