#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forestrips/scalar.hpp"

namespace frips {

/// A location in a metric forest: either a vertex, or an interior position on
/// an edge measured from the edge's `from` end. Canonical: offsets 0 and
/// `length` are always stored as the corresponding vertex, so equality of
/// points is structural.
struct Point {
    bool is_vertex = true;
    int id = 0;      // vertex id, or edge id for interior points
    Scalar offset;   // 0 < offset < edge length, interior points only

    static Point at_vertex(int vertex_id) { return Point{true, vertex_id, Scalar()}; }
};

/// Total order on canonical points of one forest (vertices first, then by id,
/// interior points by (edge, offset)). Used for deterministic output only.
int compare_points(const Point& a, const Point& b);
bool points_equal(const Point& a, const Point& b);

/// A non-empty closed convex subset of one tree, stored by its extremal
/// points. The denoted set is the convex hull of the generators; no generator
/// lies on the arc between two others.
struct Subtree {
    int tree = 0;
    std::vector<Point> generators; // canonical: sorted, minimal, non-empty
};

/// One oriented traversal of a sub-interval of an edge.
struct Leg {
    int edge;
    Scalar from_off, to_off;
};

class Forest;

/// A forest rebuilt from a list of disjoint subtrees of an ambient forest,
/// with exact point transfer in both directions. Tree i realizes pieces[i].
struct Materialization {
    std::shared_ptr<Forest> forest;
    std::vector<Point> vertex_anchor;          // new vertex id -> ambient point
    std::vector<std::pair<Point, Point>> edge_anchor; // new edge id -> ambient endpoints

    /// Ambient point (must lie in pieces[piece]) -> point of the new forest.
    Point to_new(const Forest& ambient, int piece, const Point& p) const;
    /// Point of the new forest -> ambient point.
    Point to_old(const Forest& ambient, const Point& p) const;
};

/// A finite metric forest: finitely many vertices and positively weighted
/// edges forming disjoint trees. Immutable after construction; all queries
/// are pure and exact.
class Forest {
public:
    struct EdgeSpec {
        int id = -1; // -1: assign sequentially
        int from = 0, to = 0;
        Scalar length;
    };
    struct TreeSpec {
        std::vector<int> vertices;
        std::vector<EdgeSpec> edges;
    };

    Forest(FieldContext field, std::vector<TreeSpec> trees);

    FieldContext field() const { return field_; }
    int tree_count() const { return static_cast<int>(trees_.size()); }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    std::vector<int> vertex_ids() const;
    std::vector<int> edge_ids() const;
    std::vector<int> tree_vertices(int tree) const;
    std::vector<int> tree_edges(int tree) const;
    int edge_from(int edge_id) const;
    int edge_to(int edge_id) const;
    const Scalar& edge_length(int edge_id) const;
    int degree(int vertex_id) const;

    int tree_of_vertex(int vertex_id) const;
    int tree_of_edge(int edge_id) const;
    int tree_of(const Point& p) const;

    Point vertex_point(int vertex_id) const;
    /// Canonicalizing constructor: offset 0 / length snap to the endpoints.
    Point edge_point(int edge_id, const Scalar& offset) const;

    Scalar total_length() const;
    Scalar tree_length(int tree) const;
    /// Vertices of degree <= 1; the extremal points of a component.
    std::vector<int> leaf_vertices(int tree) const;

    // --- metric primitives, all exact --------------------------------------
    Scalar distance(const Point& p, const Point& q) const;
    bool on_arc(const Point& a, const Point& mid, const Point& b) const;
    std::vector<Leg> walk(const Point& p, const Point& q) const;
    /// The point of [from; to] at distance t from `from` (0 <= t <= d).
    Point point_at(const Point& from, const Point& to, const Scalar& t) const;
    /// The unique point on all three pairwise arcs.
    Point median(const Point& x, const Point& y, const Point& z) const;
    /// First leg of the walk p -> x as (edge id, direction): -1 toward the
    /// edge's `from` end, +1 toward `to`. Requires x != p, same component.
    std::pair<int, int> direction(const Point& p, const Point& x) const;

    // --- subtrees -----------------------------------------------------------
    /// Convex hull of a non-empty set of points of one tree, reduced to its
    /// minimal generating set.
    Subtree make_subtree(const std::vector<Point>& pts) const;
    Subtree arc_subtree(const Point& p, const Point& q) const;
    Subtree whole_tree(int tree) const;

    bool member(const Subtree& k, const Point& p) const;
    /// Closest point of k; equals p iff p is a member.
    Point project(const Subtree& k, const Point& p) const;
    std::optional<Subtree> intersect(const Subtree& a, const Subtree& b) const;
    bool subtree_equal(const Subtree& a, const Subtree& b) const;
    bool subtree_contains(const Subtree& outer, const Subtree& inner) const;
    Scalar diameter(const Subtree& k) const;
    Scalar subtree_length(const Subtree& k) const;

    /// Points admitting two opposite directions of reach >= eps, one subtree
    /// per component (empty optional where nothing remains).
    std::vector<std::optional<Subtree>> chop(const Scalar& eps) const;

    /// Rebuild a list of pairwise disjoint subtrees as a standalone forest.
    Materialization materialize(const std::vector<Subtree>& pieces) const;

    /// Deterministic order/equality key of a subtree within this forest.
    std::string subtree_key(const Subtree& k) const;
    std::string point_key(const Point& p) const;

private:
    int vindex(int vertex_id) const;
    int eindex(int edge_id) const;
    const Scalar& vdist_by_index(int vi, int wi) const;
    Scalar dist_vertex_point(int vertex_id, const Point& q) const;
    void validate_point(const Point& p) const;
    bool redundant(const Point& p, const std::vector<Point>& pts) const;

    struct VertexRec {
        int id;
        int tree;
        std::vector<int> incident; // edge indices
        int parent_vertex = -1;    // vertex id, -1 at root
        int parent_edge = -1;      // edge id
        int depth = 0;
    };
    struct EdgeRec {
        int id;
        int from, to; // vertex ids
        Scalar length;
        int tree;
    };
    struct TreeRec {
        std::vector<int> vertex_idx;
        std::vector<int> edge_idx;
        int root_idx;
    };

    FieldContext field_;
    std::vector<VertexRec> vertices_;
    std::vector<EdgeRec> edges_;
    std::vector<TreeRec> trees_;
    std::map<int, int> vid_to_idx_, eid_to_idx_;
    std::vector<std::vector<Scalar>> vdist_; // vertex-index pair table (same tree)
};

} // namespace frips
