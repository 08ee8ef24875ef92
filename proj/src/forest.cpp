#include "forestrips/forest.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace frips {

int compare_points(const Point& a, const Point& b) {
    if (a.is_vertex != b.is_vertex) return a.is_vertex ? -1 : 1;
    if (a.id != b.id) return a.id < b.id ? -1 : 1;
    if (a.is_vertex) return 0;
    return Scalar::compare(a.offset, b.offset);
}

bool points_equal(const Point& a, const Point& b) {
    return compare_points(a, b) == 0;
}

Forest::Forest(FieldContext field, std::vector<TreeSpec> trees) : field_(field) {
    std::set<int> seen_v, seen_e;
    int next_edge_id = 0;
    for (const auto& t : trees)
        for (const auto& e : t.edges)
            if (e.id >= 0) next_edge_id = std::max(next_edge_id, e.id + 1);

    for (std::size_t ti = 0; ti < trees.size(); ++ti) {
        const auto& spec = trees[ti];
        TreeRec rec;
        if (spec.vertices.empty())
            throw ValidationError("tree has no vertices", "trees[" + std::to_string(ti) + "]");
        for (int vid : spec.vertices) {
            if (!seen_v.insert(vid).second)
                throw ValidationError("duplicate vertex id " + std::to_string(vid));
            rec.vertex_idx.push_back(static_cast<int>(vertices_.size()));
            vertices_.push_back(VertexRec{vid, static_cast<int>(ti), {}, -1, -1, 0});
        }
        for (const auto& e : spec.edges) {
            int eid = e.id >= 0 ? e.id : next_edge_id++;
            if (!seen_e.insert(eid).second)
                throw ValidationError("duplicate edge id " + std::to_string(eid));
            if (e.length.field() != field_)
                throw FieldMismatchError("edge length in wrong field");
            if (e.length.sign() <= 0)
                throw ValidationError("edge length must be positive",
                                      "edge " + std::to_string(eid));
            bool from_here = std::count(spec.vertices.begin(), spec.vertices.end(), e.from) == 1;
            bool to_here = std::count(spec.vertices.begin(), spec.vertices.end(), e.to) == 1;
            if (!from_here || !to_here)
                throw ValidationError("edge endpoint not a vertex of its tree",
                                      "edge " + std::to_string(eid));
            if (e.from == e.to)
                throw ValidationError("self-loop edge", "edge " + std::to_string(eid));
            rec.edge_idx.push_back(static_cast<int>(edges_.size()));
            edges_.push_back(EdgeRec{eid, e.from, e.to, e.length, static_cast<int>(ti)});
        }
        if (spec.edges.size() + 1 != spec.vertices.size())
            throw ValidationError("component is not a tree: needs #edges = #vertices - 1",
                                  "trees[" + std::to_string(ti) + "]");
        trees_.push_back(std::move(rec));
    }

    for (std::size_t i = 0; i < vertices_.size(); ++i) vid_to_idx_[vertices_[i].id] = static_cast<int>(i);
    for (std::size_t i = 0; i < edges_.size(); ++i) eid_to_idx_[edges_[i].id] = static_cast<int>(i);

    for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
        vertices_[vindex(edges_[ei].from)].incident.push_back(static_cast<int>(ei));
        vertices_[vindex(edges_[ei].to)].incident.push_back(static_cast<int>(ei));
    }

    // Root each tree at its smallest vertex id and record parents + depths.
    for (auto& tree : trees_) {
        int root = tree.vertex_idx[0];
        for (int vi : tree.vertex_idx)
            if (vertices_[vi].id < vertices_[root].id) root = vi;
        tree.root_idx = root;
        std::deque<int> queue{root};
        std::set<int> visited{root};
        while (!queue.empty()) {
            int vi = queue.front();
            queue.pop_front();
            for (int ei : vertices_[vi].incident) {
                const auto& e = edges_[ei];
                int other = vindex(e.from == vertices_[vi].id ? e.to : e.from);
                if (visited.insert(other).second) {
                    vertices_[other].parent_vertex = vertices_[vi].id;
                    vertices_[other].parent_edge = e.id;
                    vertices_[other].depth = vertices_[vi].depth + 1;
                    queue.push_back(other);
                }
            }
        }
        if (visited.size() != tree.vertex_idx.size())
            throw ValidationError("component is not connected");
    }

    // Exact all-pairs vertex distances within each tree.
    vdist_.assign(vertices_.size(), {});
    for (std::size_t vi = 0; vi < vertices_.size(); ++vi)
        vdist_[vi].assign(vertices_.size(), Scalar::zero(field_));
    for (const auto& tree : trees_) {
        for (int src : tree.vertex_idx) {
            std::deque<int> queue{src};
            std::set<int> visited{src};
            while (!queue.empty()) {
                int vi = queue.front();
                queue.pop_front();
                for (int ei : vertices_[vi].incident) {
                    const auto& e = edges_[ei];
                    int other = vindex(e.from == vertices_[vi].id ? e.to : e.from);
                    if (visited.insert(other).second) {
                        vdist_[src][other] = vdist_[src][vi] + e.length;
                        queue.push_back(other);
                    }
                }
            }
        }
    }
}

int Forest::vindex(int vertex_id) const {
    auto it = vid_to_idx_.find(vertex_id);
    if (it == vid_to_idx_.end())
        throw ValidationError("unknown vertex id " + std::to_string(vertex_id));
    return it->second;
}

int Forest::eindex(int edge_id) const {
    auto it = eid_to_idx_.find(edge_id);
    if (it == eid_to_idx_.end())
        throw ValidationError("unknown edge id " + std::to_string(edge_id));
    return it->second;
}

std::vector<int> Forest::vertex_ids() const {
    std::vector<int> out;
    for (const auto& v : vertices_) out.push_back(v.id);
    return out;
}

std::vector<int> Forest::edge_ids() const {
    std::vector<int> out;
    for (const auto& e : edges_) out.push_back(e.id);
    return out;
}

std::vector<int> Forest::tree_vertices(int tree) const {
    std::vector<int> out;
    for (int vi : trees_.at(tree).vertex_idx) out.push_back(vertices_[vi].id);
    return out;
}

std::vector<int> Forest::tree_edges(int tree) const {
    std::vector<int> out;
    for (int ei : trees_.at(tree).edge_idx) out.push_back(edges_[ei].id);
    return out;
}

int Forest::edge_from(int edge_id) const { return edges_[eindex(edge_id)].from; }
int Forest::edge_to(int edge_id) const { return edges_[eindex(edge_id)].to; }
const Scalar& Forest::edge_length(int edge_id) const { return edges_[eindex(edge_id)].length; }
int Forest::degree(int vertex_id) const {
    return static_cast<int>(vertices_[vindex(vertex_id)].incident.size());
}

int Forest::tree_of_vertex(int vertex_id) const { return vertices_[vindex(vertex_id)].tree; }
int Forest::tree_of_edge(int edge_id) const { return edges_[eindex(edge_id)].tree; }
int Forest::tree_of(const Point& p) const {
    return p.is_vertex ? tree_of_vertex(p.id) : tree_of_edge(p.id);
}

Point Forest::vertex_point(int vertex_id) const {
    vindex(vertex_id);
    return Point::at_vertex(vertex_id);
}

Point Forest::edge_point(int edge_id, const Scalar& offset) const {
    const auto& e = edges_[eindex(edge_id)];
    int s = offset.sign();
    if (s < 0 || offset > e.length)
        throw GeometryError("offset outside edge " + std::to_string(edge_id));
    if (s == 0) return Point::at_vertex(e.from);
    if (offset == e.length) return Point::at_vertex(e.to);
    return Point{false, edge_id, offset};
}

Scalar Forest::total_length() const {
    Scalar s = Scalar::zero(field_);
    for (const auto& e : edges_) s += e.length;
    return s;
}

Scalar Forest::tree_length(int tree) const {
    Scalar s = Scalar::zero(field_);
    for (int ei : trees_.at(tree).edge_idx) s += edges_[ei].length;
    return s;
}

std::vector<int> Forest::leaf_vertices(int tree) const {
    std::vector<int> out;
    for (int vi : trees_.at(tree).vertex_idx)
        if (vertices_[vi].incident.size() <= 1) out.push_back(vertices_[vi].id);
    return out;
}

const Scalar& Forest::vdist_by_index(int vi, int wi) const { return vdist_[vi][wi]; }

void Forest::validate_point(const Point& p) const {
    if (p.is_vertex)
        vindex(p.id);
    else {
        const auto& e = edges_[eindex(p.id)];
        if (p.offset.sign() <= 0 || p.offset >= e.length)
            throw GeometryError("non-canonical interior point on edge " + std::to_string(p.id));
    }
}

Scalar Forest::dist_vertex_point(int vertex_id, const Point& q) const {
    int vi = vindex(vertex_id);
    if (q.is_vertex) return vdist_by_index(vi, vindex(q.id));
    const auto& e = edges_[eindex(q.id)];
    Scalar via_from = vdist_by_index(vi, vindex(e.from)) + q.offset;
    Scalar via_to = vdist_by_index(vi, vindex(e.to)) + (e.length - q.offset);
    return min(via_from, via_to);
}

Scalar Forest::distance(const Point& p, const Point& q) const {
    if (tree_of(p) != tree_of(q))
        throw GeometryError("points lie in different components");
    if (p.is_vertex) return dist_vertex_point(p.id, q);
    if (q.is_vertex) return dist_vertex_point(q.id, p);
    if (p.id == q.id) return (p.offset - q.offset).abs();
    const auto& e = edges_[eindex(p.id)];
    Scalar via_from = p.offset + dist_vertex_point(e.from, q);
    Scalar via_to = (e.length - p.offset) + dist_vertex_point(e.to, q);
    return min(via_from, via_to);
}

bool Forest::on_arc(const Point& a, const Point& mid, const Point& b) const {
    return distance(a, mid) + distance(mid, b) == distance(a, b);
}

std::vector<Leg> Forest::walk(const Point& p, const Point& q) const {
    if (tree_of(p) != tree_of(q))
        throw GeometryError("points lie in different components");
    std::vector<Leg> legs;
    if (points_equal(p, q)) return legs;
    if (!p.is_vertex && !q.is_vertex && p.id == q.id) {
        legs.push_back(Leg{p.id, p.offset, q.offset});
        return legs;
    }

    // Exit vertex for p (possibly with a partial first leg).
    int u;
    if (p.is_vertex) {
        u = p.id;
    } else {
        const auto& e = edges_[eindex(p.id)];
        Scalar via_from = p.offset + dist_vertex_point(e.from, q);
        Scalar via_to = (e.length - p.offset) + dist_vertex_point(e.to, q);
        if (via_from <= via_to) {
            legs.push_back(Leg{p.id, p.offset, Scalar::zero(field_)});
            u = e.from;
        } else {
            legs.push_back(Leg{p.id, p.offset, e.length});
            u = e.to;
        }
    }

    // Entry vertex for q (partial last leg appended at the end).
    int w;
    std::optional<Leg> last;
    if (q.is_vertex) {
        w = q.id;
    } else {
        const auto& e = edges_[eindex(q.id)];
        Scalar via_from = vdist_by_index(vindex(u), vindex(e.from)) + q.offset;
        Scalar via_to = vdist_by_index(vindex(u), vindex(e.to)) + (e.length - q.offset);
        if (via_from <= via_to) {
            w = e.from;
            last = Leg{q.id, Scalar::zero(field_), q.offset};
        } else {
            w = e.to;
            last = Leg{q.id, e.length, q.offset};
        }
    }

    // Vertex path u -> w through the rooted structure.
    auto up_path = [&](int vid) {
        std::vector<int> path; // edge ids from vid toward the root
        int cur = vindex(vid);
        while (vertices_[cur].parent_vertex != -1) {
            path.push_back(vertices_[cur].parent_edge);
            cur = vindex(vertices_[cur].parent_vertex);
        }
        return path;
    };
    std::vector<int> from_u = up_path(u), from_w = up_path(w);
    while (!from_u.empty() && !from_w.empty() && from_u.back() == from_w.back()) {
        from_u.pop_back();
        from_w.pop_back();
    }
    int cur = u;
    auto full_leg = [&](int eid, int start_vertex) {
        const auto& e = edges_[eindex(eid)];
        if (e.from == start_vertex) {
            legs.push_back(Leg{eid, Scalar::zero(field_), e.length});
            return e.to;
        }
        legs.push_back(Leg{eid, e.length, Scalar::zero(field_)});
        return e.from;
    };
    for (int eid : from_u) cur = full_leg(eid, cur);
    for (auto it = from_w.rbegin(); it != from_w.rend(); ++it) cur = full_leg(*it, cur);
    if (last) legs.push_back(*last);
    return legs;
}

Point Forest::point_at(const Point& from, const Point& to, const Scalar& t) const {
    if (t.sign() < 0) throw GeometryError("negative arc position");
    if (t.sign() == 0) return from;
    Scalar remaining = t;
    for (const Leg& leg : walk(from, to)) {
        Scalar len = (leg.to_off - leg.from_off).abs();
        if (remaining <= len) {
            Scalar off = leg.from_off <= leg.to_off ? leg.from_off + remaining
                                                    : leg.from_off - remaining;
            return edge_point(leg.edge, off);
        }
        remaining -= len;
    }
    throw GeometryError("arc position beyond the endpoint");
}

Point Forest::median(const Point& x, const Point& y, const Point& z) const {
    Scalar t = (distance(x, y) + distance(x, z) - distance(y, z)).half();
    return point_at(x, y, t);
}

std::pair<int, int> Forest::direction(const Point& p, const Point& x) const {
    if (!p.is_vertex) {
        const auto& e = edges_[eindex(p.id)];
        if (!x.is_vertex && x.id == p.id)
            return {p.id, Scalar::compare(x.offset, p.offset) > 0 ? 1 : -1};
        Scalar via_from = p.offset + dist_vertex_point(e.from, x);
        Scalar via_to = (e.length - p.offset) + dist_vertex_point(e.to, x);
        return {p.id, via_from <= via_to ? -1 : 1};
    }
    const auto& v = vertices_[vindex(p.id)];
    if (!x.is_vertex) {
        const auto& e = edges_[eindex(x.id)];
        if (e.from == p.id) return {x.id, 1};
        if (e.to == p.id) return {x.id, -1};
    }
    Scalar total = dist_vertex_point(p.id, x);
    for (int ei : v.incident) {
        const auto& e = edges_[ei];
        int other = e.from == p.id ? e.to : e.from;
        if (e.length + dist_vertex_point(other, x) == total)
            return {e.id, e.from == p.id ? 1 : -1};
    }
    throw InternalError("no outgoing direction found");
}

bool Forest::redundant(const Point& p, const std::vector<Point>& pts) const {
    // p lies strictly inside the hull iff two other points leave p in
    // different directions.
    std::optional<std::pair<int, int>> first;
    for (const auto& q : pts) {
        if (points_equal(q, p)) continue;
        auto dir = direction(p, q);
        if (!first)
            first = dir;
        else if (*first != dir)
            return true;
    }
    return false;
}

Subtree Forest::make_subtree(const std::vector<Point>& pts) const {
    if (pts.empty()) throw GeometryError("hull of empty point set");
    int tree = tree_of(pts.front());
    std::vector<Point> canon;
    for (const auto& p : pts) {
        validate_point(p);
        if (tree_of(p) != tree) throw GeometryError("hull of points in different components");
        canon.push_back(p);
    }
    std::sort(canon.begin(), canon.end(),
              [](const Point& a, const Point& b) { return compare_points(a, b) < 0; });
    canon.erase(std::unique(canon.begin(), canon.end(), points_equal), canon.end());
    std::vector<Point> minimal;
    for (const auto& p : canon)
        if (!redundant(p, canon)) minimal.push_back(p);
    return Subtree{tree, std::move(minimal)};
}

Subtree Forest::arc_subtree(const Point& p, const Point& q) const {
    return make_subtree({p, q});
}

Subtree Forest::whole_tree(int tree) const {
    std::vector<Point> pts;
    for (int vid : leaf_vertices(tree)) pts.push_back(vertex_point(vid));
    if (pts.empty())
        for (int vid : tree_vertices(tree)) pts.push_back(vertex_point(vid));
    return make_subtree(pts);
}

bool Forest::member(const Subtree& k, const Point& p) const {
    if (tree_of(p) != k.tree) return false;
    return points_equal(project(k, p), p);
}

Point Forest::project(const Subtree& k, const Point& p) const {
    if (tree_of(p) != k.tree) throw GeometryError("projection across components");
    const auto& g = k.generators;
    // The path from p into k enters it at the projection, so the projection
    // is the nearest of the meets of [p; g*] with the arcs [g*; g_i], where
    // g* is any nearest generator.
    std::size_t nearest = 0;
    Scalar nearest_d = distance(p, g[0]);
    for (std::size_t i = 1; i < g.size(); ++i) {
        Scalar d = distance(p, g[i]);
        if (d < nearest_d) {
            nearest = i;
            nearest_d = d;
        }
    }
    if (nearest_d.sign() == 0) return g[nearest];
    Point best = g[nearest];
    Scalar best_d = nearest_d;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i == nearest) continue;
        Point m = median(p, g[nearest], g[i]);
        Scalar d = distance(p, m);
        if (d < best_d) {
            best = m;
            best_d = d;
        }
    }
    return best;
}

std::optional<Subtree> Forest::intersect(const Subtree& a, const Subtree& b) const {
    if (a.tree != b.tree) return std::nullopt;
    std::vector<Point> proj;
    proj.reserve(a.generators.size());
    for (const auto& g : a.generators) proj.push_back(project(b, g));
    std::vector<Point> collected;
    const auto& g = a.generators;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i; j < g.size(); ++j) {
            if (!on_arc(g[i], proj[i], g[j])) continue;
            if (!on_arc(g[i], proj[j], g[j]))
                throw InternalError("inconsistent arc/subtree intersection");
            collected.push_back(proj[i]);
            collected.push_back(proj[j]);
        }
    }
    if (collected.empty()) return std::nullopt;
    return make_subtree(collected);
}

bool Forest::subtree_equal(const Subtree& a, const Subtree& b) const {
    if (a.tree != b.tree || a.generators.size() != b.generators.size()) return false;
    for (std::size_t i = 0; i < a.generators.size(); ++i)
        if (!points_equal(a.generators[i], b.generators[i])) return false;
    return true;
}

bool Forest::subtree_contains(const Subtree& outer, const Subtree& inner) const {
    for (const auto& g : inner.generators)
        if (!member(outer, g)) return false;
    return true;
}

Scalar Forest::diameter(const Subtree& k) const {
    Scalar best = Scalar::zero(field_);
    const auto& g = k.generators;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) best = max(best, distance(g[i], g[j]));
    return best;
}

Scalar Forest::subtree_length(const Subtree& k) const {
    // Greedy Steiner growth: each generator adds exactly its distance to the
    // hull of the earlier ones.
    Scalar total = Scalar::zero(field_);
    Subtree grown{k.tree, {k.generators[0]}};
    for (std::size_t i = 1; i < k.generators.size(); ++i) {
        Point pr = project(grown, k.generators[i]);
        total += distance(k.generators[i], pr);
        grown.generators.push_back(k.generators[i]);
    }
    return total;
}

std::vector<std::optional<Subtree>> Forest::chop(const Scalar& eps) const {
    if (eps.sign() <= 0) throw ValidationError("chop requires eps > 0");
    Scalar two_eps = eps + eps;
    std::vector<std::optional<Subtree>> out;
    for (int t = 0; t < tree_count(); ++t) {
        std::vector<int> leaves = leaf_vertices(t);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            for (std::size_t j = i + 1; j < leaves.size(); ++j) {
                Point a = vertex_point(leaves[i]), b = vertex_point(leaves[j]);
                Scalar d = distance(a, b);
                if (d < two_eps) continue;
                pts.push_back(point_at(a, b, eps));
                pts.push_back(point_at(a, b, d - eps));
            }
        }
        out.push_back(pts.empty() ? std::nullopt : std::optional<Subtree>(make_subtree(pts)));
    }
    return out;
}

std::string Forest::point_key(const Point& p) const {
    if (p.is_vertex) return "v" + std::to_string(p.id);
    return "e" + std::to_string(p.id) + "@" + p.offset.str();
}

std::string Forest::subtree_key(const Subtree& k) const {
    std::string key = "t" + std::to_string(k.tree) + ":";
    for (const auto& g : k.generators) key += point_key(g) + ";";
    return key;
}

Materialization Forest::materialize(const std::vector<Subtree>& pieces) const {
    Materialization out;
    std::vector<TreeSpec> specs;
    int next_vid = 0, next_eid = 0;
    for (const auto& piece : pieces) {
        const auto& g = piece.generators;
        // Vertices: generators plus medians of all triples (the branch points).
        std::vector<Point> verts = g;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j)
                for (std::size_t l = j + 1; l < g.size(); ++l)
                    verts.push_back(median(g[i], g[j], g[l]));
        std::sort(verts.begin(), verts.end(),
                  [](const Point& a, const Point& b) { return compare_points(a, b) < 0; });
        verts.erase(std::unique(verts.begin(), verts.end(), points_equal), verts.end());

        TreeSpec spec;
        std::vector<int> vids;
        for (const auto& p : verts) {
            spec.vertices.push_back(next_vid);
            vids.push_back(next_vid);
            out.vertex_anchor.push_back(p);
            ++next_vid;
        }
        // Edges: vertex pairs with no third vertex strictly between them.
        for (std::size_t i = 0; i < verts.size(); ++i) {
            for (std::size_t j = i + 1; j < verts.size(); ++j) {
                bool adjacent = true;
                for (std::size_t l = 0; l < verts.size() && adjacent; ++l) {
                    if (l == i || l == j) continue;
                    if (on_arc(verts[i], verts[l], verts[j])) adjacent = false;
                }
                if (!adjacent) continue;
                spec.edges.push_back(
                    EdgeSpec{next_eid, vids[i], vids[j], distance(verts[i], verts[j])});
                out.edge_anchor.emplace_back(verts[i], verts[j]);
                ++next_eid;
            }
        }
        specs.push_back(std::move(spec));
    }
    out.forest = std::make_shared<Forest>(field_, std::move(specs));
    return out;
}

Point Materialization::to_new(const Forest& ambient, int piece, const Point& p) const {
    const Forest& nf = *forest;
    for (int vid : nf.tree_vertices(piece))
        if (points_equal(vertex_anchor[vid], p)) return Point::at_vertex(vid);
    for (int eid : nf.tree_edges(piece)) {
        const auto& [a, b] = edge_anchor[eid];
        if (ambient.on_arc(a, p, b)) return nf.edge_point(eid, ambient.distance(a, p));
    }
    throw GeometryError("point is not in the materialized piece");
}

Point Materialization::to_old(const Forest& ambient, const Point& p) const {
    if (p.is_vertex) return vertex_anchor.at(p.id);
    const auto& [a, b] = edge_anchor.at(p.id);
    return ambient.point_at(a, b, p.offset);
}

} // namespace frips
