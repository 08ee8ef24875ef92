#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forestrips/forest.hpp"

namespace frips {

/// An isometry between two subtrees of a forest, stored by the images of the
/// domain's extremal points. Distance preservation on those anchors forces a
/// unique isometric extension to the whole domain, so interior images are
/// re-derived on demand and never cached.
class PartialIsometry {
public:
    /// Checked constructor: verifies the anchor sources are exactly the
    /// domain's generators and that all pairwise distances are preserved.
    static PartialIsometry build(const Forest& f, std::string name, const Subtree& domain,
                                 const std::vector<std::pair<Point, Point>>& anchors);

    const std::string& name() const { return name_; }
    const Subtree& domain() const { return domain_; }
    const Subtree& range() const { return range_; }
    const std::vector<std::pair<Point, Point>>& anchors() const { return anchors_; }

    bool defined_at(const Forest& f, const Point& p) const { return f.member(domain_, p); }
    Point apply(const Forest& f, const Point& p) const;
    PartialIsometry inverse() const;

    /// Restriction to k0 at the source and k1 at the destination; either may
    /// be absent. Empty restrictions are a value, not an error.
    std::optional<PartialIsometry> restricted(const Forest& f,
                                              const std::optional<Subtree>& k0,
                                              const std::optional<Subtree>& k1) const;

    /// P -> (P . first) . second on the largest domain where both apply.
    static std::optional<PartialIsometry> compose_pair(const Forest& f,
                                                       const PartialIsometry& first,
                                                       const PartialIsometry& second);

    void set_name(std::string name) { name_ = std::move(name); }

private:
    PartialIsometry() = default;

    std::string name_;
    Subtree domain_, range_;
    std::vector<std::pair<Point, Point>> anchors_;
};

} // namespace frips
