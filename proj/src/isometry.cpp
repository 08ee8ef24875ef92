#include "forestrips/isometry.hpp"

#include <algorithm>

namespace frips {

PartialIsometry PartialIsometry::build(const Forest& f, std::string name, const Subtree& domain,
                                       const std::vector<std::pair<Point, Point>>& anchors) {
    if (anchors.empty()) throw ValidationError("partial isometry needs at least one anchor");

    // Anchor sources must be exactly the domain generators.
    std::vector<Point> sources;
    for (const auto& [src, dst] : anchors) sources.push_back(src);
    std::sort(sources.begin(), sources.end(),
              [](const Point& a, const Point& b) { return compare_points(a, b) < 0; });
    if (sources.size() != domain.generators.size())
        throw ValidationError("anchors must cover the domain generators exactly");
    for (std::size_t i = 0; i < sources.size(); ++i)
        if (!points_equal(sources[i], domain.generators[i]))
            throw ValidationError("anchor sources differ from the domain generators");

    int range_tree = f.tree_of(anchors.front().second);
    for (const auto& [src, dst] : anchors)
        if (f.tree_of(dst) != range_tree)
            throw ValidationError("anchor images lie in different components");

    for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = i + 1; j < anchors.size(); ++j) {
            Scalar ds = f.distance(anchors[i].first, anchors[j].first);
            Scalar dt = f.distance(anchors[i].second, anchors[j].second);
            if (ds != dt)
                throw ValidationError("anchor pair distorts distance: d(" +
                                      f.point_key(anchors[i].first) + "," +
                                      f.point_key(anchors[j].first) + ") = " + ds.str() +
                                      " but image distance is " + dt.str());
        }
    }

    PartialIsometry out;
    out.name_ = std::move(name);
    out.domain_ = domain;
    std::vector<Point> images;
    for (const auto& [src, dst] : anchors) images.push_back(dst);
    out.range_ = f.make_subtree(images);
    if (out.range_.generators.size() != anchors.size())
        throw InternalError("isometric image of extremal points is not minimal");
    out.anchors_ = anchors;
    std::sort(out.anchors_.begin(), out.anchors_.end(),
              [](const auto& a, const auto& b) { return compare_points(a.first, b.first) < 0; });
    return out;
}

Point PartialIsometry::apply(const Forest& f, const Point& p) const {
    const auto& a = anchors_;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i; j < a.size(); ++j) {
            if (!f.on_arc(a[i].first, p, a[j].first)) continue;
            return f.point_at(a[i].second, a[j].second, f.distance(a[i].first, p));
        }
    }
    throw DomainError("point " + f.point_key(p) + " outside the domain of " + name_);
}

PartialIsometry PartialIsometry::inverse() const {
    PartialIsometry out;
    out.name_ = name_ + "^-1";
    out.domain_ = range_;
    out.range_ = domain_;
    for (const auto& [src, dst] : anchors_) out.anchors_.emplace_back(dst, src);
    std::sort(out.anchors_.begin(), out.anchors_.end(),
              [](const auto& a, const auto& b) { return compare_points(a.first, b.first) < 0; });
    return out;
}

std::optional<PartialIsometry> PartialIsometry::restricted(
    const Forest& f, const std::optional<Subtree>& k0, const std::optional<Subtree>& k1) const {
    // Source side.
    std::optional<Subtree> dom = domain_;
    if (k0) {
        dom = f.intersect(domain_, *k0);
        if (!dom) return std::nullopt;
    }
    // Push forward, cut at the destination, pull back.
    std::vector<Point> images;
    for (const auto& g : dom->generators) images.push_back(apply(f, g));
    Subtree img = f.make_subtree(images);
    std::optional<Subtree> rng = img;
    if (k1) {
        rng = f.intersect(img, *k1);
        if (!rng) return std::nullopt;
    }
    PartialIsometry inv = inverse();
    std::vector<Point> pulled;
    for (const auto& g : rng->generators) pulled.push_back(inv.apply(f, g));
    Subtree final_dom = f.make_subtree(pulled);
    std::vector<std::pair<Point, Point>> anchors;
    for (const auto& g : final_dom.generators) anchors.emplace_back(g, apply(f, g));
    return build(f, name_, final_dom, anchors);
}

std::optional<PartialIsometry> PartialIsometry::compose_pair(const Forest& f,
                                                             const PartialIsometry& first,
                                                             const PartialIsometry& second) {
    auto mid = f.intersect(first.range(), second.domain());
    if (!mid) return std::nullopt;
    PartialIsometry inv = first.inverse();
    std::vector<Point> pulled;
    for (const auto& g : mid->generators) pulled.push_back(inv.apply(f, g));
    Subtree dom = f.make_subtree(pulled);
    std::vector<std::pair<Point, Point>> anchors;
    for (const auto& g : dom.generators)
        anchors.emplace_back(g, second.apply(f, first.apply(f, g)));
    return build(f, first.name() + "*" + second.name(), dom, anchors);
}

} // namespace frips
