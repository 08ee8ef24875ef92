#pragma once

#include <random>
#include <utility>

#include "forestrips/analysis.hpp"

namespace frips::corpus {

struct ForestConfig {
    int min_trees = 1, max_trees = 2;
    int min_edges = 2, max_edges = 8;
    long max_num = 6, max_den = 4;
};

Forest random_forest(std::mt19937_64& rng, FieldContext field, const ForestConfig& cfg = {});
Point random_point(std::mt19937_64& rng, const Forest& f);
Point random_point_in_tree(std::mt19937_64& rng, const Forest& f, int tree);

struct SystemConfig {
    int min_generators = 1, max_generators = 5;
    ForestConfig forest;
};

/// Segment-domain systems: every generator carries a random segment (or
/// point) isometrically to a random congruent segment elsewhere.
System random_system(std::mt19937_64& rng, FieldContext field, const SystemConfig& cfg = {});

std::vector<int> random_irreducible_permutation(std::mt19937_64& rng, int n);

/// Interval exchange with lengths p + q*sqrt(d), q not all zero.
System random_quadratic_iet(std::mt19937_64& rng, int n, FieldContext field);

MultiGraph random_multigraph(std::mt19937_64& rng, int max_vertices = 6, int max_edges = 8);

/// A random tree together with its circular family of leaf-to-leaf paths:
/// each edge is covered exactly twice and no three members share an arc, so
/// the covering-family hypotheses hold by construction.
std::pair<Forest, std::vector<Subtree>> random_covering_family(std::mt19937_64& rng,
                                                               FieldContext field);

} // namespace frips::corpus
