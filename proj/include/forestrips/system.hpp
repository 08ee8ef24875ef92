#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forestrips/isometry.hpp"
#include "forestrips/multigraph.hpp"

namespace frips {

/// A generator or its formal inverse.
struct Letter {
    int gen = 0;
    bool inv = false;

    bool operator==(const Letter&) const = default;
    bool is_inverse_of(const Letter& o) const { return gen == o.gen && inv != o.inv; }
};

using Word = std::vector<Letter>;

/// Letter order: by generator index, positive before inverse. Words compare
/// lexicographically; used for deterministic witness selection.
int compare_letters(const Letter& a, const Letter& b);
int compare_words(const Word& a, const Word& b);
Word reduce_word(const Word& w);

enum class IndependenceDecl { none, declared, certified };

/// A finite metric forest together with a finite family of named partial
/// isometries. Immutable; all queries are pure.
class System {
public:
    System(Forest forest, std::vector<PartialIsometry> generators,
           IndependenceDecl independence = IndependenceDecl::none, int certified_depth = 0);

    const Forest& forest() const { return forest_; }
    const std::vector<PartialIsometry>& generators() const { return gens_; }
    int generator_count() const { return static_cast<int>(gens_.size()); }
    IndependenceDecl independence() const { return independence_; }
    int certified_depth() const { return certified_depth_; }
    bool independence_assumed() const { return independence_ != IndependenceDecl::none; }
    System with_declaration(IndependenceDecl decl, int certified_depth = 0) const {
        return System(forest_, gens_, decl, certified_depth);
    }

    std::vector<Letter> letters() const; // a1, a1^-1, a2, a2^-1, ...
    const PartialIsometry& letter_isometry(const Letter& l) const;
    const Subtree& letter_domain(const Letter& l) const { return letter_isometry(l).domain(); }
    std::string letter_name(const Letter& l) const;
    Word parse_word(const std::vector<std::string>& names) const;

    /// One vertex per forest component, one oriented edge per generator.
    MultiGraph associated_graph() const;

    /// Partial isometry of a non-empty reduced word, or nothing if the word
    /// is inadmissible.
    std::optional<PartialIsometry> word_isometry(const Word& reduced) const;

    struct WordDomain {
        Word reduced;          // normal form actually used
        bool was_reduced;      // input was already in normal form
        std::vector<Subtree> domains; // empty: inadmissible; empty word: one per component
    };
    /// Domain of a word; the input is reduced first and the normalization is
    /// reported. The empty word acts as the identity on all of F.
    WordDomain word_domain(const Word& w) const;

    // --- independence -------------------------------------------------------
    struct Certificate {
        int depth = 0;
        std::vector<Scalar> profile;  // profile[k] = max diameter over words of length k+1
        Scalar max_diameter;          // at full depth
        Word witness;                 // lexicographically least argmax (empty if vacuous)
        bool certified = false;       // max_diameter == 0: independence holds outright
        bool contracting = false;     // 2*max(depth) <= max(ceil(depth/2)), or certified
        bool budget_exhausted = false;
        long nodes_visited = 0;
    };
    /// Depth-bounded search over admissible reduced words. A zero maximum
    /// certifies independence; a positive sequence that fails to shrink is
    /// evidence against it, never proof.
    Certificate independence_certificate(int depth, long max_nodes = 2000000) const;

    // --- orbit views --------------------------------------------------------
    struct TrajectoryNode {
        int parent = -1; // node index, -1 at the root
        Letter via;      // letter applied at the parent (root: unused)
        Point at;        // base point image under the node's word
        int depth = 0;
        std::vector<int> children;
    };
    struct TrajectoryView {
        Point base;
        int depth = 0;
        std::vector<TrajectoryNode> nodes; // nodes[0] is the root
        bool truncated = false;            // some frontier node admits an extension
        bool budget_exhausted = false;
        int max_depth = 0;
        Word word_of(int node) const;
        /// The whole (finite) tree is known; with truncated == false this
        /// proves the trajectory tree is finite.
        bool complete() const { return !truncated && !budget_exhausted; }
    };
    TrajectoryView trajectory_tree(const Point& p, int depth, long max_nodes = 200000) const;

    struct CayleyView {
        MultiGraph graph;          // vertices = pseudo-orbit points within depth
        std::vector<Point> points; // graph vertex id -> point
        MultiGraph core;
        int core_index_sum = 0; // sum of (valence - 2) over core vertices
        bool truncated = false;
        bool budget_exhausted = false;
    };
    /// Quotient of the trajectory tree identifying words with equal image.
    CayleyView cayley_view(const Point& p, int depth, long max_nodes = 200000) const;

private:
    Forest forest_;
    std::vector<PartialIsometry> gens_;
    std::vector<PartialIsometry> inverses_;
    IndependenceDecl independence_;
    int certified_depth_;
};

/// Interior cut offsets per edge id: every extremal point of every letter
/// domain that lies inside an edge. Between consecutive cuts the set of
/// defined letters is constant.
std::map<int, std::vector<Scalar>> edge_cuts(const System& s);

/// Vertices, cut points and midpoints of all cells; every combinatorial
/// position of the system has a representative here.
std::vector<Point> representative_points(const System& s);

/// Number of letters defined at p.
int point_valence(const System& s, const Point& p);

} // namespace frips
