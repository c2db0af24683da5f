#ifndef DNASTORE_INDEX_TREE_HPP
#define DNASTORE_INDEX_TREE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dnastore/dna.hpp"

namespace dnastore {

struct TreeConfig {
    int depth = 5;              // levels of 4-ary branching; 4^depth leaves
    std::uint64_t seed = 0;     // drives every per-node random choice
};

/// One tree edge rendered as two bases: the edge letter plus a spacer of
/// the opposite GC class. Sibling grams under one node are pairwise
/// Hamming distance exactly 2 (all four edges distinct, all four spacers
/// distinct).
struct Gram {
    char edge;
    char spacer;
};

/// Path from the root: child ordinals (0..3) per level. The root is the
/// empty path and renders to the empty string.
struct NodePath {
    std::vector<int> choices;
    int level() const { return static_cast<int>(choices.size()); }
};

/// Sparse, PCR-compatible address tree. Node assignments are derived
/// deterministically from the seed, so only (depth, seed) ever needs to
/// be stored. Immutable after construction.
class IndexTree {
public:
    static IndexTree build(const TreeConfig& config);

    /// Test/diagnostic construction from an explicit level-order gram
    /// table (node id = (4^level - 1)/3 + prefix). No invariants are
    /// enforced; feed the result to validate_index_set.
    static IndexTree with_explicit_grams(int depth, std::vector<std::array<Gram, 4>> table);

    int depth() const { return config_.depth; }
    std::uint64_t seed() const { return config_.seed; }
    std::uint64_t leaf_count() const { return std::uint64_t{1} << (2 * config_.depth); }

    /// The four child grams of the node at (level, prefix), where prefix
    /// is the child-ordinal path packed base-4 (0 for the root).
    std::array<Gram, 4> node_grams(int level, std::uint64_t prefix) const;

    /// Rendered 2*depth-base index of the block_no-th leaf in
    /// left-to-right order.
    DnaString leaf_index(std::uint64_t block_no) const;

    DnaString render_path(const NodePath& path) const;

private:
    IndexTree() = default;
    TreeConfig config_{};
    bool explicit_ = false;
    std::vector<std::array<Gram, 4>> table_;
};

/// main_primer + sync base 'A' + the first 2*levels bases of the block's
/// leaf index. A 20-base primer fully elongated at depth 5 is 31 bases.
DnaString elongate_primer(const DnaString& main_primer, const IndexTree& tree,
                          std::uint64_t block_no, int levels);

/// Unique minimal set of node paths whose descendant leaves are exactly
/// [first_block, last_block]; no four returned siblings share a parent.
std::vector<NodePath> prefix_cover(const IndexTree& tree, std::uint64_t first_block,
                                   std::uint64_t last_block);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::size_t min_pairwise_leaf_distance = 0;
    double avg_pairwise_sparse = 0.0;
    double avg_pairwise_dense = 0.0; // same-leaf-count dense enumeration baseline
    double sparse_dense_ratio = 0.0;
};

/// Exhaustive invariant check over every node and every leaf pair:
/// homopolymer run <= 2 in sync+index, 50% GC in every even prefix,
/// sibling gram distance exactly 2, minimum pairwise leaf distance >= 2.
/// Cost grows as 16^depth; intended for the depths used in practice.
ValidationReport validate_index_set(const IndexTree& tree);

} // namespace dnastore

#endif
