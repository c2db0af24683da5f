#include "dnastore/index_tree.hpp"

#include <algorithm>

#include "dnastore/rng.hpp"

namespace dnastore {

namespace {

std::uint64_t level_offset(int level) {
    // Nodes above `level` in a complete 4-ary tree: (4^level - 1) / 3.
    return ((std::uint64_t{1} << (2 * level)) - 1) / 3;
}

std::array<Gram, 4> derive_node_grams(std::uint64_t seed, int level, std::uint64_t prefix) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(level), prefix));

    std::vector<char> edges{'A', 'C', 'G', 'T'};
    rng.shuffle(edges);
    std::vector<char> strong_spacers{'C', 'G'};
    std::vector<char> weak_spacers{'A', 'T'};
    rng.shuffle(strong_spacers);
    rng.shuffle(weak_spacers);

    std::array<Gram, 4> grams{};
    std::size_t s = 0, w = 0;
    for (int child = 0; child < 4; ++child) {
        char edge = edges[child];
        char spacer = is_strong(edge) ? weak_spacers[w++] : strong_spacers[s++];
        grams[child] = Gram{edge, spacer};
    }
    return grams;
}

} // namespace

IndexTree IndexTree::build(const TreeConfig& config) {
    if (config.depth < 1)
        fail(ErrorCode::invalid_argument, "tree depth must be at least 1");
    if (config.depth > 30)
        fail(ErrorCode::invalid_argument, "tree depth above 30 overflows 64-bit block numbers");
    IndexTree t;
    t.config_ = config;
    return t;
}

IndexTree IndexTree::with_explicit_grams(int depth, std::vector<std::array<Gram, 4>> table) {
    if (depth < 1) fail(ErrorCode::invalid_argument, "tree depth must be at least 1");
    const std::uint64_t nodes = level_offset(depth);
    if (table.size() != nodes)
        fail(ErrorCode::invalid_argument, "explicit gram table needs " + std::to_string(nodes) + " nodes");
    IndexTree t;
    t.config_.depth = depth;
    t.config_.seed = 0;
    t.explicit_ = true;
    t.table_ = std::move(table);
    return t;
}

std::array<Gram, 4> IndexTree::node_grams(int level, std::uint64_t prefix) const {
    if (level < 0 || level >= config_.depth)
        fail(ErrorCode::bounds, "node level out of range: " + std::to_string(level));
    if (explicit_) return table_[level_offset(level) + prefix];
    return derive_node_grams(config_.seed, level, prefix);
}

DnaString IndexTree::leaf_index(std::uint64_t block_no) const {
    if (block_no >= leaf_count())
        fail(ErrorCode::bounds, "block " + std::to_string(block_no) + " outside tree with " +
                                    std::to_string(leaf_count()) + " leaves");
    DnaString out;
    std::uint64_t prefix = 0;
    for (int level = 0; level < config_.depth; ++level) {
        int shift = 2 * (config_.depth - 1 - level);
        int child = static_cast<int>((block_no >> shift) & 0x3);
        Gram g = node_grams(level, prefix)[child];
        out.push_back(base_from_char(g.edge));
        out.push_back(base_from_char(g.spacer));
        prefix = (prefix << 2) | static_cast<std::uint64_t>(child);
    }
    return out;
}

DnaString IndexTree::render_path(const NodePath& path) const {
    if (path.level() > config_.depth)
        fail(ErrorCode::bounds, "path deeper than the tree");
    DnaString out;
    std::uint64_t prefix = 0;
    for (int level = 0; level < path.level(); ++level) {
        int child = path.choices[level];
        if (child < 0 || child > 3) fail(ErrorCode::invalid_argument, "child ordinal must be 0..3");
        Gram g = node_grams(level, prefix)[child];
        out.push_back(base_from_char(g.edge));
        out.push_back(base_from_char(g.spacer));
        prefix = (prefix << 2) | static_cast<std::uint64_t>(child);
    }
    return out;
}

DnaString elongate_primer(const DnaString& main_primer, const IndexTree& tree,
                          std::uint64_t block_no, int levels) {
    if (main_primer.size() != 20)
        fail(ErrorCode::invalid_argument, "main primer must be 20 bases");
    if (levels < 0 || levels > tree.depth())
        fail(ErrorCode::invalid_argument, "elongation levels must be 0.." + std::to_string(tree.depth()));
    DnaString index = tree.leaf_index(block_no);
    DnaString out = main_primer;
    out.push_back(Base::A); // sync base
    out.append(index.substr(0, static_cast<std::size_t>(2 * levels)));
    return out;
}

std::vector<NodePath> prefix_cover(const IndexTree& tree, std::uint64_t first_block,
                                   std::uint64_t last_block) {
    if (first_block > last_block || last_block >= tree.leaf_count())
        fail(ErrorCode::bounds, "invalid block range");
    std::vector<NodePath> cover;
    std::uint64_t pos = first_block;
    const int depth = tree.depth();
    while (pos <= last_block) {
        // Largest aligned subtree starting at pos that fits in the range.
        int levels_up = 0;
        while (levels_up < depth) {
            std::uint64_t size = std::uint64_t{1} << (2 * (levels_up + 1));
            if (pos % size != 0 || pos + size - 1 > last_block) break;
            ++levels_up;
        }
        std::uint64_t size = std::uint64_t{1} << (2 * levels_up);
        int level = depth - levels_up;
        std::uint64_t ordinal = pos >> (2 * levels_up);
        NodePath path;
        path.choices.resize(static_cast<std::size_t>(level));
        for (int l = 0; l < level; ++l)
            path.choices[static_cast<std::size_t>(l)] =
                static_cast<int>((ordinal >> (2 * (level - 1 - l))) & 0x3);
        cover.push_back(std::move(path));
        pos += size;
        if (size == 0) break;
    }
    return cover;
}

ValidationReport validate_index_set(const IndexTree& tree) {
    ValidationReport report;
    auto flag = [&](const std::string& msg) {
        report.ok = false;
        if (report.failures.size() < 32) report.failures.push_back(msg);
    };

    const int depth = tree.depth();

    // Sibling grams: four distinct edges, opposite-class spacers, pairwise distance 2.
    for (int level = 0; level < depth; ++level) {
        std::uint64_t nodes = std::uint64_t{1} << (2 * level);
        for (std::uint64_t prefix = 0; prefix < nodes; ++prefix) {
            auto grams = tree.node_grams(level, prefix);
            for (int a = 0; a < 4; ++a) {
                if (is_strong(grams[a].edge) == is_strong(grams[a].spacer))
                    flag("node level " + std::to_string(level) + " prefix " + std::to_string(prefix) +
                         " child " + std::to_string(a) + ": spacer has same GC class as edge");
                for (int b = a + 1; b < 4; ++b) {
                    int d = (grams[a].edge != grams[b].edge ? 1 : 0) +
                            (grams[a].spacer != grams[b].spacer ? 1 : 0);
                    if (d != 2)
                        flag("node level " + std::to_string(level) + " prefix " + std::to_string(prefix) +
                             ": sibling grams " + std::to_string(a) + "," + std::to_string(b) +
                             " at distance " + std::to_string(d));
                }
            }
        }
    }

    const std::uint64_t leaves = tree.leaf_count();
    std::vector<std::string> indexes;
    indexes.reserve(leaves);
    for (std::uint64_t b = 0; b < leaves; ++b)
        indexes.push_back(tree.leaf_index(b).str());

    for (std::uint64_t b = 0; b < leaves; ++b) {
        DnaString with_sync = DnaString::from_text("A" + indexes[b]);
        if (with_sync.max_homopolymer_run() > 2)
            flag("leaf " + std::to_string(b) + ": homopolymer run > 2 in " + with_sync.str());
        std::size_t strong = 0;
        for (std::size_t i = 0; i < indexes[b].size(); ++i) {
            if (is_strong(indexes[b][i])) ++strong;
            if (i % 2 == 1 && 2 * strong != i + 1) {
                flag("leaf " + std::to_string(b) + ": prefix of length " + std::to_string(i + 1) +
                     " is not GC-balanced in " + indexes[b]);
                break;
            }
        }
    }

    std::size_t min_d = indexes.empty() ? 0 : indexes[0].size();
    unsigned long long total = 0;
    for (std::size_t i = 0; i < indexes.size(); ++i) {
        for (std::size_t j = i + 1; j < indexes.size(); ++j) {
            std::size_t d = hamming_distance(indexes[i], indexes[j]);
            total += d;
            if (d < min_d) min_d = d;
        }
    }
    const double pairs = static_cast<double>(leaves) * (static_cast<double>(leaves) - 1) / 2.0;
    report.min_pairwise_leaf_distance = min_d;
    report.avg_pairwise_sparse = pairs > 0 ? static_cast<double>(total) / pairs : 0.0;
    // Dense baseline: all 4^depth strings of length `depth`; per position a
    // fraction 3/4 * N/(N-1) of ordered-distinct pairs differ.
    const double n = static_cast<double>(leaves);
    report.avg_pairwise_dense = depth * 0.75 * n / (n - 1.0);
    report.sparse_dense_ratio =
        report.avg_pairwise_dense > 0 ? report.avg_pairwise_sparse / report.avg_pairwise_dense : 0.0;
    if (min_d < 2) flag("minimum pairwise leaf distance " + std::to_string(min_d) + " < 2");

    return report;
}

} // namespace dnastore
