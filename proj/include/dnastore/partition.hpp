#ifndef DNASTORE_PARTITION_HPP
#define DNASTORE_PARTITION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dnastore/codec.hpp"
#include "dnastore/dna.hpp"
#include "dnastore/index_tree.hpp"

namespace dnastore {

/// Strand geometry. Field order along a strand:
/// fwd(20) | sync 'A'(1) | unit_index(2*depth) | version(1) | intra(2) | payload(96) | rev(20).
/// With the default depth of 5 the offsets are bit-exact:
/// fwd[0,20) sync[20,21) unit[21,31) version[31,32) intra[32,34) payload[34,130) rev[130,150).
struct PartitionLayout {
    static constexpr int primer_len = 20;
    static constexpr int sync_len = 1;
    static constexpr int version_len = 1;
    static constexpr int intra_index_len = 2;
    static constexpr int payload_len = 96; // 48 GF(16) symbols
    static constexpr int version_slots = 4;

    int tree_depth = 5;

    int unit_index_len() const { return 2 * tree_depth; }
    int strand_len() const {
        return 2 * primer_len + sync_len + unit_index_len() + version_len + intra_index_len + payload_len;
    }
    int sync_offset() const { return primer_len; }
    int unit_index_offset() const { return primer_len + sync_len; }
    int version_offset() const { return unit_index_offset() + unit_index_len(); }
    int intra_offset() const { return version_offset() + version_len; }
    int payload_offset() const { return intra_offset() + intra_index_len; }
    int rev_offset() const { return payload_offset() + payload_len; }
};

constexpr int kBlockBytes = 256;

/// Everything needed to rebuild, address and decode a partition. The index
/// tree itself is never stored; (depth, seed) regenerate it.
struct PartitionManifest {
    DnaString fwd_primer;
    DnaString rev_primer;
    int tree_depth = 5;
    std::uint64_t tree_seed = 0;
    std::uint64_t randomizer_seed = 0;
    std::uint64_t block_count = 0;
    std::uint64_t file_size = 0;                 // logical byte length of the stored object
    std::vector<std::uint8_t> version_counts;    // per block, 1..version_slots

    PartitionLayout layout() const { return PartitionLayout{tree_depth}; }
    int versions_of(std::uint64_t block) const {
        return block < version_counts.size() ? version_counts[block] : 1;
    }
};

PartitionManifest load_manifest(const std::string& path);
void save_manifest(const PartitionManifest& manifest, const std::string& path);
std::string manifest_to_json(const PartitionManifest& manifest);
PartitionManifest manifest_from_json(const std::string& text);

inline char version_base(int version) { return "ACGT"[version]; }
inline std::optional<int> version_from_base(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return std::nullopt;
    }
}

/// Intra-unit column index 0..14 rendered base-4 ("AA".."TG").
std::string intra_index(int column);
std::optional<int> intra_index_value(std::string_view s);

struct StrandFields {
    std::uint64_t block_no = 0;
    int version = 0;
    int column = 0;
    DnaString payload; // 96 bases
};

/// Strict parse outcome; a reject is a value, not an error.
struct ParseResult {
    bool ok = false;
    StrandFields fields;
    std::string reject_reason;
};

/// Manifest plus the derived lookup structures (tree, index->block map).
class Partition {
public:
    explicit Partition(PartitionManifest manifest);

    const PartitionManifest& manifest() const { return manifest_; }
    const PartitionLayout& layout() const { return layout_; }
    const IndexTree& tree() const { return tree_; }

    /// RS-encode one 256-byte block (or patch record) into its 15 strands.
    std::vector<DnaString> build_strands(std::uint64_t block_no, int version, const Bytes& data) const;

    /// Exact-position slicing of a full-length strand; primers are compared
    /// against the manifest.
    ParseResult parse_strand(const DnaString& s) const;

    /// sync + unit_index + version base; all versions of a block share the
    /// first 2*depth+1 bases and differ only in the last one.
    DnaString block_address(std::uint64_t block_no, int version) const;

    DnaString elongated_fwd(std::uint64_t block_no, int levels) const;

    std::optional<std::uint64_t> block_of_index(std::string_view index) const;

    /// Undo the per-(block, version) payload randomization of a decoded
    /// 264-byte unit record and drop the 8 padding bytes.
    Bytes derandomize_unit(std::uint64_t block_no, int version, const Bytes& record) const;
    Bytes randomize_unit(std::uint64_t block_no, int version, const Bytes& data256) const;

private:
    PartitionManifest manifest_;
    PartitionLayout layout_;
    IndexTree tree_;
    std::unordered_map<std::string, std::uint64_t> index_to_block_;
};

struct PrimerLibrary {
    std::vector<std::pair<DnaString, DnaString>> pairs;
    std::size_t min_pairwise_hamming = 8;
    double gc_low = 0.48;
    double gc_high = 0.52;
};

struct PrimerReport {
    bool ok = true;
    std::vector<std::string> failures;
    double fwd_melting_c = 0.0; // informational 2/4 degree rule
    double rev_melting_c = 0.0;
};

/// GC bounds, homopolymer run <= 3, and Hamming distance >= the library
/// threshold against the pair itself and every admitted primer.
PrimerReport validate_primer_pair(const DnaString& fwd, const DnaString& rev, const PrimerLibrary& library);

/// Frozen default primer pair used by the CLI when none is supplied
/// (GC-balanced, run-free, mutual Hamming distance 16).
extern const char* const kDefaultFwdPrimer;
extern const char* const kDefaultRevPrimer;

} // namespace dnastore

#endif
