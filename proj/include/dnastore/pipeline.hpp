#ifndef DNASTORE_PIPELINE_HPP
#define DNASTORE_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dnastore/partition.hpp"
#include "dnastore/updates.hpp"
#include "dnastore/wetlab_sim.hpp"

namespace dnastore {

struct DecodeParams {
    double cluster_threshold = 0.15; // fraction of the expected region length
    int bma_window = 3;              // indel re-sync lookahead
    std::size_t primer_edits = 2;    // tolerance when locating primer sites
    int max_candidates = 4;          // per-address bound for candidate recursion
};

/// Noisy copies of (what is believed to be) one strand region. Members
/// stay within the clustering threshold of the representative, which is
/// the founding member. member_ids index into the payload list the
/// cluster was built from.
struct Cluster {
    std::string representative;
    std::vector<std::string> members;
    std::vector<std::size_t> member_ids;
    std::size_t size() const { return members.size(); }
};

struct Extraction {
    std::vector<std::string> regions;      // text between the primer sites
    std::vector<std::size_t> primer_edits; // forward-site edits per region
    std::size_t background = 0;            // reads where either site was unlocatable
};

/// Locate the forward primer (within `max_edits`) and the reverse site in
/// each read and slice out what lies between them. Reads that match
/// neither are counted as background, not errors.
Extraction extract_payloads(const std::vector<DnaString>& reads, const DnaString& fwd,
                            const DnaString& rev, std::size_t max_edits);

/// Greedy single-pass clustering: each payload joins the first cluster
/// whose representative is within edit distance threshold*length, else
/// founds a new cluster. Deterministic given input order.
std::vector<Cluster> cluster_payloads(const std::vector<std::string>& payloads, double threshold);

/// Double-sided majority alignment: a plurality vote per position with a
/// lookahead window to re-synchronize after indels, run forward and (on
/// the reversed members) backward; the output splices the forward
/// consensus's first half with the backward consensus's second half.
/// Ties break in canonical base order.
std::string reconstruct(const Cluster& cluster, std::size_t expected_len, int window = 3);

/// One decoded block: the version-0 bytes, the stored record of every
/// version slot, the deserialized patches, and the fully resolved bytes.
struct DecodedBlock {
    Bytes original;
    Bytes updated;
    std::vector<Bytes> version_records; // 256-byte record per version slot
    std::vector<UpdatePatch> patches;
    std::size_t reads_used = 0;
    std::size_t background = 0;
    std::size_t clusters_formed = 0;
    std::size_t duplicates_discarded = 0;
};

/// Cluster-and-reconstruct decode of one block (all version slots named
/// by the manifest). Reconstructions are consumed in descending cluster
/// size; a reconstruction whose address duplicates an already recovered
/// one is discarded. Missing columns become RS erasures.
DecodedBlock decode_block(const std::vector<DnaString>& reads, const Partition& partition,
                          std::uint64_t block_no, const DecodeParams& params = {});

/// decode_block variant that, when several reconstructions claim one
/// address, retries RS decoding over candidate assignments in descending
/// cluster-size order until one decodes cleanly.
DecodedBlock decode_with_candidates(const std::vector<DnaString>& reads, const Partition& partition,
                                    std::uint64_t block_no, int max_candidates,
                                    const DecodeParams& params = {});

/// Whole-partition decode over strict-parsing reads (the bulk path for
/// low-noise readouts): groups reads by exact address, takes per-position
/// plurality consensus per column, and erasure-decodes every unit.
struct DecodedPartition {
    std::vector<DecodedBlock> blocks;
    Bytes file_bytes; // originals concatenated and trimmed to the manifest file size
    std::size_t reads_used = 0;
    std::size_t reads_rejected = 0;
};
DecodedPartition decode_all_blocks(const std::vector<DnaString>& reads, const Partition& partition);

struct HistogramRow {
    std::uint64_t block = 0;
    int version = 0;
    std::size_t reads = 0;
};

/// Per-(block, version) read counts keyed by the address fields parsed
/// out of each read; unparseable reads are excluded.
std::vector<HistogramRow> stats_histogram(const std::vector<DnaString>& reads, const Partition& partition);

struct RetrievalMetrics {
    std::size_t total_reads = 0;
    double on_target_fraction = 0.0;
    double misprime_fraction = 0.0;    // target prefix, foreign payload
    double other_block_fraction = 0.0;
    double background_fraction = 0.0;
    double unwanted_to_wanted = 0.0;   // w = (total - target) / target
    std::vector<HistogramRow> histogram;
};

/// Classify every read of a block-targeted readout. Reads carrying the
/// target's elongated prefix are split into true copies and misprimes by
/// comparing payloads against the re-encoded decode result.
RetrievalMetrics compute_metrics(const std::vector<DnaString>& reads, const Partition& partition,
                                 std::uint64_t target_block, const DecodeParams& params = {});

inline double unwanted_to_wanted(double on_target_fraction) {
    return on_target_fraction > 0.0 ? (1.0 - on_target_fraction) / on_target_fraction : 0.0;
}

/// Sequencing-cost reduction between two readouts: (w_baseline + 1) / (w_precise + 1).
inline double cost_reduction_factor(double w_baseline, double w_precise) {
    return (w_baseline + 1.0) / (w_precise + 1.0);
}

} // namespace dnastore

#endif
