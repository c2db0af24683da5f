#ifndef DNASTORE_WETLAB_SIM_HPP
#define DNASTORE_WETLAB_SIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dnastore/dna.hpp"

namespace dnastore {

enum class Provenance { original, amplified, misprimed };

struct PoolEntry {
    double abundance = 0.0;
    Provenance provenance = Provenance::original;
};

/// Simulated test tube: strands with real-valued abundances standing in
/// for molecular copy counts. Abundances are deterministic expectations;
/// randomness enters only at sequencing and measurement. Entries are kept
/// ordered by sequence so every traversal is reproducible.
class Pool {
public:
    using Map = std::map<std::string, PoolEntry>;

    void add(const std::string& seq, double abundance, Provenance prov = Provenance::original);
    const Map& entries() const { return entries_; }
    std::size_t unique_count() const { return entries_.size(); }
    double total_abundance() const;
    bool empty() const { return entries_.empty(); }

    Pool scaled(double factor) const;
    static Pool merged(const Pool& a, const Pool& b);

private:
    Map entries_;
};

/// Amplification model: a strand whose forward-primer site sits at edit
/// distance d from the primer (and whose reverse site matches exactly)
/// grows by (1 + efficiency * misprime_decay^d)^cycles; beyond
/// max_edit_distance it is untouched. Mass amplified at d > 0 is emitted
/// as a new entry whose prefix is overwritten with the primer.
struct PcrParams {
    int cycles = 8;
    double efficiency = 0.95;       // e_max in (0, 1]
    double misprime_decay = 0.25;   // gamma in [0, 1)
    int max_edit_distance = 3;
    std::uint64_t seed = 0;         // reserved; amplification itself is deterministic
};

Pool pcr(const Pool& pool, const DnaString& fwd, const DnaString& rev, const PcrParams& params);

/// Every strand is amplified by its best-matching pair, with the primer
/// budget split equally (efficiency scaled by 1/len(pairs)).
Pool multiplex_pcr(const Pool& pool, const std::vector<std::pair<DnaString, DnaString>>& pairs,
                   const PcrParams& params);

/// Stage 1 amplifies with the main pair, stage 2 with the elongated
/// forward primer on the stage-1 output. elongated_fwd must extend fwd.
Pool two_stage_pcr(const Pool& pool, const DnaString& fwd, const DnaString& rev,
                   const DnaString& elongated_fwd, const PcrParams& stage1, const PcrParams& stage2);

/// Per-base read noise. At each position: insert a uniform base with
/// p_ins, then drop the base with p_del or substitute it with p_sub.
/// Defaults approximate short-read sequencing: substitution-dominated,
/// rare indels.
struct ChannelModel {
    double p_sub = 0.002;
    double p_ins = 0.0005;
    double p_del = 0.0005;
    std::uint64_t seed = 0;
};

/// n_reads strands sampled with probability proportional to abundance,
/// each independently perturbed by the channel.
std::vector<DnaString> sequence(const Pool& pool, std::size_t n_reads, const ChannelModel& channel);

/// Concentration measurement with multiplicative noise.
struct MeasurementModel {
    double relative_error = 0.0; // epsilon in [0, 1)
};

double measure(const Pool& pool, const MeasurementModel& model, std::uint64_t seed);

struct MixParams {
    PcrParams pcr{.cycles = 15};
    MeasurementModel measurement{};
    std::uint64_t seed = 0;
};

/// Measure both raw pools, dilute the update pool so per-unique-oligo
/// abundance matches, combine, then amplify with the main primers.
Pool mix_measure_then_amplify(const Pool& data_pool, const Pool& update_pool, const DnaString& fwd,
                              const DnaString& rev, const MixParams& params);

/// Amplify both pools separately, measure, then combine in totals
/// proportional to the unique-oligo counts.
Pool mix_amplify_then_measure(const Pool& data_pool, const Pool& update_pool, const DnaString& fwd,
                              const DnaString& rev, const MixParams& params);

/// Pool file: one record per line, "abundance<TAB>sequence"; '#' comments.
Pool load_pool(const std::string& path);
void save_pool(const Pool& pool, const std::string& path);

/// Reads file: one read per line; 4-line FASTQ input is detected by a
/// leading '@' and imported with the quality line ignored.
std::vector<DnaString> load_reads(const std::string& path);
void save_reads(const std::vector<DnaString>& reads, const std::string& path);

} // namespace dnastore

#endif
