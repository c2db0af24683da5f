#include "dnastore/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "dnastore/ecc.hpp"

namespace dnastore {

Extraction extract_payloads(const std::vector<DnaString>& reads, const DnaString& fwd,
                            const DnaString& rev, std::size_t max_edits) {
    Extraction out;
    out.regions.reserve(reads.size());
    for (const auto& read : reads) {
        PatternMatch pm = locate_prefix(read.view(), fwd.view(), max_edits);
        if (!pm.found) {
            ++out.background;
            continue;
        }
        SuffixMatch sm = locate_suffix(read.view(), rev.view(), max_edits);
        if (!sm.found || sm.start <= pm.end) {
            ++out.background;
            continue;
        }
        out.regions.push_back(std::string(read.view().substr(pm.end, sm.start - pm.end)));
        out.primer_edits.push_back(pm.edits);
    }
    return out;
}

std::vector<Cluster> cluster_payloads(const std::vector<std::string>& payloads, double threshold) {
    if (!(threshold > 0.0) || threshold >= 1.0)
        fail(ErrorCode::invalid_argument, "cluster threshold must be in (0, 1)");
    std::vector<Cluster> clusters;
    for (std::size_t id = 0; id < payloads.size(); ++id) {
        const std::string& p = payloads[id];
        const std::size_t limit = static_cast<std::size_t>(threshold * static_cast<double>(p.size()));
        bool joined = false;
        for (auto& c : clusters) {
            if (bounded_edit_distance(p, c.representative, limit) <= limit) {
                c.members.push_back(p);
                c.member_ids.push_back(id);
                joined = true;
                break;
            }
        }
        if (!joined) clusters.push_back(Cluster{p, {p}, {id}});
    }
    return clusters;
}

namespace {

std::string bma_pass(const std::vector<const std::string*>& members, std::size_t expected_len, int window) {
    std::vector<std::size_t> cursor(members.size(), 0);
    std::string out;
    out.reserve(expected_len);
    for (std::size_t pos = 0; pos < expected_len; ++pos) {
        int votes[4] = {0, 0, 0, 0};
        for (std::size_t i = 0; i < members.size(); ++i) {
            const std::string& m = *members[i];
            if (cursor[i] < m.size()) ++votes[static_cast<int>(base_from_char(m[cursor[i]]))];
        }
        int winner = 0;
        for (int b = 1; b < 4; ++b)
            if (votes[b] > votes[winner]) winner = b;
        if (votes[winner] == 0) { // every member exhausted; pad canonically
            out.push_back('A');
            continue;
        }
        const char wc = base_to_char(static_cast<Base>(winner));
        out.push_back(wc);
        for (std::size_t i = 0; i < members.size(); ++i) {
            const std::string& m = *members[i];
            if (cursor[i] >= m.size()) continue;
            if (m[cursor[i]] == wc) {
                ++cursor[i];
                continue;
            }
            // Disagreeing member: classify the suspected error by the
            // member's length slack (symbols it has beyond the output
            // still owed). Positive slack means surplus symbols, so look
            // for the winner a little further on and skip the insertions;
            // negative slack means the member is short, so hold position
            // and let the deleted symbol pass; equal length reads as a
            // substitution.
            std::ptrdiff_t slack = static_cast<std::ptrdiff_t>(m.size() - cursor[i]) -
                                   static_cast<std::ptrdiff_t>(expected_len - pos);
            if (slack > 0) {
                bool advanced = false;
                for (int j = 1; j <= window && cursor[i] + static_cast<std::size_t>(j) < m.size(); ++j) {
                    if (m[cursor[i] + static_cast<std::size_t>(j)] == wc) {
                        cursor[i] += static_cast<std::size_t>(j) + 1;
                        advanced = true;
                        break;
                    }
                }
                if (!advanced) ++cursor[i];
            } else if (slack == 0) {
                ++cursor[i];
            }
            // slack < 0: stay put.
        }
    }
    return out;
}

} // namespace

std::string reconstruct(const Cluster& cluster, std::size_t expected_len, int window) {
    if (cluster.members.empty())
        fail(ErrorCode::invalid_argument, "cannot reconstruct from an empty cluster");
    std::vector<const std::string*> members;
    members.reserve(cluster.members.size());
    for (const auto& m : cluster.members) members.push_back(&m);
    std::string forward = bma_pass(members, expected_len, window);

    std::vector<std::string> reversed;
    reversed.reserve(cluster.members.size());
    for (const auto& m : cluster.members) reversed.emplace_back(m.rbegin(), m.rend());
    std::vector<const std::string*> rmembers;
    rmembers.reserve(reversed.size());
    for (const auto& m : reversed) rmembers.push_back(&m);
    std::string backward = bma_pass(rmembers, expected_len, window);
    std::reverse(backward.begin(), backward.end());

    const std::size_t mid = expected_len / 2;
    return forward.substr(0, mid) + backward.substr(mid);
}

namespace {

struct CandidateStrand {
    std::size_t cluster_size = 0;
    std::string payload; // 96 payload bases
};

// Candidates per (version, column), each list in descending cluster-size
// order (stable: earlier cluster wins ties).
using CandidateMap = std::map<std::pair<int, int>, std::vector<CandidateStrand>>;

struct Gathered {
    CandidateMap candidates;
    std::size_t reads_used = 0;
    std::size_t background = 0;
    std::size_t clusters_formed = 0;
    std::size_t duplicates = 0; // reconstructions beyond the first per address
};

Gathered gather_candidates(const std::vector<DnaString>& reads, const Partition& partition,
                           std::uint64_t block_no, const DecodeParams& params, bool early_stop) {
    const PartitionLayout& layout = partition.layout();
    const int vcount = partition.manifest().versions_of(block_no);
    const std::size_t region_len = static_cast<std::size_t>(
        PartitionLayout::version_len + PartitionLayout::intra_index_len + PartitionLayout::payload_len);

    DnaString elong = partition.elongated_fwd(block_no, layout.tree_depth);
    Extraction extraction =
        extract_payloads(reads, elong, partition.manifest().rev_primer, params.primer_edits);

    std::vector<Cluster> clusters = cluster_payloads(extraction.regions, params.cluster_threshold);

    // Clusters whose best member matched the elongated primer exactly rank
    // ahead of near-miss matches (residue of neighbouring indexes); within
    // a match grade, descending size, then lexicographic representative.
    std::vector<std::size_t> best_edits(clusters.size(), SIZE_MAX);
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (std::size_t id : clusters[c].member_ids)
            best_edits[c] = std::min(best_edits[c], extraction.primer_edits[id]);

    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (best_edits[a] != best_edits[b]) return best_edits[a] < best_edits[b];
        if (clusters[a].size() != clusters[b].size()) return clusters[a].size() > clusters[b].size();
        return clusters[a].representative < clusters[b].representative;
    });

    Gathered g;
    g.reads_used = extraction.regions.size();
    g.background = extraction.background;
    g.clusters_formed = clusters.size();

    const std::size_t needed = static_cast<std::size_t>(vcount) * EccConfig::n;
    std::size_t filled = 0;
    for (std::size_t idx : order) {
        const Cluster& cluster = clusters[idx];
        std::string consensus = reconstruct(cluster, region_len, params.bma_window);
        auto version = version_from_base(consensus[0]);
        auto column = intra_index_value(std::string_view(consensus).substr(1, 2));
        if (!version || *version >= vcount || !column) continue; // quarantined
        auto key = std::make_pair(*version, *column);
        auto& list = g.candidates[key];
        if (list.empty())
            ++filled;
        else
            ++g.duplicates;
        list.push_back(CandidateStrand{cluster.size(), consensus.substr(3)});
        if (early_stop && filled == needed) break;
    }
    return g;
}

ColumnSymbols symbols_from_payload(const std::string& payload) {
    Bytes bytes = map_bases_to_bits(DnaString::from_text(payload));
    ColumnSymbols symbols{};
    for (std::size_t b = 0; b < bytes.size() && 2 * b + 1 < symbols.size(); ++b) {
        symbols[2 * b] = bytes[b] >> 4;
        symbols[2 * b + 1] = bytes[b] & 0xF;
    }
    return symbols;
}

std::string missing_addresses_text(int version, const std::vector<int>& missing) {
    std::string s;
    for (int c : missing) {
        if (!s.empty()) s += ", ";
        s += "v" + std::to_string(version) + ":" + intra_index(c);
    }
    return s;
}

constexpr std::size_t kErasePick = SIZE_MAX; // drop the column, let RS erase it

Bytes decode_version_unit(const CandidateMap& candidates, int version,
                          const std::vector<std::size_t>& pick) {
    std::vector<ReceivedColumn> columns;
    int slot = 0;
    for (int c = 0; c < EccConfig::n; ++c) {
        auto it = candidates.find({version, c});
        if (it == candidates.end()) continue;
        std::size_t which = pick.empty() ? 0 : pick[static_cast<std::size_t>(slot)];
        ++slot;
        if (which == kErasePick) continue;
        if (which >= it->second.size()) which = 0;
        columns.push_back(ReceivedColumn{c, symbols_from_payload(it->second[which].payload)});
    }
    return rs_decode_unit(columns);
}

DecodedBlock assemble_block(const Partition& partition, std::uint64_t block_no,
                            const Gathered& g, int max_candidates) {
    const int vcount = partition.manifest().versions_of(block_no);
    DecodedBlock out;
    out.reads_used = g.reads_used;
    out.background = g.background;
    out.clusters_formed = g.clusters_formed;
    out.duplicates_discarded = g.duplicates;

    for (int v = 0; v < vcount; ++v) {
        std::vector<int> missing;
        std::vector<int> present_cols;
        for (int c = 0; c < EccConfig::n; ++c) {
            if (g.candidates.count({v, c}))
                present_cols.push_back(c);
            else
                missing.push_back(c);
        }
        if (static_cast<int>(present_cols.size()) < EccConfig::k)
            fail(ErrorCode::decode_failure,
                 "block " + std::to_string(block_no) + ": insufficient coverage, missing addresses " +
                     missing_addresses_text(v, missing));

        // Per-column choice lists. With recursion enabled, a column may
        // offer alternate candidates (up to max_candidates, largest
        // clusters first) and, when even its best cluster is a singleton,
        // the option of being erased instead of trusted.
        const std::size_t erase_budget =
            static_cast<std::size_t>(EccConfig::parity) - std::min<std::size_t>(missing.size(), 4);
        std::vector<std::vector<std::size_t>> choices(present_cols.size());
        bool varying = false;
        for (std::size_t s = 0; s < present_cols.size(); ++s) {
            const auto& list = g.candidates.at({v, present_cols[s]});
            std::size_t n = max_candidates > 1
                                ? std::min<std::size_t>(list.size(), static_cast<std::size_t>(max_candidates))
                                : 1;
            for (std::size_t i = 0; i < n; ++i) choices[s].push_back(i);
            if (max_candidates > 1 && erase_budget > 0 && list.front().cluster_size <= 1)
                choices[s].push_back(kErasePick);
            if (choices[s].size() > 1) varying = true;
        }

        Bytes record;
        if (!varying || max_candidates <= 1) {
            record = decode_version_unit(g.candidates, v, {});
        } else {
            struct Assignment {
                std::vector<std::size_t> pick;
                std::size_t erased = 0;
                std::size_t score = 0;
            };
            std::vector<Assignment> assignments;
            constexpr std::size_t kMaxAssignments = 8192;
            std::vector<std::size_t> odometer(present_cols.size(), 0);
            bool truncated = false;
            std::size_t visited = 0;
            for (;;) {
                if (++visited > 200000) {
                    truncated = true;
                    break;
                }
                Assignment a;
                a.pick.resize(present_cols.size());
                for (std::size_t s = 0; s < present_cols.size(); ++s) {
                    std::size_t choice = choices[s][odometer[s]];
                    a.pick[s] = choice;
                    if (choice == kErasePick)
                        ++a.erased;
                    else
                        a.score += g.candidates.at({v, present_cols[s]})[choice].cluster_size;
                }
                if (a.erased <= erase_budget) assignments.push_back(std::move(a));
                if (assignments.size() >= kMaxAssignments) {
                    truncated = true;
                    break;
                }
                std::size_t s = present_cols.size();
                bool wrapped = true;
                while (s > 0) {
                    --s;
                    if (++odometer[s] < choices[s].size()) {
                        wrapped = false;
                        break;
                    }
                    odometer[s] = 0;
                }
                if (wrapped) break;
            }
            // Fewest erasures first, then the largest clusters.
            std::stable_sort(assignments.begin(), assignments.end(),
                             [](const Assignment& a, const Assignment& b) {
                                 if (a.erased != b.erased) return a.erased < b.erased;
                                 return a.score > b.score;
                             });
            bool decoded = false;
            std::string last_error;
            for (const auto& a : assignments) {
                try {
                    record = decode_version_unit(g.candidates, v, a.pick);
                    decoded = true;
                    break;
                } catch (const UnitDecodeError& e) {
                    last_error = e.what();
                }
            }
            if (!decoded)
                fail(ErrorCode::decode_failure,
                     "block " + std::to_string(block_no) + " version " + std::to_string(v) +
                         ": no candidate assignment decodes (" + last_error +
                         (truncated ? "; assignment space truncated" : "") + ")");
        }

        Bytes plain = partition.derandomize_unit(block_no, v, record);
        out.version_records.push_back(plain);
        if (v == 0)
            out.original = plain;
        else
            out.patches.push_back(deserialize_patch(plain));
    }

    VersionChain chain{out.original, out.patches};
    out.updated = resolve_chain(chain);
    return out;
}

} // namespace

DecodedBlock decode_block(const std::vector<DnaString>& reads, const Partition& partition,
                          std::uint64_t block_no, const DecodeParams& params) {
    Gathered g = gather_candidates(reads, partition, block_no, params, /*early_stop=*/true);
    return assemble_block(partition, block_no, g, /*max_candidates=*/1);
}

DecodedBlock decode_with_candidates(const std::vector<DnaString>& reads, const Partition& partition,
                                    std::uint64_t block_no, int max_candidates,
                                    const DecodeParams& params) {
    if (max_candidates < 1) fail(ErrorCode::invalid_argument, "max_candidates must be >= 1");
    Gathered g = gather_candidates(reads, partition, block_no, params, /*early_stop=*/false);
    return assemble_block(partition, block_no, g, max_candidates);
}

DecodedPartition decode_all_blocks(const std::vector<DnaString>& reads, const Partition& partition) {
    DecodedPartition out;
    const PartitionManifest& manifest = partition.manifest();

    // Strict parse groups reads by exact (block, version, column).
    std::map<std::tuple<std::uint64_t, int, int>, std::vector<std::string>> groups;
    for (const auto& read : reads) {
        ParseResult pr = partition.parse_strand(read);
        if (!pr.ok) {
            ++out.reads_rejected;
            continue;
        }
        ++out.reads_used;
        groups[{pr.fields.block_no, pr.fields.version, pr.fields.column}].push_back(pr.fields.payload.str());
    }

    for (std::uint64_t b = 0; b < manifest.block_count; ++b) {
        const int vcount = manifest.versions_of(b);
        DecodedBlock block;
        for (int v = 0; v < vcount; ++v) {
            std::vector<ReceivedColumn> columns;
            std::vector<int> missing;
            for (int c = 0; c < EccConfig::n; ++c) {
                auto it = groups.find({b, v, c});
                if (it == groups.end()) {
                    missing.push_back(c);
                    continue;
                }
                // Per-position plurality over identically laid out payloads.
                std::string consensus(PartitionLayout::payload_len, 'A');
                for (int pos = 0; pos < PartitionLayout::payload_len; ++pos) {
                    int votes[4] = {0, 0, 0, 0};
                    for (const std::string& m : it->second)
                        ++votes[static_cast<int>(base_from_char(m[static_cast<std::size_t>(pos)]))];
                    int winner = 0;
                    for (int k = 1; k < 4; ++k)
                        if (votes[k] > votes[winner]) winner = k;
                    consensus[static_cast<std::size_t>(pos)] = base_to_char(static_cast<Base>(winner));
                }
                columns.push_back(ReceivedColumn{c, symbols_from_payload(consensus)});
            }
            if (static_cast<int>(columns.size()) < EccConfig::k)
                fail(ErrorCode::decode_failure,
                     "block " + std::to_string(b) + ": insufficient coverage, missing addresses " +
                         missing_addresses_text(v, missing));
            Bytes record = rs_decode_unit(columns);
            Bytes plain = partition.derandomize_unit(b, v, record);
            block.version_records.push_back(plain);
            if (v == 0)
                block.original = plain;
            else
                block.patches.push_back(deserialize_patch(plain));
        }
        block.updated = resolve_chain(VersionChain{block.original, block.patches});
        out.file_bytes.insert(out.file_bytes.end(), block.original.begin(), block.original.end());
        out.blocks.push_back(std::move(block));
    }
    if (manifest.file_size > 0 && out.file_bytes.size() > manifest.file_size)
        out.file_bytes.resize(manifest.file_size);
    return out;
}

namespace {

/// Address fields sliced out of arbitrary reads; exact index lookups with
/// a small-shift and nearest-leaf fallback for noisy reads.
class ReadAddressParser {
public:
    ReadAddressParser(const Partition& partition, std::size_t max_edits)
        : partition_(partition), layout_(partition.layout()), max_edits_(max_edits) {
        leaf_.reserve(partition.manifest().block_count);
        for (std::uint64_t b = 0; b < partition.manifest().block_count; ++b)
            leaf_.push_back(partition.tree().leaf_index(b).str());
    }

    struct Parsed {
        std::uint64_t block = 0;
        int version = 0;
        bool exact_index = false;
    };

    std::optional<Parsed> parse(const std::string& read) const {
        PatternMatch pm = locate_prefix(read, partition_.manifest().fwd_primer.view(), max_edits_);
        if (!pm.found) return std::nullopt;
        const std::size_t index_len = static_cast<std::size_t>(layout_.unit_index_len());
        for (std::size_t shift : {std::size_t{1}, std::size_t{0}, std::size_t{2}}) {
            std::size_t at = pm.end + shift;
            if (at + index_len + 1 > read.size()) continue;
            auto block = partition_.block_of_index(std::string_view(read).substr(at, index_len));
            if (!block) continue;
            auto version = version_from_base(read[at + index_len]);
            return Parsed{*block, version ? *version : 0, true};
        }
        // Nearest leaf within the edit tolerance; ambiguous hits are dropped.
        std::size_t at = pm.end + 1;
        if (at + index_len + 1 > read.size()) return std::nullopt;
        std::string_view slice = std::string_view(read).substr(at, index_len);
        std::size_t best = max_edits_ + 1, second = max_edits_ + 1;
        std::uint64_t best_block = 0;
        for (std::uint64_t b = 0; b < leaf_.size(); ++b) {
            std::size_t d = bounded_edit_distance(slice, leaf_[b], max_edits_);
            if (d < best) {
                second = best;
                best = d;
                best_block = b;
            } else if (d < second) {
                second = d;
            }
        }
        if (best > max_edits_ || second <= best) return std::nullopt;
        auto version = version_from_base(read[at + index_len]);
        return Parsed{best_block, version ? *version : 0, false};
    }

private:
    const Partition& partition_;
    PartitionLayout layout_;
    std::size_t max_edits_;
    std::vector<std::string> leaf_;
};

std::vector<HistogramRow> histogram_rows(const std::map<std::pair<std::uint64_t, int>, std::size_t>& counts) {
    std::vector<HistogramRow> rows;
    rows.reserve(counts.size());
    for (const auto& [key, n] : counts) rows.push_back(HistogramRow{key.first, key.second, n});
    return rows;
}

} // namespace

std::vector<HistogramRow> stats_histogram(const std::vector<DnaString>& reads, const Partition& partition) {
    ReadAddressParser parser(partition, 2);
    std::map<std::pair<std::uint64_t, int>, std::size_t> counts;
    for (const auto& read : reads) {
        auto parsed = parser.parse(read.str());
        if (!parsed) continue;
        ++counts[{parsed->block, parsed->version}];
    }
    return histogram_rows(counts);
}

RetrievalMetrics compute_metrics(const std::vector<DnaString>& reads, const Partition& partition,
                                 std::uint64_t target_block, const DecodeParams& params) {
    RetrievalMetrics m;
    m.total_reads = reads.size();
    if (reads.empty()) return m;

    const PartitionLayout& layout = partition.layout();
    const int vcount = partition.manifest().versions_of(target_block);
    const std::size_t region_len = static_cast<std::size_t>(
        PartitionLayout::version_len + PartitionLayout::intra_index_len + PartitionLayout::payload_len);

    // Ground truth for payload attribution: decode the readout, re-encode
    // the records, and keep each true strand's post-index region. A slice
    // of the readout is plenty for the decode and keeps clustering cheap.
    constexpr std::size_t kTruthReads = 5000;
    std::vector<DnaString> truth_reads(reads.begin(),
                                       reads.begin() + static_cast<std::ptrdiff_t>(
                                                           std::min(reads.size(), kTruthReads)));
    std::vector<std::vector<std::string>> truth; // [version][column]
    bool have_truth = false;
    try {
        DecodedBlock decoded = decode_block(truth_reads, partition, target_block, params);
        truth.resize(static_cast<std::size_t>(vcount));
        for (int v = 0; v < vcount; ++v) {
            auto strands = partition.build_strands(target_block, v, decoded.version_records[static_cast<std::size_t>(v)]);
            for (const auto& s : strands)
                truth[static_cast<std::size_t>(v)].push_back(
                    s.str().substr(static_cast<std::size_t>(layout.version_offset()), region_len));
        }
        have_truth = true;
    } catch (const Error&) {
        // Classification falls back to address validity alone.
    }

    ReadAddressParser parser(partition, params.primer_edits);
    DnaString elong = partition.elongated_fwd(target_block, layout.tree_depth);
    const std::size_t payload_tolerance = region_len / 4;

    std::size_t target_reads = 0, misprime_reads = 0, other_reads = 0, background_reads = 0;
    std::map<std::pair<std::uint64_t, int>, std::size_t> counts;

    for (const auto& read : reads) {
        auto parsed = parser.parse(read.str());
        bool target_prefix = false;
        if (parsed && parsed->exact_index) {
            target_prefix = parsed->block == target_block;
        } else {
            PatternMatch pm = locate_prefix(read.view(), elong.view(), params.primer_edits);
            target_prefix = pm.found;
        }

        if (target_prefix) {
            PatternMatch pm = locate_prefix(read.view(), elong.view(), params.primer_edits + 2);
            SuffixMatch sm = locate_suffix(read.view(), partition.manifest().rev_primer.view(), params.primer_edits);
            if (!pm.found || !sm.found || sm.start <= pm.end) {
                ++background_reads;
                continue;
            }
            std::string region(read.view().substr(pm.end, sm.start - pm.end));
            std::optional<int> version;
            if (!region.empty()) version = version_from_base(region[0]);
            std::optional<int> column;
            if (region.size() >= 3) column = intra_index_value(std::string_view(region).substr(1, 2));
            bool valid_address = version && *version < vcount && column;
            bool is_target;
            if (have_truth && valid_address) {
                const std::string& expected =
                    truth[static_cast<std::size_t>(*version)][static_cast<std::size_t>(*column)];
                is_target = bounded_edit_distance(region, expected, payload_tolerance) <= payload_tolerance;
            } else {
                is_target = valid_address;
            }
            if (is_target) {
                ++target_reads;
                ++counts[{target_block, version ? *version : 0}];
            } else {
                ++misprime_reads;
            }
        } else if (parsed) {
            ++other_reads;
            ++counts[{parsed->block, parsed->version}];
        } else {
            ++background_reads;
        }
    }

    const double total = static_cast<double>(m.total_reads);
    m.on_target_fraction = static_cast<double>(target_reads) / total;
    m.misprime_fraction = static_cast<double>(misprime_reads) / total;
    m.other_block_fraction = static_cast<double>(other_reads) / total;
    m.background_fraction = static_cast<double>(background_reads) / total;
    m.unwanted_to_wanted =
        target_reads > 0 ? static_cast<double>(m.total_reads - target_reads) / static_cast<double>(target_reads)
                         : 0.0;
    m.histogram = histogram_rows(counts);
    return m;
}

} // namespace dnastore
