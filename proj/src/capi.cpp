#include "dnastore.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <memory>
#include <string>

#include "json.hpp"

#include "dnastore/capacity.hpp"
#include "dnastore/errors.hpp"
#include "dnastore/partition.hpp"
#include "dnastore/pipeline.hpp"
#include "dnastore/updates.hpp"
#include "dnastore/wetlab_sim.hpp"

struct dnastore_manifest {
    dnastore::PartitionManifest m;
};
struct dnastore_pool {
    dnastore::Pool p;
};
struct dnastore_reads {
    std::vector<dnastore::DnaString> r;
};
struct dnastore_decoded {
    dnastore::DecodedBlock b;
    std::string report;
};

namespace {

thread_local std::string g_last_error;

dnastore_status map_code(dnastore::ErrorCode code) {
    using dnastore::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return DNASTORE_ERR_INVALID_ARGUMENT;
        case ErrorCode::bounds: return DNASTORE_ERR_BOUNDS;
        case ErrorCode::malformed_payload: return DNASTORE_ERR_MALFORMED;
        case ErrorCode::io: return DNASTORE_ERR_IO;
        case ErrorCode::parse: return DNASTORE_ERR_PARSE;
        case ErrorCode::decode_failure: return DNASTORE_ERR_DECODE;
        case ErrorCode::patch: return DNASTORE_ERR_PATCH;
    }
    return DNASTORE_ERR_INTERNAL;
}

dnastore_status wrap(const std::function<void()>& body) {
    try {
        body();
        return DNASTORE_OK;
    } catch (const dnastore::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DNASTORE_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return DNASTORE_ERR_INTERNAL;
    }
}

dnastore_status require(bool ok, const char* what) {
    if (ok) return DNASTORE_OK;
    g_last_error = what;
    return DNASTORE_ERR_INVALID_ARGUMENT;
}

dnastore::PcrParams to_pcr(const dnastore_pcr_params* p, int default_cycles) {
    dnastore::PcrParams out;
    out.cycles = default_cycles;
    if (p) {
        if (p->cycles >= 0) out.cycles = p->cycles;
        if (p->efficiency > 0) out.efficiency = p->efficiency;
        if (p->misprime_decay >= 0) out.misprime_decay = p->misprime_decay;
        if (p->max_edit_distance >= 0) out.max_edit_distance = p->max_edit_distance;
        out.seed = p->seed;
    }
    return out;
}

dnastore::ChannelModel to_channel(const dnastore_channel_params* p) {
    dnastore::ChannelModel out;
    if (p) {
        if (p->p_sub >= 0) out.p_sub = p->p_sub;
        if (p->p_ins >= 0) out.p_ins = p->p_ins;
        if (p->p_del >= 0) out.p_del = p->p_del;
        out.seed = p->seed;
    }
    return out;
}

dnastore::DecodeParams to_decode(const dnastore_decode_params* p) {
    dnastore::DecodeParams out;
    if (p) {
        if (p->cluster_threshold > 0) out.cluster_threshold = p->cluster_threshold;
        if (p->bma_window > 0) out.bma_window = p->bma_window;
        if (p->primer_edits >= 0) out.primer_edits = static_cast<std::size_t>(p->primer_edits);
        if (p->max_candidates > 0) out.max_candidates = p->max_candidates;
    }
    return out;
}

dnastore_status copy_string(const std::string& s, char* out, size_t cap) {
    if (!out || cap <= s.size()) {
        g_last_error = "output buffer too small (" + std::to_string(s.size() + 1) + " bytes needed)";
        return DNASTORE_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return DNASTORE_OK;
}

std::string decode_report_json(const dnastore::DecodedBlock& b, uint64_t block) {
    nlohmann::json j;
    j["block"] = block;
    j["versions"] = b.version_records.size();
    j["reads_used"] = b.reads_used;
    j["background_reads"] = b.background;
    j["clusters"] = b.clusters_formed;
    j["duplicates_discarded"] = b.duplicates_discarded;
    j["original_length"] = b.original.size();
    j["updated_length"] = b.updated.size();
    nlohmann::json patches = nlohmann::json::array();
    for (const auto& p : b.patches)
        patches.push_back({{"del_start", p.del_start},
                           {"del_len", p.del_len},
                           {"ins_pos", p.ins_pos},
                           {"ins_len", p.ins_bytes.size()}});
    j["patches"] = patches;
    return j.dump(2) + "\n";
}

} // namespace

extern "C" {

const char* dnastore_version(void) { return "0.1.0"; }

const char* dnastore_last_error(void) { return g_last_error.c_str(); }

/* ---------------- manifests ---------------- */

dnastore_status dnastore_manifest_load(const char* path, dnastore_manifest** out) {
    if (auto s = require(path && out, "path and out must be non-null")) return s;
    return wrap([&] { *out = new dnastore_manifest{dnastore::load_manifest(path)}; });
}

dnastore_status dnastore_manifest_save(const dnastore_manifest* m, const char* path) {
    if (auto s = require(m && path, "manifest and path must be non-null")) return s;
    return wrap([&] { dnastore::save_manifest(m->m, path); });
}

void dnastore_manifest_free(dnastore_manifest* m) { delete m; }

uint64_t dnastore_manifest_block_count(const dnastore_manifest* m) { return m ? m->m.block_count : 0; }

uint64_t dnastore_manifest_file_size(const dnastore_manifest* m) { return m ? m->m.file_size : 0; }

int dnastore_manifest_version_count(const dnastore_manifest* m, uint64_t block) {
    return m ? m->m.versions_of(block) : 0;
}

dnastore_status dnastore_manifest_primers(const dnastore_manifest* m, char* fwd, size_t fwd_cap,
                                          char* rev, size_t rev_cap) {
    if (auto s = require(m != nullptr, "manifest must be non-null")) return s;
    if (auto s = copy_string(m->m.fwd_primer.str(), fwd, fwd_cap)) return s;
    return copy_string(m->m.rev_primer.str(), rev, rev_cap);
}

dnastore_status dnastore_elongated_primer(const dnastore_manifest* m, uint64_t block, int levels,
                                          char* out, size_t cap) {
    if (auto s = require(m && out, "manifest and out must be non-null")) return s;
    return wrap([&] {
        dnastore::Partition partition(m->m);
        int lv = levels < 0 ? m->m.tree_depth : levels;
        std::string primer = partition.elongated_fwd(block, lv).str();
        if (copy_string(primer, out, cap) != DNASTORE_OK)
            throw dnastore::Error(dnastore::ErrorCode::invalid_argument, g_last_error);
    });
}

/* ---------------- pools and reads ---------------- */

dnastore_status dnastore_pool_new(dnastore_pool** out) {
    if (auto s = require(out != nullptr, "out must be non-null")) return s;
    *out = new dnastore_pool{};
    return DNASTORE_OK;
}

dnastore_status dnastore_pool_load(const char* path, dnastore_pool** out) {
    if (auto s = require(path && out, "path and out must be non-null")) return s;
    return wrap([&] { *out = new dnastore_pool{dnastore::load_pool(path)}; });
}

dnastore_status dnastore_pool_save(const dnastore_pool* pool, const char* path) {
    if (auto s = require(pool && path, "pool and path must be non-null")) return s;
    return wrap([&] { dnastore::save_pool(pool->p, path); });
}

void dnastore_pool_free(dnastore_pool* pool) { delete pool; }

size_t dnastore_pool_unique_count(const dnastore_pool* pool) { return pool ? pool->p.unique_count() : 0; }

double dnastore_pool_total_abundance(const dnastore_pool* pool) {
    return pool ? pool->p.total_abundance() : 0.0;
}

dnastore_status dnastore_reads_load(const char* path, dnastore_reads** out) {
    if (auto s = require(path && out, "path and out must be non-null")) return s;
    return wrap([&] { *out = new dnastore_reads{dnastore::load_reads(path)}; });
}

dnastore_status dnastore_reads_save(const dnastore_reads* reads, const char* path) {
    if (auto s = require(reads && path, "reads and path must be non-null")) return s;
    return wrap([&] { dnastore::save_reads(reads->r, path); });
}

void dnastore_reads_free(dnastore_reads* reads) { delete reads; }

size_t dnastore_reads_count(const dnastore_reads* reads) { return reads ? reads->r.size() : 0; }

dnastore_status dnastore_reads_truncate(dnastore_reads* reads, size_t n) {
    if (auto s = require(reads != nullptr, "reads must be non-null")) return s;
    if (n < reads->r.size()) reads->r.resize(n);
    return DNASTORE_OK;
}

/* ---------------- encode and updates ---------------- */

dnastore_status dnastore_encode(const uint8_t* data, size_t len, const dnastore_encode_params* params,
                                dnastore_manifest** out_manifest, dnastore_pool** out_pool) {
    if (auto s = require(data && len > 0 && out_manifest && out_pool,
                         "data (non-empty), out_manifest and out_pool must be non-null"))
        return s;
    return wrap([&] {
        dnastore::PartitionManifest m;
        m.fwd_primer = dnastore::DnaString::from_text(
            params && params->fwd_primer ? params->fwd_primer : dnastore::kDefaultFwdPrimer);
        m.rev_primer = dnastore::DnaString::from_text(
            params && params->rev_primer ? params->rev_primer : dnastore::kDefaultRevPrimer);
        if (params && params->tree_depth != 0) m.tree_depth = params->tree_depth;
        if (params) {
            m.tree_seed = params->tree_seed;
            m.randomizer_seed = params->randomizer_seed;
        }
        m.file_size = len;
        m.block_count = (len + dnastore::kBlockBytes - 1) / dnastore::kBlockBytes;
        m.version_counts.assign(m.block_count, 1);

        dnastore::Partition partition(m);
        if (m.block_count > partition.tree().leaf_count())
            dnastore::fail(dnastore::ErrorCode::invalid_argument,
                           "file needs " + std::to_string(m.block_count) + " blocks; depth " +
                               std::to_string(m.tree_depth) + " tree has " +
                               std::to_string(partition.tree().leaf_count()) + " leaves");

        auto pool = std::make_unique<dnastore_pool>();
        dnastore::Bytes block(dnastore::kBlockBytes);
        for (uint64_t b = 0; b < m.block_count; ++b) {
            std::size_t off = static_cast<std::size_t>(b) * dnastore::kBlockBytes;
            std::size_t take = std::min<std::size_t>(dnastore::kBlockBytes, len - off);
            std::fill(block.begin(), block.end(), 0);
            std::memcpy(block.data(), data + off, take);
            for (const auto& strand : partition.build_strands(b, 0, block))
                pool->p.add(strand.str(), 1.0, dnastore::Provenance::original);
        }
        *out_manifest = new dnastore_manifest{std::move(m)};
        *out_pool = pool.release();
    });
}

dnastore_status dnastore_patch_encode(dnastore_manifest* m, uint64_t block, uint8_t del_start,
                                      uint8_t del_len, uint8_t ins_pos, const uint8_t* ins,
                                      size_t ins_len, dnastore_pool* pool) {
    if (auto s = require(m && pool && (ins || ins_len == 0), "manifest, pool and ins must be non-null"))
        return s;
    return wrap([&] {
        if (block >= m->m.block_count)
            dnastore::fail(dnastore::ErrorCode::bounds, "block " + std::to_string(block) + " out of range");
        int version = m->m.versions_of(block);
        if (version >= dnastore::PartitionLayout::version_slots)
            dnastore::fail(dnastore::ErrorCode::patch,
                           "block " + std::to_string(block) + " has no free version slot (max 3 patches)");
        if (version == 1 && ins_len > del_len)
            dnastore::fail(dnastore::ErrorCode::patch,
                           "first patch would grow the block past 256 bytes (ins " +
                               std::to_string(ins_len) + " > del " + std::to_string(del_len) + ")");
        dnastore::UpdatePatch patch;
        patch.del_start = del_start;
        patch.del_len = del_len;
        patch.ins_pos = ins_pos;
        patch.ins_bytes.assign(ins, ins + ins_len);
        dnastore::Bytes record = dnastore::serialize_patch(patch);
        dnastore::Partition partition(m->m);
        for (const auto& strand : partition.build_strands(block, version, record))
            pool->p.add(strand.str(), 1.0, dnastore::Provenance::original);
        m->m.version_counts[block] = static_cast<uint8_t>(version + 1);
    });
}

/* ---------------- wet-lab simulation ---------------- */

dnastore_status dnastore_pcr(const dnastore_pool* pool, const char* fwd, const char* rev,
                             const dnastore_pcr_params* params, dnastore_pool** out) {
    if (auto s = require(pool && fwd && rev && out, "pool, primers and out must be non-null")) return s;
    return wrap([&] {
        *out = new dnastore_pool{dnastore::pcr(pool->p, dnastore::DnaString::from_text(fwd),
                                               dnastore::DnaString::from_text(rev), to_pcr(params, 8))};
    });
}

dnastore_status dnastore_multiplex_pcr(const dnastore_pool* pool, const char* const* fwds,
                                       const char* const* revs, size_t n_pairs,
                                       const dnastore_pcr_params* params, dnastore_pool** out) {
    if (auto s = require(pool && fwds && revs && n_pairs > 0 && out,
                         "pool, primer arrays and out must be non-null"))
        return s;
    return wrap([&] {
        std::vector<std::pair<dnastore::DnaString, dnastore::DnaString>> pairs;
        for (size_t i = 0; i < n_pairs; ++i)
            pairs.emplace_back(dnastore::DnaString::from_text(fwds[i]),
                               dnastore::DnaString::from_text(revs[i]));
        *out = new dnastore_pool{dnastore::multiplex_pcr(pool->p, pairs, to_pcr(params, 8))};
    });
}

dnastore_status dnastore_two_stage_pcr(const dnastore_pool* pool, const char* fwd, const char* rev,
                                       const char* elongated_fwd, const dnastore_pcr_params* stage1,
                                       const dnastore_pcr_params* stage2, dnastore_pool** out) {
    if (auto s = require(pool && fwd && rev && elongated_fwd && out,
                         "pool, primers and out must be non-null"))
        return s;
    return wrap([&] {
        *out = new dnastore_pool{dnastore::two_stage_pcr(
            pool->p, dnastore::DnaString::from_text(fwd), dnastore::DnaString::from_text(rev),
            dnastore::DnaString::from_text(elongated_fwd), to_pcr(stage1, 10), to_pcr(stage2, 8))};
    });
}

dnastore_status dnastore_mix(const dnastore_pool* data_pool, const dnastore_pool* update_pool,
                             const char* fwd, const char* rev, dnastore_mix_mode mode,
                             const dnastore_mix_params* params, dnastore_pool** out) {
    if (auto s = require(data_pool && update_pool && fwd && rev && out,
                         "pools, primers and out must be non-null"))
        return s;
    return wrap([&] {
        dnastore::MixParams mix;
        if (params) {
            mix.pcr = to_pcr(&params->pcr, 15);
            if (params->relative_error >= 0) mix.measurement.relative_error = params->relative_error;
            mix.seed = params->seed;
        } else {
            mix.pcr = to_pcr(nullptr, 15);
        }
        auto f = dnastore::DnaString::from_text(fwd);
        auto r = dnastore::DnaString::from_text(rev);
        *out = new dnastore_pool{mode == DNASTORE_MIX_MEASURE_THEN_AMPLIFY
                                     ? dnastore::mix_measure_then_amplify(data_pool->p, update_pool->p, f, r, mix)
                                     : dnastore::mix_amplify_then_measure(data_pool->p, update_pool->p, f, r, mix)};
    });
}

dnastore_status dnastore_sequence(const dnastore_pool* pool, size_t n_reads,
                                  const dnastore_channel_params* channel, dnastore_reads** out) {
    if (auto s = require(pool && out, "pool and out must be non-null")) return s;
    return wrap([&] { *out = new dnastore_reads{dnastore::sequence(pool->p, n_reads, to_channel(channel))}; });
}

/* ---------------- decoding and analysis ---------------- */

dnastore_status dnastore_decode_block(const dnastore_reads* reads, const dnastore_manifest* m,
                                      uint64_t block, const dnastore_decode_params* params,
                                      dnastore_decoded** out) {
    if (auto s = require(reads && m && out, "reads, manifest and out must be non-null")) return s;
    return wrap([&] {
        dnastore::Partition partition(m->m);
        dnastore::DecodeParams dp = to_decode(params);
        dnastore::DecodedBlock b =
            dp.max_candidates > 1
                ? dnastore::decode_with_candidates(reads->r, partition, block, dp.max_candidates, dp)
                : dnastore::decode_block(reads->r, partition, block, dp);
        auto d = std::make_unique<dnastore_decoded>();
        d->report = decode_report_json(b, block);
        d->b = std::move(b);
        *out = d.release();
    });
}

void dnastore_decoded_free(dnastore_decoded* d) { delete d; }

dnastore_status dnastore_decoded_original(const dnastore_decoded* d, const uint8_t** ptr, size_t* len) {
    if (auto s = require(d && ptr && len, "decoded, ptr and len must be non-null")) return s;
    *ptr = d->b.original.data();
    *len = d->b.original.size();
    return DNASTORE_OK;
}

dnastore_status dnastore_decoded_updated(const dnastore_decoded* d, const uint8_t** ptr, size_t* len) {
    if (auto s = require(d && ptr && len, "decoded, ptr and len must be non-null")) return s;
    *ptr = d->b.updated.data();
    *len = d->b.updated.size();
    return DNASTORE_OK;
}

int dnastore_decoded_version_count(const dnastore_decoded* d) {
    return d ? static_cast<int>(d->b.version_records.size()) : 0;
}

dnastore_status dnastore_decoded_record(const dnastore_decoded* d, int version, const uint8_t** ptr,
                                        size_t* len) {
    if (auto s = require(d && ptr && len, "decoded, ptr and len must be non-null")) return s;
    if (version < 0 || version >= static_cast<int>(d->b.version_records.size())) {
        g_last_error = "version out of range";
        return DNASTORE_ERR_BOUNDS;
    }
    *ptr = d->b.version_records[static_cast<size_t>(version)].data();
    *len = d->b.version_records[static_cast<size_t>(version)].size();
    return DNASTORE_OK;
}

const char* dnastore_decoded_report(const dnastore_decoded* d) { return d ? d->report.c_str() : ""; }

dnastore_status dnastore_decode_all(const dnastore_reads* reads, const dnastore_manifest* m,
                                    uint8_t** out, size_t* out_len) {
    if (auto s = require(reads && m && out && out_len, "reads, manifest and out must be non-null")) return s;
    return wrap([&] {
        dnastore::Partition partition(m->m);
        dnastore::DecodedPartition d = dnastore::decode_all_blocks(reads->r, partition);
        auto* buf = static_cast<uint8_t*>(std::malloc(d.file_bytes.size() ? d.file_bytes.size() : 1));
        if (!buf) dnastore::fail(dnastore::ErrorCode::io, "out of memory");
        std::memcpy(buf, d.file_bytes.data(), d.file_bytes.size());
        *out = buf;
        *out_len = d.file_bytes.size();
    });
}

void dnastore_buffer_free(uint8_t* buf) { std::free(buf); }

dnastore_status dnastore_compute_metrics(const dnastore_reads* reads, const dnastore_manifest* m,
                                         uint64_t target_block, const dnastore_decode_params* params,
                                         dnastore_metrics* out) {
    if (auto s = require(reads && m && out, "reads, manifest and out must be non-null")) return s;
    return wrap([&] {
        dnastore::Partition partition(m->m);
        dnastore::RetrievalMetrics r =
            dnastore::compute_metrics(reads->r, partition, target_block, to_decode(params));
        out->total_reads = r.total_reads;
        out->on_target_fraction = r.on_target_fraction;
        out->misprime_fraction = r.misprime_fraction;
        out->other_block_fraction = r.other_block_fraction;
        out->background_fraction = r.background_fraction;
        out->unwanted_to_wanted = r.unwanted_to_wanted;
    });
}

dnastore_status dnastore_stats_csv(const dnastore_reads* reads, const dnastore_manifest* m, char** out) {
    if (auto s = require(reads && m && out, "reads, manifest and out must be non-null")) return s;
    return wrap([&] {
        dnastore::Partition partition(m->m);
        auto rows = dnastore::stats_histogram(reads->r, partition);
        std::string csv = "block,version,reads\n";
        for (const auto& row : rows)
            csv += std::to_string(row.block) + "," + std::to_string(row.version) + "," +
                   std::to_string(row.reads) + "\n";
        char* buf = static_cast<char*>(std::malloc(csv.size() + 1));
        if (!buf) dnastore::fail(dnastore::ErrorCode::io, "out of memory");
        std::memcpy(buf, csv.c_str(), csv.size() + 1);
        *out = buf;
    });
}

void dnastore_string_free(char* s) { std::free(s); }

dnastore_status dnastore_capacity(int index_len, dnastore_capacity_point* out) {
    if (auto s = require(out != nullptr, "out must be non-null")) return s;
    return wrap([&] {
        dnastore::CapacityPoint p = dnastore::capacity_density(index_len);
        out->index_len = p.index_len;
        out->capacity_bytes = p.capacity_bytes;
        out->density_bits_per_base = p.density_bits_per_base;
    });
}

dnastore_status dnastore_capacity_bytes_decimal(int index_len, char* out, size_t cap) {
    if (auto s = require(out != nullptr, "out must be non-null")) return s;
    return wrap([&] {
        std::string s = dnastore::capacity_bytes_decimal(index_len);
        if (copy_string(s, out, cap) != DNASTORE_OK)
            throw dnastore::Error(dnastore::ErrorCode::invalid_argument, g_last_error);
    });
}

} /* extern "C" */
