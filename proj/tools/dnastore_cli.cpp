// Command-line driver for the dnastore shared library. Talks to the core
// exclusively through the C API in dnastore.h; file parsing of its own
// config formats (patch specs) is done here.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dnastore.h"

namespace {

[[noreturn]] void die(const std::string& context) {
    std::cerr << "error: " << context;
    const char* detail = dnastore_last_error();
    if (detail && *detail) std::cerr << ": " << detail;
    std::cerr << "\n";
    std::exit(1);
}

void check(dnastore_status status, const std::string& context) {
    if (status != DNASTORE_OK) die(context);
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die("cannot open " + path);
    return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const uint8_t* data, size_t len) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) die("failed writing " + path);
}

void write_text(const std::string& path, const std::string& text) {
    write_file(path, reinterpret_cast<const uint8_t*>(text.data()), text.size());
}

struct ManifestHandle {
    dnastore_manifest* m = nullptr;
    ~ManifestHandle() { dnastore_manifest_free(m); }
};
struct PoolHandle {
    dnastore_pool* p = nullptr;
    ~PoolHandle() { dnastore_pool_free(p); }
};
struct ReadsHandle {
    dnastore_reads* r = nullptr;
    ~ReadsHandle() { dnastore_reads_free(r); }
};

void load_manifest(ManifestHandle& h, const std::string& path) {
    check(dnastore_manifest_load(path.c_str(), &h.m), "loading manifest " + path);
}
void load_pool(PoolHandle& h, const std::string& path) {
    check(dnastore_pool_load(path.c_str(), &h.p), "loading pool " + path);
}
void load_reads(ReadsHandle& h, const std::string& path) {
    check(dnastore_reads_load(path.c_str(), &h.r), "loading reads " + path);
}

std::string primer_for_block(const dnastore_manifest* m, uint64_t block, int levels) {
    char buf[128];
    check(dnastore_elongated_primer(m, block, levels, buf, sizeof buf),
          "building elongated primer for block " + std::to_string(block));
    return buf;
}

struct PcrFlags {
    int cycles = -1;
    double efficiency = -1.0;
    double decay = -1.0;
    int max_edits = -1;
    uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--cycles", cycles, "PCR cycles");
        cmd->add_option("--efficiency", efficiency, "Per-cycle efficiency e in (0,1]");
        cmd->add_option("--misprime-decay", decay, "Efficiency decay per edit distance");
        cmd->add_option("--max-edits", max_edits, "Mispriming edit-distance cutoff");
        cmd->add_option("--pcr-seed", seed, "PCR parameter seed (reserved)");
    }
    dnastore_pcr_params params() const { return {cycles, efficiency, decay, max_edits, seed}; }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-addressable DNA storage: encoding, simulated wet lab, decoding"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI config file");

    // ---------------- encode ----------------
    auto* encode = app.add_subcommand("encode", "Encode a file into a manifest + oligo pool");
    std::string enc_input, enc_manifest, enc_pool;
    int enc_depth = 5;
    uint64_t enc_tree_seed = 42, enc_data_seed = 1337;
    std::string enc_fwd, enc_rev;
    encode->add_option("--input", enc_input, "File to encode")->required();
    encode->add_option("--manifest", enc_manifest, "Output manifest path")->required();
    encode->add_option("--pool", enc_pool, "Output pool path")->required();
    encode->add_option("--depth", enc_depth, "Index tree depth (4^depth blocks)");
    encode->add_option("--tree-seed", enc_tree_seed, "Index tree seed");
    encode->add_option("--data-seed", enc_data_seed, "Data randomizer seed");
    encode->add_option("--fwd", enc_fwd, "Forward primer (20 bases)");
    encode->add_option("--rev", enc_rev, "Reverse primer (20 bases)");

    // ---------------- patch ----------------
    auto* patch = app.add_subcommand("patch", "Encode update patches into a new pool");
    std::string patch_manifest, patch_spec, patch_pool;
    patch->add_option("--manifest", patch_manifest, "Manifest path (updated in place)")->required();
    patch->add_option("--patches", patch_spec, "Patch description file (JSON)")->required();
    patch->add_option("--pool", patch_pool, "Output update pool path")->required();

    // ---------------- pcr ----------------
    auto* pcr = app.add_subcommand("pcr", "Amplify a pool with a primer pair");
    std::string pcr_pool, pcr_out, pcr_manifest, pcr_fwd, pcr_rev;
    int64_t pcr_block = -1;
    int pcr_levels = -1;
    PcrFlags pcr_flags;
    pcr->add_option("--pool", pcr_pool, "Input pool")->required();
    pcr->add_option("--out", pcr_out, "Output pool")->required();
    pcr->add_option("--manifest", pcr_manifest, "Manifest (for primers/addresses)")->required();
    pcr->add_option("--block", pcr_block, "Target block (uses the elongated primer)");
    pcr->add_option("--levels", pcr_levels, "Elongation levels (default: full depth)");
    pcr->add_option("--fwd", pcr_fwd, "Explicit forward primer");
    pcr->add_option("--rev", pcr_rev, "Explicit reverse primer");
    pcr_flags.attach(pcr);

    // ---------------- multiplex ----------------
    auto* multiplex = app.add_subcommand("multiplex", "Multiplex PCR over several blocks");
    std::string mp_pool, mp_out, mp_manifest;
    std::vector<uint64_t> mp_blocks;
    int mp_levels = -1;
    PcrFlags mp_flags;
    multiplex->add_option("--pool", mp_pool, "Input pool")->required();
    multiplex->add_option("--out", mp_out, "Output pool")->required();
    multiplex->add_option("--manifest", mp_manifest, "Manifest")->required();
    multiplex->add_option("--blocks", mp_blocks, "Target blocks")->required()->delimiter(',');
    multiplex->add_option("--levels", mp_levels, "Elongation levels");
    mp_flags.attach(multiplex);

    // ---------------- two-stage ----------------
    auto* two_stage = app.add_subcommand("two-stage", "Main-primer stage then elongated-primer stage");
    std::string ts_pool, ts_out, ts_manifest;
    uint64_t ts_block = 0;
    int ts_levels = -1, ts_cycles1 = -1, ts_cycles2 = -1;
    PcrFlags ts_flags;
    two_stage->add_option("--pool", ts_pool, "Input pool")->required();
    two_stage->add_option("--out", ts_out, "Output pool")->required();
    two_stage->add_option("--manifest", ts_manifest, "Manifest")->required();
    two_stage->add_option("--block", ts_block, "Target block")->required();
    two_stage->add_option("--levels", ts_levels, "Elongation levels");
    two_stage->add_option("--cycles1", ts_cycles1, "Stage-1 cycles (default 10)");
    two_stage->add_option("--cycles2", ts_cycles2, "Stage-2 cycles (default 8)");
    ts_flags.attach(two_stage);

    // ---------------- sequence ----------------
    auto* sequence = app.add_subcommand("sequence", "Sample noisy reads from a pool");
    std::string seq_pool, seq_out;
    uint64_t seq_n = 0;
    double seq_sub = -1, seq_ins = -1, seq_del = -1;
    uint64_t seq_seed = 0;
    sequence->add_option("--pool", seq_pool, "Input pool")->required();
    sequence->add_option("--out", seq_out, "Output reads file")->required();
    sequence->add_option("--reads", seq_n, "Number of reads")->required();
    sequence->add_option("--p-sub", seq_sub, "Substitution probability per base");
    sequence->add_option("--p-ins", seq_ins, "Insertion probability per base");
    sequence->add_option("--p-del", seq_del, "Deletion probability per base");
    sequence->add_option("--seed", seq_seed, "Channel seed");

    // ---------------- mix ----------------
    auto* mix = app.add_subcommand("mix", "Mix a data pool with an update pool");
    std::string mix_data, mix_update, mix_out, mix_manifest, mix_mode = "measure-then-amplify";
    double mix_eps = -1;
    uint64_t mix_seed = 0;
    PcrFlags mix_flags;
    mix->add_option("--data", mix_data, "Data pool")->required();
    mix->add_option("--update", mix_update, "Update pool")->required();
    mix->add_option("--out", mix_out, "Output pool")->required();
    mix->add_option("--manifest", mix_manifest, "Manifest (for main primers)")->required();
    mix->add_option("--mode", mix_mode, "measure-then-amplify | amplify-then-measure");
    mix->add_option("--epsilon", mix_eps, "Concentration measurement relative error");
    mix->add_option("--seed", mix_seed, "Measurement seed");
    mix_flags.attach(mix);

    // ---------------- decode ----------------
    auto* decode = app.add_subcommand("decode", "Decode reads back to bytes");
    std::string dec_reads, dec_manifest, dec_outdir = ".";
    int64_t dec_block = -1;
    bool dec_all = false;
    double dec_threshold = -1;
    int dec_window = -1, dec_primer_edits = -1, dec_candidates = -1;
    decode->add_option("--reads", dec_reads, "Reads file")->required();
    decode->add_option("--manifest", dec_manifest, "Manifest")->required();
    decode->add_option("--out-dir", dec_outdir, "Output directory");
    decode->add_option("--block", dec_block, "Block to decode");
    decode->add_flag("--all", dec_all, "Decode the whole partition (strict parse path)");
    decode->add_option("--cluster-threshold", dec_threshold, "Clustering edit-distance fraction");
    decode->add_option("--bma-window", dec_window, "Consensus re-sync window");
    decode->add_option("--primer-edits", dec_primer_edits, "Primer location tolerance");
    decode->add_option("--max-candidates", dec_candidates, "Per-address candidates (>1 enables recursion)");

    // ---------------- stats ----------------
    auto* stats = app.add_subcommand("stats", "Per-block read histogram CSV");
    std::string st_reads, st_manifest, st_out;
    stats->add_option("--reads", st_reads, "Reads file")->required();
    stats->add_option("--manifest", st_manifest, "Manifest")->required();
    stats->add_option("--out", st_out, "Output CSV ('-' for stdout)")->required();

    // ---------------- analyze ----------------
    auto* analyze = app.add_subcommand("analyze", "Capacity/density table over index lengths");
    std::string an_out;
    int an_from = 0, an_to = 110, an_step = 1;
    analyze->add_option("--out", an_out, "Output CSV ('-' for stdout)")->required();
    analyze->add_option("--from", an_from, "First index length");
    analyze->add_option("--to", an_to, "Last index length");
    analyze->add_option("--step", an_step, "Step");

    CLI11_PARSE(app, argc, argv);

    if (*encode) {
        std::vector<uint8_t> data = read_file(enc_input);
        if (data.empty()) die(enc_input + " is empty; nothing to encode");
        dnastore_encode_params params{};
        params.tree_depth = enc_depth;
        params.tree_seed = enc_tree_seed;
        params.randomizer_seed = enc_data_seed;
        params.fwd_primer = enc_fwd.empty() ? nullptr : enc_fwd.c_str();
        params.rev_primer = enc_rev.empty() ? nullptr : enc_rev.c_str();
        ManifestHandle m;
        PoolHandle p;
        check(dnastore_encode(data.data(), data.size(), &params, &m.m, &p.p), "encoding " + enc_input);
        check(dnastore_manifest_save(m.m, enc_manifest.c_str()), "writing " + enc_manifest);
        check(dnastore_pool_save(p.p, enc_pool.c_str()), "writing " + enc_pool);
        std::cout << "encoded " << data.size() << " bytes into " << dnastore_manifest_block_count(m.m)
                  << " blocks, " << dnastore_pool_unique_count(p.p) << " strands\n";
        return 0;
    }

    if (*patch) {
        ManifestHandle m;
        load_manifest(m, patch_manifest);
        nlohmann::json spec;
        try {
            spec = nlohmann::json::parse(read_file(patch_spec));
        } catch (const std::exception& e) {
            die(patch_spec + ": " + e.what());
        }
        if (!spec.contains("patches") || !spec["patches"].is_array())
            die(patch_spec + ": expected a top-level \"patches\" array");
        PoolHandle pool;
        check(dnastore_pool_new(&pool.p), "allocating pool");
        for (const auto& entry : spec["patches"]) {
            uint64_t block = entry.at("block").get<uint64_t>();
            std::vector<uint8_t> ins;
            if (entry.contains("ins_text")) {
                std::string text = entry["ins_text"].get<std::string>();
                ins.assign(text.begin(), text.end());
            } else if (entry.contains("ins_hex")) {
                std::string hex = entry["ins_hex"].get<std::string>();
                if (hex.size() % 2) die(patch_spec + ": ins_hex must have even length");
                for (size_t i = 0; i < hex.size(); i += 2)
                    ins.push_back(static_cast<uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
            }
            check(dnastore_patch_encode(m.m, block, entry.value("del_start", 0),
                                        entry.value("del_len", 0), entry.value("ins_pos", 0),
                                        ins.data(), ins.size(), pool.p),
                  "encoding patch for block " + std::to_string(block));
        }
        check(dnastore_pool_save(pool.p, patch_pool.c_str()), "writing " + patch_pool);
        check(dnastore_manifest_save(m.m, patch_manifest.c_str()), "updating " + patch_manifest);
        std::cout << "patched " << spec["patches"].size() << " block(s); update pool has "
                  << dnastore_pool_unique_count(pool.p) << " strands\n";
        return 0;
    }

    if (*pcr) {
        ManifestHandle m;
        load_manifest(m, pcr_manifest);
        PoolHandle in;
        load_pool(in, pcr_pool);
        char fwd_buf[128], rev_buf[128];
        check(dnastore_manifest_primers(m.m, fwd_buf, sizeof fwd_buf, rev_buf, sizeof rev_buf),
              "reading primers");
        std::string fwd = pcr_fwd.empty() ? fwd_buf : pcr_fwd;
        std::string rev = pcr_rev.empty() ? rev_buf : pcr_rev;
        if (pcr_block >= 0) fwd = primer_for_block(m.m, static_cast<uint64_t>(pcr_block), pcr_levels);
        PoolHandle out;
        auto params = pcr_flags.params();
        check(dnastore_pcr(in.p, fwd.c_str(), rev.c_str(), &params, &out.p), "running PCR");
        check(dnastore_pool_save(out.p, pcr_out.c_str()), "writing " + pcr_out);
        std::cout << "amplified: " << dnastore_pool_unique_count(out.p) << " strands, total abundance "
                  << dnastore_pool_total_abundance(out.p) << "\n";
        return 0;
    }

    if (*multiplex) {
        ManifestHandle m;
        load_manifest(m, mp_manifest);
        PoolHandle in;
        load_pool(in, mp_pool);
        char fwd_buf[128], rev_buf[128];
        check(dnastore_manifest_primers(m.m, fwd_buf, sizeof fwd_buf, rev_buf, sizeof rev_buf),
              "reading primers");
        std::vector<std::string> fwds;
        for (uint64_t b : mp_blocks) fwds.push_back(primer_for_block(m.m, b, mp_levels));
        std::vector<const char*> fwd_ptrs, rev_ptrs;
        for (const auto& f : fwds) fwd_ptrs.push_back(f.c_str());
        rev_ptrs.assign(fwds.size(), rev_buf);
        PoolHandle out;
        auto params = mp_flags.params();
        check(dnastore_multiplex_pcr(in.p, fwd_ptrs.data(), rev_ptrs.data(), fwd_ptrs.size(), &params,
                                     &out.p),
              "running multiplex PCR");
        check(dnastore_pool_save(out.p, mp_out.c_str()), "writing " + mp_out);
        std::cout << "amplified " << mp_blocks.size() << " blocks\n";
        return 0;
    }

    if (*two_stage) {
        ManifestHandle m;
        load_manifest(m, ts_manifest);
        PoolHandle in;
        load_pool(in, ts_pool);
        char fwd_buf[128], rev_buf[128];
        check(dnastore_manifest_primers(m.m, fwd_buf, sizeof fwd_buf, rev_buf, sizeof rev_buf),
              "reading primers");
        std::string elongated = primer_for_block(m.m, ts_block, ts_levels);
        dnastore_pcr_params stage1 = ts_flags.params();
        dnastore_pcr_params stage2 = ts_flags.params();
        stage1.cycles = ts_cycles1;
        stage2.cycles = ts_cycles2;
        PoolHandle out;
        check(dnastore_two_stage_pcr(in.p, fwd_buf, rev_buf, elongated.c_str(), &stage1, &stage2, &out.p),
              "running two-stage PCR");
        check(dnastore_pool_save(out.p, ts_out.c_str()), "writing " + ts_out);
        std::cout << "two-stage amplification of block " << ts_block << " done\n";
        return 0;
    }

    if (*sequence) {
        PoolHandle in;
        load_pool(in, seq_pool);
        dnastore_channel_params channel{seq_sub, seq_ins, seq_del, seq_seed};
        ReadsHandle reads;
        check(dnastore_sequence(in.p, seq_n, &channel, &reads.r), "sequencing");
        check(dnastore_reads_save(reads.r, seq_out.c_str()), "writing " + seq_out);
        std::cout << "sequenced " << dnastore_reads_count(reads.r) << " reads\n";
        return 0;
    }

    if (*mix) {
        ManifestHandle m;
        load_manifest(m, mix_manifest);
        PoolHandle data, update;
        load_pool(data, mix_data);
        load_pool(update, mix_update);
        char fwd_buf[128], rev_buf[128];
        check(dnastore_manifest_primers(m.m, fwd_buf, sizeof fwd_buf, rev_buf, sizeof rev_buf),
              "reading primers");
        dnastore_mix_mode mode;
        if (mix_mode == "measure-then-amplify")
            mode = DNASTORE_MIX_MEASURE_THEN_AMPLIFY;
        else if (mix_mode == "amplify-then-measure")
            mode = DNASTORE_MIX_AMPLIFY_THEN_MEASURE;
        else
            die("unknown --mode '" + mix_mode + "'");
        dnastore_mix_params params{mix_flags.params(), mix_eps, mix_seed};
        PoolHandle out;
        check(dnastore_mix(data.p, update.p, fwd_buf, rev_buf, mode, &params, &out.p), "mixing pools");
        check(dnastore_pool_save(out.p, mix_out.c_str()), "writing " + mix_out);
        std::cout << "mixed pools: " << dnastore_pool_unique_count(out.p) << " strands\n";
        return 0;
    }

    if (*decode) {
        ManifestHandle m;
        load_manifest(m, dec_manifest);
        ReadsHandle reads;
        load_reads(reads, dec_reads);
        if (dnastore_reads_count(reads.r) == 0) die(dec_reads + ": no reads");
        if (dec_all == (dec_block >= 0)) die("pass exactly one of --block or --all");
        if (dec_all) {
            uint8_t* buf = nullptr;
            size_t len = 0;
            check(dnastore_decode_all(reads.r, m.m, &buf, &len), "decoding partition");
            std::string out_path = dec_outdir + "/decoded.bin";
            write_file(out_path, buf, len);
            dnastore_buffer_free(buf);
            std::cout << "decoded " << len << " bytes -> " << out_path << "\n";
            return 0;
        }
        dnastore_decode_params params{dec_threshold, dec_window, dec_primer_edits, dec_candidates};
        dnastore_decoded* d = nullptr;
        check(dnastore_decode_block(reads.r, m.m, static_cast<uint64_t>(dec_block), &params, &d),
              "decoding block " + std::to_string(dec_block));
        std::string stem = dec_outdir + "/block_" + std::to_string(dec_block);
        const uint8_t* ptr = nullptr;
        size_t len = 0;
        for (int v = 0; v < dnastore_decoded_version_count(d); ++v) {
            check(dnastore_decoded_record(d, v, &ptr, &len), "reading version record");
            write_file(stem + ".v" + std::to_string(v) + ".bin", ptr, len);
        }
        check(dnastore_decoded_updated(d, &ptr, &len), "reading updated bytes");
        write_file(stem + ".updated.bin", ptr, len);
        write_text(stem + ".report.json", dnastore_decoded_report(d));
        std::cout << "decoded block " << dec_block << " (" << dnastore_decoded_version_count(d)
                  << " versions) -> " << stem << ".*\n";
        dnastore_decoded_free(d);
        return 0;
    }

    if (*stats) {
        ManifestHandle m;
        load_manifest(m, st_manifest);
        ReadsHandle reads;
        load_reads(reads, st_reads);
        char* csv = nullptr;
        check(dnastore_stats_csv(reads.r, m.m, &csv), "computing histogram");
        if (st_out == "-")
            std::cout << csv;
        else
            write_text(st_out, csv);
        dnastore_string_free(csv);
        return 0;
    }

    if (*analyze) {
        if (an_step <= 0) die("--step must be positive");
        std::string csv = "index_len,capacity_bytes,capacity_bytes_exact,density_bits_per_base\n";
        char exact[128];
        for (int L = an_from; L <= an_to; L += an_step) {
            dnastore_capacity_point p{};
            check(dnastore_capacity(L, &p), "capacity at L=" + std::to_string(L));
            check(dnastore_capacity_bytes_decimal(L, exact, sizeof exact), "capacity decimal");
            char line[256];
            std::snprintf(line, sizeof line, "%d,%.17g,%s,%.17g\n", p.index_len, p.capacity_bytes, exact,
                          p.density_bits_per_base);
            csv += line;
        }
        if (an_out == "-")
            std::cout << csv;
        else
            write_text(an_out, csv);
        return 0;
    }

    return 0;
}
