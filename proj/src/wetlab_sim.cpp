#include "dnastore/wetlab_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dnastore/errors.hpp"
#include "dnastore/rng.hpp"

namespace dnastore {

void Pool::add(const std::string& seq, double abundance, Provenance prov) {
    if (!(abundance >= 0.0) || !std::isfinite(abundance))
        fail(ErrorCode::invalid_argument, "abundance must be finite and non-negative");
    if (abundance == 0.0) return;
    auto [it, inserted] = entries_.try_emplace(seq, PoolEntry{abundance, prov});
    if (!inserted) it->second.abundance += abundance;
}

double Pool::total_abundance() const {
    double total = 0.0;
    for (const auto& [seq, entry] : entries_) total += entry.abundance;
    return total;
}

Pool Pool::scaled(double factor) const {
    if (!(factor >= 0.0) || !std::isfinite(factor))
        fail(ErrorCode::invalid_argument, "scale factor must be finite and non-negative");
    Pool out;
    for (const auto& [seq, entry] : entries_)
        out.add(seq, entry.abundance * factor, entry.provenance);
    return out;
}

Pool Pool::merged(const Pool& a, const Pool& b) {
    Pool out = a;
    for (const auto& [seq, entry] : b.entries_) out.add(seq, entry.abundance, entry.provenance);
    return out;
}

namespace {

void check_pcr_params(const PcrParams& p) {
    if (p.cycles < 0) fail(ErrorCode::invalid_argument, "cycles must be >= 0");
    if (!(p.efficiency > 0.0) || p.efficiency > 1.0)
        fail(ErrorCode::invalid_argument, "efficiency must be in (0, 1]");
    if (p.misprime_decay < 0.0 || p.misprime_decay >= 1.0)
        fail(ErrorCode::invalid_argument, "misprime_decay must be in [0, 1)");
    if (p.max_edit_distance < 0) fail(ErrorCode::invalid_argument, "max_edit_distance must be >= 0");
}

bool rev_site_matches(const std::string& seq, const std::string& rev) {
    return seq.size() >= rev.size() && seq.compare(seq.size() - rev.size(), rev.size(), rev) == 0;
}

Pool run_pcr(const Pool& pool, const std::vector<std::pair<DnaString, DnaString>>& pairs,
             const PcrParams& params, double efficiency) {
    Pool out;
    for (const auto& [seq, entry] : pool.entries()) {
        // Best-matching pair: minimum forward-site edit distance among
        // pairs whose reverse site matches exactly.
        int best_d = params.max_edit_distance + 1;
        const std::string* best_fwd = nullptr;
        for (const auto& [fwd, rev] : pairs) {
            if (!rev_site_matches(seq, rev.str())) continue;
            if (seq.size() < fwd.size() + rev.size()) continue;
            int d = static_cast<int>(bounded_edit_distance(
                std::string_view(seq).substr(0, fwd.size()), fwd.view(),
                static_cast<std::size_t>(params.max_edit_distance)));
            if (d < best_d) {
                best_d = d;
                best_fwd = &fwd.str();
            }
        }
        if (!best_fwd || best_d > params.max_edit_distance) {
            out.add(seq, entry.abundance, entry.provenance);
            continue;
        }
        double growth = std::pow(1.0 + efficiency * std::pow(params.misprime_decay, best_d),
                                 params.cycles);
        if (best_d == 0) {
            Provenance prov = entry.provenance == Provenance::original && growth > 1.0
                                  ? Provenance::amplified
                                  : entry.provenance;
            out.add(seq, entry.abundance * growth, prov);
        } else {
            out.add(seq, entry.abundance, entry.provenance);
            double amplified = entry.abundance * (growth - 1.0);
            if (amplified > 0.0) {
                std::string overwritten = *best_fwd + seq.substr(best_fwd->size());
                out.add(overwritten, amplified, Provenance::misprimed);
            }
        }
    }
    return out;
}

} // namespace

Pool pcr(const Pool& pool, const DnaString& fwd, const DnaString& rev, const PcrParams& params) {
    check_pcr_params(params);
    if (fwd.size() < 20) fail(ErrorCode::invalid_argument, "forward primer shorter than 20 bases");
    return run_pcr(pool, {{fwd, rev}}, params, params.efficiency);
}

Pool multiplex_pcr(const Pool& pool, const std::vector<std::pair<DnaString, DnaString>>& pairs,
                   const PcrParams& params) {
    check_pcr_params(params);
    if (pairs.empty()) fail(ErrorCode::invalid_argument, "multiplex needs at least one primer pair");
    for (const auto& [fwd, rev] : pairs)
        if (fwd.size() < 20) fail(ErrorCode::invalid_argument, "forward primer shorter than 20 bases");
    return run_pcr(pool, pairs, params, params.efficiency / static_cast<double>(pairs.size()));
}

Pool two_stage_pcr(const Pool& pool, const DnaString& fwd, const DnaString& rev,
                   const DnaString& elongated_fwd, const PcrParams& stage1, const PcrParams& stage2) {
    if (elongated_fwd.size() < fwd.size() ||
        elongated_fwd.str().compare(0, fwd.size(), fwd.str()) != 0)
        fail(ErrorCode::invalid_argument, "elongated primer does not extend the main forward primer");
    Pool first = pcr(pool, fwd, rev, stage1);
    return pcr(first, elongated_fwd, rev, stage2);
}

namespace {

void check_channel(const ChannelModel& c) {
    for (double p : {c.p_sub, c.p_ins, c.p_del})
        if (p < 0.0 || p >= 1.0) fail(ErrorCode::invalid_argument, "channel probabilities must be in [0, 1)");
    if (c.p_sub + c.p_ins + c.p_del >= 1.0)
        fail(ErrorCode::invalid_argument, "channel probabilities must sum below 1");
}

char random_base(SplitMix64& rng) { return "ACGT"[rng.next_below(4)]; }

char random_other_base(SplitMix64& rng, char c) {
    static const char* bases = "ACGT";
    int original = 0;
    while (bases[original] != c) ++original;
    int r = static_cast<int>(rng.next_below(3));
    if (r >= original) ++r; // map the 3 draws onto the other 3 bases
    return bases[r];
}

} // namespace

std::vector<DnaString> sequence(const Pool& pool, std::size_t n_reads, const ChannelModel& channel) {
    check_channel(channel);
    std::vector<DnaString> reads;
    if (n_reads == 0) return reads;
    if (pool.empty() || pool.total_abundance() <= 0.0)
        fail(ErrorCode::invalid_argument, "cannot sample reads from an empty pool");

    std::vector<const std::string*> seqs;
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& [seq, entry] : pool.entries()) {
        total += entry.abundance;
        seqs.push_back(&seq);
        cumulative.push_back(total);
    }

    SplitMix64 rng(derive_seed(channel.seed, 0x73657175656e6365ULL)); // "sequence"
    reads.reserve(n_reads);
    for (std::size_t i = 0; i < n_reads; ++i) {
        double u = rng.next_double() * total;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (idx >= seqs.size()) idx = seqs.size() - 1;
        const std::string& src = *seqs[idx];

        std::string noisy;
        noisy.reserve(src.size() + 4);
        for (char c : src) {
            if (rng.next_double() < channel.p_ins) noisy.push_back(random_base(rng));
            double r = rng.next_double();
            if (r < channel.p_del) continue;
            if (r < channel.p_del + channel.p_sub)
                noisy.push_back(random_other_base(rng, c));
            else
                noisy.push_back(c);
        }
        if (rng.next_double() < channel.p_ins) noisy.push_back(random_base(rng));
        reads.push_back(DnaString::from_text(noisy));
    }
    return reads;
}

double measure(const Pool& pool, const MeasurementModel& model, std::uint64_t seed) {
    if (model.relative_error < 0.0 || model.relative_error >= 1.0)
        fail(ErrorCode::invalid_argument, "measurement relative_error must be in [0, 1)");
    SplitMix64 rng(derive_seed(seed, 0x6d65617375726564ULL)); // "measured"
    double noise = 1.0 + model.relative_error * (2.0 * rng.next_double() - 1.0);
    return pool.total_abundance() * noise;
}

Pool mix_measure_then_amplify(const Pool& data_pool, const Pool& update_pool, const DnaString& fwd,
                              const DnaString& rev, const MixParams& params) {
    if (data_pool.empty() || update_pool.empty())
        fail(ErrorCode::invalid_argument, "both pools must be non-empty");
    double data_conc = measure(data_pool, params.measurement, derive_seed(params.seed, 1));
    double update_conc = measure(update_pool, params.measurement, derive_seed(params.seed, 2));
    double per_oligo_data = data_conc / static_cast<double>(data_pool.unique_count());
    double per_oligo_update = update_conc / static_cast<double>(update_pool.unique_count());
    Pool combined = Pool::merged(data_pool, update_pool.scaled(per_oligo_data / per_oligo_update));
    return pcr(combined, fwd, rev, params.pcr);
}

Pool mix_amplify_then_measure(const Pool& data_pool, const Pool& update_pool, const DnaString& fwd,
                              const DnaString& rev, const MixParams& params) {
    if (data_pool.empty() || update_pool.empty())
        fail(ErrorCode::invalid_argument, "both pools must be non-empty");
    Pool amp_data = pcr(data_pool, fwd, rev, params.pcr);
    Pool amp_update = pcr(update_pool, fwd, rev, params.pcr);
    double data_conc = measure(amp_data, params.measurement, derive_seed(params.seed, 3));
    double update_conc = measure(amp_update, params.measurement, derive_seed(params.seed, 4));
    // Target totals proportional to unique-oligo counts.
    double scale = (data_conc * static_cast<double>(amp_update.unique_count())) /
                   (update_conc * static_cast<double>(amp_data.unique_count()));
    return Pool::merged(amp_data, amp_update.scaled(scale));
}

Pool load_pool(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open pool file: " + path);
    Pool pool;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            fail(ErrorCode::parse, path + ":" + std::to_string(lineno) + ": expected abundance<TAB>sequence");
        double abundance = 0.0;
        try {
            abundance = std::stod(line.substr(0, tab));
        } catch (const std::exception&) {
            fail(ErrorCode::parse, path + ":" + std::to_string(lineno) + ": bad abundance");
        }
        DnaString seq = DnaString::from_text(std::string_view(line).substr(tab + 1));
        pool.add(seq.str(), abundance);
    }
    return pool;
}

void save_pool(const Pool& pool, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write pool file: " + path);
    out << "# abundance\tsequence\n";
    char buf[64];
    for (const auto& [seq, entry] : pool.entries()) {
        std::snprintf(buf, sizeof(buf), "%.17g", entry.abundance);
        out << buf << '\t' << seq << '\n';
    }
    if (!out) fail(ErrorCode::io, "failed writing pool file: " + path);
}

std::vector<DnaString> load_reads(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open reads file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    std::vector<DnaString> reads;
    std::size_t first = 0;
    while (first < lines.size() && (lines[first].empty() || lines[first][0] == '#')) ++first;
    if (first < lines.size() && lines[first][0] == '@') {
        // FASTQ: header / sequence / '+' / quality.
        for (std::size_t i = first; i + 1 < lines.size(); i += 4) {
            if (lines[i].empty() || lines[i][0] != '@')
                fail(ErrorCode::parse, path + ": malformed FASTQ record near line " + std::to_string(i + 1));
            reads.push_back(DnaString::from_text(lines[i + 1]));
        }
    } else {
        for (std::size_t i = first; i < lines.size(); ++i) {
            if (lines[i].empty() || lines[i][0] == '#') continue;
            reads.push_back(DnaString::from_text(lines[i]));
        }
    }
    return reads;
}

void save_reads(const std::vector<DnaString>& reads, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write reads file: " + path);
    for (const auto& r : reads) out << r.str() << '\n';
    if (!out) fail(ErrorCode::io, "failed writing reads file: " + path);
}

} // namespace dnastore
