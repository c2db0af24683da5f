#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dnastore/partition.hpp"
#include "dnastore/rng.hpp"
#include "dnastore/wetlab_sim.hpp"

using namespace dnastore;

namespace {

const std::string kFwd = kDefaultFwdPrimer;
const std::string kRev = kDefaultRevPrimer;

std::string strand_with_payload(const std::string& payload) { return kFwd + "A" + payload + kRev; }

std::string random_payload(SplitMix64& rng, std::size_t n = 40) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back("ACGT"[rng.next_below(4)]);
    return s;
}

DnaString fwd_dna() { return DnaString::from_text(kFwd); }
DnaString rev_dna() { return DnaString::from_text(kRev); }

} // namespace

TEST_CASE("exact-match amplification follows the doubling law") {
    Pool pool;
    pool.add(strand_with_payload("ACGTACGT"), 1.0);
    PcrParams params;
    params.cycles = 15;
    params.efficiency = 1.0;
    Pool out = pcr(pool, fwd_dna(), rev_dna(), params);
    REQUIRE(out.unique_count() == 1);
    CHECK(out.entries().begin()->second.abundance == doctest::Approx(32768.0));
    CHECK(out.entries().begin()->second.provenance == Provenance::amplified);
}

TEST_CASE("strands beyond the edit cutoff are untouched") {
    std::string strand = strand_with_payload("ACGTACGT");
    // Four substitutions inside the forward-primer site.
    strand[0] = 'T';
    strand[3] = 'A';
    strand[6] = 'C';
    strand[9] = 'G';
    REQUIRE(bounded_edit_distance(std::string_view(strand).substr(0, 20), kFwd, 4) == 4);
    Pool pool;
    pool.add(strand, 2.5);
    PcrParams params;
    params.cycles = 10;
    Pool out = pcr(pool, fwd_dna(), rev_dna(), params);
    REQUIRE(out.unique_count() == 1);
    CHECK(out.entries().begin()->second.abundance == doctest::Approx(2.5));
}

TEST_CASE("zero cycles leave the pool unchanged") {
    SplitMix64 rng(1);
    Pool pool;
    for (int i = 0; i < 5; ++i) pool.add(strand_with_payload(random_payload(rng)), 1.0 + i);
    PcrParams params;
    params.cycles = 0;
    Pool out = pcr(pool, fwd_dna(), rev_dna(), params);
    REQUIRE(out.unique_count() == pool.unique_count());
    auto a = pool.entries().begin();
    auto b = out.entries().begin();
    for (; a != pool.entries().end(); ++a, ++b) {
        CHECK(a->first == b->first);
        CHECK(a->second.abundance == doctest::Approx(b->second.abundance));
    }
}

TEST_CASE("mispriming overwrites the prefix and keeps the payload") {
    // A strand whose primer site is two substitutions away from fwd.
    std::string payload = "GGTTAACCGGTTAACC";
    std::string strand = strand_with_payload(payload);
    strand[2] = strand[2] == 'A' ? 'C' : 'A';
    strand[11] = strand[11] == 'A' ? 'C' : 'A';
    REQUIRE(bounded_edit_distance(std::string_view(strand).substr(0, 20), kFwd, 3) == 2);

    Pool pool;
    pool.add(strand, 1.0);
    PcrParams params;
    params.cycles = 8;
    params.efficiency = 0.95;
    params.misprime_decay = 0.25;
    Pool out = pcr(pool, fwd_dna(), rev_dna(), params);

    REQUIRE(out.unique_count() == 2);
    const std::string overwritten = kFwd + strand.substr(20);
    REQUIRE(out.entries().count(strand) == 1);
    REQUIRE(out.entries().count(overwritten) == 1);

    const PoolEntry& residue = out.entries().at(strand);
    const PoolEntry& misprime = out.entries().at(overwritten);
    CHECK(residue.abundance == doctest::Approx(1.0));
    CHECK(residue.provenance == Provenance::original);
    CHECK(misprime.provenance == Provenance::misprimed);
    double growth = std::pow(1.0 + 0.95 * 0.25 * 0.25, 8);
    CHECK(misprime.abundance == doctest::Approx(growth - 1.0));
    // Payload region is byte-identical to the source strand.
    CHECK(overwritten.substr(20) == strand.substr(20));
}

TEST_CASE("amplification never decreases abundance or invents sequences") {
    SplitMix64 rng(2);
    Pool pool;
    std::vector<std::string> strands;
    for (int i = 0; i < 20; ++i) {
        std::string s = strand_with_payload(random_payload(rng));
        if (i % 4 == 0) s[1 + rng.next_below(12)] = "ACGT"[rng.next_below(4)];
        strands.push_back(s);
        pool.add(s, 1.0);
    }
    PcrParams params;
    params.cycles = 6;
    Pool out = pcr(pool, fwd_dna(), rev_dna(), params);
    for (const auto& [seq, entry] : pool.entries()) {
        REQUIRE(out.entries().count(seq) == 1);
        CHECK(out.entries().at(seq).abundance >= entry.abundance - 1e-12);
    }
    for (const auto& [seq, entry] : out.entries()) {
        bool known = pool.entries().count(seq) > 0;
        bool overwritten = seq.compare(0, kFwd.size(), kFwd) == 0 &&
                           [&] {
                               for (const auto& [src, e] : pool.entries())
                                   if (src.substr(kFwd.size()) == seq.substr(kFwd.size())) return true;
                               return false;
                           }();
        CHECK((known || overwritten));
    }
}

TEST_CASE("single-pair multiplex equals plain pcr") {
    SplitMix64 rng(3);
    Pool pool;
    for (int i = 0; i < 8; ++i) pool.add(strand_with_payload(random_payload(rng)), 1.0);
    PcrParams params;
    params.cycles = 5;
    Pool a = pcr(pool, fwd_dna(), rev_dna(), params);
    Pool b = multiplex_pcr(pool, {{fwd_dna(), rev_dna()}}, params);
    REQUIRE(a.unique_count() == b.unique_count());
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    for (; ia != a.entries().end(); ++ia, ++ib) {
        CHECK(ia->first == ib->first);
        CHECK(ia->second.abundance == doctest::Approx(ib->second.abundance));
    }
}

TEST_CASE("two-stage pcr validates the primer extension") {
    Pool pool;
    pool.add(strand_with_payload("AACC"), 1.0);
    PcrParams params;
    params.cycles = 3;
    CHECK_THROWS_AS(two_stage_pcr(pool, fwd_dna(), rev_dna(), DnaString::from_text("TTTTTTTTTTTTTTTTTTTTT"),
                                  params, params),
                    Error);

    PcrParams none = params;
    none.cycles = 0;
    DnaString elongated = DnaString::from_text(kFwd + "A");
    Pool staged = two_stage_pcr(pool, fwd_dna(), rev_dna(), elongated, params, none);
    Pool plain = pcr(pool, fwd_dna(), rev_dna(), params);
    CHECK(staged.total_abundance() == doctest::Approx(plain.total_abundance()));
}

TEST_CASE("sequencing samples by abundance and perturbs by the channel") {
    Pool pool;
    ChannelModel clean{0.0, 0.0, 0.0, 7};
    CHECK(sequence(pool, 0, clean).empty());
    CHECK_THROWS_AS(sequence(pool, 1, clean), Error);

    std::string strand = strand_with_payload("ACGTACGTACGTACGT");
    pool.add(strand, 1.0);
    auto reads = sequence(pool, 50, clean);
    REQUIRE(reads.size() == 50);
    for (const auto& r : reads) CHECK(r.str() == strand);

    // Determinism in the seed.
    ChannelModel noisy{0.01, 0.005, 0.005, 99};
    auto r1 = sequence(pool, 20, noisy);
    auto r2 = sequence(pool, 20, noisy);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i].str() == r2[i].str());

    // Substitution-only channel: empirical rate within 0.01 +/- 0.002
    // over ~10^5 sampled bases.
    ChannelModel subs{0.01, 0.0, 0.0, 1234};
    std::size_t n_reads = 100000 / strand.size() + 1;
    auto sreads = sequence(pool, n_reads, subs);
    std::size_t bases = 0, flips = 0;
    for (const auto& r : sreads) {
        REQUIRE(r.size() == strand.size()); // no indels in this channel
        for (std::size_t i = 0; i < r.size(); ++i) {
            ++bases;
            if (r.str()[i] != strand[i]) ++flips;
        }
    }
    double rate = static_cast<double>(flips) / static_cast<double>(bases);
    CHECK(rate > 0.008);
    CHECK(rate < 0.012);
}

TEST_CASE("abundance-weighted sampling is proportional") {
    Pool pool;
    std::string a = strand_with_payload("AAAAAAAA");
    std::string b = strand_with_payload("CCCCCCCC");
    pool.add(a, 9.0);
    pool.add(b, 1.0);
    ChannelModel clean{0.0, 0.0, 0.0, 5};
    auto reads = sequence(pool, 10000, clean);
    std::size_t count_a = 0;
    for (const auto& r : reads)
        if (r.str() == a) ++count_a;
    double frac = static_cast<double>(count_a) / 10000.0;
    CHECK(frac > 0.87);
    CHECK(frac < 0.93);
}

TEST_CASE("measurement noise is bounded and uniform") {
    Pool pool;
    pool.add(strand_with_payload("ACAC"), 100.0);

    CHECK(measure(pool, MeasurementModel{0.0}, 1) == doctest::Approx(100.0));

    MeasurementModel noisy{0.1};
    double lo = 1e9, hi = 0, sum = 0, sumsq = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        double v = measure(pool, noisy, static_cast<std::uint64_t>(t));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
        sumsq += v * v;
    }
    CHECK(lo >= 90.0);
    CHECK(hi <= 110.0);
    double mean = sum / trials;
    double var = sumsq / trials - mean * mean;
    // Uniform multiplicative noise: variance (eps * total)^2 / 3 = 33.3.
    CHECK(var > 20.0);
    CHECK(var < 48.0);
    CHECK(mean == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("mixing equalizes per-oligo abundance despite a 50000x mismatch") {
    SplitMix64 rng(6);
    Pool data, update;
    std::vector<std::string> data_strands, update_strands;
    for (int i = 0; i < 60; ++i) {
        std::string s = strand_with_payload(random_payload(rng));
        data_strands.push_back(s);
        data.add(s, 1.0);
    }
    for (int i = 0; i < 3; ++i) {
        std::string s = strand_with_payload(random_payload(rng));
        update_strands.push_back(s);
        update.add(s, 50000.0);
    }

    auto per_strand_ratio = [&](const Pool& mixed) {
        double d = 0, u = 0;
        for (const auto& s : data_strands) d += mixed.entries().at(s).abundance;
        for (const auto& s : update_strands) u += mixed.entries().at(s).abundance;
        d /= static_cast<double>(data_strands.size());
        u /= static_cast<double>(update_strands.size());
        return u / d;
    };

    MixParams params;
    params.measurement.relative_error = 0.1;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        params.seed = seed;
        Pool mta = mix_measure_then_amplify(data, update, fwd_dna(), rev_dna(), params);
        Pool atm = mix_amplify_then_measure(data, update, fwd_dna(), rev_dna(), params);
        CHECK(per_strand_ratio(mta) > 0.5);
        CHECK(per_strand_ratio(mta) < 2.0);
        CHECK(per_strand_ratio(atm) > 0.5);
        CHECK(per_strand_ratio(atm) < 2.0);
    }

    // Exact measurement, identical pools: 1:1.
    MixParams exact;
    Pool same_a, same_b;
    same_a.add(strand_with_payload("AAGG"), 4.0);
    same_b.add(strand_with_payload("TTCC"), 4.0);
    Pool mixed = mix_amplify_then_measure(same_a, same_b, fwd_dna(), rev_dna(), exact);
    double ra = mixed.entries().at(strand_with_payload("AAGG")).abundance;
    double rb = mixed.entries().at(strand_with_payload("TTCC")).abundance;
    CHECK(ra == doctest::Approx(rb));

    // Zero-cycle amplify-then-measure degenerates to measure-then-mix.
    MixParams zero;
    zero.pcr.cycles = 0;
    Pool degenerate = mix_amplify_then_measure(data, update, fwd_dna(), rev_dna(), zero);
    CHECK(per_strand_ratio(degenerate) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(mix_measure_then_amplify(Pool{}, update, fwd_dna(), rev_dna(), params), Error);
}

TEST_CASE("pool files round-trip") {
    SplitMix64 rng(8);
    Pool pool;
    for (int i = 0; i < 10; ++i) pool.add(strand_with_payload(random_payload(rng)), 0.25 + i * 1.75);
    const std::string path = "test_pool_roundtrip.tmp";
    save_pool(pool, path);
    Pool back = load_pool(path);
    REQUIRE(back.unique_count() == pool.unique_count());
    auto a = pool.entries().begin();
    auto b = back.entries().begin();
    for (; a != pool.entries().end(); ++a, ++b) {
        CHECK(a->first == b->first);
        CHECK(a->second.abundance == b->second.abundance); // exact via %.17g
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_pool("does_not_exist.pool"), Error);
}

TEST_CASE("reads files round-trip and import FASTQ") {
    std::vector<DnaString> reads{DnaString::from_text("ACGT"), DnaString::from_text("GGCC")};
    const std::string path = "test_reads_roundtrip.tmp";
    save_reads(reads, path);
    auto back = load_reads(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].str() == "ACGT");
    CHECK(back[1].str() == "GGCC");

    {
        std::ofstream out(path);
        out << "@read1\nACGTACGT\n+\nFFFFFFFF\n@read2\nTTGGCCAA\n+\nFFFFFFFF\n";
    }
    back = load_reads(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].str() == "ACGTACGT");
    CHECK(back[1].str() == "TTGGCCAA");
    std::remove(path.c_str());
}
