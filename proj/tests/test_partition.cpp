#include "doctest.h"

#include "dnastore/ecc.hpp"
#include "dnastore/partition.hpp"
#include "dnastore/rng.hpp"

using namespace dnastore;

namespace {

PartitionManifest test_manifest(std::uint64_t blocks = 600) {
    PartitionManifest m;
    m.fwd_primer = DnaString::from_text(kDefaultFwdPrimer);
    m.rev_primer = DnaString::from_text(kDefaultRevPrimer);
    m.tree_depth = 5;
    m.tree_seed = 42;
    m.randomizer_seed = 1337;
    m.block_count = blocks;
    m.file_size = blocks * kBlockBytes;
    m.version_counts.assign(blocks, 1);
    return m;
}

Bytes random_block(SplitMix64& rng) {
    Bytes data(kBlockBytes);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.next_below(256));
    return data;
}

} // namespace

TEST_CASE("default primers satisfy the primer rules") {
    PrimerLibrary library;
    auto fwd = DnaString::from_text(kDefaultFwdPrimer);
    auto rev = DnaString::from_text(kDefaultRevPrimer);
    PrimerReport report = validate_primer_pair(fwd, rev, library);
    CHECK(report.ok);
    CHECK(fwd.gc_count() == 10);
    CHECK(rev.gc_count() == 10);
    // 2 degrees per weak base + 4 per strong base.
    CHECK(report.fwd_melting_c == doctest::Approx(60.0));
}

TEST_CASE("primer validation failures") {
    PrimerLibrary library;
    auto fwd = DnaString::from_text(kDefaultFwdPrimer);
    auto rev = DnaString::from_text(kDefaultRevPrimer);

    auto all_a = DnaString::from_text(std::string(20, 'A'));
    CHECK_FALSE(validate_primer_pair(all_a, rev, library).ok);

    library.pairs.emplace_back(fwd, rev);
    CHECK_FALSE(validate_primer_pair(fwd, rev, library).ok); // distance 0 to admitted

    PrimerLibrary fresh;
    CHECK_FALSE(validate_primer_pair(fwd, fwd, fresh).ok); // fwd/rev identical
}

TEST_CASE("strand layout is bit-exact") {
    Partition partition(test_manifest());
    SplitMix64 rng(3);
    Bytes data = random_block(rng);
    auto strands = partition.build_strands(531, 0, data);
    REQUIRE(strands.size() == 15);

    const std::string index = partition.tree().leaf_index(531).str();
    for (int c = 0; c < 15; ++c) {
        const std::string& s = strands[static_cast<std::size_t>(c)].str();
        REQUIRE(s.size() == 150);
        CHECK(s.substr(0, 20) == kDefaultFwdPrimer);
        CHECK(s[20] == 'A');
        CHECK(s.substr(21, 10) == index);
        CHECK(s[31] == 'A'); // version 0
        CHECK(s.substr(32, 2) == intra_index(c));
        CHECK(s.substr(130, 20) == kDefaultRevPrimer);
    }
}

TEST_CASE("intra indexes enumerate 0..14 in base 4") {
    for (int c = 0; c < 15; ++c) {
        std::string expected{"ACGT"[c / 4], "ACGT"[c % 4]};
        CHECK(intra_index(c) == expected);
        CHECK(intra_index_value(expected) == c);
    }
    CHECK(intra_index(0) == "AA");
    CHECK(intra_index(14) == "TG");
    CHECK_FALSE(intra_index_value("TT").has_value()); // 15 is out of range
    CHECK_THROWS_AS(intra_index(15), Error);
}

TEST_CASE("parse inverts build") {
    Partition partition(test_manifest());
    SplitMix64 rng(4);
    Bytes data = random_block(rng);
    auto strands = partition.build_strands(144, 2, data);
    for (int c = 0; c < 15; ++c) {
        ParseResult r = partition.parse_strand(strands[static_cast<std::size_t>(c)]);
        REQUIRE(r.ok);
        CHECK(r.fields.block_no == 144);
        CHECK(r.fields.version == 2);
        CHECK(r.fields.column == c);
        CHECK(r.fields.payload.size() == 96);
    }
}

TEST_CASE("parse rejects carry reasons") {
    Partition partition(test_manifest());
    SplitMix64 rng(5);
    auto strands = partition.build_strands(7, 0, random_block(rng));
    std::string s = strands[0].str();

    ParseResult r = partition.parse_strand(DnaString::from_text(s.substr(1)));
    CHECK_FALSE(r.ok);
    CHECK(r.reject_reason.find("length") != std::string::npos);

    std::string foreign = s;
    foreign.replace(0, 20, "AATTAATTAATTAATTAATT");
    r = partition.parse_strand(DnaString::from_text(foreign));
    CHECK_FALSE(r.ok);
    CHECK(r.reject_reason.find("primer") != std::string::npos);
}

TEST_CASE("versions share the address prefix and differ in one base") {
    Partition partition(test_manifest());
    SplitMix64 rng(6);
    Bytes data = random_block(rng);
    auto v0 = partition.build_strands(531, 0, data);
    auto v1 = partition.build_strands(531, 1, data);

    // Among the first 32 bases (through the version slot) exactly the
    // version base differs.
    for (int c = 0; c < 15; ++c) {
        const std::string& a = v0[static_cast<std::size_t>(c)].str();
        const std::string& b = v1[static_cast<std::size_t>(c)].str();
        CHECK(a.substr(0, 31) == b.substr(0, 31));
        CHECK(a[31] == 'A');
        CHECK(b[31] == 'C');
    }

    for (int v = 0; v < 4; ++v) {
        DnaString addr = partition.block_address(531, v);
        CHECK(addr.size() == 12);
        CHECK(addr.str().substr(0, 11) == partition.block_address(531, 0).str().substr(0, 11));
        CHECK(addr.str()[11] == version_base(v));
    }

    // Distinct blocks differ inside the first 11 address bases.
    DnaString base_addr = partition.block_address(0, 0);
    for (std::uint64_t blk = 1; blk < 600; ++blk) {
        CHECK(partition.block_address(blk, 0).str().substr(0, 11) != base_addr.str().substr(0, 11));
    }
}

TEST_CASE("builds are deterministic and decode back exactly") {
    Partition partition(test_manifest());
    SplitMix64 rng(7);
    Bytes data = random_block(rng);

    auto once = partition.build_strands(99, 0, data);
    auto twice = partition.build_strands(99, 0, data);
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i].str() == twice[i].str());

    // Unperturbed strands -> parse -> RS decode -> derandomize -> original.
    std::vector<ReceivedColumn> cols;
    for (const auto& s : once) {
        ParseResult r = partition.parse_strand(s);
        REQUIRE(r.ok);
        Bytes column_bytes = map_bases_to_bits(r.fields.payload);
        ReceivedColumn rc{r.fields.column, {}};
        for (std::size_t b = 0; b < column_bytes.size(); ++b) {
            rc.symbols[2 * b] = column_bytes[b] >> 4;
            rc.symbols[2 * b + 1] = column_bytes[b] & 0xF;
        }
        cols.push_back(rc);
    }
    Bytes record = rs_decode_unit(cols);
    CHECK(partition.derandomize_unit(99, 0, record) == data);
}

TEST_CASE("strand accounting scales by 15") {
    Partition partition(test_manifest(3));
    SplitMix64 rng(8);
    std::size_t strands = 0;
    for (std::uint64_t b = 0; b < 3; ++b) strands += partition.build_strands(b, 0, random_block(rng)).size();
    CHECK(strands == 45);
}

TEST_CASE("manifest json round-trips losslessly") {
    PartitionManifest m = test_manifest(587);
    m.version_counts[144] = 2;
    m.version_counts[307] = 2;
    m.version_counts[531] = 4;
    m.file_size = 150272;

    std::string text = manifest_to_json(m);
    PartitionManifest back = manifest_from_json(text);
    CHECK(back.fwd_primer.str() == m.fwd_primer.str());
    CHECK(back.rev_primer.str() == m.rev_primer.str());
    CHECK(back.tree_depth == m.tree_depth);
    CHECK(back.tree_seed == m.tree_seed);
    CHECK(back.randomizer_seed == m.randomizer_seed);
    CHECK(back.block_count == m.block_count);
    CHECK(back.file_size == m.file_size);
    CHECK(back.version_counts == m.version_counts);
    CHECK(manifest_to_json(back) == text);

    CHECK_THROWS_AS(manifest_from_json("{}"), Error);
    CHECK_THROWS_AS(manifest_from_json("not json"), Error);
}

TEST_CASE("build_strands rejects bad arguments") {
    Partition partition(test_manifest());
    SplitMix64 rng(9);
    Bytes data = random_block(rng);
    CHECK_THROWS_AS(partition.build_strands(1024, 0, data), Error);
    CHECK_THROWS_AS(partition.build_strands(0, 4, data), Error);
    CHECK_THROWS_AS(partition.build_strands(0, 0, Bytes(255)), Error);
}
