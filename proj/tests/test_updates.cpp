#include "doctest.h"

#include "dnastore/rng.hpp"
#include "dnastore/updates.hpp"

using namespace dnastore;

namespace {

Bytes bytes_of(const char* text) {
    const std::string s(text);
    return Bytes(s.begin(), s.end());
}

UpdatePatch random_valid_patch(SplitMix64& rng) {
    UpdatePatch p;
    p.del_start = static_cast<std::uint8_t>(rng.next_below(256));
    p.del_len = static_cast<std::uint8_t>(rng.next_below(256));
    p.ins_pos = static_cast<std::uint8_t>(rng.next_below(256));
    p.ins_bytes.resize(rng.next_below(kMaxInsertBytes + 1));
    for (auto& b : p.ins_bytes) b = static_cast<std::uint8_t>(rng.next_below(256));
    return p;
}

} // namespace

TEST_CASE("patch serialization layout") {
    UpdatePatch empty;
    Bytes record = serialize_patch(empty);
    REQUIRE(record.size() == 256);
    for (auto b : record) CHECK(b == 0);

    UpdatePatch howdy{0, 5, 0, bytes_of("HOWDY")};
    record = serialize_patch(howdy);
    CHECK(record[0] == 0);
    CHECK(record[1] == 5);
    CHECK(record[2] == 0);
    CHECK(record[3] == 5);
    CHECK(record[4] == 'H');
    CHECK(record[5] == 'O');
    CHECK(record[6] == 'W');
    CHECK(record[7] == 'D');
    CHECK(record[8] == 'Y');
    for (std::size_t i = 9; i < 256; ++i) CHECK(record[i] == 0);

    UpdatePatch too_big;
    too_big.ins_bytes.resize(253);
    CHECK_THROWS_AS(serialize_patch(too_big), Error);
    CHECK_THROWS_AS(deserialize_patch(Bytes(255)), Error);
}

TEST_CASE("serialize/deserialize round-trips random patches") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        UpdatePatch p = random_valid_patch(rng);
        UpdatePatch q = deserialize_patch(serialize_patch(p));
        CHECK(q.del_start == p.del_start);
        CHECK(q.del_len == p.del_len);
        CHECK(q.ins_pos == p.ins_pos);
        CHECK(q.ins_bytes == p.ins_bytes);
    }
}

TEST_CASE("apply_patch edits blocks") {
    Bytes block = bytes_of("HELLOWORLD");
    CHECK(apply_patch(block, UpdatePatch{}) == block);
    CHECK(apply_patch(block, UpdatePatch{0, 5, 0, bytes_of("HOWDY")}) == bytes_of("HOWDYWORLD"));
    CHECK(apply_patch(block, UpdatePatch{5, 5, 5, {}}) == bytes_of("HELLO"));
    CHECK(apply_patch(block, UpdatePatch{0, 0, 10, bytes_of("!!")}) == bytes_of("HELLOWORLD!!"));

    CHECK_THROWS_AS(apply_patch(block, UpdatePatch{8, 5, 0, {}}), Error);   // deletion past end
    CHECK_THROWS_AS(apply_patch(block, UpdatePatch{0, 0, 11, {}}), Error);  // insert past end
    Bytes full(256, 'x');
    CHECK_THROWS_AS(apply_patch(full, UpdatePatch{0, 0, 0, bytes_of("y")}), Error); // overflow
}

TEST_CASE("patch order matters") {
    Bytes block = bytes_of("ABCDEF");
    UpdatePatch p1{0, 3, 0, bytes_of("XY")};  // ABCDEF -> XYDEF
    UpdatePatch p2{0, 2, 0, bytes_of("Z")};   // XYDEF -> ZDEF ; ABCDEF -> ZCDEF
    Bytes forward = apply_patch(apply_patch(block, p1), p2);
    Bytes reversed = apply_patch(apply_patch(block, p2), p1);
    CHECK(forward == bytes_of("ZDEF"));
    CHECK(reversed != forward);
}

TEST_CASE("resolve_chain folds patches in version order") {
    Bytes original = bytes_of("HELLOWORLD");
    CHECK(resolve_chain(VersionChain{original, {}}) == original);

    VersionChain one{original, {UpdatePatch{0, 5, 0, bytes_of("HOWDY")}}};
    CHECK(resolve_chain(one) == bytes_of("HOWDYWORLD"));

    VersionChain three{original,
                       {UpdatePatch{0, 5, 0, bytes_of("HOWDY")},
                        UpdatePatch{5, 5, 5, bytes_of("PLANET")},
                        UpdatePatch{0, 0, 11, bytes_of("!")}}};
    Bytes manual = apply_patch(original, three.patches[0]);
    manual = apply_patch(manual, three.patches[1]);
    manual = apply_patch(manual, three.patches[2]);
    CHECK(resolve_chain(three) == manual);
    CHECK(manual == bytes_of("HOWDYPLANET!"));

    // Incremental evaluation matches the full fold.
    VersionChain two{original, {three.patches[0], three.patches[1]}};
    CHECK(apply_patch(resolve_chain(two), three.patches[2]) == resolve_chain(three));

    VersionChain broken{original, {UpdatePatch{200, 100, 0, {}}}};
    try {
        resolve_chain(broken);
        FAIL("expected patch error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("version 1") != std::string::npos);
    }
}

TEST_CASE("one patch unit is 15 strands against 8805 for re-synthesis") {
    CHECK(8805 / 15 == 587);
}
