#include "doctest.h"

#include <algorithm>

#include "dnastore/ecc.hpp"
#include "dnastore/rng.hpp"

using namespace dnastore;

namespace {

Bytes random_unit_bytes(SplitMix64& rng) {
    Bytes data(EccConfig::unit_bytes);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.next_below(256));
    return data;
}

// Independent syndrome oracle: evaluate the row polynomial at alpha^j.
std::uint8_t eval_row_at(const std::array<std::uint8_t, 15>& row, int j) {
    std::uint8_t acc = 0;
    for (int p = 0; p < 15; ++p)
        acc = static_cast<std::uint8_t>(acc ^ gf16_mul(row[p], gf16_pow_alpha(p * j)));
    return acc;
}

std::vector<ReceivedColumn> all_columns(const UnitMatrix& unit) {
    std::vector<ReceivedColumn> cols;
    for (int c = 0; c < EccConfig::n; ++c) cols.push_back({c, unit.columns[c]});
    return cols;
}

} // namespace

TEST_CASE("gf16 arithmetic") {
    for (int x = 0; x < 16; ++x) {
        CHECK(gf16_mul(static_cast<std::uint8_t>(x), 1) == x);
        CHECK(gf16_mul(0, static_cast<std::uint8_t>(x)) == 0);
    }
    // x * (x^3 + 1) = x^4 + x = (x + 1) + x = 1 mod x^4 + x + 1.
    CHECK(gf16_mul(0x2, 0x9) == 0x1);

    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) {
            CHECK(gf16_mul(a, b) == gf16_mul(b, a));
            for (int c = 0; c < 16; ++c) {
                CHECK(gf16_mul(gf16_mul(a, b), c) == gf16_mul(a, gf16_mul(b, c)));
                CHECK(gf16_mul(a, b ^ c) == (gf16_mul(a, b) ^ gf16_mul(a, c)));
            }
        }
    for (int a = 1; a < 16; ++a) {
        CHECK(gf16_mul(static_cast<std::uint8_t>(a), gf16_div(1, static_cast<std::uint8_t>(a))) == 1);
    }
    CHECK_THROWS_AS(gf16_div(3, 0), Error);
}

TEST_CASE("encode is systematic and rows are codewords") {
    CHECK_THROWS_AS(rs_encode_unit(Bytes(100)), Error);

    Bytes zeros(EccConfig::unit_bytes, 0);
    UnitMatrix zunit = rs_encode_unit(zeros);
    for (int c = 0; c < EccConfig::n; ++c)
        for (auto s : zunit.columns[c]) CHECK(s == 0);

    SplitMix64 rng(21);
    Bytes data = random_unit_bytes(rng);
    UnitMatrix unit = rs_encode_unit(data);

    // Data columns hold the input column-major (nibbles, high first).
    for (int c = 0; c < EccConfig::k; ++c)
        for (int b = 0; b < 24; ++b) {
            CHECK(unit.columns[c][2 * b] == data[c * 24 + b] >> 4);
            CHECK(unit.columns[c][2 * b + 1] == (data[c * 24 + b] & 0xF));
        }

    // Every row has zero syndromes at alpha^1..alpha^4.
    for (int r = 0; r < EccConfig::symbols_per_strand; ++r) {
        std::array<std::uint8_t, 15> row{};
        for (int c = 0; c < EccConfig::n; ++c) row[14 - c] = unit.columns[c][r];
        for (int j = 1; j <= 4; ++j) CHECK(eval_row_at(row, j) == 0);
    }

    CHECK(rs_decode_unit(all_columns(unit)) == data);
}

TEST_CASE("all four-column erasure patterns recover") {
    SplitMix64 rng(22);
    Bytes data = random_unit_bytes(rng);
    UnitMatrix unit = rs_encode_unit(data);

    int patterns = 0;
    for (int a = 0; a < 15; ++a)
        for (int b = a + 1; b < 15; ++b)
            for (int c = b + 1; c < 15; ++c)
                for (int d = c + 1; d < 15; ++d) {
                    std::vector<ReceivedColumn> cols;
                    for (int col = 0; col < EccConfig::n; ++col)
                        if (col != a && col != b && col != c && col != d)
                            cols.push_back({col, unit.columns[col]});
                    CHECK(rs_decode_unit(cols) == data);
                    ++patterns;
                }
    CHECK(patterns == 1365);
}

TEST_CASE("two corrupted columns recover, three report failure") {
    SplitMix64 rng(23);
    Bytes data = random_unit_bytes(rng);
    UnitMatrix unit = rs_encode_unit(data);

    auto corrupt = [&](const std::vector<int>& cols) {
        UnitMatrix bad = unit;
        for (int c : cols)
            for (auto& s : bad.columns[c])
                s = static_cast<std::uint8_t>((s + 1 + rng.next_below(15)) % 16);
        return bad;
    };

    for (int trial = 0; trial < 30; ++trial) {
        int a = static_cast<int>(rng.next_below(15));
        int b = static_cast<int>(rng.next_below(15));
        if (a == b) b = (b + 1) % 15;
        UnitMatrix bad = corrupt({a, b});
        CHECK(rs_decode_unit(all_columns(bad)) == data);
    }

    for (int trial = 0; trial < 10; ++trial) {
        int a = static_cast<int>(rng.next_below(15));
        int b = (a + 1 + static_cast<int>(rng.next_below(14))) % 15;
        int c = 0;
        while (c == a || c == b) ++c;
        UnitMatrix bad = corrupt({a, b, c});
        CHECK_THROWS_AS(rs_decode_unit(all_columns(bad)), UnitDecodeError);
    }
}

TEST_CASE("one erased and one corrupted column recover together") {
    SplitMix64 rng(24);
    Bytes data = random_unit_bytes(rng);
    UnitMatrix unit = rs_encode_unit(data);
    for (int erased = 0; erased < 15; ++erased) {
        int bad = (erased + 7) % 15;
        std::vector<ReceivedColumn> cols;
        for (int c = 0; c < EccConfig::n; ++c) {
            if (c == erased) continue;
            ReceivedColumn rc{c, unit.columns[c]};
            if (c == bad)
                for (auto& s : rc.symbols) s = static_cast<std::uint8_t>((s + 3) % 16);
            cols.push_back(rc);
        }
        CHECK(rs_decode_unit(cols) == data);
    }
}

TEST_CASE("fewer than k columns is a reported failure, never silence") {
    SplitMix64 rng(25);
    Bytes data = random_unit_bytes(rng);
    UnitMatrix unit = rs_encode_unit(data);
    std::vector<ReceivedColumn> cols;
    for (int c = 0; c < 10; ++c) cols.push_back({c, unit.columns[c]});
    CHECK_THROWS_AS(rs_decode_unit(cols), UnitDecodeError);
}

TEST_CASE("row decode reports failed rows") {
    SplitMix64 rng(26);
    Bytes data = random_unit_bytes(rng);
    UnitMatrix unit = rs_encode_unit(data);
    UnitMatrix bad = unit;
    for (int c : {1, 4, 9})
        for (auto& s : bad.columns[c]) s = static_cast<std::uint8_t>((s + 5) % 16);
    try {
        rs_decode_unit(all_columns(bad));
        FAIL("expected UnitDecodeError");
    } catch (const UnitDecodeError& e) {
        CHECK_FALSE(e.failed_rows.empty());
        for (int r : e.failed_rows) {
            CHECK(r >= 0);
            CHECK(r < EccConfig::symbols_per_strand);
        }
    }
}
