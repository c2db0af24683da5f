#ifndef DNASTORE_ECC_HPP
#define DNASTORE_ECC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dnastore/codec.hpp"
#include "dnastore/errors.hpp"

namespace dnastore {

// GF(2^4) with reduction polynomial x^4 + x + 1 and generator alpha = 0x2.
// This representation is frozen; stored pools depend on it.
std::uint8_t gf16_mul(std::uint8_t a, std::uint8_t b);
std::uint8_t gf16_div(std::uint8_t a, std::uint8_t b);
std::uint8_t gf16_pow_alpha(int exponent); // alpha^exponent, exponent may be negative
inline std::uint8_t gf16_add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

/// Code geometry of the outer code. One codeword is a row across all 15
/// strands of an encoding unit; 48 rows cover a 96-base payload per strand.
struct EccConfig {
    static constexpr int n = 15;                 // total columns (2^4 - 1)
    static constexpr int k = 11;                 // data columns
    static constexpr int parity = n - k;         // 4 parity columns
    static constexpr int symbols_per_strand = 48; // 96 bases = 48 nibbles
    static constexpr int unit_bytes = k * symbols_per_strand / 2; // 264
};

using ColumnSymbols = std::array<std::uint8_t, EccConfig::symbols_per_strand>;

/// 15 strand payloads of one encoding unit. Columns 0..10 carry data
/// (column-major, 24 bytes each), columns 11..14 carry parity; every row
/// is an RS(15,11) codeword.
struct UnitMatrix {
    std::array<ColumnSymbols, EccConfig::n> columns{};
};

class UnitDecodeError : public Error {
public:
    UnitDecodeError(std::string what, std::vector<int> rows)
        : Error(ErrorCode::decode_failure, std::move(what)), failed_rows(std::move(rows)) {}
    std::vector<int> failed_rows;
};

/// Systematic encode of exactly 264 bytes (256 payload + 8 padding supplied
/// by the caller). The first 24 bytes fill column 0, the next 24 column 1,
/// and so on; parity is computed row-wise.
UnitMatrix rs_encode_unit(const Bytes& data);

struct ReceivedColumn {
    int index = 0; // 0..14
    ColumnSymbols symbols{};
};

/// Decode from the columns that survived; absent columns are treated as
/// erasures. Corrects any row pattern with 2*errors + erasures <= 4 and
/// throws UnitDecodeError (carrying the failed row indices) beyond that.
/// Requires at least k = 11 columns.
Bytes rs_decode_unit(const std::vector<ReceivedColumn>& columns);

/// Single-row primitives, exposed for verification.
/// Positions are codeword coefficient indices; column c sits at position 14 - c.
std::array<std::uint8_t, EccConfig::n> rs_encode_row(const std::array<std::uint8_t, EccConfig::k>& data);
std::optional<std::array<std::uint8_t, EccConfig::n>>
rs_decode_row(std::array<std::uint8_t, EccConfig::n> received, const std::vector<int>& erased_positions);

} // namespace dnastore

#endif
