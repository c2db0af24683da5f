#include "dnastore/ecc.hpp"

#include <algorithm>

namespace dnastore {

namespace {

// alpha^i for i = 0..14, alpha = x, reduction by x^4 + x + 1 (0x13).
constexpr std::array<std::uint8_t, 15> build_exp() {
    std::array<std::uint8_t, 15> e{};
    std::uint8_t v = 1;
    for (int i = 0; i < 15; ++i) {
        e[i] = v;
        v = static_cast<std::uint8_t>(v << 1);
        if (v & 0x10) v ^= 0x13;
    }
    return e;
}

constexpr std::array<std::uint8_t, 15> kExp = build_exp();

constexpr std::array<std::uint8_t, 16> build_log() {
    std::array<std::uint8_t, 16> l{};
    for (int i = 0; i < 15; ++i) l[kExp[i]] = static_cast<std::uint8_t>(i);
    return l;
}

constexpr std::array<std::uint8_t, 16> kLog = build_log();

constexpr int kRoots = EccConfig::parity; // 4 syndromes / parity symbols

using Poly = std::array<std::uint8_t, kRoots + 1>; // coefficients, poly[i] = coeff of x^i

int poly_degree(const Poly& p) {
    for (int i = kRoots; i >= 0; --i)
        if (p[i]) return i;
    return 0;
}

std::uint8_t poly_eval(const Poly& p, std::uint8_t x) {
    std::uint8_t acc = 0;
    for (int i = kRoots; i >= 0; --i)
        acc = static_cast<std::uint8_t>(gf16_mul(acc, x) ^ p[i]);
    return acc;
}

// g(x) = (x - alpha)(x - alpha^2)(x - alpha^3)(x - alpha^4)
Poly generator_poly() {
    Poly g{};
    g[0] = 1;
    for (int j = 1; j <= kRoots; ++j) {
        Poly next{};
        std::uint8_t root = kExp[j];
        for (int i = kRoots; i >= 1; --i)
            next[i] = static_cast<std::uint8_t>(g[i - 1] ^ gf16_mul(g[i], root));
        next[0] = gf16_mul(g[0], root);
        g = next;
    }
    return g;
}

const Poly kGen = generator_poly();

} // namespace

std::uint8_t gf16_mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    return kExp[(kLog[a] + kLog[b]) % 15];
}

std::uint8_t gf16_div(std::uint8_t a, std::uint8_t b) {
    if (b == 0) fail(ErrorCode::invalid_argument, "gf16 division by zero");
    if (a == 0) return 0;
    return kExp[(kLog[a] + 15 - kLog[b]) % 15];
}

std::uint8_t gf16_pow_alpha(int exponent) {
    int e = exponent % 15;
    if (e < 0) e += 15;
    return kExp[e];
}

std::array<std::uint8_t, EccConfig::n> rs_encode_row(const std::array<std::uint8_t, EccConfig::k>& data) {
    // c(x) = m(x) x^4 + (m(x) x^4 mod g); data symbol d sits at x^(14-d),
    // parity at x^3..x^0. LFSR division by g.
    std::array<std::uint8_t, kRoots> rem{};
    for (int d = 0; d < EccConfig::k; ++d) {
        std::uint8_t feedback = static_cast<std::uint8_t>(data[d] ^ rem[kRoots - 1]);
        for (int i = kRoots - 1; i >= 1; --i)
            rem[i] = static_cast<std::uint8_t>(rem[i - 1] ^ gf16_mul(feedback, kGen[i]));
        rem[0] = gf16_mul(feedback, kGen[0]);
    }
    std::array<std::uint8_t, EccConfig::n> out{};
    for (int d = 0; d < EccConfig::k; ++d) out[14 - d] = data[d];
    for (int i = 0; i < kRoots; ++i) out[i] = rem[i];
    return out;
}

std::optional<std::array<std::uint8_t, EccConfig::n>>
rs_decode_row(std::array<std::uint8_t, EccConfig::n> received, const std::vector<int>& erased_positions) {
    const int f = static_cast<int>(erased_positions.size());
    if (f > kRoots) return std::nullopt;

    std::array<std::uint8_t, kRoots> synd{};
    bool clean = true;
    for (int j = 0; j < kRoots; ++j) {
        std::uint8_t s = 0;
        for (int p = 0; p < EccConfig::n; ++p)
            if (received[p]) s ^= gf16_mul(received[p], gf16_pow_alpha(p * (j + 1)));
        synd[j] = s;
        if (s) clean = false;
    }
    if (clean && f == 0) return received;

    // Erasure locator Gamma(x) = prod (1 + alpha^p x); Berlekamp-Massey is
    // seeded with it and run over the remaining syndromes.
    Poly lambda{};
    lambda[0] = 1;
    for (int p : erased_positions) {
        Poly next{};
        for (int i = 0; i <= kRoots; ++i) {
            next[i] = lambda[i];
            if (i > 0) next[i] = static_cast<std::uint8_t>(next[i] ^ gf16_mul(lambda[i - 1], gf16_pow_alpha(p)));
        }
        lambda = next;
    }

    Poly b = lambda;
    int el = f;
    for (int r = f + 1; r <= kRoots; ++r) {
        std::uint8_t discr = 0;
        for (int i = 0; i < r; ++i)
            if (lambda[i]) discr ^= gf16_mul(lambda[i], synd[r - i - 1]);
        if (discr == 0) {
            for (int i = kRoots; i >= 1; --i) b[i] = b[i - 1];
            b[0] = 0;
        } else {
            Poly t{};
            t[0] = lambda[0];
            for (int i = 0; i < kRoots; ++i)
                t[i + 1] = static_cast<std::uint8_t>(lambda[i + 1] ^ gf16_mul(discr, b[i]));
            if (2 * el <= r + f - 1) {
                el = r + f - el;
                for (int i = 0; i <= kRoots; ++i) b[i] = gf16_div(lambda[i], discr);
            } else {
                for (int i = kRoots; i >= 1; --i) b[i] = b[i - 1];
                b[0] = 0;
            }
            lambda = t;
        }
    }

    const int deg = poly_degree(lambda);
    std::vector<int> positions;
    for (int p = 0; p < EccConfig::n; ++p)
        if (poly_eval(lambda, gf16_pow_alpha(-p)) == 0) positions.push_back(p);
    if (static_cast<int>(positions.size()) != deg) return std::nullopt;

    // Omega(x) = S(x) Lambda(x) mod x^4, S(x) = s0 + s1 x + s2 x^2 + s3 x^3.
    Poly omega{};
    for (int i = 0; i < kRoots; ++i) {
        std::uint8_t acc = 0;
        for (int j = 0; j <= i; ++j) acc ^= gf16_mul(synd[i - j], lambda[j]);
        omega[i] = acc;
    }

    for (int p : positions) {
        std::uint8_t xinv = gf16_pow_alpha(-p);
        // Lambda'(x): odd-degree terms only in characteristic 2.
        std::uint8_t denom = 0;
        for (int i = 1; i <= kRoots; i += 2)
            if (lambda[i]) denom ^= gf16_mul(lambda[i], gf16_pow_alpha(-p * (i - 1)));
        if (denom == 0) return std::nullopt;
        std::uint8_t num = 0;
        for (int i = kRoots - 1; i >= 0; --i)
            num = static_cast<std::uint8_t>(gf16_mul(num, xinv) ^ omega[i]);
        received[p] ^= gf16_div(num, denom);
    }

    for (int j = 0; j < kRoots; ++j) {
        std::uint8_t s = 0;
        for (int p = 0; p < EccConfig::n; ++p)
            if (received[p]) s ^= gf16_mul(received[p], gf16_pow_alpha(p * (j + 1)));
        if (s) return std::nullopt;
    }
    return received;
}

UnitMatrix rs_encode_unit(const Bytes& data) {
    if (data.size() != EccConfig::unit_bytes)
        fail(ErrorCode::invalid_argument,
             "encoding unit needs exactly 264 bytes, got " + std::to_string(data.size()));
    UnitMatrix unit;
    for (int c = 0; c < EccConfig::k; ++c) {
        for (int b = 0; b < 24; ++b) {
            std::uint8_t byte = data[static_cast<std::size_t>(c) * 24 + b];
            unit.columns[c][2 * b] = byte >> 4;
            unit.columns[c][2 * b + 1] = byte & 0xF;
        }
    }
    for (int r = 0; r < EccConfig::symbols_per_strand; ++r) {
        std::array<std::uint8_t, EccConfig::k> row{};
        for (int c = 0; c < EccConfig::k; ++c) row[c] = unit.columns[c][r];
        auto code = rs_encode_row(row);
        for (int c = EccConfig::k; c < EccConfig::n; ++c)
            unit.columns[c][r] = code[14 - c];
    }
    return unit;
}

Bytes rs_decode_unit(const std::vector<ReceivedColumn>& columns) {
    std::array<const ColumnSymbols*, EccConfig::n> present{};
    int count = 0;
    for (const auto& col : columns) {
        if (col.index < 0 || col.index >= EccConfig::n)
            fail(ErrorCode::invalid_argument, "column index out of range: " + std::to_string(col.index));
        if (present[col.index])
            fail(ErrorCode::invalid_argument, "duplicate column index: " + std::to_string(col.index));
        present[col.index] = &col.symbols;
        ++count;
    }
    if (count < EccConfig::k)
        throw UnitDecodeError("only " + std::to_string(count) + " of 15 columns present; at least 11 required", {});

    std::vector<int> erased_positions;
    for (int c = 0; c < EccConfig::n; ++c)
        if (!present[c]) erased_positions.push_back(14 - c);

    UnitMatrix unit;
    std::vector<int> failed_rows;
    for (int r = 0; r < EccConfig::symbols_per_strand; ++r) {
        std::array<std::uint8_t, EccConfig::n> word{};
        for (int c = 0; c < EccConfig::n; ++c)
            if (present[c]) word[14 - c] = (*present[c])[r];
        auto fixed = rs_decode_row(word, erased_positions);
        if (!fixed) {
            failed_rows.push_back(r);
            continue;
        }
        for (int c = 0; c < EccConfig::n; ++c) unit.columns[c][r] = (*fixed)[14 - c];
    }
    if (!failed_rows.empty()) {
        std::string what = "uncorrectable rows:";
        for (int r : failed_rows) what += " " + std::to_string(r);
        throw UnitDecodeError(what, failed_rows);
    }

    Bytes data(EccConfig::unit_bytes);
    for (int c = 0; c < EccConfig::k; ++c)
        for (int b = 0; b < 24; ++b)
            data[static_cast<std::size_t>(c) * 24 + b] =
                static_cast<std::uint8_t>((unit.columns[c][2 * b] << 4) | unit.columns[c][2 * b + 1]);
    return data;
}

} // namespace dnastore
