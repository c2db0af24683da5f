#include "dnastore/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dnastore/errors.hpp"

namespace dnastore {

namespace {

constexpr int kUsableBases = 110; // 150-base strand minus two 20-base primers
constexpr double kStrandLen = 150.0;

void check_range(int L) {
    if (L < 0 || L > kUsableBases)
        fail(ErrorCode::invalid_argument,
             "index length must be 0.." + std::to_string(kUsableBases) + ", got " + std::to_string(L));
}

double payload_bits_per_strand(int L) { return L == kUsableBases ? 1.0 : 2.0 * (kUsableBases - L); }

// Little-endian decimal digits; enough for 4^110.
using Digits = std::vector<std::uint8_t>;

Digits from_int(unsigned v) {
    Digits d;
    if (v == 0) d.push_back(0);
    while (v > 0) {
        d.push_back(static_cast<std::uint8_t>(v % 10));
        v /= 10;
    }
    return d;
}

void mul_small(Digits& d, unsigned m) {
    unsigned carry = 0;
    for (auto& digit : d) {
        unsigned v = digit * m + carry;
        digit = static_cast<std::uint8_t>(v % 10);
        carry = v / 10;
    }
    while (carry > 0) {
        d.push_back(static_cast<std::uint8_t>(carry % 10));
        carry /= 10;
    }
}

unsigned div_small(Digits& d, unsigned m) { // returns remainder
    unsigned rem = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
        unsigned v = rem * 10 + *it;
        *it = static_cast<std::uint8_t>(v / m);
        rem = v % m;
    }
    while (d.size() > 1 && d.back() == 0) d.pop_back();
    return rem;
}

std::string render(const Digits& d) {
    std::string s;
    s.reserve(d.size());
    for (auto it = d.rbegin(); it != d.rend(); ++it) s.push_back(static_cast<char>('0' + *it));
    return s;
}

Digits capacity_bits_digits(int L) {
    Digits bits = L == kUsableBases ? from_int(1) : from_int(2u * static_cast<unsigned>(kUsableBases - L));
    for (int i = 0; i < L; ++i) mul_small(bits, 4);
    return bits;
}

} // namespace

CapacityPoint capacity_density(int index_len) {
    check_range(index_len);
    CapacityPoint p;
    p.index_len = index_len;
    double bits_per_strand = payload_bits_per_strand(index_len);
    p.capacity_bytes = std::ldexp(bits_per_strand / 8.0, 2 * index_len); // 4^L strands
    p.density_bits_per_base = bits_per_strand / kStrandLen;
    return p;
}

std::string capacity_bits_decimal(int index_len) {
    check_range(index_len);
    return render(capacity_bits_digits(index_len));
}

std::string capacity_bytes_decimal(int index_len) {
    check_range(index_len);
    Digits bits = capacity_bits_digits(index_len);
    unsigned rem = div_small(bits, 8);
    std::string s = render(bits);
    if (rem > 0) {
        // Exact: rem/8 expands to at most three decimal digits (rem * 125).
        std::string frac = std::to_string(rem * 125u);
        frac.insert(frac.begin(), 3 - frac.size(), '0');
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        s += "." + frac;
    }
    return s;
}

} // namespace dnastore
