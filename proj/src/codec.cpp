#include "dnastore/codec.hpp"

#include "dnastore/rng.hpp"

namespace dnastore {

DnaString map_bits_to_bases(const Bytes& data) {
    DnaString out;
    for (std::uint8_t byte : data) {
        for (int shift = 6; shift >= 0; shift -= 2)
            out.push_back(static_cast<Base>((byte >> shift) & 0x3));
    }
    return out;
}

Bytes map_bases_to_bits(const DnaString& s) {
    if (s.size() % 4 != 0)
        fail(ErrorCode::malformed_payload, "base string length " + std::to_string(s.size()) + " is not a multiple of 4");
    Bytes out;
    out.reserve(s.size() / 4);
    for (std::size_t i = 0; i < s.size(); i += 4) {
        std::uint8_t byte = 0;
        for (std::size_t k = 0; k < 4; ++k)
            byte = static_cast<std::uint8_t>((byte << 2) | static_cast<std::uint8_t>(s.base(i + k)));
        out.push_back(byte);
    }
    return out;
}

Bytes keystream_bytes(std::uint64_t seed, std::size_t offset, std::size_t len) {
    Bytes out;
    out.reserve(len);
    std::size_t block = offset / 8;
    std::size_t within = offset % 8;
    while (out.size() < len) {
        std::uint64_t word = splitmix64_mix(seed + (static_cast<std::uint64_t>(block) + 1) * kSplitMix64Gamma);
        for (std::size_t k = within; k < 8 && out.size() < len; ++k)
            out.push_back(static_cast<std::uint8_t>(word >> (8 * k)));
        within = 0;
        ++block;
    }
    return out;
}

Bytes randomize(const Bytes& data, std::uint64_t seed) {
    Bytes ks = keystream_bytes(seed, 0, data.size());
    Bytes out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out[i] = data[i] ^ ks[i];
    return out;
}

} // namespace dnastore
