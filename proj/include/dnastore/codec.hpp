#ifndef DNASTORE_CODEC_HPP
#define DNASTORE_CODEC_HPP

#include <cstdint>
#include <vector>

#include "dnastore/dna.hpp"

namespace dnastore {

using Bytes = std::vector<std::uint8_t>;

/// Two bits per base, most-significant pair of each byte first:
/// 00->A, 01->C, 10->G, 11->T. Byte 0x1B maps to "ACGT".
DnaString map_bits_to_bases(const Bytes& data);

/// Inverse of map_bits_to_bases. The length of `s` must be divisible by 4.
Bytes map_bases_to_bits(const DnaString& s);

/// XOR the data with the SplitMix64 counter keystream for `seed` (see
/// rng.hpp for the frozen stream definition). Involution: applying it
/// twice with the same seed returns the input.
Bytes randomize(const Bytes& data, std::uint64_t seed);

/// Keystream bytes [offset, offset + len) of the randomizer stream.
Bytes keystream_bytes(std::uint64_t seed, std::size_t offset, std::size_t len);

} // namespace dnastore

#endif
