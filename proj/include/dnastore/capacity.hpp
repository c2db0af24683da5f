#ifndef DNASTORE_CAPACITY_HPP
#define DNASTORE_CAPACITY_HPP

#include <string>

namespace dnastore {

/// Capacity/density of a 150-base-strand partition (40 bases of primers,
/// 110 usable) as a function of the index length L in bases.
/// capacity_bits = 4^L * 2*(110 - L) for L < 110; at L = 110 every address
/// carries one presence bit, so capacity_bits = 4^110. Density is the
/// per-strand bit count over the 150 synthesized bases.
struct CapacityPoint {
    int index_len = 0;
    double capacity_bytes = 0.0;
    double density_bits_per_base = 0.0;
};

CapacityPoint capacity_density(int index_len);

/// Exact decimal renderings (doubles cannot hold 4^110).
std::string capacity_bits_decimal(int index_len);
std::string capacity_bytes_decimal(int index_len); // fractional only at L = 0 (27.5)

} // namespace dnastore

#endif
