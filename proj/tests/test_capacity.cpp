#include "doctest.h"

#include <cmath>
#include <string>

#include "dnastore/capacity.hpp"
#include "dnastore/errors.hpp"

using namespace dnastore;

namespace {

// Independent oracle: decimal doubling.
std::string decimal_power_of_two(int exponent) {
    std::string digits = "1";
    for (int i = 0; i < exponent; ++i) {
        int carry = 0;
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            int v = (*it - '0') * 2 + carry;
            *it = static_cast<char>('0' + v % 10);
            carry = v / 10;
        }
        if (carry) digits.insert(digits.begin(), static_cast<char>('0' + carry));
    }
    return digits;
}

} // namespace

TEST_CASE("capacity endpoints") {
    // L = 110: one presence bit per address, 4^110 bits = 2^217 bytes.
    CapacityPoint top = capacity_density(110);
    CHECK(top.capacity_bytes == std::ldexp(1.0, 217));
    CHECK(top.density_bits_per_base == doctest::Approx(1.0 / 150.0));
    CHECK(capacity_bytes_decimal(110) == decimal_power_of_two(217));
    CHECK(capacity_bits_decimal(110) == decimal_power_of_two(220));

    // L = 0: a single strand of 220 payload bits.
    CapacityPoint bottom = capacity_density(0);
    CHECK(bottom.capacity_bytes == doctest::Approx(27.5));
    CHECK(bottom.density_bits_per_base == doctest::Approx(220.0 / 150.0));
    CHECK(capacity_bytes_decimal(0) == "27.5");
    CHECK(capacity_bits_decimal(0) == "220");

    // L = 10: 4^10 strands of 200 bits = 26,214,400 bytes.
    CapacityPoint mid = capacity_density(10);
    double oracle = std::pow(4.0, 10) * 200.0 / 8.0;
    CHECK(mid.capacity_bytes == doctest::Approx(oracle));
    CHECK(oracle == doctest::Approx(26214400.0));
    CHECK(capacity_bytes_decimal(10) == "26214400");

    CHECK_THROWS_AS(capacity_density(-1), Error);
    CHECK_THROWS_AS(capacity_density(111), Error);
}

TEST_CASE("capacity grows and density falls with the index length") {
    double prev_capacity = 0.0;
    double prev_density = 1e9;
    for (int L = 0; L <= 110; ++L) {
        CapacityPoint p = capacity_density(L);
        CHECK(p.capacity_bytes > prev_capacity);
        CHECK(p.density_bits_per_base < prev_density);
        prev_capacity = p.capacity_bytes;
        prev_density = p.density_bits_per_base;
    }
}

TEST_CASE("decimal rendering matches the double where doubles are exact") {
    for (int L : {1, 2, 3, 5, 8, 10, 15, 20}) {
        CapacityPoint p = capacity_density(L);
        CHECK(std::stod(capacity_bytes_decimal(L)) == doctest::Approx(p.capacity_bytes));
    }
}
