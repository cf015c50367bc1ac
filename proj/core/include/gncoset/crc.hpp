#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace gncoset {

using BitVector = std::vector<std::uint8_t>;

// Generator polynomial of a CRC, coefficients highest degree first.
// "11100101" is g(x) = x^7 + x^6 + x^5 + x^2 + 1.
struct CrcSpec {
    int degree = 0;
    BitVector taps;  // degree + 1 coefficients, taps.front() == taps.back() == 1

    static CrcSpec from_string(std::string_view bits);
    std::string to_string() const;

    // remainder of x^degree * m(x) mod g(x), MSB first
    BitVector remainder(const BitVector& payload) const;

    // payload with the CRC remainder appended
    BitVector append(const BitVector& payload) const;

    // true iff the word (payload followed by CRC bits) is divisible by g
    bool check(const BitVector& payload_and_crc) const;

    bool operator==(const CrcSpec&) const = default;
};

}  // namespace gncoset
