#include "gncoset/crc.hpp"

#include <stdexcept>
#include <string>

namespace gncoset {

CrcSpec CrcSpec::from_string(std::string_view bits) {
    CrcSpec c;
    c.taps.reserve(bits.size());
    for (char ch : bits) {
        if (ch == '0' || ch == '1')
            c.taps.push_back(static_cast<std::uint8_t>(ch - '0'));
        else
            throw std::invalid_argument("crc taps must be a binary string");
    }
    if (c.taps.size() < 2 || c.taps.front() != 1 || c.taps.back() != 1)
        throw std::invalid_argument("crc generator needs leading and trailing 1 coefficients");
    c.degree = static_cast<int>(c.taps.size()) - 1;
    return c;
}

std::string CrcSpec::to_string() const {
    std::string s;
    for (auto b : taps) s.push_back(b ? '1' : '0');
    return s;
}

BitVector CrcSpec::remainder(const BitVector& payload) const {
    // LFSR division; reg[0] holds the coefficient of x^(degree-1)
    BitVector reg(degree, 0);
    for (std::uint8_t bit : payload) {
        std::uint8_t feedback = static_cast<std::uint8_t>(bit ^ reg[0]);
        for (int k = 0; k + 1 < degree; ++k) reg[k] = reg[k + 1];
        reg[degree - 1] = 0;
        if (feedback)
            for (int k = 1; k <= degree; ++k) reg[k - 1] ^= taps[k];
    }
    return reg;
}

BitVector CrcSpec::append(const BitVector& payload) const {
    BitVector out = payload;
    BitVector rem = remainder(payload);
    out.insert(out.end(), rem.begin(), rem.end());
    return out;
}

bool CrcSpec::check(const BitVector& payload_and_crc) const {
    BitVector rem = remainder(payload_and_crc);
    for (auto b : rem)
        if (b) return false;
    return true;
}

}  // namespace gncoset
