#pragma once

#include <span>
#include <vector>

#include "gncoset/crc.hpp"
#include "gncoset/rng.hpp"

namespace gncoset {

// sigma for a biAWGN channel at the given Eb/N0 and code rate:
// sigma^2 = 1 / (2 * rate * 10^(ebn0_db/10)).
double ebn0_to_sigma(double ebn0_db, double rate);

struct ChannelParams {
    double ebn0_db = 0.0;
    double rate = 0.5;
    double sigma = 1.0;
    std::uint64_t seed = 0;

    static ChannelParams from_ebn0(double ebn0_db, double rate, std::uint64_t seed = 0);
};

// y_i = (1 - 2 c_i) + sigma * z_i, returned as channel LLRs l_i = 2 y_i / sigma^2.
void transmit_with_noise(std::span<const std::uint8_t> codeword, double sigma,
                         std::span<const double> noise, std::span<double> llr_out);

std::vector<double> transmit(std::span<const std::uint8_t> codeword, double sigma,
                             Xoshiro256pp& rng);

}  // namespace gncoset
