#include "gncoset/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace gncoset {

double ebn0_to_sigma(double ebn0_db, double rate) {
    if (!(rate > 0.0) || rate > 1.0) throw std::invalid_argument("rate must lie in (0,1]");
    return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
}

ChannelParams ChannelParams::from_ebn0(double ebn0_db, double rate, std::uint64_t seed) {
    ChannelParams p;
    p.ebn0_db = ebn0_db;
    p.rate = rate;
    p.sigma = ebn0_to_sigma(ebn0_db, rate);
    p.seed = seed;
    return p;
}

void transmit_with_noise(std::span<const std::uint8_t> codeword, double sigma,
                         std::span<const double> noise, std::span<double> llr_out) {
    double scale = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        double y = (codeword[i] ? -1.0 : 1.0) + sigma * noise[i];
        llr_out[i] = scale * y;
    }
}

std::vector<double> transmit(std::span<const std::uint8_t> codeword, double sigma,
                             Xoshiro256pp& rng) {
    std::vector<double> noise(codeword.size());
    for (auto& z : noise) z = rng.gaussian();
    std::vector<double> llr(codeword.size());
    transmit_with_noise(codeword, sigma, noise, llr);
    return llr;
}

}  // namespace gncoset
