#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace gncoset {

// Self-contained generators so that simulation streams are reproducible
// across compilers and standard libraries (std::normal_distribution is not
// portable between implementations).

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Derives a child seed; used to key per-frame substreams as
// mix(mix(master, point_index), frame_index).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 sm{a ^ (b + 0x9e3779b97f4a7c15ULL)};
    std::uint64_t x = sm.next();
    return x ^ sm.next();
}

class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    std::uint32_t next_bit() { return static_cast<std::uint32_t>(next() & 1ULL); }

    // uniform on [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform on (0,1], safe as log() argument
    double uniform_pos() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    // standard normal via Box-Muller, second value cached
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Substream for one simulated frame: (seed, point, frame) fully determines it.
inline Xoshiro256pp frame_rng(std::uint64_t master_seed, std::uint64_t point_index,
                              std::uint64_t frame_index) {
    return Xoshiro256pp(mix_seed(mix_seed(master_seed, point_index), frame_index));
}

}  // namespace gncoset
