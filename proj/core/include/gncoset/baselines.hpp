#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gncoset/sc_engine.hpp"

namespace gncoset {

struct SclConfig {
    int list_size = 8;
};

struct SclResult {
    BitVector u_hat;  // u^N of the selected path
    double pm = 0.0;
    bool crc_pass = true;  // false when a CRC is attached and no path satisfied it
    std::int64_t node_visits = 0;
};

// Successive cancellation list decoding with plain per-path memories.
// Output is the smallest-metric leaf; with a CRC attached, the smallest-metric
// leaf passing the check, falling back to the overall argmin.
class SclDecoder {
  public:
    SclDecoder(const CodeSpec& spec, SclConfig cfg);

    SclResult decode(std::span<const double> llr);

  private:
    struct PathState {
        ButterflyMemory mem;
        BitVector u;
        double pm = 0.0;
        explicit PathState(int n) : mem(n), u(1 << n) {}
    };

    const CodeSpec* spec_;
    int list_size_;
    std::vector<PathState> slots_;
    std::vector<int> active_;  // slot ids in path order
    std::vector<int> free_;
};

struct DscfConfig {
    int t_max = 10;
    double alpha = 0.45;
    int flip_order_max = 3;
};

struct DscfResult {
    BitVector u_hat;  // initial SC estimate when rejected
    bool accepted = false;
    int attempts = 0;  // re-decodes beyond the initial pass
    std::int64_t node_visits = 0;
};

// (1/alpha) * log(1 + exp(-alpha * x))
double softplus_scaled(double x, double alpha);

// Flip-set reliability: sum of flipped |llr| plus the scaled softplus penalty
// over all information phases up to the largest flipped index.
double dscf_metric(const std::vector<int>& flips, std::span<const double> abs_llr,
                   const CodeSpec& spec, double alpha);

// Single-flip metric Q(i).
double scf_metric_q1(int i, std::span<const double> abs_llr, const CodeSpec& spec, double alpha);

// Dynamic SC-flip with an outer CRC: repeated SC passes with progressively
// constructed flip sets ordered by the metric above, until the CRC passes or
// t_max attempts are spent.
class DscfDecoder {
  public:
    DscfDecoder(const CodeSpec& spec, DscfConfig cfg);

    DscfResult decode(std::span<const double> llr);

  private:
    const CodeSpec* spec_;
    DscfConfig cfg_;
    Workspace ws_;
    std::vector<double> abs_llr_;  // |decision llr| per 1-based phase of the last pass
};

struct MlResult {
    BitVector u;  // u^N
    double pm = 0.0;
};

// Exhaustive minimum-metric search over all 2^K information words, applying
// the same per-phase metric as the decoders; ties resolved toward the
// lexicographically smallest information word. Refuses K > 20.
MlResult brute_force_ml(Workspace& ws, const CodeSpec& spec, std::span<const double> llr);

}  // namespace gncoset
