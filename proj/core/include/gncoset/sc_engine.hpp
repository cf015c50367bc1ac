#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gncoset/code_spec.hpp"

namespace gncoset {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// min-sum check-node update, sign(0) treated as +1
inline double f_minsum(double a, double b) {
    double m = std::min(std::abs(a), std::abs(b));
    return ((a < 0.0) != (b < 0.0)) ? -m : m;
}

// exact check-node update 2 atanh(tanh(a/2) tanh(b/2)) in log form
inline double f_exact(double a, double b) {
    double lo = std::min(std::abs(a), std::abs(b));
    double hi = std::max(std::abs(a), std::abs(b));
    double mag = lo + std::log1p(std::exp(-(lo + hi))) - std::log1p(std::exp(-(hi - lo)));
    return ((a < 0.0) != (b < 0.0)) ? -mag : mag;
}

inline double g_update(double a, double b, std::uint8_t s) { return s ? b - a : b + a; }

inline std::uint8_t hard_dec(double l) { return l >= 0.0 ? 0 : 1; }

// min-sum path metric update: unchanged on agreement, +|l| on disagreement
inline double calc_pm(double m, std::uint8_t v, double l) {
    return v == hard_dec(l) ? m : m + std::abs(l);
}

// Full (log2 N + 1) x N soft/hard butterfly arrays. Unlike the compacted
// per-layer storage of list decoders, every (phase, branch) slot is kept so
// a decode can resume from any phase whose prefix is still in memory.
//
// Layer t in [0, n]; t = 0 holds the channel LLRs. Layer t has 2^t phases of
// N/2^t branches each, at row offset t*N + phase*(N>>t).
class ButterflyMemory {
  public:
    explicit ButterflyMemory(int n)
        : n_(n), size_(1 << n), llr_((n + 1) * (1 << n)), csums_((n + 1) * (1 << n)) {}

    int block_length() const { return size_; }
    int stages() const { return n_; }

    // min-sum by default; exact check-node updates on request
    void set_exact_checks(bool exact) { exact_ = exact; }
    bool exact_checks() const { return exact_; }

    void load_channel(std::span<const double> chan) {
        for (int i = 0; i < size_; ++i) llr_[i] = chan[i];
    }

    // Decision LLR for the 0-based phase; recomputes exactly the layers whose
    // inputs changed since the last phase this column was valid for. Requires
    // hard decisions committed for a consistent prefix of length >= phase.
    double decision_llr(int phase) {
        calc_l(n_, phase);
        return llr_[n_ * size_ + phase];
    }

    // Writes the top hard-decision column and propagates partial sums after
    // odd (0-based) phases.
    void write_decision(int phase, std::uint8_t bit) {
        csums_[n_ * size_ + phase] = bit;
        if (phase & 1) calc_c(n_, phase);
    }

    // Bottom layer after all N phases: equals the re-encoded decisions.
    std::span<const std::uint8_t> bottom_csums() const {
        return {csums_.data(), static_cast<std::size_t>(size_)};
    }

    // Copies from src exactly the slots a decode resuming at next_phase can
    // still read; everything earlier is dead state.
    void copy_frontier(const ButterflyMemory& src, int next_phase) {
        for (int t = 0; t <= n_; ++t) {
            int width = size_ >> t;
            int phase_t = next_phase >> (n_ - t);
            int lo_llr = t * size_ + phase_t * width;
            int lo_c = t * size_ + (phase_t > 0 ? (phase_t - 1) * width : 0);
            int hi = (t + 1) * size_;
            std::copy(src.llr_.begin() + lo_llr, src.llr_.begin() + hi, llr_.begin() + lo_llr);
            std::copy(src.csums_.begin() + lo_c, src.csums_.begin() + hi, csums_.begin() + lo_c);
        }
    }

    double top_llr(int phase) const { return llr_[n_ * size_ + phase]; }

  private:
    void calc_l(int t, int phase) {
        if (t == 0) return;
        if ((phase & 1) == 0) calc_l(t - 1, phase >> 1);
        int width = size_ >> t;
        const double* below = &llr_[(t - 1) * size_ + (phase >> 1) * 2 * width];
        double* here = &llr_[t * size_ + phase * width];
        if ((phase & 1) == 0) {
            if (exact_)
                for (int b = 0; b < width; ++b) here[b] = f_exact(below[2 * b], below[2 * b + 1]);
            else
                for (int b = 0; b < width; ++b)
                    here[b] = f_minsum(below[2 * b], below[2 * b + 1]);
        } else {
            const std::uint8_t* s = &csums_[t * size_ + (phase - 1) * width];
            for (int b = 0; b < width; ++b)
                here[b] = g_update(below[2 * b], below[2 * b + 1], s[b]);
        }
    }

    void calc_c(int t, int phase) {  // phase odd
        int width = size_ >> t;
        const std::uint8_t* even_col = &csums_[t * size_ + (phase - 1) * width];
        const std::uint8_t* odd_col = &csums_[t * size_ + phase * width];
        std::uint8_t* below = &csums_[(t - 1) * size_ + (phase >> 1) * 2 * width];
        for (int b = 0; b < width; ++b) {
            below[2 * b] = even_col[b] ^ odd_col[b];
            below[2 * b + 1] = odd_col[b];
        }
        if ((phase >> 1) & 1) calc_c(t - 1, phase >> 1);
    }

    int n_;
    int size_;
    bool exact_ = false;
    std::vector<double> llr_;
    std::vector<std::uint8_t> csums_;
};

// Per-decoder working state: butterfly arrays plus the path/metric vectors.
// Single-threaded; one instance per simulation worker.
struct Workspace {
    ButterflyMemory mem;
    std::vector<std::uint8_t> path;        // v, current working path (0-based)
    std::vector<std::uint8_t> best;        // u-hat, best full-length leaf
    std::vector<double> pm;                // M[0..N], pm[0] = 0
    std::vector<double> pm_flip;           // M-bar[1..N]
    std::vector<double> score_flip;        // S-bar[1..N]
    double best_pm = kInf;                 // M_cml
    int committed = 0;                     // phases whose top csum column is written

    explicit Workspace(int n)
        : mem(n),
          path(1 << n),
          best(1 << n),
          pm((1 << n) + 1),
          pm_flip((1 << n) + 1),
          score_flip((1 << n) + 1) {}

    int block_length() const { return mem.block_length(); }

    void reset(std::span<const double> chan) {
        mem.load_channel(chan);
        pm[0] = 0.0;
        std::fill(pm_flip.begin(), pm_flip.end(), kInf);
        std::fill(score_flip.begin(), score_flip.end(), kInf);
        best_pm = kInf;
        committed = 0;
    }
};

// XOR of prior decisions selected by the dynamic-frozen constraint of
// 1-based position i.
inline std::uint8_t frozen_value(const CodeSpec& spec, const std::uint8_t* path, int i) {
    std::uint8_t v = 0;
    for (int j : spec.constraints[i]) v ^= path[j - 1];
    return v;
}

struct ScResult {
    BitVector u;  // u^N
    double pm = 0.0;
};

// Plain successive cancellation: frozen bits from constraints, information
// bits by hard decision; node-visit count equals N.
ScResult sc_decode(Workspace& ws, const CodeSpec& spec, std::span<const double> llr);

// Path metric of a fully forced path u^N under the same schedule and metric.
double forced_pm(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                 const BitVector& u);

// Genie-aided SC: decisions corrected to the transmitted u after each hard
// decision; returns the 1-based phase of the first wrong information-bit
// decision, or 0 if the whole frame decodes cleanly.
int genie_first_error(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                      const BitVector& u);

// Genie-aided SC over all N phases; increments counts[i] (1-based) at every
// phase whose hard decision disagrees with the transmitted path, frozen
// phases included. These are the per-phase error rates of the bit channels.
void genie_phase_errors(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                        const BitVector& u, std::span<std::int64_t> counts);

}  // namespace gncoset
