#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gncoset/baselines.hpp"
#include "gncoset/channel.hpp"
#include "gncoset/scos.hpp"

namespace gncoset {

enum class DecoderKind { kSc, kScl, kDscf, kScos };

struct DecoderSetup {
    DecoderKind kind = DecoderKind::kSc;
    SclConfig scl{};
    DscfConfig dscf{};
    double lambda_max_ratio = 0.0;  // 0 = unbounded; otherwise lambda_max = ratio * N
    std::size_t eta = kAutoList;
    double m_max = kInf;
    bool budget_per_pass = true;
    bool sc_exact = true;  // plain SC runs exact check-node updates
};

enum class BiasMode { kZero, kGenie, kFile };

struct SimConfig {
    CodeSpec spec;
    DecoderSetup decoder{};
    std::vector<double> snr_points_db;
    std::int64_t min_frames = 0;
    std::int64_t max_frames = 1'000'000;
    std::int64_t min_frame_errors = 100;
    std::uint64_t seed = 1;
    int workers = 1;
    BiasMode bias_mode = BiasMode::kGenie;
    std::string bias_file;
    std::int64_t bias_frames = 200'000;
};

struct PointResult {
    double snr_db = 0.0;
    std::int64_t frames = 0;
    std::int64_t frame_errors = 0;       // undetected + erasures
    std::int64_t undetected_errors = 0;  // accepted output differs from the sent word
    std::int64_t erasures = 0;           // decoder declined to decide
    std::int64_t ml_lb_errors = 0;       // failures with M(u-hat) <= M(u)
    std::int64_t node_visits = 0;
    double wall_seconds = 0.0;

    double fer() const { return frames ? static_cast<double>(frame_errors) / frames : 0.0; }
    double ufer() const { return frames ? static_cast<double>(undetected_errors) / frames : 0.0; }
    double visit_ratio(int block_length) const {
        return frames ? static_cast<double>(node_visits) / frames / block_length : 0.0;
    }
};

struct SimResult {
    std::vector<PointResult> points;
};

bool counters_equal(const SimResult& a, const SimResult& b);

// Monte Carlo FER measurement. Frames are keyed by (seed, point, frame index)
// so results are identical for any worker count; the stop rule is evaluated
// at fixed 1024-frame chunk boundaries.
SimResult run_fer(const SimConfig& cfg);

void write_csv(std::ostream& os, const SimConfig& cfg, const SimResult& result);

// Genie-aided estimate of the per-phase first-error probabilities at one SNR.
BiasProfile estimate_bias(const CodeSpec& spec, double ebn0_db, std::int64_t frames,
                          std::uint64_t seed, bool all_zero = false);

void save_bias(std::ostream& os, const BiasProfile& prof, std::uint64_t code_hash,
               double snr_db, std::int64_t frames, std::uint64_t seed);
BiasProfile load_bias(std::istream& is, std::uint64_t* code_hash = nullptr,
                      double* snr_db = nullptr);

struct PmHistogram {
    double bin_width = 0.5;
    std::vector<std::int64_t> counts;  // [k*bin_width, (k+1)*bin_width)
    std::int64_t overflow = 0;
    std::int64_t total = 0;
    std::vector<std::pair<double, std::int64_t>> tails;  // threshold -> #samples above

    double tail_fraction(double threshold) const;
};

// Empirical metric distribution of the transmitted word along the genie path.
PmHistogram pm_histogram(const CodeSpec& spec, double ebn0_db, std::int64_t frames, int bins,
                         std::uint64_t seed, bool all_zero = false,
                         std::vector<double> tail_thresholds = {25.0, 35.0, 50.0});

struct VsetResult {
    std::int64_t count = 0;
    bool saturated = false;
};

// Number of code-tree prefixes whose metric does not exceed the threshold;
// depth-first traversal pruned by metric monotonicity. Frozen phases follow
// their single constrained child.
VsetResult vset_size(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                     double threshold, std::int64_t node_cap = 10'000'000);

struct LemmaPoint {
    double mean_bound = 0.0;        // E[|V|] / N over non-saturated frames
    double mean_visit_ratio = 0.0;  // E[visits] / N of the unbounded search, same frames
    std::int64_t frames = 0;
    std::int64_t violations = 0;  // frames where visits < |V|
    std::int64_t saturated = 0;
};

// Pairs the traversal count at the optimal leaf's metric with the search's
// own visit count, frame by frame.
LemmaPoint lemma1_bound(const CodeSpec& spec, double ebn0_db, std::int64_t frames,
                        std::uint64_t seed, std::int64_t node_cap = 10'000'000,
                        const BiasProfile* bias = nullptr);

}  // namespace gncoset
