#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "gncoset/sc_engine.hpp"

namespace gncoset {

inline constexpr std::int64_t kUnboundedVisits = std::numeric_limits<std::int64_t>::max();
inline constexpr std::size_t kUnboundedList = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kAutoList = 0;  // derive the cap from the visit budget

// Per-phase first-error probabilities p and the cumulative bias
// b[i] = sum_{j<=i} log(1 - p_j); b orders the search queue, it never
// changes which leaf an unbounded search returns.
struct BiasProfile {
    std::vector<double> p;  // p[i-1] for 1-based phase i
    std::vector<double> b;  // b[i-1] for 1-based phase i

    static BiasProfile zero(int block_length);
};

BiasProfile compute_bias(std::span<const double> p);

// List capacity from the visit budget: log2(N) * lambda_max / N, floored.
std::size_t eta_from_budget(std::int64_t lambda_max, int block_length);

// A flipping set with the path metric and score of the branch it names.
struct FlipRecord {
    std::vector<int> flips;  // ascending, 1-based information phases
    double pm = 0.0;         // M-bar of the flipped branch
    double score = 0.0;      // pm + b[creation phase]
};

// Kept sorted by score ascending; insertion is stable (new records go after
// equal scores) and the worst entry is dropped once capacity is exceeded,
// possibly the new record itself.
class FlipList {
  public:
    explicit FlipList(std::size_t capacity = kUnboundedList) : capacity_(capacity) {}

    void set_capacity(std::size_t capacity) { capacity_ = capacity; }
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    void clear() { entries_.clear(); }

    void insert(FlipRecord rec);
    FlipRecord pop_first();
    const FlipRecord& at(std::size_t idx) const { return entries_[idx]; }

  private:
    std::deque<FlipRecord> entries_;
    std::size_t capacity_;
};

// Smallest index in the symmetric difference of two flipping sets (both
// ascending). Precondition: the sets differ.
int find_start_index(const std::vector<int>& e, const std::vector<int>& e_prev);

struct ScosConfig {
    std::int64_t lambda_max = kUnboundedVisits;  // node-visit budget, >= N when bounded
    std::size_t eta = kAutoList;                 // flip-list capacity
    double m_max = kInf;                         // acceptance threshold (finite: thresholded variant)
    const BiasProfile* bias = nullptr;           // nullptr = zero bias
    // Default: a pass in flight runs to its own end and only the start of new
    // passes is gated, so the realized count can overshoot by one pass. The
    // strict mode truncates mid-pass and never exceeds the budget.
    bool budget_per_pass = true;
};

struct ScPassResult {
    int end_phase = 0;         // last phase reached
    bool committed_leaf = false;  // phase N finished below the best-leaf metric
    bool budget_hit = false;
};

// One modified SC pass over phases start_phase..N: decisions inverted at the
// (ascending) flip indices, flipped-sibling metrics recorded past the largest
// flip, early abort once the metric reaches ws.best_pm. On full length with a
// better metric the leaf is committed into ws.best / ws.best_pm. The caller's
// visit counter gains one per executed phase; the budget is checked before
// each phase. Requires start_phase <= ws.committed + 1.
ScPassResult sc_dec(Workspace& ws, const CodeSpec& spec, const std::vector<int>& flips,
                    int start_phase, const BiasProfile* bias, std::int64_t& visits,
                    std::int64_t lambda_max = kUnboundedVisits);

struct ScosOutcome {
    BitVector u_hat;                 // empty when no full-length leaf was committed
    double pm = kInf;                // metric of u_hat
    bool omega = false;              // accepted: a leaf with pm < m_max was committed
    std::int64_t node_visits = 0;
    int leaves_found = 0;            // committed leaves, including the initial SC pass
    bool budget_exhausted = false;

    bool has_word() const { return !u_hat.empty(); }
};

// Ordered tree search over flipped SC paths. With an unbounded budget the
// search terminates only when no flipped branch can beat the best leaf, so
// the returned word attains the minimum path metric over the code.
// A finite m_max starts the pruning threshold there and reports omega = 0
// (erasure) when nothing beats it.
class ScosDecoder {
  public:
    ScosDecoder(const CodeSpec& spec, ScosConfig cfg);

    ScosOutcome decode(std::span<const double> llr);

    const ScosConfig& config() const { return cfg_; }
    std::size_t list_capacity() const { return list_.capacity(); }
    void set_bias(const BiasProfile* bias) { cfg_.bias = bias; }

  private:
    const CodeSpec* spec_;
    ScosConfig cfg_;
    Workspace ws_;
    FlipList list_;
    std::vector<int> e_prev_;
    std::int64_t visits_ = 0;
};

}  // namespace gncoset
