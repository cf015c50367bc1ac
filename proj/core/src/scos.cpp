#include "gncoset/scos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gncoset {

BiasProfile BiasProfile::zero(int block_length) {
    BiasProfile prof;
    prof.p.assign(block_length, 0.0);
    prof.b.assign(block_length, 0.0);
    return prof;
}

BiasProfile compute_bias(std::span<const double> p) {
    BiasProfile prof;
    prof.p.assign(p.begin(), p.end());
    prof.b.resize(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || p[i] >= 1.0)
            throw std::invalid_argument("first-error probabilities must lie in [0,1)");
        acc += std::log1p(-p[i]);
        prof.b[i] = acc;
    }
    return prof;
}

std::size_t eta_from_budget(std::int64_t lambda_max, int block_length) {
    if (lambda_max == kUnboundedVisits) return kUnboundedList;
    int n = 0;
    while ((1 << n) < block_length) ++n;
    return static_cast<std::size_t>(static_cast<std::int64_t>(n) * lambda_max / block_length);
}

void FlipList::insert(FlipRecord rec) {
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), rec.score,
                                [](double s, const FlipRecord& r) { return s < r.score; });
    entries_.insert(pos, std::move(rec));
    if (entries_.size() > capacity_) entries_.pop_back();
}

FlipRecord FlipList::pop_first() {
    FlipRecord rec = std::move(entries_.front());
    entries_.pop_front();
    return rec;
}

int find_start_index(const std::vector<int>& e, const std::vector<int>& e_prev) {
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < e.size() && b < e_prev.size()) {
        if (e[a] == e_prev[b]) {
            ++a;
            ++b;
        } else {
            return std::min(e[a], e_prev[b]);
        }
    }
    if (a < e.size()) return e[a];
    if (b < e_prev.size()) return e_prev[b];
    throw std::logic_error("find_start_index requires distinct flipping sets");
}

ScosDecoder::ScosDecoder(const CodeSpec& spec, ScosConfig cfg)
    : spec_(&spec), cfg_(cfg), ws_(spec.n), list_() {
    if (cfg_.lambda_max != kUnboundedVisits && cfg_.lambda_max < spec.block_length)
        throw std::invalid_argument("visit budget below one SC pass");
    if (!(cfg_.m_max >= 0.0)) throw std::invalid_argument("m_max must be non-negative");
    std::size_t eta =
        cfg_.eta == kAutoList ? eta_from_budget(cfg_.lambda_max, spec.block_length) : cfg_.eta;
    if (eta < 1) throw std::invalid_argument("list capacity must be at least 1");
    list_.set_capacity(eta);
    if (cfg_.bias && static_cast<int>(cfg_.bias->b.size()) != spec.block_length)
        throw std::invalid_argument("bias profile length mismatch");
}

ScPassResult sc_dec(Workspace& ws, const CodeSpec& spec, const std::vector<int>& flips,
                    int start_phase, const BiasProfile* bias_profile, std::int64_t& visits,
                    std::int64_t lambda_max) {
    int N = spec.block_length;
    int max_flip = flips.empty() ? 0 : flips.back();
    const double* bias = bias_profile ? bias_profile->b.data() : nullptr;
    std::size_t next_flip =
        std::lower_bound(flips.begin(), flips.end(), start_phase) - flips.begin();

    for (int i = start_phase; i <= N; ++i) {
        if (visits == lambda_max) return {i - 1, false, true};
        ++visits;
        double l = ws.mem.decision_llr(i - 1);
        std::uint8_t v;
        if (spec.frozen(i)) {
            v = frozen_value(spec, ws.path.data(), i);
        } else {
            v = hard_dec(l);
            if (next_flip < flips.size() && flips[next_flip] == i) {
                v ^= 1;
                ++next_flip;
            }
            if (i > max_flip) {
                ws.pm_flip[i] = calc_pm(ws.pm[i - 1], v ^ 1, l);
                ws.score_flip[i] = ws.pm_flip[i] + (bias ? bias[i - 1] : 0.0);
            }
        }
        ws.path[i - 1] = v;
        ws.pm[i] = calc_pm(ws.pm[i - 1], v, l);
        if (ws.pm[i] >= ws.best_pm) return {i, false, false};
        ws.mem.write_decision(i - 1, v);
        ws.committed = i;
    }
    ws.best_pm = ws.pm[N];
    ws.best = ws.path;
    return {N, true, false};
}

ScosOutcome ScosDecoder::decode(std::span<const double> llr) {
    const CodeSpec& spec = *spec_;
    ws_.reset(llr);
    ws_.best_pm = cfg_.m_max;
    list_.clear();
    e_prev_.clear();
    visits_ = 0;

    ScosOutcome out;
    bool committed_any = false;

    ScPassResult first = sc_dec(ws_, spec, {}, 1, cfg_.bias, visits_, cfg_.lambda_max);
    committed_any = first.committed_leaf;
    if (first.committed_leaf) ++out.leaves_found;
    if (first.budget_hit) {
        out.budget_exhausted = true;
    } else {
        for (int i : spec.info_set)
            if (ws_.pm_flip[i] < ws_.best_pm)
                list_.insert({{i}, ws_.pm_flip[i], ws_.score_flip[i]});

        while (!list_.empty()) {
            if (cfg_.budget_per_pass && visits_ >= cfg_.lambda_max) {
                out.budget_exhausted = true;
                break;
            }
            FlipRecord rec = list_.pop_first();
            if (!(rec.pm < ws_.best_pm)) continue;
            // A run can abort before re-writing later hard-decision columns,
            // so never resume past the committed prefix.
            int start = std::min(find_start_index(rec.flips, e_prev_), ws_.committed + 1);
            std::int64_t pass_cap = cfg_.budget_per_pass ? kUnboundedVisits : cfg_.lambda_max;
            ScPassResult r = sc_dec(ws_, spec, rec.flips, start, cfg_.bias, visits_, pass_cap);
            if (r.budget_hit) {
                out.budget_exhausted = true;
                break;
            }
            if (r.committed_leaf) {
                committed_any = true;
                ++out.leaves_found;
            }
            for (int i = rec.flips.back() + 1; i <= r.end_phase; ++i) {
                if (spec.frozen(i) || !(ws_.pm_flip[i] < ws_.best_pm)) continue;
                FlipRecord ext;
                ext.flips = rec.flips;
                ext.flips.push_back(i);
                ext.pm = ws_.pm_flip[i];
                ext.score = ws_.score_flip[i];
                list_.insert(std::move(ext));
            }
            e_prev_ = std::move(rec.flips);
        }
    }

    out.node_visits = visits_;
    out.omega = committed_any;
    if (committed_any) {
        out.u_hat.assign(ws_.best.begin(), ws_.best.end());
        out.pm = ws_.best_pm;
    }
    return out;
}

}  // namespace gncoset
