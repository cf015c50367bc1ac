#include "gncoset/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gncoset {

SclDecoder::SclDecoder(const CodeSpec& spec, SclConfig cfg)
    : spec_(&spec), list_size_(cfg.list_size) {
    if (list_size_ < 1) throw std::invalid_argument("list size must be at least 1");
    slots_.reserve(2 * list_size_);
    for (int s = 0; s < 2 * list_size_; ++s) slots_.emplace_back(spec.n);
}

SclResult SclDecoder::decode(std::span<const double> llr) {
    const CodeSpec& spec = *spec_;
    int N = spec.block_length;

    active_.clear();
    free_.clear();
    for (int s = static_cast<int>(slots_.size()) - 1; s >= 1; --s) free_.push_back(s);
    slots_[0].mem.load_channel(llr);
    slots_[0].pm = 0.0;
    active_.push_back(0);

    SclResult result;
    std::vector<double> dec_llr(2 * list_size_);

    struct Cand {
        double pm;
        int pos;          // position in active_, ties keep the lower one
        std::uint8_t flip;  // 0: hard-decision child, 1: inverted child
    };
    std::vector<Cand> cands;
    std::vector<int> next_active;
    std::vector<std::uint8_t> parent_used(2 * list_size_);

    for (int i = 1; i <= N; ++i) {
        result.node_visits += static_cast<std::int64_t>(active_.size());
        for (std::size_t p = 0; p < active_.size(); ++p)
            dec_llr[p] = slots_[active_[p]].mem.decision_llr(i - 1);

        if (spec.frozen(i)) {
            for (std::size_t p = 0; p < active_.size(); ++p) {
                PathState& ps = slots_[active_[p]];
                std::uint8_t v = frozen_value(spec, ps.u.data(), i);
                ps.pm = calc_pm(ps.pm, v, dec_llr[p]);
                ps.u[i - 1] = v;
                ps.mem.write_decision(i - 1, v);
            }
            continue;
        }

        cands.clear();
        for (std::size_t p = 0; p < active_.size(); ++p) {
            cands.push_back({slots_[active_[p]].pm, static_cast<int>(p), 0});
            cands.push_back({slots_[active_[p]].pm + std::abs(dec_llr[p]),
                             static_cast<int>(p), 1});
        }
        if (static_cast<int>(cands.size()) > list_size_) {
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.pm != b.pm) return a.pm < b.pm;
                if (a.pos != b.pos) return a.pos < b.pos;
                return a.flip < b.flip;
            });
            cands.resize(list_size_);
            // path order stays stable across phases
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.pos != b.pos) return a.pos < b.pos;
                return a.flip < b.flip;
            });
        }

        next_active.clear();
        std::fill(parent_used.begin(), parent_used.end(), 0);
        for (const Cand& c : cands) {
            int parent_slot = active_[c.pos];
            PathState& parent = slots_[parent_slot];
            std::uint8_t v = static_cast<std::uint8_t>(hard_dec(dec_llr[c.pos]) ^ c.flip);
            int slot;
            if (!parent_used[c.pos]) {
                slot = parent_slot;  // first kept child continues in place
                parent_used[c.pos] = 1;
            } else {
                slot = free_.back();
                free_.pop_back();
                slots_[slot].mem.copy_frontier(parent.mem, i - 1);
                slots_[slot].u = parent.u;
            }
            PathState& ps = slots_[slot];
            ps.pm = c.flip ? parent.pm + std::abs(dec_llr[c.pos]) : parent.pm;
            ps.u[i - 1] = v;
            next_active.push_back(slot);
        }
        // pm of in-place survivors referenced parent.pm before any overwrite:
        // the hard-decision child keeps it, the flip child adds |llr|; when both
        // survive the in-place one is processed first, so order is safe.
        for (std::size_t p = 0; p < active_.size(); ++p)
            if (!parent_used[p]) free_.push_back(active_[p]);
        active_ = next_active;
        for (int slot : active_) slots_[slot].mem.write_decision(i - 1, slots_[slot].u[i - 1]);
    }

    // output rule: argmin metric, preferring CRC-valid leaves when present
    int best = -1;
    int best_crc = -1;
    for (int slot : active_) {
        const PathState& ps = slots_[slot];
        if (best < 0 || ps.pm < slots_[best].pm) best = slot;
        if (spec.crc) {
            BitVector info = spec.info_bits_of(ps.u);
            if (spec.crc->check(info) && (best_crc < 0 || ps.pm < slots_[best_crc].pm))
                best_crc = slot;
        }
    }
    int chosen = best_crc >= 0 ? best_crc : best;
    result.u_hat = slots_[chosen].u;
    result.pm = slots_[chosen].pm;
    result.crc_pass = !spec.crc || best_crc >= 0;
    return result;
}

double softplus_scaled(double x, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    return std::log1p(std::exp(-alpha * x)) / alpha;
}

double dscf_metric(const std::vector<int>& flips, std::span<const double> abs_llr,
                   const CodeSpec& spec, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    double q = 0.0;
    int i_max = flips.empty() ? 0 : flips.back();
    for (int i : flips) q += abs_llr[i];
    for (int j : spec.info_set) {
        if (j > i_max) break;
        q += softplus_scaled(abs_llr[j], alpha);
    }
    return q;
}

double scf_metric_q1(int i, std::span<const double> abs_llr, const CodeSpec& spec, double alpha) {
    return dscf_metric({i}, abs_llr, spec, alpha);
}

DscfDecoder::DscfDecoder(const CodeSpec& spec, DscfConfig cfg)
    : spec_(&spec), cfg_(cfg), ws_(spec.n), abs_llr_(spec.block_length + 1) {
    if (!spec.crc) throw std::invalid_argument("flip decoding needs an outer CRC");
    if (cfg_.alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    if (cfg_.t_max < 0) throw std::invalid_argument("t_max must be non-negative");
}

DscfResult DscfDecoder::decode(std::span<const double> llr) {
    const CodeSpec& spec = *spec_;
    int N = spec.block_length;

    auto pass = [&](const std::vector<int>& flips) {
        ws_.reset(llr);
        std::size_t next_flip = 0;
        for (int i = 1; i <= N; ++i) {
            double l = ws_.mem.decision_llr(i - 1);
            abs_llr_[i] = std::abs(l);
            std::uint8_t v;
            if (spec.frozen(i)) {
                v = frozen_value(spec, ws_.path.data(), i);
            } else {
                v = hard_dec(l);
                if (next_flip < flips.size() && flips[next_flip] == i) {
                    v ^= 1;
                    ++next_flip;
                }
            }
            ws_.path[i - 1] = v;
            ws_.mem.write_decision(i - 1, v);
            ws_.committed = i;
        }
        return spec.crc->check(spec.info_bits_of({ws_.path.begin(), ws_.path.end()}));
    };

    DscfResult result;
    bool ok = pass({});
    result.node_visits = N;
    if (ok) {
        result.u_hat.assign(ws_.path.begin(), ws_.path.end());
        result.accepted = true;
        return result;
    }
    BitVector initial(ws_.path.begin(), ws_.path.end());

    struct Cand {
        std::vector<int> flips;
        double q;
    };
    std::vector<Cand> pool;
    auto pool_insert = [&](Cand c) {
        auto pos = std::upper_bound(pool.begin(), pool.end(), c.q,
                                    [](double q, const Cand& x) { return q < x.q; });
        pool.insert(pos, std::move(c));
        if (static_cast<int>(pool.size()) > cfg_.t_max) pool.pop_back();
    };

    for (int j : spec.info_set) pool_insert({{j}, dscf_metric({j}, abs_llr_, spec, cfg_.alpha)});

    while (result.attempts < cfg_.t_max && !pool.empty()) {
        Cand cand = std::move(pool.front());
        pool.erase(pool.begin());
        ++result.attempts;
        ok = pass(cand.flips);
        result.node_visits += N;
        if (ok) {
            result.u_hat.assign(ws_.path.begin(), ws_.path.end());
            result.accepted = true;
            return result;
        }
        if (static_cast<int>(cand.flips.size()) < cfg_.flip_order_max) {
            for (int j : spec.info_set) {
                if (j <= cand.flips.back()) continue;
                Cand ext;
                ext.flips = cand.flips;
                ext.flips.push_back(j);
                ext.q = dscf_metric(ext.flips, abs_llr_, spec, cfg_.alpha);
                pool_insert(std::move(ext));
            }
        }
    }
    result.u_hat = std::move(initial);
    result.accepted = false;
    return result;
}

MlResult brute_force_ml(Workspace& ws, const CodeSpec& spec, std::span<const double> llr) {
    int K = spec.dimension();
    if (K > 20) throw std::invalid_argument("exhaustive search limited to K <= 20");
    MlResult best;
    best.pm = kInf;
    BitVector info(K);
    for (std::uint64_t w = 0; w < (1ULL << K); ++w) {
        for (int k = 0; k < K; ++k) info[k] = static_cast<std::uint8_t>((w >> (K - 1 - k)) & 1);
        BitVector u = spec.expand_info(info);
        double pm = forced_pm(ws, spec, llr, u);
        if (pm < best.pm) {
            best.pm = pm;
            best.u = std::move(u);
        }
    }
    return best;
}

}  // namespace gncoset
