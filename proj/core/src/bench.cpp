#include "gncoset/bench.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gncoset {

namespace {

constexpr std::int64_t kChunkFrames = 1024;

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct FrameOutcome {
    bool has_word = false;
    bool accepted = false;
    bool wrong = false;
    double pm = kInf;
    std::int64_t visits = 0;
    BitVector word;
};

struct WorkerCtx {
    Workspace ws;
    std::optional<ScosDecoder> scos;
    std::optional<SclDecoder> scl;
    std::optional<DscfDecoder> dscf;

    explicit WorkerCtx(const CodeSpec& spec, const DecoderSetup& setup, const BiasProfile* bias)
        : ws(spec.n) {
        switch (setup.kind) {
            case DecoderKind::kSc:
                break;
            case DecoderKind::kScl:
                scl.emplace(spec, setup.scl);
                break;
            case DecoderKind::kDscf:
                dscf.emplace(spec, setup.dscf);
                break;
            case DecoderKind::kScos: {
                ScosConfig cfg;
                cfg.lambda_max =
                    setup.lambda_max_ratio > 0.0
                        ? static_cast<std::int64_t>(setup.lambda_max_ratio * spec.block_length)
                        : kUnboundedVisits;
                cfg.eta = setup.eta;
                cfg.m_max = setup.m_max;
                cfg.bias = bias;
                cfg.budget_per_pass = setup.budget_per_pass;
                scos.emplace(spec, cfg);
                break;
            }
        }
    }

    FrameOutcome decode(const CodeSpec& spec, const DecoderSetup& setup,
                        std::span<const double> llr) {
        FrameOutcome out;
        switch (setup.kind) {
            case DecoderKind::kSc: {
                ws.mem.set_exact_checks(setup.sc_exact);
                ScResult r = sc_decode(ws, spec, llr);
                ws.mem.set_exact_checks(false);
                out.has_word = true;
                out.accepted = true;
                out.pm = r.pm;
                out.word = std::move(r.u);
                out.visits = spec.block_length;
                break;
            }
            case DecoderKind::kScl: {
                SclResult r = scl->decode(llr);
                out.has_word = true;
                out.accepted = r.crc_pass;
                out.pm = r.pm;
                out.word = std::move(r.u_hat);
                out.visits = r.node_visits;
                break;
            }
            case DecoderKind::kDscf: {
                DscfResult r = dscf->decode(llr);
                out.has_word = true;
                out.accepted = r.accepted;
                out.word = std::move(r.u_hat);
                out.visits = r.node_visits;
                break;
            }
            case DecoderKind::kScos: {
                ScosOutcome r = scos->decode(llr);
                out.has_word = r.has_word();
                out.accepted = r.omega;
                out.pm = r.pm;
                out.word = std::move(r.u_hat);
                out.visits = r.node_visits;
                break;
            }
        }
        return out;
    }
};

struct Counters {
    std::int64_t frames = 0;
    std::int64_t frame_errors = 0;
    std::int64_t undetected = 0;
    std::int64_t erasures = 0;
    std::int64_t ml_lb = 0;
    std::int64_t visits = 0;

    void add(const Counters& o) {
        frames += o.frames;
        frame_errors += o.frame_errors;
        undetected += o.undetected;
        erasures += o.erasures;
        ml_lb += o.ml_lb;
        visits += o.visits;
    }
};

void simulate_frame(WorkerCtx& ctx, const SimConfig& cfg, const ChannelParams& chan,
                    std::size_t point_idx, std::int64_t frame_idx, Counters& acc) {
    const CodeSpec& spec = cfg.spec;
    Xoshiro256pp rng = frame_rng(cfg.seed, point_idx, static_cast<std::uint64_t>(frame_idx));

    BitVector payload(spec.payload_length());
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_bit());
    BitVector info = spec.info_with_crc(payload);
    BitVector u = spec.expand_info(info);
    BitVector cw = spec.encode(info);
    std::vector<double> llr = transmit(cw, chan.sigma, rng);

    FrameOutcome out = ctx.decode(spec, cfg.decoder, llr);
    out.wrong = !out.has_word || out.word != u;

    acc.frames += 1;
    acc.visits += out.visits;
    if (!out.accepted) {
        acc.erasures += 1;
        acc.frame_errors += 1;
    } else if (out.wrong) {
        acc.undetected += 1;
        acc.frame_errors += 1;
    }
    if (out.accepted && out.wrong && out.has_word) {
        // one metric definition for both sides of the comparison
        double m_hat = forced_pm(ctx.ws, spec, llr, out.word);
        double m_true = forced_pm(ctx.ws, spec, llr, u);
        if (m_hat <= m_true) acc.ml_lb += 1;
    }
}

}  // namespace

bool counters_equal(const SimResult& a, const SimResult& b) {
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const PointResult& x = a.points[i];
        const PointResult& y = b.points[i];
        if (x.frames != y.frames || x.frame_errors != y.frame_errors ||
            x.undetected_errors != y.undetected_errors || x.erasures != y.erasures ||
            x.ml_lb_errors != y.ml_lb_errors || x.node_visits != y.node_visits)
            return false;
    }
    return true;
}

SimResult run_fer(const SimConfig& cfg) {
    if (cfg.snr_points_db.empty()) throw std::invalid_argument("no SNR points");
    if (cfg.min_frame_errors < 1) throw std::invalid_argument("min_frame_errors must be >= 1");
    int workers = std::max(1, cfg.workers);

    SimResult result;
    for (std::size_t pt = 0; pt < cfg.snr_points_db.size(); ++pt) {
        double snr = cfg.snr_points_db[pt];
        ChannelParams chan = ChannelParams::from_ebn0(snr, cfg.spec.rate(), cfg.seed);
        auto t0 = std::chrono::steady_clock::now();

        BiasProfile bias = BiasProfile::zero(cfg.spec.block_length);
        if (cfg.decoder.kind == DecoderKind::kScos) {
            if (cfg.bias_mode == BiasMode::kGenie)
                bias = estimate_bias(cfg.spec, snr, cfg.bias_frames,
                                     mix_seed(cfg.seed, 0xb1a5c0deULL + pt));
            else if (cfg.bias_mode == BiasMode::kFile) {
                std::ifstream is(cfg.bias_file);
                if (!is) throw std::runtime_error("cannot read bias profile " + cfg.bias_file);
                bias = load_bias(is);
            }
        }

        std::vector<WorkerCtx> ctxs;
        ctxs.reserve(workers);
        for (int w = 0; w < workers; ++w) ctxs.emplace_back(cfg.spec, cfg.decoder, &bias);

        Counters total;
        std::int64_t base = 0;
        while (base < cfg.max_frames) {
            std::int64_t todo = std::min(kChunkFrames, cfg.max_frames - base);
            std::vector<Counters> part(workers);
            auto work = [&](int w) {
                for (std::int64_t f = w; f < todo; f += workers)
                    simulate_frame(ctxs[w], cfg, chan, pt, base + f, part[w]);
            };
            if (workers == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(workers);
                for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
                for (auto& th : pool) th.join();
            }
            for (const Counters& c : part) total.add(c);
            base += todo;
            if (total.frame_errors >= cfg.min_frame_errors && total.frames >= cfg.min_frames)
                break;
        }

        PointResult pr;
        pr.snr_db = snr;
        pr.frames = total.frames;
        pr.frame_errors = total.frame_errors;
        pr.undetected_errors = total.undetected;
        pr.erasures = total.erasures;
        pr.ml_lb_errors = total.ml_lb;
        pr.node_visits = total.visits;
        pr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.points.push_back(pr);
    }
    return result;
}

void write_csv(std::ostream& os, const SimConfig& cfg, const SimResult& result) {
    os << "snr_db,frames,frame_errors,fer,undetected_errors,ufer,erasures,"
          "avg_visit_ratio,ml_lb_errors,seed\n";
    for (const PointResult& p : result.points) {
        if (p.frames == 0) continue;  // empty run: header-only file
        os << fmt6(p.snr_db) << ',' << p.frames << ',' << p.frame_errors << ',' << fmt6(p.fer())
           << ',' << p.undetected_errors << ',' << fmt6(p.ufer()) << ',' << p.erasures << ','
           << fmt6(p.visit_ratio(cfg.spec.block_length)) << ',' << p.ml_lb_errors << ','
           << cfg.seed << '\n';
    }
}

BiasProfile estimate_bias(const CodeSpec& spec, double ebn0_db, std::int64_t frames,
                          std::uint64_t seed, bool all_zero) {
    if (frames < 1) throw std::invalid_argument("bias estimation needs at least one frame");
    double sigma = ebn0_to_sigma(ebn0_db, spec.rate());
    Workspace ws(spec.n);
    std::vector<std::int64_t> errors(spec.block_length + 1, 0);
    BitVector payload(spec.payload_length());
    BitVector zero_u(spec.block_length, 0);
    BitVector zero_cw(spec.block_length, 0);
    for (std::int64_t f = 0; f < frames; ++f) {
        Xoshiro256pp rng = frame_rng(seed, 0, static_cast<std::uint64_t>(f));
        BitVector u;
        BitVector cw;
        if (all_zero) {
            u = zero_u;
            cw = zero_cw;
        } else {
            for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_bit());
            BitVector info = spec.info_with_crc(payload);
            u = spec.expand_info(info);
            cw = spec.encode(info);
        }
        std::vector<double> llr = transmit(cw, sigma, rng);
        genie_phase_errors(ws, spec, llr, u, errors);
    }
    // conditional per-phase error rates of the synthesized channels; a rate
    // of 1 would make log(1-p) blow up, so cap just below
    std::vector<double> p(spec.block_length, 0.0);
    for (int i = 1; i <= spec.block_length; ++i) {
        double r = static_cast<double>(errors[i]) / static_cast<double>(frames);
        p[i - 1] = std::min(r, 1.0 - 1e-12);
    }
    return compute_bias(p);
}

void save_bias(std::ostream& os, const BiasProfile& prof, std::uint64_t code_hash,
               double snr_db, std::int64_t frames, std::uint64_t seed) {
    char buf[64];
    os << "# gncoset bias profile\n";
    std::snprintf(buf, sizeof buf, "%.17g", snr_db);
    os << "# code_hash " << std::hex << code_hash << std::dec << " snr_db " << buf << " frames "
       << frames << " seed " << seed << "\n";
    for (std::size_t i = 0; i < prof.p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", prof.p[i]);
        os << (i + 1) << ' ' << buf;
        std::snprintf(buf, sizeof buf, "%.17g", prof.b[i]);
        os << ' ' << buf << '\n';
    }
}

BiasProfile load_bias(std::istream& is, std::uint64_t* code_hash, double* snr_db) {
    BiasProfile prof;
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# code_hash", 0) == 0) {
            std::istringstream ss(line);
            std::string tok;
            ss >> tok >> tok;  // "#", "code_hash"
            std::uint64_t h;
            ss >> std::hex >> h >> std::dec;
            if (code_hash) *code_hash = h;
            ss >> tok;  // "snr_db"
            double s;
            ss >> s;
            if (snr_db) *snr_db = s;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int idx;
        double p, b;
        if (!(ss >> idx >> p >> b)) throw std::invalid_argument("malformed bias profile line");
        if (idx != static_cast<int>(prof.p.size()) + 1)
            throw std::invalid_argument("bias profile indices must be 1..N in order");
        prof.p.push_back(p);
        prof.b.push_back(b);
    }
    if (prof.p.empty()) throw std::invalid_argument("empty bias profile");
    return prof;
}

double PmHistogram::tail_fraction(double threshold) const {
    for (const auto& [thr, cnt] : tails)
        if (thr == threshold) return total ? static_cast<double>(cnt) / total : 0.0;
    throw std::invalid_argument("threshold was not tracked");
}

PmHistogram pm_histogram(const CodeSpec& spec, double ebn0_db, std::int64_t frames, int bins,
                         std::uint64_t seed, bool all_zero, std::vector<double> tail_thresholds) {
    double sigma = ebn0_to_sigma(ebn0_db, spec.rate());
    PmHistogram hist;
    hist.counts.assign(std::max(1, bins), 0);
    for (double thr : tail_thresholds) hist.tails.emplace_back(thr, 0);
    Workspace ws(spec.n);
    BitVector payload(spec.payload_length());
    for (std::int64_t f = 0; f < frames; ++f) {
        Xoshiro256pp rng = frame_rng(seed, 0, static_cast<std::uint64_t>(f));
        BitVector u;
        BitVector cw;
        if (all_zero) {
            u.assign(spec.block_length, 0);
            cw.assign(spec.block_length, 0);
        } else {
            for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_bit());
            BitVector info = spec.info_with_crc(payload);
            u = spec.expand_info(info);
            cw = spec.encode(info);
        }
        std::vector<double> llr = transmit(cw, sigma, rng);
        double m = forced_pm(ws, spec, llr, u);
        auto k = static_cast<std::int64_t>(m / hist.bin_width);
        if (k < static_cast<std::int64_t>(hist.counts.size()))
            hist.counts[static_cast<std::size_t>(k)] += 1;
        else
            hist.overflow += 1;
        hist.total += 1;
        for (auto& [thr, cnt] : hist.tails)
            if (m > thr) cnt += 1;
    }
    return hist;
}

VsetResult vset_size(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                     double threshold, std::int64_t node_cap) {
    VsetResult res;
    if (threshold < 0.0) return res;
    int N = spec.block_length;
    ws.reset(llr);
    ws.best_pm = kInf;

    std::vector<std::vector<int>> pending;

    // Walks phases start..N along hard decisions (inverted at `flips`),
    // counting surviving prefixes and queueing in-threshold siblings.
    auto walk = [&](const std::vector<int>& flips, int start) {
        std::size_t next_flip =
            std::lower_bound(flips.begin(), flips.end(), start) - flips.begin();
        for (int i = start; i <= N; ++i) {
            double l = ws.mem.decision_llr(i - 1);
            std::uint8_t v;
            bool flipped = false;
            if (spec.frozen(i)) {
                v = frozen_value(spec, ws.path.data(), i);
            } else {
                v = hard_dec(l);
                if (next_flip < flips.size() && flips[next_flip] == i) {
                    v ^= 1;
                    flipped = true;
                    ++next_flip;
                }
            }
            ws.pm[i] = calc_pm(ws.pm[i - 1], v, l);
            if (ws.pm[i] > threshold) return;
            res.count += 1;
            if (res.count > node_cap) {
                res.saturated = true;
                return;
            }
            if (!spec.frozen(i) && !flipped) {
                double sibling = calc_pm(ws.pm[i - 1], static_cast<std::uint8_t>(v ^ 1), l);
                if (sibling <= threshold) {
                    std::vector<int> ext(flips.begin(), flips.begin() + next_flip);
                    ext.push_back(i);
                    pending.push_back(std::move(ext));
                }
            }
            ws.path[i - 1] = v;
            ws.mem.write_decision(i - 1, v);
            ws.committed = i;
        }
    };

    walk({}, 1);
    while (!pending.empty() && !res.saturated) {
        std::vector<int> flips = std::move(pending.back());
        pending.pop_back();
        int start = flips.back();
        assert(start <= ws.committed + 1);
        walk(flips, start);
    }
    if (res.saturated) res.count = node_cap;
    return res;
}

LemmaPoint lemma1_bound(const CodeSpec& spec, double ebn0_db, std::int64_t frames,
                        std::uint64_t seed, std::int64_t node_cap, const BiasProfile* bias) {
    double sigma = ebn0_to_sigma(ebn0_db, spec.rate());
    ScosConfig cfg;
    cfg.bias = bias;
    ScosDecoder scos(spec, cfg);
    Workspace ws(spec.n);
    LemmaPoint out;
    double sum_bound = 0.0;
    double sum_ratio = 0.0;
    BitVector payload(spec.payload_length());
    for (std::int64_t f = 0; f < frames; ++f) {
        Xoshiro256pp rng = frame_rng(seed, 0, static_cast<std::uint64_t>(f));
        for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_bit());
        BitVector info = spec.info_with_crc(payload);
        BitVector cw = spec.encode(info);
        std::vector<double> llr = transmit(cw, sigma, rng);
        ScosOutcome ml = scos.decode(llr);
        VsetResult vs = vset_size(ws, spec, llr, ml.pm, node_cap);
        if (vs.saturated) {
            out.saturated += 1;
            continue;
        }
        out.frames += 1;
        sum_bound += static_cast<double>(vs.count) / spec.block_length;
        sum_ratio += static_cast<double>(ml.node_visits) / spec.block_length;
        if (ml.node_visits < vs.count) out.violations += 1;
    }
    if (out.frames) {
        out.mean_bound = sum_bound / static_cast<double>(out.frames);
        out.mean_visit_ratio = sum_ratio / static_cast<double>(out.frames);
    }
    return out;
}

}  // namespace gncoset
