// Command-line front end: code construction, Monte Carlo FER runs, bias
// profile estimation, metric histograms, complexity-bound measurements and
// the exhaustive-search cross-check.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gncoset/bench.hpp"

using namespace gncoset;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSaturated = 3;

struct GlobalOpts {
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = ".";
};

std::string out_path(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

double parse_real_or_inf(const std::string& s) {
    if (s == "inf" || s == "INF" || s == "Inf") return kInf;
    return std::stod(s);
}

// flat key-value config file; '#' starts a comment, flags override keys
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("config", "cannot read " + path);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;
        std::string rest;
        std::getline(ss, rest);
        auto b = rest.find_first_not_of(" \t");
        kv[key] = b == std::string::npos ? "" : rest.substr(b, rest.find_last_not_of(" \t") - b + 1);
    }
    return kv;
}

BitVector parse_taps(const std::string& s) {
    BitVector g;
    for (char c : s) {
        if (c != '0' && c != '1') throw CLI::ValidationError("taps", "binary string expected");
        g.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return g;
}

void print_spec_summary(const CodeSpec& spec) {
    std::printf("N=%d K=%d payload=%d rate=%.6g rule=%s", spec.block_length, spec.dimension(),
                spec.payload_length(), spec.rate(), spec.rule.c_str());
    if (spec.beta > 0) std::printf(" beta=%.6g", spec.beta);
    if (spec.rule == "drm-polar") std::printf(" seed=%llu", (unsigned long long)spec.seed);
    if (spec.crc) std::printf(" crc=%s", spec.crc->to_string().c_str());
    std::printf(" hash=%016llx\n", (unsigned long long)spec.hash());
}

BiasProfile bias_with_cache(const GlobalOpts& g, const CodeSpec& spec, double snr_db,
                            std::int64_t frames, std::uint64_t seed) {
    char name[128];
    std::snprintf(name, sizeof name, "bias_%016llx_%.4f.txt", (unsigned long long)spec.hash(),
                  snr_db);
    std::string path = out_path(g, name);
    if (fs::exists(path)) {
        std::ifstream is(path);
        std::uint64_t h = 0;
        double s = 0;
        BiasProfile prof = load_bias(is, &h, &s);
        if (h == spec.hash() && s == snr_db &&
            static_cast<int>(prof.p.size()) == spec.block_length)
            return prof;
    }
    BiasProfile prof = estimate_bias(spec, snr_db, frames, seed);
    std::ofstream os(path);
    save_bias(os, prof, spec.hash(), snr_db, frames, seed);
    return prof;
}

int cmd_construct(const GlobalOpts& g, const std::string& rule, int n, int k, int r,
                  const std::string& taps, const std::string& crc_taps, std::uint64_t code_seed,
                  double beta, bool direct_offsets, std::string out_file) {
    CodeSpec spec;
    if (rule == "rm") {
        spec = make_rm(r, n);
    } else if (rule == "polar-pw") {
        spec = make_polar_pw(n, k, beta);
    } else if (rule == "rm-polar") {
        spec = make_rm_polar(n, r, k, beta);
    } else if (rule == "pac") {
        spec = make_pac(n, k, parse_taps(taps.empty() ? "011011" : taps), beta, !direct_offsets);
    } else if (rule == "drm-polar") {
        spec = sample_drm_polar(make_rm_polar(n, r, k, beta), code_seed);
    } else if (rule == "crc-polar") {
        CrcSpec crc = CrcSpec::from_string(crc_taps.empty() ? "11100101" : crc_taps);
        spec = make_crc_polar(n, k, crc, beta);
    } else {
        std::cerr << "unknown construction rule: " << rule << "\n";
        return kExitConfig;
    }
    if (out_file.empty()) out_file = out_path(g, rule + ".code");
    spec.save_file(out_file);
    print_spec_summary(spec);
    std::printf("written %s\n", out_file.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"G_N-coset code toolbox: ordered-search, list and flip decoders "
                 "over the binary-input AWGN channel"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--workers", g.workers, "worker threads for simulation");
    app.add_option("--out", g.out_dir, "output directory");

    // construct
    auto* construct = app.add_subcommand("construct", "build a code spec file");
    std::string rule, taps, crc_taps, out_file;
    int n = 7, k = 64, r = 3;
    std::uint64_t code_seed = 0;
    double beta = kDefaultPwBeta;
    construct->add_option("rule", rule, "rm | polar-pw | rm-polar | pac | drm-polar | crc-polar")
        ->required();
    construct->add_option("--n", n, "log2 of the block length");
    construct->add_option("--m", n, "alias of --n for rm constructions");
    construct->add_option("--k", k, "code dimension (payload length for crc-polar)");
    construct->add_option("--r", r, "RM order");
    construct->add_option("--g", taps, "convolution taps, binary string (pac)");
    construct->add_option("--crc", crc_taps, "CRC generator, binary string MSB first");
    construct->add_option("--code-seed", code_seed, "ensemble seed (drm-polar)");
    construct->add_option("--beta", beta, "polarization weight base");
    construct->add_option("--spec-out", out_file, "output spec path");

    // shared simulation options
    std::string spec_path, decoder = "scos", snr_list, config_path, csv_path;
    std::string eta_str = "auto", m_max_str = "inf", lambda_str = "inf", bias_str = "auto";
    std::int64_t max_frames = 1'000'000, min_frames = 0, min_errors = 100,
                 bias_frames = 200'000;
    int list_size = 16;
    DscfConfig dscf_defaults{};
    int t_max = dscf_defaults.t_max, flip_order = dscf_defaults.flip_order_max;
    double alpha = dscf_defaults.alpha;
    bool sc_minsum = false, budget_per_phase = false;

    auto add_sim_options = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "code spec file")->required();
        cmd->add_option("--snr", snr_list, "comma-separated Eb/N0 points in dB");
        cmd->add_option("--config", config_path, "flat key-value config file");
        cmd->add_option("--frames", max_frames, "maximum frames per point");
        cmd->add_option("--min-frames", min_frames, "minimum frames per point");
        cmd->add_option("--min-errors", min_errors, "stop after this many frame errors");
    };

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo FER measurement, CSV output");
    add_sim_options(simulate);
    simulate->add_option("--decoder", decoder, "sc | scl | dscf | scos");
    simulate->add_option("--list-size", list_size, "list size (scl)");
    simulate->add_option("--t-max", t_max, "flip attempts (dscf)");
    simulate->add_option("--alpha", alpha, "flip metric scaling (dscf)");
    simulate->add_option("--flip-order-max", flip_order, "largest flip set (dscf)");
    simulate->add_option("--lambda-max-ratio", lambda_str, "visit budget / N, or 'inf' (scos)");
    simulate->add_option("--eta", eta_str, "flip list capacity, integer or 'auto' (scos)");
    simulate->add_option("--m-max", m_max_str, "acceptance threshold, real or 'inf' (scos)");
    simulate->add_option("--bias", bias_str, "zero | auto | profile:<path> (scos)");
    simulate->add_option("--bias-frames", bias_frames, "genie frames per bias estimate");
    simulate->add_flag("--sc-minsum", sc_minsum, "min-sum check nodes for plain SC");
    simulate->add_flag("--budget-per-phase", budget_per_phase,
                       "truncate passes mid-flight at the visit budget");
    simulate->add_option("--csv", csv_path, "CSV output path (default <out>/fer.csv)");

    auto* bias_cmd = app.add_subcommand("bias", "estimate a genie bias profile");
    std::double_t bias_snr = 3.0;
    std::string bias_out;
    bias_cmd->add_option("--spec", spec_path, "code spec file")->required();
    bias_cmd->add_option("--snr", bias_snr, "Eb/N0 in dB")->required();
    bias_cmd->add_option("--frames", bias_frames, "genie frames");
    bias_cmd->add_option("--profile-out", bias_out, "output path");

    auto* hist = app.add_subcommand("histogram", "genie metric histogram of the sent word");
    double hist_snr = 3.5;
    int hist_bins = 200;
    std::int64_t hist_frames = 1'000'000;
    bool hist_allzero = false;
    std::string hist_out;
    hist->add_option("--spec", spec_path, "code spec file")->required();
    hist->add_option("--snr", hist_snr, "Eb/N0 in dB")->required();
    hist->add_option("--frames", hist_frames, "frames");
    hist->add_option("--bins", hist_bins, "number of bins (width 0.5)");
    hist->add_flag("--all-zero", hist_allzero, "send the all-zero codeword");
    hist->add_option("--hist-out", hist_out, "output path");

    auto* vset = app.add_subcommand("vset", "traversal-count lower bound vs search complexity");
    double vset_snr = 3.0;
    std::int64_t vset_frames = 10'000, vset_cap = 10'000'000;
    vset->add_option("--spec", spec_path, "code spec file")->required();
    vset->add_option("--snr", vset_snr, "Eb/N0 in dB")->required();
    vset->add_option("--frames", vset_frames, "frames");
    vset->add_option("--cap", vset_cap, "per-frame traversal node cap");
    vset->add_option("--bias-frames", bias_frames, "genie frames per bias estimate");

    auto* cross = app.add_subcommand("ml-crosscheck",
                                     "unbounded search vs exhaustive argmin, small codes");
    double cross_snr = 2.0;
    std::int64_t cross_frames = 10'000;
    cross->add_option("--spec", spec_path, "code spec file")->required();
    cross->add_option("--snr", cross_snr, "Eb/N0 in dB")->required();
    cross->add_option("--frames", cross_frames, "frames");

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed())
            return cmd_construct(g, rule, n, k, r, taps, crc_taps, code_seed, beta, out_file);

        CodeSpec spec = CodeSpec::load_file(spec_path);

        if (simulate->parsed()) {
            // config file keys mirror the long flag names; flags win
            if (!config_path.empty()) {
                auto kv = read_config(config_path);
                auto take = [&](const char* key, std::string& dst, const CLI::Option* opt) {
                    if (!opt->count() && kv.count(key)) dst = kv.at(key);
                };
                take("decoder", decoder, simulate->get_option("--decoder"));
                take("snr", snr_list, simulate->get_option("--snr"));
                take("lambda_max_ratio", lambda_str, simulate->get_option("--lambda-max-ratio"));
                take("eta", eta_str, simulate->get_option("--eta"));
                take("m_max", m_max_str, simulate->get_option("--m-max"));
                take("bias", bias_str, simulate->get_option("--bias"));
                std::string tmp;
                if (!simulate->get_option("--frames")->count() && kv.count("frames"))
                    max_frames = std::stoll(kv.at("frames"));
                if (!simulate->get_option("--min-errors")->count() && kv.count("min_errors"))
                    min_errors = std::stoll(kv.at("min_errors"));
                if (!simulate->get_option("--list-size")->count() && kv.count("list_size"))
                    list_size = std::stoi(kv.at("list_size"));
                if (!simulate->get_option("--t-max")->count() && kv.count("t_max"))
                    t_max = std::stoi(kv.at("t_max"));
                if (!simulate->get_option("--alpha")->count() && kv.count("alpha"))
                    alpha = std::stod(kv.at("alpha"));
                if (!simulate->get_option("--flip-order-max")->count() && kv.count("flip_order_max"))
                    flip_order = std::stoi(kv.at("flip_order_max"));
                (void)tmp;
            }
            if (snr_list.empty()) {
                std::cerr << "no SNR points given (--snr or config key 'snr')\n";
                return kExitConfig;
            }

            SimConfig cfg;
            cfg.spec = spec;
            cfg.seed = g.seed;
            cfg.workers = g.workers;
            cfg.max_frames = max_frames;
            cfg.min_frames = min_frames;
            cfg.min_frame_errors = min_errors;
            std::stringstream ss(snr_list);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.snr_points_db.push_back(std::stod(tok));

            if (decoder == "sc") {
                cfg.decoder.kind = DecoderKind::kSc;
                cfg.decoder.sc_exact = !sc_minsum;
            } else if (decoder == "scl") {
                cfg.decoder.kind = DecoderKind::kScl;
                cfg.decoder.scl.list_size = list_size;
            } else if (decoder == "dscf") {
                cfg.decoder.kind = DecoderKind::kDscf;
                cfg.decoder.dscf = {.t_max = t_max, .alpha = alpha, .flip_order_max = flip_order};
            } else if (decoder == "scos") {
                cfg.decoder.kind = DecoderKind::kScos;
                double lam = parse_real_or_inf(lambda_str);
                cfg.decoder.lambda_max_ratio = std::isinf(lam) ? 0.0 : lam;
                cfg.decoder.eta =
                    eta_str == "auto" ? kAutoList
                                      : static_cast<std::size_t>(std::stoull(eta_str));
                cfg.decoder.m_max = parse_real_or_inf(m_max_str);
                cfg.decoder.budget_per_pass = !budget_per_phase;
                if (bias_str == "zero") {
                    cfg.bias_mode = BiasMode::kZero;
                } else if (bias_str == "auto") {
                    cfg.bias_mode = BiasMode::kFile;  // resolved through the cache below
                } else if (bias_str.rfind("profile:", 0) == 0) {
                    cfg.bias_mode = BiasMode::kFile;
                    cfg.bias_file = bias_str.substr(8);
                } else {
                    std::cerr << "bad --bias value: " << bias_str << "\n";
                    return kExitConfig;
                }
                cfg.bias_frames = bias_frames;
            } else {
                std::cerr << "unknown decoder: " << decoder << "\n";
                return kExitConfig;
            }

            if (csv_path.empty()) csv_path = out_path(g, "fer.csv");
            std::ofstream csv(csv_path);
            if (!csv) {
                std::cerr << "cannot write " << csv_path << "\n";
                return kExitConfig;
            }

            // per-point loop so rows stream out as they complete; the cached
            // genie profile is materialized here for bias=auto
            csv << "snr_db,frames,frame_errors,fer,undetected_errors,ufer,erasures,"
                   "avg_visit_ratio,ml_lb_errors,seed\n";
            SimResult all;
            for (std::size_t pt = 0; pt < cfg.snr_points_db.size(); ++pt) {
                SimConfig one = cfg;
                one.snr_points_db = {cfg.snr_points_db[pt]};
                if (cfg.decoder.kind == DecoderKind::kScos && cfg.bias_mode == BiasMode::kFile &&
                    cfg.bias_file.empty()) {
                    BiasProfile prof = bias_with_cache(g, spec, cfg.snr_points_db[pt],
                                                       bias_frames, mix_seed(g.seed, 0xb1a5));
                    char name[128];
                    std::snprintf(name, sizeof name, "bias_%016llx_%.4f.txt",
                                  (unsigned long long)spec.hash(), cfg.snr_points_db[pt]);
                    one.bias_file = out_path(g, name);
                }
                SimResult r = run_fer(one);
                std::stringstream row;
                write_csv(row, one, r);
                std::string line;
                std::getline(row, line);  // drop header
                if (std::getline(row, line)) {
                    csv << line << "\n" << std::flush;
                    std::printf("%s\n", line.c_str());
                }
                all.points.push_back(r.points[0]);
            }
            return kExitOk;
        }

        if (bias_cmd->parsed()) {
            BiasProfile prof = estimate_bias(spec, bias_snr, bias_frames, g.seed);
            if (bias_out.empty()) {
                char name[128];
                std::snprintf(name, sizeof name, "bias_%016llx_%.4f.txt",
                              (unsigned long long)spec.hash(), bias_snr);
                bias_out = out_path(g, name);
            }
            std::ofstream os(bias_out);
            save_bias(os, prof, spec.hash(), bias_snr, bias_frames, g.seed);
            std::printf("bias profile written to %s (b[N] = %.6g)\n", bias_out.c_str(),
                        prof.b.back());
            return kExitOk;
        }

        if (hist->parsed()) {
            PmHistogram h =
                pm_histogram(spec, hist_snr, hist_frames, hist_bins, g.seed, hist_allzero);
            if (hist_out.empty()) hist_out = out_path(g, "pm_hist.txt");
            std::ofstream os(hist_out);
            os << "# bin_lo density count (bin width " << h.bin_width << ", " << h.total
               << " frames)\n";
            for (std::size_t kbin = 0; kbin < h.counts.size(); ++kbin) {
                double lo = kbin * h.bin_width;
                double dens = h.counts[kbin] / (h.bin_width * h.total);
                char buf[96];
                std::snprintf(buf, sizeof buf, "%.6g %.6g %lld", lo, dens,
                              (long long)h.counts[kbin]);
                os << buf << "\n";
            }
            for (auto& [thr, cnt] : h.tails) {
                std::printf("tail above %.6g: %lld of %lld (%.3g)\n", thr, (long long)cnt,
                            (long long)h.total, h.tail_fraction(thr));
                os << "# tail_above " << thr << " " << cnt << " " << h.tail_fraction(thr) << "\n";
            }
            std::printf("histogram written to %s\n", hist_out.c_str());
            return kExitOk;
        }

        if (vset->parsed()) {
            BiasProfile prof =
                bias_with_cache(g, spec, vset_snr, bias_frames, mix_seed(g.seed, 0xb1a5));
            LemmaPoint lp = lemma1_bound(spec, vset_snr, vset_frames, g.seed, vset_cap, &prof);
            std::printf("snr %.6g: traversal bound %.6g, search ratio %.6g over %lld frames "
                        "(%lld saturated, %lld bound violations)\n",
                        vset_snr, lp.mean_bound, lp.mean_visit_ratio, (long long)lp.frames,
                        (long long)lp.saturated, (long long)lp.violations);
            if (lp.saturated) {
                std::cerr << "warning: traversal cap reached on some frames\n";
                return kExitSaturated;
            }
            return kExitOk;
        }

        if (cross->parsed()) {
            if (spec.dimension() > 20) {
                std::cerr << "cross-check needs K <= 20\n";
                return kExitConfig;
            }
            ScosDecoder scos(spec, {});
            Workspace ws(spec.n);
            double sigma = ebn0_to_sigma(cross_snr, spec.rate());
            std::int64_t disagreements = 0;
            for (std::int64_t f = 0; f < cross_frames; ++f) {
                Xoshiro256pp rng = frame_rng(g.seed, 0, static_cast<std::uint64_t>(f));
                BitVector payload(spec.payload_length());
                for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_bit());
                std::vector<double> llr =
                    transmit(spec.encode(spec.info_with_crc(payload)), sigma, rng);
                ScosOutcome a = scos.decode(llr);
                MlResult m = brute_force_ml(ws, spec, llr);
                if (a.pm != m.pm || a.u_hat != m.u) ++disagreements;
            }
            std::printf("%lld disagreements over %lld frames\n", (long long)disagreements,
                        (long long)cross_frames);
            return disagreements == 0 ? kExitOk : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
