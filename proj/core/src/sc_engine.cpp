#include "gncoset/sc_engine.hpp"

namespace gncoset {

ScResult sc_decode(Workspace& ws, const CodeSpec& spec, std::span<const double> llr) {
    int N = spec.block_length;
    ws.reset(llr);
    for (int i = 1; i <= N; ++i) {
        double l = ws.mem.decision_llr(i - 1);
        std::uint8_t v = spec.frozen(i) ? frozen_value(spec, ws.path.data(), i) : hard_dec(l);
        ws.path[i - 1] = v;
        ws.pm[i] = calc_pm(ws.pm[i - 1], v, l);
        ws.mem.write_decision(i - 1, v);
        ws.committed = i;
    }
    return {BitVector(ws.path.begin(), ws.path.end()), ws.pm[N]};
}

double forced_pm(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                 const BitVector& u) {
    int N = spec.block_length;
    ws.reset(llr);
    double m = 0.0;
    for (int i = 1; i <= N; ++i) {
        double l = ws.mem.decision_llr(i - 1);
        m = calc_pm(m, u[i - 1], l);
        ws.path[i - 1] = u[i - 1];
        ws.mem.write_decision(i - 1, u[i - 1]);
        ws.committed = i;
    }
    return m;
}

void genie_phase_errors(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                        const BitVector& u, std::span<std::int64_t> counts) {
    int N = spec.block_length;
    ws.reset(llr);
    for (int i = 1; i <= N; ++i) {
        double l = ws.mem.decision_llr(i - 1);
        if (hard_dec(l) != u[i - 1]) counts[i] += 1;
        ws.path[i - 1] = u[i - 1];
        ws.mem.write_decision(i - 1, u[i - 1]);
        ws.committed = i;
    }
}

int genie_first_error(Workspace& ws, const CodeSpec& spec, std::span<const double> llr,
                      const BitVector& u) {
    int N = spec.block_length;
    ws.reset(llr);
    for (int i = 1; i <= N; ++i) {
        double l = ws.mem.decision_llr(i - 1);
        if (!spec.frozen(i) && hard_dec(l) != u[i - 1]) return i;
        ws.path[i - 1] = u[i - 1];
        ws.mem.write_decision(i - 1, u[i - 1]);
        ws.committed = i;
    }
    return 0;
}

}  // namespace gncoset
