#include "nfem/signal_synth.hpp"

#include <algorithm>
#include <cmath>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"
#include "nfem/rng.hpp"

namespace nfem {

double waveform_eval(double bandwidth, double t) {
    const double x = kPi * bandwidth * t;
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

namespace {

void delay_range(const std::vector<PairResponse>& responses, double& lo, double& hi) {
    lo = 1e300;
    hi = -1e300;
    for (const PairResponse& pr : responses)
        for (const ResponseTerm& t : pr.terms) {
            lo = std::min(lo, t.delay);
            hi = std::max(hi, t.delay);
        }
    if (lo > hi) { // no terms anywhere
        lo = 0.0;
        hi = 0.0;
    }
}

} // namespace

TimeGrid make_grid(double delay_lo, double delay_hi, const Waveform& wf, double oversample) {
    if (wf.bandwidth <= 0.0) throw ConfigError("waveform bandwidth must be positive");
    if (oversample < 2.0) throw ConfigError("grid oversampling must be >= 2");
    const double guard = 4.0 / wf.bandwidth;
    TimeGrid g;
    g.dt = 1.0 / (oversample * wf.bandwidth);
    g.t0 = delay_lo - guard;
    g.n = static_cast<std::size_t>(std::ceil((delay_hi + guard - g.t0) / g.dt)) + 1;
    return g;
}

TimeGrid make_grid(const std::vector<PairResponse>& responses, const Waveform& wf,
                   double oversample) {
    double lo, hi;
    delay_range(responses, lo, hi);
    return make_grid(lo, hi, wf, oversample);
}

std::vector<SampledSignal> synthesize(const std::vector<PairResponse>& responses,
                                      const Waveform& wf, const TimeGrid& grid,
                                      std::complex<double> xi, const NoiseSpec& noise) {
    if (grid.n == 0 || grid.dt <= 0.0) throw ConfigError("empty synthesis grid");
    double lo, hi;
    delay_range(responses, lo, hi);
    const double guard = 4.0 / wf.bandwidth;
    const double eps = 1e-12;
    bool any = false;
    for (const PairResponse& pr : responses)
        if (!pr.terms.empty()) any = true;
    if (any && (grid.t0 > lo - guard + eps || grid.t_end() < hi + guard - eps))
        throw ConfigError("synthesis grid does not cover all delays with a 4/B guard");

    std::vector<SampledSignal> out;
    out.reserve(responses.size());
    for (const PairResponse& pr : responses) {
        SampledSignal s;
        s.tx_index = pr.tx_index;
        s.rx_index = pr.rx_index;
        s.t0 = grid.t0;
        s.dt = grid.dt;
        s.samples.assign(grid.n, {0.0, 0.0});
        for (const ResponseTerm& term : pr.terms)
            for (std::size_t i = 0; i < grid.n; ++i)
                s.samples[i] += xi * term.amplitude *
                                waveform_eval(wf.bandwidth, grid.t(i) - term.delay);
        if (noise.variance > 0.0) {
            const CounterRng rng(noise.seed, static_cast<std::uint64_t>(pr.tx_index),
                                 static_cast<std::uint64_t>(pr.rx_index));
            for (std::size_t i = 0; i < grid.n; ++i)
                s.samples[i] += rng.complex_normal(i, noise.variance);
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace nfem
