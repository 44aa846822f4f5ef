#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "nfem/spa_core.hpp"

namespace nfem {

/// Normalized sinc transmit waveform s(t) = sin(pi B t) / (pi B t).
struct Waveform {
    double bandwidth; // Hz
};

/// Evaluate the waveform; the t = 0 limit is exact.
double waveform_eval(double bandwidth, double t);

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n = 0;
    double t(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double t_end() const { return t(n ? n - 1 : 0); }
};

/// Grid covering [min delay - 4/B, max delay + 4/B] at the given oversampling
/// of the bandwidth (dt = 1 / (oversample * B)).
TimeGrid make_grid(const std::vector<PairResponse>& responses, const Waveform& wf,
                   double oversample = 8.0);
/// Same coverage, for delays known to lie in [delay_lo, delay_hi].
TimeGrid make_grid(double delay_lo, double delay_hi, const Waveform& wf,
                   double oversample = 8.0);

struct NoiseSpec {
    double variance = 0.0; // per complex sample
    std::uint64_t seed = 0;
};

struct SampledSignal {
    int tx_index = 0;
    int rx_index = 0;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<std::complex<double>> samples;
};

/// u[i] = xi * sum_terms amplitude * s(t_i - delay) + w[i], with w drawn from a
/// counter-based substream keyed by (seed, tx, rx). Throws ConfigError when the
/// grid does not cover every delay with a 4/B guard.
std::vector<SampledSignal> synthesize(const std::vector<PairResponse>& responses,
                                      const Waveform& wf, const TimeGrid& grid,
                                      std::complex<double> xi, const NoiseSpec& noise);

} // namespace nfem
