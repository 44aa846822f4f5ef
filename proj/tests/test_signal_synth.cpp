#include <doctest.h>

#include <cmath>
#include <complex>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"
#include "nfem/rng.hpp"
#include "nfem/signal_synth.hpp"

using namespace nfem;

TEST_SUITE("signal_synth") {

TEST_CASE("waveform values") {
    const double B = 100e6;
    CHECK(waveform_eval(B, 0.0) == 1.0);
    CHECK(std::abs(waveform_eval(B, 1.0 / B)) < 1e-12);
    CHECK(waveform_eval(B, 1.0 / (2 * B)) == doctest::Approx(2.0 / kPi).epsilon(1e-12));
    CHECK(waveform_eval(B, -1.0 / (2 * B)) == doctest::Approx(2.0 / kPi).epsilon(1e-12));
}

namespace {

std::vector<PairResponse> single_term(std::complex<double> amp, double delay) {
    PairResponse pr;
    pr.tx_index = 0;
    pr.rx_index = 0;
    pr.terms.push_back({amp, delay});
    return {pr};
}

} // namespace

TEST_CASE("noise-free synthesis peaks at the delay") {
    const Waveform wf{100e6};
    const std::complex<double> amp{2.5, -1.0};
    const double delay = 26.7e-9;
    const auto responses = single_term(amp, delay);
    const TimeGrid grid = make_grid(responses, wf);
    const auto sig = synthesize(responses, wf, grid, {1.0, 0.0}, {});
    REQUIRE(sig.size() == 1);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < sig[0].samples.size(); ++i)
        if (std::abs(sig[0].samples[i]) > std::abs(sig[0].samples[imax])) imax = i;
    const double t_peak = grid.t(imax);
    CHECK(std::abs(t_peak - delay) <= grid.dt / 2 + 1e-15);
    CHECK(std::abs(sig[0].samples[imax]) == doctest::Approx(std::abs(amp)).epsilon(0.01));
}

TEST_CASE("xi scales every sample linearly") {
    const Waveform wf{50e6};
    const auto responses = single_term({1.0, 0.5}, 10e-9);
    const TimeGrid grid = make_grid(responses, wf);
    const std::complex<double> xi = 2.0 * std::polar(1.0, kPi / 3.0);
    const auto s1 = synthesize(responses, wf, grid, {1.0, 0.0}, {});
    const auto s2 = synthesize(responses, wf, grid, xi, {});
    for (std::size_t i = 0; i < s1[0].samples.size(); ++i)
        CHECK(std::abs(s2[0].samples[i] - xi * s1[0].samples[i]) <=
              1e-15 * std::abs(xi * s1[0].samples[i]) + 1e-30);
}

TEST_CASE("grid must cover the delays") {
    const Waveform wf{100e6};
    const auto responses = single_term({1.0, 0.0}, 100e-9);
    TimeGrid grid = make_grid(responses, wf);
    grid.n /= 4; // truncate the tail
    CHECK_THROWS_AS(synthesize(responses, wf, grid, {1.0, 0.0}, {}), ConfigError);
}

TEST_CASE("sinc energy identity within 2 percent") {
    const Waveform wf{100e6};
    const std::complex<double> amp{3.0, 4.0};
    const auto responses = single_term(amp, 40e-9);
    const TimeGrid grid = make_grid(responses, wf, 8.0);
    const auto sig = synthesize(responses, wf, grid, {1.0, 0.0}, {});
    double energy = 0.0;
    for (const auto& v : sig[0].samples) energy += std::norm(v);
    energy *= grid.dt;
    const double expect = std::norm(amp) / wf.bandwidth;
    CHECK(energy == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("noise reproducibility and pair decorrelation") {
    const Waveform wf{100e6};
    PairResponse p00, p01;
    p00.tx_index = 0; p00.rx_index = 0;
    p01.tx_index = 0; p01.rx_index = 1;
    const std::vector<PairResponse> responses{p00, p01};
    TimeGrid grid;
    grid.t0 = 0.0;
    grid.dt = 1e-9;
    grid.n = 10000;
    const NoiseSpec noise{0.7, 12345};
    const auto a = synthesize(responses, wf, grid, {1.0, 0.0}, noise);
    const auto b = synthesize(responses, wf, grid, {1.0, 0.0}, noise);
    // bit-identical across runs
    for (std::size_t i = 0; i < grid.n; ++i) {
        CHECK(a[0].samples[i] == b[0].samples[i]);
        CHECK(a[1].samples[i] == b[1].samples[i]);
    }
    // empirical statistics: variance near 0.7, cross-pair correlation small
    std::complex<double> corr{0.0, 0.0};
    double var0 = 0.0, var1 = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        corr += a[0].samples[i] * std::conj(a[1].samples[i]);
        var0 += std::norm(a[0].samples[i]);
        var1 += std::norm(a[1].samples[i]);
    }
    CHECK(var0 / grid.n == doctest::Approx(0.7).epsilon(0.1));
    CHECK(std::abs(corr) / std::sqrt(var0 * var1) < 0.05);
    // different seed decorrelates the same pair
    const auto c = synthesize(responses, wf, grid, {1.0, 0.0}, {0.7, 999});
    std::complex<double> corr2{0.0, 0.0};
    double varc = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        corr2 += a[0].samples[i] * std::conj(c[0].samples[i]);
        varc += std::norm(c[0].samples[i]);
    }
    CHECK(std::abs(corr2) / std::sqrt(var0 * varc) < 0.05);
}

TEST_CASE("counter rng is order independent") {
    const CounterRng r(77, 3, 5);
    const double u9 = r.uniform(9);
    const double u2 = r.uniform(2);
    CHECK(r.uniform(9) == u9);
    CHECK(r.uniform(2) == u2);
    CHECK(u9 != u2);
    CHECK(u9 > 0.0);
    CHECK(u9 <= 1.0);
}

} // TEST_SUITE
