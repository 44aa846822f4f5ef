#include "nfem/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"

namespace nfem {

Vec3 pose_reference(const EstimatorScene& scene, const Pose& pose) {
    const Vec3 c = scene.layout.centre();
    const Vec3 u{std::cos(pose.elevation) * std::cos(pose.azimuth),
                 std::sin(pose.elevation),
                 std::cos(pose.elevation) * std::sin(pose.azimuth)};
    return c + pose.range * u;
}

namespace {

PairResponse point_pair_terms(const EstimatorScene& scene, const Vec3& ref, int l, int lp) {
    const Vec3& a = scene.layout.positions[l];
    const Vec3& b = scene.layout.positions[lp];
    const double r1 = (ref - a).norm();
    const double r2 = (ref - b).norm();
    const double total = r1 + r2;
    const double phase = -scene.em.k * total;
    PairResponse pr;
    pr.tx_index = l;
    pr.rx_index = lp;
    pr.terms.push_back({std::complex<double>(std::cos(phase), std::sin(phase)) / (r1 * r2),
                        total / kSpeedOfLight});
    return pr;
}

struct PairAccumulator {
    std::complex<double> cross{0.0, 0.0};
    double energy = 0.0;
};

// <u, mu> and <mu, mu> on the sampling grid (rectangle rule).
PairAccumulator inner_products(const SampledSignal& u, const PairResponse& model,
                               double bandwidth, std::vector<std::complex<double>>& scratch) {
    PairAccumulator acc;
    const std::size_t n = u.samples.size();
    scratch.assign(n, {0.0, 0.0});
    for (const ResponseTerm& t : model.terms)
        for (std::size_t i = 0; i < n; ++i)
            scratch[i] += t.amplitude *
                          waveform_eval(bandwidth, u.t0 + static_cast<double>(i) * u.dt - t.delay);
    std::complex<double> cross{0.0, 0.0};
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cross += u.samples[i] * std::conj(scratch[i]);
        energy += std::norm(scratch[i]);
    }
    acc.cross = cross * u.dt;
    acc.energy = energy * u.dt;
    return acc;
}

double parabola_refine(const std::vector<double>& axis, const std::vector<double>& vals,
                       std::size_t i) {
    if (i == 0 || i + 1 >= vals.size()) return axis[i];
    const double vm = vals[i - 1], v0 = vals[i], vp = vals[i + 1];
    const double denom = vm - 2.0 * v0 + vp;
    if (denom >= -1e-300) return axis[i];
    double off = 0.5 * (vm - vp) / denom;
    off = std::clamp(off, -0.5, 0.5);
    return axis[i] + off * (axis[i + 1] - axis[i]);
}

} // namespace

std::vector<PairResponse> model_terms(const EstimatorScene& scene, TargetModel model,
                                      const Pose& pose) {
    const Vec3 ref = pose_reference(scene, pose);
    if (model == TargetModel::Point) {
        std::vector<PairResponse> out;
        const int n = scene.layout.count();
        out.reserve(static_cast<std::size_t>(n) * n);
        for (int l = 0; l < n; ++l)
            for (int lp = 0; lp < n; ++lp)
                out.push_back(point_pair_terms(scene, ref, l, lp));
        return out;
    }
    return all_pair_responses(scene.surface.with_offset(ref), scene.layout, scene.em);
}

std::vector<double> ml_objective_sweep(const std::vector<SampledSignal>& signals,
                                       const EstimatorScene& scene, TargetModel model,
                                       std::span<const Pose> poses) {
    const int n_ant = scene.layout.count();
    if (signals.size() != static_cast<std::size_t>(n_ant) * n_ant)
        throw ModelError("signals and layout disagree on the pair count");
    std::vector<std::complex<double>> cross(poses.size(), {0.0, 0.0});
    std::vector<double> energy(poses.size(), 0.0);
    std::vector<std::complex<double>> scratch;

    std::size_t sig = 0;
    for (int l = 0; l < n_ant; ++l) {
        for (int lp = 0; lp < n_ant; ++lp, ++sig) {
            const SampledSignal& u = signals[sig];
            if (u.tx_index != l || u.rx_index != lp)
                throw ModelError("signals must be ordered tx-major over all pairs");
            const Vec3& a = scene.layout.positions[l];
            const Vec3& b = scene.layout.positions[lp];
            bool have_hint = false;
            double hy = 0.0, hz = 0.0;
            for (std::size_t j = 0; j < poses.size(); ++j) {
                const Vec3 ref = pose_reference(scene, poses[j]);
                PairResponse pr;
                if (model == TargetModel::Point) {
                    pr = point_pair_terms(scene, ref, l, lp);
                } else {
                    pr.tx_index = l;
                    pr.rx_index = lp;
                    const TargetSurface posed = scene.surface.with_offset(ref);
                    const StationaryPointSolution sp =
                        have_hint ? solve_stationary_hinted(posed, a, b, scene.em.k, hy, hz)
                                  : solve_stationary(posed, a, b, scene.em.k).front();
                    hy = sp.y;
                    hz = sp.z;
                    have_hint = true;
                    if (sp.on_surface)
                        pr.terms.push_back({spa_coefficient(posed, a, b, sp, scene.em),
                                            sp.total_distance / kSpeedOfLight});
                }
                const PairAccumulator acc =
                    inner_products(u, pr, scene.waveform.bandwidth, scratch);
                cross[j] += acc.cross;
                energy[j] += acc.energy;
            }
        }
    }

    std::vector<double> out(poses.size());
    for (std::size_t j = 0; j < poses.size(); ++j) {
        if (energy[j] <= 0.0)
            throw ModelError("model energy is zero at a candidate pose");
        out[j] = std::norm(cross[j]) / energy[j];
    }
    return out;
}

double ml_objective(const std::vector<SampledSignal>& signals, const EstimatorScene& scene,
                    TargetModel model, const Pose& pose) {
    const Pose p[1] = {pose};
    return ml_objective_sweep(signals, scene, model, p)[0];
}

namespace {

std::vector<double> to_db(const std::vector<double>& vals) {
    const double peak = *std::max_element(vals.begin(), vals.end());
    std::vector<double> db(vals.size(), -400.0);
    if (peak <= 0.0) return db; // all-zero signals: flat floor, entries stay finite
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double r = vals[i] / peak;
        if (r > 1e-40) db[i] = 10.0 * std::log10(r);
    }
    return db;
}

} // namespace

ProfileFunction range_profile(const EstimatorScene& scene,
                              const std::vector<SampledSignal>& signals, TargetModel model,
                              const std::vector<double>& range_grid) {
    if (range_grid.size() < 2) throw ConfigError("range profile needs at least 2 grid points");
    for (std::size_t i = 1; i < range_grid.size(); ++i)
        if (range_grid[i] <= range_grid[i - 1])
            throw ConfigError("range grid must be strictly increasing");
    std::vector<Pose> poses(range_grid.size());
    for (std::size_t i = 0; i < range_grid.size(); ++i) poses[i] = {range_grid[i], 0.0, 0.0};
    const std::vector<double> vals = ml_objective_sweep(signals, scene, model, poses);
    ProfileFunction pf;
    pf.axis = range_grid;
    pf.values_db = to_db(vals);
    const std::size_t i0 = static_cast<std::size_t>(
        std::max_element(vals.begin(), vals.end()) - vals.begin());
    pf.argmax = parabola_refine(range_grid, vals, i0);
    return pf;
}

AmbiguityMap ambiguity_map(const EstimatorScene& scene,
                           const std::vector<SampledSignal>& signals, TargetModel model,
                           const std::vector<double>& range_grid,
                           const std::vector<double>& angle_grid, AngleAxis axis,
                           const Pose& truth) {
    std::vector<Pose> poses;
    poses.reserve(range_grid.size() * angle_grid.size());
    for (double r : range_grid)
        for (double a : angle_grid) {
            Pose p = truth;
            p.range = r;
            (axis == AngleAxis::Azimuth ? p.azimuth : p.elevation) = a;
            poses.push_back(p);
        }
    const std::vector<double> vals = ml_objective_sweep(signals, scene, model, poses);
    AmbiguityMap map;
    map.range_axis = range_grid;
    map.angle_axis = angle_grid;
    const double peak = *std::max_element(vals.begin(), vals.end());
    map.values_db.assign(range_grid.size(), std::vector<double>(angle_grid.size()));
    std::size_t best = 0;
    for (std::size_t i = 0, k = 0; i < range_grid.size(); ++i)
        for (std::size_t j = 0; j < angle_grid.size(); ++j, ++k) {
            const double r = vals[k] / peak;
            map.values_db[i][j] = r > 1e-40 ? 10.0 * std::log10(r) : -400.0;
            if (vals[k] > vals[best]) best = k;
        }
    map.argmax_range = range_grid[best / angle_grid.size()];
    map.argmax_angle = angle_grid[best % angle_grid.size()];
    return map;
}

Estimate3d estimate_3d(const EstimatorScene& scene, const std::vector<SampledSignal>& signals,
                       TargetModel model, const std::vector<double>& range_grid,
                       const std::vector<double>& azimuth_grid,
                       const std::vector<double>& elevation_grid) {
    std::vector<Pose> poses;
    poses.reserve(range_grid.size() * azimuth_grid.size() * elevation_grid.size());
    for (double r : range_grid)
        for (double az : azimuth_grid)
            for (double el : elevation_grid) poses.push_back({r, az, el});
    const std::vector<double> vals = ml_objective_sweep(signals, scene, model, poses);

    // argmax with deterministic tie-breaking
    std::size_t best = 0;
    auto better = [&](std::size_t i, std::size_t j) {
        if (vals[i] != vals[j]) return vals[i] > vals[j];
        const Pose &a = poses[i], &b = poses[j];
        if (a.range != b.range) return a.range < b.range;
        if (std::abs(a.azimuth) != std::abs(b.azimuth))
            return std::abs(a.azimuth) < std::abs(b.azimuth);
        return std::abs(a.elevation) < std::abs(b.elevation);
    };
    for (std::size_t i = 1; i < poses.size(); ++i)
        if (better(i, best)) best = i;

    const std::size_t nel = elevation_grid.size();
    const std::size_t naz = azimuth_grid.size();
    const std::size_t ir = best / (naz * nel);
    const std::size_t ia = (best / nel) % naz;
    const std::size_t ie = best % nel;

    auto axis_slice = [&](int which, std::size_t idx) {
        std::size_t base;
        switch (which) {
        case 0: base = idx * naz * nel + ia * nel + ie; break;
        case 1: base = ir * naz * nel + idx * nel + ie; break;
        default: base = ir * naz * nel + ia * nel + idx; break;
        }
        return vals[base];
    };
    auto refine_axis = [&](const std::vector<double>& grid, std::size_t i, int which) {
        std::vector<double> slice(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) slice[j] = axis_slice(which, j);
        return parabola_refine(grid, slice, i);
    };
    Estimate3d est;
    est.range = refine_axis(range_grid, ir, 0);
    est.azimuth = refine_axis(azimuth_grid, ia, 1);
    est.elevation = refine_axis(elevation_grid, ie, 2);
    return est;
}

LobeMetricsResult lobe_metrics(const ProfileFunction& profile) {
    const std::vector<double>& v = profile.values_db;
    const std::vector<double>& x = profile.axis;
    if (v.size() < 3) throw MetricsError("profile too short for lobe metrics");
    const std::size_t i0 = static_cast<std::size_t>(
        std::max_element(v.begin(), v.end()) - v.begin());

    auto cross_left = [&]() -> double {
        for (std::size_t i = i0; i > 0; --i)
            if (v[i - 1] <= -3.0)
                return x[i - 1] + (x[i] - x[i - 1]) * (-3.0 - v[i - 1]) / (v[i] - v[i - 1]);
        throw MetricsError("-3 dB crossing left of the peak lies outside the axis");
    };
    auto cross_right = [&]() -> double {
        for (std::size_t i = i0; i + 1 < v.size(); ++i)
            if (v[i + 1] <= -3.0)
                return x[i] + (x[i + 1] - x[i]) * (v[i] - (-3.0)) / (v[i] - v[i + 1]);
        throw MetricsError("-3 dB crossing right of the peak lies outside the axis");
    };
    const double wl = cross_left();
    const double wr = cross_right();

    // extend the main-lobe support outward to the nearest local minima
    std::size_t jl = i0;
    while (jl > 0 && v[jl - 1] < v[jl]) --jl;
    std::size_t jr = i0;
    while (jr + 1 < v.size() && v[jr + 1] < v[jr]) ++jr;

    double psl = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (i < jl || i > jr) psl = std::max(psl, v[i]);

    return {wr - wl, psl, profile.argmax};
}

} // namespace nfem
