#pragma once
#include <span>
#include <vector>

#include "nfem/signal_synth.hpp"
#include "nfem/spa_core.hpp"

namespace nfem {

/// Candidate target pose: range from the array centre plus azimuth (about the
/// x axis toward z) and elevation (toward y), both zero on boresight.
struct Pose {
    double range = 0.0;
    double azimuth = 0.0;   // rad
    double elevation = 0.0; // rad
};

enum class TargetModel { Extended, Point };

/// Everything the matched-filter estimator needs to build model signals:
/// the target shape prototype (pose overrides its placement), the layout,
/// the waveform, the shared time grid and EM constants.
struct EstimatorScene {
    TargetSurface surface;
    AntennaLayout layout;
    Waveform waveform;
    TimeGrid grid;
    EmParams em;
};

/// World position of the pose's target reference point.
Vec3 pose_reference(const EstimatorScene& scene, const Pose& pose);

/// Model response terms for every pair at the candidate pose. Point model:
/// amplitude 1/(r_tx r_rx), phase -k (r_tx + r_rx), delay (r_tx + r_rx)/c.
/// Extended model: stationary-phase pair responses of the reposed surface.
std::vector<PairResponse> model_terms(const EstimatorScene& scene, TargetModel model,
                                      const Pose& pose);

/// Matched-filter ML ratio |sum_pairs <u, mu>|^2 / sum_pairs <mu, mu>, with the
/// inner products taken as rectangle-rule sums on the scene grid.
/// Throws ModelError when the model energy vanishes.
double ml_objective(const std::vector<SampledSignal>& signals, const EstimatorScene& scene,
                    TargetModel model, const Pose& pose);

/// ml_objective over a pose list, reusing per-pair solver state between poses.
std::vector<double> ml_objective_sweep(const std::vector<SampledSignal>& signals,
                                       const EstimatorScene& scene, TargetModel model,
                                       std::span<const Pose> poses);

struct ProfileFunction {
    std::vector<double> axis;      // test ranges, m
    std::vector<double> values_db; // normalized to 0 dB peak
    double argmax = 0.0;           // parabola-refined peak location
};

/// Log-ML range profile at zero test angles, normalized to its peak.
ProfileFunction range_profile(const EstimatorScene& scene,
                              const std::vector<SampledSignal>& signals, TargetModel model,
                              const std::vector<double>& range_grid);

enum class AngleAxis { Azimuth, Elevation };

struct AmbiguityMap {
    std::vector<double> range_axis;
    std::vector<double> angle_axis; // rad
    std::vector<std::vector<double>> values_db; // [range][angle]
    double argmax_range = 0.0;
    double argmax_angle = 0.0;
};

/// 2D sweep over (range, one angle); the other angle is pinned to the truth pose.
AmbiguityMap ambiguity_map(const EstimatorScene& scene,
                           const std::vector<SampledSignal>& signals, TargetModel model,
                           const std::vector<double>& range_grid,
                           const std::vector<double>& angle_grid, AngleAxis axis,
                           const Pose& truth);

struct Estimate3d {
    double range = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
};

/// Exhaustive grid argmax over (range, azimuth, elevation) followed by one
/// quadratic refinement per axis. Ties break toward the smallest range, then
/// the smallest |azimuth|, then the smallest |elevation|.
Estimate3d estimate_3d(const EstimatorScene& scene, const std::vector<SampledSignal>& signals,
                       TargetModel model, const std::vector<double>& range_grid,
                       const std::vector<double>& azimuth_grid,
                       const std::vector<double>& elevation_grid);

struct LobeMetricsResult {
    double width_3db = 0.0;
    double peak_sidelobe_db = 0.0; // -inf when the profile has a single lobe
    double argmax = 0.0;
};

/// Main-lobe -3 dB width (linear interpolation of the crossings) and the peak
/// level outside the main lobe's support extended to the nearest local minima.
/// Throws MetricsError when the -3 dB crossings are outside the axis.
LobeMetricsResult lobe_metrics(const ProfileFunction& profile);

} // namespace nfem
