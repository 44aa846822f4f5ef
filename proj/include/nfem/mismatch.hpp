#pragma once
#include <string>
#include <vector>

#include "nfem/estimators.hpp"
#include "nfem/geometry.hpp"

namespace nfem {

/// "Genie" least-squares range estimate: fit the per-pair true round-trip path
/// lengths (through the stationary points of the true scene) with the chosen
/// model's path lengths at test range R, minimized by golden section plus one
/// quadratic polish (tolerance 1e-7 m). The candidate target moves along the
/// boresight (+x from the array centre). Throws BoundaryError when the minimum
/// sits on the search interval boundary.
double genie_ls_range(const TargetSurface& surface, const AntennaLayout& layout,
                      TargetModel model, double search_lo, double search_hi);

struct AnalyticBias {
    double bias = 0.0;            // R - Rhat to first order; positive when the
                                  // point model pulls the estimate toward the array
    double aperture_ratio = 0.0;  // range / array aperture
    bool far_field_valid = false; // range >= 10 x aperture
};

/// Closed-form point-model range bias: weighted sum of the per-pair differences
/// between reference-point and stationary-point path lengths, with the weights
/// given by the range derivative of the model path lengths.
AnalyticBias analytic_point_bias(const AntennaLayout& layout, const TargetSurface& surface,
                                 const Vec3& reference);

/// Constant-bias operating curve for a plate and a z-axis linear array:
/// R(alpha) = (N^2 - 1) Delta^2 / (48 alpha), from the second-order expansion
/// of the genie bias (quadratic in the spacing, reciprocal in the bias).
double equipotential_plate(double alpha, int n_antennas, double delta);

enum class SweepAxis { Range, Radius, Spacing, SubSpacing };
enum class SweepEstimator { Genie, Ml };

std::string sweep_axis_name(SweepAxis a);

/// One Fig-5/8/9-class bias sweep. `radius` doubles as the plate half-length
/// when the target is a plate. sub_count > 1 selects a distributed layout.
struct BiasSweepSpec {
    SurfaceKind target = SurfaceKind::Sphere;
    SweepAxis axis1 = SweepAxis::Range;
    SweepAxis axis2 = SweepAxis::Radius;
    std::vector<double> grid1;
    std::vector<double> grid2;
    SweepEstimator estimator = SweepEstimator::Genie;
    bool relative = false; // |Rhat - R| / R instead of |Rhat - R|

    // fixed parameters (overridden per cell by the swept axes)
    double range = 1.0;
    double radius = 1.0;
    double spacing = 0.086;
    double sub_spacing = 1.0;
    int n_antennas = 13;
    int sub_count = 1;
    double cyl_length = 1.75;

    // ML backend
    double carrier_hz = 3.5e9;
    double bandwidth_hz = 18e6;
    double oversample = 8.0;
    double search_lo_frac = 0.25; // search interval as fractions of the true range
    double search_hi_frac = 3.0;
};

struct BiasSweep {
    std::string axis1_name, axis2_name;
    std::vector<double> grid1, grid2;
    std::vector<std::vector<double>> bias; // [grid1][grid2]
};

BiasSweep bias_sweep(const BiasSweepSpec& spec);

/// Single-cell bias used by bias_sweep; exposed for tests and the acceptance run.
double bias_cell(const BiasSweepSpec& spec, double range, double radius, double spacing,
                 double sub_spacing);

} // namespace nfem
