#pragma once
#include <complex>
#include <vector>

#include "nfem/geometry.hpp"
#include "nfem/vec3.hpp"

namespace nfem {

/// Specular point of one antenna pair with the phase expansion around it.
struct StationaryPointSolution {
    Vec3 point;            // world frame
    double y = 0.0, z = 0.0; // chart coordinates
    double r_tx = 0.0, r_rx = 0.0;
    double total_distance = 0.0;
    double phase = 0.0;    // psi(x_s) = -k (r_tx + r_rx)
    SymMat2 hess_psi;      // rad / m^2
    double det = 0.0;
    int signature = 0;     // n+ - n- of hess_psi
    bool on_boundary = false;
    bool on_surface = true;
};

/// Jet of h with the plate extended to the full plane and the cylinder to
/// infinite length (curvature bounds still apply). The Fermat problem is
/// solved on the unbounded shape; physical bounds only set on_surface flags.
SurfaceJet surface_jet_unbounded(const TargetSurface& surface, double y, double z);

/// Round-trip path length r_tx + r_rx at a chart point.
double path_length(const TargetSurface& surface, double y, double z,
                   const Vec3& tx, const Vec3& rx);

/// Gradient of the path length over (y,z).
void path_gradient(const TargetSurface& surface, double y, double z,
                   const Vec3& tx, const Vec3& rx, double& gy, double& gz);

/// Hessian of the path length over (y,z).
SymMat2 path_hessian(const TargetSurface& surface, double y, double z,
                     const Vec3& tx, const Vec3& rx);

/// Analytic Hessian of the phase psi = -k (r_tx + r_rx) at a chart point.
SymMat2 phase_hessian(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                      double y, double z, double k);
SymMat2 phase_hessian(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                      const StationaryPointSolution& sp, double k);

/// All stationary points of the pair's phase, sorted by total distance.
/// Plate: closed-form specular point (same-sign antenna x required).
/// Sphere/cylinder: multi-start Newton on the path length, polished to a
/// gradient residual <= 1e-8 (equivalently |grad psi| <= 1e-8 k).
std::vector<StationaryPointSolution>
solve_stationary(const TargetSurface& surface, const Vec3& tx, const Vec3& rx, double k);

struct FermatResult {
    double y = 0.0, z = 0.0;
    double residual = 0.0; // |grad (r_tx + r_rx)| at the iterate
    bool converged = false;
};

/// Damped-Newton Fermat minimization of the path length from one start point,
/// on any kind (including the plate, where it cross-checks the closed form).
FermatResult fermat_minimize(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                             double y_start, double z_start);

/// Minimizing stationary point only, starting Newton from a chart-point hint
/// (e.g. the solution at a neighbouring sweep cell). Falls back to the full
/// multi-start solve when the hinted descent stalls.
StationaryPointSolution solve_stationary_hinted(const TargetSurface& surface, const Vec3& tx,
                                                const Vec3& rx, double k, double y_hint,
                                                double z_hint);

enum class PatternKind { Isotropic, Cosine };

/// Shared EM constants of a scenario: wavenumber, antenna length^2 x current,
/// and the element radiation pattern f(theta).
struct EmParams {
    double k;
    double l2_i0 = 1.0;
    PatternKind pattern = PatternKind::Isotropic;
};

double pattern_gain(PatternKind pattern, double cos_theta);

/// Stationary-phase coefficient of one retained stationary point:
///   (-k^2 eta L^2 I0 / 8 pi^2) * g_geo(x_s) * 2 pi * |det|^{-1/2}
///   * e^{j psi(x_s)} * e^{j pi/4 sgn}.
/// Throws DegenerateHessianError when |det| < 1e-12 k^2.
std::complex<double> spa_coefficient(const TargetSurface& surface, const Vec3& tx,
                                     const Vec3& rx, const StationaryPointSolution& sp,
                                     const EmParams& em);

struct ResponseTerm {
    std::complex<double> amplitude;
    double delay; // s
};

/// Per-(tx, rx) response: one term per on-surface stationary point.
struct PairResponse {
    int tx_index = 0;
    int rx_index = 0;
    std::vector<ResponseTerm> terms;
};

PairResponse pair_response(const TargetSurface& surface, const AntennaLayout& layout,
                           int l, int lp, const EmParams& em);

/// Responses for every (tx, rx) pair of the layout, tx-major order.
std::vector<PairResponse> all_pair_responses(const TargetSurface& surface,
                                             const AntennaLayout& layout,
                                             const EmParams& em);

} // namespace nfem
