#pragma once
#include <complex>
#include <cstdint>

#include "nfem/geometry.hpp"
#include "nfem/spa_core.hpp"
#include "nfem/vec3.hpp"

namespace nfem {

/// Discretisation of the physical-optics surface integral. The step is taken in
/// surface arc length so the phase stays resolved on curved targets; plate meshes
/// live in (y,z), sphere meshes in cap angles, cylinder meshes in (y, arc angle).
struct QuadratureMesh {
    double samples_per_wavelength = 10.0;
    std::uint64_t node_budget = 20'000'000;
    /// Zero the current where either antenna is geometrically shadowed. The
    /// physical-optics current exists only on the lit side; near-field antennas
    /// see less than the full front branch.
    bool lit_region_only = true;
};

/// Node count the mesh would use for this surface at this wavenumber.
std::uint64_t quadrature_nodes(const TargetSurface& surface, double k,
                               const QuadratureMesh& mesh);

/// Brute-force midpoint quadrature of the received-signal surface integral at
/// the carrier (waveform factor 1). Same scale as spa_coefficient. Deterministic
/// fixed-order compensated summation. Throws BudgetError over the node budget.
std::complex<double> po_quadrature(const TargetSurface& surface, const Vec3& tx,
                                   const Vec3& rx, const EmParams& em,
                                   const QuadratureMesh& mesh);

struct GridSpecular {
    double y = 0.0, z = 0.0;
    Vec3 point;
    double total_distance = 0.0;
};

/// Brute-force Fermat minimizer: grid_n x grid_n lattice over the chart domain,
/// refined by 3 local zoom levels of factor 10.
GridSpecular grid_specular(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                           int grid_n);

/// Central second differences of psi(y,z) = -k (r_tx + r_rx).
/// Throws DomainError if the stencil leaves the chart domain.
SymMat2 fd_hessian(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                   double y, double z, double step, double k);

} // namespace nfem
