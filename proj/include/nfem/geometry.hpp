#pragma once
#include <variant>
#include <vector>

#include "nfem/vec3.hpp"

namespace nfem {

enum class SurfaceKind { Plate, Sphere, Cylinder };

/// Parametric target surface x = h(y,z) in the target-local frame, placed in the
/// world frame at origin_offset. All three kinds satisfy h(0,0) = 0 and describe
/// only the antenna-facing branch (antennas at x < 0 see the surface front-on).
class TargetSurface {
public:
    static TargetSurface plate(double dy, double dz, const Vec3& offset = {});
    static TargetSurface sphere(double rho, const Vec3& offset = {});
    static TargetSurface cylinder(double rho, double length, const Vec3& offset = {});

    SurfaceKind kind() const { return kind_; }
    double plate_dy() const { return dy_; }
    double plate_dz() const { return dz_; }
    double radius() const { return rho_; }
    double cyl_length() const { return len_; }
    const Vec3& origin_offset() const { return offset_; }

    TargetSurface with_offset(const Vec3& offset) const;

    /// Strict interior of the shape-function chart.
    bool inside(double y, double z) const;
    /// Within 1e-9 of the chart/physical boundary.
    bool near_boundary(double y, double z) const;
    /// Closed physical bounds (plate edges, cylinder length).
    bool on_physical_surface(double y, double z) const;

    /// World-frame point for chart coordinates (y,z).
    Vec3 world_point(double y, double z) const;

    struct Box { double ylo, yhi, zlo, zhi; };
    /// Bounding box of the chart domain (local coordinates).
    Box chart_box() const;

private:
    TargetSurface() = default;
    SurfaceKind kind_ = SurfaceKind::Plate;
    double dy_ = 0.0, dz_ = 0.0;   // plate
    double rho_ = 0.0;             // sphere / cylinder
    double len_ = 0.0;             // cylinder
    Vec3 offset_;
};

/// Shape function value with first and second derivatives at one chart point.
struct SurfaceJet {
    double h;
    double hy, hz;
    double hyy, hzz, hyz;
};

/// Analytic jet of h at (y,z). Throws DomainError outside the open domain.
SurfaceJet surface_jet(const TargetSurface& surface, double y, double z);

/// Outward unit normal (-1, hy, hz)/sqrt(1 + hy^2 + hz^2); points toward x < 0.
Vec3 surface_normal(const TargetSurface& surface, double y, double z);

/// Per-antenna spherical geometry at a surface point: distance, elevation and
/// azimuth sines/cosines, and the spherical basis with e_r pointing from the
/// antenna toward the point.
struct SphericalView {
    double r;
    double sin_theta, cos_theta;
    double sin_phi, cos_phi;
    Vec3 e_r, e_theta, e_phi;
};

SphericalView spherical_view(const Vec3& antenna, const Vec3& surface_point);

struct LinearArray {
    int n;
    double spacing;
    double standoff;   // array plane at x = -standoff
};

struct PlanarArray {
    int ny, nz;
    double spacing;
    double standoff;
};

struct DistributedArray {
    int per_array;     // elements in each linear sub-array
    double spacing;    // intra-array spacing
    int count;         // number of sub-arrays along z
    double separation; // centre-to-centre sub-array spacing
    double standoff;
};

using LayoutSpec = std::variant<LinearArray, PlanarArray, DistributedArray>;

struct AntennaLayout {
    std::vector<Vec3> positions;
    int count() const { return static_cast<int>(positions.size()); }
    Vec3 centre() const;
};

AntennaLayout build_layout(const LayoutSpec& spec);

} // namespace nfem
