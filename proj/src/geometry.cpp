#include "nfem/geometry.hpp"

#include <cmath>
#include <string>

#include "nfem/errors.hpp"

namespace nfem {

namespace {
constexpr double kBoundaryTol = 1e-9;

[[noreturn]] void domain_fail(const char* what, double v) {
    throw DomainError(std::string("surface domain violation: ") + what + " = " +
                      std::to_string(v));
}
} // namespace

TargetSurface TargetSurface::plate(double dy, double dz, const Vec3& offset) {
    if (dy <= 0.0 || dz <= 0.0) throw ConfigError("plate dimensions must be positive");
    TargetSurface s;
    s.kind_ = SurfaceKind::Plate;
    s.dy_ = dy;
    s.dz_ = dz;
    s.offset_ = offset;
    return s;
}

TargetSurface TargetSurface::sphere(double rho, const Vec3& offset) {
    if (rho <= 0.0) throw ConfigError("sphere radius must be positive");
    TargetSurface s;
    s.kind_ = SurfaceKind::Sphere;
    s.rho_ = rho;
    s.offset_ = offset;
    return s;
}

TargetSurface TargetSurface::cylinder(double rho, double length, const Vec3& offset) {
    if (rho <= 0.0) throw ConfigError("cylinder radius must be positive");
    if (length <= 0.0) throw ConfigError("cylinder length must be positive");
    TargetSurface s;
    s.kind_ = SurfaceKind::Cylinder;
    s.rho_ = rho;
    s.len_ = length;
    s.offset_ = offset;
    return s;
}

TargetSurface TargetSurface::with_offset(const Vec3& offset) const {
    TargetSurface s = *this;
    s.offset_ = offset;
    return s;
}

bool TargetSurface::inside(double y, double z) const {
    switch (kind_) {
    case SurfaceKind::Plate:
        return std::abs(y) < dy_ / 2 && std::abs(z) < dz_ / 2;
    case SurfaceKind::Sphere:
        return y * y + z * z < rho_ * rho_;
    case SurfaceKind::Cylinder:
        return std::abs(y) < len_ / 2 && std::abs(z) < rho_;
    }
    return false;
}

bool TargetSurface::near_boundary(double y, double z) const {
    switch (kind_) {
    case SurfaceKind::Plate:
        return dy_ / 2 - std::abs(y) < kBoundaryTol || dz_ / 2 - std::abs(z) < kBoundaryTol;
    case SurfaceKind::Sphere:
        return rho_ - std::hypot(y, z) < kBoundaryTol;
    case SurfaceKind::Cylinder:
        return len_ / 2 - std::abs(y) < kBoundaryTol || rho_ - std::abs(z) < kBoundaryTol;
    }
    return false;
}

bool TargetSurface::on_physical_surface(double y, double z) const {
    switch (kind_) {
    case SurfaceKind::Plate:
        return std::abs(y) <= dy_ / 2 && std::abs(z) <= dz_ / 2;
    case SurfaceKind::Sphere:
        return y * y + z * z < rho_ * rho_;
    case SurfaceKind::Cylinder:
        return std::abs(y) <= len_ / 2 && std::abs(z) < rho_;
    }
    return false;
}

Vec3 TargetSurface::world_point(double y, double z) const {
    const SurfaceJet j = surface_jet(*this, y, z);
    return offset_ + Vec3{j.h, y, z};
}

TargetSurface::Box TargetSurface::chart_box() const {
    switch (kind_) {
    case SurfaceKind::Plate:
        return {-dy_ / 2, dy_ / 2, -dz_ / 2, dz_ / 2};
    case SurfaceKind::Sphere:
        return {-rho_, rho_, -rho_, rho_};
    case SurfaceKind::Cylinder:
        return {-len_ / 2, len_ / 2, -rho_, rho_};
    }
    return {};
}

SurfaceJet surface_jet(const TargetSurface& surface, double y, double z) {
    switch (surface.kind()) {
    case SurfaceKind::Plate: {
        if (std::abs(y) >= surface.plate_dy() / 2) domain_fail("|y|", y);
        if (std::abs(z) >= surface.plate_dz() / 2) domain_fail("|z|", z);
        return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    }
    case SurfaceKind::Sphere: {
        const double rho = surface.radius();
        const double d2 = rho * rho - y * y - z * z;
        if (d2 <= 0.0) domain_fail("y^2+z^2 (sphere rim)", y * y + z * z);
        const double d = std::sqrt(d2);
        const double d3 = d2 * d;
        // h = rho - d, evaluated cancellation-free
        return {(y * y + z * z) / (rho + d),
                y / d, z / d,
                (rho * rho - z * z) / d3,
                (rho * rho - y * y) / d3,
                y * z / d3};
    }
    case SurfaceKind::Cylinder: {
        const double rho = surface.radius();
        if (std::abs(y) >= surface.cyl_length() / 2) domain_fail("|y| (cylinder end)", y);
        const double d2 = rho * rho - z * z;
        if (d2 <= 0.0) domain_fail("|z| (cylinder rim)", z);
        const double d = std::sqrt(d2);
        return {z * z / (rho + d),
                0.0, z / d,
                0.0,
                rho * rho / (d2 * d),
                0.0};
    }
    }
    throw DomainError("unknown surface kind");
}

Vec3 surface_normal(const TargetSurface& surface, double y, double z) {
    const SurfaceJet j = surface_jet(surface, y, z);
    return Vec3{-1.0, j.hy, j.hz}.normalized();
}

SphericalView spherical_view(const Vec3& antenna, const Vec3& surface_point) {
    const Vec3 d = surface_point - antenna;
    const double r = d.norm();
    if (r < 1e-12) throw GeometryError("spherical_view: coincident antenna and point");
    const double rh = std::sqrt(std::max(r * r - d.y * d.y, 0.0));
    if (rh < 1e-12 * r)
        throw GeometryError("spherical_view: point on the antenna's y-axis, azimuth undefined");
    SphericalView v;
    v.r = r;
    v.sin_theta = d.y / r;
    v.cos_theta = rh / r;
    v.sin_phi = d.z / rh;
    v.cos_phi = d.x / rh;
    v.e_r = {v.cos_theta * v.cos_phi, v.sin_theta, v.cos_theta * v.sin_phi};
    v.e_theta = {-v.sin_theta * v.cos_phi, v.cos_theta, -v.sin_theta * v.sin_phi};
    v.e_phi = {-v.sin_phi, 0.0, v.cos_phi};
    return v;
}

Vec3 AntennaLayout::centre() const {
    Vec3 c;
    for (const Vec3& p : positions) c += p;
    return c / static_cast<double>(positions.size());
}

namespace {

void check_distinct(const AntennaLayout& layout) {
    for (std::size_t i = 0; i < layout.positions.size(); ++i)
        for (std::size_t j = i + 1; j < layout.positions.size(); ++j)
            if ((layout.positions[i] - layout.positions[j]).norm() < 1e-12)
                throw ConfigError("antenna positions must be pairwise distinct");
}

std::vector<Vec3> linear_positions(int n, double spacing, double standoff, double z_centre) {
    std::vector<Vec3> out;
    out.reserve(n);
    for (int l = 0; l < n; ++l)
        out.push_back({-standoff, 0.0, z_centre + (-(n - 1) / 2.0 + l) * spacing});
    return out;
}

} // namespace

AntennaLayout build_layout(const LayoutSpec& spec) {
    AntennaLayout layout;
    if (const auto* lin = std::get_if<LinearArray>(&spec)) {
        if (lin->n < 1) throw ConfigError("linear array needs n >= 1");
        if (lin->n > 1 && lin->spacing <= 0.0) throw ConfigError("antenna spacing must be positive");
        if (lin->standoff <= 0.0) throw ConfigError("array standoff must be positive");
        layout.positions = linear_positions(lin->n, lin->spacing, lin->standoff, 0.0);
    } else if (const auto* pl = std::get_if<PlanarArray>(&spec)) {
        if (pl->ny < 1 || pl->nz < 1) throw ConfigError("planar array needs ny, nz >= 1");
        if ((pl->ny > 1 || pl->nz > 1) && pl->spacing <= 0.0)
            throw ConfigError("antenna spacing must be positive");
        if (pl->standoff <= 0.0) throw ConfigError("array standoff must be positive");
        for (int iy = 0; iy < pl->ny; ++iy)
            for (int iz = 0; iz < pl->nz; ++iz)
                layout.positions.push_back({-pl->standoff,
                                            (-(pl->ny - 1) / 2.0 + iy) * pl->spacing,
                                            (-(pl->nz - 1) / 2.0 + iz) * pl->spacing});
    } else {
        const auto& d = std::get<DistributedArray>(spec);
        if (d.per_array < 1 || d.count < 1) throw ConfigError("distributed array needs positive counts");
        if (d.per_array > 1 && d.spacing <= 0.0) throw ConfigError("antenna spacing must be positive");
        if (d.count > 1 && d.separation <= 0.0) throw ConfigError("sub-array separation must be positive");
        if (d.standoff <= 0.0) throw ConfigError("array standoff must be positive");
        // central sub-array at z = 0 for odd counts, centres symmetric about z = 0
        for (int i = 0; i < d.count; ++i) {
            const double zc = (-(d.count - 1) / 2.0 + i) * d.separation;
            const auto sub = linear_positions(d.per_array, d.spacing, d.standoff, zc);
            layout.positions.insert(layout.positions.end(), sub.begin(), sub.end());
        }
    }
    check_distinct(layout);
    return layout;
}

} // namespace nfem
