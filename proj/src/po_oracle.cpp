#include "nfem/po_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"

namespace nfem {

namespace {

struct MeshDims {
    std::uint64_t n1, n2;
};

MeshDims mesh_dims(const TargetSurface& surface, double k, const QuadratureMesh& mesh) {
    const double step = (2.0 * kPi / k) / mesh.samples_per_wavelength;
    auto count = [step](double extent) {
        return static_cast<std::uint64_t>(std::ceil(extent / step));
    };
    switch (surface.kind()) {
    case SurfaceKind::Plate:
        return {count(surface.plate_dy()), count(surface.plate_dz())};
    case SurfaceKind::Sphere:
        // polar cap angle x azimuth, arc lengths rho*pi/2 and 2*pi*rho
        return {count(kPi / 2.0 * surface.radius()), count(2.0 * kPi * surface.radius())};
    case SurfaceKind::Cylinder:
        return {count(surface.cyl_length()), count(kPi * surface.radius())};
    }
    return {0, 0};
}

struct KahanSum {
    double hi = 0.0, lo = 0.0;
    void add(double v) {
        const double t = hi + v;
        if (std::abs(hi) >= std::abs(v))
            lo += (hi - t) + v;
        else
            lo += (v - t) + hi;
        hi = t;
    }
    double value() const { return hi + lo; }
};

} // namespace

std::uint64_t quadrature_nodes(const TargetSurface& surface, double k,
                               const QuadratureMesh& mesh) {
    const MeshDims d = mesh_dims(surface, k, mesh);
    return d.n1 * d.n2;
}

std::complex<double> po_quadrature(const TargetSurface& surface, const Vec3& tx,
                                   const Vec3& rx, const EmParams& em,
                                   const QuadratureMesh& mesh) {
    if (mesh.samples_per_wavelength < 4.0)
        throw ConfigError("quadrature mesh needs samples_per_wavelength >= 4");
    const MeshDims dims = mesh_dims(surface, em.k, mesh);
    if (dims.n1 * dims.n2 > mesh.node_budget)
        throw BudgetError("quadrature node count " + std::to_string(dims.n1 * dims.n2) +
                          " exceeds budget " + std::to_string(mesh.node_budget));

    const Vec3 off = surface.origin_offset();
    const Vec3 a = tx - off;
    const Vec3 b = rx - off;
    const double k = em.k;

    KahanSum re, im;
    const std::uint64_t n1 = dims.n1, n2 = dims.n2;

    auto accumulate = [&](double y, double z, const SurfaceJet& j, double weight) {
        const double nn = std::sqrt(1.0 + j.hy * j.hy + j.hz * j.hz);
        // per-antenna geometry
        const double dxa = j.h - a.x, dya = y - a.y, dza = z - a.z;
        const double dxb = j.h - b.x, dyb = y - b.y, dzb = z - b.z;
        if (mesh.lit_region_only) {
            // lit iff the outward normal has a positive component toward the antenna:
            // n.(ant - p) = (dx - hy dy - hz dz)/nn > 0
            if (dxa - j.hy * dya - j.hz * dza <= 0.0) return;
            if (dxb - j.hy * dyb - j.hz * dzb <= 0.0) return;
        }
        const double ra = std::sqrt(dxa * dxa + dya * dya + dza * dza);
        const double rb = std::sqrt(dxb * dxb + dyb * dyb + dzb * dzb);
        const double rha = std::sqrt(std::max(ra * ra - dya * dya, 0.0));
        const double rhb = std::sqrt(std::max(rb * rb - dyb * dyb, 0.0));
        if (rha <= 0.0 || rhb <= 0.0) return;
        const double cta = rha / ra, spa = dza / rha, cpa = dxa / rha;
        const double stb = dyb / rb, ctb = rhb / rb, spb = dzb / rhb, cpb = dxb / rhb;
        // e_phi(tx) x e_theta(rx); e_phi = (-sp, 0, cp), e_theta = (-st cp, ct, -st sp)
        const double cx = -cpa * ctb;
        const double cy = cpa * (-stb * cpb) + spa * (-stb * spb);
        const double cz = -spa * ctb;
        const double triple = (-cx + j.hy * cy + j.hz * cz) / nn;
        const double gain = pattern_gain(em.pattern, cta) * pattern_gain(em.pattern, ctb);
        const double g = gain * triple / (ra * rb);
        const double psi = -k * (ra + rb);
        const double w = g * nn * weight; // dS = nn dy dz
        re.add(w * std::cos(psi));
        im.add(w * std::sin(psi));
    };

    switch (surface.kind()) {
    case SurfaceKind::Plate: {
        const TargetSurface::Box box = surface.chart_box();
        const double dy = (box.yhi - box.ylo) / static_cast<double>(n1);
        const double dz = (box.zhi - box.zlo) / static_cast<double>(n2);
        const SurfaceJet j{0, 0, 0, 0, 0, 0};
        for (std::uint64_t i = 0; i < n1; ++i) {
            const double y = box.ylo + (i + 0.5) * dy;
            for (std::uint64_t jj = 0; jj < n2; ++jj)
                accumulate(y, box.zlo + (jj + 0.5) * dz, j, dy * dz);
        }
        break;
    }
    case SurfaceKind::Sphere: {
        const double rho = surface.radius();
        const double dal = (kPi / 2.0) / static_cast<double>(n1);
        const double dbe = (2.0 * kPi) / static_cast<double>(n2);
        for (std::uint64_t i = 0; i < n1; ++i) {
            const double al = (i + 0.5) * dal;
            const double sal = std::sin(al);
            const double area = rho * rho * sal * dal * dbe; // dS in cap angles
            for (std::uint64_t jj = 0; jj < n2; ++jj) {
                const double be = (jj + 0.5) * dbe;
                const double y = rho * sal * std::cos(be);
                const double z = rho * sal * std::sin(be);
                const SurfaceJet j = surface_jet(surface, y, z);
                const double nn = std::sqrt(1.0 + j.hy * j.hy + j.hz * j.hz);
                accumulate(y, z, j, area / nn); // cancel the dS factor inside
            }
        }
        break;
    }
    case SurfaceKind::Cylinder: {
        const double rho = surface.radius();
        const double len = surface.cyl_length();
        const double dyv = len / static_cast<double>(n1);
        const double dga = kPi / static_cast<double>(n2);
        for (std::uint64_t i = 0; i < n1; ++i) {
            const double y = -len / 2 + (i + 0.5) * dyv;
            for (std::uint64_t jj = 0; jj < n2; ++jj) {
                const double ga = -kPi / 2 + (jj + 0.5) * dga;
                const double z = rho * std::sin(ga);
                const SurfaceJet j = surface_jet(surface, y, z);
                const double nn = std::sqrt(1.0 + j.hy * j.hy + j.hz * j.hz);
                accumulate(y, z, j, rho * dga * dyv / nn);
            }
        }
        break;
    }
    }

    const double prefactor = -em.k * em.k * kFreeSpaceImpedance * em.l2_i0 / (8.0 * kPi * kPi);
    return prefactor * std::complex<double>(re.value(), im.value());
}

GridSpecular grid_specular(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                           int grid_n) {
    if (grid_n < 64) throw ConfigError("grid_specular needs grid_n >= 64");
    TargetSurface::Box box = surface.chart_box();
    // keep strictly off the curvature rim
    if (surface.kind() != SurfaceKind::Plate) {
        const double shrink = 0.999;
        if (surface.kind() == SurfaceKind::Sphere) {
            box.ylo *= shrink; box.yhi *= shrink;
        }
        box.zlo *= shrink;
        box.zhi *= shrink;
    }
    // odd sample count: symmetric scenes land exactly on the centre sample
    const int n_pts = grid_n | 1;
    double best_y = 0.0, best_z = 0.0, best_d = 1e300;
    double sy = 0.0, sz = 0.0; // spacings of the latest scan
    auto scan = [&](double ylo, double yhi, double zlo, double zhi) {
        sy = (yhi - ylo) / (n_pts - 1.0);
        sz = (zhi - zlo) / (n_pts - 1.0);
        for (int i = 0; i < n_pts; ++i) {
            const double y = ylo + sy * i;
            for (int j = 0; j < n_pts; ++j) {
                const double z = zlo + sz * j;
                if (surface.kind() == SurfaceKind::Sphere &&
                    y * y + z * z >= 0.998 * surface.radius() * surface.radius())
                    continue;
                const double d = path_length(surface, y, z, tx, rx);
                if (d < best_d) {
                    best_d = d;
                    best_y = y;
                    best_z = z;
                }
            }
        }
    };
    scan(box.ylo, box.yhi, box.zlo, box.zhi);
    for (int level = 0; level < 3; ++level) {
        // window of +-5 previous spacings brackets the argmin; >= 10x zoom/level
        const double wy = 10.0 * sy, wz = 10.0 * sz;
        const double ylo = std::max(box.ylo, best_y - wy / 2);
        const double yhi = std::min(box.yhi, best_y + wy / 2);
        const double zlo = std::max(box.zlo, best_z - wz / 2);
        const double zhi = std::min(box.zhi, best_z + wz / 2);
        scan(ylo, yhi, zlo, zhi);
    }
    GridSpecular out;
    out.y = best_y;
    out.z = best_z;
    const SurfaceJet j = surface_jet_unbounded(surface, best_y, best_z);
    out.point = surface.origin_offset() + Vec3{j.h, best_y, best_z};
    out.total_distance = best_d;
    return out;
}

SymMat2 fd_hessian(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                   double y, double z, double step, double k) {
    if (step < 1e-7 || step > 1e-3)
        throw ConfigError("fd_hessian step must be in [1e-7, 1e-3]");
    for (double sy : {-step, 0.0, step})
        for (double sz : {-step, 0.0, step})
            if (!surface.inside(y + sy, z + sz))
                throw DomainError("fd_hessian stencil leaves the chart domain");
    auto psi = [&](double yy, double zz) {
        return -k * path_length(surface, yy, zz, tx, rx);
    };
    const double p0 = psi(y, z);
    SymMat2 h;
    h.yy = (psi(y + step, z) - 2.0 * p0 + psi(y - step, z)) / (step * step);
    h.zz = (psi(y, z + step) - 2.0 * p0 + psi(y, z - step)) / (step * step);
    h.yz = (psi(y + step, z + step) - psi(y + step, z - step) -
            psi(y - step, z + step) + psi(y - step, z - step)) /
           (4.0 * step * step);
    return h;
}

} // namespace nfem
