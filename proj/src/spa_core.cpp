#include "nfem/spa_core.hpp"

#include <algorithm>
#include <cmath>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"

namespace nfem {

SurfaceJet surface_jet_unbounded(const TargetSurface& surface, double y, double z) {
    switch (surface.kind()) {
    case SurfaceKind::Plate:
        return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    case SurfaceKind::Sphere: {
        const double rho = surface.radius();
        const double d2 = rho * rho - y * y - z * z;
        if (d2 <= 0.0) throw DomainError("sphere rim reached during path evaluation");
        const double d = std::sqrt(d2);
        const double d3 = d2 * d;
        return {(y * y + z * z) / (rho + d), y / d, z / d,
                (rho * rho - z * z) / d3, (rho * rho - y * y) / d3, y * z / d3};
    }
    case SurfaceKind::Cylinder: {
        const double rho = surface.radius();
        const double d2 = rho * rho - z * z;
        if (d2 <= 0.0) throw DomainError("cylinder rim reached during path evaluation");
        const double d = std::sqrt(d2);
        return {z * z / (rho + d), 0.0, z / d, 0.0, rho * rho / (d2 * d), 0.0};
    }
    }
    throw DomainError("unknown surface kind");
}

namespace {

struct Leg {
    double r;
    double u; // d r / d y numerator: (h - x_a) hy + (y - y_a)
    double v;
};

Leg leg(const SurfaceJet& j, double y, double z, const Vec3& ant) {
    const double dx = j.h - ant.x;
    const double dy = y - ant.y;
    const double dz = z - ant.z;
    Leg out;
    out.r = std::sqrt(dx * dx + dy * dy + dz * dz);
    out.u = dx * j.hy + dy;
    out.v = dx * j.hz + dz;
    return out;
}

} // namespace

double path_length(const TargetSurface& surface, double y, double z,
                   const Vec3& tx, const Vec3& rx) {
    const Vec3 off = surface.origin_offset();
    const SurfaceJet j = surface_jet_unbounded(surface, y, z);
    return leg(j, y, z, tx - off).r + leg(j, y, z, rx - off).r;
}

void path_gradient(const TargetSurface& surface, double y, double z,
                   const Vec3& tx, const Vec3& rx, double& gy, double& gz) {
    const Vec3 off = surface.origin_offset();
    const SurfaceJet j = surface_jet_unbounded(surface, y, z);
    const Leg a = leg(j, y, z, tx - off);
    const Leg b = leg(j, y, z, rx - off);
    gy = a.u / a.r + b.u / b.r;
    gz = a.v / a.r + b.v / b.r;
}

SymMat2 path_hessian(const TargetSurface& surface, double y, double z,
                     const Vec3& tx, const Vec3& rx) {
    const Vec3 off = surface.origin_offset();
    const SurfaceJet j = surface_jet_unbounded(surface, y, z);
    SymMat2 h;
    for (const Vec3& ant : {tx - off, rx - off}) {
        const double dx = j.h - ant.x;
        const Leg lg = leg(j, y, z, ant);
        const double r3 = lg.r * lg.r * lg.r;
        h.yy += (1.0 + j.hy * j.hy + dx * j.hyy) / lg.r - lg.u * lg.u / r3;
        h.zz += (1.0 + j.hz * j.hz + dx * j.hzz) / lg.r - lg.v * lg.v / r3;
        h.yz += (j.hy * j.hz + dx * j.hyz) / lg.r - lg.u * lg.v / r3;
    }
    return h;
}

SymMat2 phase_hessian(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                      double y, double z, double k) {
    SymMat2 h = path_hessian(surface, y, z, tx, rx);
    h.yy *= -k;
    h.zz *= -k;
    h.yz *= -k;
    return h;
}

SymMat2 phase_hessian(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                      const StationaryPointSolution& sp, double k) {
    return phase_hessian(surface, tx, rx, sp.y, sp.z, k);
}

namespace {

StationaryPointSolution make_solution(const TargetSurface& surface, const Vec3& tx,
                                      const Vec3& rx, double y, double z, double k) {
    const Vec3 off = surface.origin_offset();
    const SurfaceJet j = surface_jet_unbounded(surface, y, z);
    StationaryPointSolution sp;
    sp.y = y;
    sp.z = z;
    sp.point = off + Vec3{j.h, y, z};
    sp.r_tx = (sp.point - tx).norm();
    sp.r_rx = (sp.point - rx).norm();
    sp.total_distance = sp.r_tx + sp.r_rx;
    sp.phase = -k * sp.total_distance;
    sp.hess_psi = phase_hessian(surface, tx, rx, y, z, k);
    sp.det = sp.hess_psi.det();
    if (sp.det > 0.0)
        sp.signature = sp.hess_psi.trace() < 0.0 ? -2 : 2;
    else
        sp.signature = 0;
    sp.on_boundary = surface.near_boundary(y, z);
    sp.on_surface = surface.on_physical_surface(y, z);
    return sp;
}

// Keep iterates strictly inside the curvature bounds of the chart.
void clamp_chart(const TargetSurface& surface, double& y, double& z, double y_span) {
    if (surface.kind() == SurfaceKind::Sphere) {
        const double lim = 0.995 * surface.radius();
        const double r = std::hypot(y, z);
        if (r > lim) {
            y *= lim / r;
            z *= lim / r;
        }
    } else if (surface.kind() == SurfaceKind::Cylinder) {
        const double lim = 0.995 * surface.radius();
        z = std::clamp(z, -lim, lim);
        y = std::clamp(y, -y_span, y_span);
    }
}

struct NewtonResult {
    double y, z;
    double residual;
    bool converged;
};

NewtonResult newton_descent(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                            double y, double z, double y_span) {
    constexpr double kTol = 1e-10;
    double lambda = 0.0;
    double d_cur = path_length(surface, y, z, tx, rx);
    for (int it = 0; it < 80; ++it) {
        double gy, gz;
        path_gradient(surface, y, z, tx, rx, gy, gz);
        const double gnorm = std::hypot(gy, gz);
        if (gnorm <= kTol) break;
        SymMat2 h = path_hessian(surface, y, z, tx, rx);
        bool stepped = false;
        double lam = lambda;
        for (int attempt = 0; attempt < 40; ++attempt) {
            SymMat2 hd = h;
            hd.yy += lam;
            hd.zz += lam;
            if (std::abs(hd.det()) > 1e-300) {
                double sy, sz;
                hd.solve_neg(gy, gz, sy, sz);
                double yn = y + sy, zn = z + sz;
                clamp_chart(surface, yn, zn, y_span);
                double dn;
                try {
                    dn = path_length(surface, yn, zn, tx, rx);
                } catch (const DomainError&) {
                    dn = d_cur + 1.0;
                }
                if (dn <= d_cur + 1e-15) {
                    y = yn;
                    z = zn;
                    d_cur = dn;
                    lambda = lam / 3.0;
                    stepped = true;
                    break;
                }
            }
            lam = std::max(lam * 4.0, 1e-8);
        }
        if (!stepped) break;
    }
    // quadratic polish on the exact stationary system
    for (int it = 0; it < 4; ++it) {
        double gy, gz;
        path_gradient(surface, y, z, tx, rx, gy, gz);
        if (std::hypot(gy, gz) < 1e-14) break;
        SymMat2 h = path_hessian(surface, y, z, tx, rx);
        if (std::abs(h.det()) < 1e-300) break;
        double sy, sz;
        h.solve_neg(gy, gz, sy, sz);
        double yn = y + sy, zn = z + sz;
        clamp_chart(surface, yn, zn, y_span);
        y = yn;
        z = zn;
    }
    double gy, gz;
    path_gradient(surface, y, z, tx, rx, gy, gz);
    const double res = std::hypot(gy, gz);
    return {y, z, res, res <= 1e-8};
}

} // namespace

std::vector<StationaryPointSolution>
solve_stationary(const TargetSurface& surface, const Vec3& tx, const Vec3& rx, double k) {
    const Vec3 off = surface.origin_offset();
    const Vec3 a = tx - off;
    const Vec3 b = rx - off;

    if (surface.kind() == SurfaceKind::Plate) {
        if (a.x == 0.0 || b.x == 0.0 || (a.x > 0.0) != (b.x > 0.0))
            throw PreconditionError("plate specular closed form requires same-sign antenna x");
        const double ys = (a.y * b.x + b.y * a.x) / (a.x + b.x);
        const double zs = (a.z * b.x + b.z * a.x) / (a.x + b.x);
        return {make_solution(surface, tx, rx, ys, zs, k)};
    }

    // Curved kinds: multi-start Newton minimization of the path length.
    const TargetSurface::Box box = surface.chart_box();
    const double ant_y = std::max(std::abs(a.y), std::abs(b.y));
    const double ant_z = std::max(std::abs(a.z), std::abs(b.z));
    const double y_span = std::max({std::abs(box.ylo), std::abs(box.yhi), ant_y}) + 1.0;

    // Start box: chart domain shrunk away from the rim, intersected with the
    // antenna footprint (stationary points cannot fall outside it).
    const double margin = 0.1;
    double ylo = std::max(box.ylo * 0.9, -(ant_y + margin * (box.yhi - box.ylo)));
    double yhi = std::min(box.yhi * 0.9, ant_y + margin * (box.yhi - box.ylo));
    double zlo = std::max(box.zlo * 0.9, -(ant_z + margin * (box.zhi - box.zlo)));
    double zhi = std::min(box.zhi * 0.9, ant_z + margin * (box.zhi - box.zlo));

    std::vector<std::pair<double, double>> starts;
    starts.emplace_back(0.0, 0.0);
    if (a.x != 0.0 && (a.x > 0.0) == (b.x > 0.0)) {
        starts.emplace_back((a.y * b.x + b.y * a.x) / (a.x + b.x),
                            (a.z * b.x + b.z * a.x) / (a.x + b.x));
    }
    constexpr int kGrid = 5;
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j)
            starts.emplace_back(ylo + (yhi - ylo) * i / (kGrid - 1.0),
                                zlo + (zhi - zlo) * j / (kGrid - 1.0));

    std::vector<StationaryPointSolution> found;
    double best_residual = 1e300;
    for (auto [y0, z0] : starts) {
        clamp_chart(surface, y0, z0, y_span);
        NewtonResult nr = newton_descent(surface, tx, rx, y0, z0, y_span);
        best_residual = std::min(best_residual, nr.residual);
        if (!nr.converged) continue;
        bool dup = false;
        for (const auto& sp : found)
            if (std::hypot(sp.y - nr.y, sp.z - nr.z) < 1e-7) {
                dup = true;
                break;
            }
        if (!dup) found.push_back(make_solution(surface, tx, rx, nr.y, nr.z, k));
    }
    if (found.empty())
        throw ConvergenceError("stationary-point solver did not converge", best_residual);
    std::sort(found.begin(), found.end(),
              [](const StationaryPointSolution& l, const StationaryPointSolution& r) {
                  return l.total_distance < r.total_distance;
              });
    return found;
}

FermatResult fermat_minimize(const TargetSurface& surface, const Vec3& tx, const Vec3& rx,
                             double y_start, double z_start) {
    const Vec3 off = surface.origin_offset();
    const Vec3 a = tx - off;
    const Vec3 b = rx - off;
    const TargetSurface::Box box = surface.chart_box();
    const double ant_y = std::max(std::abs(a.y), std::abs(b.y));
    const double y_span = std::max({std::abs(box.ylo), std::abs(box.yhi), ant_y}) + 1.0;
    double y0 = y_start, z0 = z_start;
    clamp_chart(surface, y0, z0, y_span);
    const NewtonResult nr = newton_descent(surface, tx, rx, y0, z0, y_span);
    return {nr.y, nr.z, nr.residual, nr.converged};
}

StationaryPointSolution solve_stationary_hinted(const TargetSurface& surface, const Vec3& tx,
                                                const Vec3& rx, double k, double y_hint,
                                                double z_hint) {
    if (surface.kind() == SurfaceKind::Plate) return solve_stationary(surface, tx, rx, k).front();
    const Vec3 off = surface.origin_offset();
    const Vec3 a = tx - off;
    const Vec3 b = rx - off;
    const TargetSurface::Box box = surface.chart_box();
    const double ant_y = std::max(std::abs(a.y), std::abs(b.y));
    const double y_span = std::max({std::abs(box.ylo), std::abs(box.yhi), ant_y}) + 1.0;
    double y0 = y_hint, z0 = z_hint;
    clamp_chart(surface, y0, z0, y_span);
    const NewtonResult nr = newton_descent(surface, tx, rx, y0, z0, y_span);
    if (nr.converged) return make_solution(surface, tx, rx, nr.y, nr.z, k);
    return solve_stationary(surface, tx, rx, k).front();
}

double pattern_gain(PatternKind pattern, double cos_theta) {
    switch (pattern) {
    case PatternKind::Isotropic: return 1.0;
    case PatternKind::Cosine: return cos_theta;
    }
    return 1.0;
}

std::complex<double> spa_coefficient(const TargetSurface& surface, const Vec3& tx,
                                     const Vec3& rx, const StationaryPointSolution& sp,
                                     const EmParams& em) {
    if (std::abs(sp.det) < 1e-12 * em.k * em.k)
        throw DegenerateHessianError("phase Hessian nearly singular; SPA invalid for this pair");
    const SphericalView vt = spherical_view(tx, sp.point);
    const SphericalView vr = spherical_view(rx, sp.point);
    const Vec3 n = surface_normal(surface, sp.y, sp.z);
    const double triple = n.dot(vt.e_phi.cross(vr.e_theta));
    const double g_geo = pattern_gain(em.pattern, vt.cos_theta) *
                         pattern_gain(em.pattern, vr.cos_theta) * triple /
                         (sp.r_tx * sp.r_rx);
    const double prefactor = -em.k * em.k * kFreeSpaceImpedance * em.l2_i0 / (8.0 * kPi * kPi);
    const double mag = prefactor * g_geo * 2.0 * kPi / std::sqrt(std::abs(sp.det));
    const double arg = sp.phase + kPi / 4.0 * sp.signature;
    return mag * std::complex<double>(std::cos(arg), std::sin(arg));
}

PairResponse pair_response(const TargetSurface& surface, const AntennaLayout& layout,
                           int l, int lp, const EmParams& em) {
    const Vec3& tx = layout.positions.at(l);
    const Vec3& rx = layout.positions.at(lp);
    PairResponse pr;
    pr.tx_index = l;
    pr.rx_index = lp;
    for (const StationaryPointSolution& sp : solve_stationary(surface, tx, rx, em.k)) {
        if (!sp.on_surface) continue;
        pr.terms.push_back({spa_coefficient(surface, tx, rx, sp, em),
                            sp.total_distance / kSpeedOfLight});
    }
    return pr;
}

std::vector<PairResponse> all_pair_responses(const TargetSurface& surface,
                                             const AntennaLayout& layout,
                                             const EmParams& em) {
    std::vector<PairResponse> out;
    out.reserve(layout.positions.size() * layout.positions.size());
    for (int l = 0; l < layout.count(); ++l)
        for (int lp = 0; lp < layout.count(); ++lp)
            out.push_back(pair_response(surface, layout, l, lp, em));
    return out;
}

} // namespace nfem
