#include "nfem/mismatch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"
#include "nfem/parallel.hpp"
#include "nfem/signal_synth.hpp"

namespace nfem {

namespace {

std::vector<double> true_totals(const TargetSurface& surface, const AntennaLayout& layout,
                                double k) {
    const int n = layout.count();
    std::vector<double> d(static_cast<std::size_t>(n) * n);
    for (int l = 0; l < n; ++l) {
        double hy = 0.0, hz = 0.0;
        bool have_hint = false;
        for (int lp = 0; lp < n; ++lp) {
            const Vec3& a = layout.positions[l];
            const Vec3& b = layout.positions[lp];
            StationaryPointSolution sp =
                have_hint ? solve_stationary_hinted(surface, a, b, k, hy, hz)
                          : solve_stationary(surface, a, b, k).front();
            hy = sp.y;
            hz = sp.z;
            have_hint = true;
            d[static_cast<std::size_t>(l) * n + lp] = sp.total_distance;
        }
    }
    return d;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    // quadratic polish on three bracketing samples
    const double xm = (a + b) / 2;
    const double h = std::max((b - a) / 2, tol / 4);
    const double f0 = f(xm - h), f1 = f(xm), f2 = f(xm + h);
    const double denom = f0 - 2 * f1 + f2;
    if (denom > 1e-300) {
        const double off = 0.5 * (f0 - f2) / denom * h;
        if (std::abs(off) <= h) return xm + off;
    }
    return xm;
}

} // namespace

double genie_ls_range(const TargetSurface& surface, const AntennaLayout& layout,
                      TargetModel model, double search_lo, double search_hi) {
    if (search_hi <= search_lo) throw ConfigError("genie search interval is empty");
    const double k_ref = 1.0; // stationary geometry does not depend on k
    const std::vector<double> d_true = true_totals(surface, layout, k_ref);
    const Vec3 centre = layout.centre();
    const int n = layout.count();

    // per-pair warm hints reused across objective evaluations
    std::vector<double> hint_y(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> hint_z(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<bool> have_hint(static_cast<std::size_t>(n) * n, false);

    auto objective = [&](double rt) {
        double j = 0.0;
        if (model == TargetModel::Point) {
            const Vec3 p = centre + Vec3{rt, 0.0, 0.0};
            std::vector<double> r(n);
            for (int l = 0; l < n; ++l) r[l] = (p - layout.positions[l]).norm();
            for (int l = 0; l < n; ++l)
                for (int lp = 0; lp < n; ++lp) {
                    const double e = d_true[static_cast<std::size_t>(l) * n + lp] - (r[l] + r[lp]);
                    j += e * e;
                }
        } else {
            const TargetSurface posed = surface.with_offset(centre + Vec3{rt, 0.0, 0.0});
            for (int l = 0; l < n; ++l)
                for (int lp = 0; lp < n; ++lp) {
                    const std::size_t idx = static_cast<std::size_t>(l) * n + lp;
                    const Vec3& a = layout.positions[l];
                    const Vec3& b = layout.positions[lp];
                    const StationaryPointSolution sp =
                        have_hint[idx]
                            ? solve_stationary_hinted(posed, a, b, k_ref, hint_y[idx], hint_z[idx])
                            : solve_stationary(posed, a, b, k_ref).front();
                    hint_y[idx] = sp.y;
                    hint_z[idx] = sp.z;
                    have_hint[idx] = true;
                    const double e = d_true[idx] - sp.total_distance;
                    j += e * e;
                }
        }
        return j;
    };

    const double rhat = golden_min(objective, search_lo, search_hi, 1e-7);
    const double width = search_hi - search_lo;
    if (rhat - search_lo < 1e-6 * width || search_hi - rhat < 1e-6 * width)
        throw BoundaryError("genie minimum on the search-interval boundary; widen the interval");
    return rhat;
}

AnalyticBias analytic_point_bias(const AntennaLayout& layout, const TargetSurface& surface,
                                 const Vec3& reference) {
    const Vec3 centre = layout.centre();
    const Vec3 to_ref = reference - centre;
    const double range = to_ref.norm();
    if (range < 1e-12) throw ConfigError("reference point coincides with the array centre");
    const Vec3 u = to_ref / range;

    const std::vector<double> d_true = true_totals(surface, layout, 1.0);
    const int n = layout.count();
    std::vector<double> r_ref(n), w(n);
    for (int l = 0; l < n; ++l) {
        const Vec3 d = reference - layout.positions[l];
        r_ref[l] = d.norm();
        w[l] = u.dot(d) / r_ref[l]; // d|p(R) - a| / dR
    }
    double num = 0.0, den = 0.0;
    for (int l = 0; l < n; ++l)
        for (int lp = 0; lp < n; ++lp) {
            const double ww = w[l] + w[lp];
            num += ((r_ref[l] + r_ref[lp]) - d_true[static_cast<std::size_t>(l) * n + lp]) * ww;
            den += ww * ww;
        }
    if (den < 1e-300) throw DegenerateWeightError("all range-derivative weights vanish");

    double aperture = 0.0;
    for (int l = 0; l < n; ++l)
        for (int lp = l + 1; lp < n; ++lp)
            aperture = std::max(aperture, (layout.positions[l] - layout.positions[lp]).norm());
    AnalyticBias out;
    out.bias = num / den;
    out.aperture_ratio = aperture > 0.0 ? range / aperture : 1e300;
    out.far_field_valid = range >= 10.0 * aperture;
    return out;
}

double equipotential_plate(double alpha, int n_antennas, double delta) {
    if (alpha <= 0.0) throw ConfigError("equipotential bias alpha must be positive");
    if (n_antennas < 2) throw ConfigError("equipotential curve needs at least 2 antennas");
    if (delta <= 0.0) throw ConfigError("antenna spacing must be positive");
    const double n = n_antennas;
    return (n * n - 1.0) * delta * delta / (48.0 * alpha);
}

std::string sweep_axis_name(SweepAxis a) {
    switch (a) {
    case SweepAxis::Range: return "range_m";
    case SweepAxis::Radius: return "radius_m";
    case SweepAxis::Spacing: return "spacing_m";
    case SweepAxis::SubSpacing: return "sub_spacing_m";
    }
    return "?";
}

namespace {

TargetSurface sweep_surface(const BiasSweepSpec& spec, double radius) {
    switch (spec.target) {
    case SurfaceKind::Plate: return TargetSurface::plate(2.0 * radius, 2.0 * radius);
    case SurfaceKind::Sphere: return TargetSurface::sphere(radius);
    case SurfaceKind::Cylinder: return TargetSurface::cylinder(radius, spec.cyl_length);
    }
    throw ConfigError("unknown sweep target");
}

AntennaLayout sweep_layout(const BiasSweepSpec& spec, double range, double spacing,
                           double sub_spacing) {
    if (spec.sub_count > 1)
        return build_layout(DistributedArray{spec.n_antennas, spacing, spec.sub_count,
                                             sub_spacing, range});
    return build_layout(LinearArray{spec.n_antennas, spacing, range});
}

double ml_point_bias(const BiasSweepSpec& spec, const TargetSurface& surface,
                     const AntennaLayout& layout, double range) {
    const EmParams em{2.0 * kPi * spec.carrier_hz / kSpeedOfLight, 1.0,
                      PatternKind::Isotropic};
    const Waveform wf{spec.bandwidth_hz};
    const double lo = spec.search_lo_frac * range;
    const double hi = spec.search_hi_frac * range;
    const auto responses = all_pair_responses(surface, layout, em);
    // cover the truth delays and every candidate's model delays
    const Vec3 centre = layout.centre();
    double reach = 0.0;
    for (const Vec3& p : layout.positions)
        reach = std::max(reach, (p - centre).norm());
    const double delay_lo = 2.0 * lo / kSpeedOfLight;
    const double delay_hi = 2.0 * (std::hypot(hi, reach) + reach) / kSpeedOfLight;
    const TimeGrid grid = make_grid(delay_lo, delay_hi, wf, spec.oversample);
    const auto signals = synthesize(responses, wf, grid, {1.0, 0.0}, {});
    EstimatorScene scene{surface, layout, wf, grid, em};
    const double lambda = 2.0 * kPi / em.k;
    std::vector<double> rgrid;
    for (double r = lo; r <= hi; r += lambda / 8.0) rgrid.push_back(r);
    const ProfileFunction pf = range_profile(scene, signals, TargetModel::Point, rgrid);
    return pf.argmax;
}

} // namespace

double bias_cell(const BiasSweepSpec& spec, double range, double radius, double spacing,
                 double sub_spacing) {
    const TargetSurface surface = sweep_surface(spec, radius);
    const AntennaLayout layout = sweep_layout(spec, range, spacing, sub_spacing);
    double rhat;
    if (spec.estimator == SweepEstimator::Genie) {
        rhat = genie_ls_range(surface, layout, TargetModel::Point,
                              spec.search_lo_frac * range, spec.search_hi_frac * range);
    } else {
        rhat = ml_point_bias(spec, surface, layout, range);
    }
    const double bias = std::abs(rhat - range);
    return spec.relative ? bias / range : bias;
}

BiasSweep bias_sweep(const BiasSweepSpec& spec) {
    if (spec.grid1.empty() || spec.grid2.empty())
        throw ConfigError("bias sweep grids must be non-empty");
    for (const auto* g : {&spec.grid1, &spec.grid2})
        for (std::size_t i = 1; i < g->size(); ++i)
            if ((*g)[i] <= (*g)[i - 1]) throw ConfigError("sweep grids must be strictly increasing");

    BiasSweep out;
    out.axis1_name = sweep_axis_name(spec.axis1);
    out.axis2_name = sweep_axis_name(spec.axis2);
    out.grid1 = spec.grid1;
    out.grid2 = spec.grid2;
    out.bias.assign(spec.grid1.size(), std::vector<double>(spec.grid2.size(), 0.0));

    const std::size_t n2 = spec.grid2.size();
    parallel_for_index(spec.grid1.size() * n2, [&](std::size_t cell) {
        const std::size_t i = cell / n2;
        const std::size_t j = cell % n2;
        double range = spec.range, radius = spec.radius;
        double spacing = spec.spacing, sub = spec.sub_spacing;
        auto apply = [&](SweepAxis ax, double v) {
            switch (ax) {
            case SweepAxis::Range: range = v; break;
            case SweepAxis::Radius: radius = v; break;
            case SweepAxis::Spacing: spacing = v; break;
            case SweepAxis::SubSpacing: sub = v; break;
            }
        };
        apply(spec.axis1, spec.grid1[i]);
        apply(spec.axis2, spec.grid2[j]);
        out.bias[i][j] = bias_cell(spec, range, radius, spacing, sub);
    });
    return out;
}

} // namespace nfem
