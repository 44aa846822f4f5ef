#pragma once
#include <cstdint>
#include <string>

#include "nfem/estimators.hpp"
#include "nfem/geometry.hpp"
#include "nfem/po_oracle.hpp"
#include "nfem/signal_synth.hpp"

namespace nfem {

/// Flat scenario configuration. Defaults reproduce the reference scenario:
/// 13-element linear array, 0.125 m spacing, 77 GHz, 100 MHz, target 4 m away
/// on boresight (plate 0.8 x 1.75, sphere/cylinder radius 1.24).
struct ScenarioConfig {
    // target
    std::string target = "sphere"; // plate | sphere | cylinder
    double plate_dy = 0.8;
    double plate_dz = 1.75;
    double radius = 1.24;
    double cyl_length = 1.75;

    // layout
    std::string layout = "linear"; // linear | planar | distributed
    int n_antennas = 13;
    int n_y = 10;
    int n_z = 10;
    double spacing = 0.125;
    double standoff = 4.0; // R
    int sub_count = 3;
    double sub_spacing = 1.0;

    // EM / waveform
    double carrier_hz = 77e9;
    double bandwidth_hz = 100e6;
    double l2_i0 = 1.0;
    std::string pattern = "isotropic"; // isotropic | cosine

    // synthesis
    double oversample = 8.0;
    double noise_variance = 0.0;
    std::uint64_t seed = 1;
    double xi_re = 1.0;
    double xi_im = 0.0;

    // estimator grids
    double r_min = 3.0;
    double r_max = 5.0;
    double r_step = 0.0; // 0 -> lambda / 8
    double angle_min_deg = -10.0;
    double angle_max_deg = 10.0;
    double angle_step_deg = 0.25;

    // oracle
    double oracle_samples_per_wl = 10.0;
    std::uint64_t oracle_budget = 20000000;
    int oracle_lit_only = 1;
    int grid_n = 128;

    std::string out_dir = ".";

    double wavelength() const;
    double wavenumber() const;
    double resolved_r_step() const; // r_step or lambda/8
};

/// Parse "key = value" lines ('#' comments allowed). Unknown keys are errors.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);
/// Apply a single "key=value" override.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);
/// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

TargetSurface make_surface(const ScenarioConfig& cfg);
AntennaLayout make_layout(const ScenarioConfig& cfg);
EmParams make_em(const ScenarioConfig& cfg);
Waveform make_waveform(const ScenarioConfig& cfg);
QuadratureMesh make_mesh(const ScenarioConfig& cfg);

/// Full-precision (round-trip exact) decimal formatting for CSV payloads.
std::string csv_num(double v);

} // namespace nfem
