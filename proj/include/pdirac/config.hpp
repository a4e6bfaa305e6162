#pragma once

#include <string>
#include <vector>

#include "pdirac/potential.hpp"
#include "pdirac/propagator.hpp"

namespace pdirac {

// Full run configuration, parsed from a single JSON document.  Every field
// has a default so a minimal config may be {}.
struct RunConfig {
    double mass = 1.0;
    double period = 1.0;
    PeriodicPotential potential = PeriodicPotential::zero(1.0);
    PerturbationField perturbation = PerturbationField::norm_only(1.0, 0.5);

    double re_min = -5.0, re_max = 5.0, im_min = -3.0, im_max = 3.0;
    int nx = 200, ny = 120;

    int phi_nodes = 2048;
    int scan_points = 2000;
    OdeTolerances tol{};
    int workers = 1;

    std::string out_dir = ".";
    bool svg = false;

    cplx probe_lambda{0.0, 0.5};
    double greens_x = 0.25, greens_t = 1.5;

    double asy_mu = 0.0;
    std::vector<double> asy_alphas{40, 80, 160, 320, 640, 1280, 2560, 5120};
    int asy_nx = 65;

    std::vector<double> edge_offsets{1e-2, 1e-3, 1e-4};
};

// Throws ConfigError with a line-anchored message on parse failure and a
// field-anchored message on validation failure.
RunConfig parse_config(const std::string& text, const std::string& filename = "config");
RunConfig load_config_file(const std::string& path);

// Normalized JSON document; parse_config(dump_config(c)) reproduces c and
// re-dumps byte-identically.
std::string dump_config(const RunConfig& cfg);

}  // namespace pdirac
