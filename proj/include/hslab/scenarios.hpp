#pragma once

// Named end-to-end oracle runs used by the `scenario` subcommand.

#include "hslab/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hslab {

struct RunConfig {
    Real tol_residual = 1e-8;
    Real eps_tol = 1e-9;
    Real tau_circle = 1e-3;
    Real lagrangian_tol = 1e-6;
    Real epsilon0 = 1e-2;
    int threads = 1;
    std::string output_dir;    // reports go to <dir>/<name>.<format>; empty writes to stdout
    std::string format = "json";
    std::uint64_t seed = 20240611;
    int samples = 0;           // grid or polygon size; 0 picks the scenario default
    Real r1 = 1, r2 = 2;       // torus radii
    int k = 100;               // concentric-pair index

    void validate() const;
};

struct ScenarioResult {
    Json report;
    bool passed = false;
};

const std::vector<std::string>& scenario_names();
ScenarioResult run_scenario(const std::string& name, const RunConfig& config);

}  // namespace hslab
