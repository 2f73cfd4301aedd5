#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hhlab/abelian.hpp"
#include "hhlab/continuation.hpp"

namespace hhlab {

struct RunConfig {
    CylinderGrid grid;
    AbelianParams abelian;
    double sweep_alpha_max = 0.05;
    int sweep_steps = 5;
    NewtonSettings newton;
    std::vector<cplx> lambdas{{0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}};
    int lax_sections = 10;
    std::vector<int> lax_refine_ny{17, 33, 65}; // y-refinement ladder
    int lax_refine_nx = 64;                     // x resolution held fixed along the ladder
    int cokernel_nx = 8;
    int cokernel_ny = 9;
    std::string experiment = "full-suite";
    std::string out_dir = "hhlab_out";
    std::uint64_t seed = 42;

    std::vector<double> sweep_alphas() const; // 0, alpha_max/steps, ..., alpha_max
    void validate() const;
};

// Flat key=value text, '#' comments, dotted keys. Unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Keys accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

} // namespace hhlab
