#pragma once

#include <optional>
#include <vector>

#include "hhlab/hhcore.hpp"

namespace hhlab {

struct NewtonSettings {
    double tol_residual = 1e-10; // sup-norm of the residual and of the slice condition
    int max_iter = 25;
    double backtrack = 0.5;
    int max_halvings = 8;
    double relative_shift = 1e-8; // Tikhonov shift relative to the largest column norm
    int sweeps = 3;               // iterated Tikhonov passes per linear solve

    void validate() const;
};

struct NewtonResult {
    Configuration config;
    int iterations = 0;
    std::vector<double> history; // merit per iterate, first entry is the seed
    double residual = 0.0;       // residual(config).sup_norm()
    double gauge = 0.0;          // slice condition sup-norm
};

// Solves the gauge-augmented system at alpha starting from seed; the slice is
// taken relative to the seed connection.
NewtonResult newton_solve(const Configuration& seed, double alpha, const NewtonSettings& settings = {});
NewtonResult newton_solve(const Configuration& start, const Configuration& slice, double alpha,
                          const NewtonSettings& settings);

// Sup-norm of the slice condition of c relative to the slice connection.
double gauge_defect(const Configuration& c, const Configuration& slice);

struct PicardResult {
    Configuration config;
    bool converged = false;
    int iterations = 0;
    std::vector<double> history;
    double contraction = 0.0; // largest ratio of successive merits after the first step
};

// u <- u - L0^+ F(u, alpha) with L0 frozen at (slice, alpha = 0).
PicardResult picard_frozen(const Configuration& slice, double alpha, const NewtonSettings& settings = {},
                           int max_iter = 60);

struct SingularSummary {
    double sigma_min = 0.0; // smallest singular value above the kernel threshold
    double sigma_max = 0.0;
    int kernel_dim = -1;    // exact-zero singular values; -1 when not computed (iterative path)
    bool dense = false;
};

// Dense SVD up to kDenseSvdLimit unknowns, otherwise Lanczos on (J^T J + s^2)^{-1}.
inline constexpr int kDenseSvdLimit = 2500;
inline constexpr double kKernelThreshold = 1e-9; // relative to sigma_max
SingularSummary augmented_singular_values(const Configuration& c, const Configuration& slice);

struct Constants {
    double M = 0.0;
    double K1 = 0.0; // logged only
    double K2 = 0.0;
    double alpha_star = 0.0;
    SingularSummary sigma;
};

Constants estimate_constants(const Configuration& c0, unsigned long long seed = 42);

struct SampleDiagnostics {
    double residual = 0.0;
    double gauge = 0.0;
    int newton_iterations = 0;
    std::optional<double> sigma_min;
    double hitchin_tr2_shift = 0.0; // sup |tr(phi^2) - tr(phi_0^2)|
};

struct CurveSample {
    double alpha = 0.0;
    Configuration config;
    SampleDiagnostics diag;
    bool synthesized = false;
};

struct ContinuationCurve {
    std::vector<CurveSample> samples;
    bool truncated = false;
    std::vector<double> failure_history;
};

ContinuationCurve sweep(const Configuration& seed, const std::vector<double>& alphas,
                        const NewtonSettings& settings = {});

// Mirrors a curve on [0, a] to [-a, a] through the inversion map; every mirrored
// sample is re-verified against the tolerance.
ContinuationCurve parity_extend(const ContinuationCurve& curve, const NewtonSettings& settings = {});

} // namespace hhlab
