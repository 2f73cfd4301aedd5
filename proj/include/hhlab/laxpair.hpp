#pragma once

#include <vector>

#include "hhlab/hhcore.hpp"

namespace hhlab {

struct GeneratorOptions {
    // Fixed-point refinement towards the nonlinear generator equation
    //   sum_mu D_mu(g^{-1} D_mu g) = alpha g^{-1} S g,  g = exp(alpha G),
    // where S is the collar source; off by default.
    bool nonlinear = false;
    int max_iter = 30;
    double tol = 1e-10;
};

struct Generator {
    FieldGrid G;                  // zero_form
    double neumann_defect = 0.0;  // sup |d_y G| on both boundary circles
    double dirichlet_defect = 0.0;
    int refinement_iterations = 0;
    double refinement_residual = 0.0; // nonlinear equation defect, 0 when not refined
};

// Covariant Laplacian with compact stencils: 4th order in x, 2nd order in y.
FieldGrid covariant_laplacian(const CylinderGrid& grid, const Connection& A, const FieldGrid& G);

// The collar source of the generator equation (the coefficient of B(psi)).
FieldGrid generator_source(const CylinderGrid& grid, const FieldGrid& psi);

Generator solve_generator(const Configuration& c, const GeneratorOptions& opts = {});

struct LaxConnection {
    cplx lambda;
    double alpha = 0.0;
    Connection A_lambda; // g^{-1} A g + g^{-1} dg (not anti-Hermitian in general)
    FieldGrid phi_g, phi_g_dual; // g^{-1} phi g, g^{-1} phi^dagger g
    FieldGrid psi_g, psi_g_dual;
    FieldGrid w_z, w_zbar;        // boundary-absorption potentials, transformed frame
    FieldGrid g_field, g_inv;
    double max_condition = 1.0;   // sup over points of |g| |g^{-1}|
};

LaxConnection build_lax(const Configuration& c, const Generator& gen, cplx lambda);

// Direct (1,1) curvature of the Lax data, as a dx^dy coefficient.
FieldGrid lax_curvature(const LaxConnection& lc, const Configuration& c);

// Components of the Lax operators L = del + Az, M = dbar + Azbar.
FieldGrid lax_z(const LaxConnection& lc);
FieldGrid lax_zbar(const LaxConnection& lc);
FieldGrid apply_L(const LaxConnection& lc, const FieldGrid& s);
FieldGrid apply_M(const LaxConnection& lc, const FieldGrid& s);

// max over sections of |[L,M]s - (i/2) F s|_inf / |s|_inf, F = lax_curvature; with
// interior set the sup skips the rows y = 0 and y = 1.
double commutator_check(const LaxConnection& lc, const Configuration& c, const std::vector<FieldGrid>& sections,
                        bool interior = false);

// Sections built from a few low Fourier modes in x and Chebyshev-like profiles in y.
std::vector<FieldGrid> band_limited_sections(const CylinderGrid& grid, int count, unsigned long long seed);

// Every other grid point; needs nx/2 >= 8 and (ny - 1) even with (ny + 1)/2 >= 9.
Configuration coarsen(const Configuration& c);

// Two-grid estimate of the discretization error of the Lax curvature at c:
// sup over lambdas of |F_h - F_2h| on the shared points.
double lax_truncation_estimate(const Configuration& c, const std::vector<cplx>& lambdas);

struct HitchinData {
    std::vector<FieldGrid> traces;  // tr(phi^k) * I for k = 2..r
    std::vector<double> dbar_sup;   // sup |dbar tr(phi^k)|
};

HitchinData hitchin_map(const Configuration& c);

} // namespace hhlab
