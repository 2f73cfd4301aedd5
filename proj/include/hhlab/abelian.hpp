#pragma once

#include <vector>

#include "hhlab/hhcore.hpp"

namespace hhlab {

struct AbelianParams {
    cplx mu{0.3, 0.0};
    cplx nu{0.0, 0.2};
    double alpha = 0.0;
};

struct AbelianSolution {
    std::vector<double> p; // per grid point, index i*ny + j
    Configuration config;
    double p_top_defect = 0.0;
};

// phi = mu H dz, psi = nu e^{2 pi i z} H dz, A = i p H dx.
Configuration abelian_configuration(const AbelianParams& params, const CylinderGrid& grid,
                                    const std::vector<double>& p);

// Profile from the ODE p' = -4 pi nu_2 e^{-2 pi y} + alpha * (collar term), p(x,0) = 0.
AbelianSolution solve_abelian(const AbelianParams& params, const CylinderGrid& grid);

// The alpha = 0 member of the family with a flat connection (p = 0). It satisfies
// p(0) = p(1) = 0 and is the seed used for continuation.
Configuration flat_abelian_seed(const AbelianParams& params, const CylinderGrid& grid);

struct SpectralCurve {
    std::vector<cplx> coeffs;
    bool reducible = false;
};

SpectralCurve spectral_curve(const AbelianParams& params, int rank = 2);

// alpha * |beta| where B(psi) = beta H on the collars.
FieldGrid dbar_potential_profile(const AbelianParams& params, const CylinderGrid& grid);

struct Monodromy {
    EndMatrix m0, m_alpha;
    double theta = 0.0; // integrated deformation phase
};

Monodromy monodromy(const AbelianParams& params, const AbelianSolution& solution);

} // namespace hhlab
