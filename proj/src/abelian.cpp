#include "hhlab/abelian.hpp"

#include <cmath>
#include <numbers>

#include "hhlab/error.hpp"

namespace hhlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_rank2(const CylinderGrid& g)
{
    if (g.rank != 2) throw ValidationError("grid.rank", "the abelian family is defined for rank 2");
}

FieldGrid holomorphic_psi(const AbelianParams& params, const CylinderGrid& grid)
{
    FieldGrid psi(grid, FormType::one_zero);
    const EndMatrix h = cartan_h(grid.rank);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const cplx z(grid.x(i), grid.y(j));
            psi.set(i, j, (params.nu * std::exp(cplx(0.0, 2.0 * kPi) * z)) * h);
        }
    return psi;
}

// Im of the scalar coefficient of B(psi) = beta H.
std::vector<double> collar_source(const AbelianParams& params, const CylinderGrid& grid)
{
    const FieldGrid b = deformation_B(grid, holomorphic_psi(params, grid));
    std::vector<double> s(std::size_t(grid.points()));
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) s[grid.index(i, j)] = b.at(i, j)(0, 0).imag();
    return s;
}

} // namespace

Configuration abelian_configuration(const AbelianParams& params, const CylinderGrid& grid,
                                    const std::vector<double>& p)
{
    require_rank2(grid);
    Configuration c = Configuration::zero(grid, params.alpha);
    const EndMatrix h = cartan_h(grid.rank);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            c.A.ax.set(i, j, cplx(0.0, p[grid.index(i, j)]) * h);
            c.phi.set(i, j, params.mu * h);
        }
    c.psi = holomorphic_psi(params, grid);
    return c;
}

AbelianSolution solve_abelian(const AbelianParams& params, const CylinderGrid& grid)
{
    require_rank2(grid);
    grid.validate();
    const double nu2 = params.nu.imag();
    AbelianSolution sol;
    sol.p.assign(std::size_t(grid.points()), 0.0);
    // closed form for the nu part, trapezoid for the collar term so that p is exactly
    // affine in alpha with the alpha = 0 profile as intercept
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            sol.p[grid.index(i, j)] = 2.0 * nu2 * (std::exp(-2.0 * kPi * grid.y(j)) - 1.0);
    if (params.alpha != 0.0) {
        // r3 = i(-p_y + alpha Im beta) H, so the collar term enters as +alpha Im beta.
        const std::vector<double> s = collar_source(params, grid);
        const double h = grid.hy();
        for (int i = 0; i < grid.nx; ++i) {
            double acc = 0.0;
            for (int j = 1; j < grid.ny; ++j) {
                acc += 0.5 * h * (s[grid.index(i, j - 1)] + s[grid.index(i, j)]);
                sol.p[grid.index(i, j)] += params.alpha * acc;
            }
        }
    }
    for (int i = 0; i < grid.nx; ++i)
        sol.p_top_defect = std::max(sol.p_top_defect, std::abs(sol.p[grid.index(i, grid.ny - 1)]));
    sol.config = abelian_configuration(params, grid, sol.p);
    return sol;
}

Configuration flat_abelian_seed(const AbelianParams& params, const CylinderGrid& grid)
{
    AbelianParams p0 = params;
    p0.alpha = 0.0;
    return abelian_configuration(p0, grid, std::vector<double>(std::size_t(grid.points()), 0.0));
}

SpectralCurve spectral_curve(const AbelianParams& params, int rank)
{
    SpectralCurve sc;
    sc.coeffs = charpoly_coeffs(params.mu * cartan_h(rank));
    sc.reducible = params.mu != cplx(0.0, 0.0);
    return sc;
}

FieldGrid dbar_potential_profile(const AbelianParams& params, const CylinderGrid& grid)
{
    require_rank2(grid);
    const FieldGrid b = deformation_B(grid, holomorphic_psi(params, grid));
    FieldGrid out(grid, FormType::zero_form);
    const EndMatrix id = identity(grid.rank);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            out.set(i, j, (std::abs(params.alpha) * std::abs(b.at(i, j)(0, 0))) * id);
    return out;
}

Monodromy monodromy(const AbelianParams& params, const AbelianSolution& solution)
{
    const CylinderGrid& grid = solution.config.grid;
    require_rank2(grid);
    const EndMatrix h = cartan_h(2);
    Monodromy m;
    m.m0 = mat_exp(cplx(0.0, 2.0 * kPi) * params.mu * h);
    if (params.alpha == 0.0) {
        m.m_alpha = m.m0;
        return m;
    }
    AbelianParams p0 = params;
    p0.alpha = 0.0;
    const AbelianSolution base = solve_abelian(p0, grid);
    // theta(y): circle average of the alpha-linear shift of A_x, contracted with H/2.
    const EndMatrix half_h = 0.5 * h;
    double theta = 0.0;
    for (int j = 0; j < grid.ny; ++j) {
        double avg = 0.0;
        for (int i = 0; i < grid.nx; ++i) {
            const EndMatrix shift = (solution.config.A.ax.at(i, j) - base.config.A.ax.at(i, j)) / params.alpha;
            const EndMatrix contracted = half_h * shift;
            avg += contracted.trace().imag();
        }
        avg /= grid.nx;
        const double w = (j == 0 || j == grid.ny - 1) ? 0.5 : 1.0;
        theta += w * grid.hy() * avg;
    }
    m.theta = theta;
    m.m_alpha = mat_exp((cplx(0.0, 2.0 * kPi) * params.mu + cplx(0.0, params.alpha * theta)) * h);
    return m;
}

} // namespace hhlab
