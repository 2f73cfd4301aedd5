#include "hhlab/random.hpp"

#include <cmath>
#include <numbers>

namespace hhlab {

EndMatrix random_matrix(Rng& rng, int r, double scale)
{
    EndMatrix m(r, r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) m(a, b) = scale * rng.complex_symmetric();
    return m;
}

EndMatrix random_anti_hermitian(Rng& rng, int r, double scale)
{
    const EndMatrix m = random_matrix(rng, r, scale);
    return 0.5 * (m - m.adjoint());
}

namespace {

// sum over k in {-2..2}, q in {0..2} of c_kq e^{2 pi i k x} y^q with matrix coefficients.
FieldGrid smooth_modes(Rng& rng, const CylinderGrid& g, double scale, bool anti_hermitian)
{
    constexpr int K = 2, Q = 2;
    std::vector<EndMatrix> coef;
    for (int k = -K; k <= K; ++k)
        for (int q = 0; q <= Q; ++q) coef.push_back(random_matrix(rng, g.rank, scale / (1 + std::abs(k) + q)));
    FieldGrid f(g, FormType::zero_form);
    const double tau = 2.0 * std::numbers::pi;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            EndMatrix v = EndMatrix::Zero(g.rank, g.rank);
            int n = 0;
            for (int k = -K; k <= K; ++k) {
                const cplx e = std::exp(cplx(0.0, tau * k * g.x(i)));
                for (int q = 0; q <= Q; ++q) v += (e * std::pow(g.y(j), q)) * coef[std::size_t(n++)];
            }
            if (anti_hermitian) v = 0.5 * (v - v.adjoint()).eval();
            f.set(i, j, v);
        }
    return f;
}

} // namespace

FieldGrid random_smooth_field(Rng& rng, const CylinderGrid& g, FormType form, double scale)
{
    FieldGrid f = smooth_modes(rng, g, scale, false);
    f.set_form(form);
    return f;
}

FieldGrid random_smooth_anti_hermitian(Rng& rng, const CylinderGrid& g, double scale)
{
    return smooth_modes(rng, g, scale, true);
}

Configuration random_configuration(Rng& rng, const CylinderGrid& g, double alpha, double scale)
{
    Configuration c = Configuration::zero(g, alpha);
    c.A.ax = random_smooth_anti_hermitian(rng, g, scale);
    c.A.ay = random_smooth_anti_hermitian(rng, g, scale);
    c.phi = random_smooth_field(rng, g, FormType::one_zero, scale);
    c.psi = random_smooth_field(rng, g, FormType::one_zero, scale);
    return c;
}

TangentVector random_tangent(Rng& rng, const CylinderGrid& g, double scale)
{
    TangentVector u;
    u.a.ax = random_smooth_anti_hermitian(rng, g, scale);
    u.a.ay = random_smooth_anti_hermitian(rng, g, scale);
    u.chi = random_smooth_field(rng, g, FormType::one_zero, scale);
    u.xi = random_smooth_field(rng, g, FormType::one_zero, scale);
    return u;
}

} // namespace hhlab
