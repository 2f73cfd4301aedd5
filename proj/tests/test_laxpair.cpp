#include <doctest.h>

#include "hhlab/abelian.hpp"
#include "hhlab/error.hpp"
#include "hhlab/laxpair.hpp"
#include "hhlab/random.hpp"
#include "support.hpp"

using namespace hhlab;
using namespace hhtest;

namespace {

const cplx I1(0.0, 1.0);

FieldGrid constant(const CylinderGrid& g, FormType f, const EndMatrix& m)
{
    return sample(g, f, [](double, double) { return cplx(1.0); }, m);
}

// Every field constant over the cylinder; A anti-Hermitian, the rest arbitrary.
Configuration constant_configuration(Rng& rng, const CylinderGrid& g)
{
    Configuration c = Configuration::zero(g);
    c.A.ax = constant(g, FormType::zero_form, random_anti_hermitian(rng, g.rank, 0.5));
    c.A.ay = constant(g, FormType::zero_form, random_anti_hermitian(rng, g.rank, 0.5));
    c.phi = constant(g, FormType::one_zero, random_matrix(rng, g.rank, 0.5));
    c.psi = constant(g, FormType::one_zero, random_matrix(rng, g.rank, 0.5));
    return c;
}

} // namespace

TEST_CASE("generator vanishes without psi")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(3);
    Configuration c = random_configuration(rng, g, 0.05);
    c.psi = FieldGrid(g, FormType::one_zero);
    const Generator gen = solve_generator(c);
    CHECK(gen.G.sup_norm() == 0.0);
    CHECK(gen.neumann_defect == 0.0);
}

TEST_CASE("generator boundary values")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(4);
    const Configuration c = random_configuration(rng, g, 0.05);
    const Generator gen = solve_generator(c);
    CHECK(gen.G.sup_norm() > 0.0);
    CHECK(gen.dirichlet_defect < 1e-12);
    CHECK(gen.refinement_iterations == 0);
}

TEST_CASE("covariant Laplacian")
{
    SUBCASE("flat connection: second order in y against the analytic Laplacian")
    {
        std::vector<double> err;
        for (const int ny : {33, 65}) {
            const CylinderGrid g = grid(32, ny);
            const Connection A{FieldGrid(g, FormType::zero_form), FieldGrid(g, FormType::zero_form)};
            auto f = [](double x, double y) { return std::cos(2.0 * kPi * x) * std::pow(std::sin(kPi * y), 2); };
            auto lap = [](double x, double y) {
                return std::cos(2.0 * kPi * x) *
                       (2.0 * kPi * kPi * std::cos(2.0 * kPi * y) - 4.0 * kPi * kPi * std::pow(std::sin(kPi * y), 2));
            };
            const FieldGrid G = sample(g, FormType::zero_form, [&](double x, double y) { return cplx(f(x, y)); }, H());
            const FieldGrid L = sample(g, FormType::zero_form, [&](double x, double y) { return cplx(lap(x, y)); }, H());
            err.push_back(max_diff(covariant_laplacian(g, A, G), L, 1));
        }
        CHECK(err[1] < 1e-3 * 6.0 * kPi * kPi);
        CHECK(order(err[0], err[1]) >= 1.8);
    }
    SUBCASE("constant connection and constant field: nested commutators")
    {
        const CylinderGrid g = grid(16, 17);
        Rng rng(5);
        const Configuration c = constant_configuration(rng, g);
        const EndMatrix X = random_matrix(rng, 2);
        const EndMatrix ax = c.A.ax.at(0, 0), ay = c.A.ay.at(0, 0);
        const EndMatrix expect = commutator(ax, commutator(ax, X)) + commutator(ay, commutator(ay, X));
        const FieldGrid out = covariant_laplacian(g, c.A, constant(g, FormType::zero_form, X));
        CHECK(max_diff(out, constant(g, FormType::zero_form, expect)) < 1e-12);
    }
}

TEST_CASE("Lax data at alpha = 0")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(6);
    const Configuration c = random_configuration(rng, g, 0.0);
    const Generator gen = solve_generator(c);
    const ResidualTriple r = residual(c);
    for (const cplx lambda : {cplx(0.5), cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
        const LaxConnection lc = build_lax(c, gen, lambda);
        CHECK(max_diff(lc.g_field, constant(g, FormType::zero_form, identity(2))) == 0.0);
        CHECK(lc.max_condition == doctest::Approx(1.0));
        CHECK(max_diff(lc.A_lambda.ax, c.A.ax) < 1e-15);
        CHECK(lc.w_z.sup_norm() == 0.0);
        // the spectral parameter drops out of [psi/lambda^2, lambda^2 psi^dagger]
        CHECK(max_diff(lax_curvature(lc, c), r.r3) < 1e-12);
        CHECK(max_diff(lax_z(lc), a_z(c.A) + c.phi + (1.0 / (lambda * lambda)) * c.psi) < 1e-14);
    }
    CHECK_THROWS_AS(build_lax(c, gen, 0.0), ArgumentError);
}

TEST_CASE("commutator identity on constant data")
{
    // with constant coefficients [L, M] s = [A_z, A_zbar] s exactly, so the defect is
    // |C s| / |s| with C = [A_z, A_zbar] - (i/2) F built from the matrices alone
    const CylinderGrid g = grid(16, 17);
    Rng rng(7);
    const Configuration c = constant_configuration(rng, g);
    const Generator gen = solve_generator(c);
    const std::vector<FieldGrid> sections = band_limited_sections(g, 5, 11);
    const EndMatrix ax = c.A.ax.at(0, 0), ay = c.A.ay.at(0, 0), phi = c.phi.at(0, 0), psi = c.psi.at(0, 0);
    for (const cplx lambda : {cplx(0.5), cplx(1.0, 1.0)}) {
        const cplx l2 = lambda * lambda;
        const EndMatrix az = 0.5 * (ax - I1 * ay) + phi + psi / l2;
        const EndMatrix azb = 0.5 * (ax + I1 * ay) + phi.adjoint() + l2 * psi.adjoint();
        const EndMatrix F = commutator(ax, ay) - 2.0 * I1 * commutator(phi, phi.adjoint()) -
                            2.0 * I1 * commutator(psi, psi.adjoint());
        const EndMatrix C = commutator(az, azb) - 0.5 * I1 * F;
        double expect = 0.0;
        for (const FieldGrid& s : sections) {
            double num = 0.0;
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j) num = std::max(num, (C * EndMatrix(s.at(i, j))).cwiseAbs().maxCoeff());
            expect = std::max(expect, num / s.sup_norm());
        }
        const LaxConnection lc = build_lax(c, gen, lambda);
        CHECK(max_diff(lax_curvature(lc, c), constant(g, FormType::one_one, F)) < 1e-12);
        CHECK(commutator_check(lc, c, sections) == doctest::Approx(expect).epsilon(1e-10));
    }

    // commuting constant data solves every equation and the defect vanishes
    Configuration d = Configuration::zero(g);
    d.A.ax = constant(g, FormType::zero_form, 0.7 * I1 * H());
    d.phi = constant(g, FormType::one_zero, cplx(0.3, 0.2) * H());
    d.psi = constant(g, FormType::one_zero, cplx(-0.1, 0.4) * H());
    const LaxConnection ld = build_lax(d, solve_generator(d), cplx(0.5, 1.5));
    CHECK(commutator_check(ld, d, sections) < 1e-13);
}

TEST_CASE("commutator check is scale free in the sections")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(8);
    const Configuration c = random_configuration(rng, g, 0.0);
    const LaxConnection lc = build_lax(c, solve_generator(c), 1.0);
    std::vector<FieldGrid> s = band_limited_sections(g, 4, 2);
    const double a = commutator_check(lc, c, s);
    for (FieldGrid& f : s) f *= cplx(3.0, -2.0);
    CHECK(commutator_check(lc, c, s) == doctest::Approx(a).epsilon(1e-12));
    CHECK(commutator_check(lc, c, s, true) <= commutator_check(lc, c, s) + 1e-15);
    s.resize(2);
    CHECK_THROWS_AS(commutator_check(lc, c, s), ArgumentError);
}

TEST_CASE("band-limited sections")
{
    const CylinderGrid g = grid(16, 17);
    const auto a = band_limited_sections(g, 3, 9), b = band_limited_sections(g, 3, 9), d = band_limited_sections(g, 3, 10);
    REQUIRE(a.size() == 3);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(bit_equal(a[k], b[k]));
    CHECK_FALSE(bit_equal(a[0], d[0]));
}

TEST_CASE("coarsening")
{
    const CylinderGrid g = grid(32, 33);
    Rng rng(9);
    const Configuration c = random_configuration(rng, g, 0.1);
    const Configuration cc = coarsen(c);
    CHECK(cc.grid.nx == 16);
    CHECK(cc.grid.ny == 17);
    CHECK(cc.alpha == c.alpha);
    for (int i = 0; i < cc.grid.nx; ++i)
        for (int j = 0; j < cc.grid.ny; ++j) CHECK((cc.psi.at(i, j) - c.psi.at(2 * i, 2 * j)).norm() == 0.0);
    CHECK_THROWS_AS(coarsen(random_configuration(rng, grid(16, 16), 0.0)), ValidationError);
}

TEST_CASE("Hitchin map")
{
    const CylinderGrid g = grid(16, 17);
    AbelianParams p;
    p.mu = cplx(0.3, 0.2);
    const Configuration c = flat_abelian_seed(p, g);
    const HitchinData h = hitchin_map(c);
    REQUIRE(h.traces.size() == 1);
    CHECK(max_diff(h.traces[0], constant(g, FormType::zero_form, 2.0 * p.mu * p.mu * identity(2))) < 1e-15);
    CHECK(h.dbar_sup[0] == 0.0);

    // invariant under a unitary change of frame
    Rng rng(10);
    const CylinderGrid g3 = grid(16, 17, 3);
    const Configuration c3 = random_configuration(rng, g3, 0.0);
    const EndMatrix u = mat_exp(random_anti_hermitian(rng, 3));
    Configuration d = c3;
    for (int i = 0; i < g3.nx; ++i)
        for (int j = 0; j < g3.ny; ++j) d.phi.set(i, j, u.adjoint() * EndMatrix(c3.phi.at(i, j)) * u);
    const HitchinData h1 = hitchin_map(c3), h2 = hitchin_map(d);
    REQUIRE(h1.traces.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) CHECK(max_diff(h1.traces[k], h2.traces[k]) < 1e-12);
}
