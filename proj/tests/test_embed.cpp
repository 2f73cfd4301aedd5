#include <doctest.h>

#include "hhlab/abelian.hpp"
#include "hhlab/embed.hpp"
#include "hhlab/error.hpp"
#include "hhlab/random.hpp"
#include "support.hpp"

using namespace hhlab;
using namespace hhtest;

TEST_CASE("composite field examples")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(1);
    const Configuration c = random_configuration(rng, g, 0.0);

    CHECK(bit_equal(composite(c.phi, c.psi, 0.0).Phi, c.phi + c.psi));
    const FieldGrid zero(g, FormType::one_zero);
    for (const double a : {0.0, 0.3, -2.0}) CHECK(bit_equal(composite(c.phi, zero, a).Phi, c.phi));
    CHECK(composite(c.phi, -c.phi, 0.7).Phi.sup_norm() == 0.0);

    // pointwise against the matrix formula
    const double alpha = 0.37;
    const FieldGrid Phi = composite(c.phi, c.psi, alpha).Phi;
    CHECK(Phi.form() == FormType::one_zero);
    for (int i = 0; i < g.nx; i += 3)
        for (int j = 0; j < g.ny; j += 4) {
            const EndMatrix p = c.phi.at(i, j), q = c.psi.at(i, j);
            CHECK((EndMatrix(Phi.at(i, j)) - (p + q + alpha * (p * q - q * p))).norm() < 1e-14);
        }

    CHECK_THROWS_AS(composite(c.phi, FieldGrid(grid(16, 9), FormType::one_zero), 0.1), ShapeError);
}

TEST_CASE("commuting pair: the composite does not see alpha")
{
    const CylinderGrid g = grid(16, 17);
    const Configuration ab = flat_abelian_seed(AbelianParams{}, g);
    const FieldGrid base = composite(ab.phi, ab.psi, 0.0).Phi;
    for (const double a : {0.01, 0.5, -1.0}) CHECK(bit_equal(composite(ab.phi, ab.psi, a).Phi, base));
}

TEST_CASE("embedded residual agrees with the classical path")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(2);
    for (int k = 0; k < 5; ++k) {
        const Configuration c = random_configuration(rng, g, 0.2 * rng.symmetric());
        const ResidualTriple e = residual_embedded(c);
        const ResidualTriple full = residual(c);
        CHECK(bit_equal(e.r1, full.r1));
        CHECK(bit_equal(e.r2, full.r2));

        Configuration classical = Configuration::zero(g, 0.0);
        classical.A = c.A;
        classical.phi = composite(c.phi, c.psi, c.alpha).Phi;
        CHECK(max_diff(e.r3, residual(classical).r3) == 0.0);
        CHECK(e.r3.form() == FormType::one_one);
    }
}

TEST_CASE("composite holomorphy")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(3);
    const Configuration c = random_configuration(rng, g, 0.0);
    // alpha = 0: the box operator is linear
    const FieldGrid sum = dbar_A_box(g, c.A, c.phi) + dbar_A_box(g, c.A, c.psi);
    CHECK(max_diff(dbar_composite(c), sum) < 1e-13);

    // psi = -phi annihilates the composite even when phi is not holomorphic
    Configuration r = random_configuration(rng, g, 0.4);
    r.psi = -r.phi;
    CHECK(dbar_composite(r).sup_norm() == 0.0);
    CHECK(dbar_A_box(g, r.A, r.phi).sup_norm() > 1e-3);
}
