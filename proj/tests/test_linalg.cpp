#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "hhlab/linalg.hpp"
#include "hhlab/random.hpp"
#include "support.hpp"

using namespace hhlab;
using hhtest::H;

namespace {

EndMatrix m2(cplx a, cplx b, cplx c, cplx d)
{
    EndMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Truncated power series, long enough for |a| <= 2.
EndMatrix exp_series(const EndMatrix& a)
{
    EndMatrix sum = identity(int(a.rows())), term = identity(int(a.rows()));
    for (int k = 1; k < 60; ++k) {
        term = (term * a) / double(k);
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("commutator examples")
{
    CHECK(commutator(H(), H()).norm() == 0.0);
    const EndMatrix E = m2(0, 1, 0, 0), F = m2(0, 0, 1, 0);
    CHECK((commutator(E, F) - H()).norm() == 0.0);
    const cplx c(0.3, -1.2);
    CHECK((commutator(H(), m2(0, c, 0, 0)) - m2(0, 2.0 * c, 0, 0)).norm() == 0.0);
}

TEST_CASE("adjoint examples")
{
    CHECK((herm_adjoint(H()) - H()).norm() == 0.0);
    const cplx i(0, 1);
    CHECK((herm_adjoint(m2(0, i, 0, 0)) - m2(0, 0, -i, 0)).norm() == 0.0);
    Rng rng(7);
    const EndMatrix M = random_matrix(rng, 3);
    const cplx a(0.4, 2.0);
    CHECK((herm_adjoint(a * M) - std::conj(a) * herm_adjoint(M)).norm() < 1e-15);
}

TEST_CASE("matrix exponential")
{
    CHECK((mat_exp(EndMatrix::Zero(2, 2)) - identity(2)).norm() == 0.0);
    const cplx a(0.3, 0.1), b(-1.2, 0.5);
    const EndMatrix d = m2(a, 0, 0, b);
    CHECK((mat_exp(d) - m2(std::exp(a), 0, 0, std::exp(b))).norm() < 1e-15);
    const double t = 0.7;
    const EndMatrix th = t * H();
    CHECK((mat_exp(th) * mat_exp(-th) - identity(2)).norm() < 1e-13);

    SUBCASE("agrees with the power series on random matrices")
    {
        Rng rng(11);
        for (int r = 1; r <= kMaxRank; ++r) {
            const EndMatrix m = random_matrix(rng, r, 0.4);
            CHECK((mat_exp(m) - exp_series(m)).norm() < 1e-13);
        }
    }
    SUBCASE("anti-Hermitian input gives a unitary")
    {
        Rng rng(12);
        const EndMatrix x = random_anti_hermitian(rng, 3);
        const EndMatrix u = mat_exp(x);
        CHECK((u.adjoint() * u - identity(3)).norm() < 1e-13);
    }
}

TEST_CASE("characteristic polynomial")
{
    const cplx mu(0.3, 0.2);
    auto c = charpoly_coeffs(mu * H());
    REQUIRE(c.size() == 3);
    CHECK(c[0] == cplx(1));
    CHECK(std::abs(c[1]) == 0.0);
    CHECK(std::abs(c[2] + mu * mu) < 1e-15);

    c = charpoly_coeffs(EndMatrix::Zero(2, 2));
    CHECK(c == std::vector<cplx>{1, 0, 0});

    c = charpoly_coeffs(m2(1, 2, 3, 4));
    CHECK(std::abs(c[1] - cplx(-5)) < 1e-14);
    CHECK(std::abs(c[2] - cplx(-2)) < 1e-14);

    SUBCASE("roots are the eigenvalues")
    {
        Rng rng(3);
        for (int r = 1; r <= kMaxRank; ++r) {
            const EndMatrix m = random_matrix(rng, r);
            const auto coeffs = charpoly_coeffs(m);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(m), false);
            for (int k = 0; k < r; ++k) {
                const cplx lam = es.eigenvalues()(k);
                cplx p = 0.0;
                for (const cplx a : coeffs) p = p * lam + a;
                CHECK(std::abs(p) < 1e-11);
            }
        }
    }
    SUBCASE("invariant under conjugation")
    {
        Rng rng(5);
        const EndMatrix g = mat_exp(random_anti_hermitian(rng, 2));
        const auto a = charpoly_coeffs(mu * H()), b = charpoly_coeffs(g.adjoint() * (mu * H()) * g);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
    }
}

TEST_CASE("anti-Hermitian predicate")
{
    Rng rng(1);
    CHECK(is_anti_hermitian(random_anti_hermitian(rng, 4)));
    CHECK_FALSE(is_anti_hermitian(H()));
}
