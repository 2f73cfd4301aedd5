#include <doctest.h>

#include "hhlab/abelian.hpp"
#include "hhlab/continuation.hpp"
#include "hhlab/error.hpp"
#include "support.hpp"

using namespace hhlab;
using namespace hhtest;

namespace {

Configuration seed_on(int nx, int ny, AbelianParams p = {})
{
    return flat_abelian_seed(p, grid(nx, ny));
}

} // namespace

TEST_CASE("settings validation")
{
    NewtonSettings s;
    CHECK_NOTHROW(s.validate());
    s.backtrack = 1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = {};
    s.max_iter = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = {};
    s.tol_residual = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("Newton at alpha = 0")
{
    // the flat seed solves the continuum equations; on the grid it carries truncation error
    const Configuration seed = seed_on(16, 17);
    const double e16 = residual(seed).sup_norm(), e32 = residual(seed_on(32, 33)).sup_norm();
    CHECK(e16 < 1e-2);
    CHECK(e32 < 0.5 * e16);

    const NewtonResult base = newton_solve(seed, 0.0);
    CHECK(base.residual <= 1e-10);
    CHECK(base.iterations <= 4);

    // restarting from a converged solution needs at most two steps
    const NewtonResult again = newton_solve(base.config, seed, 0.0, NewtonSettings{});
    CHECK(again.iterations <= 2);
    CHECK(again.residual <= 1e-10);
}

TEST_CASE("Newton at alpha = 0.05")
{
    const Configuration seed = seed_on(16, 17);
    const NewtonResult r = newton_solve(seed, 0.05);
    CHECK(r.iterations <= 8);
    CHECK(r.residual <= 1e-10);
    CHECK(r.gauge <= 1e-10);
    CHECK(gauge_defect(r.config, seed) == doctest::Approx(r.gauge));
    CHECK(r.config.alpha == 0.05);
    CHECK(residual(r.config).sup_norm() == r.residual);
    // the merit decreases monotonically under the line search
    for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] < r.history[k - 1]);
}

TEST_CASE("non-convergence is reported with the merit history")
{
    // a tolerance below the rounding floor cannot be met
    const Configuration seed = seed_on(8, 9);
    NewtonSettings s;
    s.max_iter = 3;
    s.tol_residual = 1e-30;
    bool thrown = false;
    try {
        newton_solve(seed, 0.5, s);
    } catch (const DivergenceError& e) {
        thrown = true;
        CHECK_FALSE(e.history().empty());
    }
    CHECK(thrown);

    const ContinuationCurve c = sweep(seed, {0.0, 0.02}, s);
    CHECK(c.truncated);
    CHECK(c.samples.empty());
    CHECK_FALSE(c.failure_history.empty());
}

TEST_CASE("sweep arguments")
{
    const Configuration seed = seed_on(8, 9);
    CHECK_THROWS_AS(sweep(seed, {}), ArgumentError);
    CHECK_THROWS_AS(sweep(seed, {0.01, 0.02}), ArgumentError);
    CHECK_THROWS_AS(sweep(seed, {0.0, 0.02, 0.01}), ArgumentError);
    CHECK_THROWS_AS(sweep(seed, {0.0, 0.0}), ArgumentError);
}

TEST_CASE("sweep and parity extension")
{
    const Configuration seed = seed_on(16, 17);
    const ContinuationCurve c = sweep(seed, {0.0, 0.01, 0.02, 0.03});
    REQUIRE(c.samples.size() == 4);
    CHECK_FALSE(c.truncated);
    for (const CurveSample& s : c.samples) {
        CHECK(s.diag.residual <= 1e-10);
        CHECK(s.diag.gauge <= 1e-10);
        CHECK_FALSE(s.synthesized);
    }
    CHECK(c.samples.front().diag.hitchin_tr2_shift == 0.0);

    // neighbouring samples move by O(step)
    for (std::size_t k = 1; k < c.samples.size(); ++k) {
        const double d = max_diff(c.samples[k].config.psi, c.samples[k - 1].config.psi);
        CHECK(d < 1.0 * (c.samples[k].alpha - c.samples[k - 1].alpha) + 1e-12);
    }

    const ContinuationCurve e = parity_extend(c);
    REQUIRE(e.samples.size() == 7);
    for (std::size_t k = 1; k < e.samples.size(); ++k) CHECK(e.samples[k].alpha > e.samples[k - 1].alpha);
    for (int k = 0; k < 3; ++k) {
        const CurveSample& m = e.samples[std::size_t(k)];
        const CurveSample& src = c.samples[std::size_t(3 - k)];
        CHECK(m.synthesized);
        CHECK(m.alpha == -src.alpha);
        CHECK(bit_equal(m.config.psi, -src.config.psi));
        CHECK(bit_equal(m.config.phi, src.config.phi));
        CHECK(bit_equal(m.config.A.ax, src.config.A.ax));
        CHECK(m.diag.residual <= 1e-10);
    }

    ContinuationCurve neg = c;
    neg.samples[1].alpha = -0.01;
    CHECK_THROWS_AS(parity_extend(neg), ArgumentError);
}

TEST_CASE("a seed without psi stays on the psi = 0 branch")
{
    AbelianParams p;
    p.nu = 0.0;
    const Configuration seed = seed_on(16, 17, p);
    for (const double a : {0.05, -0.3}) {
        const NewtonResult r = newton_solve(seed, a);
        CHECK(r.config.psi.sup_norm() == 0.0);
        CHECK(r.residual < 1e-14);
    }
}

TEST_CASE("constants")
{
    const Configuration c1 = seed_on(8, 9);
    AbelianParams p;
    p.mu = cplx(0.1, 0.4);
    const Configuration c2 = seed_on(8, 9, p);
    const Constants k1 = estimate_constants(c1), k2 = estimate_constants(c2);
    CHECK(k1.K2 > 0.0);
    CHECK(k1.K2 == k2.K2); // depends on the grid only
    CHECK(k1.M > 0.0);
    CHECK(k1.alpha_star == doctest::Approx(1.0 / (4.0 * k1.K2 * k1.M)));
    CHECK(k1.sigma.dense);
    CHECK(k1.sigma.sigma_min > 0.0);
    CHECK(k1.sigma.sigma_max >= k1.sigma.sigma_min);

    CylinderGrid g = grid(8, 9);
    g.cutoff_scale = 2.0;
    const Constants k3 = estimate_constants(flat_abelian_seed(AbelianParams{}, g));
    CHECK(k3.K2 == doctest::Approx(2.0 * k1.K2).epsilon(1e-12));
    CHECK(k3.alpha_star == doctest::Approx(0.5 * k1.alpha_star).epsilon(1e-12));

    // deterministic for a fixed seed
    CHECK(estimate_constants(c1, 7).K1 == estimate_constants(c1, 7).K1);
}

TEST_CASE("frozen-linearization iteration")
{
    const Configuration seed = seed_on(16, 17);
    const PicardResult r = picard_frozen(seed, 0.02);
    CHECK(r.converged);
    CHECK(r.history.back() <= 1e-10);
    CHECK(r.contraction < 1.0);
    CHECK(residual(r.config).sup_norm() <= 1e-10);
}
