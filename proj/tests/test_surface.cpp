#include <doctest.h>

#include "hhlab/error.hpp"
#include "hhlab/random.hpp"
#include "hhlab/surface.hpp"
#include "support.hpp"

using namespace hhlab;
using namespace hhtest;

namespace {

const cplx I1(0.0, 1.0);

cplx mode(int k, double x) { return std::exp(I1 * (2.0 * kPi * k * x)); }

// e^{2 pi i k z} with z = x + i y.
cplx hol(int k, double x, double y) { return std::exp(I1 * (2.0 * kPi * k * cplx(x, y))); }

} // namespace

TEST_CASE("grid validation")
{
    CHECK_NOTHROW(grid(16, 17).validate());
    CHECK_THROWS_AS(grid(7, 17).validate(), ValidationError);
    CHECK_THROWS_WITH(grid(7, 17).validate(), "grid.nx must be even and ≥ 8");
    CHECK_THROWS_AS(grid(16, 5).validate(), ValidationError);
    CHECK_THROWS_AS(grid(16, 17, 5).validate(), ValidationError);
    CylinderGrid g = grid(16, 17);
    g.epsilon = 0.6;
    CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("x stencil: exact symbol on Fourier modes and fourth order")
{
    for (const int nx : {16, 32}) {
        const CylinderGrid g = grid(nx, 9, 1);
        for (int k = 0; k <= nx / 4; ++k) {
            const FieldGrid f = sample(g, FormType::zero_form, [&](double x, double) { return mode(k, x); }, identity(1));
            const double th = 2.0 * kPi * k * g.hx();
            const cplx symbol = I1 * (8.0 * std::sin(th) - std::sin(2.0 * th)) / (6.0 * g.hx());
            const FieldGrid expect =
                sample(g, FormType::zero_form, [&](double x, double) { return symbol * mode(k, x); }, identity(1));
            CHECK(max_diff(d_x(f), expect) < 1e-10 * (1.0 + std::abs(symbol)));
        }
    }
    double err[2];
    int n = 0;
    for (const int nx : {16, 32}) {
        const CylinderGrid g = grid(nx, 9, 1);
        const FieldGrid f = sample(g, FormType::zero_form, [](double x, double) { return mode(2, x); }, identity(1));
        const FieldGrid exact = sample(g, FormType::zero_form,
                                       [](double x, double) { return I1 * (4.0 * kPi) * mode(2, x); }, identity(1));
        err[n++] = max_diff(d_x(f), exact);
    }
    CHECK(order(err[0], err[1]) >= 3.8);
}

TEST_CASE("y stencil: exact on quadratics and second order up to the boundary")
{
    const CylinderGrid g = grid(8, 17, 1);
    const FieldGrid q = sample(g, FormType::zero_form, [](double, double y) { return 1.0 - 3.0 * y + 2.5 * y * y; },
                               identity(1));
    const FieldGrid dq =
        sample(g, FormType::zero_form, [](double, double y) { return -3.0 + 5.0 * y; }, identity(1));
    CHECK(max_diff(d_y(q), dq) < 1e-12);

    double err[2];
    int n = 0;
    for (const int ny : {17, 33}) {
        const CylinderGrid gg = grid(8, ny, 1);
        const FieldGrid f = sample(gg, FormType::zero_form, [](double, double y) { return std::exp(1.3 * y) * std::sin(2.0 * y); },
                                   identity(1));
        const FieldGrid df = sample(gg, FormType::zero_form,
                                    [](double, double y) {
                                        return std::exp(1.3 * y) * (1.3 * std::sin(2.0 * y) + 2.0 * std::cos(2.0 * y));
                                    },
                                    identity(1));
        err[n++] = max_diff(d_y(f), df);
    }
    CHECK(order(err[0], err[1]) >= 1.8);
}

TEST_CASE("dbar_A examples at A = 0")
{
    const CylinderGrid g = grid(16, 17);
    const Connection A = Connection::zero(g);
    Rng rng(4);
    const EndMatrix c = random_matrix(rng, 2);
    const FieldGrid cst = sample(g, FormType::one_zero, [](double, double) { return cplx(1.0); }, c);
    CHECK(dbar_A(g, A, cst).sup_norm() < 1e-12);

    // holomorphic mode: the defect is pure truncation and shrinks at second order
    const cplx nu(0.0, 0.2);
    double err[2];
    int n = 0;
    for (const int ny : {33, 65}) {
        const CylinderGrid gs = grid(32, ny);
        const FieldGrid f =
            sample(gs, FormType::one_zero, [&](double x, double y) { return nu * hol(1, x, y); }, H());
        err[n++] = dbar_A(gs, Connection::zero(gs), f).sup_norm();
    }
    CHECK(err[0] < 5e-2);
    CHECK(order(err[0], err[1]) >= 1.8);

    // dbar of the y-part of conj(z): dbar(-i y) = 1/2 exactly, and an antiholomorphic
    // periodic mode e^{-2 pi i conj(z)} has dbar = -2 pi i times itself.
    const FieldGrid ylin = sample(g, FormType::one_zero, [](double, double y) { return -I1 * y; }, H());
    const FieldGrid half = sample(g, FormType::one_one, [](double, double) { return cplx(0.5); }, H());
    CHECK(max_diff(dbar_A(g, A, ylin), half) < 1e-12);
    const CylinderGrid gf = grid(64, 129);
    const auto anti = [](double x, double y) { return std::exp(-I1 * 2.0 * kPi * cplx(x, -y)); };
    const FieldGrid fa = sample(gf, FormType::one_zero, anti, H());
    const FieldGrid da =
        sample(gf, FormType::one_one, [&](double x, double y) { return -2.0 * kPi * I1 * anti(x, y); }, H());
    CHECK(max_diff(dbar_A(gf, Connection::zero(gf), fa), da) < 5e-3);

    CHECK_THROWS_AS(dbar_A(g, A, FieldGrid(g, FormType::zero_form)), ShapeError);
}

TEST_CASE("box dbar: holomorphic modes converge, last row is zero")
{
    double err[2];
    int n = 0;
    for (const int ny : {33, 65}) {
        const CylinderGrid g = grid(32, ny);
        const FieldGrid f = sample(g, FormType::one_zero, [](double x, double y) { return hol(1, x, y); }, H());
        const FieldGrid d = dbar_A_box(g, Connection::zero(g), f);
        for (int i = 0; i < g.nx; ++i) CHECK(d.at(i, g.ny - 1).norm() == 0.0);
        err[n++] = d.sup_norm();
    }
    CHECK(order(err[0], err[1]) >= 1.8);
}

TEST_CASE("curvature")
{
    const CylinderGrid g = grid(16, 17);
    CHECK(curvature(g, Connection::zero(g)).sup_norm() == 0.0);

    // A = i p(y) H dx: the dx^dy coefficient is -i p'(y) H
    double err[2];
    int n = 0;
    for (const int ny : {17, 33}) {
        const CylinderGrid gg = grid(16, ny);
        Connection A = Connection::zero(gg);
        A.ax = sample(gg, FormType::zero_form, [](double, double y) { return I1 * std::sin(kPi * y); }, H());
        const FieldGrid expect = sample(
            gg, FormType::one_one, [](double, double y) { return -I1 * kPi * std::cos(kPi * y); }, H());
        err[n++] = max_diff(curvature(gg, A), expect);
    }
    CHECK(err[1] < 1e-2);
    CHECK(order(err[0], err[1]) >= 1.8);

    SUBCASE("constant gauge transformation conjugates the curvature")
    {
        Rng rng(9);
        Connection A{random_smooth_anti_hermitian(rng, g), random_smooth_anti_hermitian(rng, g)};
        const EndMatrix u = mat_exp(random_anti_hermitian(rng, 2));
        auto conj = [&](const FieldGrid& f) {
            FieldGrid out(f.grid(), f.form());
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j) out.set(i, j, u.adjoint() * f.at(i, j) * u);
            return out;
        };
        const Connection Ag{conj(A.ax), conj(A.ay)};
        CHECK(max_diff(curvature(g, Ag), conj(curvature(g, A))) < 1e-12);
    }
}

TEST_CASE("boundary trace")
{
    const CylinderGrid g = grid(16, 17);
    Rng rng(2);
    const EndMatrix c = random_matrix(rng, 2);
    auto [b0, t0] = trace_tau(g, sample(g, FormType::one_zero, [](double, double) { return cplx(1.0); }, c));
    for (int i = 0; i < g.nx; ++i) {
        CHECK(b0.values[i].norm() < 1e-12);
        CHECK(t0.values[i].norm() < 1e-12);
    }

    // holomorphic mode: -2 pi nu e^{2 pi i x} H at y = 0, within the closure's leading
    // error (h^2 / 6) times the third derivative plus (h^3 / 2) times the fourth
    const cplx nu(0.0, 0.2);
    for (const int ny : {17, 33, 65}) {
        const CylinderGrid gg = grid(16, ny);
        auto [b, t] = trace_tau(gg, sample(gg, FormType::one_zero, [&](double x, double y) { return nu * hol(1, x, y); }, H()));
        const double h = gg.hy(), k = 2.0 * kPi;
        const double bound = std::abs(nu) * (h * h * std::pow(k, 3) / 6.0 + h * h * h * std::pow(k, 4) / 2.0);
        for (int i = 0; i < gg.nx; ++i)
            CHECK((b.values[i] - (-2.0 * kPi * nu * mode(1, gg.x(i))) * H()).cwiseAbs().maxCoeff() <= bound);
    }
    // y^3: the closure error is exactly h^2, so the order is 2
    double err[2];
    int n = 0;
    for (const int ny : {17, 33}) {
        const CylinderGrid gg = grid(16, ny);
        auto [b, t] = trace_tau(gg, sample(gg, FormType::one_zero, [](double, double y) { return cplx(y * y * y); }, H()));
        double e = 0.0;
        for (int i = 0; i < gg.nx; ++i) e = std::max(e, b.values[i].cwiseAbs().maxCoeff());
        err[n++] = e;
    }
    CHECK(order(err[0], err[1]) >= 1.8);

    auto [bq, tq] = trace_tau(g, sample(g, FormType::one_zero, [](double, double y) { return cplx(y * y); }, H()));
    for (int i = 0; i < g.nx; ++i) {
        CHECK(bq.values[i].norm() < 1e-12);
        CHECK((tq.values[i] - (-2.0) * H()).norm() < 1e-12); // inward normal at y = 1 is -d/dy
    }
}

TEST_CASE("collar extension")
{
    const CylinderGrid g = grid(16, 17);
    BoundaryData zb{Side::bottom, std::vector<EndMatrix>(g.nx, EndMatrix::Zero(2, 2))};
    BoundaryData zt{Side::top, zb.values};
    CHECK(extend_iota(g, zb, zt).sup_norm() == 0.0);

    const cplx c(0.7, -0.2);
    BoundaryData cb{Side::bottom, std::vector<EndMatrix>(g.nx, c * identity(2))};
    const FieldGrid e = extend_iota(g, cb, zt);
    for (int i = 0; i < g.nx; ++i) {
        CHECK((e.at(i, 0) - c * identity(2)).norm() == 0.0);
        for (int j = 0; j < g.ny; ++j)
            if (g.y(j) >= g.epsilon) CHECK(e.at(i, j).norm() == 0.0);
    }

    // restriction of the extension returns the data on both circles
    Rng rng(6);
    BoundaryData rb{Side::bottom, {}}, rt{Side::top, {}};
    for (int i = 0; i < g.nx; ++i) {
        rb.values.push_back(random_matrix(rng, 2));
        rt.values.push_back(random_matrix(rng, 2));
    }
    const FieldGrid r = extend_iota(g, rb, rt);
    for (int i = 0; i < g.nx; ++i) {
        CHECK((r.at(i, 0) - rb.values[i]).norm() == 0.0);
        CHECK((r.at(i, g.ny - 1) - rt.values[i]).norm() == 0.0);
    }
    CHECK_THROWS_AS(extend_iota(g, BoundaryData{Side::bottom, {}}, zt), ShapeError);
}

TEST_CASE("boundary deformation B")
{
    const CylinderGrid g = grid(16, 17);
    // normal derivative independent of x: B vanishes
    const FieldGrid lin = sample(g, FormType::one_zero, [](double, double y) { return cplx(y); }, H());
    CHECK(deformation_B(g, lin).sup_norm() < 1e-12);

    // holomorphic mode: bottom collar coefficient chi(y) (-2 pi nu)(2 pi i) e^{2 pi i x} H
    const cplx nu(0.0, 0.2);
    {
        const CylinderGrid gg = grid(32, 65);
        const FieldGrid b =
            deformation_B(gg, sample(gg, FormType::one_zero, [&](double x, double y) { return nu * hol(1, x, y); }, H()));
        double e = 0.0, peak = 0.0;
        for (int i = 0; i < gg.nx; ++i)
            for (int j = 0; j < collar_rows(gg); ++j) {
                const cplx v = collar_cutoff(gg, gg.y(j), Side::bottom) * (-2.0 * kPi * nu) * (2.0 * kPi * I1) *
                               mode(1, gg.x(i));
                e = std::max(e, (b.at(i, j) - v * H()).cwiseAbs().maxCoeff());
                peak = std::max(peak, std::abs(v));
            }
        CHECK(e < 2e-3 * peak);
    }
    // y^3 e^{2 pi i x}: B vanishes on the bottom collar, where the computed one is
    // h^2 times a fixed field
    double err[2];
    int n = 0;
    for (const int ny : {17, 33}) {
        const CylinderGrid gg = grid(16, ny);
        const FieldGrid b = deformation_B(
            gg, sample(gg, FormType::one_zero, [](double x, double y) { return y * y * y * mode(1, x); }, H()));
        double e = 0.0;
        for (int i = 0; i < gg.nx; ++i)
            for (int j = 0; j < collar_rows(gg); ++j) e = std::max(e, b.at(i, j).cwiseAbs().maxCoeff());
        err[n++] = e;
    }
    CHECK(order(err[0], err[1]) >= 1.8);

    Rng rng(8);
    const FieldGrid p1 = random_smooth_field(rng, g, FormType::one_zero), p2 = random_smooth_field(rng, g, FormType::one_zero);
    const cplx a(0.3, 1.1), b(-0.7, 0.2);
    const FieldGrid lhs = deformation_B(g, a * p1 + b * p2);
    const FieldGrid rhs = a * deformation_B(g, p1) + b * deformation_B(g, p2);
    CHECK(max_diff(lhs, rhs) < 1e-12 * (1.0 + lhs.sup_norm()));
}

TEST_CASE("field arithmetic rejects mismatched shapes")
{
    FieldGrid a(grid(16, 17), FormType::zero_form), b(grid(16, 19), FormType::zero_form);
    CHECK_THROWS_AS(a += b, ShapeError);
    CHECK_THROWS_AS(pointwise_product(a, b), ShapeError);
}
