#include "hhlab/laxpair.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SparseLU>

#include "hhlab/error.hpp"
#include "hhlab/random.hpp"

namespace hhlab {

namespace {

using Block = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxRank * kMaxRank, kMaxRank * kMaxRank>;

// vec([X, Y]) = ad(X) vec(Y) for column-major vec.
Block ad_matrix(const EndMatrix& X)
{
    const int r = int(X.rows()), n = r * r;
    Block m = Block::Zero(n, n);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) {
                m(a + r * b, c + r * b) += X(a, c);
                m(a + r * b, a + r * c) -= X(c, b);
            }
    return m;
}

FieldGrid as_form(FieldGrid f, FormType t)
{
    f.set_form(t);
    return f;
}

// Compact second differences; boundary rows in y fall back to composed first derivatives.
FieldGrid compact_laplacian(const FieldGrid& f)
{
    const CylinderGrid& g = f.grid();
    const int m = g.entries();
    const double ix = 1.0 / (12.0 * g.hx() * g.hx()), iy = 1.0 / (g.hy() * g.hy());
    FieldGrid out = d_y(d_y(f));
    for (int i = 0; i < g.nx; ++i) {
        const int im2 = (i + g.nx - 2) % g.nx, im1 = (i + g.nx - 1) % g.nx;
        const int ip1 = (i + 1) % g.nx, ip2 = (i + 2) % g.nx;
        for (int j = 0; j < g.ny; ++j) {
            cplx* o = out.ptr(i, j);
            const cplx* c0 = f.ptr(i, j);
            const cplx *a2 = f.ptr(im2, j), *a1 = f.ptr(im1, j), *b1 = f.ptr(ip1, j), *b2 = f.ptr(ip2, j);
            const bool interior = j > 0 && j < g.ny - 1;
            for (int e = 0; e < m; ++e) {
                const cplx xx = (-a2[e] + 16.0 * a1[e] - 30.0 * c0[e] + 16.0 * b1[e] - b2[e]) * ix;
                if (interior) o[e] = xx + (f.ptr(i, j - 1)[e] - 2.0 * c0[e] + f.ptr(i, j + 1)[e]) * iy;
                else o[e] += xx;
            }
        }
    }
    return out;
}

FieldGrid covariant_d(const FieldGrid& f, const FieldGrid& A_mu, bool x)
{
    FieldGrid out = x ? d_x(f) : d_y(f);
    out += pointwise_commutator(A_mu, f);
    return out;
}

// Sum_mu D_mu(g^{-1} D_mu g)/alpha - Sum_mu D_mu D_mu G: the part of the nonlinear
// generator operator beyond its linearization.
FieldGrid nonlinear_remainder(const CylinderGrid& grid, const Connection& A, const FieldGrid& G, double alpha)
{
    FieldGrid gf(grid, FormType::zero_form), gi(grid, FormType::zero_form);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const EndMatrix e = alpha * EndMatrix(G.at(i, j));
            gf.set(i, j, mat_exp(e));
            gi.set(i, j, mat_exp(-e));
        }
    FieldGrid out(grid, FormType::zero_form);
    for (int mu = 0; mu < 2; ++mu) {
        const FieldGrid& Am = mu == 0 ? A.ax : A.ay;
        FieldGrid mc = pointwise_product(gi, covariant_d(gf, Am, mu == 0));
        mc *= cplx(1.0 / alpha);
        out += covariant_d(mc, Am, mu == 0);
        out -= covariant_d(covariant_d(G, Am, mu == 0), Am, mu == 0);
    }
    return out;
}

FieldGrid conjugate_by(const FieldGrid& f, const FieldGrid& gi, const FieldGrid& g)
{
    return pointwise_product(gi, pointwise_product(f, g));
}

} // namespace

FieldGrid covariant_laplacian(const CylinderGrid& grid, const Connection& A, const FieldGrid& G)
{
    if (!(G.grid() == grid) || !(A.ax.grid() == grid)) throw ShapeError("covariant_laplacian: grid mismatch");
    FieldGrid out = compact_laplacian(G);
    FieldGrid div = d_x(A.ax);
    div += d_y(A.ay);
    out += pointwise_commutator(div, G);
    FieldGrid two_ax = A.ax, two_ay = A.ay;
    two_ax *= 2.0;
    two_ay *= 2.0;
    out += pointwise_commutator(two_ax, d_x(G));
    out += pointwise_commutator(two_ay, d_y(G));
    out += pointwise_commutator(A.ax, pointwise_commutator(A.ax, G));
    out += pointwise_commutator(A.ay, pointwise_commutator(A.ay, G));
    return as_form(out, FormType::zero_form);
}

FieldGrid generator_source(const CylinderGrid& grid, const FieldGrid& psi)
{
    return as_form(deformation_B(grid, psi), FormType::zero_form);
}

namespace {

Eigen::SparseMatrix<cplx> generator_matrix(const CylinderGrid& g, const Connection& A)
{
    const int r = g.rank, m = r * r;
    const double hx = g.hx(), hy = g.hy();
    const double cxx[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    const double cx[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    FieldGrid div = d_x(A.ax);
    div += d_y(A.ay);

    std::vector<Eigen::Triplet<cplx>> t;
    auto col = [&](int i, int j) { return g.index((i + g.nx) % g.nx, j) * m; };
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const int row = g.index(i, j) * m;
            if (j == 0 || j == g.ny - 1) {
                for (int e = 0; e < m; ++e) t.emplace_back(row + e, row + e, 1.0);
                continue;
            }
            const Block adx = ad_matrix(A.ax.at(i, j)), ady = ad_matrix(A.ay.at(i, j));
            const Block center = ad_matrix(div.at(i, j)) + adx * adx + ady * ady;
            auto add_block = [&](int c, const Block& b) {
                for (int p = 0; p < m; ++p)
                    for (int q = 0; q < m; ++q)
                        if (b(p, q) != cplx(0.0)) t.emplace_back(row + p, c + q, b(p, q));
            };
            auto add_diag = [&](int c, double w) {
                for (int e = 0; e < m; ++e) t.emplace_back(row + e, c + e, w);
            };
            for (int o = -2; o <= 2; ++o) {
                add_diag(col(i + o, j), cxx[o + 2] / (12.0 * hx * hx));
                if (o != 0) add_block(col(i + o, j), (2.0 * cx[o + 2] / (12.0 * hx)) * adx);
            }
            add_diag(col(i, j - 1), 1.0 / (hy * hy));
            add_diag(col(i, j), -2.0 / (hy * hy));
            add_diag(col(i, j + 1), 1.0 / (hy * hy));
            add_block(col(i, j - 1), (-1.0 / hy) * ady);
            add_block(col(i, j + 1), (1.0 / hy) * ady);
            add_block(col(i, j), center);
        }
    const int n = g.points() * m;
    Eigen::SparseMatrix<cplx> K(n, n);
    K.setFromTriplets(t.begin(), t.end());
    return K;
}

Eigen::VectorXcd flatten(const FieldGrid& f)
{
    return Eigen::Map<const Eigen::VectorXcd>(f.data().data(), Eigen::Index(f.data().size()));
}

FieldGrid unflatten(const CylinderGrid& g, const Eigen::VectorXcd& v)
{
    FieldGrid f(g, FormType::zero_form);
    std::copy(v.data(), v.data() + v.size(), f.data().begin());
    return f;
}

} // namespace

Generator solve_generator(const Configuration& c, const GeneratorOptions& opts)
{
    const CylinderGrid& g = c.grid;
    const auto [bottom, top] = trace_tau(g, c.psi);
    const FieldGrid source = generator_source(g, c.psi);

    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(generator_matrix(g, c.A));
    if (lu.info() != Eigen::Success) throw DegeneracyError("covariant Laplacian factorization failed");

    auto solve_with = [&](const FieldGrid& rhs_interior) {
        FieldGrid rhs = rhs_interior;
        for (int i = 0; i < g.nx; ++i) {
            rhs.set(i, 0, bottom.values[std::size_t(i)]);
            rhs.set(i, g.ny - 1, top.values[std::size_t(i)]);
        }
        const Eigen::VectorXcd x = lu.solve(flatten(rhs));
        if (lu.info() != Eigen::Success || !x.allFinite()) throw DegeneracyError("covariant Laplacian solve failed");
        return unflatten(g, x);
    };

    Generator gen;
    gen.G = solve_with(source);

    if (opts.nonlinear && c.alpha != 0.0) {
        auto defect = [&](const FieldGrid& G, FieldGrid& target) {
            FieldGrid gf(g, FormType::zero_form), gi(g, FormType::zero_form);
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j) {
                    const EndMatrix e = c.alpha * EndMatrix(G.at(i, j));
                    gf.set(i, j, mat_exp(e));
                    gi.set(i, j, mat_exp(-e));
                }
            target = conjugate_by(source, gi, gf);
            target -= nonlinear_remainder(g, c.A, G, c.alpha);
            FieldGrid d = covariant_laplacian(g, c.A, G) - target;
            double s = 0.0;
            for (int i = 0; i < g.nx; ++i)
                for (int j = 1; j < g.ny - 1; ++j) s = std::max(s, d.at(i, j).cwiseAbs().maxCoeff());
            return s;
        };
        FieldGrid target;
        gen.refinement_residual = defect(gen.G, target);
        while (gen.refinement_residual > opts.tol && gen.refinement_iterations < opts.max_iter) {
            gen.G = solve_with(target);
            ++gen.refinement_iterations;
            gen.refinement_residual = defect(gen.G, target);
        }
    }

    const FieldGrid dy = d_y(gen.G);
    for (int i = 0; i < g.nx; ++i)
        for (int j : {0, g.ny - 1}) {
            gen.neumann_defect = std::max(gen.neumann_defect, dy.at(i, j).cwiseAbs().maxCoeff());
            const EndMatrix& want = j == 0 ? bottom.values[std::size_t(i)] : top.values[std::size_t(i)];
            gen.dirichlet_defect =
                std::max(gen.dirichlet_defect, (EndMatrix(gen.G.at(i, j)) - want).cwiseAbs().maxCoeff());
        }
    return gen;
}

LaxConnection build_lax(const Configuration& c, const Generator& gen, cplx lambda)
{
    if (std::abs(lambda) < 1e-8) throw ArgumentError("spectral parameter must satisfy |lambda| >= 1e-8");
    const CylinderGrid& g = c.grid;
    LaxConnection lc;
    lc.lambda = lambda;
    lc.alpha = c.alpha;
    lc.g_field = FieldGrid(g, FormType::zero_form);
    lc.g_inv = FieldGrid(g, FormType::zero_form);
    const cplx s = c.alpha / lambda;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const EndMatrix e = s * EndMatrix(gen.G.at(i, j));
            const EndMatrix gm = mat_exp(e), gi = mat_exp(-e);
            lc.g_field.set(i, j, gm);
            lc.g_inv.set(i, j, gi);
            lc.max_condition = std::max(lc.max_condition, gm.operatorNorm() * gi.operatorNorm());
        }
    const FieldGrid& G = lc.g_field;
    const FieldGrid& Gi = lc.g_inv;
    lc.A_lambda.ax = conjugate_by(c.A.ax, Gi, G) + pointwise_product(Gi, d_x(G));
    lc.A_lambda.ay = conjugate_by(c.A.ay, Gi, G) + pointwise_product(Gi, d_y(G));
    lc.phi_g = as_form(conjugate_by(c.phi, Gi, G), FormType::one_zero);
    lc.phi_g_dual = as_form(conjugate_by(pointwise_adjoint(c.phi), Gi, G), FormType::zero_one);
    lc.psi_g = as_form(conjugate_by(c.psi, Gi, G), FormType::one_zero);
    lc.psi_g_dual = as_form(conjugate_by(pointwise_adjoint(c.psi), Gi, G), FormType::zero_one);

    // w = i dbar_A G; the potentials alpha w dzbar - alpha w^dagger dz, moved to the new frame.
    FieldGrid w = dbar(gen.G);
    w += pointwise_commutator(a_zbar(c.A), gen.G);
    w *= cplx(0.0, 1.0);
    FieldGrid wz = pointwise_adjoint(w);
    wz *= cplx(-c.alpha);
    w *= cplx(c.alpha);
    lc.w_zbar = as_form(conjugate_by(w, Gi, G), FormType::zero_one);
    lc.w_z = as_form(conjugate_by(wz, Gi, G), FormType::one_zero);
    return lc;
}

FieldGrid lax_curvature(const LaxConnection& lc, const Configuration& c)
{
    const CylinderGrid& g = c.grid;
    const cplx l2 = lc.lambda * lc.lambda;
    FieldGrid F = curvature(g, lc.A_lambda);
    F += higgs_pair(lc.phi_g, lc.phi_g_dual);
    F += higgs_pair((1.0 / l2) * lc.psi_g, l2 * lc.psi_g_dual);
    if (lc.alpha != 0.0) {
        FieldGrid t = del(lc.w_zbar);
        t += pointwise_commutator(a_z(lc.A_lambda), lc.w_zbar);
        t -= dbar(lc.w_z);
        t -= pointwise_commutator(a_zbar(lc.A_lambda), lc.w_z);
        t += pointwise_commutator(lc.w_z, lc.w_zbar);
        t *= cplx(0.0, -2.0);
        F += t;
    }
    return as_form(F, FormType::one_one);
}

FieldGrid lax_z(const LaxConnection& lc)
{
    const cplx l2 = lc.lambda * lc.lambda;
    FieldGrid a = a_z(lc.A_lambda);
    a += lc.phi_g;
    a += (1.0 / l2) * lc.psi_g;
    a += lc.w_z;
    return as_form(a, FormType::one_zero);
}

FieldGrid lax_zbar(const LaxConnection& lc)
{
    const cplx l2 = lc.lambda * lc.lambda;
    FieldGrid a = a_zbar(lc.A_lambda);
    a += lc.phi_g_dual;
    a += l2 * lc.psi_g_dual;
    a += lc.w_zbar;
    return as_form(a, FormType::zero_one);
}

FieldGrid apply_L(const LaxConnection& lc, const FieldGrid& s)
{
    return as_form(del(s) + pointwise_product(lax_z(lc), s), FormType::zero_form);
}

FieldGrid apply_M(const LaxConnection& lc, const FieldGrid& s)
{
    return as_form(dbar(s) + pointwise_product(lax_zbar(lc), s), FormType::zero_form);
}

double commutator_check(const LaxConnection& lc, const Configuration& c, const std::vector<FieldGrid>& sections,
                        bool interior)
{
    if (sections.size() < 3) throw ArgumentError("commutator_check needs at least 3 sections");
    const FieldGrid F = lax_curvature(lc, c);
    const FieldGrid az = lax_z(lc), azb = lax_zbar(lc);
    double worst = 0.0;
    for (const FieldGrid& s : sections) {
        const FieldGrid Ls = del(s) + pointwise_product(az, s);
        const FieldGrid Ms = dbar(s) + pointwise_product(azb, s);
        FieldGrid d = del(Ms) + pointwise_product(az, Ms);
        d -= dbar(Ls) + pointwise_product(azb, Ls);
        FieldGrid Fs = pointwise_product(F, s);
        Fs *= cplx(0.0, 0.5);
        d -= Fs;
        const double sn = s.sup_norm();
        if (interior) d = interior_only(std::move(d));
        if (sn > 0.0) worst = std::max(worst, d.sup_norm() / sn);
    }
    return worst;
}

std::vector<FieldGrid> band_limited_sections(const CylinderGrid& grid, int count, unsigned long long seed)
{
    Rng rng(seed);
    std::vector<FieldGrid> out;
    const double tau = 2.0 * std::numbers::pi;
    for (int n = 0; n < count; ++n) {
        std::vector<EndMatrix> coef;
        for (int k = -2; k <= 2; ++k)
            for (int q = 0; q <= 2; ++q) coef.push_back(random_matrix(rng, grid.rank));
        FieldGrid s(grid, FormType::zero_form);
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                EndMatrix v = EndMatrix::Zero(grid.rank, grid.rank);
                int idx = 0;
                for (int k = -2; k <= 2; ++k) {
                    const cplx e = std::exp(cplx(0.0, tau * k * grid.x(i)));
                    for (int q = 0; q <= 2; ++q)
                        v += (e * std::cos(std::numbers::pi * q * grid.y(j))) * coef[std::size_t(idx++)];
                }
                s.set(i, j, v);
            }
        out.push_back(std::move(s));
    }
    return out;
}

Configuration coarsen(const Configuration& c)
{
    const CylinderGrid& g = c.grid;
    if ((g.ny - 1) % 2 != 0) throw ValidationError("grid.ny", "coarsening needs an odd grid.ny");
    CylinderGrid cg = g;
    cg.nx = g.nx / 2;
    cg.ny = (g.ny + 1) / 2;
    cg.validate();
    auto pick = [&](const FieldGrid& f) {
        FieldGrid out(cg, f.form());
        for (int i = 0; i < cg.nx; ++i)
            for (int j = 0; j < cg.ny; ++j) out.set(i, j, f.at(2 * i, 2 * j));
        return out;
    };
    Configuration out = Configuration::zero(cg, c.alpha);
    out.A.ax = pick(c.A.ax);
    out.A.ay = pick(c.A.ay);
    out.phi = pick(c.phi);
    out.psi = pick(c.psi);
    return out;
}

double lax_truncation_estimate(const Configuration& c, const std::vector<cplx>& lambdas)
{
    const Configuration cc = coarsen(c);
    const Generator gf = solve_generator(c), gc = solve_generator(cc);
    double worst = 0.0;
    for (const cplx l : lambdas) {
        const FieldGrid Ff = lax_curvature(build_lax(c, gf, l), c);
        const FieldGrid Fc = lax_curvature(build_lax(cc, gc, l), cc);
        for (int i = 0; i < cc.grid.nx; ++i)
            for (int j = 0; j < cc.grid.ny; ++j)
                worst = std::max(worst, (EndMatrix(Ff.at(2 * i, 2 * j)) - EndMatrix(Fc.at(i, j))).cwiseAbs().maxCoeff());
    }
    return worst;
}

HitchinData hitchin_map(const Configuration& c)
{
    const CylinderGrid& g = c.grid;
    HitchinData h;
    const EndMatrix id = identity(g.rank);
    for (int k = 2; k <= g.rank; ++k) {
        FieldGrid t(g, FormType::zero_form);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                const EndMatrix p = c.phi.at(i, j);
                EndMatrix pk = p;
                for (int e = 1; e < k; ++e) pk = (pk * p).eval();
                t.set(i, j, pk.trace() * id);
            }
        h.dbar_sup.push_back(dbar(t).sup_norm());
        h.traces.push_back(std::move(t));
    }
    return h;
}

} // namespace hhlab
