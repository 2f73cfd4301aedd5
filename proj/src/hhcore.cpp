#include "hhlab/hhcore.hpp"

#include <cmath>

#include "hhlab/error.hpp"

namespace hhlab {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void check_grid(const CylinderGrid& g, const FieldGrid& f, const char* what)
{
    if (!(f.grid() == g) || f.data().size() != std::size_t(g.points()) * g.entries())
        throw ShapeError(std::string(what) + ": field does not match the configuration grid");
}

FieldGrid with_form(FieldGrid f, FormType t)
{
    f.set_form(t);
    return f;
}

} // namespace

Configuration Configuration::zero(const CylinderGrid& g, double alpha)
{
    Configuration c;
    c.grid = g;
    c.A = Connection::zero(g);
    c.phi = FieldGrid(g, FormType::one_zero);
    c.psi = FieldGrid(g, FormType::one_zero);
    c.alpha = alpha;
    return c;
}

void Configuration::validate(double ah_tol) const
{
    check_grid(grid, A.ax, "A_x");
    check_grid(grid, A.ay, "A_y");
    check_grid(grid, phi, "phi");
    check_grid(grid, psi, "psi");
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            if (!is_anti_hermitian(A.ax.at(i, j), ah_tol) || !is_anti_hermitian(A.ay.at(i, j), ah_tol))
                throw ShapeError("connection is not anti-Hermitian");
        }
}

double ResidualTriple::sup_norm() const
{
    return std::max({r1.sup_norm(), r2.sup_norm(), r3.sup_norm()});
}

TangentVector TangentVector::zero(const CylinderGrid& g)
{
    return {Connection::zero(g), FieldGrid(g, FormType::one_zero), FieldGrid(g, FormType::one_zero)};
}

FieldGrid higgs_pair(const FieldGrid& x, const FieldGrid& y)
{
    FieldGrid out = pointwise_commutator(x, y);
    out *= cplx(0.0, -2.0);
    out.set_form(FormType::one_one);
    return out;
}

FieldGrid higgs_term(const FieldGrid& f) { return higgs_pair(f, pointwise_adjoint(f)); }

FieldGrid hitchin_r3(const CylinderGrid& grid, const Connection& A, const FieldGrid& Phi)
{
    FieldGrid r3 = curvature(grid, A);
    r3 += higgs_term(Phi);
    return r3;
}

ResidualTriple residual(const Configuration& c)
{
    ResidualTriple r;
    r.r1 = dbar_A_box(c.grid, c.A, c.psi);
    r.r2 = dbar_A_box(c.grid, c.A, c.phi);
    r.r3 = hitchin_r3(c.grid, c.A, c.phi);
    r.r3 += higgs_term(c.psi);
    r.r3 += c.alpha * anti_hermitian_part(deformation_B(c.grid, c.psi));
    return r;
}

Configuration inversion_map(const Configuration& c)
{
    Configuration out = c;
    out.psi = -c.psi;
    out.alpha = -c.alpha;
    return out;
}

ResidualTriple lin_apply(const Configuration& c, const TangentVector& u)
{
    const CylinderGrid& g = c.grid;
    check_grid(g, u.chi, "chi");
    check_grid(g, u.xi, "xi");
    check_grid(g, u.a.ax, "a_x");
    check_grid(g, u.a.ay, "a_y");

    const FieldGrid Azb = a_zbar(c.A);
    const FieldGrid azb = a_zbar(u.a);

    ResidualTriple r;
    r.r1 = dbar_box(u.xi);
    r.r1 += stagger_y(pointwise_commutator(Azb, u.xi) + pointwise_commutator(azb, c.psi));
    r.r1.set_form(FormType::one_one);

    r.r2 = dbar_box(u.chi);
    r.r2 += stagger_y(pointwise_commutator(Azb, u.chi) + pointwise_commutator(azb, c.phi));
    r.r2.set_form(FormType::one_one);

    r.r3 = d_x(u.a.ay);
    r.r3 -= d_y(u.a.ax);
    r.r3 += pointwise_commutator(c.A.ax, u.a.ay);
    r.r3 += pointwise_commutator(u.a.ax, c.A.ay);
    r.r3 += higgs_pair(u.chi, pointwise_adjoint(c.phi));
    r.r3 += higgs_pair(c.phi, pointwise_adjoint(u.chi));
    r.r3 += higgs_pair(u.xi, pointwise_adjoint(c.psi));
    r.r3 += higgs_pair(c.psi, pointwise_adjoint(u.xi));
    if (c.alpha != 0.0) r.r3 += c.alpha * anti_hermitian_part(deformation_B(g, u.xi));
    r.r3.set_form(FormType::one_one);
    return r;
}

FieldGrid gauge_fix(const Configuration& c, const TangentVector& u)
{
    FieldGrid div = d_x(u.a.ax);
    div += d_y(u.a.ay);
    div += pointwise_commutator(c.A.ax, u.a.ax);
    div += pointwise_commutator(c.A.ay, u.a.ay);
    return with_form(-div, FormType::zero_form);
}

double symplectic_pair(const Configuration& c, const TangentVector& u, const TangentVector& v)
{
    const CylinderGrid& g = c.grid;
    auto half = [&](const TangentVector& p, const TangentVector& q) {
        double s = 0.0;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                const double w = quad_weight(g, j);
                EndMatrix ax = p.a.ax.at(i, j), by = q.a.ay.at(i, j);
                EndMatrix ch = p.chi.at(i, j), cq = q.chi.at(i, j);
                EndMatrix xh = p.xi.at(i, j), xq = q.xi.at(i, j);
                const double conn = -(ax * by).trace().real();
                const double hig = 2.0 * (ch * cq.adjoint()).trace().imag() + 2.0 * (xh * xq.adjoint()).trace().imag();
                s += w * (conn + hig);
            }
        return s;
    };
    return half(u, v) - half(v, u);
}

int unknowns_per_point(int rank) { return 6 * rank * rank; }
int unknown_count(const CylinderGrid& g) { return g.points() * unknowns_per_point(g.rank); }

void ah_coords(const EndMatrix& m, double* out)
{
    const int r = int(m.rows());
    int k = 0;
    for (int d = 0; d < r; ++d) out[k++] = m(d, d).imag();
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            out[k++] = kSqrt2 * m(a, b).real();
            out[k++] = kSqrt2 * m(a, b).imag();
        }
}

EndMatrix from_ah_coords(const double* c, int r)
{
    EndMatrix m = EndMatrix::Zero(r, r);
    int k = 0;
    for (int d = 0; d < r; ++d) m(d, d) = cplx(0.0, c[k++]);
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            const cplx v(c[k] / kSqrt2, c[k + 1] / kSqrt2);
            k += 2;
            m(a, b) = v;
            m(b, a) = -std::conj(v);
        }
    return m;
}

namespace {

void put_complex(const EndCView& m, double* re, double* im, int r2)
{
    for (int e = 0; e < r2; ++e) {
        re[e] = m.data()[e].real();
        im[e] = m.data()[e].imag();
    }
}

EndMatrix get_complex(const double* re, const double* im, int r)
{
    EndMatrix m(r, r);
    for (int e = 0; e < r * r; ++e) m.data()[e] = cplx(re[e], im[e]);
    return m;
}

} // namespace

Eigen::VectorXd pack_tangent(const TangentVector& u)
{
    const CylinderGrid& g = u.chi.grid();
    const int r = g.rank, r2 = r * r, per = unknowns_per_point(r);
    Eigen::VectorXd v(unknown_count(g));
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            double* o = v.data() + std::size_t(g.index(i, j)) * per;
            ah_coords(u.a.ax.at(i, j), o);
            ah_coords(u.a.ay.at(i, j), o + r2);
            put_complex(u.chi.at(i, j), o + 2 * r2, o + 3 * r2, r2);
            put_complex(u.xi.at(i, j), o + 4 * r2, o + 5 * r2, r2);
        }
    return v;
}

TangentVector unpack_tangent(const CylinderGrid& g, const Eigen::VectorXd& v)
{
    if (v.size() != unknown_count(g)) throw ShapeError("tangent vector length mismatch");
    const int r = g.rank, r2 = r * r, per = unknowns_per_point(r);
    TangentVector u = TangentVector::zero(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double* o = v.data() + std::size_t(g.index(i, j)) * per;
            u.a.ax.set(i, j, from_ah_coords(o, r));
            u.a.ay.set(i, j, from_ah_coords(o + r2, r));
            u.chi.set(i, j, get_complex(o + 2 * r2, o + 3 * r2, r));
            u.xi.set(i, j, get_complex(o + 4 * r2, o + 5 * r2, r));
        }
    return u;
}

TangentVector difference(const Configuration& c, const Configuration& base)
{
    TangentVector u;
    u.a.ax = c.A.ax - base.A.ax;
    u.a.ay = c.A.ay - base.A.ay;
    u.chi = c.phi - base.phi;
    u.xi = c.psi - base.psi;
    return u;
}

Configuration displace(const Configuration& c, const TangentVector& u, double t)
{
    Configuration out = c;
    out.A.ax += t * u.a.ax;
    out.A.ay += t * u.a.ay;
    out.phi += with_form(t * u.chi, FormType::one_zero);
    out.psi += with_form(t * u.xi, FormType::one_zero);
    return out;
}

namespace {

Eigen::VectorXd pack_rows(const ResidualTriple& r, const FieldGrid& gauge, const FieldGrid& boundary_ax)
{
    const CylinderGrid& g = r.r1.grid();
    const int rk = g.rank, r2 = rk * rk, per = unknowns_per_point(rk);
    Eigen::VectorXd v(unknown_count(g));
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            double* o = v.data() + std::size_t(g.index(i, j)) * per;
            put_complex(r.r1.at(i, j), o, o + r2, r2);
            put_complex(r.r2.at(i, j), o + 2 * r2, o + 3 * r2, r2);
            ah_coords(r.r3.at(i, j), o + 4 * r2);
            const bool edge = (j == 0 || j == g.ny - 1);
            ah_coords(edge ? EndMatrix(boundary_ax.at(i, j)) : EndMatrix(gauge.at(i, j)), o + 5 * r2);
        }
    return v;
}

} // namespace

Eigen::VectorXd augmented_apply(const Configuration& c, const Configuration& slice, const Eigen::VectorXd& u)
{
    const TangentVector t = unpack_tangent(c.grid, u);
    return pack_rows(lin_apply(c, t), gauge_fix(slice, t), t.a.ax);
}

Eigen::VectorXd augmented_residual(const Configuration& c, const Configuration& slice)
{
    const TangentVector d = difference(c, slice);
    return pack_rows(residual(c), gauge_fix(slice, d), d.a.ax);
}

Eigen::MatrixXd assemble_dense(const Configuration& c) { return assemble_dense(c, c); }

Eigen::MatrixXd assemble_dense(const Configuration& c, const Configuration& slice)
{
    const int n = unknown_count(c.grid);
    if (n > kDenseUnknownLimit)
        throw CapacityError("assemble_dense: " + std::to_string(n) + " unknowns exceed the dense limit of " +
                            std::to_string(kDenseUnknownLimit));
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
        e[k] = 1.0;
        m.col(k) = augmented_apply(c, slice, e);
        e[k] = 0.0;
    }
    return m;
}

namespace {

int x_color_period(int nx)
{
    for (int d = 5; d <= nx; ++d)
        if (nx % d == 0) return d;
    return nx;
}

} // namespace

Eigen::SparseMatrix<double> assemble_sparse(const Configuration& c, const Configuration& slice)
{
    // Column recovery by grouped probes: unknowns whose row supports are disjoint
    // share one application of the operator. Stencil reach is 2 in x and 3 in y;
    // xi on the first/last four rows also feeds the collar through B.
    const CylinderGrid& g = c.grid;
    const int r2 = g.entries(), per = unknowns_per_point(g.rank);
    const int n = unknown_count(g);
    const int cx = x_color_period(g.nx);
    const int cy = 7;
    const int collar = collar_rows(g);
    const int xi0 = 4 * r2;

    auto b_row = [&](int j) { return j <= 3 || j >= g.ny - 4; };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(n) * 40);
    Eigen::VectorXd probe = Eigen::VectorXd::Zero(n);

    auto harvest = [&](const Eigen::VectorXd& y, int pi, int pj, int q, int jlo, int jhi) {
        const int col = g.index(pi, pj) * per + q;
        for (int di = -2; di <= 2; ++di) {
            const int i = (pi + di + g.nx) % g.nx;
            for (int j = std::max(0, jlo); j <= std::min(g.ny - 1, jhi); ++j) {
                const int base = g.index(i, j) * per;
                for (int k = 0; k < per; ++k) {
                    const double v = y[base + k];
                    if (v != 0.0) trip.emplace_back(base + k, col, v);
                }
            }
        }
    };

    // Local groups.
    for (int ci = 0; ci < cx; ++ci)
        for (int cj = 0; cj < cy; ++cj)
            for (int q = 0; q < per; ++q) {
                probe.setZero();
                bool any = false;
                for (int i = ci; i < g.nx; i += cx)
                    for (int j = cj; j < g.ny; j += cy) {
                        if (q >= xi0 && b_row(j)) continue;
                        probe[g.index(i, j) * per + q] = 1.0;
                        any = true;
                    }
                if (!any) continue;
                const Eigen::VectorXd y = augmented_apply(c, slice, probe);
                for (int i = ci; i < g.nx; i += cx)
                    for (int j = cj; j < g.ny; j += cy) {
                        if (q >= xi0 && b_row(j)) continue;
                        harvest(y, i, j, q, j - 3, j + 3);
                    }
            }

    // Boundary xi groups, one row index at a time.
    std::vector<int> rows;
    for (int j = 0; j < g.ny; ++j)
        if (b_row(j)) rows.push_back(j);
    for (int j : rows)
        for (int ci = 0; ci < cx; ++ci)
            for (int q = xi0; q < per; ++q) {
                probe.setZero();
                for (int i = ci; i < g.nx; i += cx) probe[g.index(i, j) * per + q] = 1.0;
                const Eigen::VectorXd y = augmented_apply(c, slice, probe);
                const bool bottom = j <= 3;
                const int lo = bottom ? 0 : std::min(j - 3, g.ny - collar);
                const int hi = bottom ? std::max(j + 3, collar - 1) : g.ny - 1;
                for (int i = ci; i < g.nx; i += cx) harvest(y, i, j, q, lo, hi);
            }

    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

Eigen::MatrixXd assemble_b_map(const CylinderGrid& g)
{
    const int r = g.rank, r2 = r * r;
    const int collar = collar_rows(g);
    std::vector<int> src_rows, dst_rows;
    for (int j = 0; j < 4; ++j) src_rows.push_back(j);
    for (int j = g.ny - 4; j < g.ny; ++j) src_rows.push_back(j);
    for (int j = 0; j < collar; ++j) dst_rows.push_back(j);
    for (int j = g.ny - collar; j < g.ny; ++j) dst_rows.push_back(j);

    const int ncol = int(src_rows.size()) * g.nx * 2 * r2;
    const int nrow = int(dst_rows.size()) * g.nx * r2;
    Eigen::MatrixXd m(nrow, ncol);
    int col = 0;
    for (int j : src_rows)
        for (int i = 0; i < g.nx; ++i)
            for (int part = 0; part < 2; ++part)
                for (int e = 0; e < r2; ++e) {
                    FieldGrid xi(g, FormType::one_zero);
                    xi.ptr(i, j)[e] = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
                    const FieldGrid b = anti_hermitian_part(deformation_B(g, xi));
                    int row = 0;
                    for (int jj : dst_rows)
                        for (int ii = 0; ii < g.nx; ++ii) {
                            ah_coords(b.at(ii, jj), m.col(col).data() + row);
                            row += r2;
                        }
                    ++col;
                }
    return m;
}

} // namespace hhlab
