#include "hhlab/continuation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hhlab/error.hpp"
#include "hhlab/lsq.hpp"
#include "hhlab/random.hpp"

namespace hhlab {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Column scale 1/sqrt(trapezoid weight): the minimum-norm step is then minimal in
// the discrete L2 norm rather than the plain Euclidean one.
Eigen::VectorXd column_scale(const CylinderGrid& g)
{
    const int per = unknowns_per_point(g.rank);
    Eigen::VectorXd s = Eigen::VectorXd::Ones(unknown_count(g));
    for (int i = 0; i < g.nx; ++i)
        for (int j : {0, g.ny - 1}) s.segment(Eigen::Index(g.index(i, j)) * per, per).setConstant(std::sqrt(2.0));
    return s;
}

// Solver for the L2-minimal step at c; returns the solver and the scale to apply.
MinNormSolver step_solver(const Configuration& c, const Configuration& slice, const NewtonSettings& settings,
                          const Eigen::VectorXd& scale)
{
    const Eigen::SparseMatrix<double> J = assemble_sparse(c, slice) * scale.asDiagonal();
    return MinNormSolver(J, settings.relative_shift, settings.sweeps);
}

double tr2_shift(const FieldGrid& phi, const FieldGrid& phi0)
{
    double s = 0.0;
    const CylinderGrid& g = phi.grid();
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const EndMatrix a = phi.at(i, j), b = phi0.at(i, j);
            s = std::max(s, std::abs((a * a).trace() - (b * b).trace()));
        }
    return s;
}

} // namespace

void NewtonSettings::validate() const
{
    if (!(tol_residual > 0.0)) throw ValidationError("newton.tol", "newton.tol must be positive");
    if (max_iter < 1) throw ValidationError("newton.max_iter", "newton.max_iter must be at least 1");
    if (!(backtrack > 0.0 && backtrack < 1.0))
        throw ValidationError("newton.backtrack", "newton.backtrack must lie in (0, 1)");
    if (max_halvings < 0) throw ValidationError("newton.max_halvings", "newton.max_halvings must be non-negative");
    if (!(relative_shift > 0.0 && relative_shift < 1e-2))
        throw ValidationError("newton.shift", "newton.shift must lie in (0, 1e-2)");
    if (sweeps < 1) throw ValidationError("newton.sweeps", "newton.sweeps must be at least 1");
}

double gauge_defect(const Configuration& c, const Configuration& slice)
{
    const TangentVector d = difference(c, slice);
    double s = interior_only(gauge_fix(slice, d)).sup_norm();
    const CylinderGrid& g = c.grid;
    for (int i = 0; i < g.nx; ++i)
        for (int j : {0, g.ny - 1}) s = std::max(s, d.a.ax.at(i, j).cwiseAbs().maxCoeff());
    return s;
}

NewtonResult newton_solve(const Configuration& seed, double alpha, const NewtonSettings& settings)
{
    return newton_solve(seed, seed, alpha, settings);
}

NewtonResult newton_solve(const Configuration& start, const Configuration& slice, double alpha,
                          const NewtonSettings& settings)
{
    settings.validate();
    NewtonResult out;
    Configuration c = start;
    c.alpha = alpha;
    Eigen::VectorXd F = augmented_residual(c, slice);
    double m = inf_norm(F);
    out.history.push_back(m);
    const CylinderGrid& g = c.grid;
    const Eigen::VectorXd scale = column_scale(g);

    while (true) {
        if (!std::isfinite(m)) throw DivergenceError("Newton iterate is not finite", out.history);
        if (m <= settings.tol_residual) break;
        if (out.iterations >= settings.max_iter)
            throw DivergenceError("Newton did not converge in " + std::to_string(settings.max_iter) + " iterations",
                                  out.history);

        const MinNormSolver solver = step_solver(c, slice, settings, scale);
        const TangentVector step = unpack_tangent(g, scale.cwiseProduct(solver.solve(-F)));

        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= settings.max_halvings; ++h, t *= settings.backtrack) {
            Configuration trial = displace(c, step, t);
            Eigen::VectorXd Ft = augmented_residual(trial, slice);
            const double mt = inf_norm(Ft);
            if (std::isfinite(mt) && mt < m) {
                c = std::move(trial);
                F = std::move(Ft);
                m = mt;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw DivergenceError("line search found no decrease", out.history);
        ++out.iterations;
        out.history.push_back(m);
    }
    out.residual = residual(c).sup_norm();
    out.gauge = gauge_defect(c, slice);
    out.config = std::move(c);
    return out;
}

PicardResult picard_frozen(const Configuration& slice, double alpha, const NewtonSettings& settings, int max_iter)
{
    settings.validate();
    Configuration base = slice;
    base.alpha = 0.0;
    const Eigen::VectorXd scale = column_scale(slice.grid);
    const MinNormSolver solver = step_solver(base, slice, settings, scale);

    PicardResult out;
    Configuration c = slice;
    c.alpha = alpha;
    for (int it = 0;; ++it) {
        const Eigen::VectorXd F = augmented_residual(c, slice);
        const double m = inf_norm(F);
        out.history.push_back(m);
        if (out.history.size() > 2)
            out.contraction = std::max(out.contraction, m / out.history[out.history.size() - 2]);
        if (!std::isfinite(m) || m > 1e6 * (out.history.front() + 1.0)) break;
        if (m <= settings.tol_residual) {
            out.converged = true;
            break;
        }
        if (it >= max_iter) break;
        c = displace(c, unpack_tangent(c.grid, scale.cwiseProduct(solver.solve(-F))));
        out.iterations = it + 1;
    }
    out.config = std::move(c);
    return out;
}

namespace {

SingularSummary dense_singular_values(const Configuration& c, const Configuration& slice)
{
    const Eigen::MatrixXd D = assemble_dense(c, slice);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(D);
    const Eigen::VectorXd& s = svd.singularValues();
    SingularSummary out;
    out.dense = true;
    out.sigma_max = s(0);
    out.kernel_dim = 0;
    out.sigma_min = 0.0;
    for (Eigen::Index k = s.size() - 1; k >= 0; --k) {
        if (s(k) <= kKernelThreshold * out.sigma_max) {
            ++out.kernel_dim;
            continue;
        }
        out.sigma_min = s(k);
        break;
    }
    return out;
}

double largest_singular(const Eigen::SparseMatrix<double>& J)
{
    Eigen::VectorXd v = Eigen::VectorXd::Ones(J.cols()).normalized();
    double est = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd w = J.transpose() * (J * v);
        const double nrm = w.norm();
        if (nrm == 0.0) return 0.0;
        const double next = std::sqrt(nrm);
        v = w / nrm;
        if (std::abs(next - est) <= 1e-10 * next) return next;
        est = next;
    }
    return est;
}

// Lanczos with full reorthogonalization on (J^T J + s^2)^{-1}. The exact kernel
// collapses to Ritz values near 1/s^2; the next one gives sigma_min.
SingularSummary lanczos_singular_values(const Configuration& c, const Configuration& slice)
{
    const Eigen::SparseMatrix<double> J = assemble_sparse(c, slice);
    const Eigen::Index n = J.cols();
    SingularSummary out;
    out.sigma_max = largest_singular(J);
    const MinNormSolver solver(J, 1e-8, 1);
    const double s2 = solver.shift() * solver.shift();
    const double kernel_tol = kKernelThreshold * out.sigma_max;

    Rng rng(42);
    Eigen::VectorXd q(n);
    for (Eigen::Index k = 0; k < n; ++k) q(k) = rng.symmetric();
    q.normalize();

    const int max_steps = std::min<Eigen::Index>(120, n);
    Eigen::MatrixXd Q(n, max_steps);
    std::vector<double> a, b;
    double prev = -1.0;
    for (int k = 0; k < max_steps; ++k) {
        Q.col(k) = q;
        Eigen::VectorXd w = solver.normal_inverse(q);
        a.push_back(q.dot(w));
        for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
        const double beta = w.norm();

        if ((k + 1) % 5 == 0 || beta < 1e-14 || k + 1 == max_steps) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
            for (int i = 0; i <= k; ++i) {
                T(i, i) = a[std::size_t(i)];
                if (i < k) T(i, i + 1) = T(i + 1, i) = b[std::size_t(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
            double cand = -1.0;
            for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
                const double theta = es.eigenvalues()(i);
                if (theta <= 0.0) continue;
                const double sig = std::sqrt(std::max(1.0 / theta - s2, 0.0));
                if (sig > kernel_tol) {
                    cand = sig;
                    break;
                }
            }
            if (cand > 0.0 && prev > 0.0 && std::abs(cand - prev) <= 1e-7 * cand) {
                out.sigma_min = cand;
                return out;
            }
            prev = cand;
            out.sigma_min = cand;
        }
        if (beta < 1e-14) break;
        b.push_back(beta);
        q = w / beta;
    }
    if (out.sigma_min <= 0.0) throw DegeneracyError("Lanczos found no singular value above the kernel threshold");
    return out;
}

} // namespace

SingularSummary augmented_singular_values(const Configuration& c, const Configuration& slice)
{
    if (unknown_count(c.grid) <= kDenseSvdLimit) return dense_singular_values(c, slice);
    return lanczos_singular_values(c, slice);
}

Constants estimate_constants(const Configuration& c0, unsigned long long seed)
{
    Constants k;
    k.sigma = augmented_singular_values(c0, c0);
    if (k.sigma.sigma_min < 1e-14) throw DegeneracyError("smallest singular value below 1e-14");
    k.M = 1.0 / k.sigma.sigma_min;

    const Eigen::MatrixXd bmap = assemble_b_map(c0.grid);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(bmap);
    k.K2 = svd.singularValues()(0);
    k.alpha_star = 1.0 / (4.0 * k.K2 * k.M);

    // K1: change of the linearization along random directions, relative to the step.
    Rng rng(seed);
    const double t = 1e-4;
    for (int probe = 0; probe < 3; ++probe) {
        const TangentVector d = random_tangent(rng, c0.grid);
        const Eigen::VectorXd v = pack_tangent(random_tangent(rng, c0.grid));
        const double dn = pack_tangent(d).norm();
        const Configuration c1 = displace(c0, d, t / dn);
        const Eigen::VectorXd diff = augmented_apply(c1, c0, v) - augmented_apply(c0, c0, v);
        k.K1 = std::max(k.K1, diff.norm() / (t * v.norm()));
    }
    return k;
}

ContinuationCurve sweep(const Configuration& seed, const std::vector<double>& alphas, const NewtonSettings& settings)
{
    if (alphas.empty()) throw ArgumentError("sweep needs at least one alpha value");
    if (alphas.front() != seed.alpha) throw ArgumentError("sweep must start at the seed's alpha");
    for (std::size_t k = 1; k < alphas.size(); ++k)
        if (!(alphas[k] > alphas[k - 1]) && !(alphas[k] < alphas[k - 1]))
            throw ArgumentError("sweep alphas must be strictly monotone");
    const bool up = alphas.size() < 2 || alphas[1] > alphas[0];
    for (std::size_t k = 1; k < alphas.size(); ++k)
        if ((alphas[k] > alphas[k - 1]) != up) throw ArgumentError("sweep alphas must be strictly monotone");

    ContinuationCurve curve;
    Configuration current = seed;
    for (double a : alphas) {
        NewtonResult r;
        try {
            r = newton_solve(current, seed, a, settings);
        } catch (const DivergenceError& e) {
            curve.truncated = true;
            curve.failure_history = e.history();
            break;
        }
        CurveSample s;
        s.alpha = a;
        s.diag.residual = r.residual;
        s.diag.gauge = r.gauge;
        s.diag.newton_iterations = r.iterations;
        const FieldGrid& phi0 = curve.samples.empty() ? r.config.phi : curve.samples.front().config.phi;
        s.diag.hitchin_tr2_shift = tr2_shift(r.config.phi, phi0);
        s.config = r.config;
        current = std::move(r.config);
        curve.samples.push_back(std::move(s));
    }
    return curve;
}

ContinuationCurve parity_extend(const ContinuationCurve& curve, const NewtonSettings& settings)
{
    if (curve.samples.empty()) throw ArgumentError("parity_extend needs a non-empty curve");
    for (const CurveSample& s : curve.samples)
        if (s.alpha < 0.0) throw ArgumentError("parity_extend expects a curve on alpha >= 0");

    std::vector<CurveSample> mirrored;
    for (const CurveSample& s : curve.samples) {
        if (s.alpha == 0.0) continue;
        CurveSample m;
        m.alpha = -s.alpha;
        m.config = inversion_map(s.config);
        m.synthesized = true;
        m.diag = s.diag;
        m.diag.residual = residual(m.config).sup_norm();
        if (m.diag.residual > settings.tol_residual)
            throw ConsistencyError("mirrored sample at alpha = " + std::to_string(m.alpha) +
                                   " fails the residual tolerance");
        mirrored.push_back(std::move(m));
    }
    ContinuationCurve out;
    out.truncated = curve.truncated;
    out.failure_history = curve.failure_history;
    out.samples = mirrored;
    out.samples.insert(out.samples.end(), curve.samples.begin(), curve.samples.end());
    std::sort(out.samples.begin(), out.samples.end(),
              [](const CurveSample& x, const CurveSample& y) { return x.alpha < y.alpha; });
    return out;
}

} // namespace hhlab
