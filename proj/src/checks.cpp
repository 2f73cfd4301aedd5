#include "hhlab/checks.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hhlab/abelian.hpp"
#include "hhlab/embed.hpp"
#include "hhlab/error.hpp"
#include "hhlab/persist.hpp"
#include "hhlab/random.hpp"

namespace hhlab {

const char* relation_symbol(Relation r)
{
    switch (r) {
    case Relation::le: return "<=";
    case Relation::lt: return "<";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    case Relation::eq: return "==";
    }
    return "?";
}

CheckRow make_row(std::string name, double value, Relation rel, double threshold)
{
    CheckRow r{std::move(name), value, threshold, rel, false};
    switch (rel) {
    case Relation::le: r.pass = value <= threshold; break;
    case Relation::lt: r.pass = value < threshold; break;
    case Relation::ge: r.pass = value >= threshold; break;
    case Relation::gt: r.pass = value > threshold; break;
    case Relation::eq: r.pass = value == threshold; break;
    }
    return r; // NaN fails every relation
}

const char* CriterionReport::status() const
{
    if (id == 0 && rows.empty()) return "INFO";
    return pass() ? "PASS" : "FAIL";
}

bool CriterionReport::pass() const
{
    if (rows.empty()) return id == 0; // a criterion must check something; a diagnostic may only measure
    for (const CheckRow& r : rows)
        if (!r.pass) return false;
    return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

CylinderGrid with_size(CylinderGrid g, int nx, int ny)
{
    g.nx = nx;
    g.ny = ny;
    g.validate();
    return g;
}

double max_abs_diff(const FieldGrid& a, const FieldGrid& b)
{
    if (!a.same_shape(b)) throw ShapeError("field comparison: shapes differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

double config_diff(const Configuration& a, const Configuration& b)
{
    return std::max({max_abs_diff(a.A.ax, b.A.ax), max_abs_diff(a.A.ay, b.A.ay), max_abs_diff(a.phi, b.phi),
                     max_abs_diff(a.psi, b.psi)});
}

double interior_sup(const FieldGrid& f)
{
    const CylinderGrid& g = f.grid();
    double m = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 1; j < g.ny - 1; ++j) m = std::max(m, double(f.at(i, j).cwiseAbs().maxCoeff()));
    return m;
}

// Order from errors on grids whose y spacings differ by the given factor.
double observed_order(double coarse, double fine, double ratio)
{
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(coarse / fine) / std::log(ratio);
}

std::string lambda_tag(cplx l)
{
    std::ostringstream s;
    s << l.real();
    if (l.imag() != 0.0) s << (l.imag() > 0 ? "+" : "") << l.imag() << "i";
    return s.str();
}

} // namespace

// ---------------------------------------------------------------- context

SuiteContext::SuiteContext(RunConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

const Configuration& SuiteContext::seed()
{
    if (!seed_) seed_ = flat_abelian_seed(cfg_.abelian, cfg_.grid);
    return *seed_;
}

const NewtonResult& SuiteContext::base()
{
    if (!base_) base_ = newton_solve(seed(), 0.0, cfg_.newton);
    return *base_;
}

const NewtonResult& SuiteContext::solved()
{
    if (!solved_) solved_ = newton_solve(seed(), cfg_.sweep_alpha_max, cfg_.newton);
    return *solved_;
}

const ContinuationCurve& SuiteContext::curve()
{
    if (!curve_) curve_ = sweep(seed(), cfg_.sweep_alphas(), cfg_.newton);
    return *curve_;
}

const Constants& SuiteContext::constants()
{
    if (!constants_) constants_ = estimate_constants(base().config, cfg_.seed);
    return *constants_;
}

const NewtonResult& SuiteContext::solved_on(int nx, int ny)
{
    if (nx == cfg_.grid.nx && ny == cfg_.grid.ny) return solved();
    const auto key = std::make_pair(nx, ny);
    auto it = ladder_.find(key);
    if (it == ladder_.end()) {
        const Configuration s = flat_abelian_seed(cfg_.abelian, with_size(cfg_.grid, nx, ny));
        it = ladder_.emplace(key, newton_solve(s, cfg_.sweep_alpha_max, cfg_.newton)).first;
    }
    return it->second;
}

// ---------------------------------------------------------------- Lax summary

LaxSummary lax_summary(const Configuration& c, const std::vector<cplx>& lambdas, int sections,
                       unsigned long long seed, bool with_truncation)
{
    LaxSummary s;
    const Generator gen = solve_generator(c);
    s.neumann_defect = gen.neumann_defect;
    const std::vector<FieldGrid> secs = band_limited_sections(c.grid, sections, seed);
    for (const cplx l : lambdas) {
        const LaxConnection lc = build_lax(c, gen, l);
        s.max_condition = std::max(s.max_condition, lc.max_condition);
        // The generator equation holds on interior rows; the boundary rows carry its
        // Dirichlet data, so both defects are measured on the interior.
        const double f = interior_sup(lax_curvature(lc, c));
        const double m = commutator_check(lc, c, secs, true);
        s.curvature.push_back(f);
        s.commutator.push_back(m);
        s.curvature_max = std::max(s.curvature_max, f);
        s.commutator_max = std::max(s.commutator_max, m);
    }
    if (with_truncation) s.truncation = lax_truncation_estimate(c, lambdas);
    return s;
}

// ---------------------------------------------------------------- criteria

CriterionReport abelian_exact_residual(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{1, "abelian_exact_residual", {}, {}, {}, 0.0};
    AbelianParams p = cfg.abelian;
    p.alpha = 0.0;
    const CylinderGrid coarse = cfg.grid;
    const CylinderGrid fine = with_size(coarse, 2 * coarse.nx, 2 * coarse.ny - 1);
    const AbelianSolution sc = solve_abelian(p, coarse), sf = solve_abelian(p, fine);
    const ResidualTriple rc = residual(sc.config), rf = residual(sf.config);
    const double ec = rc.sup_norm(), ef = rf.sup_norm();
    const double factor = ec / ef;
    rep.measurements.push_back({"abelian_residual_coarse", ec});
    rep.measurements.push_back({"abelian_residual_coarse_r3", rc.r3.sup_norm()});
    rep.measurements.push_back({"abelian_residual_fine_r1", rf.r1.sup_norm()});
    rep.measurements.push_back({"abelian_p_top_defect_coarse", sc.p_top_defect});
    rep.rows.push_back(make_row("abelian_residual_fine", ef, Relation::le, 5e-3));
    rep.rows.push_back(make_row("abelian_refinement_factor_min", factor, Relation::ge, 3.5));
    rep.rows.push_back(make_row("abelian_refinement_factor_max", factor, Relation::le, 4.5));
    if (!rep.pass())
        rep.notes.push_back("the closed-form profile solves p' = -4 pi nu_2 e^{-2 pi y}, so F_A = -i p'(y) H dx^dy "
                            "is O(1) while the Higgs brackets vanish on the Cartan pair; the curvature "
                            "equation is not satisfied by this family");
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport inversion_identity(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{2, "inversion_identity", {}, {}, {}, 0.0};
    Rng rng(cfg.seed);
    double worst = 0.0, involution = 0.0;
    for (int k = 0; k < 10; ++k) {
        const Configuration c = random_configuration(rng, cfg.grid, 0.1 * rng.symmetric());
        const ResidualTriple r = residual(c), m = residual(inversion_map(c));
        worst = std::max({worst, max_abs_diff(m.r1, -r.r1), max_abs_diff(m.r2, r.r2), max_abs_diff(m.r3, r.r3)});
        const Configuration back = inversion_map(inversion_map(c));
        involution = std::max({involution, config_diff(back, c), std::abs(back.alpha - c.alpha)});
    }
    rep.rows.push_back(make_row("inversion_residual_max_diff", worst, Relation::le, 0.0));
    rep.rows.push_back(make_row("inversion_involution_max_diff", involution, Relation::le, 0.0));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport newton_continuation(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    CriterionReport rep{3, "newton_continuation", {}, {}, {}, 0.0};
    const NewtonResult& s = ctx.solved();
    rep.rows.push_back(make_row("newton_residual", s.residual, Relation::le, 1e-10));
    rep.rows.push_back(make_row("newton_gauge_defect", s.gauge, Relation::le, 1e-10));
    rep.rows.push_back(make_row("newton_iterations", s.iterations, Relation::le, 8));
    rep.measurements.push_back({"newton_seed_merit", s.history.front()});
    rep.measurements.push_back({"newton_alpha", ctx.config().sweep_alpha_max});

    const Constants& k = ctx.constants();
    rep.measurements.push_back({"constant_M", k.M});
    rep.measurements.push_back({"constant_K1", k.K1});
    rep.measurements.push_back({"constant_K2", k.K2});
    rep.measurements.push_back({"alpha_star", k.alpha_star});
    const double ap = 0.9 * k.alpha_star;
    const PicardResult pr = picard_frozen(ctx.base().config, ap, ctx.config().newton);
    rep.measurements.push_back({"picard_alpha", ap});
    rep.measurements.push_back({"picard_iterations", double(pr.iterations)});
    rep.rows.push_back(make_row("picard_converged", pr.converged ? 1.0 : 0.0, Relation::eq, 1.0));
    rep.rows.push_back(make_row("picard_final_merit", pr.history.back(), Relation::le, ctx.config().newton.tol_residual));
    rep.rows.push_back(make_row("picard_contraction", pr.contraction, Relation::lt, 1.0));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport two_path_parity(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{4, "two_path_parity", {}, {}, {}, 0.0};
    const NewtonResult& plus = ctx.solved();
    const Configuration synthesized = inversion_map(plus.config);
    const Configuration start = inversion_map(ctx.seed());
    const NewtonResult direct = newton_solve(start, start, -cfg.sweep_alpha_max, cfg.newton);
    rep.measurements.push_back({"parity_direct_iterations", double(direct.iterations)});
    rep.measurements.push_back({"parity_direct_residual", direct.residual});
    rep.rows.push_back(make_row("parity_synthesized_residual", residual(synthesized).sup_norm(), Relation::le,
                                cfg.newton.tol_residual));
    rep.rows.push_back(make_row("parity_two_path_sup_diff", config_diff(direct.config, synthesized), Relation::le, 1e-8));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport linearization_consistency(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{5, "linearization_consistency", {}, {}, {}, 0.0};
    Rng rng(cfg.seed);
    const double ts[3] = {1e-3, 1e-4, 1e-5};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int k = 0; k < 10; ++k) {
        const Configuration c = random_configuration(rng, cfg.grid, 0.1 * rng.symmetric());
        const TangentVector u = random_tangent(rng, cfg.grid);
        const ResidualTriple r0 = residual(c), lu = lin_apply(c, u);
        double err[3];
        for (int s = 0; s < 3; ++s) {
            const ResidualTriple rt = residual(displace(c, u, ts[s]));
            const double inv = 1.0 / ts[s];
            err[s] = std::max({max_abs_diff(inv * (rt.r1 - r0.r1), lu.r1), max_abs_diff(inv * (rt.r2 - r0.r2), lu.r2),
                               max_abs_diff(inv * (rt.r3 - r0.r3), lu.r3)});
        }
        for (int s = 0; s < 2; ++s) {
            const double o = observed_order(err[s], err[s + 1], ts[s] / ts[s + 1]);
            lo = std::min(lo, o);
            hi = std::max(hi, o);
        }
    }
    rep.rows.push_back(make_row("fd_order_min", lo, Relation::ge, 0.9));
    rep.rows.push_back(make_row("fd_order_max", hi, Relation::le, 1.1));

    const CylinderGrid small = with_size(cfg.grid, cfg.cokernel_nx, cfg.cokernel_ny);
    const Configuration c = random_configuration(rng, small, 0.05);
    const Eigen::MatrixXd D = assemble_dense(c, c);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd v = pack_tangent(random_tangent(rng, small));
        const Eigen::VectorXd y = augmented_apply(c, c, v);
        worst = std::max(worst, (D * v - y).lpNorm<Eigen::Infinity>() / y.lpNorm<Eigen::Infinity>());
    }
    const Eigen::MatrixXd S = Eigen::MatrixXd(assemble_sparse(c, c));
    rep.rows.push_back(make_row("dense_vs_matrix_free_rel", worst, Relation::le, 1e-12));
    rep.rows.push_back(make_row("sparse_vs_dense_max", (S - D).cwiseAbs().maxCoeff(), Relation::le, 1e-12));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport lax_flatness(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{6, "lax_flatness", {}, {}, {}, 0.0};
    const NewtonResult& s = ctx.solved();
    const LaxSummary ls = lax_summary(s.config, cfg.lambdas, cfg.lax_sections, cfg.seed, true);
    const double bound = s.residual + ls.truncation;
    rep.measurements.push_back({"lax_residual", s.residual});
    rep.measurements.push_back({"lax_truncation_estimate", ls.truncation});
    rep.measurements.push_back({"lax_gauge_condition_max", ls.max_condition});
    rep.measurements.push_back({"lax_generator_neumann_defect", ls.neumann_defect});
    for (std::size_t k = 0; k < cfg.lambdas.size(); ++k) {
        const std::string tag = lambda_tag(cfg.lambdas[k]);
        rep.rows.push_back(make_row("lax_curvature_lambda_" + tag, ls.curvature[k], Relation::le, 10.0 * bound));
        rep.rows.push_back(make_row("lax_commutator_lambda_" + tag, ls.commutator[k], Relation::le, 10.0 * bound));
    }

    std::vector<double> curv, comm;
    for (const int ny : cfg.lax_refine_ny) {
        const NewtonResult& r = ctx.solved_on(cfg.lax_refine_nx, ny);
        const LaxSummary l = lax_summary(r.config, cfg.lambdas, cfg.lax_sections, cfg.seed, false);
        curv.push_back(l.curvature_max);
        comm.push_back(l.commutator_max);
        const std::string tag = std::to_string(cfg.lax_refine_nx) + "x" + std::to_string(ny);
        rep.measurements.push_back({"lax_ladder_curvature_" + tag, l.curvature_max});
        rep.measurements.push_back({"lax_ladder_commutator_" + tag, l.commutator_max});
        rep.measurements.push_back({"lax_ladder_residual_" + tag, r.residual});
    }
    for (std::size_t k = 0; k + 1 < curv.size(); ++k) {
        const std::string tag = std::to_string(cfg.lax_refine_ny[k]) + "_" + std::to_string(cfg.lax_refine_ny[k + 1]);
        rep.measurements.push_back({"lax_curvature_order_" + tag, observed_order(curv[k], curv[k + 1], 2.0)});
        rep.measurements.push_back({"lax_commutator_order_" + tag, observed_order(comm[k], comm[k + 1], 2.0)});
    }
    // The asymptotic order is read off the finest pair of the ladder.
    const std::size_t n = curv.size();
    rep.rows.push_back(make_row("lax_curvature_order", observed_order(curv[n - 2], curv[n - 1], 2.0), Relation::ge, 1.8));
    rep.rows.push_back(make_row("lax_commutator_order", observed_order(comm[n - 2], comm[n - 1], 2.0), Relation::ge, 1.8));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport hitchin_rigidity(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{7, "hitchin_rigidity", {}, {}, {}, 0.0};
    const ContinuationCurve& curve = ctx.curve();
    double shift = 0.0;
    for (const CurveSample& s : curve.samples) shift = std::max(shift, s.diag.hitchin_tr2_shift);
    rep.rows.push_back(make_row("sweep_samples_reached", double(curve.samples.size()), Relation::eq,
                                double(cfg.sweep_alphas().size())));
    rep.rows.push_back(make_row("hitchin_tr2_shift", shift, Relation::le, 1e-6));

    const Configuration& c = ctx.solved().config;
    const Generator gen = solve_generator(c);
    double worst = 0.0;
    for (const cplx l : cfg.lambdas) {
        const LaxConnection lc = build_lax(c, gen, l);
        for (int i = 0; i < c.grid.nx; ++i)
            for (int j = 0; j < c.grid.ny; ++j) {
                const std::vector<cplx> a = charpoly_coeffs(c.phi.at(i, j)), b = charpoly_coeffs(lc.phi_g.at(i, j));
                for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
            }
    }
    rep.rows.push_back(make_row("charpoly_gauge_invariance", worst, Relation::le, 1e-12));
    const HitchinData h = hitchin_map(c);
    for (std::size_t k = 0; k < h.dbar_sup.size(); ++k)
        rep.measurements.push_back({"hitchin_dbar_tr" + std::to_string(k + 2), h.dbar_sup[k]});
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport monodromy_check(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{8, "monodromy", {}, {}, {}, 0.0};
    AbelianParams p = cfg.abelian;
    p.mu = 0.25;
    p.alpha = 0.0;
    const Monodromy m0 = monodromy(p, solve_abelian(p, cfg.grid));
    EndMatrix expect = EndMatrix::Zero(2, 2);
    expect(0, 0) = cplx(0.0, 1.0);
    expect(1, 1) = cplx(0.0, -1.0);
    rep.rows.push_back(make_row("monodromy_m0_error", (m0.m0 - expect).cwiseAbs().maxCoeff(), Relation::le, 1e-12));

    const double alphas[3] = {0.01, 0.02, 0.04};
    double phase[3], det_err = 0.0;
    for (int k = 0; k < 3; ++k) {
        p.alpha = alphas[k];
        const Monodromy m = monodromy(p, solve_abelian(p, cfg.grid));
        phase[k] = alphas[k] * m.theta;
        det_err = std::max(det_err, std::abs(m.m_alpha.determinant() - cplx(1.0, 0.0)));
        rep.measurements.push_back({"monodromy_phase_alpha_" + std::to_string(k), phase[k]});
    }
    // Proportional fit phase = c alpha through the three points.
    double saa = 0, sap = 0;
    for (int k = 0; k < 3; ++k) {
        saa += alphas[k] * alphas[k];
        sap += alphas[k] * phase[k];
    }
    const double slope = sap / saa;
    double res = 0, norm = 0;
    for (int k = 0; k < 3; ++k) {
        res += std::pow(phase[k] - slope * alphas[k], 2);
        norm += phase[k] * phase[k];
    }
    const double rel = norm > 0.0 ? std::sqrt(res / norm) : std::numeric_limits<double>::quiet_NaN();
    rep.measurements.push_back({"monodromy_phase_slope", slope});
    rep.rows.push_back(make_row("monodromy_phase_linear_fit_rel", rel, Relation::lt, 0.01));
    rep.rows.push_back(make_row("monodromy_det_error", det_err, Relation::le, 1e-12));
    if (!rep.pass())
        rep.notes.push_back("the alpha-shift of A_x is proportional to e^{2 pi i x}, whose circle mean vanishes, so "
                            "the integrated phase is zero up to rounding and a relative linear fit is not defined");
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport embedding_identity(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{9, "embedding_identity", {}, {}, {}, 0.0};
    Rng rng(cfg.seed);
    double worst = 0.0, herm = 0.0;
    for (int k = 0; k < 10; ++k) {
        const Configuration c = random_configuration(rng, cfg.grid, 0.1 * rng.symmetric());
        Configuration classical = Configuration::zero(cfg.grid, 0.0);
        classical.A = c.A;
        classical.phi = composite(c.phi, c.psi, c.alpha).Phi;
        worst = std::max(worst, max_abs_diff(residual_embedded(c).r3, residual(classical).r3));
        const FieldGrid x = pointwise_commutator(classical.phi, pointwise_adjoint(classical.phi));
        herm = std::max(herm, max_abs_diff(x, pointwise_adjoint(x)));
    }
    rep.rows.push_back(make_row("embed_classical_identity_max_diff", worst, Relation::le, 0.0));
    rep.measurements.push_back({"embed_bracket_hermitian_defect", herm});

    const Configuration ab = flat_abelian_seed(cfg.abelian, cfg.grid);
    const FieldGrid base = composite(ab.phi, ab.psi, 0.0).Phi;
    double dep = 0.0;
    for (const double a : {0.01, 0.05, 0.5, 1.0, -0.3})
        dep = std::max(dep, max_abs_diff(composite(ab.phi, ab.psi, a).Phi, base));
    rep.rows.push_back(make_row("embed_commuting_alpha_dependence", dep, Relation::le, 0.0));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport cokernel_health(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{10, "cokernel_health", {}, {}, {}, 0.0};
    const CylinderGrid small = with_size(cfg.grid, cfg.cokernel_nx, cfg.cokernel_ny);
    const Configuration seed = flat_abelian_seed(cfg.abelian, small);
    const NewtonResult s0 = newton_solve(seed, 0.0, cfg.newton);
    const NewtonResult s1 = newton_solve(seed, cfg.sweep_alpha_max, cfg.newton);
    const SingularSummary a = augmented_singular_values(s0.config, seed);
    const SingularSummary b = augmented_singular_values(s1.config, seed);
    rep.measurements.push_back({"cokernel_sigma_max_alpha0", a.sigma_max});
    rep.measurements.push_back({"cokernel_kernel_dim_alpha0", double(a.kernel_dim)});
    rep.measurements.push_back({"cokernel_sigma_min_alpha_max", b.sigma_min});
    rep.measurements.push_back({"cokernel_kernel_dim_alpha_max", double(b.kernel_dim)});
    rep.rows.push_back(make_row("cokernel_sigma_min_alpha0", a.sigma_min, Relation::gt, 0.0));
    rep.rows.push_back(make_row("cokernel_collapse_ratio", a.sigma_min / b.sigma_min, Relation::le, 10.0));
    rep.seconds = seconds_since(t0);
    return rep;
}

std::string format_csv(const std::vector<CriterionReport>& reports)
{
    std::string out = "check_name,value,threshold,pass\n";
    char buf[64];
    for (const CriterionReport& r : reports)
        for (const CheckRow& row : r.rows) {
            out += row.name;
            std::snprintf(buf, sizeof buf, ",%.12e", row.value);
            out += buf;
            std::snprintf(buf, sizeof buf, ",%.12e", row.threshold);
            out += buf;
            out += row.pass ? ",true\n" : ",false\n";
        }
    return out;
}

CriterionReport determinism_io(SuiteContext& ctx, const std::string& scratch_dir)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{11, "determinism_io", {}, {}, {}, 0.0};

    // Two independent runs of a small pipeline that exercises assembly, QR and SVD.
    RunConfig small = cfg;
    small.grid.nx = cfg.cokernel_nx;
    small.grid.ny = cfg.cokernel_ny;
    auto run_once = [&] {
        SuiteContext c(small);
        return format_csv({inversion_identity(c), embedding_identity(c), cokernel_health(c)});
    };
    const std::string a = run_once(), b = run_once();
    std::filesystem::create_directories(scratch_dir);
    const std::string pa = scratch_dir + "/determinism_a.csv", pb = scratch_dir + "/determinism_b.csv";
    for (const auto& [path, text] : {std::pair{pa, a}, std::pair{pb, b}}) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << text;
    }
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    const bool same = !a.empty() && slurp(pa) == slurp(pb);
    rep.rows.push_back(make_row("csv_byte_identical", same ? 1.0 : 0.0, Relation::eq, 1.0));

    Rng rng(cfg.seed);
    Configuration c = random_configuration(rng, cfg.grid, 0.0375);
    c.A.ax.data()[3] = cplx(0.0, -0.0); // signed zero must survive
    const std::string path = scratch_dir + "/roundtrip.hhlab";
    persist_configuration(c, path);
    const Configuration back = load_configuration(path);
    std::size_t mismatches = 0;
    auto cmp = [&](const FieldGrid& x, const FieldGrid& y) {
        if (x.data().size() != y.data().size()) {
            ++mismatches;
            return;
        }
        for (std::size_t k = 0; k < x.data().size(); ++k)
            if (std::memcmp(&x.data()[k], &y.data()[k], sizeof(cplx)) != 0) ++mismatches;
    };
    cmp(c.A.ax, back.A.ax);
    cmp(c.A.ay, back.A.ay);
    cmp(c.phi, back.phi);
    cmp(c.psi, back.psi);
    if (std::memcmp(&c.alpha, &back.alpha, sizeof(double)) != 0 || !(c.grid == back.grid)) ++mismatches;
    rep.rows.push_back(make_row("persist_roundtrip_mismatches", double(mismatches), Relation::eq, 0.0));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport run_criterion(int id, SuiteContext& ctx, const std::string& scratch_dir)
{
    switch (id) {
    case 1: return abelian_exact_residual(ctx);
    case 2: return inversion_identity(ctx);
    case 3: return newton_continuation(ctx);
    case 4: return two_path_parity(ctx);
    case 5: return linearization_consistency(ctx);
    case 6: return lax_flatness(ctx);
    case 7: return hitchin_rigidity(ctx);
    case 8: return monodromy_check(ctx);
    case 9: return embedding_identity(ctx);
    case 10: return cokernel_health(ctx);
    case 11: return determinism_io(ctx, scratch_dir);
    default: throw ArgumentError("criterion number must be in 1..11, got " + std::to_string(id));
    }
}

// ---------------------------------------------------------------- diagnostics

CriterionReport abelian_profile_report(SuiteContext& ctx)
{
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{0, "abelian_profile", {}, {}, {}, 0.0};
    const auto t0 = Clock::now();
    const AbelianSolution s = solve_abelian(cfg.abelian, cfg.grid);
    rep.measurements.push_back({"p_top_defect", s.p_top_defect});
    rep.measurements.push_back({"abelian_residual", residual(s.config).sup_norm()});
    const SpectralCurve sc = spectral_curve(cfg.abelian, cfg.grid.rank);
    rep.measurements.push_back({"spectral_reducible", sc.reducible ? 1.0 : 0.0});
    for (std::size_t k = 0; k < sc.coeffs.size(); ++k)
        rep.measurements.push_back({"spectral_coeff_" + std::to_string(k) + "_re", sc.coeffs[k].real()});
    rep.measurements.push_back({"dbar_potential_sup", dbar_potential_profile(cfg.abelian, cfg.grid).sup_norm()});
    // Source-free case: nu_2 = 0 and alpha = 0 leave the profile identically zero.
    if (cfg.abelian.nu.imag() == 0.0 && cfg.abelian.alpha == 0.0)
        rep.rows.push_back(make_row("p_top_defect_source_free", s.p_top_defect, Relation::eq, 0.0));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport constants_report(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    CriterionReport rep{0, "constants", {}, {}, {}, 0.0};
    const Constants& k = ctx.constants();
    rep.measurements.push_back({"constant_M", k.M});
    rep.measurements.push_back({"constant_K1", k.K1});
    rep.measurements.push_back({"constant_K2", k.K2});
    rep.measurements.push_back({"sigma_max", k.sigma.sigma_max});
    rep.measurements.push_back({"kernel_dim", double(k.sigma.kernel_dim)});
    rep.rows.push_back(make_row("sigma_min", k.sigma.sigma_min, Relation::gt, 0.0));
    rep.rows.push_back(make_row("alpha_star", k.alpha_star, Relation::gt, 0.0));
    rep.seconds = seconds_since(t0);
    return rep;
}

CriterionReport embed_converse_report(SuiteContext& ctx)
{
    const auto t0 = Clock::now();
    const RunConfig& cfg = ctx.config();
    CriterionReport rep{0, "embed_holomorphy", {}, {}, {}, 0.0};

    // Forward direction on the solved branch (a commuting holomorphic pair).
    const Configuration& c = ctx.solved().config;
    const double fwd = dbar_composite(c).sup_norm();
    const double parts = std::max(dbar_A_box(c.grid, c.A, c.phi).sup_norm(), dbar_A_box(c.grid, c.A, c.psi).sup_norm());
    rep.measurements.push_back({"embed_parts_dbar", parts});
    rep.rows.push_back(make_row("embed_forward_holomorphy", fwd, Relation::le, 1e-9));

    // Converse search: psi = -phi makes the composite vanish whatever phi is.
    Rng rng(cfg.seed);
    double found = 0.0, phi_dbar = 0.0;
    for (int k = 0; k < 10; ++k) {
        Configuration r = random_configuration(rng, cfg.grid, 0.1 * rng.symmetric());
        r.psi = -r.phi;
        const double d = dbar_composite(r).sup_norm(), p = dbar_A_box(r.grid, r.A, r.phi).sup_norm();
        if (d == 0.0 && p > 0.0) found += 1.0;
        phi_dbar = std::max(phi_dbar, p);
    }
    rep.measurements.push_back({"embed_converse_counterexamples", found});
    rep.measurements.push_back({"embed_converse_phi_dbar", phi_dbar});
    rep.seconds = seconds_since(t0);
    return rep;
}

} // namespace hhlab
