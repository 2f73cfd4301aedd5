#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hhlab/config.hpp"
#include "hhlab/laxpair.hpp"

namespace hhlab {

enum class Relation { le, lt, ge, gt, eq };

const char* relation_symbol(Relation r);

struct CheckRow {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    Relation relation = Relation::le;
    bool pass = false;
};

CheckRow make_row(std::string name, double value, Relation rel, double threshold);

// Free-form measured quantity that is reported but not judged.
struct Measurement {
    std::string name;
    double value = 0.0;
};

struct CriterionReport {
    int id = 0;
    std::string name;
    std::vector<CheckRow> rows;
    std::vector<Measurement> measurements;
    std::vector<std::string> notes;
    double seconds = 0.0; // wall clock, reported only
    bool pass() const;
    const char* status() const; // PASS, FAIL, or INFO for a diagnostic without checks
};

// Shared, lazily computed state so that pipelines running several criteria solve
// each configuration once.
class SuiteContext {
public:
    explicit SuiteContext(RunConfig cfg);

    const RunConfig& config() const { return cfg_; }

    // Flat abelian seed on the configured grid.
    const Configuration& seed();
    // Sweep over cfg.sweep_alphas() from the seed (slice = seed).
    const ContinuationCurve& curve();
    // Direct solve at alpha_max from the seed.
    const NewtonResult& solved();
    // Seed corrected at alpha = 0.
    const NewtonResult& base();
    const Constants& constants();

    // Newton solution at alpha_max on an nx x ny grid (other grid fields as configured).
    const NewtonResult& solved_on(int nx, int ny);

private:
    RunConfig cfg_;
    std::optional<Configuration> seed_;
    std::optional<ContinuationCurve> curve_;
    std::optional<NewtonResult> solved_, base_;
    std::optional<Constants> constants_;
    std::map<std::pair<int, int>, NewtonResult> ladder_;
};

// Lax data at a configuration, sup over the lambda samples.
struct LaxSummary {
    std::vector<double> curvature;   // per lambda, interior sup of the Lax curvature
    std::vector<double> commutator;  // per lambda, interior commutator defect over the sections
    double curvature_max = 0.0;
    double commutator_max = 0.0;
    double truncation = 0.0;         // two-grid estimate, 0 when the grid cannot be coarsened
    double max_condition = 1.0;
    double neumann_defect = 0.0;
};

LaxSummary lax_summary(const Configuration& c, const std::vector<cplx>& lambdas, int sections,
                       unsigned long long seed, bool with_truncation);

inline constexpr int kCriterionCount = 11;

CriterionReport abelian_exact_residual(SuiteContext& ctx);  // 1
CriterionReport inversion_identity(SuiteContext& ctx);      // 2
CriterionReport newton_continuation(SuiteContext& ctx);     // 3
CriterionReport two_path_parity(SuiteContext& ctx);         // 4
CriterionReport linearization_consistency(SuiteContext& ctx); // 5
CriterionReport lax_flatness(SuiteContext& ctx);            // 6
CriterionReport hitchin_rigidity(SuiteContext& ctx);        // 7
CriterionReport monodromy_check(SuiteContext& ctx);         // 8
CriterionReport embedding_identity(SuiteContext& ctx);      // 9
CriterionReport cokernel_health(SuiteContext& ctx);         // 10
CriterionReport determinism_io(SuiteContext& ctx, const std::string& scratch_dir); // 11

// "check_name,value,threshold,pass" rows in report order, fixed number format.
std::string format_csv(const std::vector<CriterionReport>& reports);

// Criterion by number (1..11); determinism_io uses scratch_dir for its files.
CriterionReport run_criterion(int id, SuiteContext& ctx, const std::string& scratch_dir);

// Extra diagnostics reported alongside the criteria.
CriterionReport abelian_profile_report(SuiteContext& ctx);
CriterionReport constants_report(SuiteContext& ctx);
CriterionReport embed_converse_report(SuiteContext& ctx);

} // namespace hhlab
