#include "hhlab/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "hhlab/persist.hpp"

namespace hhlab {

namespace {

struct Stage {
    std::string name;
    std::function<void()> run;
};

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ArgumentError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw ArgumentError("write to " + path.string() + " failed");
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string curve_csv(const ContinuationCurve& curve)
{
    std::string out = "alpha,residual,gauge,newton_iterations,hitchin_tr2_shift,synthesized\n";
    char buf[160];
    for (const CurveSample& s : curve.samples) {
        std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%d,%.12e,%d\n", s.alpha, s.diag.residual, s.diag.gauge,
                      s.diag.newton_iterations, s.diag.hitchin_tr2_shift, s.synthesized ? 1 : 0);
        out += buf;
    }
    return out;
}

} // namespace

const std::vector<std::string>& pipeline_names()
{
    static const std::vector<std::string> names = {"solve-abelian", "continue",    "constants", "lax-check",
                                                   "invariants",    "parity",      "embed-check", "full-suite"};
    return names;
}

std::string format_report(const RunConfig& cfg, const std::vector<CriterionReport>& reports,
                          const std::string& partial_stage, const std::string& partial_error)
{
    std::string out;
    out += "hhlab report\n";
    out += "pipeline: " + cfg.experiment + "\n";
    out += "grid: nx=" + std::to_string(cfg.grid.nx) + " ny=" + std::to_string(cfg.grid.ny) +
           " rank=" + std::to_string(cfg.grid.rank) + " epsilon=" + fmt(cfg.grid.epsilon) + "\n";
    out += "abelian: mu=" + fmt(cfg.abelian.mu.real()) + "+" + fmt(cfg.abelian.mu.imag()) + "i nu=" +
           fmt(cfg.abelian.nu.real()) + "+" + fmt(cfg.abelian.nu.imag()) + "i\n";
    out += "sweep: alpha_max=" + fmt(cfg.sweep_alpha_max) + " steps=" + std::to_string(cfg.sweep_steps) + "\n";
    out += "seed: " + std::to_string(cfg.seed) + "\n";
    if (partial_stage.empty())
        out += "status: complete\n";
    else
        out += "status: PARTIAL, stage " + partial_stage + " failed: " + partial_error + "\n";

    int checks = 0, failed = 0;
    for (const CriterionReport& r : reports) {
        out += "\n";
        out += r.id > 0 ? "[" + std::to_string(r.id) + "] " : "[diag] ";
        out += r.name + "  " + r.status();
        char t[48];
        std::snprintf(t, sizeof t, "  (%.2f s)\n", r.seconds);
        out += t;
        for (const CheckRow& row : r.rows) {
            ++checks;
            if (!row.pass) ++failed;
            out += "  check    " + row.name + " = " + fmt(row.value) + "  (" + relation_symbol(row.relation) + " " +
                   fmt(row.threshold) + ")  " + (row.pass ? "pass" : "FAIL") + "\n";
        }
        for (const Measurement& m : r.measurements) out += "  measure  " + m.name + " = " + fmt(m.value) + "\n";
        for (const std::string& n : r.notes) out += "  note     " + n + "\n";
    }
    out += "\nsummary: " + std::to_string(checks) + " checks, " + std::to_string(failed) + " failed\n";
    return out;
}

PipelineOutcome run_experiment(const RunConfig& cfg)
{
    cfg.validate();
    const std::string& name = cfg.experiment;
    bool known = false;
    for (const std::string& n : pipeline_names()) known = known || n == name;
    if (!known) throw ValidationError("experiment", "unknown pipeline '" + name + "'");

    const std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);

    SuiteContext ctx(cfg);
    PipelineOutcome res;
    std::vector<Stage> stages;

    auto criterion = [&](int id) {
        static const char* names[] = {"",          "abelian_exact_residual", "inversion_identity",
                                      "newton_continuation", "two_path_parity", "linearization_consistency",
                                      "lax_flatness",        "hitchin_rigidity", "monodromy",
                                      "embedding_identity",  "cokernel_health", "determinism_io"};
        stages.push_back({names[id], [&, id] {
                              res.reports.push_back(run_criterion(id, ctx, (out / "scratch").string()));
                          }});
    };
    auto diagnostic = [&](const std::string& stage, CriterionReport (*fn)(SuiteContext&)) {
        stages.push_back({stage, [&, fn] { res.reports.push_back(fn(ctx)); }});
    };
    auto snapshot = [&](const std::string& file, std::function<const Configuration&()> get) {
        stages.push_back({"snapshot " + file, [&, file, get] {
                              persist_configuration(get(), (out / file).string());
                              res.files.push_back(file);
                          }});
    };
    auto curve_files = [&] {
        stages.push_back({"curve", [&] {
                              const ContinuationCurve& curve = ctx.curve();
                              write_text(out / "curve.csv", curve_csv(curve));
                              res.files.push_back("curve.csv");
                              for (std::size_t k = 0; k < curve.samples.size(); ++k) {
                                  char f[32];
                                  std::snprintf(f, sizeof f, "curve_%03zu.hhlab", k);
                                  persist_configuration(curve.samples[k].config, (out / f).string());
                                  res.files.push_back(f);
                              }
                          }});
    };
    auto seed_snap = [&] { snapshot("seed.hhlab", [&]() -> const Configuration& { return ctx.seed(); }); };
    auto solved_snap = [&] { snapshot("solved.hhlab", [&]() -> const Configuration& { return ctx.solved().config; }); };

    if (name == "solve-abelian") {
        diagnostic("abelian_profile", abelian_profile_report);
        criterion(1);
        seed_snap();
    } else if (name == "continue") {
        criterion(3);
        criterion(7);
        curve_files();
    } else if (name == "constants") {
        diagnostic("constants", constants_report);
        criterion(10);
    } else if (name == "lax-check") {
        criterion(6);
        solved_snap();
    } else if (name == "invariants") {
        criterion(2);
        criterion(5);
        criterion(8);
        criterion(11);
    } else if (name == "parity") {
        criterion(4);
        solved_snap();
    } else if (name == "embed-check") {
        criterion(9);
        diagnostic("embed_holomorphy", embed_converse_report);
    } else { // full-suite
        diagnostic("abelian_profile", abelian_profile_report);
        diagnostic("constants", constants_report);
        for (int id = 1; id <= kCriterionCount; ++id) criterion(id);
        diagnostic("embed_holomorphy", embed_converse_report);
        seed_snap();
        solved_snap();
        curve_files();
    }

    auto emit = [&](const std::string& stage, const std::string& error) {
        write_text(out / "checks.csv", format_csv(res.reports));
        write_text(out / "report.txt", format_report(cfg, res.reports, stage, error));
    };
    for (const Stage& st : stages) {
        try {
            st.run();
        } catch (const Error& e) {
            emit(st.name, e.what());
            throw StageError(st.name, e.what());
        } catch (const std::exception& e) {
            emit(st.name, e.what());
            throw StageError(st.name, e.what());
        }
    }
    emit({}, {});
    res.files.insert(res.files.begin(), {"checks.csv", "report.txt"});
    for (const CriterionReport& r : res.reports) res.all_pass = res.all_pass && r.pass();
    return res;
}

} // namespace hhlab
