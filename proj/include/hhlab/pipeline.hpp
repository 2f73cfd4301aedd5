#pragma once

#include <string>
#include <vector>

#include "hhlab/checks.hpp"
#include "hhlab/config.hpp"
#include "hhlab/error.hpp"

namespace hhlab {

// Module error re-raised with the pipeline stage it came from.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

const std::vector<std::string>& pipeline_names();

struct PipelineOutcome {
    std::vector<CriterionReport> reports;
    std::vector<std::string> files; // written artifacts, relative to the output directory
    bool all_pass = true;
};

// Runs cfg.experiment and writes into cfg.out_dir:
//   checks.csv   "check_name,value,threshold,pass"
//   report.txt   every measured value, check and note
//   *.hhlab      configuration snapshots, curve.csv for sweeps
// On a module error the finished rows are still written, report.txt is marked
// partial, and a StageError is thrown.
PipelineOutcome run_experiment(const RunConfig& cfg);

std::string format_report(const RunConfig& cfg, const std::vector<CriterionReport>& reports,
                          const std::string& partial_stage = {}, const std::string& partial_error = {});

} // namespace hhlab
