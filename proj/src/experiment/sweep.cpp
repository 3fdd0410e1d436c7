// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/experiment.hpp"
#include "authorrag/resources.hpp"

#include <spdlog/spdlog.h>

namespace authorrag {
namespace {

using nlohmann::json;

void finish_report(SweepResult& result, const std::string& baseline) {
    std::vector<NamedRun> runs;
    for (const auto& [name, record] : result.runs) {
        if (!record.metrics) {
            return;
        }
        runs.emplace_back(name, record.metrics->scores);
    }
    result.report = build_report(runs, baseline);
    result.table = render_table(result.report);
    result.chart = render_delta_chart(result.report);
}

json report_json(const SweepResult& result) {
    json runs = json::array();
    for (const auto& r : result.report) {
        runs.push_back(to_json(r, false));
    }
    return {{"runs", std::move(runs)}};
}

} // namespace

SweepResult run_sweep(const ExperimentConfig& base, const std::vector<SweepVariation>& axes, bool force) {
    if (axes.empty()) {
        throw PreconditionError("a sweep needs at least one variation");
    }
    base.validate();
    Services services(base);
    SweepResult result;

    std::vector<SweepVariation> variations{{"baseline", {}, 0}};
    for (const auto& v : axes) {
        if (v.features.empty() && v.n_contrastive_authors == 0) {
            continue;
        }
        variations.push_back(v);
    }
    for (const auto& v : variations) {
        auto cfg = base;
        cfg.features = v.features;
        cfg.retrieval.n_contrastive_authors = v.n_contrastive_authors;
        cfg.run_name = base.run_name + "/" + v.name;
        cfg.sweep.clear();
        result.runs.emplace_back(v.name, run_experiment(cfg, services, force));
    }
    finish_report(result, "baseline");

    const auto dir = base.output_dir / base.run_name;
    if (!result.report.empty()) {
        write_file_atomic(dir / "sweep_report.txt", result.table);
        write_file_atomic(dir / "sweep_chart.txt", result.chart);
        write_file_atomic(dir / "sweep.json", report_json(result).dump(2) + "\n");
    }
    return result;
}

SweepResult report_runs(const std::vector<std::filesystem::path>& run_dirs, const std::string& baseline) {
    if (run_dirs.empty()) {
        throw PreconditionError("report needs at least one run directory");
    }
    SweepResult result;
    bool has_baseline = false;
    for (const auto& dir : run_dirs) {
        auto record = load_run_record(dir);
        if (!record.metrics) {
            throw PreconditionError("run " + dir.string() + " has no metrics (no gold outputs?)");
        }
        auto name = dir.filename().string();
        if (name.empty()) {
            name = dir.parent_path().filename().string();
        }
        has_baseline = has_baseline || name == baseline;
        result.runs.emplace_back(std::move(name), std::move(record));
    }
    if (!has_baseline) {
        throw PreconditionError("baseline '" + baseline + "' is not one of the run directories");
    }
    finish_report(result, baseline);
    return result;
}

} // namespace authorrag
