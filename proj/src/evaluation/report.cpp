// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/evaluation.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <nlohmann/json.hpp>

namespace authorrag {
namespace {

std::string signed_pct(std::optional<double> v) {
    if (!v) {
        return "n/a";
    }
    return (*v >= 0.0 ? "+" : "") + text::format_fixed(*v, 1) + "%";
}

std::string p_value_text(const Comparison& c) {
    if (c.p_rougeL) {
        return *c.p_rougeL < 1e-4 ? std::string("<0.0001") : text::format_fixed(*c.p_rougeL, 4);
    }
    return c.note.empty() ? std::string("n/a") : c.note;
}

nlohmann::json optional_json(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> optional_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

} // namespace

double mean_of(const std::vector<double>& values) {
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

std::optional<double> relative_delta_pct(double run_mean, double base_mean) {
    if (base_mean == 0.0) {
        return std::nullopt;
    }
    return 100.0 * (run_mean - base_mean) / base_mean;
}

std::vector<MetricsReport> build_report(const std::vector<NamedRun>& runs, const std::string& baseline) {
    const auto base_it =
        std::find_if(runs.begin(), runs.end(), [&](const NamedRun& r) { return r.first == baseline; });
    if (base_it == runs.end()) {
        throw PreconditionError("baseline run '" + baseline + "' is not among the runs");
    }
    std::map<std::string, std::size_t, std::less<>> base_index;
    for (std::size_t i = 0; i < base_it->second.size(); ++i) {
        base_index.emplace(base_it->second[i].instance_id, i);
    }

    std::vector<MetricsReport> reports;
    for (const auto& [name, scores] : runs) {
        MetricsReport report;
        report.run_name = name;
        report.scores = scores;
        std::vector<double> r1;
        std::vector<double> rl;
        for (const auto& s : scores) {
            r1.push_back(s.rouge1_f);
            rl.push_back(s.rougeL_f);
        }
        report.mean_rouge1 = mean_of(r1);
        report.mean_rougeL = mean_of(rl);
        if (name != baseline) {
            std::vector<std::string> mismatches;
            std::vector<double> base_r1;
            std::vector<double> base_rl;
            std::map<std::string, bool, std::less<>> present;
            for (const auto& s : scores) {
                present[s.instance_id] = true;
                const auto it = base_index.find(s.instance_id);
                if (it == base_index.end()) {
                    mismatches.push_back(s.instance_id + " (missing from " + baseline + ")");
                    continue;
                }
                base_r1.push_back(base_it->second[it->second].rouge1_f);
                base_rl.push_back(base_it->second[it->second].rougeL_f);
            }
            for (const auto& [id, index] : base_index) {
                if (present.count(id) == 0) {
                    mismatches.push_back(id + " (missing from " + name + ")");
                }
            }
            if (!mismatches.empty()) {
                if (mismatches.size() > 10) {
                    const auto more = mismatches.size() - 10;
                    mismatches.resize(10);
                    mismatches.push_back("... and " + std::to_string(more) + " more");
                }
                throw AlignmentError("runs '" + name + "' and '" + baseline +
                                     "' are not aligned: " + text::join(mismatches, ", "));
            }
            Comparison c;
            c.baseline = baseline;
            c.delta_rouge1_pct = relative_delta_pct(report.mean_rouge1, mean_of(base_r1));
            c.delta_rougeL_pct = relative_delta_pct(report.mean_rougeL, mean_of(base_rl));
            try {
                c.p_rougeL = paired_t_test(rl, base_rl);
            } catch (const DegenerateTestError&) {
                c.note = "no variance";
            } catch (const PreconditionError&) {
                c.note = "too few instances";
            }
            try {
                c.p_rouge1 = paired_t_test(r1, base_r1);
            } catch (const Error&) {
            }
            report.comparison = std::move(c);
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string render_table(const std::vector<MetricsReport>& reports) {
    std::size_t width = 3;
    for (const auto& r : reports) {
        width = std::max(width, r.run_name.size());
    }
    std::string out = fmt::format("{:<{}}  {:>7}  {:>7}  {:>9}  {:>11}\n", "Run", width, "ROUGE-1", "ROUGE-L",
                                  "dROUGE-L", "p (ROUGE-L)");
    for (const auto& r : reports) {
        const auto delta = r.comparison ? signed_pct(r.comparison->delta_rougeL_pct) : std::string("-");
        const auto p = r.comparison ? p_value_text(*r.comparison) : std::string("-");
        out += fmt::format("{:<{}}  {:>7}  {:>7}  {:>9}  {:>11}\n", r.run_name, width,
                           text::format_fixed(r.mean_rouge1, 4), text::format_fixed(r.mean_rougeL, 4), delta, p);
    }
    return out;
}

std::string render_delta_chart(const std::vector<MetricsReport>& reports) {
    constexpr int kHalfWidth = 30;
    std::size_t width = 0;
    double largest = 0.0;
    for (const auto& r : reports) {
        if (r.comparison && r.comparison->delta_rougeL_pct) {
            width = std::max(width, r.run_name.size());
            largest = std::max(largest, std::fabs(*r.comparison->delta_rougeL_pct));
        }
    }
    std::string out;
    for (const auto& r : reports) {
        if (!r.comparison || !r.comparison->delta_rougeL_pct) {
            continue;
        }
        const double d = *r.comparison->delta_rougeL_pct;
        const int len = largest > 0.0 ? static_cast<int>(std::lround(std::fabs(d) / largest * kHalfWidth)) : 0;
        const std::string left = d < 0 ? std::string(static_cast<std::size_t>(len), '#') : std::string();
        const std::string right = d >= 0 ? std::string(static_cast<std::size_t>(len), '#') : std::string();
        out += fmt::format("{:<{}} {:>{}}|{:<{}} {}\n", r.run_name, width, left, kHalfWidth, right, kHalfWidth,
                           signed_pct(d));
    }
    return out;
}

nlohmann::json to_json(const MetricsReport& report, bool include_scores) {
    nlohmann::json j = {{"run", report.run_name},
                        {"mean_rouge1", report.mean_rouge1},
                        {"mean_rougeL", report.mean_rougeL},
                        {"instances", report.scores.size()}};
    if (report.comparison) {
        const auto& c = *report.comparison;
        j["comparison"] = {{"baseline", c.baseline},
                           {"delta_rouge1_pct", optional_json(c.delta_rouge1_pct)},
                           {"delta_rougeL_pct", optional_json(c.delta_rougeL_pct)},
                           {"p_rougeL", optional_json(c.p_rougeL)},
                           {"p_rouge1", optional_json(c.p_rouge1)},
                           {"note", c.note}};
    }
    if (include_scores) {
        nlohmann::json scores = nlohmann::json::array();
        for (const auto& s : report.scores) {
            scores.push_back({{"id", s.instance_id},
                              {"prediction", s.prediction},
                              {"reference", s.reference},
                              {"rouge1", s.rouge1_f},
                              {"rougeL", s.rougeL_f}});
        }
        j["scores"] = std::move(scores);
    }
    return j;
}

MetricsReport metrics_report_from_json(const nlohmann::json& j) {
    MetricsReport r;
    r.run_name = j.at("run").get<std::string>();
    r.mean_rouge1 = j.at("mean_rouge1").get<double>();
    r.mean_rougeL = j.at("mean_rougeL").get<double>();
    if (j.contains("comparison")) {
        const auto& c = j.at("comparison");
        Comparison cmp;
        cmp.baseline = c.at("baseline").get<std::string>();
        cmp.delta_rouge1_pct = optional_from(c, "delta_rouge1_pct");
        cmp.delta_rougeL_pct = optional_from(c, "delta_rougeL_pct");
        cmp.p_rougeL = optional_from(c, "p_rougeL");
        cmp.p_rouge1 = optional_from(c, "p_rouge1");
        cmp.note = c.value("note", std::string());
        r.comparison = std::move(cmp);
    }
    for (const auto& s : j.value("scores", nlohmann::json::array())) {
        r.scores.push_back({s.at("id").get<std::string>(), s.at("prediction").get<std::string>(),
                            s.at("reference").get<std::string>(), s.at("rouge1").get<double>(),
                            s.at("rougeL").get<double>()});
    }
    return r;
}

std::string predictions_json(Task task, const std::vector<std::pair<std::string, std::string>>& predictions) {
    nlohmann::json golds = nlohmann::json::array();
    for (const auto& [id, output] : predictions) {
        golds.push_back({{"id", id}, {"output", output}});
    }
    return nlohmann::json{{"task", task_name(task)}, {"golds", std::move(golds)}}.dump(2) + "\n";
}

} // namespace authorrag
