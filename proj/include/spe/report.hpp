#pragma once

#include <spe/metrics.hpp>
#include <spe/model_io.hpp>
#include <spe/pipeline.hpp>
#include <spe/published.hpp>

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

namespace spe {

enum class ReportFormat { md, csv, json };

inline ordered_json to_json(const EvaluationReport& r)
{
    return ordered_json{
        {"scale", scale_name(r.scale)}, {"n", r.n},         {"mse", r.mse},
        {"rmse", r.rmse},               {"mmre", r.mmre},   {"mmer", r.mmer},
        {"mdmre", r.mdmre},             {"mdmer", r.mdmer}, {"pred8", r.pred8},
        {"pred25", r.pred25},           {"r_squared", r.r_squared},
    };
}

inline ordered_json to_json(const published::ScenarioTarget& t)
{
    return ordered_json{{"label", t.label}, {"mmre", t.mmre},   {"mmer", t.mmer},     {"mdmre", t.mdmre},
                        {"mdmer", t.mdmer}, {"pred8", t.pred8}, {"pred25", t.pred25}};
}

inline std::string scenario_label(const ScenarioSpec& s)
{
    const std::string model = s.model_kind == ModelKind::lasso ? "LASSO" : "Elastic Net";
    return s.tuning == Tuning::default_params ? model + " with default parameters" : model + " with Tuning";
}

inline ordered_json to_json(const RunArtifact& a)
{
    ordered_json j{
        {"label", scenario_label(a.scenario)},
        {"model_kind", model_kind_name(a.scenario.model_kind)},
        {"tuning", tuning_name(a.scenario.tuning)},
        {"split_seed", a.scenario.split_seed},
        {"train_indices", a.train_indices},
        {"test_indices", a.test_indices},
        {"chosen_config", to_json(a.chosen_config)},
        {"weights", a.fitted.weights},
        {"intercept", a.fitted.intercept},
        {"converged", a.fitted.converged},
        {"n_sweeps_used", a.fitted.n_sweeps_used},
        {"normalization", to_json(a.normalization)},
    };
    if (a.search) {
        j["cv_mean_mse"] = a.search->best_cv_score;
        j["candidates_evaluated"] = a.search->all_scores.size();
        j["candidates_skipped"] = a.search->skipped.size();
    }
    j["report"] = to_json(a.report);
    if (a.other_scale_report) j["other_scale_report"] = to_json(*a.other_scale_report);
    else j["other_scale_error"] = a.other_scale_error;
    if (a.published_targets) {
        const auto& t = *a.published_targets;
        j["published"] = to_json(t);
        if (a.report.scale == MetricScale::normalized) {
            j["delta"] = ordered_json{{"mmre", a.report.mmre - t.mmre},    {"mmer", a.report.mmer - t.mmer},
                                      {"mdmre", a.report.mdmre - t.mdmre}, {"mdmer", a.report.mdmer - t.mdmer},
                                      {"pred8", a.report.pred8 - t.pred8}, {"pred25", a.report.pred25 - t.pred25}};
        }
    }
    return j;
}

namespace detail {

struct SpreadStats
{
    std::size_t ok = 0;
    double min = 0.0, mean = 0.0, max = 0.0;
};

inline SpreadStats spread(const std::vector<double>& v)
{
    SpreadStats s;
    s.ok = v.size();
    if (v.empty()) return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    return s;
}

inline std::vector<double> seed_values(const ReproductionReport& rep, std::size_t row, double EvaluationReport::*field)
{
    std::vector<double> out;
    for (const auto& so : rep.seed_runs) {
        if (so.reports[row]) out.push_back((*so.reports[row]).*field);
    }
    return out;
}

} // namespace detail

inline ordered_json to_json(const published::PriorWorkRow& r)
{
    return ordered_json{{"table", r.table}, {"reference", r.reference}, {"mse", r.mse},   {"mmre", r.mmre},
                        {"mmer", r.mmer},   {"mdmre", r.mdmre},         {"mdmer", r.mdmer}, {"pred8", r.pred8},
                        {"pred25", r.pred25}, {"r2", r.r2},             {"rmse", r.rmse}};
}

inline ordered_json to_json(const ReproductionReport& rep)
{
    ordered_json j;
    j["dataset"] = ordered_json{{"source", rep.dataset_source}, {"records", rep.dataset_size}};
    j["headline_seed"] = rep.headline_seed;
    ordered_json rows = ordered_json::array();
    for (const auto& a : rep.headline) rows.push_back(to_json(a));
    j["comparison"] = std::move(rows);

    ordered_json prior = ordered_json::array();
    for (const auto& r : rep.prior_work) prior.push_back(to_json(r));
    j["prior_work"] = ordered_json{{"note", "transcribed from the literature, not recomputed"},
                                   {"checksum_fnv1a64", fmt::format("{:016x}", published::prior_work_checksum)},
                                   {"rows", std::move(prior)}};

    ordered_json seeds = ordered_json::array();
    for (const auto& so : rep.seed_runs) {
        ordered_json s{{"seed", so.seed}};
        ordered_json per = ordered_json::array();
        for (std::size_t r = 0; r < comparison_rows.size(); ++r) {
            ordered_json e{{"model_kind", model_kind_name(comparison_rows[r].kind)},
                           {"tuning", tuning_name(comparison_rows[r].tuning)}};
            if (so.reports[r]) {
                e["chosen_alpha"] = so.chosen_alpha[r];
                e["report"] = to_json(*so.reports[r]);
            } else {
                e["error"] = so.errors[r];
            }
            per.push_back(std::move(e));
        }
        s["scenarios"] = std::move(per);
        seeds.push_back(std::move(s));
    }
    j["seed_sensitivity"] = std::move(seeds);

    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        checks.push_back(ordered_json{{"name", c.name}, {"status", check_status_name(c.status)},
                                      {"hard", c.hard}, {"detail", c.detail}});
    }
    j["checks"] = std::move(checks);
    return j;
}

inline std::string render_json(const ReproductionReport& rep)
{
    return to_json(rep).dump(2) + "\n";
}

inline std::string render_markdown(const ReproductionReport& rep)
{
    std::string out;
    auto line = [&out](std::string_view s) {
        out += s;
        out += '\n';
    };
    const MetricScale scale = rep.headline.empty() ? MetricScale::normalized : rep.headline.front().report.scale;

    line("# Story-point effort estimation: reproduction report");
    line("");
    line(fmt::format("Dataset: `{}` ({} projects). Split seed: {}. Metrics on the {} scale.",
                     rep.dataset_source, rep.dataset_size, rep.headline_seed, scale_name(scale)));
    line("");

    line("## Default vs. tuned models");
    line("");
    line("| Technique | Source | MMRE | MMER | MdMRE | MdMER | PRED(8%) | PRED(25%) |");
    line("|---|---|---|---|---|---|---|---|");
    for (const auto& a : rep.headline) {
        const auto& r = a.report;
        const std::string label = scenario_label(a.scenario);
        line(fmt::format("| {} | this run | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:.2f} | {:.2f} |", label, r.mmre,
                         r.mmer, r.mdmre, r.mdmer, r.pred8, r.pred25));
        if (a.published_targets && scale == MetricScale::normalized) {
            const auto& t = *a.published_targets;
            line(fmt::format("| {} | published | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:.2f} | {:.2f} |", label, t.mmre,
                             t.mmer, t.mdmre, t.mdmer, t.pred8, t.pred25));
            line(fmt::format("| {} | delta | {:+.4f} | {:+.4f} | {:+.4f} | {:+.4f} | {:+.2f} | {:+.2f} |", label,
                             r.mmre - t.mmre, r.mmer - t.mmer, r.mdmre - t.mdmre, r.mdmer - t.mdmer,
                             r.pred8 - t.pred8, r.pred25 - t.pred25));
        }
    }
    line("");

    line("### Fitted models");
    line("");
    line("| Technique | alpha | l1_ratio | max_iter | w(story_points) | w(velocity) | intercept | converged | sweeps | MSE | RMSE | R² |");
    line("|---|---|---|---|---|---|---|---|---|---|---|---|");
    for (const auto& a : rep.headline) {
        const auto& c = a.chosen_config;
        line(fmt::format("| {} | {} | {} | {} | {:.6f} | {:.6f} | {:.6f} | {} | {} | {:.6f} | {:.6f} | {:.4f} |",
                         scenario_label(a.scenario), c.alpha, c.l1_ratio, c.max_iter, a.fitted.weights.at(0),
                         a.fitted.weights.at(1), a.fitted.intercept, a.fitted.converged ? "yes" : "no",
                         a.fitted.n_sweeps_used, a.report.mse, a.report.rmse, a.report.r_squared));
    }
    line("");

    line(fmt::format("### Same models, {} scale", scale == MetricScale::normalized ? "original" : "normalized"));
    line("");
    line("| Technique | MSE | MMRE | MMER | MdMRE | MdMER | PRED(8%) | PRED(25%) | R² |");
    line("|---|---|---|---|---|---|---|---|---|");
    for (const auto& a : rep.headline) {
        if (a.other_scale_report) {
            const auto& r = *a.other_scale_report;
            line(fmt::format("| {} | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:.2f} | {:.2f} | {:.4f} |",
                             scenario_label(a.scenario), r.mse, r.mmre, r.mmer, r.mdmre, r.mdmer, r.pred8,
                             r.pred25, r.r_squared));
        } else {
            line(fmt::format("| {} | {} | | | | | | | |", scenario_label(a.scenario), a.other_scale_error));
        }
    }
    line("");

    const RunArtifact* tuned_lasso = rep.headline.size() == 4 ? &rep.headline[3] : nullptr;
    line("## Comparison with published results");
    line("");
    line("Rows other than \"this run\" are transcribed from the literature and are not recomputed.");
    line("");

    line("### MMRE and PRED(25)");
    line("");
    line("| Reference | MMRE | PRED(25) |");
    line("|---|---|---|");
    for (const auto& r : rep.prior_work) {
        if (r.table == 3) line(fmt::format("| {} | {} | {} |", r.reference, r.mmre, r.pred25));
    }
    line(fmt::format("| LASSO with Tuning (published) | {:.4f} | {:g} |", published::lasso_tuned.mmre,
                     published::lasso_tuned.pred25));
    if (tuned_lasso) {
        line(fmt::format("| LASSO with Tuning (this run) | {:.4f} | {:.2f} |", tuned_lasso->report.mmre,
                         tuned_lasso->report.pred25));
    }
    line("");

    line("### PRED(25), R², MSE and RMSE");
    line("");
    line("| Reference | PRED (25) | R² | MSE | RMSE |");
    line("|---|---|---|---|---|");
    for (const auto& r : rep.prior_work) {
        if (r.table == 4) line(fmt::format("| {} | {} | {} | {} | {} |", r.reference, r.pred25, r.r2, r.mse, r.rmse));
    }
    line(fmt::format("| LASSO with Tuning (published) | 100 | {:.4f} | {:.4f} | {:.4f} |", published::lasso_tuned_r2,
                     published::lasso_tuned_mse, published::lasso_tuned_rmse));
    if (tuned_lasso) {
        const auto& r = tuned_lasso->report;
        line(fmt::format("| LASSO with Tuning (this run) | {:.2f} | {:.4f} | {:.4f} | {:.4f} |", r.pred25,
                         r.r_squared, r.mse, r.rmse));
    }
    line("");

    line("### Full error battery");
    line("");
    line("| Reference | MSE | MMRE | MMER | MdMRE | MdMER | PRED (8%) | PRED (25%) |");
    line("|---|---|---|---|---|---|---|---|");
    for (const auto& r : rep.prior_work) {
        if (r.table == 5) {
            line(fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} |", r.reference, r.mse, r.mmre, r.mmer, r.mdmre,
                             r.mdmer, r.pred8, r.pred25));
        }
    }
    {
        const auto& t = published::lasso_tuned;
        line(fmt::format("| LASSO with Tuning (published) | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:g} | {:g} |",
                         published::lasso_tuned_mse, t.mmre, t.mmer, t.mdmre, t.mdmer, t.pred8, t.pred25));
    }
    if (tuned_lasso) {
        const auto& r = tuned_lasso->report;
        line(fmt::format("| LASSO with Tuning (this run) | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:.4f} | {:.2f} | {:.2f} |",
                         r.mse, r.mmre, r.mmer, r.mdmre, r.mdmer, r.pred8, r.pred25));
    }
    line("");

    if (!rep.seed_runs.empty()) {
        line("## Seed sensitivity");
        line("");
        std::string seed_list;
        for (const auto& so : rep.seed_runs) seed_list += (seed_list.empty() ? "" : ", ") + std::to_string(so.seed);
        line(fmt::format("Seeds: {}. A run fails when a test-set target equals the column minimum, which makes "
                         "relative errors undefined on the normalized scale.",
                         seed_list));
        line("");
        line("| Technique | runs ok | MMRE min | MMRE mean | MMRE max | PRED(25) min | PRED(25) mean | PRED(25) max |");
        line("|---|---|---|---|---|---|---|---|");
        for (std::size_t r = 0; r < comparison_rows.size(); ++r) {
            ScenarioSpec s;
            s.model_kind = comparison_rows[r].kind;
            s.tuning = comparison_rows[r].tuning;
            const auto m = detail::spread(detail::seed_values(rep, r, &EvaluationReport::mmre));
            const auto p = detail::spread(detail::seed_values(rep, r, &EvaluationReport::pred25));
            line(fmt::format("| {} | {}/{} | {:.4f} | {:.4f} | {:.4f} | {:.2f} | {:.2f} | {:.2f} |", scenario_label(s),
                             m.ok, rep.seed_runs.size(), m.min, m.mean, m.max, p.min, p.mean, p.max));
        }
        line("");
        line("| Seed | Technique | MMRE | PRED(25) | alpha |");
        line("|---|---|---|---|---|");
        for (const auto& so : rep.seed_runs) {
            for (std::size_t r = 0; r < comparison_rows.size(); ++r) {
                ScenarioSpec s;
                s.model_kind = comparison_rows[r].kind;
                s.tuning = comparison_rows[r].tuning;
                if (so.reports[r]) {
                    line(fmt::format("| {} | {} | {:.4f} | {:.2f} | {} |", so.seed, scenario_label(s),
                                     so.reports[r]->mmre, so.reports[r]->pred25, so.chosen_alpha[r]));
                } else {
                    line(fmt::format("| {} | {} | failed: {} | | |", so.seed, scenario_label(s), so.errors[r]));
                }
            }
        }
        line("");
    }

    line("## Acceptance checks");
    line("");
    line("| Check | Status | Detail |");
    line("|---|---|---|");
    for (const auto& c : rep.checks) {
        line(fmt::format("| {} | {} | {} |", c.name, check_status_name(c.status), c.detail));
    }
    return out;
}

namespace detail {

inline std::string csv_quote(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string csv_metrics(const EvaluationReport& r)
{
    return fmt::format("{},{},{},{},{},{},{},{},{}", r.mse, r.rmse, r.mmre, r.mmer, r.mdmre, r.mdmer, r.pred8,
                       r.pred25, r.r_squared);
}

} // namespace detail

/// Long-format CSV: one row per table entry, tagged by section.
inline std::string render_csv(const ReproductionReport& rep)
{
    std::string out = "section,label,seed,scale,mse,rmse,mmre,mmer,mdmre,mdmer,pred8,pred25,r2,note\n";
    for (const auto& a : rep.headline) {
        const auto label = detail::csv_quote(scenario_label(a.scenario));
        out += fmt::format("comparison,{},{},{},{},\n", label, a.scenario.split_seed, scale_name(a.report.scale),
                           detail::csv_metrics(a.report));
        if (a.other_scale_report) {
            out += fmt::format("comparison,{},{},{},{},\n", label, a.scenario.split_seed,
                               scale_name(a.other_scale_report->scale), detail::csv_metrics(*a.other_scale_report));
        }
        if (a.published_targets) {
            const auto& t = *a.published_targets;
            out += fmt::format("published,{},,normalized,,,{},{},{},{},{},{},,transcribed\n", label, t.mmre, t.mmer,
                               t.mdmre, t.mdmer, t.pred8, t.pred25);
        }
    }
    for (const auto& r : rep.prior_work) {
        out += fmt::format("prior_work_table{},{},,,{},{},{},{},{},{},{},{},{},transcribed\n", r.table,
                           detail::csv_quote(r.reference), r.mse, r.rmse, r.mmre, r.mmer, r.mdmre, r.mdmer, r.pred8,
                           r.pred25, r.r2);
    }
    for (const auto& so : rep.seed_runs) {
        for (std::size_t k = 0; k < comparison_rows.size(); ++k) {
            ScenarioSpec s;
            s.model_kind = comparison_rows[k].kind;
            s.tuning = comparison_rows[k].tuning;
            const auto label = detail::csv_quote(scenario_label(s));
            if (so.reports[k]) {
                out += fmt::format("seed,{},{},{},{},\n", label, so.seed, scale_name(so.reports[k]->scale),
                                   detail::csv_metrics(*so.reports[k]));
            } else {
                out += fmt::format("seed,{},{},,,,,,,,,,,{}\n", label, so.seed, detail::csv_quote(so.errors[k]));
            }
        }
    }
    for (const auto& c : rep.checks) {
        out += fmt::format("check,{},,,,,,,,,,,,{}\n", detail::csv_quote(c.name),
                           detail::csv_quote(fmt::format("{}: {}", check_status_name(c.status), c.detail)));
    }
    return out;
}

inline std::string render(const ReproductionReport& rep, ReportFormat f)
{
    switch (f) {
        case ReportFormat::md: return render_markdown(rep);
        case ReportFormat::csv: return render_csv(rep);
        case ReportFormat::json: break;
    }
    return render_json(rep);
}

} // namespace spe
