// spe: story-point effort estimation from the command line.
//
// Exit codes: 0 success, 1 data or validation failure, 2 usage error,
// 3 reproduction tolerance miss under --strict.

#include <spe/config_file.hpp>
#include <spe/dataset.hpp>
#include <spe/model_io.hpp>
#include <spe/pipeline.hpp>
#include <spe/report.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_data = 1;
constexpr int exit_usage = 2;
constexpr int exit_tolerance = 3;

// Raw flag values; unset optionals fall back to the config file, then to the
// SPE_SEED environment variable (seed only), then to built-in defaults.
struct CommonFlags
{
    std::string config_path;
    std::optional<std::string> dataset;
    std::optional<std::uint64_t> seed;
    std::optional<double> test_fraction;
    std::optional<std::size_t> test_size;
    std::optional<std::size_t> k_folds;
    std::optional<std::string> format;
    std::optional<std::string> scale;
    std::optional<std::string> normalize_on;
    std::optional<unsigned> threads;
    std::vector<double> alphas;
    std::vector<double> l1_ratios;
    std::vector<int> max_iters;
    std::optional<double> tol;
};

struct CliConfig
{
    std::string dataset_path = "data/zia_story_points.csv";
    spe::ScenarioSpec spec;
    spe::ReportFormat format = spe::ReportFormat::md;
};

void add_common(CLI::App& cmd, CommonFlags& f, bool with_grid)
{
    cmd.add_option("--config", f.config_path, "TOML-style config file (flags override it)");
    cmd.add_option("--data", f.dataset, "dataset CSV (project_id,story_points,velocity,actual_effort)");
    cmd.add_option("--seed", f.seed, "split and fold seed (default 120, or SPE_SEED)");
    cmd.add_option("--test-fraction", f.test_fraction, "held-out fraction, test size = ceil(fraction * n)")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--test-size", f.test_size, "held-out record count (overrides --test-fraction)");
    cmd.add_option("--k-folds", f.k_folds, "cross-validation folds (default 5)");
    cmd.add_option("--scale", f.scale, "metric scale")->check(CLI::IsMember({"normalized", "original"}));
    cmd.add_option("--normalize-on", f.normalize_on, "rows the min-max scaler is fitted on")
        ->check(CLI::IsMember({"full", "train"}));
    cmd.add_option("--threads", f.threads, "grid-search worker threads (0 = all cores)");
    if (with_grid) {
        cmd.add_option("--alphas", f.alphas, "grid: alpha values")->delimiter(',');
        cmd.add_option("--l1-ratios", f.l1_ratios, "grid: l1_ratio values")->delimiter(',');
        cmd.add_option("--max-iters", f.max_iters, "grid: max_iter values")->delimiter(',');
        cmd.add_option("--tol", f.tol, "grid: solver stopping tolerance for every candidate (default 1e-4)");
    }
}

spe::MetricScale parse_scale(const std::string& s)
{
    if (s == "normalized") return spe::MetricScale::normalized;
    if (s == "original") return spe::MetricScale::original;
    spe::fail(spe::ErrorKind::usage, fmt::format("unknown scale '{}'", s));
}

spe::NormalizeOn parse_normalize_on(const std::string& s)
{
    if (s == "full") return spe::NormalizeOn::full;
    if (s == "train") return spe::NormalizeOn::train;
    spe::fail(spe::ErrorKind::usage, fmt::format("unknown normalize-on value '{}'", s));
}

spe::ReportFormat parse_format(const std::string& s)
{
    if (s == "md") return spe::ReportFormat::md;
    if (s == "csv") return spe::ReportFormat::csv;
    if (s == "json") return spe::ReportFormat::json;
    spe::fail(spe::ErrorKind::usage, fmt::format("unknown format '{}'", s));
}

std::uint64_t parse_seed(const std::string& s, std::string_view origin)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!s.empty() && s.front() != '-') v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        spe::fail(spe::ErrorKind::usage, fmt::format("{}: '{}' is not an unsigned integer seed", origin, s));
    }
    return v;
}

CliConfig resolve(const CommonFlags& f)
{
    CliConfig cfg;
    spe::ConfigMap file;
    if (!f.config_path.empty()) file = spe::load_config(f.config_path);

    if (auto v = spe::config_string(file, "dataset")) cfg.dataset_path = *v;
    if (const char* env = std::getenv("SPE_SEED"); env != nullptr && *env != '\0') {
        cfg.spec.split_seed = parse_seed(env, "SPE_SEED");
    }
    if (auto v = spe::config_integer(file, "seed")) {
        if (*v < 0) spe::fail(spe::ErrorKind::usage, "config key 'seed' must be non-negative");
        cfg.spec.split_seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = spe::config_real(file, "test_fraction")) cfg.spec.test_fraction = *v;
    if (auto v = spe::config_integer(file, "test_size")) cfg.spec.test_size = static_cast<std::size_t>(*v);
    if (auto v = spe::config_integer(file, "k_folds")) cfg.spec.k_folds = static_cast<std::size_t>(*v);
    if (auto v = spe::config_integer(file, "threads")) cfg.spec.threads = static_cast<unsigned>(*v);
    if (auto v = spe::config_string(file, "format")) cfg.format = parse_format(*v);
    if (auto v = spe::config_string(file, "scale")) cfg.spec.metric_scale = parse_scale(*v);
    if (auto v = spe::config_string(file, "normalize_on")) cfg.spec.normalize_on = parse_normalize_on(*v);
    if (auto v = spe::config_reals(file, "alphas")) cfg.spec.grid.alphas = *v;
    if (auto v = spe::config_reals(file, "l1_ratios")) cfg.spec.grid.l1_ratios = *v;
    if (auto v = spe::config_ints(file, "max_iters")) cfg.spec.grid.max_iters = *v;
    if (auto v = spe::config_real(file, "tol")) cfg.spec.grid.tol = *v;

    if (f.dataset) cfg.dataset_path = *f.dataset;
    if (f.seed) cfg.spec.split_seed = *f.seed;
    if (f.test_fraction) cfg.spec.test_fraction = *f.test_fraction;
    if (f.test_size) cfg.spec.test_size = *f.test_size;
    if (f.k_folds) cfg.spec.k_folds = *f.k_folds;
    if (f.threads) cfg.spec.threads = *f.threads;
    if (f.format) cfg.format = parse_format(*f.format);
    if (f.scale) cfg.spec.metric_scale = parse_scale(*f.scale);
    if (f.normalize_on) cfg.spec.normalize_on = parse_normalize_on(*f.normalize_on);
    if (!f.alphas.empty()) cfg.spec.grid.alphas = f.alphas;
    if (!f.l1_ratios.empty()) cfg.spec.grid.l1_ratios = f.l1_ratios;
    if (!f.max_iters.empty()) cfg.spec.grid.max_iters = f.max_iters;
    if (f.tol) cfg.spec.grid.tol = *f.tol;

    for (double a : cfg.spec.grid.alphas) {
        if (!(a >= 0.0)) spe::fail(spe::ErrorKind::usage, fmt::format("grid alpha must be >= 0, got {}", a));
    }
    for (double r : cfg.spec.grid.l1_ratios) {
        if (!(r >= 0.0 && r <= 1.0)) spe::fail(spe::ErrorKind::usage, fmt::format("grid l1_ratio must lie in [0,1], got {}", r));
    }
    cfg.spec.grid.validate();
    for (int m : cfg.spec.grid.max_iters) {
        if (m < 1) spe::fail(spe::ErrorKind::usage, fmt::format("grid max_iter must be >= 1, got {}", m));
    }
    return cfg;
}

/// "1..10", "3,5,7" or a mix such as "1..3,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_seed(item, "--seeds"));
        } else {
            const auto lo = parse_seed(item.substr(0, dots), "--seeds");
            const auto hi = parse_seed(item.substr(dots + 2), "--seeds");
            if (hi < lo) spe::fail(spe::ErrorKind::usage, fmt::format("--seeds: empty range '{}'", item));
            if (hi - lo > 100000) spe::fail(spe::ErrorKind::usage, fmt::format("--seeds: range '{}' too large", item));
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
        }
    }
    return out;
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) spe::fail(spe::ErrorKind::usage, fmt::format("cannot open {} for writing", path));
    out << text;
}

int exit_code_for(const spe::Error& e)
{
    switch (e.kind()) {
        case spe::ErrorKind::usage:
        case spe::ErrorKind::not_found: return exit_usage;
        case spe::ErrorKind::data:
        case spe::ErrorKind::numeric: break;
    }
    return exit_data;
}

int cmd_validate(const std::string& path)
{
    const auto scan = spe::scan_dataset(spe::read_text_file(path), path);
    for (const auto& p : scan.problems) std::cout << "error: " << p << '\n';
    if (!scan.problems.empty()) {
        std::cout << fmt::format("{}: {} problem(s), {} valid records\n", path, scan.problems.size(),
                                 scan.dataset.size());
        return exit_data;
    }
    for (std::size_t i = 0; i < scan.dataset.size(); ++i) {
        const auto& r = scan.dataset.records[i];
        std::cout << fmt::format("row {}: {} ok (story_points {}, velocity {}, actual_effort {})\n", i + 1,
                                 r.project_id, r.story_points, r.velocity, r.actual_effort);
    }
    std::cout << fmt::format("{}: {} records\n", path, scan.dataset.size());
    return exit_ok;
}

void print_report(const spe::EvaluationReport& r)
{
    std::cout << fmt::format("  scale      {}\n", spe::scale_name(r.scale));
    std::cout << fmt::format("  n          {}\n", r.n);
    std::cout << fmt::format("  MSE        {:.6f}\n  RMSE       {:.6f}\n", r.mse, r.rmse);
    std::cout << fmt::format("  MMRE       {:.4f}\n  MMER       {:.4f}\n", r.mmre, r.mmer);
    std::cout << fmt::format("  MdMRE      {:.4f}\n  MdMER      {:.4f}\n", r.mdmre, r.mdmer);
    std::cout << fmt::format("  PRED(8%)   {:.2f}\n  PRED(25%)  {:.2f}\n", r.pred8, r.pred25);
    std::cout << fmt::format("  R²         {:.4f}\n", r.r_squared);
}

int cmd_fit(const CliConfig& cfg, const std::string& model, const std::string& tune, const std::string& out_path,
            const std::string& scores_csv)
{
    auto spec = cfg.spec;
    spec.model_kind = model == "lasso" ? spe::ModelKind::lasso : spe::ModelKind::elastic_net;
    spec.tuning = tune == "grid" ? spe::Tuning::grid_search : spe::Tuning::default_params;

    const auto data = spe::load_dataset(cfg.dataset_path);
    const auto art = spe::run_scenario(data, spec);

    spe::SavedModel saved{spec.model_kind, art.chosen_config, art.fitted, art.normalization};
    spe::save_model(saved, out_path);
    if (!scores_csv.empty() && art.search) write_output(scores_csv, spe::grid_scores_csv(*art.search));

    const auto& c = art.chosen_config;
    std::cout << fmt::format("{} ({} records, seed {}, {} train / {} test)\n", spe::scenario_label(spec),
                             data.size(), spec.split_seed, art.train_indices.size(), art.test_indices.size());
    std::cout << fmt::format("hyperparameters: alpha {} l1_ratio {} max_iter {}\n", c.alpha, c.l1_ratio, c.max_iter);
    if (art.search) {
        std::cout << fmt::format("cv mean MSE {:.6g} over {} candidates ({} skipped)\n", art.search->best_cv_score,
                                 art.search->all_scores.size(), art.search->skipped.size());
    }
    std::cout << fmt::format("weights: story_points {:.6f} velocity {:.6f} intercept {:.6f} ({} after {} sweeps)\n",
                             art.fitted.weights[0], art.fitted.weights[1], art.fitted.intercept,
                             art.fitted.converged ? "converged" : "not converged", art.fitted.n_sweeps_used);
    std::cout << "test report:\n";
    print_report(art.report);
    if (art.other_scale_report) {
        print_report(*art.other_scale_report);
    } else {
        std::cout << "  other scale unavailable: " << art.other_scale_error << '\n';
    }
    std::cout << "model written to " << out_path << '\n';
    return exit_ok;
}

int cmd_reproduce(const CliConfig& cfg, const std::string& seeds_text, const std::string& out_path, bool strict)
{
    const auto data = spe::load_dataset(cfg.dataset_path);
    const auto seeds = parse_seed_list(seeds_text);
    const auto rep = spe::reproduce_tables(data, seeds, cfg.spec, nullptr);
    write_output(out_path, spe::render(rep, cfg.format));
    for (const auto& c : rep.checks) {
        std::cerr << fmt::format("[{}] {}: {}\n", spe::check_status_name(c.status), c.name, c.detail);
    }
    if (strict && !rep.hard_checks_pass()) return exit_tolerance;
    return exit_ok;
}

int cmd_estimate(const std::string& model_file, double story_points, double velocity)
{
    const double effort = spe::estimate(model_file, story_points, velocity);
    std::cout << fmt::format("estimated effort: {:.4f}\n", effort);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Story-point effort estimation with LASSO and Elastic Net regression"};
    app.require_subcommand(1);

    CommonFlags fit_flags, repro_flags;

    auto* validate = app.add_subcommand("validate", "check a dataset CSV and report per-row problems");
    std::string validate_path;
    validate->add_option("dataset", validate_path, "dataset CSV")->required();

    auto* fit = app.add_subcommand("fit", "train one model, evaluate on the held-out split, save it as JSON");
    add_common(*fit, fit_flags, true);
    std::string model = "lasso", tune = "default", model_out = "model.json", scores_csv;
    fit->add_option("--model", model, "lasso or elastic_net")->check(CLI::IsMember({"lasso", "elastic_net"}));
    fit->add_option("--tune", tune, "default parameters or grid search")->check(CLI::IsMember({"default", "grid"}));
    fit->add_option("--out", model_out, "model JSON path");
    fit->add_option("--scores-csv", scores_csv, "dump every grid candidate's CV scores here");
    fit->add_option("--format", fit_flags.format, "unused by fit; accepted for config parity")
        ->check(CLI::IsMember({"md", "csv", "json"}));

    auto* reproduce = app.add_subcommand("reproduce", "run the default-vs-tuned comparison and render the report");
    add_common(*reproduce, repro_flags, true);
    std::string seeds_text, report_out;
    bool strict = false;
    reproduce->add_option("--seeds", seeds_text, "appendix seeds, e.g. 1..10 or 3,5,7");
    reproduce->add_option("--format", repro_flags.format, "report format")->check(CLI::IsMember({"md", "csv", "json"}));
    reproduce->add_option("--out", report_out, "report path (default stdout)");
    reproduce->add_flag("--strict", strict, "exit 3 when a reproduction tolerance is missed");

    auto* est = app.add_subcommand("estimate", "estimate effort for a new project with a saved model");
    std::string model_file;
    double story_points = 0.0, velocity = 0.0;
    est->add_option("--model-file", model_file, "model JSON written by fit")->required();
    est->add_option("--story-points", story_points, "total story points")->required();
    est->add_option("--velocity", velocity, "project velocity")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*validate) return cmd_validate(validate_path);
        if (*fit) return cmd_fit(resolve(fit_flags), model, tune, model_out, scores_csv);
        if (*reproduce) return cmd_reproduce(resolve(repro_flags), seeds_text, report_out, strict);
        if (*est) return cmd_estimate(model_file, story_points, velocity);
    } catch (const spe::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_usage;
}
