#pragma once

#include <spe/error.hpp>
#include <spe/linear_model.hpp>
#include <spe/metrics.hpp>
#include <spe/random.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

namespace spe {

struct HyperParamGrid
{
    std::vector<double> alphas{0.0001, 0.001, 0.01, 0.1, 1.0};
    std::vector<double> l1_ratios{0.001, 0.25, 0.5, 0.75, 1.0};
    std::vector<int> max_iters{25, 100, 1000};
    double tol = 1e-4;  // solver stopping tolerance shared by every candidate, not searched

    void validate() const
    {
        if (alphas.empty() || l1_ratios.empty() || max_iters.empty()) {
            fail(ErrorKind::usage, "hyperparameter grid lists must be non-empty");
        }
        if (!(tol > 0.0)) fail(ErrorKind::usage, fmt::format("grid tol must be positive, got {}", tol));
    }

    bool operator==(const HyperParamGrid&) const = default;
};

/// Candidates in enumeration order: alphas outer, l1_ratios middle, max_iters inner.
/// LASSO ignores l1_ratios, so each (alpha, max_iter) pair appears once with l1_ratio = 1.
inline std::vector<ModelConfig> enumerate_candidates(const HyperParamGrid& grid, ModelKind kind,
                                                     const ModelConfig& base = {})
{
    grid.validate();
    const std::vector<double> lasso_ratio{1.0};
    const auto& ratios = kind == ModelKind::lasso ? lasso_ratio : grid.l1_ratios;
    std::vector<ModelConfig> out;
    out.reserve(grid.alphas.size() * ratios.size() * grid.max_iters.size());
    for (double a : grid.alphas) {
        for (double r : ratios) {
            for (int it : grid.max_iters) {
                ModelConfig c = base;
                c.alpha = a;
                c.l1_ratio = r;
                c.max_iter = it;
                out.push_back(c);
            }
        }
    }
    return out;
}

using Folds = std::vector<std::vector<std::size_t>>;

/// Seeded permutation of 0..n-1 cut into k contiguous folds. The first n % k
/// folds hold one extra index.
inline Folds kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed)
{
    if (k < 2) fail(ErrorKind::usage, fmt::format("k-fold needs k >= 2, got {}", k));
    if (k > n) fail(ErrorKind::usage, fmt::format("k-fold needs k <= n, got k = {} for n = {}", k, n));
    const auto perm = seeded_permutation(n, seed);
    Folds folds(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                        perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

struct CvScore
{
    double mean_mse = 0.0;
    std::vector<double> per_fold;

    bool operator==(const CvScore&) const = default;
};

inline CvScore cross_val_score(const DesignMatrix& data, const ModelConfig& cfg, const Folds& folds,
                               ModelKind kind, std::ostream* warn = &std::cerr)
{
    CvScore score;
    score.per_fold.reserve(folds.size());
    std::vector<char> held(data.rows);
    for (const auto& fold : folds) {
        std::fill(held.begin(), held.end(), 0);
        for (std::size_t i : fold) held[i] = 1;
        std::vector<std::size_t> train_idx;
        train_idx.reserve(data.rows - fold.size());
        for (std::size_t i = 0; i < data.rows; ++i) {
            if (!held[i]) train_idx.push_back(i);
        }
        const auto train = data.subset(train_idx);
        const auto valid = data.subset(fold);
        const auto coeffs = fit(kind, train, cfg, warn);
        const auto pred = predict(coeffs, valid);
        score.per_fold.push_back(mse(valid.y, pred));
    }
    double s = 0.0;
    for (double v : score.per_fold) s += v;
    score.mean_mse = s / static_cast<double>(score.per_fold.size());
    return score;
}

inline CvScore cross_val_score(const DesignMatrix& data, const ModelConfig& cfg, std::size_t k,
                               std::uint64_t seed, ModelKind kind, std::ostream* warn = &std::cerr)
{
    return cross_val_score(data, cfg, kfold_indices(data.rows, k, seed), kind, warn);
}

struct CandidateScore
{
    std::size_t index = 0;  // position in enumeration order
    ModelConfig config;
    CvScore score;
    int unconverged_fits = 0;
};

struct SkippedCandidate
{
    std::size_t index = 0;
    ModelConfig config;
    std::string reason;
};

struct GridSearchResult
{
    ModelConfig best_config;
    double best_cv_score = 0.0;
    std::size_t best_index = 0;
    std::vector<CandidateScore> all_scores;
    std::vector<SkippedCandidate> skipped;
};

/// Exhaustive grid search scored by mean validation MSE over one shared fold
/// assignment. The winner is the first candidate in enumeration order attaining
/// the minimum. `threads` = 0 uses the hardware concurrency; the result does not
/// depend on the thread count.
inline GridSearchResult grid_search(const DesignMatrix& data, const HyperParamGrid& grid, std::size_t k,
                                    std::uint64_t seed, ModelKind kind, unsigned threads = 1,
                                    std::ostream* warn = &std::cerr)
{
    ModelConfig base;
    base.seed = seed;
    base.tol = grid.tol;
    const auto candidates = enumerate_candidates(grid, kind, base);
    const auto folds = kfold_indices(data.rows, k, seed);

    struct Slot
    {
        std::optional<CandidateScore> ok;
        std::optional<std::string> error;
    };
    std::vector<Slot> slots(candidates.size());

    auto evaluate = [&](std::size_t i) {
        // Convergence warnings are counted per candidate rather than echoed per fit.
        std::ostringstream sink;
        try {
            CandidateScore cs;
            cs.index = i;
            cs.config = candidates[i];
            cs.score = cross_val_score(data, candidates[i], folds, kind, &sink);
            const std::string text = sink.str();
            cs.unconverged_fits = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
            slots[i].ok = std::move(cs);
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, candidates.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < candidates.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < candidates.size(); i = next++) evaluate(i);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Reduction in enumeration order.
    GridSearchResult res;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].error) {
            res.skipped.push_back({i, candidates[i], *slots[i].error});
            if (warn) *warn << fmt::format("warning: skipping candidate {} ({})\n", i, *slots[i].error);
            continue;
        }
        res.all_scores.push_back(std::move(*slots[i].ok));
        const auto& cs = res.all_scores.back();
        if (!best || cs.score.mean_mse < res.all_scores[*best].score.mean_mse) {
            best = res.all_scores.size() - 1;
        }
    }
    if (!best) fail(ErrorKind::numeric, "grid search: every candidate failed");
    res.best_config = res.all_scores[*best].config;
    res.best_cv_score = res.all_scores[*best].score.mean_mse;
    res.best_index = res.all_scores[*best].index;
    return res;
}

/// all_scores as CSV: one row per candidate, per-fold MSEs in trailing columns.
inline std::string grid_scores_csv(const GridSearchResult& res)
{
    std::size_t max_folds = 0;
    for (const auto& cs : res.all_scores) max_folds = std::max(max_folds, cs.score.per_fold.size());
    std::string out = "index,alpha,l1_ratio,max_iter,mean_mse,unconverged_fits";
    for (std::size_t f = 0; f < max_folds; ++f) out += fmt::format(",fold{}", f + 1);
    out += '\n';
    for (const auto& cs : res.all_scores) {
        out += fmt::format("{},{},{},{},{},{}", cs.index, cs.config.alpha, cs.config.l1_ratio,
                           cs.config.max_iter, cs.score.mean_mse, cs.unconverged_fits);
        for (double v : cs.score.per_fold) out += fmt::format(",{}", v);
        out += '\n';
    }
    return out;
}

} // namespace spe
