#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wiltscan/error.hpp"
#include "wiltscan/forest.hpp"
#include "wiltscan/rng.hpp"
#include "wiltscan/threads.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

struct AveragedSpectrum {
    std::vector<double> values; // exactly 214
    std::vector<std::pair<double, double>> source_ranges_nm; // [first, last] per averaged band
};

// 2151 hyperspectral samples (350-2500 nm at 1 nm) down to 214 averaged
// bands: drop the first and last sample, average consecutive groups of ten,
// discard the trailing 9-sample remainder.
inline AveragedSpectrum average_bands(const Spectrum& spectrum) {
    if (spectrum.values.size() != 2151)
        throw DataError("average_bands: expected 2151 bands, got " +
                        std::to_string(spectrum.values.size()));
    AveragedSpectrum out;
    out.values.reserve(214);
    out.source_ranges_nm.reserve(214);
    for (std::size_t g = 0; g < 214; ++g) {
        std::size_t start = 1 + g * 10; // skip the first source band
        double sum = 0;
        for (std::size_t i = 0; i < 10; ++i) sum += spectrum.values[start + i];
        out.values.push_back(sum / 10.0);
        out.source_ranges_nm.emplace_back(350.0 + static_cast<double>(start),
                                          350.0 + static_cast<double>(start + 9));
    }
    return out;
}

struct GaConfig {
    int population_size = 50;
    int generations = 30;
    int tournament_size = 3;
    double crossover_rate = 0.9;
    double mutation_rate = -1; // -1: 1 / subset_size
    int subset_size = 5;
    int elitism = 1;
    std::uint64_t seed = 0;

    void validate(std::size_t band_count) const {
        if (population_size < 2) throw ConfigError("GA population_size must be >= 2");
        if (subset_size < 1 || static_cast<std::size_t>(subset_size) > band_count)
            throw ConfigError("GA subset_size must be in [1, band count]");
        if (tournament_size < 1) throw ConfigError("GA tournament_size must be >= 1");
        if (elitism < 0 || elitism >= population_size)
            throw ConfigError("GA elitism must be in [0, population_size)");
        if (generations < 0) throw ConfigError("GA generations must be >= 0");
    }
};

struct GaResult {
    std::vector<std::size_t> selected; // sorted band indices
    std::vector<double> fitness_trace; // best fitness after init and each generation
    double best_fitness = 0;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::uint64_t chromosome_key(std::vector<std::size_t> genes) {
    std::sort(genes.begin(), genes.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto g : genes) {
        h ^= g + 1;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline void repair_duplicates(std::vector<std::size_t>& genes, std::size_t band_count, Rng& rng) {
    std::vector<std::uint8_t> used(band_count, 0);
    for (std::size_t i = 0; i < genes.size(); ++i) {
        if (used[genes[i]]) {
            std::size_t pick;
            do {
                pick = static_cast<std::size_t>(rng.next_below(band_count));
            } while (used[pick]);
            genes[i] = pick;
        }
        used[genes[i]] = 1;
    }
}

} // namespace detail

// GA-wrapped band-subset selection: chromosomes are fixed-size sets of band
// indices, fitness is the cross-validated forest accuracy restricted to those
// columns. Tournament selection, uniform index-swap crossover with duplicate
// repair, per-gene replacement mutation, elitism.
inline GaResult ga_select_bands(const FeatureMatrix& features, const std::vector<int>& labels,
                                const GaConfig& ga, const ForestConfig& forest, int cv_k) {
    const std::size_t bands = features.cols();
    ga.validate(bands);
    if (labels.size() != features.rows) throw DataError("ga_select_bands: label count mismatch");

    GaResult result;
    {
        std::map<int, std::size_t> counts;
        for (int l : labels) ++counts[l];
        std::size_t lo = labels.size(), hi = 0;
        for (const auto& [c, n] : counts) {
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        if (hi != lo)
            result.warnings.push_back("labels are unbalanced (" + std::to_string(lo) + ".." +
                                      std::to_string(hi) + " per class); fitness may be biased");
    }

    // fixed fold assignment so fitness comparisons are paired
    auto folds = make_folds(labels, cv_k, derive_seed(ga.seed, 0xF01D5u), true);

    std::map<std::vector<std::size_t>, double> cache;
    auto fitness = [&](const std::vector<std::size_t>& genes) {
        std::vector<std::size_t> sorted = genes;
        std::sort(sorted.begin(), sorted.end());
        auto it = cache.find(sorted);
        if (it != cache.end()) return it->second;
        FeatureMatrix sub = select_columns(features, sorted);
        ForestConfig cfg = forest;
        cfg.seed = derive_seed(forest.seed, detail::chromosome_key(sorted));
        double acc = cross_validate_with_folds(sub, labels, folds, cv_k, cfg).mean_accuracy;
        cache.emplace(std::move(sorted), acc);
        return acc;
    };

    const std::size_t pop_n = static_cast<std::size_t>(ga.population_size);
    const std::size_t genes_n = static_cast<std::size_t>(ga.subset_size);
    double mut_rate = ga.mutation_rate >= 0 ? ga.mutation_rate : 1.0 / static_cast<double>(genes_n);

    Rng rng(derive_seed(ga.seed, 0x6A6Au));
    std::vector<std::vector<std::size_t>> pop(pop_n);
    for (auto& ind : pop) ind = rng.sample_without_replacement(bands, genes_n);

    std::vector<double> fit(pop_n);
    auto evaluate = [&] {
        for (std::size_t i = 0; i < pop_n; ++i) fit[i] = fitness(pop[i]);
    };
    evaluate();

    auto best_index = [&] {
        std::size_t b = 0;
        for (std::size_t i = 1; i < pop_n; ++i)
            if (fit[i] > fit[b]) b = i;
        return b;
    };

    std::size_t best = best_index();
    std::vector<std::size_t> best_genes = pop[best];
    double best_fit = fit[best];
    result.fitness_trace.push_back(best_fit);

    for (int gen = 0; gen < ga.generations; ++gen) {
        std::vector<std::vector<std::size_t>> next;
        next.reserve(pop_n);
        // elitism: carry the current best individuals unchanged
        std::vector<std::size_t> order(pop_n);
        for (std::size_t i = 0; i < pop_n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });
        for (int e = 0; e < ga.elitism; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);

        auto tournament = [&]() -> const std::vector<std::size_t>& {
            std::size_t winner = static_cast<std::size_t>(rng.next_below(pop_n));
            for (int t = 1; t < ga.tournament_size; ++t) {
                std::size_t challenger = static_cast<std::size_t>(rng.next_below(pop_n));
                if (fit[challenger] > fit[winner]) winner = challenger;
            }
            return pop[winner];
        };

        while (next.size() < pop_n) {
            const auto& a = tournament();
            const auto& b = tournament();
            std::vector<std::size_t> child(genes_n);
            if (rng.next_double() < ga.crossover_rate) {
                for (std::size_t i = 0; i < genes_n; ++i)
                    child[i] = rng.next_double() < 0.5 ? a[i] : b[i];
            } else {
                child = a;
            }
            for (std::size_t i = 0; i < genes_n; ++i)
                if (rng.next_double() < mut_rate)
                    child[i] = static_cast<std::size_t>(rng.next_below(bands));
            detail::repair_duplicates(child, bands, rng);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        evaluate();
        std::size_t gb = best_index();
        if (fit[gb] > best_fit) {
            best_fit = fit[gb];
            best_genes = pop[gb];
        }
        result.fitness_trace.push_back(best_fit);
    }

    std::sort(best_genes.begin(), best_genes.end());
    result.selected = std::move(best_genes);
    result.best_fitness = best_fit;
    return result;
}

struct CombinationResult {
    std::vector<std::size_t> band_subset; // sorted band indices
    double mean_accuracy = 0;
    double std_dev = 0;
};

// All 2^B - 1 non-empty band subsets evaluated with a shared fold
// assignment. B must be 10 (the multispectral camera) unless
// allow_general_band_count is set; even then the subset count is capped.
inline std::vector<CombinationResult> exhaustive_band_search(const FeatureMatrix& features,
                                                             const std::vector<int>& labels,
                                                             const ForestConfig& forest, int cv_k,
                                                             bool allow_general_band_count = false) {
    const std::size_t bands = features.cols();
    if (!allow_general_band_count && bands != 10)
        throw ConfigError("exhaustive_band_search supports exactly 10 bands "
                          "(pass allow_general_band_count to override)");
    if (bands == 0 || bands > 20)
        throw ConfigError("exhaustive_band_search: band count exceeds the 2^20 subset cap");
    auto folds = make_folds(labels, cv_k, derive_seed(forest.seed, 0xF01D5u), true);

    const std::size_t n_subsets = (static_cast<std::size_t>(1) << bands) - 1;
    std::vector<CombinationResult> results(n_subsets);
    parallel_for(n_subsets, [&](std::size_t i) {
        std::size_t mask = i + 1;
        std::vector<std::size_t> cols;
        for (std::size_t b = 0; b < bands; ++b)
            if (mask & (static_cast<std::size_t>(1) << b)) cols.push_back(b);
        FeatureMatrix sub = select_columns(features, cols);
        ForestConfig cfg = forest;
        cfg.seed = derive_seed(forest.seed, mask);
        EvalReport rep = cross_validate_with_folds(sub, labels, folds, cv_k, cfg);
        results[i] = {std::move(cols), rep.mean_accuracy, rep.std_dev};
    });
    return results;
}

struct SizeSummary {
    std::size_t size = 0;
    double mean_accuracy = 0; // mean over subsets of this size
    double min_accuracy = 0;
    double max_accuracy = 0;
    std::vector<std::size_t> best_subset;
};

inline std::vector<SizeSummary> summarize_by_size(const std::vector<CombinationResult>& results) {
    std::map<std::size_t, SizeSummary> by_size;
    std::map<std::size_t, std::size_t> counts;
    for (const auto& r : results) {
        auto& s = by_size[r.band_subset.size()];
        if (counts[r.band_subset.size()] == 0) {
            s.size = r.band_subset.size();
            s.min_accuracy = s.max_accuracy = r.mean_accuracy;
            s.best_subset = r.band_subset;
        } else {
            s.min_accuracy = std::min(s.min_accuracy, r.mean_accuracy);
            if (r.mean_accuracy > s.max_accuracy) {
                s.max_accuracy = r.mean_accuracy;
                s.best_subset = r.band_subset;
            }
        }
        s.mean_accuracy += r.mean_accuracy;
        ++counts[r.band_subset.size()];
    }
    std::vector<SizeSummary> out;
    for (auto& [size, s] : by_size) {
        s.mean_accuracy /= static_cast<double>(counts[size]);
        out.push_back(s);
    }
    return out;
}

inline const CombinationResult& best_combination(const std::vector<CombinationResult>& results) {
    if (results.empty()) throw DataError("best_combination: no results");
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].mean_accuracy > results[best].mean_accuracy) best = i;
    return results[best];
}

} // namespace wiltscan
