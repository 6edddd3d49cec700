#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "wiltscan/band_select.hpp"
#include "wiltscan/synth.hpp"

using namespace wiltscan;

TEST_CASE("hyperspectral band averaging: 2151 samples to 214 bands") {
    SECTION("index ramp") {
        Spectrum s;
        for (int i = 0; i < 2151; ++i) s.values.push_back(static_cast<double>(i));
        AveragedSpectrum a = average_bands(s);
        REQUIRE(a.values.size() == 214);
        REQUIRE(a.values[0] == 5.5);                 // mean of source indices 1..10
        REQUIRE(a.values[1] == 15.5);
        REQUIRE(a.values[213] == 2135.5);            // indices 2131..2140; 2141..2149 dropped
        REQUIRE(a.source_ranges_nm[0].first == 351.0);
        REQUIRE(a.source_ranges_nm[0].second == 360.0);
        REQUIRE(a.source_ranges_nm[213].second == 2490.0);
    }
    SECTION("constant spectrum") {
        Spectrum s;
        s.values.assign(2151, 0.42);
        AveragedSpectrum a = average_bands(s);
        REQUIRE(a.values.size() == 214);
        for (double v : a.values) REQUIRE(v == Catch::Approx(0.42).margin(1e-15));
    }
    SECTION("wrong length rejected") {
        Spectrum s;
        s.values.assign(2150, 0.0);
        REQUIRE_THROWS_AS(average_bands(s), DataError);
    }
}

TEST_CASE("exhaustive search enumerates all 1023 subsets of 10 bands") {
    // two informative bands (3 and 7), the rest pure noise
    std::vector<double> mu0(10, 0.0), mu1(10, 0.0);
    mu1[3] = 2.2;
    mu1[7] = 2.2;
    auto [x, y] = synth_gaussian_features({mu0, mu1}, 1.0, 30, 501);
    ForestConfig forest;
    forest.n_estimators = 8;
    forest.seed = 13;
    auto results = exhaustive_band_search(x, y, forest, 5);
    REQUIRE(results.size() == 1023);

    std::set<std::vector<std::size_t>> distinct;
    std::size_t singles = 0;
    for (const auto& r : results) {
        REQUIRE(!r.band_subset.empty());
        REQUIRE(std::is_sorted(r.band_subset.begin(), r.band_subset.end()));
        distinct.insert(r.band_subset);
        if (r.band_subset.size() == 1) ++singles;
    }
    REQUIRE(distinct.size() == 1023);
    REQUIRE(singles == 10);

    SECTION("planted bands dominate the best subset") {
        const auto& best = best_combination(results);
        REQUIRE(std::count(best.band_subset.begin(), best.band_subset.end(), 3) == 1);
        REQUIRE(std::count(best.band_subset.begin(), best.band_subset.end(), 7) == 1);
    }
    SECTION("per-size summary is consistent") {
        auto sizes = summarize_by_size(results);
        REQUIRE(sizes.size() == 10);
        for (const auto& s : sizes) {
            REQUIRE(s.min_accuracy <= s.mean_accuracy + 1e-12);
            REQUIRE(s.mean_accuracy <= s.max_accuracy + 1e-12);
            REQUIRE(s.best_subset.size() == s.size);
        }
    }
    SECTION("non-10-band input rejected unless overridden") {
        FeatureMatrix sub = select_columns(x, {0, 1, 2});
        REQUIRE_THROWS_AS(exhaustive_band_search(sub, y, forest, 5), ConfigError);
        auto small = exhaustive_band_search(sub, y, forest, 5, true);
        REQUIRE(small.size() == 7);
    }
    SECTION("deterministic rerun") {
        auto again = exhaustive_band_search(x, y, forest, 5);
        for (std::size_t i = 0; i < results.size(); ++i) {
            REQUIRE(again[i].band_subset == results[i].band_subset);
            REQUIRE(again[i].mean_accuracy == results[i].mean_accuracy);
        }
    }
}

TEST_CASE("genetic search keeps valid chromosomes and a monotone elite trace") {
    std::vector<double> mu0(20, 0.0), mu1(20, 0.0);
    mu1[4] = 2.0;
    mu1[11] = 2.0;
    auto [x, y] = synth_gaussian_features({mu0, mu1}, 1.0, 25, 321);
    ForestConfig forest;
    forest.n_estimators = 5;
    forest.seed = 7;
    GaConfig ga;
    ga.population_size = 10;
    ga.generations = 4;
    ga.subset_size = 4;
    ga.seed = 99;

    GaResult res = ga_select_bands(x, y, ga, forest, 5);
    REQUIRE(res.selected.size() == 4);
    REQUIRE(std::is_sorted(res.selected.begin(), res.selected.end()));
    REQUIRE(std::set<std::size_t>(res.selected.begin(), res.selected.end()).size() == 4);
    REQUIRE(res.fitness_trace.size() == 5); // init + 4 generations
    for (std::size_t i = 1; i < res.fitness_trace.size(); ++i)
        REQUIRE(res.fitness_trace[i] >= res.fitness_trace[i - 1]);
    REQUIRE(res.best_fitness == res.fitness_trace.back());

    SECTION("zero generations returns the best of the initial population") {
        GaConfig g0 = ga;
        g0.generations = 0;
        GaResult r0 = ga_select_bands(x, y, g0, forest, 5);
        REQUIRE(r0.fitness_trace.size() == 1);
    }
    SECTION("deterministic per seed") {
        GaResult again = ga_select_bands(x, y, ga, forest, 5);
        REQUIRE(again.selected == res.selected);
        REQUIRE(again.fitness_trace == res.fitness_trace);
    }
    SECTION("unbalanced labels warn") {
        std::vector<int> skewed = y;
        skewed[0] = 1; // was 0
        GaResult r = ga_select_bands(x, skewed, ga, forest, 5);
        REQUIRE(!r.warnings.empty());
    }
    SECTION("config validation") {
        GaConfig bad = ga;
        bad.subset_size = 21;
        REQUIRE_THROWS_AS(ga_select_bands(x, y, bad, forest, 5), ConfigError);
        bad = ga;
        bad.population_size = 1;
        REQUIRE_THROWS_AS(ga_select_bands(x, y, bad, forest, 5), ConfigError);
        bad = ga;
        bad.elitism = 10;
        REQUIRE_THROWS_AS(ga_select_bands(x, y, bad, forest, 5), ConfigError);
    }
}
