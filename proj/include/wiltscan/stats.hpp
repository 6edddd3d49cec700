#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wiltscan/error.hpp"
#include "wiltscan/forest.hpp"
#include "wiltscan/labels.hpp"
#include "wiltscan/pipeline.hpp"
#include "wiltscan/special.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

struct TTestResult {
    double t_statistic = 0;
    double degrees_of_freedom = 0;
    double p_value = 1;
    std::string stars; // "", "*", "**", "***"
};

// Strict thresholds: p < 0.05 one star, p < 0.01 two, p < 0.001 three.
inline std::string significance_stars(double p) {
    if (p < 0 || p > 1) throw DataError("significance_stars: p outside [0,1]");
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

struct TTestOptions {
    bool pooled_variance = false; // classic equal-variance two-sample test
};

// Welch's two-sample t-test (unequal variances), two-sided, with
// Welch-Satterthwaite degrees of freedom. Zero variance on both sides with
// equal means gives t = 0 by convention.
inline TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b,
                                const TTestOptions& opt = {}) {
    if (a.size() < 2 || b.size() < 2)
        throw DataError("welch_t_test: each sample needs at least 2 values");
    auto mean_var = [](const std::vector<double>& s) {
        double m = 0;
        for (double v : s) m += v;
        m /= static_cast<double>(s.size());
        double ss = 0;
        for (double v : s) {
            double d = v - m;
            ss += d * d;
        }
        return std::pair<double, double>{m, ss / static_cast<double>(s.size() - 1)};
    };
    auto [ma, va] = mean_var(a);
    auto [mb, vb] = mean_var(b);
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());

    TTestResult r;
    if (va == 0.0 && vb == 0.0) {
        if (ma != mb)
            throw DataError("welch_t_test: zero variance in both samples with unequal means");
        r.t_statistic = 0;
        r.degrees_of_freedom = na + nb - 2;
        r.p_value = 1;
        r.stars = "";
        return r;
    }

    if (opt.pooled_variance) {
        double df = na + nb - 2;
        double sp2 = ((na - 1) * va + (nb - 1) * vb) / df;
        double se = std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
        r.t_statistic = (ma - mb) / se;
        r.degrees_of_freedom = df;
    } else {
        double sea = va / na, seb = vb / nb;
        double se = std::sqrt(sea + seb);
        r.t_statistic = (ma - mb) / se;
        r.degrees_of_freedom = (sea + seb) * (sea + seb) /
                               (sea * sea / (na - 1) + seb * seb / (nb - 1));
    }
    r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
    r.stars = significance_stars(r.p_value);
    return r;
}

// Per-timepoint feature matrices with one binary label per plot, carried
// back from the final time point.
struct EarlyDetectionDataset {
    std::vector<TimePoint> time_points; // configured order, ends at T3
    std::map<TimePoint, FeatureMatrix> features; // identical row order across time points
    std::vector<int> labels;            // 0 tolerant, 1 susceptible, one per plot
    std::vector<std::string> plot_ids;
    std::vector<int> original_t3_scores;
};

struct EarlyDetectionOptions {
    ExtractOptions extract;
    std::uint64_t balance_seed = 0;
};

// T3 wilt scores regrouped three-class; moderates dropped; the remaining
// plots get binary labels that are copied onto their T1/T2 rows; classes are
// then balanced by downsampling plot ids (the same plots survive at every
// time point).
inline EarlyDetectionDataset relabel_early(const PlotDataset& dataset,
                                           const EarlyDetectionOptions& opt = {}) {
    const std::vector<TimePoint> tps = {TimePoint::T1, TimePoint::T2, TimePoint::T3};
    ExtractedFeatures ex = extract_features(dataset, opt.extract);
    if (!ex.failures.empty())
        throw DataError("relabel_early: extraction failed: " + ex.failures.front());

    std::map<std::string, std::map<TimePoint, std::size_t>> by_plot;
    for (std::size_t i = 0; i < ex.plot_ids.size(); ++i)
        by_plot[ex.plot_ids[i]][ex.time_points[i]] = i;

    std::vector<std::string> plots;
    std::vector<int> labels;
    std::vector<int> t3_scores;
    for (const auto& [plot, rows] : by_plot) {
        auto t3 = rows.find(TimePoint::T3);
        if (t3 == rows.end())
            throw DataError("relabel_early: plot " + plot + " has no T3 observation");
        for (TimePoint tp : tps)
            if (!rows.count(tp))
                throw DataError("relabel_early: plot " + plot + " missing time point " +
                                to_string(tp));
        int score = ex.wilt_scores[t3->second];
        int three = regroup_label(score, LabelScheme::ThreeClass);
        if (three == 1) continue; // drop the moderate class
        plots.push_back(plot);
        labels.push_back(three == 0 ? 0 : 1);
        t3_scores.push_back(score);
    }
    std::size_t tolerant = 0, susceptible = 0;
    for (int l : labels) (l == 0 ? tolerant : susceptible)++;
    if (tolerant == 0 || susceptible == 0)
        throw DataError("relabel_early: one class is empty after extreme-class filtering");

    // balance by plot so labels stay constant across time points
    std::size_t keep_per_class = std::min(tolerant, susceptible);
    Rng rng(derive_seed(opt.balance_seed, 0xBA1Au));
    std::vector<std::size_t> keep;
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) members.push_back(i);
        auto picks = rng.sample_without_replacement(members.size(), keep_per_class);
        for (auto p : picks) keep.push_back(members[p]);
    }
    std::sort(keep.begin(), keep.end());

    EarlyDetectionDataset ed;
    ed.time_points = tps;
    for (auto i : keep) {
        ed.plot_ids.push_back(plots[i]);
        ed.labels.push_back(labels[i]);
        ed.original_t3_scores.push_back(t3_scores[i]);
    }
    for (TimePoint tp : tps) {
        std::vector<std::size_t> rows;
        for (auto i : keep) rows.push_back(by_plot[plots[i]][tp]);
        ed.features[tp] = select_rows(ex.features, rows);
    }
    return ed;
}

struct FeatureTTest {
    std::string feature;
    TTestResult result;
};

// One Welch test per feature column at the given time point, bands ordered
// by center then indices by name (the extraction column order already is
// bands-then-indices).
inline std::vector<FeatureTTest> bandwise_ttest_report(const EarlyDetectionDataset& ed,
                                                       TimePoint tp,
                                                       const TTestOptions& opt = {}) {
    auto it = ed.features.find(tp);
    if (it == ed.features.end())
        throw DataError("bandwise_ttest_report: no features for " + to_string(tp));
    const FeatureMatrix& x = it->second;
    std::vector<FeatureTTest> out;
    out.reserve(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        std::vector<double> a, b;
        for (std::size_t r = 0; r < x.rows; ++r)
            (ed.labels[r] == 0 ? a : b).push_back(x.at(r, c));
        out.push_back({x.names[c], welch_t_test(a, b, opt)});
    }
    return out;
}

enum class EarlyFeatureSet { Bands, Indices, VisibleOnly };

inline std::string to_string(EarlyFeatureSet s) {
    switch (s) {
        case EarlyFeatureSet::Bands: return "bands";
        case EarlyFeatureSet::Indices: return "indices";
        case EarlyFeatureSet::VisibleOnly: return "visible-only";
    }
    return "?";
}

struct EarlyAccuracyRow {
    TimePoint time_point;
    EarlyFeatureSet feature_set;
    double mean_accuracy = 0;
    double std_dev = 0;
};

namespace detail {

inline std::vector<std::size_t> early_feature_columns(const FeatureMatrix& x, EarlyFeatureSet set) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const std::string& n = x.names[c];
        bool is_vi = n.find("_vi_") != std::string::npos;
        switch (set) {
            case EarlyFeatureSet::Bands:
                if (!is_vi && n != "growth_stage" && n.rfind("thermal", 0) != 0) cols.push_back(c);
                break;
            case EarlyFeatureSet::Indices:
                if (is_vi) cols.push_back(c);
                break;
            case EarlyFeatureSet::VisibleOnly:
                // the camera's RGB triple: 650 / 560 / 475 nm band means
                if (!is_vi && (n.ends_with("_650") || n.ends_with("_560") || n.ends_with("_475")))
                    cols.push_back(c);
                break;
        }
    }
    return cols;
}

} // namespace detail

// Cross-validated discriminability per time point and feature set.
inline std::vector<EarlyAccuracyRow> early_detection_report(
    const EarlyDetectionDataset& ed, const std::vector<EarlyFeatureSet>& feature_sets,
    const ForestConfig& forest, int cv_k) {
    if (feature_sets.empty()) throw ConfigError("early_detection_report: no feature sets");
    std::vector<EarlyAccuracyRow> out;
    for (TimePoint tp : ed.time_points) {
        const FeatureMatrix& x = ed.features.at(tp);
        for (EarlyFeatureSet set : feature_sets) {
            auto cols = detail::early_feature_columns(x, set);
            if (cols.empty())
                throw DataError("early_detection_report: feature set " + to_string(set) +
                                " selects no columns");
            FeatureMatrix sub = select_columns(x, cols);
            ForestConfig cfg = forest;
            cfg.seed = derive_seed(forest.seed, static_cast<std::uint64_t>(tp),
                                   static_cast<std::uint64_t>(set));
            EvalReport rep = cross_validate(sub, ed.labels, cv_k, cfg);
            out.push_back({tp, set, rep.mean_accuracy, rep.std_dev});
        }
    }
    return out;
}

} // namespace wiltscan
