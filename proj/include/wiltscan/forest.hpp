#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiltscan/error.hpp"
#include "wiltscan/rng.hpp"
#include "wiltscan/threads.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

struct ForestConfig {
    int n_estimators = 100;
    int max_features = -1;      // -1: floor(sqrt(d)), at least 1
    int min_samples_split = 2;
    int max_depth = -1;         // -1: unbounded
    std::uint64_t seed = 0;

    void validate() const {
        if (n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
        if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
    }
};

namespace detail {

// n draws with replacement; the canonical bagging sample.
inline std::vector<std::size_t> bootstrap_sample(Rng& rng, std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::size_t>(rng.next_below(n));
    return idx;
}

struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0;
    double score = 0; // sum over children of (sum_c count_c^2) / n_child
};

// Best Gini split for one node over the given candidate features.
// Thresholds are midpoints between adjacent distinct sorted values.
// Maximizing `score` is equivalent to maximizing weighted impurity decrease.
inline Split find_best_split(const FeatureMatrix& x, const std::vector<int>& y,
                             const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& candidates, int n_classes) {
    const std::size_t n = rows.size();
    Split best;
    std::vector<std::pair<double, int>> vals(n);
    std::vector<double> left(n_classes), right(n_classes);
    for (std::size_t f : candidates) {
        for (std::size_t i = 0; i < n; ++i)
            vals[i] = {x.at(rows[i], f), y[rows[i]]};
        std::sort(vals.begin(), vals.end());
        std::fill(left.begin(), left.end(), 0.0);
        std::fill(right.begin(), right.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) right[vals[i].second] += 1.0;
        double ssl = 0, ssr = 0;
        for (int c = 0; c < n_classes; ++c) ssr += right[c] * right[c];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            int c = vals[i].second;
            ssl += 2.0 * left[c] + 1.0;
            ssr -= 2.0 * right[c] - 1.0;
            left[c] += 1.0;
            right[c] -= 1.0;
            if (vals[i + 1].first <= vals[i].first) continue;
            double nl = static_cast<double>(i + 1);
            double nr = static_cast<double>(n - i - 1);
            double score = ssl / nl + ssr / nr;
            if (!best.found || score > best.score + 1e-12) {
                best.found = true;
                best.feature = f;
                best.threshold = (vals[i].first + vals[i + 1].first) / 2.0;
                best.score = score;
            }
        }
    }
    if (best.found) {
        // require a strictly positive impurity decrease
        std::vector<double> counts(n_classes, 0.0);
        for (auto r : rows) counts[y[r]] += 1.0;
        double ss = 0;
        for (int c = 0; c < n_classes; ++c) ss += counts[c] * counts[c];
        if (best.score <= ss / static_cast<double>(n) + 1e-12) best.found = false;
    }
    return best;
}

} // namespace detail

struct TreeNode {
    int feature = -1; // -1: leaf
    double threshold = 0;
    int left = -1;
    int right = -1;
    int label = 0;
};

class DecisionTree {
public:
    // Grows a CART tree on the given rows (typically a bootstrap sample).
    void fit(const FeatureMatrix& x, const std::vector<int>& y, std::vector<std::size_t> rows,
             const ForestConfig& cfg, int n_classes, Rng& rng) {
        nodes_.clear();
        int max_feat = cfg.max_features > 0 ? cfg.max_features
                                            : std::max(1, static_cast<int>(std::sqrt(
                                                              static_cast<double>(x.cols()))));
        max_feat = std::min<int>(max_feat, static_cast<int>(x.cols()));
        build(x, y, rows, 0, rows.size(), 0, cfg, n_classes, max_feat, rng);
    }

    int predict(const double* row) const {
        int node = 0;
        while (nodes_[node].feature >= 0)
            node = row[nodes_[node].feature] < nodes_[node].threshold ? nodes_[node].left
                                                                      : nodes_[node].right;
        return nodes_[node].label;
    }

    const std::vector<TreeNode>& nodes() const { return nodes_; }

private:
    std::vector<TreeNode> nodes_;

    int build(const FeatureMatrix& x, const std::vector<int>& y, std::vector<std::size_t>& rows,
              std::size_t lo, std::size_t hi, int depth, const ForestConfig& cfg, int n_classes,
              int max_feat, Rng& rng) {
        std::vector<double> counts(n_classes, 0.0);
        for (std::size_t i = lo; i < hi; ++i) counts[y[rows[i]]] += 1.0;
        int majority = 0;
        for (int c = 1; c < n_classes; ++c)
            if (counts[c] > counts[majority]) majority = c; // ties: lowest class index
        bool pure = counts[majority] == static_cast<double>(hi - lo);

        int node_id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_[node_id].label = majority;
        if (pure || hi - lo < static_cast<std::size_t>(cfg.min_samples_split) ||
            (cfg.max_depth >= 0 && depth >= cfg.max_depth))
            return node_id;

        // sample candidate features without replacement
        std::vector<std::size_t> candidates = rng.sample_without_replacement(x.cols(), max_feat);
        std::vector<std::size_t> node_rows(rows.begin() + lo, rows.begin() + hi);
        detail::Split split = detail::find_best_split(x, y, node_rows, candidates, n_classes);
        if (!split.found) return node_id;

        // partition in place, preserving relative order
        std::stable_partition(rows.begin() + lo, rows.begin() + hi, [&](std::size_t r) {
            return x.at(r, split.feature) < split.threshold;
        });
        std::size_t mid = lo;
        while (mid < hi && x.at(rows[mid], split.feature) < split.threshold) ++mid;

        nodes_[node_id].feature = static_cast<int>(split.feature);
        nodes_[node_id].threshold = split.threshold;
        int left = build(x, y, rows, lo, mid, depth + 1, cfg, n_classes, max_feat, rng);
        int right = build(x, y, rows, mid, hi, depth + 1, cfg, n_classes, max_feat, rng);
        nodes_[node_id].left = left;
        nodes_[node_id].right = right;
        return node_id;
    }
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::size_t n_features = 0;
    int n_classes = 0;

    int predict_row(const double* row) const {
        std::vector<int> votes(n_classes, 0);
        for (const auto& t : trees) ++votes[t.predict(row)];
        int best = 0;
        for (int c = 1; c < n_classes; ++c)
            if (votes[c] > votes[best]) best = c; // ties: lowest class index
        return best;
    }
};

inline ForestModel train_random_forest(const FeatureMatrix& features, const std::vector<int>& labels,
                                       const ForestConfig& config) {
    config.validate();
    features.validate();
    if (labels.size() != features.rows)
        throw DataError("train_random_forest: label count does not match rows");
    if (features.rows == 0) throw DataError("train_random_forest: empty training set");
    for (double v : features.data)
        if (!std::isfinite(v)) throw DataError("train_random_forest: non-finite feature value");
    int n_classes = 0;
    for (int l : labels) {
        if (l < 0) throw DataError("train_random_forest: negative class index");
        n_classes = std::max(n_classes, l + 1);
    }
    std::vector<bool> present(n_classes, false);
    int distinct = 0;
    for (int l : labels)
        if (!present[l]) {
            present[l] = true;
            ++distinct;
        }
    if (distinct < 2) throw DataError("train_random_forest: single-class input");

    ForestModel model;
    model.n_features = features.cols();
    model.n_classes = n_classes;
    model.trees.resize(static_cast<std::size_t>(config.n_estimators));
    parallel_for(model.trees.size(), [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        auto rows = detail::bootstrap_sample(rng, features.rows);
        model.trees[t].fit(features, labels, std::move(rows), config, n_classes, rng);
    });
    return model;
}

inline std::vector<int> predict(const ForestModel& model, const FeatureMatrix& features) {
    if (features.cols() != model.n_features)
        throw DataError("predict: feature dimension does not match training");
    std::vector<int> out(features.rows);
    for (std::size_t r = 0; r < features.rows; ++r) out[r] = model.predict_row(features.row(r));
    return out;
}

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size()) throw DataError("accuracy: length mismatch");
    if (predicted.empty()) throw DataError("accuracy: empty input");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

// Fold assignment per row. Stratified dealing keeps per-fold class
// proportions within one sample of each other.
inline std::vector<int> make_folds(const std::vector<int>& labels, int k, std::uint64_t seed,
                                   bool stratified = true) {
    if (k < 2) throw ConfigError("make_folds: k must be >= 2");
    std::vector<int> folds(labels.size(), -1);
    Rng rng(seed);
    if (stratified) {
        int n_classes = 0;
        for (int l : labels) n_classes = std::max(n_classes, l + 1);
        for (int c = 0; c < n_classes; ++c) {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == c) rows.push_back(i);
            if (rows.empty()) continue;
            if (rows.size() < static_cast<std::size_t>(k))
                throw DataError("make_folds: class " + std::to_string(c) + " has fewer than k samples");
            rng.shuffle(rows);
            for (std::size_t i = 0; i < rows.size(); ++i)
                folds[rows[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
        }
    } else {
        if (labels.size() < static_cast<std::size_t>(k))
            throw DataError("make_folds: fewer samples than folds");
        std::vector<std::size_t> rows(labels.size());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i)
            folds[rows[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return folds;
}

struct EvalReport {
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0;
    double std_dev = 0; // sample standard deviation over folds
    std::vector<std::vector<std::size_t>> confusion; // [truth][predicted], summed over folds
    std::vector<std::string> feature_names;
    bool stratified = true;
    std::uint64_t seed = 0;
};

inline EvalReport cross_validate_with_folds(const FeatureMatrix& features,
                                            const std::vector<int>& labels,
                                            const std::vector<int>& folds, int k,
                                            const ForestConfig& config) {
    if (folds.size() != labels.size())
        throw DataError("cross_validate: fold assignment length mismatch");
    int n_classes = 0;
    for (int l : labels) n_classes = std::max(n_classes, l + 1);
    EvalReport report;
    report.feature_names = features.names;
    report.seed = config.seed;
    report.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < folds.size(); ++i)
            (folds[i] == f ? test_rows : train_rows).push_back(i);
        if (test_rows.empty() || train_rows.empty())
            throw DataError("cross_validate: empty fold " + std::to_string(f));
        FeatureMatrix xtr = select_rows(features, train_rows);
        FeatureMatrix xte = select_rows(features, test_rows);
        std::vector<int> ytr, yte;
        for (auto i : train_rows) ytr.push_back(labels[i]);
        for (auto i : test_rows) yte.push_back(labels[i]);
        ForestConfig fold_cfg = config;
        fold_cfg.seed = derive_seed(config.seed, 0xF01Du, static_cast<std::uint64_t>(f));
        ForestModel model = train_random_forest(xtr, ytr, fold_cfg);
        std::vector<int> pred = predict(model, xte);
        report.fold_accuracies.push_back(accuracy(pred, yte));
        for (std::size_t i = 0; i < pred.size(); ++i) ++report.confusion[yte[i]][pred[i]];
    }
    double sum = 0;
    for (double a : report.fold_accuracies) sum += a;
    report.mean_accuracy = sum / static_cast<double>(k);
    double ss = 0;
    for (double a : report.fold_accuracies) {
        double d = a - report.mean_accuracy;
        ss += d * d;
    }
    report.std_dev = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
    return report;
}

inline EvalReport cross_validate(const FeatureMatrix& features, const std::vector<int>& labels,
                                 int k, const ForestConfig& config, bool stratified = true) {
    auto folds = make_folds(labels, k, derive_seed(config.seed, 0xCFACEu), stratified);
    EvalReport report = cross_validate_with_folds(features, labels, folds, k, config);
    report.stratified = stratified;
    return report;
}

inline nlohmann::json report_to_json(const EvalReport& report, const ForestConfig& config) {
    nlohmann::json j;
    j["fold_accuracies"] = report.fold_accuracies;
    j["mean_accuracy"] = report.mean_accuracy;
    j["std_dev"] = report.std_dev;
    j["confusion"] = report.confusion;
    j["feature_names"] = report.feature_names;
    j["stratified"] = report.stratified;
    j["seed"] = report.seed;
    j["config"] = {{"n_estimators", config.n_estimators},
                   {"max_features", config.max_features},
                   {"min_samples_split", config.min_samples_split},
                   {"max_depth", config.max_depth}};
    return j;
}

} // namespace wiltscan
