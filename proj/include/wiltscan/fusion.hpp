#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiltscan/error.hpp"
#include "wiltscan/forest.hpp"
#include "wiltscan/labels.hpp"
#include "wiltscan/pipeline.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

// A named block of feature columns, the unit of backward elimination.
struct FeatureGroup {
    std::string name;
    std::vector<std::size_t> columns; // into GroupedFeatures::features
};

struct GroupedFeatures {
    FeatureMatrix features;
    std::vector<FeatureGroup> groups; // declared order
    std::vector<std::string> plot_ids;
    std::vector<TimePoint> time_points;
    std::vector<int> wilt_scores;
};

namespace detail {

// Sensor a feature group draws from.
inline std::string group_sensor(const std::string& group) {
    if (group == "vi_multispectral" || group == "vi_rgb_based") return "multispectral";
    if (group == "vi_hyperspectral") return "hyperspectral";
    if (group == "growth_stage") return "";
    return group;
}

inline bool group_selects(const std::string& group, const std::string& column) {
    std::string sensor = group_sensor(group);
    auto has_prefix = [&](const std::string& p) {
        return column.size() > p.size() && column.compare(0, p.size(), p) == 0;
    };
    if (group == "vi_multispectral") {
        if (!has_prefix("multispectral_vi_")) return false;
        return !is_visible_only(vi_from_string(column.substr(17)));
    }
    if (group == "vi_rgb_based") {
        if (!has_prefix("multispectral_vi_")) return false;
        return is_visible_only(vi_from_string(column.substr(17)));
    }
    if (group == "vi_hyperspectral") return has_prefix("hyperspectral_vi_");
    // plain sensor group: its band means, not its indices
    return has_prefix(sensor + "_") && column.find("_vi_") == std::string::npos;
}

} // namespace detail

// Column-wise concatenation of the requested groups, in declared order.
// Growth stage, when requested, becomes one trailing ordinal column.
inline GroupedFeatures assemble_feature_groups(const PlotDataset& dataset,
                                               const std::vector<std::string>& group_names,
                                               bool include_growth_stage,
                                               ExtractOptions options = {}) {
    if (group_names.empty()) throw ConfigError("assemble_feature_groups: no groups requested");
    std::set<std::string> sensors;
    for (const auto& g : group_names) {
        std::string s = detail::group_sensor(g);
        if (s.empty()) throw ConfigError("growth_stage is a flag, not a feature group name");
        sensors.insert(s);
    }
    options.sensors = sensors;
    ExtractedFeatures ex = extract_features(dataset, options);
    if (!ex.failures.empty())
        throw DataError("missing modality while assembling feature groups: " + ex.failures.front());

    GroupedFeatures out;
    out.plot_ids = ex.plot_ids;
    out.time_points = ex.time_points;
    out.wilt_scores = ex.wilt_scores;
    out.features.rows = ex.features.rows;

    for (const auto& gname : group_names) {
        FeatureGroup group;
        group.name = gname;
        std::vector<std::size_t> src_cols;
        for (std::size_t c = 0; c < ex.features.cols(); ++c)
            if (detail::group_selects(gname, ex.features.names[c])) src_cols.push_back(c);
        if (src_cols.empty())
            throw DataError("feature group '" + gname + "' selects no columns");
        for (auto c : src_cols) {
            group.columns.push_back(out.features.names.size());
            out.features.names.push_back(ex.features.names[c]);
        }
        out.groups.push_back(std::move(group));
    }

    // fill data row-major in one pass
    std::vector<std::size_t> src_order;
    for (const auto& gname : group_names)
        for (std::size_t c = 0; c < ex.features.cols(); ++c)
            if (detail::group_selects(gname, ex.features.names[c])) src_order.push_back(c);
    std::size_t width = src_order.size() + (include_growth_stage ? 1 : 0);
    out.features.data.resize(ex.features.rows * width);
    for (std::size_t r = 0; r < ex.features.rows; ++r)
        for (std::size_t i = 0; i < src_order.size(); ++i)
            out.features.data[r * width + i] = ex.features.at(r, src_order[i]);

    if (include_growth_stage) {
        FeatureGroup group;
        group.name = "growth_stage";
        group.columns.push_back(out.features.names.size());
        out.features.names.push_back("growth_stage");
        for (std::size_t r = 0; r < ex.features.rows; ++r)
            out.features.data[r * width + width - 1] =
                static_cast<double>(growth_stage_code(ex.growth_stages[r]));
        out.groups.push_back(std::move(group));
    }
    out.features.validate();
    return out;
}

struct EliminationStep {
    std::string removed_group;
    double mean_accuracy = 0;
};

struct EliminationTrace {
    double initial_accuracy = 0;
    std::vector<EliminationStep> steps;
    std::vector<std::string> final_groups;
    double final_accuracy = 0;
    bool strict = true;
};

// Greedy backward elimination over feature groups. Within one step every
// candidate removal is scored on the same fold assignment. Strict mode
// requires a removal to improve accuracy; non-strict also accepts ties.
inline EliminationTrace backward_eliminate(const GroupedFeatures& grouped,
                                           const std::vector<int>& labels,
                                           const ForestConfig& forest, int cv_k,
                                           bool strict = true) {
    if (grouped.groups.size() < 2)
        throw ConfigError("backward_eliminate: need at least 2 groups");
    if (labels.size() != grouped.features.rows)
        throw DataError("backward_eliminate: label count mismatch");

    auto folds = make_folds(labels, cv_k, derive_seed(forest.seed, 0xF01D5u), true);
    auto evaluate = [&](const std::vector<std::size_t>& group_idx) {
        std::vector<std::size_t> cols;
        for (auto gi : group_idx)
            for (auto c : grouped.groups[gi].columns) cols.push_back(c);
        FeatureMatrix sub = select_columns(grouped.features, cols);
        ForestConfig cfg = forest;
        std::uint64_t key = 0xcbf29ce484222325ULL;
        for (auto gi : group_idx) key = (key ^ (gi + 1)) * 0x100000001b3ULL;
        cfg.seed = derive_seed(forest.seed, key);
        return cross_validate_with_folds(sub, labels, folds, cv_k, cfg).mean_accuracy;
    };

    std::vector<std::size_t> current(grouped.groups.size());
    for (std::size_t i = 0; i < current.size(); ++i) current[i] = i;

    EliminationTrace trace;
    trace.strict = strict;
    double current_acc = evaluate(current);
    trace.initial_accuracy = current_acc;

    while (current.size() > 1) {
        std::size_t best_pos = current.size();
        double best_acc = -1;
        for (std::size_t pos = 0; pos < current.size(); ++pos) {
            std::vector<std::size_t> candidate = current;
            candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(pos));
            double acc = evaluate(candidate);
            if (acc > best_acc) { // ties: earliest declared group wins
                best_acc = acc;
                best_pos = pos;
            }
        }
        bool accept = strict ? best_acc > current_acc : best_acc >= current_acc;
        if (!accept) break;
        trace.steps.push_back({grouped.groups[current[best_pos]].name, best_acc});
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(best_pos));
        current_acc = best_acc;
    }

    for (auto gi : current) trace.final_groups.push_back(grouped.groups[gi].name);
    trace.final_accuracy = current_acc;
    return trace;
}

inline nlohmann::json trace_to_json(const EliminationTrace& trace) {
    nlohmann::json j;
    j["initial_accuracy"] = trace.initial_accuracy;
    j["steps"] = nlohmann::json::array();
    for (const auto& s : trace.steps)
        j["steps"].push_back({{"removed_group", s.removed_group},
                              {"mean_accuracy", s.mean_accuracy}});
    j["final_groups"] = trace.final_groups;
    j["final_accuracy"] = trace.final_accuracy;
    j["strict"] = trace.strict;
    return j;
}

} // namespace wiltscan
