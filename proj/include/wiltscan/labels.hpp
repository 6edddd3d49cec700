#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wiltscan/error.hpp"
#include "wiltscan/rng.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

// Wilt-score regrouping schemes.
//   ThreeClass: {1,2} -> 0 tolerant, {3} -> 1 moderately susceptible,
//               {4,5,6} -> 2 susceptible
//   TwoClass:   {1,2} -> 0 select, {3,4,5,6} -> 1 discard
enum class LabelScheme { Raw, ThreeClass, TwoClass };

inline std::string to_string(LabelScheme s) {
    switch (s) {
        case LabelScheme::Raw: return "raw";
        case LabelScheme::ThreeClass: return "three-class";
        case LabelScheme::TwoClass: return "two-class";
    }
    return "?";
}

inline LabelScheme label_scheme_from_string(const std::string& s) {
    if (s == "raw") return LabelScheme::Raw;
    if (s == "three-class" || s == "three") return LabelScheme::ThreeClass;
    if (s == "two-class" || s == "two") return LabelScheme::TwoClass;
    throw ConfigError("unknown label scheme: " + s);
}

inline int regroup_label(int raw_score, LabelScheme scheme) {
    if (raw_score < 1 || raw_score > 6)
        throw DataError("wilt score " + std::to_string(raw_score) + " outside 1-6");
    switch (scheme) {
        case LabelScheme::Raw: return raw_score - 1;
        case LabelScheme::ThreeClass: return raw_score <= 2 ? 0 : (raw_score == 3 ? 1 : 2);
        case LabelScheme::TwoClass: return raw_score <= 2 ? 0 : 1;
    }
    throw InternalError("regroup_label: unhandled scheme");
}

inline std::vector<int> regroup_labels(const std::vector<int>& raw_scores, LabelScheme scheme) {
    std::vector<int> out;
    out.reserve(raw_scores.size());
    for (int s : raw_scores) out.push_back(regroup_label(s, scheme));
    return out;
}

struct BalancedSubset {
    FeatureMatrix features;
    std::vector<int> labels;
    std::vector<std::size_t> row_indices; // into the input matrix, ascending
};

// Downsamples every class without replacement to the size of the least
// populated class. Selection is uniform from the seeded RNG; the retained
// rows keep their original order.
inline BalancedSubset balance_classes(const FeatureMatrix& features, const std::vector<int>& labels,
                                      std::uint64_t seed) {
    if (labels.size() != features.rows)
        throw DataError("balance_classes: label count does not match rows");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    if (by_class.size() < 2) throw DataError("balance_classes: need at least 2 classes");
    std::size_t min_count = features.rows;
    for (const auto& [cls, rows] : by_class) {
        if (rows.empty()) throw DataError("balance_classes: class with zero samples");
        min_count = std::min(min_count, rows.size());
    }
    Rng rng(seed);
    std::vector<std::size_t> keep;
    for (const auto& [cls, rows] : by_class) {
        auto picks = rng.sample_without_replacement(rows.size(), min_count);
        for (auto p : picks) keep.push_back(rows[p]);
    }
    std::sort(keep.begin(), keep.end());
    BalancedSubset out;
    out.row_indices = keep;
    out.features = select_rows(features, keep);
    out.labels.reserve(keep.size());
    for (auto i : keep) out.labels.push_back(labels[i]);
    return out;
}

// Fehr growth-stage ordinal code: VE, VC, V1..Vn, then R1..R8.
inline int growth_stage_code(const std::string& stage) {
    if (stage == "VE") return 0;
    if (stage == "VC") return 1;
    if (stage.size() >= 2 && (stage[0] == 'V' || stage[0] == 'R')) {
        int n = 0;
        for (std::size_t i = 1; i < stage.size(); ++i) {
            if (stage[i] < '0' || stage[i] > '9')
                throw DataError("cannot parse growth stage: " + stage);
            n = n * 10 + (stage[i] - '0');
        }
        return stage[0] == 'V' ? 1 + n : 100 + n;
    }
    throw DataError("cannot parse growth stage: " + stage);
}

} // namespace wiltscan
