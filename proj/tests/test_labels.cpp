#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "wiltscan/labels.hpp"

using namespace wiltscan;

TEST_CASE("score regrouping matches the published grouping exactly") {
    // three-class: {1,2} tolerant, {3} moderate, {4,5,6} susceptible
    std::map<int, int> three = {{1, 0}, {2, 0}, {3, 1}, {4, 2}, {5, 2}, {6, 2}};
    // two-class: {1,2} select, rest discard
    std::map<int, int> two = {{1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 1}, {6, 1}};
    for (int s = 1; s <= 6; ++s) {
        REQUIRE(regroup_label(s, LabelScheme::ThreeClass) == three[s]);
        REQUIRE(regroup_label(s, LabelScheme::TwoClass) == two[s]);
        REQUIRE(regroup_label(s, LabelScheme::Raw) == s - 1);
    }
    REQUIRE_THROWS_AS(regroup_label(0, LabelScheme::TwoClass), DataError);
    REQUIRE_THROWS_AS(regroup_label(7, LabelScheme::ThreeClass), DataError);

    std::vector<int> raw = {1, 3, 6};
    REQUIRE(regroup_labels(raw, LabelScheme::TwoClass) == std::vector<int>{0, 1, 1});
}

TEST_CASE("label scheme names round trip") {
    REQUIRE(label_scheme_from_string("two-class") == LabelScheme::TwoClass);
    REQUIRE(label_scheme_from_string("three-class") == LabelScheme::ThreeClass);
    REQUIRE(label_scheme_from_string("raw") == LabelScheme::Raw);
    REQUIRE(to_string(LabelScheme::TwoClass) == "two-class");
    REQUIRE_THROWS_AS(label_scheme_from_string("five"), ConfigError);
}

namespace {

FeatureMatrix index_column(std::size_t rows) {
    FeatureMatrix m;
    m.names = {"f0"};
    m.rows = rows;
    for (std::size_t i = 0; i < rows; ++i) m.data.push_back(static_cast<double>(i));
    return m;
}

} // namespace

TEST_CASE("class balancing downsamples to the smallest class") {
    SECTION("104 vs 300") {
        std::vector<int> labels(404, 0);
        for (std::size_t i = 300; i < 404; ++i) labels[i] = 1;
        BalancedSubset b = balance_classes(index_column(404), labels, 42);
        REQUIRE(b.labels.size() == 208);
        std::size_t c0 = 0, c1 = 0;
        for (int l : b.labels) (l == 0 ? c0 : c1)++;
        REQUIRE(c0 == 104);
        REQUIRE(c1 == 104);
        // retained rows keep ascending original order
        for (std::size_t i = 1; i < b.row_indices.size(); ++i)
            REQUIRE(b.row_indices[i] > b.row_indices[i - 1]);
        // features follow the retained rows
        for (std::size_t i = 0; i < b.row_indices.size(); ++i)
            REQUIRE(b.features.at(i, 0) == static_cast<double>(b.row_indices[i]));
    }
    SECTION("243 per class at the field-study scale") {
        std::vector<int> labels(243 + 412, 1);
        for (std::size_t i = 0; i < 243; ++i) labels[i] = 0;
        BalancedSubset b = balance_classes(index_column(labels.size()), labels, 7);
        std::size_t c0 = 0, c1 = 0;
        for (int l : b.labels) (l == 0 ? c0 : c1)++;
        REQUIRE(c0 == 243);
        REQUIRE(c1 == 243);
    }
    SECTION("deterministic per seed") {
        std::vector<int> labels(50, 0);
        for (std::size_t i = 30; i < 50; ++i) labels[i] = 1;
        BalancedSubset a = balance_classes(index_column(50), labels, 9);
        BalancedSubset b = balance_classes(index_column(50), labels, 9);
        REQUIRE(a.row_indices == b.row_indices);
        BalancedSubset c = balance_classes(index_column(50), labels, 10);
        REQUIRE(a.row_indices != c.row_indices); // overwhelmingly likely
    }
    SECTION("degenerate inputs") {
        std::vector<int> one_class(10, 0);
        REQUIRE_THROWS_AS(balance_classes(index_column(10), one_class, 1), DataError);
        std::vector<int> mismatched(9, 0);
        REQUIRE_THROWS_AS(balance_classes(index_column(10), mismatched, 1), DataError);
    }
}

TEST_CASE("growth stage ordinal codes") {
    REQUIRE(growth_stage_code("VE") == 0);
    REQUIRE(growth_stage_code("VC") == 1);
    REQUIRE(growth_stage_code("V1") == 2);
    REQUIRE(growth_stage_code("V9") == 10);
    REQUIRE(growth_stage_code("V12") == 13);
    REQUIRE(growth_stage_code("R1") == 101);
    REQUIRE(growth_stage_code("R8") == 108);
    // vegetative stages order before reproductive ones
    REQUIRE(growth_stage_code("V12") < growth_stage_code("R1"));
    REQUIRE_THROWS_AS(growth_stage_code("X3"), DataError);
    REQUIRE_THROWS_AS(growth_stage_code("Vx"), DataError);
}
