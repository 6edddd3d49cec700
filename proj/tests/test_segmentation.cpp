#include <catch2/catch_amalgamated.hpp>

#include "wiltscan/rng.hpp"
#include "wiltscan/segmentation.hpp"

using namespace wiltscan;

TEST_CASE("rgb_to_hsv matches hand-computed values") {
    Hsv green = rgb_to_hsv(0, 255, 0);
    REQUIRE(green.h == Catch::Approx(60.0));
    REQUIRE(green.s == Catch::Approx(255.0));
    REQUIRE(green.v == Catch::Approx(255.0));

    Hsv red = rgb_to_hsv(255, 0, 0);
    REQUIRE(red.h == Catch::Approx(0.0));
    REQUIRE(red.s == Catch::Approx(255.0));

    Hsv blue = rgb_to_hsv(0, 0, 255);
    REQUIRE(blue.h == Catch::Approx(120.0));

    Hsv gray = rgb_to_hsv(100, 100, 100);
    REQUIRE(gray.h == 0.0);
    REQUIRE(gray.s == 0.0);
    REQUIRE(gray.v == Catch::Approx(100.0));

    Hsv black = rgb_to_hsv(0, 0, 0);
    REQUIRE(black.s == 0.0);
    REQUIRE(black.v == 0.0);

    // olive-ish vegetation color
    Hsv veg = rgb_to_hsv(60, 120, 40);
    REQUIRE(veg.h == Catch::Approx((120.0 + 60.0 * (40.0 - 60.0) / 80.0) / 2.0));
    REQUIRE(veg.s == Catch::Approx(80.0 / 120.0 * 255.0));
    REQUIRE(veg.v == Catch::Approx(120.0));
}

TEST_CASE("vegetation range bounds are inclusive") {
    HsvRange range = vegetation_hsv_range();
    REQUIRE(range.contains({25, 20, 50}));
    REQUIRE(range.contains({80, 255, 255}));
    REQUIRE_FALSE(range.contains({24.9, 100, 100}));
    REQUIRE_FALSE(range.contains({80.1, 100, 100}));
    REQUIRE_FALSE(range.contains({50, 19, 100}));
    REQUIRE_FALSE(range.contains({50, 100, 49}));
    HsvRange bad{{10, 0, 0}, {5, 255, 255}};
    REQUIRE_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("hsv_mask agrees with per-pixel color classification") {
    Rng rng(7);
    std::uint32_t w = 16, h = 12;
    BandRaster r{w, h, {}}, g{w, h, {}}, b{w, h, {}};
    std::size_t n = static_cast<std::size_t>(w) * h;
    r.values.resize(n);
    g.values.resize(n);
    b.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.values[i] = static_cast<float>(rng.next_below(256));
        g.values[i] = static_cast<float>(rng.next_below(256));
        b.values[i] = static_cast<float>(rng.next_below(256));
    }
    HsvRange range = vegetation_hsv_range();
    PixelMask mask = hsv_mask(r, g, b, range);
    REQUIRE(mask.kept.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
        bool in = range.contains(rgb_to_hsv(r.values[i], g.values[i], b.values[i]));
        REQUIRE(mask.kept[i] == (in ? 1 : 0));
    }

    BandRaster small{w, h - 1, std::vector<float>(static_cast<std::size_t>(w) * (h - 1), 0.0f)};
    REQUIRE_THROWS_AS(hsv_mask(r, g, small, range), DataError);
}

namespace {

BandRaster two_temperature_plot(std::uint32_t w, std::uint32_t h, std::uint32_t cool_rows,
                                float cool, float warm, double jitter_sd, std::uint64_t seed) {
    BandRaster t{w, h, {}};
    t.values.resize(static_cast<std::size_t>(w) * h);
    Rng rng(seed);
    for (std::uint32_t y = 0; y < h; ++y)
        for (std::uint32_t x = 0; x < w; ++x)
            t.values[static_cast<std::size_t>(y) * w + x] =
                (y < cool_rows ? cool : warm) +
                static_cast<float>(jitter_sd * rng.next_normal());
    return t;
}

} // namespace

TEST_CASE("thermal k-means recovers the cool vegetation cluster") {
    BandRaster t = two_temperature_plot(20, 10, 6, 28.0f, 45.0f, 0.3, 99);
    double ratio = 0.6;
    std::vector<double> wcss;
    PixelMask mask = kmeans_segment_thermal(t, ratio, 2, 123, &wcss);

    // exact recovery: the two temperature groups are far apart
    for (std::uint32_t y = 0; y < 10; ++y)
        for (std::uint32_t x = 0; x < 20; ++x)
            REQUIRE(mask.kept[static_cast<std::size_t>(y) * 20 + x] == (y < 6 ? 1 : 0));

    SECTION("objective is non-increasing over iterations") {
        REQUIRE(!wcss.empty());
        for (std::size_t i = 1; i < wcss.size(); ++i)
            REQUIRE(wcss[i] <= wcss[i - 1] + 1e-9);
    }
    SECTION("deterministic across reruns") {
        for (int rep = 0; rep < 3; ++rep) {
            PixelMask again = kmeans_segment_thermal(t, ratio, 2, 123);
            REQUIRE(again.kept == mask.kept);
        }
    }
    SECTION("ambiguous ratio prefers the cooler cluster") {
        // 50/50 split: both clusters are equally far from ratio 0.5 +/- gap
        BandRaster half = two_temperature_plot(20, 10, 5, 28.0f, 45.0f, 0.0, 99);
        PixelMask m = kmeans_segment_thermal(half, 0.5, 2, 123);
        REQUIRE(m.kept[0] == 1);                 // cool row kept
        REQUIRE(m.kept[20 * 10 - 1] == 0);       // warm row dropped
    }
    SECTION("degenerate input rejected") {
        BandRaster flat{4, 4, std::vector<float>(16, 30.0f)};
        REQUIRE_THROWS_AS(kmeans_segment_thermal(flat, 0.5, 2, 1), DataError);
    }
    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(kmeans_segment_thermal(t, 0.0, 2, 1), ConfigError);
        REQUIRE_THROWS_AS(kmeans_segment_thermal(t, 0.5, 1, 1), ConfigError);
    }
}

TEST_CASE("mean_reflectance averages kept pixels only") {
    BandRaster b1{2, 2, {1, 2, 3, 4}};
    BandRaster b2{2, 2, {10, 20, 30, 40}};
    PixelMask mask{2, 2, {1, 0, 1, 0}};
    Spectrum s = mean_reflectance({b1, b2}, mask, "x");
    REQUIRE(s.values.size() == 2);
    REQUIRE(s.values[0] == Catch::Approx(2.0));
    REQUIRE(s.values[1] == Catch::Approx(20.0));

    PixelMask empty{2, 2, {0, 0, 0, 0}};
    REQUIRE_THROWS_AS(mean_reflectance({b1}, empty), DataError);
    PixelMask wrong{3, 2, {0, 0, 0, 0, 0, 0}};
    REQUIRE_THROWS_AS(mean_reflectance({b1}, wrong), DataError);
}

TEST_CASE("multispectral RGB triple uses the 650/560/475 bands scaled x255") {
    SensorProfile p = multispectral_profile();
    std::vector<BandRaster> bands(10, BandRaster{1, 1, {0.0f}});
    for (std::size_t i = 0; i < 10; ++i)
        bands[i].values[0] = static_cast<float>(i) / 100.0f;
    BandRaster r, g, b;
    multispectral_rgb(bands, p, r, g, b);
    REQUIRE(r.values[0] == Catch::Approx(0.04 * 255.0));  // 650 nm is band 4
    REQUIRE(g.values[0] == Catch::Approx(0.03 * 255.0));  // 560 nm is band 3
    REQUIRE(b.values[0] == Catch::Approx(0.01 * 255.0));  // 475 nm is band 1
}

TEST_CASE("mask serialization writes 0/1 floats") {
    PixelMask mask{2, 1, {1, 0}};
    BandRaster r = mask_to_raster(mask);
    REQUIRE(r.values == std::vector<float>{1.0f, 0.0f});
}
