#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "wiltscan/error.hpp"
#include "wiltscan/rng.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

// HSV on the OpenCV-style 8-bit scale: H in 0-179 (degrees halved),
// S and V in 0-255.
struct Hsv {
    double h = 0;
    double s = 0;
    double v = 0;
};

struct HsvRange {
    Hsv low;
    Hsv high;

    void validate() const {
        if (low.h > high.h || low.s > high.s || low.v > high.v)
            throw ConfigError("HSV range low exceeds high");
    }

    bool contains(const Hsv& c) const {
        return c.h >= low.h && c.h <= high.h && c.s >= low.s && c.s <= high.s &&
               c.v >= low.v && c.v <= high.v;
    }
};

// Vegetation threshold used throughout the pipeline.
inline HsvRange vegetation_hsv_range() {
    return {{25, 20, 50}, {80, 255, 255}};
}

inline Hsv rgb_to_hsv(double r, double g, double b) {
    double maxc = std::max({r, g, b});
    double minc = std::min({r, g, b});
    Hsv out;
    out.v = maxc;
    double delta = maxc - minc;
    out.s = maxc > 0 ? delta / maxc * 255.0 : 0.0;
    if (delta > 0) {
        double h;
        if (maxc == r)
            h = 60.0 * (g - b) / delta;
        else if (maxc == g)
            h = 120.0 + 60.0 * (b - r) / delta;
        else
            h = 240.0 + 60.0 * (r - g) / delta;
        if (h < 0) h += 360.0;
        out.h = h / 2.0; // 0-179 convention
    }
    return out;
}

// Mask from an RGB triple of rasters scaled 0-255. Pixel kept iff its HSV
// color lies inside the range, inclusive on both ends.
inline PixelMask hsv_mask(const BandRaster& r, const BandRaster& g, const BandRaster& b,
                          const HsvRange& range) {
    range.validate();
    if (r.width != g.width || r.width != b.width || r.height != g.height || r.height != b.height)
        throw DataError("hsv_mask: RGB rasters have mismatched dimensions");
    PixelMask mask;
    mask.width = r.width;
    mask.height = r.height;
    mask.kept.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        Hsv c = rgb_to_hsv(r.values[i], g.values[i], b.values[i]);
        mask.kept[i] = range.contains(c) ? 1 : 0;
    }
    return mask;
}

// Lloyd's k-means on raw pixel temperatures with k-means++ initialization.
// The vegetation cluster is the one whose pixel fraction is closest to
// expected_veg_ratio; ties go to the cluster with the lower mean temperature.
// Converges when assignments stabilize, capped at 300 iterations.
// If wcss_trace is non-null, the within-cluster sum of squares after each
// assignment pass is appended to it.
inline PixelMask kmeans_segment_thermal(const BandRaster& thermal, double expected_veg_ratio,
                                        int k, std::uint64_t seed,
                                        std::vector<double>* wcss_trace = nullptr) {
    thermal.validate();
    if (k < 2) throw ConfigError("kmeans_segment_thermal: k must be >= 2");
    if (!(expected_veg_ratio > 0.0 && expected_veg_ratio < 1.0))
        throw ConfigError("kmeans_segment_thermal: expected_veg_ratio must be in (0,1)");
    const std::vector<float>& px = thermal.values;
    std::set<float> distinct(px.begin(), px.end());
    if (static_cast<int>(distinct.size()) < k)
        throw DataError("kmeans_segment_thermal: fewer distinct values than clusters");

    const std::size_t n = px.size();
    Rng rng(seed);

    // k-means++ seeding
    std::vector<double> centers;
    centers.push_back(px[rng.next_below(n)]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (double c : centers) {
                double d = px[i] - c;
                best = std::min(best, d * d);
            }
            d2[i] = best;
            total += best;
        }
        double target = rng.next_double() * total;
        std::size_t pick = 0;
        double acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= target) {
                pick = i;
                break;
            }
            pick = i;
        }
        centers.push_back(px[pick]);
    }

    std::vector<int> assign(n, -1);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        double wcss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bestd = std::numeric_limits<double>::max();
            for (int c = 0; c < k; ++c) {
                double d = px[i] - centers[c];
                d *= d;
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            wcss += bestd;
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (wcss_trace) wcss_trace->push_back(wcss);
        if (!changed) break;
        std::vector<double> sum(k, 0);
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[assign[i]] += px[i];
            ++cnt[assign[i]];
        }
        for (int c = 0; c < k; ++c)
            if (cnt[c] > 0) centers[c] = sum[c] / static_cast<double>(cnt[c]);
    }

    // pick the vegetation cluster
    std::vector<double> mean(k, 0);
    std::vector<std::size_t> cnt(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        mean[assign[i]] += px[i];
        ++cnt[assign[i]];
    }
    for (int c = 0; c < k; ++c)
        mean[c] = cnt[c] > 0 ? mean[c] / static_cast<double>(cnt[c])
                             : std::numeric_limits<double>::max();
    int veg = 0;
    double best_gap = std::numeric_limits<double>::max();
    for (int c = 0; c < k; ++c) {
        double frac = static_cast<double>(cnt[c]) / static_cast<double>(n);
        double gap = std::abs(frac - expected_veg_ratio);
        if (gap < best_gap - 1e-15 ||
            (std::abs(gap - best_gap) <= 1e-15 && mean[c] < mean[veg])) {
            best_gap = gap;
            veg = c;
        }
    }

    PixelMask mask;
    mask.width = thermal.width;
    mask.height = thermal.height;
    mask.kept.resize(n);
    for (std::size_t i = 0; i < n; ++i) mask.kept[i] = assign[i] == veg ? 1 : 0;
    return mask;
}

// Arithmetic mean of each band over the kept pixels.
inline Spectrum mean_reflectance(const std::vector<BandRaster>& bands, const PixelMask& mask,
                                 const std::string& sensor_name = {}) {
    if (bands.empty()) throw DataError("mean_reflectance: no bands");
    for (const auto& b : bands)
        if (b.width != mask.width || b.height != mask.height)
            throw DataError("mean_reflectance: band dimensions do not match mask");
    std::size_t kept = mask.kept_count();
    if (kept == 0)
        throw DataError("mean_reflectance: mask keeps no pixels (fully masked plot)");
    Spectrum s;
    s.sensor = sensor_name;
    s.values.reserve(bands.size());
    for (const auto& b : bands) {
        double sum = 0;
        for (std::size_t i = 0; i < b.values.size(); ++i)
            if (mask.kept[i]) sum += b.values[i];
        s.values.push_back(sum / static_cast<double>(kept));
    }
    return s;
}

// The multispectral RGB triple: 650/560/475 nm bands scaled x255, used to
// build the vegetation mask for all ten multispectral bands.
inline void multispectral_rgb(const std::vector<BandRaster>& ms_bands, const SensorProfile& profile,
                              BandRaster& r, BandRaster& g, BandRaster& b) {
    auto find_band = [&](double nm) -> std::size_t {
        for (std::size_t i = 0; i < profile.bands.size(); ++i)
            if (profile.bands[i].center_nm == nm) return i;
        throw ConfigError("multispectral profile lacks the " + std::to_string(nm) + " nm band");
    };
    std::size_t ri = find_band(650), gi = find_band(560), bi = find_band(475);
    auto scale = [](const BandRaster& src) {
        BandRaster out = src;
        for (auto& v : out.values) v *= 255.0f;
        return out;
    };
    r = scale(ms_bands[ri]);
    g = scale(ms_bands[gi]);
    b = scale(ms_bands[bi]);
}

// Mask serialization for inspection: 0.0/1.0 floats in the BRAS container.
inline BandRaster mask_to_raster(const PixelMask& mask) {
    BandRaster r;
    r.width = mask.width;
    r.height = mask.height;
    r.values.resize(mask.kept.size());
    for (std::size_t i = 0; i < mask.kept.size(); ++i) r.values[i] = mask.kept[i] ? 1.0f : 0.0f;
    return r;
}

} // namespace wiltscan
