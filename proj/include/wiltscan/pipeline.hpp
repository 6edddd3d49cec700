#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wiltscan/band_select.hpp"
#include "wiltscan/error.hpp"
#include "wiltscan/indices.hpp"
#include "wiltscan/labels.hpp"
#include "wiltscan/raster_io.hpp"
#include "wiltscan/segmentation.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

struct ExtractOptions {
    HsvRange hsv = vegetation_hsv_range();
    // Required for thermal sensors: expected vegetation-to-soil pixel ratio,
    // per time point (field conditions change between flights).
    std::map<TimePoint, double> thermal_veg_ratio;
    int thermal_k = 2;
    ViOptions vi;
    std::vector<Vi> multispectral_vis; // default: the 12 + the 8 visible-only
    std::vector<Vi> hyperspectral_vis; // default: all 26
    bool average_hyperspectral = true; // 2151 -> 214 averaged band features
    std::uint64_t seed = 0;
    // Restrict extraction to these sensors; empty = every sensor present.
    std::set<std::string> sensors;
};

struct ExtractedFeatures {
    std::vector<std::string> plot_ids;
    std::vector<TimePoint> time_points;
    std::vector<int> wilt_scores;
    std::vector<std::string> growth_stages;
    FeatureMatrix features;
    std::vector<std::string> failures; // per-plot extraction failures, skipped rows

    std::vector<std::size_t> rows_at(TimePoint tp) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < time_points.size(); ++i)
            if (time_points[i] == tp) out.push_back(i);
        return out;
    }
};

namespace detail {

inline std::vector<Vi> default_ms_vis() {
    auto v = multispectral_indices();
    for (Vi id : visible_only_indices()) v.push_back(id);
    return v;
}

inline std::string band_feature_name(const std::string& sensor, double center_nm) {
    // centers are whole nanometres in every profile this project ships
    return sensor + "_" + std::to_string(static_cast<long>(center_nm));
}

// Per-record feature extraction for one sensor. Returns names only once the
// caller has fixed the column layout; values follow the same order.
struct SensorFeatures {
    std::vector<std::string> names;
    std::vector<double> values;
};

inline SensorFeatures extract_sensor(const PlotRecord& rec, const std::string& sensor,
                                     const SensorProfile& profile, const ExtractOptions& opt,
                                     std::size_t record_index) {
    const auto& bands = rec.rasters.at(sensor);
    SensorFeatures out;
    switch (profile.kind) {
        case SensorKind::Multispectral: {
            BandRaster r, g, b;
            multispectral_rgb(bands, profile, r, g, b);
            PixelMask mask = hsv_mask(r, g, b, opt.hsv);
            Spectrum spec = mean_reflectance(bands, mask, sensor);
            for (std::size_t i = 0; i < bands.size(); ++i) {
                out.names.push_back(band_feature_name(sensor, profile.bands[i].center_nm));
                out.values.push_back(spec.values[i]);
            }
            const auto& ids = opt.multispectral_vis.empty() ? default_ms_vis() : opt.multispectral_vis;
            FeatureVector vis = compute_all_indices(spec, profile, ids, opt.vi);
            for (std::size_t i = 0; i < vis.names.size(); ++i) {
                out.names.push_back(sensor + "_vi_" + vis.names[i]);
                out.values.push_back(vis.values[i]);
            }
            break;
        }
        case SensorKind::Rgb: {
            auto scale = [](const BandRaster& src) {
                BandRaster o = src;
                for (auto& v : o.values) v *= 255.0f;
                return o;
            };
            // profile bands are ordered by wavelength: blue, green, red
            BandRaster b = scale(bands[0]), g = scale(bands[1]), r = scale(bands[2]);
            PixelMask mask = hsv_mask(r, g, b, opt.hsv);
            Spectrum spec = mean_reflectance(bands, mask, sensor);
            for (std::size_t i = 0; i < bands.size(); ++i) {
                out.names.push_back(band_feature_name(sensor, profile.bands[i].center_nm));
                out.values.push_back(spec.values[i]);
            }
            break;
        }
        case SensorKind::Thermal: {
            auto it = opt.thermal_veg_ratio.find(rec.time_point);
            if (it == opt.thermal_veg_ratio.end())
                throw ConfigError("no expected vegetation ratio configured for time point " +
                                  to_string(rec.time_point));
            PixelMask mask = kmeans_segment_thermal(bands[0], it->second, opt.thermal_k,
                                                    derive_seed(opt.seed, 0x7E47u + record_index));
            Spectrum spec = mean_reflectance(bands, mask, sensor);
            out.names.push_back(sensor + "_mean");
            out.values.push_back(spec.values[0]);
            break;
        }
        case SensorKind::Hyperspectral: {
            PixelMask all;
            all.width = bands[0].width;
            all.height = bands[0].height;
            all.kept.assign(bands[0].size(), 1);
            Spectrum spec = mean_reflectance(bands, all, sensor);
            if (opt.average_hyperspectral && spec.values.size() == 2151) {
                AveragedSpectrum avg = average_bands(spec);
                for (std::size_t i = 0; i < avg.values.size(); ++i) {
                    out.names.push_back(sensor + "_avg_" + std::to_string(i));
                    out.values.push_back(avg.values[i]);
                }
            } else {
                for (std::size_t i = 0; i < spec.values.size(); ++i) {
                    out.names.push_back(band_feature_name(sensor, profile.bands[i].center_nm));
                    out.values.push_back(spec.values[i]);
                }
            }
            std::vector<Vi> ids = opt.hyperspectral_vis;
            if (ids.empty())
                ids.assign(all_vegetation_indices.begin(), all_vegetation_indices.end());
            FeatureVector vis = compute_all_indices(spec, profile, ids, opt.vi);
            for (std::size_t i = 0; i < vis.names.size(); ++i) {
                out.names.push_back(sensor + "_vi_" + vis.names[i]);
                out.values.push_back(vis.values[i]);
            }
            break;
        }
    }
    return out;
}

} // namespace detail

// Runs segmentation, mean-reflectance and vegetation-index extraction for
// every record. Rows follow dataset order; records that fail (fully masked
// plot, missing sensor) are skipped and reported in `failures`.
inline ExtractedFeatures extract_features(const PlotDataset& dataset, const ExtractOptions& opt) {
    ExtractedFeatures out;
    std::vector<std::string> sensors;
    if (opt.sensors.empty()) {
        std::set<std::string> seen;
        for (const auto& rec : dataset.records)
            for (const auto& [s, _] : rec.rasters) seen.insert(s);
        sensors.assign(seen.begin(), seen.end());
    } else {
        sensors.assign(opt.sensors.begin(), opt.sensors.end());
    }

    bool have_layout = false;
    for (std::size_t ri = 0; ri < dataset.records.size(); ++ri) {
        const PlotRecord& rec = dataset.records[ri];
        std::vector<std::string> names;
        std::vector<double> values;
        try {
            for (const auto& sensor : sensors) {
                if (!rec.has_sensor(sensor))
                    throw DataError("plot " + rec.plot_id + " at " + to_string(rec.time_point) +
                                    " lacks sensor '" + sensor + "'");
                auto pit = dataset.profiles.find(sensor);
                if (pit == dataset.profiles.end())
                    throw ConfigError("no profile for sensor '" + sensor + "'");
                auto sf = detail::extract_sensor(rec, sensor, pit->second, opt, ri);
                names.insert(names.end(), sf.names.begin(), sf.names.end());
                values.insert(values.end(), sf.values.begin(), sf.values.end());
            }
        } catch (const Error& e) {
            out.failures.push_back("plot " + rec.plot_id + " at " + to_string(rec.time_point) +
                                   ": " + e.what());
            continue;
        }
        if (!have_layout) {
            out.features.names = names;
            have_layout = true;
        } else if (names != out.features.names) {
            throw DataError("inconsistent feature layout across records (plot " + rec.plot_id + ")");
        }
        out.plot_ids.push_back(rec.plot_id);
        out.time_points.push_back(rec.time_point);
        out.wilt_scores.push_back(rec.wilt_score);
        out.growth_stages.push_back(rec.growth_stage);
        out.features.data.insert(out.features.data.end(), values.begin(), values.end());
        ++out.features.rows;
    }
    return out;
}

} // namespace wiltscan
