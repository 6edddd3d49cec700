#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiltscan/error.hpp"
#include "wiltscan/raster_io.hpp"
#include "wiltscan/rng.hpp"
#include "wiltscan/special.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

// Ground-truth synthetic data generator. Vegetation pixels are the class
// mean spectrum plus Gaussian noise clamped to [0,1]; soil pixels come from
// the soil spectrum. Vegetation occupies the top rows of each plot so the
// soil fraction is matched and the true mask is known exactly.

struct SynthTimePoint {
    TimePoint time_point = TimePoint::T1;
    std::vector<std::vector<double>> class_means; // [class][band], 10 multispectral values
    double noise_sd = 0.02;
    std::vector<int> wilt_scores; // per class, 1-6
    std::string growth_stage = "V3";
};

struct SynthConfig {
    std::uint64_t seed = 42;
    int classes = 2;
    int n_plots_per_class = 20;
    std::uint32_t plot_width = 24;
    std::uint32_t plot_height = 16;
    double soil_fraction = 0.4;
    std::vector<double> soil_spectrum; // 10 multispectral values
    bool emit_thermal = true;
    std::vector<double> thermal_class_means; // degrees C, per class
    double thermal_soil_mean = 45.0;
    double thermal_noise_sd = 0.5;
    std::vector<SynthTimePoint> time_points;

    std::uint32_t vegetation_rows() const {
        double veg = (1.0 - soil_fraction) * static_cast<double>(plot_height);
        auto rows = static_cast<std::uint32_t>(std::lround(veg));
        return std::min(std::max<std::uint32_t>(rows, 1), plot_height - 1);
    }

    std::size_t vegetation_pixels() const {
        return static_cast<std::size_t>(vegetation_rows()) * plot_width;
    }

    void validate() const {
        if (classes != 2 && classes != 3) throw ConfigError("synth: classes must be 2 or 3");
        if (n_plots_per_class < 1) throw ConfigError("synth: n_plots_per_class must be >= 1");
        if (plot_width == 0 || plot_height < 2)
            throw ConfigError("synth: plot size too small");
        if (!(soil_fraction > 0.0 && soil_fraction < 1.0))
            throw ConfigError("synth: soil_fraction must be in (0,1)");
        if (soil_spectrum.size() != 10) throw ConfigError("synth: soil_spectrum needs 10 values");
        if (emit_thermal && thermal_class_means.size() != static_cast<std::size_t>(classes))
            throw ConfigError("synth: thermal_class_means must have one value per class");
        if (time_points.empty()) throw ConfigError("synth: no time points configured");
        for (const auto& tp : time_points) {
            if (tp.noise_sd <= 0) throw ConfigError("synth: noise_sd must be positive");
            if (tp.class_means.size() != static_cast<std::size_t>(classes))
                throw ConfigError("synth: class_means must have one spectrum per class");
            for (const auto& m : tp.class_means) {
                if (m.size() != 10) throw ConfigError("synth: class mean spectrum needs 10 values");
                for (double v : m)
                    if (v < 0.0 || v > 1.0)
                        throw ConfigError("synth: class mean reflectance outside [0,1]");
            }
            if (tp.wilt_scores.size() != static_cast<std::size_t>(classes))
                throw ConfigError("synth: wilt_scores must have one value per class");
            for (int s : tp.wilt_scores)
                if (s < 1 || s > 6) throw ConfigError("synth: wilt score outside 1-6");
        }
    }
};

// Two classes, three time points; differences start in the red/red-edge
// bands at T1 and widen toward the red-edge/NIR at later time points.
inline SynthConfig default_synth_config() {
    SynthConfig c;
    // band order: 444, 475, 531, 560, 650, 668, 705, 717, 740, 842
    // visible levels sit deep inside the vegetation HSV range so per-pixel
    // noise cannot push them across the segmentation thresholds
    std::vector<double> tolerant = {0.06, 0.08, 0.24, 0.30, 0.10, 0.09, 0.16, 0.26, 0.38, 0.48};
    auto shifted = [&](std::map<int, double> deltas) {
        std::vector<double> v = tolerant;
        for (auto [band, d] : deltas) v[static_cast<std::size_t>(band)] += d;
        return v;
    };
    c.soil_spectrum = {0.10, 0.12, 0.15, 0.16, 0.30, 0.32, 0.34, 0.35, 0.36, 0.38};
    c.thermal_class_means = {28.0, 33.0};
    SynthTimePoint t1;
    t1.time_point = TimePoint::T1;
    t1.class_means = {tolerant, shifted({{5, 0.004}, {7, -0.010}})};
    t1.noise_sd = 0.02;
    t1.wilt_scores = {1, 1};
    t1.growth_stage = "V3";
    SynthTimePoint t2;
    t2.time_point = TimePoint::T2;
    t2.class_means = {tolerant, shifted({{5, 0.010}, {7, -0.030}, {8, -0.040}, {9, -0.050}})};
    t2.noise_sd = 0.02;
    t2.wilt_scores = {2, 4};
    t2.growth_stage = "V9";
    SynthTimePoint t3;
    t3.time_point = TimePoint::T3;
    t3.class_means = {tolerant, shifted({{5, 0.015}, {7, -0.050}, {8, -0.080}, {9, -0.100}})};
    t3.noise_sd = 0.02;
    t3.wilt_scores = {1, 5};
    t3.growth_stage = "R3";
    c.time_points = {t1, t2, t3};
    return c;
}

inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig c = default_synth_config();
    try {
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("classes")) c.classes = j.at("classes").get<int>();
        if (j.contains("n_plots_per_class")) c.n_plots_per_class = j.at("n_plots_per_class").get<int>();
        if (j.contains("plot_width")) c.plot_width = j.at("plot_width").get<std::uint32_t>();
        if (j.contains("plot_height")) c.plot_height = j.at("plot_height").get<std::uint32_t>();
        if (j.contains("soil_fraction")) c.soil_fraction = j.at("soil_fraction").get<double>();
        if (j.contains("soil_spectrum")) c.soil_spectrum = j.at("soil_spectrum").get<std::vector<double>>();
        if (j.contains("emit_thermal")) c.emit_thermal = j.at("emit_thermal").get<bool>();
        if (j.contains("thermal_class_means"))
            c.thermal_class_means = j.at("thermal_class_means").get<std::vector<double>>();
        if (j.contains("thermal_soil_mean")) c.thermal_soil_mean = j.at("thermal_soil_mean").get<double>();
        if (j.contains("thermal_noise_sd")) c.thermal_noise_sd = j.at("thermal_noise_sd").get<double>();
        if (j.contains("time_points")) {
            c.time_points.clear();
            for (const auto& tj : j.at("time_points")) {
                SynthTimePoint tp;
                tp.time_point = time_point_from_string(tj.at("name").get<std::string>());
                tp.class_means = tj.at("class_means").get<std::vector<std::vector<double>>>();
                tp.noise_sd = tj.at("noise_sd").get<double>();
                tp.wilt_scores = tj.at("wilt_scores").get<std::vector<int>>();
                tp.growth_stage = tj.value("growth_stage", std::string("V3"));
                c.time_points.push_back(std::move(tp));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid synth config: ") + e.what());
    }
    c.validate();
    return c;
}

inline SynthConfig load_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open synth config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return synth_config_from_json(j);
}

struct GroundTruthPlot {
    std::string plot_id;
    int true_class = 0;
    std::map<TimePoint, std::vector<double>> true_mean_spectrum; // multispectral
};

struct GroundTruth {
    PixelMask vegetation_mask; // identical layout for every plot
    std::vector<GroundTruthPlot> plots;
};

struct SynthOutput {
    std::string manifest_path;
    PlotDataset dataset;
    GroundTruth truth;
};

inline SynthOutput generate_synthetic_dataset(const SynthConfig& config,
                                              const std::string& out_dir) {
    config.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "rasters", ec);
    fs::create_directories(fs::path(out_dir) / "profiles", ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    SensorProfile ms = multispectral_profile();
    SensorProfile th = thermal_profile();
    save_sensor_profile(ms, (fs::path(out_dir) / "profiles" / "multispectral.json").string());
    if (config.emit_thermal)
        save_sensor_profile(th, (fs::path(out_dir) / "profiles" / "thermal.json").string());

    const std::uint32_t w = config.plot_width, h = config.plot_height;
    const std::uint32_t veg_rows = config.vegetation_rows();

    GroundTruth truth;
    truth.vegetation_mask.width = w;
    truth.vegetation_mask.height = h;
    truth.vegetation_mask.kept.assign(static_cast<std::size_t>(w) * h, 0);
    for (std::uint32_t y = 0; y < veg_rows; ++y)
        for (std::uint32_t x = 0; x < w; ++x)
            truth.vegetation_mask.kept[static_cast<std::size_t>(y) * w + x] = 1;

    const int n_plots = config.classes * config.n_plots_per_class;
    auto plot_name = [&](int p) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "P%04d", p);
        return std::string(buf);
    };

    std::string manifest_path = (fs::path(out_dir) / "manifest.csv").string();
    std::ofstream man(manifest_path, std::ios::binary);
    if (!man) throw IoError("cannot write manifest: " + manifest_path);
    man << "plot_id,time_point,wilt_score,growth_stage,sensor,band_index,raster_path\n";

    auto fill = [&](BandRaster& raster, double veg_mean, double soil_mean, double sd, Rng& rng,
                    bool clamp01) {
        raster.width = w;
        raster.height = h;
        raster.values.resize(static_cast<std::size_t>(w) * h);
        for (std::size_t i = 0; i < raster.values.size(); ++i) {
            bool veg = truth.vegetation_mask.kept[i] != 0;
            double v = (veg ? veg_mean : soil_mean) + sd * rng.next_normal();
            if (clamp01) v = std::clamp(v, 0.0, 1.0);
            raster.values[i] = static_cast<float>(v);
        }
    };

    for (int p = 0; p < n_plots; ++p) {
        int cls = p / config.n_plots_per_class;
        GroundTruthPlot gt;
        gt.plot_id = plot_name(p);
        gt.true_class = cls;
        for (std::size_t ti = 0; ti < config.time_points.size(); ++ti) {
            const SynthTimePoint& tp = config.time_points[ti];
            gt.true_mean_spectrum[tp.time_point] = tp.class_means[static_cast<std::size_t>(cls)];
            std::string tp_name = to_string(tp.time_point);
            // multispectral bands
            Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(p), ti * 4 + 0));
            for (std::size_t b = 0; b < 10; ++b) {
                BandRaster raster;
                fill(raster, tp.class_means[static_cast<std::size_t>(cls)][b],
                     config.soil_spectrum[b], tp.noise_sd, rng, true);
                std::string fname = gt.plot_id + "_" + tp_name + "_ms_" + std::to_string(b) + ".bras";
                std::string path = (fs::path(out_dir) / "rasters" / fname).string();
                write_band_raster(raster, path);
                man << gt.plot_id << ',' << tp_name << ','
                    << tp.wilt_scores[static_cast<std::size_t>(cls)] << ',' << tp.growth_stage
                    << ",multispectral," << b << ',' << path << '\n';
            }
            if (config.emit_thermal) {
                Rng trng(derive_seed(config.seed, static_cast<std::uint64_t>(p), ti * 4 + 1));
                BandRaster raster;
                fill(raster, config.thermal_class_means[static_cast<std::size_t>(cls)],
                     config.thermal_soil_mean, config.thermal_noise_sd, trng, false);
                std::string fname = gt.plot_id + "_" + tp_name + "_th_0.bras";
                std::string path = (fs::path(out_dir) / "rasters" / fname).string();
                write_band_raster(raster, path);
                man << gt.plot_id << ',' << tp_name << ','
                    << tp.wilt_scores[static_cast<std::size_t>(cls)] << ',' << tp.growth_stage
                    << ",thermal,0," << path << '\n';
            }
        }
        truth.plots.push_back(std::move(gt));
    }
    man.close();
    if (!man) throw IoError("failed writing manifest: " + manifest_path);

    SynthOutput out;
    out.manifest_path = manifest_path;
    PlotManifest manifest = load_plot_manifest(manifest_path);
    std::map<std::string, SensorProfile> profiles = {{"multispectral", ms}};
    if (config.emit_thermal) profiles.emplace("thermal", th);
    out.dataset = load_dataset(manifest, profiles);
    out.truth = std::move(truth);
    return out;
}

struct BayesAccuracy {
    TimePoint time_point;
    double best_single_band = 0;
    std::size_t best_band = 0;
    double full_spectrum = 0;
    double monte_carlo = 0; // cross-check of full_spectrum
};

// Closed-form Bayes accuracy of the plot-level mean multispectral spectrum
// for equal priors: Phi(delta / (2 sigma_eff)) per band, and the linear
// discriminant over the whole spectrum. sigma_eff is the noise SD of the
// vegetation-pixel mean. A Monte Carlo estimate cross-checks the
// closed form.
inline std::vector<BayesAccuracy> oracle_bayes_accuracy(const SynthConfig& config,
                                                        std::size_t mc_draws = 100000) {
    config.validate();
    if (config.classes != 2)
        throw ConfigError("oracle_bayes_accuracy: only 2-class configs are supported");
    double n_veg = static_cast<double>(config.vegetation_pixels());
    std::vector<BayesAccuracy> out;
    for (std::size_t ti = 0; ti < config.time_points.size(); ++ti) {
        const SynthTimePoint& tp = config.time_points[ti];
        double sigma_eff = tp.noise_sd / std::sqrt(n_veg);
        BayesAccuracy acc;
        acc.time_point = tp.time_point;
        double norm2 = 0;
        for (std::size_t b = 0; b < 10; ++b) {
            double delta = std::abs(tp.class_means[1][b] - tp.class_means[0][b]);
            norm2 += delta * delta;
            double single = normal_cdf(delta / (2.0 * sigma_eff));
            if (single > acc.best_single_band) {
                acc.best_single_band = single;
                acc.best_band = b;
            }
        }
        acc.full_spectrum = normal_cdf(std::sqrt(norm2) / (2.0 * sigma_eff));

        // Monte Carlo: draw plot-mean spectra, classify with the true LDA rule
        Rng rng(derive_seed(config.seed, 0xBAE5u, ti));
        std::size_t correct = 0;
        for (std::size_t i = 0; i < mc_draws; ++i) {
            int cls = static_cast<int>(rng.next_below(2));
            double score = 0; // w.(x - midpoint), w = mu1 - mu0
            for (std::size_t b = 0; b < 10; ++b) {
                double mu = tp.class_means[static_cast<std::size_t>(cls)][b];
                double x = mu + sigma_eff * rng.next_normal();
                double wgt = tp.class_means[1][b] - tp.class_means[0][b];
                score += wgt * (x - 0.5 * (tp.class_means[0][b] + tp.class_means[1][b]));
            }
            int pred = score > 0 ? 1 : 0;
            if (pred == cls) ++correct;
        }
        acc.monte_carlo = static_cast<double>(correct) / static_cast<double>(mc_draws);
        out.push_back(acc);
    }
    return out;
}

// In-memory Gaussian feature sampler matching the generator's plot-level
// distribution; used where full raster generation is unnecessary.
inline std::pair<FeatureMatrix, std::vector<int>> synth_gaussian_features(
    const std::vector<std::vector<double>>& class_means, double sigma, std::size_t n_per_class,
    std::uint64_t seed, const std::string& name_prefix = "f") {
    if (class_means.empty()) throw ConfigError("synth_gaussian_features: no classes");
    std::size_t d = class_means[0].size();
    FeatureMatrix x;
    for (std::size_t c = 0; c < d; ++c) x.names.push_back(name_prefix + std::to_string(c));
    x.rows = class_means.size() * n_per_class;
    x.data.reserve(x.rows * d);
    std::vector<int> labels;
    labels.reserve(x.rows);
    Rng rng(seed);
    for (std::size_t cls = 0; cls < class_means.size(); ++cls) {
        if (class_means[cls].size() != d)
            throw ConfigError("synth_gaussian_features: inconsistent dimensions");
        for (std::size_t i = 0; i < n_per_class; ++i) {
            for (std::size_t b = 0; b < d; ++b)
                x.data.push_back(class_means[cls][b] + sigma * rng.next_normal());
            labels.push_back(static_cast<int>(cls));
        }
    }
    return {std::move(x), std::move(labels)};
}

} // namespace wiltscan
