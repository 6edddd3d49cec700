#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wiltscan/band_select.hpp"
#include "wiltscan/csv.hpp"
#include "wiltscan/error.hpp"
#include "wiltscan/forest.hpp"
#include "wiltscan/fusion.hpp"
#include "wiltscan/labels.hpp"
#include "wiltscan/pipeline.hpp"
#include "wiltscan/raster_io.hpp"
#include "wiltscan/stats.hpp"
#include "wiltscan/svg.hpp"
#include "wiltscan/synth.hpp"
#include "wiltscan/threads.hpp"

namespace fs = std::filesystem;
using namespace wiltscan;

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

std::map<std::string, SensorProfile> load_profiles(const std::vector<std::string>& paths) {
    std::map<std::string, SensorProfile> out;
    for (const auto& p : paths) {
        SensorProfile prof = load_sensor_profile(p);
        if (!out.emplace(prof.name, prof).second)
            throw ConfigError("duplicate sensor profile name: " + prof.name);
    }
    return out;
}

std::map<TimePoint, double> parse_ratios(const std::vector<std::string>& specs) {
    std::map<TimePoint, double> out;
    for (const auto& s : specs) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected TP=ratio, got '" + s + "'");
        TimePoint tp = time_point_from_string(s.substr(0, eq));
        double r = csv::parse_double(s.substr(eq + 1), "--thermal-ratio");
        if (r <= 0 || r >= 1) throw ConfigError("thermal ratio must be in (0,1): " + s);
        out[tp] = r;
    }
    return out;
}

PlotDataset load_dataset_cli(const std::string& manifest_path,
                             const std::vector<std::string>& profile_paths) {
    return load_dataset(load_plot_manifest(manifest_path), load_profiles(profile_paths));
}

void write_features_csv(const ExtractedFeatures& ex, const std::string& path) {
    csv::Writer w(path);
    std::vector<std::string> header = {"plot_id", "time_point", "wilt_score", "growth_stage"};
    header.insert(header.end(), ex.features.names.begin(), ex.features.names.end());
    w.row(header);
    for (std::size_t r = 0; r < ex.features.rows; ++r) {
        std::vector<std::string> row = {ex.plot_ids[r], to_string(ex.time_points[r]),
                                        std::to_string(ex.wilt_scores[r]), ex.growth_stages[r]};
        for (std::size_t c = 0; c < ex.features.cols(); ++c)
            row.push_back(csv::format_double(ex.features.at(r, c)));
        w.row(row);
    }
}

ExtractedFeatures read_features_csv(const std::string& path) {
    csv::Table t = csv::read_file(path);
    std::size_t c_plot = t.column("plot_id");
    std::size_t c_tp = t.column("time_point");
    std::size_t c_score = t.column("wilt_score");
    std::size_t c_stage = t.column("growth_stage");
    std::vector<std::size_t> meta = {c_plot, c_tp, c_score, c_stage};
    ExtractedFeatures ex;
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (std::find(meta.begin(), meta.end(), c) == meta.end())
            ex.features.names.push_back(t.header[c]);
    for (const auto& row : t.rows) {
        ex.plot_ids.push_back(row[c_plot]);
        ex.time_points.push_back(time_point_from_string(row[c_tp]));
        ex.wilt_scores.push_back(static_cast<int>(csv::parse_int(row[c_score], path)));
        ex.growth_stages.push_back(row[c_stage]);
        for (std::size_t c = 0; c < t.header.size(); ++c)
            if (std::find(meta.begin(), meta.end(), c) == meta.end())
                ex.features.data.push_back(csv::parse_double(row[c], path));
        ++ex.features.rows;
    }
    ex.features.validate();
    return ex;
}

std::vector<std::size_t> feature_set_columns(const FeatureMatrix& x, const std::string& set) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        bool is_vi = x.names[c].find("_vi_") != std::string::npos;
        if (set == "all" || (set == "bands" && !is_vi) || (set == "indices" && is_vi))
            cols.push_back(c);
    }
    if (cols.empty()) throw DataError("feature set '" + set + "' selects no columns");
    return cols;
}

std::string join_indices(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
}

// --- subcommand bodies -------------------------------------------------------

int cmd_synth(const std::string& config_path, const std::string& out_dir, bool seed_set,
              std::uint64_t seed) {
    SynthConfig cfg = config_path.empty() ? default_synth_config() : load_synth_config(config_path);
    if (seed_set) cfg.seed = seed;
    ensure_dir(out_dir);
    SynthOutput out = generate_synthetic_dataset(cfg, out_dir);
    std::cout << out.manifest_path << '\n';
    return 0;
}

int cmd_extract(const std::string& manifest, const std::vector<std::string>& profiles,
                const std::string& out_dir, std::uint64_t seed,
                const std::vector<std::string>& ratio_specs) {
    PlotDataset ds = load_dataset_cli(manifest, profiles);
    ExtractOptions opt;
    opt.seed = seed;
    opt.thermal_veg_ratio = parse_ratios(ratio_specs);
    ExtractedFeatures ex = extract_features(ds, opt);
    ensure_dir(out_dir);
    write_features_csv(ex, (fs::path(out_dir) / "features.csv").string());
    for (const auto& f : ex.failures) std::cerr << "extract: " << f << '\n';
    if (!ex.failures.empty()) {
        std::cerr << "extract: " << ex.failures.size() << " record(s) failed\n";
        return DataError("").exit_code();
    }
    return 0;
}

int cmd_classify(const std::string& features_path, const std::string& scheme_name, int k, int trees,
                 std::uint64_t seed, const std::vector<std::string>& sets,
                 const std::string& out_dir) {
    ExtractedFeatures ex = read_features_csv(features_path);
    LabelScheme scheme = label_scheme_from_string(scheme_name);
    std::vector<int> labels = regroup_labels(ex.wilt_scores, scheme);
    BalancedSubset bal = balance_classes(ex.features, labels, derive_seed(seed, 0xBA1Au));

    ForestConfig cfg;
    cfg.n_estimators = trees;
    ensure_dir(out_dir);
    nlohmann::json reports;
    csv::Writer table((fs::path(out_dir) / "classify_accuracy.csv").string());
    table.row({"feature_set", "mean_accuracy", "std_dev"});
    for (const auto& set : sets) {
        FeatureMatrix sub = select_columns(bal.features, feature_set_columns(bal.features, set));
        cfg.seed = derive_seed(seed, std::hash<std::string>{}(set));
        EvalReport rep = cross_validate(sub, bal.labels, k, cfg);
        reports[set] = report_to_json(rep, cfg);
        table.row({set, csv::format_double(rep.mean_accuracy), csv::format_double(rep.std_dev)});
        std::cout << set << ": " << rep.mean_accuracy << " +/- " << rep.std_dev << '\n';
    }
    reports["scheme"] = to_string(scheme);
    write_json(reports, (fs::path(out_dir) / "eval_report.json").string());
    return 0;
}

int cmd_select_bands(const std::string& features_path, const std::string& mode,
                     const std::string& scheme_name, int k, int trees, std::uint64_t seed,
                     GaConfig ga, const std::string& out_dir) {
    ExtractedFeatures ex = read_features_csv(features_path);
    std::vector<int> labels =
        regroup_labels(ex.wilt_scores, label_scheme_from_string(scheme_name));
    // band features only; indices would leak multi-band information
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < ex.features.cols(); ++c)
        if (ex.features.names[c].find("_vi_") == std::string::npos) cols.push_back(c);
    FeatureMatrix bands = select_columns(ex.features, cols);

    ForestConfig forest;
    forest.n_estimators = trees;
    forest.seed = derive_seed(seed, 0xF03E57u);
    ensure_dir(out_dir);
    std::string csv_path = (fs::path(out_dir) / "band_search.csv").string();

    if (mode == "exhaustive") {
        auto results = exhaustive_band_search(bands, labels, forest, k);
        csv::Writer w(csv_path);
        w.row({"band_subset", "size", "mean_accuracy", "std_dev"});
        for (const auto& r : results)
            w.row({join_indices(r.band_subset), std::to_string(r.band_subset.size()),
                   csv::format_double(r.mean_accuracy), csv::format_double(r.std_dev)});
        auto sizes = summarize_by_size(results);
        SvgChart chart;
        chart.title = "Accuracy by band-subset size";
        chart.x_label = "subset size";
        chart.y_label = "cross-validated accuracy";
        SvgSeries mean{"mean", {}, {}}, lo{"min", {}, {}}, hi{"max", {}, {}};
        for (const auto& s : sizes) {
            double x = static_cast<double>(s.size);
            mean.x.push_back(x); mean.y.push_back(s.mean_accuracy);
            lo.x.push_back(x); lo.y.push_back(s.min_accuracy);
            hi.x.push_back(x); hi.y.push_back(s.max_accuracy);
        }
        chart.series = {mean, lo, hi};
        write_svg_chart(chart, (fs::path(out_dir) / "band_search.svg").string());
        const auto& best = best_combination(results);
        std::cout << "best subset: " << join_indices(best.band_subset) << " accuracy "
                  << best.mean_accuracy << '\n';
        return 0;
    }
    if (mode != "ga") throw ConfigError("mode must be 'ga' or 'exhaustive'");

    ga.seed = derive_seed(seed, 0x6A5EEDu);
    GaResult res = ga_select_bands(bands, labels, ga, forest, k);
    for (const auto& wmsg : res.warnings) std::cerr << "select-bands: " << wmsg << '\n';
    csv::Writer w(csv_path);
    w.row({"selected_bands", "best_fitness"});
    w.row({join_indices(res.selected), csv::format_double(res.best_fitness)});
    csv::Writer tr((fs::path(out_dir) / "ga_trace.csv").string());
    tr.row({"generation", "best_fitness"});
    for (std::size_t g = 0; g < res.fitness_trace.size(); ++g)
        tr.row({std::to_string(g), csv::format_double(res.fitness_trace[g])});
    SvgChart chart;
    chart.title = "GA best fitness per generation";
    chart.x_label = "generation";
    chart.y_label = "cross-validated accuracy";
    SvgSeries s{"best fitness", {}, {}};
    for (std::size_t g = 0; g < res.fitness_trace.size(); ++g) {
        s.x.push_back(static_cast<double>(g));
        s.y.push_back(res.fitness_trace[g]);
    }
    chart.series = {s};
    write_svg_chart(chart, (fs::path(out_dir) / "band_search.svg").string());
    std::cout << "selected bands: " << join_indices(res.selected) << " fitness "
              << res.best_fitness << '\n';
    return 0;
}

int cmd_fuse(const std::string& manifest, const std::vector<std::string>& profiles,
             const std::vector<std::string>& groups, bool growth_stage,
             const std::string& scheme_name, int k, int trees, std::uint64_t seed, bool non_strict,
             const std::vector<std::string>& ratio_specs, const std::string& out_dir) {
    PlotDataset ds = load_dataset_cli(manifest, profiles);
    ExtractOptions opt;
    opt.seed = seed;
    opt.thermal_veg_ratio = parse_ratios(ratio_specs);
    GroupedFeatures grouped = assemble_feature_groups(ds, groups, growth_stage, opt);
    std::vector<int> labels =
        regroup_labels(grouped.wilt_scores, label_scheme_from_string(scheme_name));
    ForestConfig forest;
    forest.n_estimators = trees;
    forest.seed = derive_seed(seed, 0xF05Eu);
    EliminationTrace trace = backward_eliminate(grouped, labels, forest, k, !non_strict);
    ensure_dir(out_dir);
    write_json(trace_to_json(trace), (fs::path(out_dir) / "elimination.json").string());
    std::cout << "initial: " << trace.initial_accuracy << '\n';
    for (const auto& step : trace.steps)
        std::cout << "removed " << step.removed_group << " -> " << step.mean_accuracy << '\n';
    std::cout << "final:";
    for (const auto& g : trace.final_groups) std::cout << ' ' << g;
    std::cout << " (" << trace.final_accuracy << ")\n";
    return 0;
}

int cmd_early(const std::string& manifest, const std::vector<std::string>& profiles,
              std::uint64_t seed, int k, int trees, const std::vector<std::string>& set_names,
              const std::vector<std::string>& ratio_specs, const std::string& out_dir) {
    PlotDataset ds = load_dataset_cli(manifest, profiles);
    EarlyDetectionOptions opt;
    opt.extract.seed = seed;
    opt.extract.thermal_veg_ratio = parse_ratios(ratio_specs);
    opt.balance_seed = seed;
    EarlyDetectionDataset ed = relabel_early(ds, opt);
    ensure_dir(out_dir);

    // band-wise t-tests per time point, plus an |t| chart over band columns
    SvgChart tchart;
    tchart.title = "Band-wise class separation";
    tchart.x_label = "band column";
    tchart.y_label = "|t|";
    for (TimePoint tp : ed.time_points) {
        auto report = bandwise_ttest_report(ed, tp);
        csv::Writer w((fs::path(out_dir) / ("ttest_" + to_string(tp) + ".csv")).string());
        w.row({"feature", "t", "df", "p", "stars"});
        SvgSeries s{to_string(tp), {}, {}};
        std::size_t band_i = 0;
        for (const auto& ft : report) {
            w.row({ft.feature, csv::format_double(ft.result.t_statistic),
                   csv::format_double(ft.result.degrees_of_freedom),
                   csv::format_double(ft.result.p_value), ft.result.stars});
            if (ft.feature.find("_vi_") == std::string::npos) {
                s.x.push_back(static_cast<double>(band_i++));
                s.y.push_back(std::abs(ft.result.t_statistic));
            }
        }
        tchart.series.push_back(std::move(s));
    }
    write_svg_chart(tchart, (fs::path(out_dir) / "ttest_bands.svg").string());

    // per-plot index values in long form, for box plots
    {
        csv::Writer w((fs::path(out_dir) / "vi_values.csv").string());
        w.row({"time_point", "plot_id", "label", "feature", "value"});
        for (TimePoint tp : ed.time_points) {
            const FeatureMatrix& x = ed.features.at(tp);
            for (std::size_t c = 0; c < x.cols(); ++c) {
                if (x.names[c].find("_vi_") == std::string::npos) continue;
                for (std::size_t r = 0; r < x.rows; ++r)
                    w.row({to_string(tp), ed.plot_ids[r], std::to_string(ed.labels[r]),
                           x.names[c], csv::format_double(x.at(r, c))});
            }
        }
    }

    std::vector<EarlyFeatureSet> sets;
    for (const auto& n : set_names) {
        if (n == "bands") sets.push_back(EarlyFeatureSet::Bands);
        else if (n == "indices") sets.push_back(EarlyFeatureSet::Indices);
        else if (n == "visible-only") sets.push_back(EarlyFeatureSet::VisibleOnly);
        else throw ConfigError("unknown feature set: " + n);
    }
    ForestConfig forest;
    forest.n_estimators = trees;
    forest.seed = derive_seed(seed, 0xEA12u);
    auto rows = early_detection_report(ed, sets, forest, k);
    csv::Writer w((fs::path(out_dir) / "early_accuracy.csv").string());
    w.row({"time_point", "feature_set", "mean_accuracy", "std_dev"});
    std::map<EarlyFeatureSet, SvgSeries> series;
    for (const auto& row : rows) {
        w.row({to_string(row.time_point), to_string(row.feature_set),
               csv::format_double(row.mean_accuracy), csv::format_double(row.std_dev)});
        auto& s = series[row.feature_set];
        s.label = to_string(row.feature_set);
        s.x.push_back(static_cast<double>(days_after_planting(row.time_point)));
        s.y.push_back(row.mean_accuracy);
    }
    SvgChart achart;
    achart.title = "Classification accuracy over time";
    achart.x_label = "days after planting";
    achart.y_label = "cross-validated accuracy";
    for (auto& [_, s] : series) achart.series.push_back(std::move(s));
    write_svg_chart(achart, (fs::path(out_dir) / "early_accuracy.svg").string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wiltscan: drought-stress phenotyping pipeline"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic ground-truth dataset");
    std::string sy_config, sy_out;
    std::uint64_t sy_seed = 0;
    synth->add_option("--config", sy_config, "synth config JSON");
    synth->add_option("--out", sy_out, "output directory")->required();
    auto* sy_seed_opt = synth->add_option("--seed", sy_seed, "override config seed");

    // extract
    auto* extract = app.add_subcommand("extract", "segment plots and extract features");
    std::string ex_manifest, ex_out;
    std::vector<std::string> ex_profiles, ex_ratios;
    std::uint64_t ex_seed = 0;
    extract->add_option("--manifest", ex_manifest, "plot manifest CSV")->required();
    extract->add_option("--profile", ex_profiles, "sensor profile JSON")->required();
    extract->add_option("--out", ex_out, "output directory")->required();
    extract->add_option("--seed", ex_seed, "seed")->required();
    extract->add_option("--thermal-ratio", ex_ratios, "expected vegetation ratio, TP=r");

    // classify
    auto* classify = app.add_subcommand("classify", "cross-validated severity classification");
    std::string cl_features, cl_scheme = "two-class", cl_out;
    int cl_k = 5, cl_trees = 100;
    std::uint64_t cl_seed = 0;
    std::vector<std::string> cl_sets = {"all", "bands", "indices"};
    classify->add_option("--features", cl_features, "features CSV")->required();
    classify->add_option("--scheme", cl_scheme, "raw | three-class | two-class");
    classify->add_option("--k", cl_k, "CV folds");
    classify->add_option("--trees", cl_trees, "forest size");
    classify->add_option("--seed", cl_seed, "seed")->required();
    classify->add_option("--feature-set", cl_sets, "all | bands | indices");
    classify->add_option("--out", cl_out, "output directory")->required();

    // select-bands
    auto* select = app.add_subcommand("select-bands", "band-subset optimization");
    std::string sb_features, sb_mode = "exhaustive", sb_scheme = "two-class", sb_out;
    int sb_k = 5, sb_trees = 100;
    std::uint64_t sb_seed = 0;
    GaConfig sb_ga;
    select->add_option("--features", sb_features, "features CSV")->required();
    select->add_option("--mode", sb_mode, "ga | exhaustive");
    select->add_option("--scheme", sb_scheme, "raw | three-class | two-class");
    select->add_option("--k", sb_k, "CV folds");
    select->add_option("--trees", sb_trees, "forest size");
    select->add_option("--seed", sb_seed, "seed")->required();
    select->add_option("--population", sb_ga.population_size, "GA population");
    select->add_option("--generations", sb_ga.generations, "GA generations");
    select->add_option("--subset-size", sb_ga.subset_size, "GA subset size");
    select->add_option("--out", sb_out, "output directory")->required();

    // fuse
    auto* fuse = app.add_subcommand("fuse", "multi-sensor fusion via backward elimination");
    std::string fu_manifest, fu_scheme = "two-class", fu_out;
    std::vector<std::string> fu_profiles, fu_groups, fu_ratios;
    bool fu_growth = false, fu_non_strict = false;
    int fu_k = 5, fu_trees = 100;
    std::uint64_t fu_seed = 0;
    fuse->add_option("--manifest", fu_manifest, "plot manifest CSV")->required();
    fuse->add_option("--profile", fu_profiles, "sensor profile JSON")->required();
    fuse->add_option("--groups", fu_groups, "feature group names")->required();
    fuse->add_flag("--growth-stage", fu_growth, "append growth stage as a group");
    fuse->add_option("--scheme", fu_scheme, "raw | three-class | two-class");
    fuse->add_option("--k", fu_k, "CV folds");
    fuse->add_option("--trees", fu_trees, "forest size");
    fuse->add_option("--seed", fu_seed, "seed")->required();
    fuse->add_flag("--non-strict", fu_non_strict, "accept ties when removing groups");
    fuse->add_option("--thermal-ratio", fu_ratios, "expected vegetation ratio, TP=r");
    fuse->add_option("--out", fu_out, "output directory")->required();

    // early
    auto* early = app.add_subcommand("early", "early-detection statistics and accuracy");
    std::string ea_manifest, ea_out;
    std::vector<std::string> ea_profiles, ea_ratios;
    std::vector<std::string> ea_sets = {"bands", "indices", "visible-only"};
    int ea_k = 5, ea_trees = 100;
    std::uint64_t ea_seed = 0;
    early->add_option("--manifest", ea_manifest, "plot manifest CSV")->required();
    early->add_option("--profile", ea_profiles, "sensor profile JSON")->required();
    early->add_option("--seed", ea_seed, "seed")->required();
    early->add_option("--k", ea_k, "CV folds");
    early->add_option("--trees", ea_trees, "forest size");
    early->add_option("--feature-set", ea_sets, "bands | indices | visible-only");
    early->add_option("--thermal-ratio", ea_ratios, "expected vegetation ratio, TP=r");
    early->add_option("--out", ea_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        set_thread_count(threads);
        if (synth->parsed())
            return cmd_synth(sy_config, sy_out, sy_seed_opt->count() > 0, sy_seed);
        if (extract->parsed())
            return cmd_extract(ex_manifest, ex_profiles, ex_out, ex_seed, ex_ratios);
        if (classify->parsed())
            return cmd_classify(cl_features, cl_scheme, cl_k, cl_trees, cl_seed, cl_sets, cl_out);
        if (select->parsed())
            return cmd_select_bands(sb_features, sb_mode, sb_scheme, sb_k, sb_trees, sb_seed,
                                    sb_ga, sb_out);
        if (fuse->parsed())
            return cmd_fuse(fu_manifest, fu_profiles, fu_groups, fu_growth, fu_scheme, fu_k,
                            fu_trees, fu_seed, fu_non_strict, fu_ratios, fu_out);
        if (early->parsed())
            return cmd_early(ea_manifest, ea_profiles, ea_seed, ea_k, ea_trees, ea_sets, ea_ratios,
                             ea_out);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
