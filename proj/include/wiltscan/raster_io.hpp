#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiltscan/csv.hpp"
#include "wiltscan/error.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

// --- BRAS container ---------------------------------------------------------
// bytes 0-3  magic "BRAS"
// bytes 4-7  u32 little-endian width
// bytes 8-11 u32 little-endian height
// payload    width*height f32 little-endian, row-major

namespace detail {

inline std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void write_u32_le(unsigned char* p, std::uint32_t v) {
    p[0] = static_cast<unsigned char>(v & 0xff);
    p[1] = static_cast<unsigned char>((v >> 8) & 0xff);
    p[2] = static_cast<unsigned char>((v >> 16) & 0xff);
    p[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

} // namespace detail

inline BandRaster read_band_raster(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open raster file: " + path);
    unsigned char header[12];
    in.read(reinterpret_cast<char*>(header), 12);
    if (in.gcount() != 12 || std::memcmp(header, "BRAS", 4) != 0)
        throw DataError("malformed BRAS header in " + path);
    BandRaster r;
    r.width = detail::read_u32_le(header + 4);
    r.height = detail::read_u32_le(header + 8);
    if (r.width == 0 || r.height == 0)
        throw DataError("BRAS raster has zero dimension in " + path);
    std::size_t count = static_cast<std::size_t>(r.width) * r.height;
    std::vector<unsigned char> payload(count * 4);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size())
        throw DataError("truncated BRAS payload in " + path);
    in.peek();
    if (!in.eof()) throw DataError("trailing bytes after BRAS payload in " + path);
    r.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t bits = detail::read_u32_le(payload.data() + i * 4);
        float f;
        std::memcpy(&f, &bits, 4);
        r.values[i] = f;
    }
    r.validate();
    return r;
}

inline void write_band_raster(const BandRaster& raster, const std::string& path) {
    raster.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open raster file for writing: " + path);
    unsigned char header[12] = {'B', 'R', 'A', 'S'};
    detail::write_u32_le(header + 4, raster.width);
    detail::write_u32_le(header + 8, raster.height);
    out.write(reinterpret_cast<const char*>(header), 12);
    std::vector<unsigned char> payload(raster.values.size() * 4);
    for (std::size_t i = 0; i < raster.values.size(); ++i) {
        std::uint32_t bits;
        std::memcpy(&bits, &raster.values[i], 4);
        detail::write_u32_le(payload.data() + i * 4, bits);
    }
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("failed writing raster file: " + path);
}

// --- Sensor profiles --------------------------------------------------------

inline SensorProfile load_sensor_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sensor profile: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid sensor profile JSON in " + path + ": " + e.what());
    }
    SensorProfile p;
    try {
        p.name = j.at("name").get<std::string>();
        p.kind = sensor_kind_from_string(j.at("kind").get<std::string>());
        for (const auto& b : j.at("bands"))
            p.bands.push_back({b.at("center_nm").get<double>(), b.at("width_nm").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid sensor profile schema in " + path + ": " + e.what());
    }
    p.validate();
    return p;
}

inline void save_sensor_profile(const SensorProfile& profile, const std::string& path) {
    profile.validate();
    nlohmann::json j;
    j["name"] = profile.name;
    j["kind"] = to_string(profile.kind);
    j["bands"] = nlohmann::json::array();
    for (const auto& b : profile.bands)
        j["bands"].push_back({{"center_nm", b.center_nm}, {"width_nm", b.width_nm}});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write sensor profile: " + path);
    out << j.dump(2) << '\n';
}

// --- Plot manifest ----------------------------------------------------------
// CSV columns: plot_id, time_point, wilt_score, growth_stage, sensor,
// band_index, raster_path. One row per raster file; rows sharing
// (plot_id, time_point) form one manifest entry.

struct ManifestEntry {
    std::string plot_id;
    TimePoint time_point = TimePoint::T1;
    int wilt_score = 1; // 1-6
    std::string growth_stage;
    std::map<std::string, std::vector<std::string>> raster_paths; // sensor -> per-band paths
};

struct PlotManifest {
    std::vector<ManifestEntry> entries; // manifest row order, first occurrence
};

inline PlotManifest load_plot_manifest(const std::string& path) {
    csv::Table t = csv::read_file(path);
    std::size_t c_plot = t.column("plot_id");
    std::size_t c_tp = t.column("time_point");
    std::size_t c_score = t.column("wilt_score");
    std::size_t c_stage = t.column("growth_stage");
    std::size_t c_sensor = t.column("sensor");
    std::size_t c_band = t.column("band_index");
    std::size_t c_path = t.column("raster_path");

    PlotManifest manifest;
    std::map<std::pair<std::string, TimePoint>, std::size_t> index;
    std::set<std::tuple<std::string, TimePoint, std::string, long>> seen;

    for (const auto& row : t.rows) {
        const std::string& plot = row[c_plot];
        TimePoint tp = time_point_from_string(row[c_tp]);
        long score = csv::parse_int(row[c_score], path);
        if (score < 1 || score > 6)
            throw DataError("wilt_score " + row[c_score] + " out of range 1-6 for plot " + plot);
        long band = csv::parse_int(row[c_band], path);
        if (band < 0) throw DataError("negative band_index for plot " + plot);

        auto dup_key = std::make_tuple(plot, tp, row[c_sensor], band);
        if (!seen.insert(dup_key).second)
            throw DataError("duplicate manifest row for plot " + plot + " at " + row[c_tp] +
                            " sensor " + row[c_sensor] + " band " + row[c_band]);

        auto key = std::make_pair(plot, tp);
        auto it = index.find(key);
        if (it == index.end()) {
            ManifestEntry e;
            e.plot_id = plot;
            e.time_point = tp;
            e.wilt_score = static_cast<int>(score);
            e.growth_stage = row[c_stage];
            index.emplace(key, manifest.entries.size());
            manifest.entries.push_back(std::move(e));
            it = index.find(key);
        } else {
            const ManifestEntry& e = manifest.entries[it->second];
            if (e.wilt_score != static_cast<int>(score) || e.growth_stage != row[c_stage])
                throw DataError("inconsistent wilt_score/growth_stage for plot " + plot +
                                " at " + row[c_tp]);
        }
        auto& paths = manifest.entries[it->second].raster_paths[row[c_sensor]];
        if (static_cast<std::size_t>(band) >= paths.size())
            paths.resize(static_cast<std::size_t>(band) + 1);
        if (!paths[static_cast<std::size_t>(band)].empty())
            throw DataError("duplicate band_index for plot " + plot);
        paths[static_cast<std::size_t>(band)] = row[c_path];
    }
    return manifest;
}

// --- Dataset ----------------------------------------------------------------

struct PlotRecord {
    std::string plot_id;
    TimePoint time_point = TimePoint::T1;
    int wilt_score = 1;
    std::string growth_stage;
    std::map<std::string, std::vector<BandRaster>> rasters; // sensor -> bands in profile order

    bool has_sensor(const std::string& sensor) const { return rasters.count(sensor) > 0; }
};

struct PlotDataset {
    std::vector<PlotRecord> records; // manifest order
    std::map<std::string, SensorProfile> profiles;

    std::vector<std::size_t> records_at(TimePoint tp) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < records.size(); ++i)
            if (records[i].time_point == tp) out.push_back(i);
        return out;
    }
};

inline PlotDataset load_dataset(const PlotManifest& manifest,
                                const std::map<std::string, SensorProfile>& profiles) {
    PlotDataset ds;
    ds.profiles = profiles;
    ds.records.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries) {
        PlotRecord rec;
        rec.plot_id = entry.plot_id;
        rec.time_point = entry.time_point;
        rec.wilt_score = entry.wilt_score;
        rec.growth_stage = entry.growth_stage;
        for (const auto& [sensor, paths] : entry.raster_paths) {
            auto pit = profiles.find(sensor);
            if (pit == profiles.end())
                throw ConfigError("no sensor profile for '" + sensor + "' (plot " +
                                  entry.plot_id + ")");
            if (paths.size() != pit->second.bands.size())
                throw DataError("plot " + entry.plot_id + " has " + std::to_string(paths.size()) +
                                " rasters for sensor '" + sensor + "', profile expects " +
                                std::to_string(pit->second.bands.size()));
            std::vector<BandRaster> bands;
            bands.reserve(paths.size());
            for (const auto& p : paths) {
                if (p.empty())
                    throw DataError("missing band raster path for plot " + entry.plot_id +
                                    " sensor '" + sensor + "'");
                try {
                    bands.push_back(read_band_raster(p));
                } catch (const IoError& e) {
                    throw IoError(std::string(e.what()) + " (plot " + entry.plot_id + ")");
                }
            }
            rec.rasters.emplace(sensor, std::move(bands));
        }
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

} // namespace wiltscan
