#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wiltscan/error.hpp"
#include "wiltscan/types.hpp"

namespace wiltscan {

enum class Vi {
    NDVI, PRI, RARSa, RARSb, RARSc, RDVI, EVI, GCI, MSAVI, NDRE, RECI, REV,
    ARI, NDLI, NMDI, NWI, PSRI, VREI2,
    // visible-only, computable from the RGB bands
    RGBVI, VARI, GLI, MGRVI, ExB, ExR, ExG, ExGR,
};

inline constexpr std::array<Vi, 26> all_vegetation_indices = {
    Vi::NDVI, Vi::PRI, Vi::RARSa, Vi::RARSb, Vi::RARSc, Vi::RDVI, Vi::EVI, Vi::GCI,
    Vi::MSAVI, Vi::NDRE, Vi::RECI, Vi::REV, Vi::ARI, Vi::NDLI, Vi::NMDI, Vi::NWI,
    Vi::PSRI, Vi::VREI2, Vi::RGBVI, Vi::VARI, Vi::GLI, Vi::MGRVI, Vi::ExB, Vi::ExR,
    Vi::ExG, Vi::ExGR,
};

inline const char* to_string(Vi id) {
    switch (id) {
        case Vi::NDVI: return "NDVI";
        case Vi::PRI: return "PRI";
        case Vi::RARSa: return "RARSa";
        case Vi::RARSb: return "RARSb";
        case Vi::RARSc: return "RARSc";
        case Vi::RDVI: return "RDVI";
        case Vi::EVI: return "EVI";
        case Vi::GCI: return "GCI";
        case Vi::MSAVI: return "MSAVI";
        case Vi::NDRE: return "NDRE";
        case Vi::RECI: return "RECI";
        case Vi::REV: return "REV";
        case Vi::ARI: return "ARI";
        case Vi::NDLI: return "NDLI";
        case Vi::NMDI: return "NMDI";
        case Vi::NWI: return "NWI";
        case Vi::PSRI: return "PSRI";
        case Vi::VREI2: return "VREI2";
        case Vi::RGBVI: return "RGBVI";
        case Vi::VARI: return "VARI";
        case Vi::GLI: return "GLI";
        case Vi::MGRVI: return "MGRVI";
        case Vi::ExB: return "ExB";
        case Vi::ExR: return "ExR";
        case Vi::ExG: return "ExG";
        case Vi::ExGR: return "ExGR";
    }
    return "?";
}

inline Vi vi_from_string(const std::string& s) {
    for (Vi id : all_vegetation_indices)
        if (s == to_string(id)) return id;
    throw ConfigError("unknown vegetation index: " + s);
}

inline bool is_visible_only(Vi id) {
    switch (id) {
        case Vi::RGBVI:
        case Vi::VARI:
        case Vi::GLI:
        case Vi::MGRVI:
        case Vi::ExB:
        case Vi::ExR:
        case Vi::ExG:
        case Vi::ExGR:
            return true;
        default:
            return false;
    }
}

inline std::vector<Vi> visible_only_indices() {
    std::vector<Vi> out;
    for (Vi id : all_vegetation_indices)
        if (is_visible_only(id)) out.push_back(id);
    return out;
}

inline std::vector<Vi> non_visible_indices() {
    std::vector<Vi> out;
    for (Vi id : all_vegetation_indices)
        if (!is_visible_only(id)) out.push_back(id);
    return out;
}

// The twelve multispectral-sensor indices (those whose wavelengths fall on
// the 10-band camera and outside the SWIR range).
inline std::vector<Vi> multispectral_indices() {
    return {Vi::NDVI, Vi::PRI, Vi::RARSa, Vi::RARSb, Vi::RDVI, Vi::EVI,
            Vi::GCI, Vi::MSAVI, Vi::NDRE, Vi::RECI, Vi::REV, Vi::ARI};
}

// Some published formulas contain typographical slips; the compat flags
// switch to the literature variants. Defaults follow the printed forms.
struct ViOptions {
    double tolerance_nm = 65.0;
    bool literature_gli = false;
    bool literature_mgrvi = false;
};

struct BandResolution {
    double requested_nm = 0;
    std::size_t resolved = 0;
    double offset_nm = 0;
};

// Nearest band center within tolerance; ties go to the lower center.
inline BandResolution resolve_band(const SensorProfile& profile, double wavelength_nm,
                                   double tolerance_nm) {
    if (profile.kind == SensorKind::Thermal)
        throw ConfigError("resolve_band: thermal profiles carry no wavelengths");
    if (profile.bands.empty()) throw ConfigError("resolve_band: empty profile");
    std::size_t best = 0;
    double best_off = std::abs(profile.bands[0].center_nm - wavelength_nm);
    for (std::size_t i = 1; i < profile.bands.size(); ++i) {
        double off = std::abs(profile.bands[i].center_nm - wavelength_nm);
        if (off < best_off) { // strict: earlier (lower) center wins ties
            best_off = off;
            best = i;
        }
    }
    if (best_off > tolerance_nm)
        throw DataError("no band within " + std::to_string(tolerance_nm) + " nm of " +
                        std::to_string(wavelength_nm) + " nm on profile '" + profile.name + "'");
    return {wavelength_nm, best, best_off};
}

namespace detail {

// Blue wavelength: the multispectral camera's explicit blue band, p450 elsewhere.
inline double blue_nm(SensorKind kind) {
    return kind == SensorKind::Multispectral ? 475.0 : 450.0;
}

inline std::vector<double> vi_wavelengths(Vi id, SensorKind kind) {
    switch (id) {
        case Vi::NDVI: return {780, 670};
        case Vi::PRI: return {531, 570};
        case Vi::RARSa: return {675, 700};
        case Vi::RARSb: return {675, 650, 700};
        case Vi::RARSc: return {760, 500};
        case Vi::RDVI: return {800, 670};
        case Vi::EVI: return {800, 670, blue_nm(kind)};
        case Vi::GCI: return {800, 570};
        case Vi::MSAVI: return {800, 670};
        case Vi::NDRE: return {790, 720};
        case Vi::RECI: return {800, 740};
        case Vi::REV: return {740, 670};
        case Vi::ARI: return {570, 740};
        case Vi::NDLI: return {1754, 1680};
        case Vi::NMDI: return {860, 1640, 2130};
        case Vi::NWI: return {970, 900};
        case Vi::PSRI: return {680, 500, 750};
        case Vi::VREI2: return {734, 747, 715, 726};
        case Vi::RGBVI: return {570, 450, 670};
        case Vi::VARI: return {570, 670, 450};
        case Vi::GLI: return {570, 670, 450};
        case Vi::MGRVI: return {570, 670};
        case Vi::ExB: return {450, 570, 670};
        case Vi::ExR: return {670, 570, 450};
        case Vi::ExG: return {570, 670, 450};
        case Vi::ExGR: return {570, 670, 450};
    }
    throw InternalError("vi_wavelengths: unhandled index");
}

struct ViMath {
    Vi id;

    [[noreturn]] void domain(const std::string& what) const {
        throw DataError(std::string("numeric-domain error in ") + to_string(id) + ": " + what);
    }

    double div(double num, double den) const {
        if (den == 0.0) domain("division by zero");
        return num / den;
    }

    double nd(double a, double b) const { return div(a - b, a + b); }

    double sqrt_nn(double x) const {
        if (x < 0.0) domain("square root of negative value");
        return std::sqrt(x);
    }

    double log10_recip(double p) const {
        if (p <= 0.0) domain("log of non-positive reflectance");
        return std::log10(1.0 / p);
    }
};

} // namespace detail

// Evaluates the formula for one index given reflectance as a function of
// wavelength. Lookup is called once per distinct wavelength in the formula.
template <typename Lookup>
double evaluate_vi(Vi id, SensorKind kind, Lookup&& p, const ViOptions& opt = {}) {
    detail::ViMath m{id};
    switch (id) {
        case Vi::NDVI: return m.nd(p(780), p(670));
        case Vi::PRI: return m.nd(p(531), p(570));
        case Vi::RARSa: return m.div(p(675), p(700));
        case Vi::RARSb: return m.div(p(675), p(650) * p(700));
        case Vi::RARSc: return m.div(p(760), p(500));
        case Vi::RDVI: return m.div(p(800) - p(670), m.sqrt_nn(p(800) + p(670)));
        case Vi::EVI:
            return 2.5 * m.div(p(800) - p(670),
                               p(800) + 6.0 * p(670) - 7.5 * p(detail::blue_nm(kind)) + 1.0);
        case Vi::GCI: return m.div(p(800), p(570)) - 1.0;
        case Vi::MSAVI: {
            double a = p(800);
            double arg = (2.0 * a + 1.0) * (2.0 * a + 1.0) - 8.0 * (a - p(670));
            return (2.0 * a + 1.0 - m.sqrt_nn(arg)) / 2.0;
        }
        case Vi::NDRE: return m.nd(p(790), p(720));
        case Vi::RECI: return m.div(p(800), p(740)) - 1.0;
        case Vi::REV: return m.div(p(740), m.sqrt_nn(p(670)));
        case Vi::ARI: return m.div(1.0, p(570)) - m.div(1.0, p(740));
        case Vi::NDLI: return m.log10_recip(p(1754)) - m.log10_recip(p(1680));
        case Vi::NMDI: {
            double swir = p(1640) - p(2130);
            return m.div(p(860) - swir, p(860) + swir);
        }
        case Vi::NWI: return m.nd(p(970), p(900));
        case Vi::PSRI: return m.div(p(680) - p(500), p(750));
        case Vi::VREI2: return m.div(p(734) - p(747), p(715) + p(726));
        case Vi::RGBVI: {
            double g = p(570), b = p(450), r = p(670);
            return m.nd(g * g, b * r);
        }
        case Vi::VARI: {
            double g = p(570), r = p(670), b = p(450);
            return m.div(g - r, g + r - b);
        }
        case Vi::GLI: {
            double g = p(570), r = p(670), b = p(450);
            double den = opt.literature_gli ? (2.0 * g + r + b) : (-r - b);
            return m.div(2.0 * g - r - b, den);
        }
        case Vi::MGRVI: {
            double g = p(570), r = p(670);
            double den = opt.literature_mgrvi ? (g * g + r * r) : (r * r + r * r);
            return m.div(g * g - r * r, den);
        }
        case Vi::ExB: {
            double g = p(570), r = p(670), b = p(450);
            return m.div(1.4 * b - g, g + r + b);
        }
        case Vi::ExR: {
            double g = p(570), r = p(670), b = p(450);
            return m.div(1.4 * r - g, g + r + b);
        }
        case Vi::ExG: return 2.0 * p(570) - p(670) - p(450);
        case Vi::ExGR: {
            double g = p(570), r = p(670), b = p(450);
            double exg = 2.0 * g - r - b;
            double exr = m.div(1.4 * r - g, g + r + b);
            return exg - exr;
        }
    }
    throw InternalError("evaluate_vi: unhandled index");
}

inline double compute_index(const Spectrum& spectrum, const SensorProfile& profile, Vi id,
                            const ViOptions& opt = {}) {
    if (spectrum.values.size() != profile.bands.size())
        throw DataError("spectrum length does not match profile band count");
    auto lookup = [&](double nm) {
        BandResolution res = resolve_band(profile, nm, opt.tolerance_nm);
        return spectrum.values[res.resolved];
    };
    return evaluate_vi(id, profile.kind, lookup, opt);
}

struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;
};

// One value per id, in canonical id order. Unresolvable indices are reported
// together rather than silently dropped.
inline FeatureVector compute_all_indices(const Spectrum& spectrum, const SensorProfile& profile,
                                         const std::vector<Vi>& ids, const ViOptions& opt = {}) {
    if (ids.empty()) throw ConfigError("compute_all_indices: empty index set");
    // keep canonical order, drop duplicates
    std::vector<Vi> ordered;
    for (Vi id : all_vegetation_indices) {
        for (Vi want : ids)
            if (want == id) {
                ordered.push_back(id);
                break;
            }
    }
    std::string unresolvable;
    for (Vi id : ordered) {
        for (double nm : detail::vi_wavelengths(id, profile.kind)) {
            try {
                resolve_band(profile, nm, opt.tolerance_nm);
            } catch (const DataError&) {
                if (!unresolvable.empty()) unresolvable += ", ";
                unresolvable += to_string(id);
                break;
            }
        }
    }
    if (!unresolvable.empty())
        throw DataError("indices unresolvable on profile '" + profile.name +
                        "': " + unresolvable);
    FeatureVector out;
    for (Vi id : ordered) {
        out.names.push_back(to_string(id));
        out.values.push_back(compute_index(spectrum, profile, id, opt));
    }
    return out;
}

} // namespace wiltscan
