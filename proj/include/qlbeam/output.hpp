#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qlbeam/diagnostics.hpp"
#include "qlbeam/state.hpp"

namespace qlbeam {

/// Column order of moment CSV files.
inline constexpr const char *kMomentCsvHeader =
    "z,mean_x,mean_p,sigma_x,sigma_p,sigma_xp,emittance,uncertainty_product,negativity_volume,r3";

struct MomentRow {
    BeamMoments moments;
    double negativity_volume;
    double r3;
};

/// Decimal text with 17 significant digits; NaN is written as "nan".
std::string format_number(double v);

void write_moment_csv(const std::filesystem::path &path, std::span<const MomentRow> rows);
std::vector<MomentRow> read_moment_csv(const std::filesystem::path &path);

/// Binary grid dump:
///   "MBGD", u32 version, u32 nx, u32 np, f64 x_length, f64 p_length,
///   f64 x_center, f64 p_center, f64 z, f64 epsilon, then nx*np f64 values
/// row-major (x slow), all little-endian.
inline constexpr std::uint32_t kGridDumpVersion = 1;
inline constexpr std::size_t kGridDumpHeaderBytes = 64;

struct GridDump {
    std::uint32_t version;
    double epsilon;
    QuasiDistribution state;
};

void write_grid_dump(const std::filesystem::path &path, const QuasiDistribution &rho,
                     double epsilon);
GridDump read_grid_dump(const std::filesystem::path &path);

/// 8-bit binary PGM (P5), width nx and height np with p increasing upward.
/// Values map linearly from [min, max] to [0, 255]; the range goes to
/// `<path>.txt` as "min <v>\nmax <v>\n".
void write_heatmap(const std::filesystem::path &path, const QuasiDistribution &rho);

}  // namespace qlbeam
