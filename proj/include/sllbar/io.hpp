#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sllbar/ensemble.hpp"
#include "sllbar/field.hpp"
#include "sllbar/integrator.hpp"

namespace sllbar {

/// File-system failure; the message carries the offending path. The CLI maps
/// it to exit status 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// git describe of the source tree at build time.
std::string version_string();

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Creates `dir`. An existing non-empty directory is an IoError unless
/// `overwrite` is set.
void prepare_output_dir(const std::filesystem::path& dir, bool overwrite);

inline constexpr const char* kSeriesHeader = "t,l2,l4,h1,h2,h3,grad_l2,theta_arg";

/// Header row then one row per sample.
void write_series_csv(const std::filesystem::path& file, const TrajectoryRecord& rec);
std::string series_csv(const TrajectoryRecord& rec);

/// Generic CSV with the given header; every row must have header.size() cells.
void write_table_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

void write_json(const std::filesystem::path& file, const nlohmann::json& j);

/// Snapshot layout (little-endian):
///   "SLLB" | u32 version = 1 | u32 dim | dim x (u32 N_i, f64 L_i)
///   | 3 blocks of prod N_i f64 coefficients, component-major, each block
///     row-major over multi-indices with axis 0 slowest.
/// The pad factor is not stored; reading uses the default of 2.
void write_snapshot(const std::filesystem::path& file, const SpectralField& u);
SpectralField read_snapshot(const std::filesystem::path& file, double pad_factor = 2.0);

nlohmann::json to_json(const TrajectoryRecord& rec, bool include_series = false);
nlohmann::json to_json(const Estimate& e);

}  // namespace sllbar
