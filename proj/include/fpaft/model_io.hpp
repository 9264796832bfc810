#pragma once

#include <filesystem>
#include <iosfwd>

#include "fpaft/estimation.hpp"

namespace fpaft {

/// Current model file format version, written on the first line.
inline constexpr int kModelFormatVersion = 1;

/// Text model file: one `key value...` record per line, numbers at %.17g so a reloaded
/// model reproduces predictions bit for bit. Carries the ModelSpec, knots, estimates,
/// covariance, fit statistics and the checksum of the data it was fitted to.
void write_model(std::ostream& out, const FittedModel& fitted);
void save_model(const std::filesystem::path& path, const FittedModel& fitted);

/// Throws DataError naming the line on malformed or unsupported files.
FittedModel read_model(std::istream& in, const std::string& source = "<model>");
FittedModel load_model(const std::filesystem::path& path);

}  // namespace fpaft
