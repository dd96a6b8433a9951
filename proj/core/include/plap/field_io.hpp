#pragma once

#include <filesystem>
#include <iosfwd>

#include "plap/grid.hpp"

namespace plap {

/// Writes one row per node (boundary included) as `x[,y],u`, preceded by
/// `# grid dim=<d> L=<Lx>[x<Ly>] n=<n>` and a column header line.
void write_field_csv(std::ostream& os, const Field& field);
void write_field_csv(const std::filesystem::path& path, const Field& field);

/// Inverse of write_field_csv. Throws ConfigError on malformed input, on a
/// row count that does not match the grid header, or on nonzero boundary
/// values.
Field read_field_csv(std::istream& is);
Field read_field_csv(const std::filesystem::path& path);

}  // namespace plap
