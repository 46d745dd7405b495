#pragma once

#include <filesystem>
#include <iosfwd>

#include "aniso/field_sim.hpp"

namespace aniso {

/// Writes `x,y,z` header then one row per point, 17 significant digits.
void write_sample_csv(std::ostream& os, const SpatialSample& sample);
void write_sample_csv(const std::filesystem::path& path, const SpatialSample& sample);

/// Reads an `x,y,z` CSV (header required; columns may appear in any order,
/// extra columns are ignored). Throws IoError on unreadable input and
/// InvalidArgument on malformed rows or points outside the domain.
SpatialSample read_sample_csv(std::istream& is, double lambda);
SpatialSample read_sample_csv(const std::filesystem::path& path, double lambda);

}  // namespace aniso
