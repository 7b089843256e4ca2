#pragma once

#include <filesystem>

#include "inma/simulator.hpp"

namespace inma {

/// Writes n1 rows of n2 comma-separated integers, one newline per row.
void save_grid_csv(const Grid& grid, const std::filesystem::path& csv_path);

/// JSON sidecar with seed, model hash, dimensions, generation mode.
void save_grid_metadata(const Grid& grid, const std::filesystem::path& meta_path);

/// Loads a grid from CSV; if meta_path is nonempty the sidecar is read back
/// into the metadata fields.
Grid load_grid(const std::filesystem::path& csv_path,
               const std::filesystem::path& meta_path = {});

}  // namespace inma
