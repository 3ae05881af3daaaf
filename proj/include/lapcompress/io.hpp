#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "lapcompress/types.hpp"

namespace lapcompress {

// Shortest representation that round-trips exactly (std::to_chars).
std::string format_double(double v);

// Parses a double; throws IoError mentioning `context` on failure.
double parse_double(const std::string& token, const std::string& context);

std::vector<std::string> split_csv_line(const std::string& line);

// Writes to a temp file in the same directory, then renames into place.
void atomic_write_text(const std::filesystem::path& file, const std::string& content);

std::vector<std::string> read_lines(const std::filesystem::path& file);

// Snapshot CSV, simulation form: header `instance_id,time_index,node_0,...`.
void write_snapshots_csv(const std::vector<Snapshot>& snapshots,
                         const std::filesystem::path& file);

// Strict reader for both snapshot CSV forms. The simulation form carries an
// instance_id column; the field form starts at time_index (instance_id is set
// to 0). Any unparseable or missing cell is an error naming the line; lenient
// field loading with repair lives in ingest.
std::vector<Snapshot> read_snapshots_csv(const std::filesystem::path& file);

// Coordinates CSV: header `node,x,y`, one row per node in index order.
void write_coords_csv(const std::vector<std::array<double, 2>>& coords,
                      const std::filesystem::path& file);
std::vector<std::array<double, 2>> read_coords_csv(const std::filesystem::path& file);

}  // namespace lapcompress
