#pragma once

#include "json.hpp"
#include <string>
#include <vector>

#include "spm/gpca.hpp"

namespace spm::io {

// STF1: "STF1", u32 order, u32 length, then length^order little-endian doubles.
void write_tensor(const std::string& path, const SymTensor& t);
SymTensor read_tensor(const std::string& path);

// PTS1: "PTS1", u32 N, u32 L, then N * L little-endian doubles, point-major.
void write_points(const std::string& path, const PointCloud& cloud);
PointCloud read_points(const std::string& path);

// One point per row. Chosen by extension: ".csv" or ".txt" is text, anything else PTS1.
void write_points_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_points_csv(const std::string& path);
PointCloud read_points_any(const std::string& path);

void write_labels_csv(const std::string& path, const std::vector<int>& labels);

nlohmann::json to_json(const CPDecomposition& d);
nlohmann::json to_json(const BlockTermDecomposition& d);
nlohmann::json to_json(const SubspaceArrangement& a);
CPDecomposition cp_from_json(const nlohmann::json& j);
BlockTermDecomposition btd_from_json(const nlohmann::json& j);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace spm::io
