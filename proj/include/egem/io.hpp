#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "egem/config.hpp"
#include "egem/data.hpp"
#include "egem/gem.hpp"
#include "egem/model_selection.hpp"

namespace egem {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct CsvTable {
  DataMatrix values;
  std::vector<std::string> header;  ///< empty when the file had none
};

/// Comma-separated numbers; a first row containing any non-numeric field is a header.
CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const Matrix& values, const std::vector<std::string>& header = {});

/// Labels are stored 1-based, one per line under a "label" header.
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& doc);

Json config_to_json(const GemConfig& cfg);
/// Keys present in `doc` override `base`; unknown keys are rejected.
GemConfig config_from_json(const Json& doc, GemConfig base = {});

Json model_to_json(const ModelState& model);
ModelState model_from_json(const Json& doc);

Json fit_to_json(const FitResult& fit, const GemConfig& cfg);
Json gap_to_json(const GapTable& table);

}  // namespace egem
