#pragma once

#include <string>

#include <json.hpp>

#include "pipeopt/core.hpp"

namespace pipeopt {

// Pipeline document:
//   {
//     "operators": [{"id": "...", "sdk": "...", "tags": ["..."]}, ...],
//     "edges":     [{"from": "...", "to": "..."}, ...],
//     "groups":    [{"id": "...", "operators": ["..."], "image": "..."}, ...]
//   }
// "groups" is omitted when empty. Group entries reference images by id and
// are resolved against the sibling image-catalog document:
//   {"images": [{"id": "...", "tags": ["..."]}, ...]}
// Synthetic images carry an extra "synthetic": true.
//
// Serialization is deterministic: fixed key order, two-space indent, sorted
// tag arrays, declaration order everywhere else.

nlohmann::ordered_json catalog_to_json(const ImageCatalog& catalog);
ImageCatalog catalog_from_json(const nlohmann::json& doc);

nlohmann::ordered_json pipeline_to_json(const Pipeline& pipeline);
Pipeline pipeline_from_json(const nlohmann::json& doc, const ImageCatalog& catalog);

// A grouping config serializes as a pipeline document whose "groups" array
// is the full partition.
nlohmann::ordered_json config_to_json(const GroupingConfig& config);
GroupingConfig config_from_json(const nlohmann::json& doc, const ImageCatalog& catalog);

std::string dump_json(const nlohmann::ordered_json& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pipeopt
