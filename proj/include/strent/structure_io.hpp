#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "strent/partition.hpp"
#include "strent/structure_gen.hpp"

namespace strent {

// Structure document:
//   {"classes": ["jan", ...],            optional class-name manifest
//    "num_classes": 12,                  required when "classes" is absent
//    "partitions": [[[0, 1], [2]], ...], block members as indices or names
//    "weights": [0.5, 0.5]}
struct StructureFile {
    std::vector<std::string> class_names;  // empty when the file is index-only
    RandomPartition structure;
};

nlohmann::json structure_to_json(const RandomPartition& rp, const std::vector<std::string>& class_names = {});
StructureFile structure_from_json(const nlohmann::json& doc);
StructureFile load_structure(const std::string& path);
void save_structure(const RandomPartition& rp, const std::vector<std::string>& class_names, const std::string& path);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& doc);

}  // namespace strent
