#include "strent/structure_io.hpp"

#include <fstream>
#include <map>

#include "strent/error.hpp"

namespace strent {

using nlohmann::json;

json structure_to_json(const RandomPartition& rp, const std::vector<std::string>& class_names) {
    const bool named = !class_names.empty();
    if (named && class_names.size() != rp.num_classes()) {
        throw Error(Errc::DimensionMismatch, "class manifest does not match the structure");
    }
    json doc;
    if (named) {
        doc["classes"] = class_names;
    }
    doc["num_classes"] = rp.num_classes();
    json parts = json::array();
    for (const Partition& p : rp.partitions()) {
        json blocks = json::array();
        for (const Block& b : p.blocks()) {
            json members = json::array();
            for (std::size_t y : b) {
                if (named) {
                    members.push_back(class_names[y]);
                } else {
                    members.push_back(y);
                }
            }
            blocks.push_back(std::move(members));
        }
        parts.push_back(std::move(blocks));
    }
    doc["partitions"] = std::move(parts);
    doc["weights"] = rp.weights();
    return doc;
}

StructureFile structure_from_json(const json& doc) {
    try {
        std::vector<std::string> names;
        std::map<std::string, std::size_t> index;
        std::size_t k = 0;
        if (doc.contains("classes")) {
            names = doc.at("classes").get<std::vector<std::string>>();
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (!index.emplace(names[i], i).second) {
                    throw Error(Errc::ParseError, "duplicate class name '" + names[i] + "'");
                }
            }
            k = names.size();
            if (doc.contains("num_classes") && doc.at("num_classes").get<std::size_t>() != k) {
                throw Error(Errc::ParseError, "num_classes disagrees with the class manifest");
            }
        } else if (doc.contains("num_classes")) {
            k = doc.at("num_classes").get<std::size_t>();
        } else {
            throw Error(Errc::ParseError, "structure needs \"classes\" or \"num_classes\"");
        }

        std::vector<Partition> parts;
        for (const json& p : doc.at("partitions")) {
            std::vector<Block> blocks;
            for (const json& b : p) {
                Block block;
                for (const json& member : b) {
                    if (member.is_string()) {
                        auto it = index.find(member.get<std::string>());
                        if (it == index.end()) {
                            throw Error(Errc::ParseError, "unknown class '" + member.get<std::string>() + "'");
                        }
                        block.push_back(it->second);
                    } else {
                        block.push_back(member.get<std::size_t>());
                    }
                }
                blocks.push_back(std::move(block));
            }
            parts.push_back(validate_partition(std::move(blocks), k));
        }
        auto weights = doc.at("weights").get<std::vector<double>>();
        return {std::move(names), RandomPartition(std::move(parts), std::move(weights))};
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("malformed structure: ") + e.what());
    }
}

StructureFile load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::ParseError, "cannot open structure file " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, path + ": " + e.what(), e.byte);
    }
    return structure_from_json(doc);
}

void save_structure(const RandomPartition& rp, const std::vector<std::string>& class_names, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(Errc::ParseError, "cannot write " + path);
    }
    out << structure_to_json(rp, class_names).dump(2) << '\n';
}

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) {
        edges.push_back({u, v});
    }
    return {{"num_vertices", g.num_vertices()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const json& doc) {
    try {
        std::vector<Edge> edges;
        for (const json& e : doc.at("edges")) {
            edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        }
        return Graph(doc.at("num_vertices").get<std::size_t>(), std::move(edges));
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("malformed graph: ") + e.what());
    }
}

}  // namespace strent
