#include "dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include "strent/error.hpp"
#include "../src/text.hpp"

namespace strent::cli {

namespace {

char sniff_delimiter(const std::string& header) {
    if (header.find('\t') != std::string::npos) {
        return '\t';
    }
    if (header.find(';') != std::string::npos && header.find(',') == std::string::npos) {
        return ';';
    }
    return ',';
}

std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::optional<std::size_t> parse_index(const std::string& s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

}  // namespace

LabeledTable read_labeled_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::ParseError, "cannot open data file " + path);
    }
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    char delimiter = ',';
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!text::trim(line).empty()) {
            delimiter = sniff_delimiter(line);
            header = text::split(line, delimiter);
        }
    }
    if (header.empty()) {
        throw Error(Errc::ParseError, path + ": no header row");
    }
    auto label_it = std::find(header.begin(), header.end(), label_column);
    if (label_it == header.end()) {
        throw Error(Errc::ParseError, path + ": label column '" + label_column + "' not found in header", line_no);
    }
    const std::size_t label_idx = static_cast<std::size_t>(label_it - header.begin());

    LabeledTable table;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_idx) {
            table.feature_names.push_back(header[c]);
        }
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        auto cells = text::split(line, delimiter);
        if (cells.size() != header.size()) {
            throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " fields, found " +
                                              std::to_string(cells.size()),
                        line_no);
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) {
                table.raw_labels.push_back(cells[c]);
                continue;
            }
            auto v = parse_double(cells[c]);
            if (!v || !std::isfinite(*v)) {
                throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": column '" + header[c] +
                                                  "' value '" + cells[c] + "' is not a finite number",
                            line_no);
            }
            values.push_back(*v);
        }
    }
    if (table.raw_labels.empty()) {
        throw Error(Errc::ParseError, path + ": no data rows");
    }
    const std::size_t d = table.feature_names.size();
    table.features = Matrix(table.raw_labels.size(), d);
    std::copy(values.begin(), values.end(), table.features.data().begin());
    return table;
}

ClassMapping map_labels(const std::vector<std::string>& raw, const std::vector<std::string>& manifest,
                        std::size_t min_classes) {
    ClassMapping out;
    out.labels.reserve(raw.size());
    if (!manifest.empty()) {
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < manifest.size(); ++i) {
            index.emplace(manifest[i], i);
        }
        for (std::size_t r = 0; r < raw.size(); ++r) {
            auto it = index.find(raw[r]);
            if (it == index.end()) {
                throw Error(Errc::OutOfRange, "label '" + raw[r] + "' on data row " + std::to_string(r + 1) +
                                                  " is not a known class",
                            r);
            }
            out.labels.push_back(it->second);
        }
        out.class_names = manifest;
        return out;
    }

    bool all_indices = true;
    std::size_t max_index = 0;
    for (const auto& s : raw) {
        auto v = parse_index(s);
        if (!v) {
            all_indices = false;
            break;
        }
        max_index = std::max(max_index, *v);
    }
    if (all_indices) {
        const std::size_t k = std::max(max_index + 1, min_classes);
        for (const auto& s : raw) {
            out.labels.push_back(*parse_index(s));
        }
        for (std::size_t i = 0; i < k; ++i) {
            out.class_names.push_back(std::to_string(i));
        }
        return out;
    }

    std::set<std::string> distinct(raw.begin(), raw.end());
    out.class_names.assign(distinct.begin(), distinct.end());
    if (min_classes > out.class_names.size()) {
        throw Error(Errc::DimensionMismatch, "data names " + std::to_string(out.class_names.size()) +
                                                 " classes but the structure needs " + std::to_string(min_classes));
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < out.class_names.size(); ++i) {
        index.emplace(out.class_names[i], i);
    }
    for (const auto& s : raw) {
        out.labels.push_back(index.at(s));
    }
    return out;
}

Dataset to_dataset(LabeledTable table, const ClassMapping& mapping) {
    Dataset data;
    data.features = std::move(table.features);
    data.labels = mapping.labels;
    data.num_classes = mapping.class_names.size();
    data.feature_names = std::move(table.feature_names);
    data.validate();
    return data;
}

}  // namespace strent::cli
