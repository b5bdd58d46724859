#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strent/gbm.hpp"

namespace strent::cli {

// Header-row delimited table: one named label column, every other column a
// numeric feature.
struct LabeledTable {
    Matrix features;
    std::vector<std::string> feature_names;
    std::vector<std::string> raw_labels;
};

LabeledTable read_labeled_csv(const std::string& path, const std::string& label_column);

struct ClassMapping {
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names;
};

// Maps raw label strings to class indices. With a manifest, names are looked
// up in it. Without one, all-integer labels are used as indices (k is at least
// max + 1 and at least `min_classes`); otherwise distinct names are sorted.
ClassMapping map_labels(const std::vector<std::string>& raw, const std::vector<std::string>& manifest,
                        std::size_t min_classes = 0);

Dataset to_dataset(LabeledTable table, const ClassMapping& mapping);

}  // namespace strent::cli
