#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "strent/matrix.hpp"
#include "strent/partition.hpp"
#include "strent/rng.hpp"
#include "strent/structure_gen.hpp"

namespace strent {

struct Dataset {
    Matrix features;
    std::vector<std::size_t> labels;
    std::size_t num_classes = 0;
    std::vector<std::string> feature_names;

    std::size_t size() const noexcept { return labels.size(); }
    // Throws DimensionMismatch, OutOfRange or NonFiniteInput.
    void validate() const;
};

enum class LossKind { Standard, Fixed, Variable };

// Which loss the trainer minimises. Variable draws a fresh
// variable_random_partition(graph, partition_size, p0) every round.
struct LossSpec {
    LossKind kind = LossKind::Standard;
    std::optional<RandomPartition> structure;
    std::optional<Graph> graph;
    std::size_t partition_size = 1;
    double p0 = 0.5;

    static LossSpec standard() { return {}; }
    static LossSpec fixed(RandomPartition rp);
    static LossSpec variable(Graph g, std::size_t partition_size, double p0);
};

struct BoostConfig {
    std::size_t num_rounds = 100;
    double learning_rate = 0.1;
    std::size_t max_depth = 3;
    std::size_t min_samples_leaf = 5;
    double lambda = 1.0;
    std::uint64_t seed = 0;
    LossSpec loss;
    // Lets fit run on a single-class dataset (debugging only).
    bool allow_single_class = false;

    // Throws InvalidConfig.
    void validate(std::size_t num_classes) const;
};

struct TreeNode {
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<double> leaf;  // non-empty exactly for leaves

    bool is_leaf() const noexcept { return !leaf.empty(); }
    bool operator==(const TreeNode&) const = default;
};

// Binary tree with k-vector leaves; nodes[0] is the root. Samples with
// x[feature] <= threshold go left.
struct RegressionTree {
    std::vector<TreeNode> nodes;

    const std::vector<double>& route(std::span<const double> x) const;
    std::size_t num_leaves() const;
    bool operator==(const RegressionTree&) const = default;
};

struct RoundStats {
    double train_log_loss = 0.0;
    double train_objective = 0.0;  // the round's (possibly structured) loss
    bool operator==(const RoundStats&) const = default;
};

struct BoostModel {
    std::size_t num_classes = 0;
    std::size_t num_features = 0;
    double learning_rate = 0.0;
    std::vector<double> base_logits;
    std::vector<RegressionTree> trees;
    BoostConfig config;
    std::vector<RoundStats> history;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
};

BoostModel fit(const Dataset& data, const BoostConfig& config, Rng& rng);
// Seeds the generator from config.seed.
BoostModel fit(const Dataset& data, const BoostConfig& config);

Matrix predict_logits(const BoostModel& model, const Matrix& features);

struct EvalReport {
    double log_loss = 0.0;
    std::optional<double> structured_log_loss;
    double accuracy = 0.0;
    std::vector<double> coarsened_accuracy;  // one per partition of the metric structure
};

EvalReport evaluate(const BoostModel& model, const Dataset& data,
                    const std::optional<RandomPartition>& rp_for_metrics = std::nullopt);

// Versioned JSON model format. Doubles are written in shortest round-trip
// form, so save -> load reproduces every value exactly.
std::string serialize_model(const BoostModel& model);
BoostModel deserialize_model(std::string_view text);
void save_model(const BoostModel& model, const std::string& path);
BoostModel load_model(const std::string& path);

}  // namespace strent
