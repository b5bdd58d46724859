#include "strent/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "strent/error.hpp"
#include "strent/loss.hpp"
#include "strent/structure_io.hpp"

namespace strent {

namespace {

constexpr double kMinGain = 1e-12;

struct SplitCandidate {
    double gain = kMinGain;
    std::size_t feature = 0;
    double threshold = 0.0;
    bool found = false;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& features, const Matrix& grad, const Matrix& hess, const BoostConfig& config)
        : x_(features), g_(grad), h_(hess), config_(config), k_(grad.cols()) {}

    RegressionTree build() {
        std::vector<std::size_t> rows(x_.rows());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        RegressionTree tree;
        grow(tree, rows, 0);
        return tree;
    }

private:
    // Appends the subtree for `rows` and returns its node index.
    std::size_t grow(RegressionTree& tree, std::vector<std::size_t>& rows, std::size_t depth) {
        std::size_t id = tree.nodes.size();
        tree.nodes.emplace_back();

        std::vector<double> gsum(k_, 0.0), hsum(k_, 0.0);
        accumulate(rows, gsum, hsum);

        SplitCandidate best;
        if (depth < config_.max_depth && rows.size() >= 2 * config_.min_samples_leaf) {
            best = find_split(rows, gsum, hsum);
        }
        if (!best.found) {
            std::vector<double> leaf(k_);
            for (std::size_t c = 0; c < k_; ++c) {
                leaf[c] = -gsum[c] / (hsum[c] + config_.lambda);
            }
            tree.nodes[id].leaf = std::move(leaf);
            return id;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            (x_(r, best.feature) <= best.threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        std::size_t l = grow(tree, left, depth + 1);
        std::size_t r = grow(tree, right, depth + 1);
        TreeNode& node = tree.nodes[id];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    void accumulate(const std::vector<std::size_t>& rows, std::vector<double>& gsum, std::vector<double>& hsum) const {
        for (std::size_t r : rows) {
            auto g = g_.row(r);
            auto h = h_.row(r);
            for (std::size_t c = 0; c < k_; ++c) {
                gsum[c] += g[c];
                hsum[c] += h[c];
            }
        }
    }

    double score(const std::vector<double>& g, const std::vector<double>& h) const {
        double s = 0.0;
        for (std::size_t c = 0; c < k_; ++c) {
            s += g[c] * g[c] / (h[c] + config_.lambda);
        }
        return s;
    }

    // Exact greedy search; ties keep the lowest feature, then the lowest threshold.
    SplitCandidate find_split(const std::vector<std::size_t>& rows, const std::vector<double>& gsum,
                              const std::vector<double>& hsum) const {
        SplitCandidate best;
        const double parent = score(gsum, hsum);
        const std::size_t n = rows.size();
        const std::size_t min_leaf = std::max<std::size_t>(config_.min_samples_leaf, 1);
        std::vector<std::size_t> order(rows);
        std::vector<double> gl(k_), hl(k_), gr(k_), hr(k_);
        for (std::size_t f = 0; f < x_.cols(); ++f) {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return x_(a, f) < x_(b, f); });
            std::fill(gl.begin(), gl.end(), 0.0);
            std::fill(hl.begin(), hl.end(), 0.0);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                auto g = g_.row(order[i]);
                auto h = h_.row(order[i]);
                for (std::size_t c = 0; c < k_; ++c) {
                    gl[c] += g[c];
                    hl[c] += h[c];
                }
                const double lo = x_(order[i], f);
                const double hi = x_(order[i + 1], f);
                if (!(lo < hi) || i + 1 < min_leaf || n - i - 1 < min_leaf) {
                    continue;
                }
                for (std::size_t c = 0; c < k_; ++c) {
                    gr[c] = gsum[c] - gl[c];
                    hr[c] = hsum[c] - hl[c];
                }
                double gain = score(gl, hl) + score(gr, hr) - parent;
                if (gain > best.gain) {
                    double mid = lo + (hi - lo) / 2.0;
                    best = {gain, f, mid < hi ? mid : lo, true};
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const Matrix& g_;
    const Matrix& h_;
    const BoostConfig& config_;
    std::size_t k_;
};

void add_tree(Matrix& logits, const Matrix& features, const RegressionTree& tree, double learning_rate) {
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        const auto& leaf = tree.route(features.row(r));
        auto z = logits.row(r);
        for (std::size_t c = 0; c < z.size(); ++c) {
            z[c] += learning_rate * leaf[c];
        }
    }
}

RandomPartition round_structure(const LossSpec& loss, std::size_t k, Rng& rng) {
    switch (loss.kind) {
        case LossKind::Standard:
            return trivial_random_partition(k);
        case LossKind::Fixed:
            return *loss.structure;
        case LossKind::Variable:
            return variable_random_partition(*loss.graph, loss.partition_size, loss.p0, rng);
    }
    throw Error(Errc::InvalidConfig, "unknown loss kind");
}

}  // namespace

void Dataset::validate() const {
    if (features.rows() != labels.size()) {
        throw Error(Errc::DimensionMismatch, "feature rows and labels differ in count");
    }
    if (num_classes == 0) {
        throw Error(Errc::OutOfRange, "dataset has no classes");
    }
    for (std::size_t l = 0; l < labels.size(); ++l) {
        if (labels[l] >= num_classes) {
            throw Error(Errc::OutOfRange, "label on row " + std::to_string(l) + " is out of range", l);
        }
    }
    for (double v : features.data()) {
        if (!std::isfinite(v)) {
            throw Error(Errc::NonFiniteInput, "features contain a non-finite value");
        }
    }
    if (!feature_names.empty() && feature_names.size() != features.cols()) {
        throw Error(Errc::DimensionMismatch, "feature name count differs from feature columns");
    }
}

LossSpec LossSpec::fixed(RandomPartition rp) {
    LossSpec spec;
    spec.kind = LossKind::Fixed;
    spec.structure = std::move(rp);
    return spec;
}

LossSpec LossSpec::variable(Graph g, std::size_t partition_size, double p0) {
    LossSpec spec;
    spec.kind = LossKind::Variable;
    spec.graph = std::move(g);
    spec.partition_size = partition_size;
    spec.p0 = p0;
    return spec;
}

void BoostConfig::validate(std::size_t num_classes) const {
    if (num_rounds < 1) {
        throw Error(Errc::InvalidConfig, "num_rounds must be at least 1");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw Error(Errc::InvalidConfig, "learning_rate must be positive");
    }
    if (max_depth < 1) {
        throw Error(Errc::InvalidConfig, "max_depth must be at least 1");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(Errc::InvalidConfig, "lambda must be non-negative");
    }
    switch (loss.kind) {
        case LossKind::Standard:
            break;
        case LossKind::Fixed:
            if (!loss.structure || loss.structure->num_classes() != num_classes) {
                throw Error(Errc::InvalidConfig, "fixed loss needs a structure over the dataset's classes");
            }
            break;
        case LossKind::Variable:
            if (!loss.graph || loss.graph->num_vertices() != num_classes) {
                throw Error(Errc::InvalidConfig, "variable loss needs a graph over the dataset's classes");
            }
            if (loss.partition_size < 1 || loss.partition_size > num_classes) {
                throw Error(Errc::InvalidConfig, "partition size must lie in 1..k");
            }
            if (!(loss.p0 >= 0.0 && loss.p0 <= 1.0)) {
                throw Error(Errc::InvalidConfig, "p0 must lie in [0, 1]");
            }
            if (!loss.graph->is_connected()) {
                throw Error(Errc::InvalidConfig, "variable loss graph is not connected");
            }
            break;
    }
}

const std::vector<double>& RegressionTree::route(std::span<const double> x) const {
    std::size_t id = 0;
    while (!nodes[id].is_leaf()) {
        const TreeNode& n = nodes[id];
        id = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes[id].leaf;
}

std::size_t RegressionTree::num_leaves() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

BoostModel fit(const Dataset& data, const BoostConfig& config, Rng& rng) {
    data.validate();
    config.validate(data.num_classes);
    const std::size_t n = data.size();
    const std::size_t k = data.num_classes;
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t y : data.labels) {
        ++counts[y];
    }
    const auto distinct = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
    if (n < 2 && !config.allow_single_class) {
        throw Error(Errc::DegenerateDataset, "need at least two observations");
    }
    if (n == 0 || (distinct < 2 && !config.allow_single_class)) {
        throw Error(Errc::DegenerateDataset, "need at least two distinct labels");
    }

    BoostModel model;
    model.num_classes = k;
    model.num_features = data.features.cols();
    model.learning_rate = config.learning_rate;
    model.config = config;
    model.feature_names = data.feature_names;
    model.base_logits.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        double prior = static_cast<double>(counts[c]) / static_cast<double>(n);
        model.base_logits[c] = std::log(std::max(prior, kProbClamp));
    }

    Matrix logits(n, k);
    for (std::size_t r = 0; r < n; ++r) {
        std::copy(model.base_logits.begin(), model.base_logits.end(), logits.row(r).begin());
    }

    for (std::size_t round = 0; round < config.num_rounds; ++round) {
        Rng round_rng = rng.split(round);
        RandomPartition rp = round_structure(config.loss, k, round_rng);
        GradHess gh = structured_grad_hess(logits, data.labels, rp);
        // The exact diagonal can dip below zero for multi-class blocks; Newton
        // denominators use the non-negative part.
        for (double& h : gh.hess_diag.data()) {
            h = std::max(h, 0.0);
        }
        RegressionTree tree = TreeBuilder(data.features, gh.grad, gh.hess_diag, config).build();
        add_tree(logits, data.features, tree, config.learning_rate);
        model.trees.push_back(std::move(tree));

        Matrix probs = softmax(logits);
        model.history.push_back({log_loss(probs, data.labels), structured_log_loss(probs, data.labels, rp)});
    }
    return model;
}

BoostModel fit(const Dataset& data, const BoostConfig& config) {
    Rng rng(config.seed);
    return fit(data, config, rng);
}

Matrix predict_logits(const BoostModel& model, const Matrix& features) {
    if (features.cols() != model.num_features) {
        throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(model.num_features) +
                                                 " features, got " + std::to_string(features.cols()));
    }
    Matrix logits(features.rows(), model.num_classes);
    for (std::size_t r = 0; r < features.rows(); ++r) {
        std::copy(model.base_logits.begin(), model.base_logits.end(), logits.row(r).begin());
    }
    for (const RegressionTree& tree : model.trees) {
        add_tree(logits, features, tree, model.learning_rate);
    }
    return logits;
}

EvalReport evaluate(const BoostModel& model, const Dataset& data, const std::optional<RandomPartition>& rp_for_metrics) {
    if (data.num_classes != model.num_classes) {
        throw Error(Errc::DimensionMismatch, "model has " + std::to_string(model.num_classes) +
                                                 " classes, data has " + std::to_string(data.num_classes));
    }
    data.validate();
    Matrix probs = softmax(predict_logits(model, data.features));
    EvalReport report;
    report.log_loss = log_loss(probs, data.labels);
    report.accuracy = coarsened_accuracy(probs, data.labels, singleton_partition(model.num_classes));
    if (rp_for_metrics) {
        report.structured_log_loss = structured_log_loss(probs, data.labels, *rp_for_metrics);
        for (const Partition& p : rp_for_metrics->partitions()) {
            report.coarsened_accuracy.push_back(coarsened_accuracy(probs, data.labels, p));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using nlohmann::json;

constexpr std::string_view kFormat = "strent-boost-model";
constexpr int kVersion = 1;

std::string_view loss_kind_name(LossKind kind) {
    switch (kind) {
        case LossKind::Standard: return "standard";
        case LossKind::Fixed: return "fixed";
        case LossKind::Variable: return "variable";
    }
    return "standard";
}

LossKind loss_kind_from(const std::string& name) {
    if (name == "standard") return LossKind::Standard;
    if (name == "fixed") return LossKind::Fixed;
    if (name == "variable") return LossKind::Variable;
    throw Error(Errc::ParseError, "unknown loss kind '" + name + "'");
}

json tree_to_json(const RegressionTree& tree) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes) {
        if (n.is_leaf()) {
            nodes.push_back({{"leaf", n.leaf}});
        } else {
            nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
        }
    }
    return nodes;
}

RegressionTree tree_from_json(const json& nodes, std::size_t k, std::size_t d) {
    RegressionTree tree;
    for (const json& j : nodes) {
        TreeNode n;
        if (j.contains("leaf")) {
            n.leaf = j.at("leaf").get<std::vector<double>>();
            if (n.leaf.size() != k) {
                throw Error(Errc::ParseError, "leaf vector has the wrong length");
            }
        } else {
            n.feature = j.at("feature").get<std::size_t>();
            n.threshold = j.at("threshold").get<double>();
            n.left = j.at("left").get<std::size_t>();
            n.right = j.at("right").get<std::size_t>();
            if (n.feature >= d) {
                throw Error(Errc::ParseError, "split feature out of range");
            }
        }
        tree.nodes.push_back(std::move(n));
    }
    // Children always follow their parent, which also rules out cycles.
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& n = tree.nodes[i];
        if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= tree.nodes.size() ||
                             n.right >= tree.nodes.size())) {
            throw Error(Errc::ParseError, "tree node has an invalid child index", i);
        }
    }
    if (tree.nodes.empty()) {
        throw Error(Errc::ParseError, "empty tree");
    }
    return tree;
}

}  // namespace

std::string serialize_model(const BoostModel& model) {
    const BoostConfig& c = model.config;
    json loss = {{"kind", loss_kind_name(c.loss.kind)}};
    if (c.loss.kind == LossKind::Fixed) {
        loss["structure"] = structure_to_json(*c.loss.structure);
    }
    if (c.loss.kind == LossKind::Variable) {
        loss["graph"] = graph_to_json(*c.loss.graph);
        loss["partition_size"] = c.loss.partition_size;
        loss["p0"] = c.loss.p0;
    }
    json config = {{"num_rounds", c.num_rounds},
                   {"learning_rate", c.learning_rate},
                   {"max_depth", c.max_depth},
                   {"min_samples_leaf", c.min_samples_leaf},
                   {"lambda", c.lambda},
                   {"seed", c.seed},
                   {"allow_single_class", c.allow_single_class},
                   {"loss", std::move(loss)}};
    json history = json::array();
    for (const RoundStats& s : model.history) {
        history.push_back({{"train_log_loss", s.train_log_loss}, {"train_objective", s.train_objective}});
    }
    json trees = json::array();
    for (const RegressionTree& t : model.trees) {
        trees.push_back(tree_to_json(t));
    }
    json doc = {{"format", kFormat},
                {"version", kVersion},
                {"num_classes", model.num_classes},
                {"num_features", model.num_features},
                {"learning_rate", model.learning_rate},
                {"class_names", model.class_names},
                {"feature_names", model.feature_names},
                {"base_logits", model.base_logits},
                {"config", std::move(config)},
                {"history", std::move(history)},
                {"trees", std::move(trees)}};
    return doc.dump(1) + "\n";
}

BoostModel deserialize_model(std::string_view text) {
    try {
        json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != kFormat) {
            throw Error(Errc::ParseError, "not a boosting model file");
        }
        if (doc.at("version").get<int>() != kVersion) {
            throw Error(Errc::ParseError, "unsupported model version " + doc.at("version").dump());
        }
        BoostModel model;
        model.num_classes = doc.at("num_classes").get<std::size_t>();
        model.num_features = doc.at("num_features").get<std::size_t>();
        model.learning_rate = doc.at("learning_rate").get<double>();
        model.class_names = doc.at("class_names").get<std::vector<std::string>>();
        model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        model.base_logits = doc.at("base_logits").get<std::vector<double>>();
        if (model.base_logits.size() != model.num_classes) {
            throw Error(Errc::ParseError, "base_logits has the wrong length");
        }

        const json& c = doc.at("config");
        BoostConfig& config = model.config;
        config.num_rounds = c.at("num_rounds").get<std::size_t>();
        config.learning_rate = c.at("learning_rate").get<double>();
        config.max_depth = c.at("max_depth").get<std::size_t>();
        config.min_samples_leaf = c.at("min_samples_leaf").get<std::size_t>();
        config.lambda = c.at("lambda").get<double>();
        config.seed = c.at("seed").get<std::uint64_t>();
        config.allow_single_class = c.at("allow_single_class").get<bool>();
        const json& loss = c.at("loss");
        config.loss.kind = loss_kind_from(loss.at("kind").get<std::string>());
        if (config.loss.kind == LossKind::Fixed) {
            config.loss.structure = structure_from_json(loss.at("structure")).structure;
        }
        if (config.loss.kind == LossKind::Variable) {
            config.loss.graph = graph_from_json(loss.at("graph"));
            config.loss.partition_size = loss.at("partition_size").get<std::size_t>();
            config.loss.p0 = loss.at("p0").get<double>();
        }

        for (const json& s : doc.at("history")) {
            model.history.push_back({s.at("train_log_loss").get<double>(), s.at("train_objective").get<double>()});
        }
        for (const json& t : doc.at("trees")) {
            model.trees.push_back(tree_from_json(t, model.num_classes, model.num_features));
        }
        return model;
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("malformed model: ") + e.what());
    }
}

void save_model(const BoostModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Errc::ParseError, "cannot write " + path);
    }
    out << serialize_model(model);
}

BoostModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::ParseError, "cannot open model file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace strent
