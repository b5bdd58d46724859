#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "dataset_io.hpp"
#include "strent/entropy.hpp"
#include "strent/error.hpp"
#include "strent/gbm.hpp"
#include "strent/loss.hpp"
#include "strent/structure_gen.hpp"
#include "strent/structure_io.hpp"
#include "../src/text.hpp"

namespace strent::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string data;
    std::string test_data;
    std::string label = "label";
    std::string structure;
    std::string hierarchy;
    std::string graph;
    std::string circular;
    std::string weights;
    std::string p0;
    std::string partition_size;
    std::string model;
    std::string out;
    std::string metrics;
    std::string dist;
    std::string train_sizes;
    std::size_t rounds = 100;
    double lr = 0.1;
    std::size_t max_depth = 3;
    std::size_t min_leaf = 5;
    double lambda = 1.0;
    std::optional<std::uint64_t> seed;
    std::size_t trials = 5;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::vector<T> parse_list(const std::string& s, const char* flag) {
    std::vector<T> out;
    for (const auto& cell : text::split(s, ',')) {
        std::istringstream in(cell);
        T v{};
        if (cell.empty() || !(in >> v) || !in.eof()) {
            throw UsageError(std::string(flag) + ": '" + cell + "' is not a valid value");
        }
        out.push_back(v);
    }
    return out;
}

std::pair<std::size_t, std::size_t> parse_circular(const std::string& s) {
    auto v = parse_list<std::size_t>(s, "--circular");
    if (v.size() != 2) {
        throw UsageError("--circular expects k,window");
    }
    return {v[0], v[1]};
}

double single_p0(const Options& o) {
    if (o.p0.empty()) {
        throw UsageError("--p0 is required with this structure source");
    }
    auto v = parse_list<double>(o.p0, "--p0");
    if (v.size() != 1) {
        throw UsageError("--p0 takes a single value here");
    }
    return v[0];
}

std::size_t single_m(const Options& o) {
    if (o.partition_size.empty()) {
        throw UsageError("--partition-size is required with --graph");
    }
    auto v = parse_list<std::size_t>(o.partition_size, "--partition-size");
    if (v.size() != 1) {
        throw UsageError("--partition-size takes a single value here");
    }
    return v[0];
}

enum class Source { None, File, Hierarchy, Circular, Graph };

Source structure_source(const Options& o) {
    int count = 0;
    Source s = Source::None;
    if (!o.structure.empty()) { ++count; s = Source::File; }
    if (!o.hierarchy.empty()) { ++count; s = Source::Hierarchy; }
    if (!o.circular.empty()) { ++count; s = Source::Circular; }
    if (!o.graph.empty()) { ++count; s = Source::Graph; }
    if (count > 1) {
        throw UsageError("give exactly one of --structure, --hierarchy, --circular, --graph");
    }
    return s;
}

HierarchySpec hierarchy_from(const std::string& where) {
    if (where == "builtin:cifar100") {
        return cifar100_hierarchy();
    }
    return load_hierarchy(where);
}

std::vector<double> hierarchy_weights(const Options& o, const HierarchySpec& spec) {
    if (o.weights.empty()) {
        const double each = 1.0 / static_cast<double>(spec.levels.size() + 1);
        return std::vector<double>(spec.levels.size() + 1, each);
    }
    return parse_list<double>(o.weights, "--weights");
}

// Structure sources that denote one fixed random partition. `p0` overrides
// --p0 for circular structures (used by sweeps).
std::optional<StructureFile> fixed_structure(const Options& o, std::optional<double> p0 = std::nullopt) {
    switch (structure_source(o)) {
        case Source::None:
            return std::nullopt;
        case Source::File:
            return load_structure(o.structure);
        case Source::Hierarchy: {
            HierarchySpec spec = hierarchy_from(o.hierarchy);
            RandomPartition rp = hierarchy_structure(spec, hierarchy_weights(o, spec));
            return StructureFile{spec.class_names, std::move(rp)};
        }
        case Source::Circular: {
            auto [k, window] = parse_circular(o.circular);
            return StructureFile{{}, circular_structure(k, window, p0 ? *p0 : single_p0(o))};
        }
        case Source::Graph:
            throw UsageError("--graph defines a per-round random loss; freeze one with gen-structure first");
    }
    return std::nullopt;
}

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) {
        return *o.seed;
    }
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

BoostConfig boost_config(const Options& o, std::uint64_t seed) {
    BoostConfig c;
    c.num_rounds = o.rounds;
    c.learning_rate = o.lr;
    c.max_depth = o.max_depth;
    c.min_samples_leaf = o.min_leaf;
    c.lambda = o.lambda;
    c.seed = seed;
    return c;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(Errc::ParseError, "cannot write " + path);
    }
    return f;
}

// Writes to --out when given, otherwise to the command's stdout.
void emit(const Options& o, std::ostream& out, const std::string& body) {
    if (o.out.empty()) {
        out << body;
    } else {
        open_out(o.out) << body;
    }
}

struct TrainSetup {
    Dataset train;
    std::optional<Dataset> test;
    std::vector<std::string> class_names;
    LossSpec loss;
};

std::size_t structure_classes(const Options& o) {
    switch (structure_source(o)) {
        case Source::Circular: return parse_circular(o.circular).first;
        case Source::Graph: return load_graph(o.graph).num_vertices();
        default: return 0;
    }
}

TrainSetup prepare_training(const Options& o, std::optional<double> p0 = std::nullopt) {
    if (o.data.empty()) {
        throw UsageError("--data is required");
    }
    TrainSetup setup;
    std::vector<std::string> manifest;
    std::optional<StructureFile> fixed;
    if (structure_source(o) == Source::Graph) {
        double p = p0 ? *p0 : single_p0(o);
        setup.loss = LossSpec::variable(load_graph(o.graph), single_m(o), p);
    } else {
        fixed = fixed_structure(o, p0);
        if (fixed) {
            manifest = fixed->class_names;
            setup.loss = LossSpec::fixed(fixed->structure);
        }
    }
    std::size_t min_classes = fixed ? fixed->structure.num_classes() : structure_classes(o);

    LabeledTable table = read_labeled_csv(o.data, o.label);
    ClassMapping mapping = map_labels(table.raw_labels, manifest, min_classes);
    setup.class_names = mapping.class_names;
    setup.train = to_dataset(std::move(table), mapping);
    if (!o.test_data.empty()) {
        LabeledTable test = read_labeled_csv(o.test_data, o.label);
        ClassMapping test_map = map_labels(test.raw_labels, setup.class_names);
        setup.test = to_dataset(std::move(test), test_map);
        if (setup.test->features.cols() != setup.train.features.cols()) {
            throw Error(Errc::DimensionMismatch, "train and test data have different feature columns");
        }
    }
    return setup;
}

// ---------------------------------------------------------------------------

int cmd_train(const Options& o, std::ostream& out) {
    if (o.out.empty()) {
        throw UsageError("train needs --out for the model file");
    }
    const std::uint64_t seed = resolve_seed(o);
    TrainSetup setup = prepare_training(o);
    BoostConfig config = boost_config(o, seed);
    config.loss = setup.loss;
    BoostModel model = fit(setup.train, config);
    model.class_names = setup.class_names;
    save_model(model, o.out);

    std::optional<Matrix> test_logits;
    std::ostringstream metrics;
    metrics << "# strent train seed=" << seed << " rounds=" << config.num_rounds << '\n';
    metrics << "round,train_log_loss,train_objective" << (setup.test ? ",test_log_loss" : "") << '\n';
    Matrix logits;
    if (setup.test) {
        logits = Matrix(setup.test->size(), model.num_classes);
        for (std::size_t r = 0; r < logits.rows(); ++r) {
            std::copy(model.base_logits.begin(), model.base_logits.end(), logits.row(r).begin());
        }
    }
    for (std::size_t round = 0; round < model.trees.size(); ++round) {
        metrics << round + 1 << ',' << fmt(model.history[round].train_log_loss) << ','
                << fmt(model.history[round].train_objective);
        if (setup.test) {
            const RegressionTree& tree = model.trees[round];
            for (std::size_t r = 0; r < logits.rows(); ++r) {
                const auto& leaf = tree.route(setup.test->features.row(r));
                auto z = logits.row(r);
                for (std::size_t c = 0; c < z.size(); ++c) {
                    z[c] += model.learning_rate * leaf[c];
                }
            }
            metrics << ',' << fmt(log_loss(softmax(logits), setup.test->labels));
        }
        metrics << '\n';
    }
    const std::string metrics_path = o.metrics.empty() ? o.out + ".metrics.csv" : o.metrics;
    open_out(metrics_path) << metrics.str();
    out << "seed=" << seed << "\nmodel=" << o.out << "\nmetrics=" << metrics_path << "\nfinal_train_log_loss="
        << fmt(model.history.back().train_log_loss) << '\n';
    return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
    if (o.model.empty() || o.data.empty()) {
        throw UsageError("eval needs --model and --data");
    }
    BoostModel model = load_model(o.model);
    std::optional<StructureFile> fixed = fixed_structure(o);
    if (fixed && fixed->structure.num_classes() != model.num_classes) {
        throw Error(Errc::DimensionMismatch, "structure has " + std::to_string(fixed->structure.num_classes()) +
                                                 " classes but the model has " + std::to_string(model.num_classes));
    }
    LabeledTable table = read_labeled_csv(o.data, o.label);
    if (table.features.cols() != model.num_features) {
        throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(model.num_features) +
                                                 " features, data has " + std::to_string(table.features.cols()));
    }
    ClassMapping mapping = map_labels(table.raw_labels, model.class_names);
    Dataset data = to_dataset(std::move(table), mapping);
    std::optional<RandomPartition> rp;
    if (fixed) {
        rp = fixed->structure;
    }
    EvalReport report = evaluate(model, data, rp);

    std::ostringstream body;
    body << "metric,value\n";
    body << "log_loss," << fmt(report.log_loss) << '\n';
    body << "accuracy," << fmt(report.accuracy) << '\n';
    if (report.structured_log_loss) {
        body << "structured_log_loss," << fmt(*report.structured_log_loss) << '\n';
        for (std::size_t i = 0; i < report.coarsened_accuracy.size(); ++i) {
            body << "coarsened_accuracy_" << i << ',' << fmt(report.coarsened_accuracy[i]) << '\n';
        }
    }
    emit(o, out, body.str());
    return kExitOk;
}

struct SweepColumn {
    std::string name;
    std::optional<double> p0;
    std::optional<std::size_t> m;
    bool standard = false;
};

std::vector<std::size_t> sample_rows(std::size_t n, std::size_t size, Rng rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    if (size == n) {
        return idx;
    }
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(size);
    std::sort(idx.begin(), idx.end());
    return idx;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.features = Matrix(rows.size(), data.features.cols());
    out.num_classes = data.num_classes;
    out.feature_names = data.feature_names;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = data.features.row(rows[i]);
        std::copy(src.begin(), src.end(), out.features.row(i).begin());
        out.labels.push_back(data.labels[rows[i]]);
    }
    return out;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    if (o.test_data.empty()) {
        throw UsageError("sweep needs --test-data");
    }
    if (o.trials < 1) {
        throw UsageError("--trials must be at least 1");
    }
    const std::uint64_t seed = resolve_seed(o);
    const Source source = structure_source(o);

    std::vector<SweepColumn> columns{{"standard", std::nullopt, std::nullopt, true}};
    std::vector<double> p0s;
    if (!o.p0.empty()) {
        p0s = parse_list<double>(o.p0, "--p0");
    }
    if (source == Source::Circular) {
        if (p0s.empty()) {
            throw UsageError("sweep over a circular structure needs a --p0 list");
        }
        for (double p : p0s) {
            columns.push_back({"p0=" + fmt(p), p, std::nullopt, false});
        }
    } else if (source == Source::Graph) {
        if (p0s.empty() || o.partition_size.empty()) {
            throw UsageError("sweep over a graph needs --p0 and --partition-size lists");
        }
        for (std::size_t m : parse_list<std::size_t>(o.partition_size, "--partition-size")) {
            for (double p : p0s) {
                columns.push_back({"m=" + std::to_string(m) + " p0=" + fmt(p), p, m, false});
            }
        }
    } else if (source != Source::None) {
        columns.push_back({"structured", std::nullopt, std::nullopt, false});
    }

    // Shared data; per-column loss specs are rebuilt below.
    Options base = o;
    base.p0 = p0s.empty() ? "" : fmt(p0s.front());
    base.partition_size = o.partition_size.empty() ? "" : text::split(o.partition_size, ',').front();
    TrainSetup setup = prepare_training(base, p0s.empty() ? std::nullopt : std::optional<double>(p0s.front()));
    const Dataset& full = setup.train;
    const Dataset& test = *setup.test;

    std::vector<std::size_t> sizes;
    if (o.train_sizes.empty()) {
        sizes.push_back(full.size());
    } else {
        sizes = parse_list<std::size_t>(o.train_sizes, "--train-sizes");
    }
    for (std::size_t s : sizes) {
        if (s < 2 || s > full.size()) {
            throw UsageError("train size " + std::to_string(s) + " outside 2.." + std::to_string(full.size()));
        }
    }

    std::ostringstream body;
    body << "# strent sweep seed=" << seed << " trials=" << o.trials << " rounds=" << o.rounds
         << " metric=mean_test_log_loss\n";
    body << "train_size";
    for (const auto& c : columns) {
        body << ',' << c.name;
    }
    body << '\n';
    const Rng sampler(seed);
    for (std::size_t size : sizes) {
        std::vector<double> totals(columns.size(), 0.0);
        for (std::size_t t = 0; t < o.trials; ++t) {
            Dataset train = subset(full, sample_rows(full.size(), size, sampler.split(size * 1000003ULL + t)));
            for (std::size_t ci = 0; ci < columns.size(); ++ci) {
                const SweepColumn& col = columns[ci];
                BoostConfig config = boost_config(o, seed + t);
                if (col.standard) {
                    config.loss = LossSpec::standard();
                } else if (source == Source::Graph) {
                    config.loss = LossSpec::variable(*setup.loss.graph, *col.m, *col.p0);
                } else if (source == Source::Circular) {
                    auto [k, window] = parse_circular(o.circular);
                    config.loss = LossSpec::fixed(circular_structure(k, window, *col.p0));
                } else {
                    config.loss = setup.loss;
                }
                BoostModel model = fit(train, config);
                totals[ci] += evaluate(model, test).log_loss;
            }
        }
        body << size;
        for (double total : totals) {
            body << ',' << fmt(total / static_cast<double>(o.trials));
        }
        body << '\n';
    }
    emit(o, out, body.str());
    return kExitOk;
}

int cmd_entropy(const Options& o, std::ostream& out) {
    std::optional<StructureFile> fixed = fixed_structure(o);
    std::vector<double> probs;
    if (!o.dist.empty()) {
        probs = parse_list<double>(o.dist, "--dist");
    } else if (!o.data.empty()) {
        LabeledTable table = read_labeled_csv(o.data, o.label);
        ClassMapping mapping = map_labels(table.raw_labels, fixed ? fixed->class_names : std::vector<std::string>{},
                                          fixed ? fixed->structure.num_classes() : 0);
        probs.assign(mapping.class_names.size(), 0.0);
        for (std::size_t y : mapping.labels) {
            probs[y] += 1.0;
        }
        for (double& p : probs) {
            p /= static_cast<double>(mapping.labels.size());
        }
    } else {
        throw UsageError("entropy needs --dist or --data");
    }
    ProbDist dist(probs);
    RandomPartition rp = fixed ? fixed->structure : trivial_random_partition(dist.size());

    std::ostringstream body;
    body << "quantity,value\n";
    body << "shannon_entropy_nats," << fmt(shannon_entropy(dist, LogBase::Natural)) << '\n';
    body << "shannon_entropy_bits," << fmt(shannon_entropy(dist, LogBase::Two)) << '\n';
    body << "structured_entropy_nats," << fmt(structured_entropy(dist, rp, LogBase::Natural)) << '\n';
    body << "structured_entropy_bits," << fmt(structured_entropy(dist, rp, LogBase::Two)) << '\n';
    BlockUnionDist blocks = random_block_dist(rp, dist);
    for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
        body << "random_block {";
        for (std::size_t i = 0; i < blocks.blocks[b].size(); ++i) {
            body << (i ? " " : "") << blocks.blocks[b][i];
        }
        body << "}," << fmt(blocks.probs[b]) << '\n';
    }
    emit(o, out, body.str());
    return kExitOk;
}

int cmd_gen_structure(const Options& o, std::ostream& out) {
    RandomPartition rp = trivial_random_partition(1);
    std::vector<std::string> names;
    switch (structure_source(o)) {
        case Source::None:
            throw UsageError("gen-structure needs --circular, --hierarchy, --graph or --structure");
        case Source::Graph: {
            Graph g = load_graph(o.graph);
            const std::uint64_t seed = resolve_seed(o);
            Rng rng(seed);
            rp = variable_random_partition(g, single_m(o), single_p0(o), rng);
            break;
        }
        default: {
            StructureFile f = *fixed_structure(o);
            rp = f.structure;
            names = f.class_names;
        }
    }
    emit(o, out, structure_to_json(rp, names).dump(2) + "\n");
    return kExitOk;
}

void add_structure_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--structure", o.structure, "Structure file (JSON)");
    cmd->add_option("--hierarchy", o.hierarchy, "Hierarchy table, or builtin:cifar100");
    cmd->add_option("--weights", o.weights, "Hierarchy level weights, singleton level first");
    cmd->add_option("--circular", o.circular, "Circular structure as k,window");
    cmd->add_option("--graph", o.graph, "Graph file for the variable random partition");
    cmd->add_option("--p0", o.p0, "Singleton weight (a list for sweep)");
    cmd->add_option("--partition-size", o.partition_size, "Blocks per sampled graph partition (a list for sweep)");
}

void add_boost_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--rounds", o.rounds, "Boosting rounds")->check(CLI::PositiveNumber);
    cmd->add_option("--lr", o.lr, "Learning rate");
    cmd->add_option("--max-depth", o.max_depth, "Maximum tree depth")->check(CLI::PositiveNumber);
    cmd->add_option("--min-leaf", o.min_leaf, "Minimum samples per leaf");
    cmd->add_option("--lambda", o.lambda, "L2 leaf regularization");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Structured entropy and structured-loss gradient boosting"};
    app.require_subcommand(1);

    auto* train = app.add_subcommand("train", "Fit a boosting model");
    train->add_option("--data", o.data, "Training CSV")->required();
    train->add_option("--test-data", o.test_data, "Test CSV for per-round test loss");
    train->add_option("--label", o.label, "Label column name");
    add_structure_flags(train, o);
    add_boost_flags(train, o);
    train->add_option("--seed", o.seed, "Random seed");
    train->add_option("--out", o.model, "Model file to write")->required();
    train->add_option("--metrics", o.metrics, "Per-round metrics file (default <out>.metrics.csv)");

    auto* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
    eval->add_option("--model", o.model, "Model file")->required();
    eval->add_option("--data", o.data, "Dataset CSV")->required();
    eval->add_option("--label", o.label, "Label column name");
    add_structure_flags(eval, o);
    eval->add_option("--out", o.out, "Write the metrics table here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Mean test log loss over p0 / partition-size grids");
    sweep->add_option("--data", o.data, "Training CSV")->required();
    sweep->add_option("--test-data", o.test_data, "Test CSV")->required();
    sweep->add_option("--label", o.label, "Label column name");
    add_structure_flags(sweep, o);
    add_boost_flags(sweep, o);
    sweep->add_option("--trials", o.trials, "Trials per cell");
    sweep->add_option("--train-sizes", o.train_sizes, "Comma-separated training set sizes");
    sweep->add_option("--seed", o.seed, "Random seed");
    sweep->add_option("--out", o.out, "Write the table here instead of stdout");

    auto* entropy = app.add_subcommand("entropy", "Shannon and structured entropy of a distribution");
    entropy->add_option("--dist", o.dist, "Comma-separated probabilities");
    entropy->add_option("--data", o.data, "Dataset CSV; uses the label column's empirical distribution");
    entropy->add_option("--label", o.label, "Label column name");
    add_structure_flags(entropy, o);
    entropy->add_option("--out", o.out, "Write the report here instead of stdout");

    auto* gen = app.add_subcommand("gen-structure", "Write a structure file");
    add_structure_flags(gen, o);
    gen->add_option("--seed", o.seed, "Random seed for --graph sampling");
    gen->add_option("--out", o.out, "Output path (default stdout)");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (train->parsed()) {
            o.out = o.model;
            return cmd_train(o, out);
        }
        if (eval->parsed()) return cmd_eval(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (entropy->parsed()) return cmd_entropy(o, out);
        if (gen->parsed()) return cmd_gen_structure(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace strent::cli
