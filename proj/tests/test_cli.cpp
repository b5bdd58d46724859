#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "dataset_io.hpp"
#include "strent/gbm.hpp"
#include "strent/rng.hpp"
#include "strent/structure_io.hpp"

#include <sys/wait.h>
#include <unistd.h>

using namespace strent;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "strent");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

// Key/value rows of a two-column "name,value" report.
std::map<std::string, double> table(const std::string& text) {
    std::map<std::string, double> m;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        auto comma = line.rfind(',');
        m[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    return m;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

// Twelve "months" on a circle; features are the noisy position.
void write_months(const fs::path& p, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::ofstream f(p);
    f << "x1,x2,month\n";
    f.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = rng.uniform_index(12);
        double a = 2.0 * std::numbers::pi * static_cast<double>(m) / 12.0;
        f << std::cos(a) + 0.4 * rng.normal() << ',' << std::sin(a) + 0.4 * rng.normal() << ',' << m << '\n';
    }
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("strent_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        write_months(dir / "train.csv", 240, 1);
        write_months(dir / "test.csv", 200, 2);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("train writes a model and a metrics file") {
    Workspace ws;
    Result r = run({"train", "--data", ws.path("train.csv"), "--test-data", ws.path("test.csv"), "--label", "month",
                    "--circular", "12,3", "--p0", "0.3", "--rounds", "20", "--seed", "5", "--out",
                    ws.path("m.json")});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(fs::exists(ws.path("m.json")));
    std::string metrics = slurp(ws.path("m.json.metrics.csv"));
    std::istringstream lines(metrics);
    std::string header, columns, line;
    std::getline(lines, header);
    std::getline(lines, columns);
    CHECK(header.rfind("# strent train seed=5", 0) == 0);
    CHECK(columns == "round,train_log_loss,train_objective,test_log_loss");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 20);
    CHECK(r.out.find("seed=5") != std::string::npos);
}

TEST_CASE("missing label column is a data error naming the column") {
    Workspace ws;
    Result r = run({"train", "--data", ws.path("train.csv"), "--label", "county", "--out", ws.path("m.json")});
    CHECK(r.code == cli::kExitData);
    CHECK(r.err.find("county") != std::string::npos);
}

TEST_CASE("usage errors") {
    Workspace ws;
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"bogus"}).code == cli::kExitUsage);
    CHECK(run({"train", "--data", ws.path("train.csv")}).code == cli::kExitUsage);
    Result two = run({"train", "--data", ws.path("train.csv"), "--label", "month", "--circular", "12,3", "--p0", "0.3",
                      "--hierarchy", "builtin:cifar100", "--out", ws.path("m.json")});
    CHECK(two.code == cli::kExitUsage);
    CHECK(run({"train", "--data", ws.path("train.csv"), "--label", "month", "--circular", "12,3", "--out",
               ws.path("m.json")})
              .code == cli::kExitUsage);
    CHECK(run({"entropy", "--dist", "0.5,abc"}).code == cli::kExitUsage);
    CHECK(run({"train", "--data", ws.path("nope.csv"), "--out", ws.path("m.json")}).code == cli::kExitData);
    CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("seeded runs are byte-identical") {
    Workspace ws;
    for (const char* name : {"a.json", "b.json"}) {
        REQUIRE(run({"train", "--data", ws.path("train.csv"), "--label", "month", "--circular", "12,3", "--p0", "0.3",
                     "--rounds", "10", "--seed", "11", "--out", ws.path(name)})
                    .code == 0);
    }
    CHECK(slurp(ws.path("a.json")) == slurp(ws.path("b.json")));
    CHECK(slurp(ws.path("a.json.metrics.csv")) == slurp(ws.path("b.json.metrics.csv")));

    write(ws.path("cycle.txt"), "12\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n8 9\n9 10\n10 11\n11 0\n");
    for (const char* name : {"c.json", "d.json"}) {
        REQUIRE(run({"train", "--data", ws.path("train.csv"), "--label", "month", "--graph", ws.path("cycle.txt"),
                     "--partition-size", "4", "--p0", "0.5", "--rounds", "10", "--seed", "11", "--out",
                     ws.path(name)})
                    .code == 0);
    }
    CHECK(slurp(ws.path("c.json")) == slurp(ws.path("d.json")));
}

TEST_CASE("the installed binary behaves like the in-process entry point") {
    Workspace ws;
    const std::string bin = STRENT_CLI_PATH;
    auto train_cmd = [&](const std::string& out) {
        return bin + " train --data " + ws.path("train.csv") + " --label month --circular 12,3 --p0 0.3" +
               " --rounds 8 --seed 3 --out " + ws.path(out) + " > " + ws.path(out + ".stdout");
    };
    REQUIRE(std::system(train_cmd("p.json").c_str()) == 0);
    REQUIRE(std::system(train_cmd("q.json").c_str()) == 0);
    CHECK(slurp(ws.path("p.json")) == slurp(ws.path("q.json")));
    REQUIRE(run({"train", "--data", ws.path("train.csv"), "--label", "month", "--circular", "12,3", "--p0", "0.3",
                 "--rounds", "8", "--seed", "3", "--out", ws.path("r.json")})
                .code == 0);
    CHECK(slurp(ws.path("p.json")) == slurp(ws.path("r.json")));

    const std::string missing = bin + " train --data " + ws.path("train.csv") + " --label nope --out " +
                                ws.path("x.json") + " 2> /dev/null";
    int status = std::system(missing.c_str());
    CHECK(WEXITSTATUS(status) == cli::kExitData);
}

TEST_CASE("eval reproduces training and library metrics") {
    Workspace ws;
    REQUIRE(run({"train", "--data", ws.path("train.csv"), "--label", "month", "--circular", "12,3", "--p0", "0.3",
                 "--rounds", "15", "--seed", "2", "--out", ws.path("m.json")})
                .code == 0);
    Result r = run({"eval", "--model", ws.path("m.json"), "--data", ws.path("train.csv"), "--label", "month"});
    REQUIRE(r.code == 0);
    auto metrics = table(r.out);
    CHECK(metrics.size() == 2);
    BoostModel model = load_model(ws.path("m.json"));
    CHECK(std::abs(metrics["log_loss"] - model.history.back().train_log_loss) <= 1e-12);

    Result s = run({"eval", "--model", ws.path("m.json"), "--data", ws.path("test.csv"), "--label", "month",
                    "--circular", "12,3", "--p0", "0.3"});
    REQUIRE(s.code == 0);
    auto sm = table(s.out);
    auto raw = cli::read_labeled_csv(ws.path("test.csv"), "month");
    auto mapping = cli::map_labels(raw.raw_labels, model.class_names);
    Dataset test = cli::to_dataset(std::move(raw), mapping);
    RandomPartition rp = circular_structure(12, 3, 0.3);
    EvalReport lib = evaluate(model, test, rp);
    CHECK(std::abs(sm["log_loss"] - lib.log_loss) <= 1e-12);
    CHECK(std::abs(sm["accuracy"] - lib.accuracy) <= 1e-12);
    CHECK(std::abs(sm["structured_log_loss"] - *lib.structured_log_loss) <= 1e-12);
    REQUIRE(lib.coarsened_accuracy.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(sm["coarsened_accuracy_" + std::to_string(i)] - lib.coarsened_accuracy[i]) <= 1e-12);
    }

    Result mismatch = run({"eval", "--model", ws.path("m.json"), "--data", ws.path("test.csv"), "--label", "month",
                           "--circular", "6,3", "--p0", "0.3"});
    CHECK(mismatch.code == cli::kExitData);
    write(ws.path("wide.csv"), "x1,x2,x3,month\n0,0,0,1\n1,1,1,2\n");
    CHECK(run({"eval", "--model", ws.path("m.json"), "--data", ws.path("wide.csv"), "--label", "month"}).code ==
          cli::kExitData);
}

TEST_CASE("sweep") {
    Workspace ws;
    Result r = run({"sweep", "--data", ws.path("train.csv"), "--test-data", ws.path("test.csv"), "--label", "month",
                    "--circular", "12,3", "--p0", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", "--trials", "1",
                    "--rounds", "5", "--seed", "9"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, columns, row;
    std::getline(lines, header);
    std::getline(lines, columns);
    std::getline(lines, row);
    CHECK(header.rfind("# strent sweep seed=9", 0) == 0);
    auto names = split_line(columns);
    REQUIRE(names.size() == 11);
    CHECK(names[0] == "train_size");
    CHECK(names[1] == "standard");
    auto values = split_line(row);
    REQUIRE(values.size() == 11);
    CHECK(values[0] == "240");

    // trials=1 on the full data is train followed by eval with the same seed
    REQUIRE(run({"train", "--data", ws.path("train.csv"), "--label", "month", "--rounds", "5", "--seed", "9", "--out",
                 ws.path("std.json")})
                .code == 0);
    REQUIRE(run({"train", "--data", ws.path("train.csv"), "--label", "month", "--circular", "12,3", "--p0", "0.3",
                 "--rounds", "5", "--seed", "9", "--out", ws.path("p3.json")})
                .code == 0);
    auto std_eval = table(
        run({"eval", "--model", ws.path("std.json"), "--data", ws.path("test.csv"), "--label", "month"}).out);
    auto p3_eval = table(
        run({"eval", "--model", ws.path("p3.json"), "--data", ws.path("test.csv"), "--label", "month"}).out);
    CHECK(std::stod(values[1]) == std_eval["log_loss"]);
    CHECK(std::stod(values[4]) == p3_eval["log_loss"]);

    write(ws.path("cycle.txt"), "12\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n8 9\n9 10\n10 11\n11 0\n");
    Result g = run({"sweep", "--data", ws.path("train.csv"), "--test-data", ws.path("test.csv"), "--label", "month",
                    "--graph", ws.path("cycle.txt"), "--partition-size", "3,4", "--p0", "0.5,0.7", "--trials", "2",
                    "--train-sizes", "100,200", "--rounds", "3", "--seed", "4"});
    REQUIRE(g.code == 0);
    std::istringstream glines(g.out);
    std::vector<std::string> all;
    while (std::getline(glines, row)) all.push_back(row);
    REQUIRE(all.size() == 4);
    CHECK(split_line(all[1]).size() == 6);
    CHECK(split_line(all[2])[0] == "100");
    CHECK(split_line(all[3])[0] == "200");

    CHECK(run({"sweep", "--data", ws.path("train.csv"), "--test-data", ws.path("test.csv"), "--label", "month",
               "--train-sizes", "100000", "--seed", "1"})
              .code == cli::kExitUsage);
}

TEST_CASE("entropy") {
    Workspace ws;
    write(ws.path("running.json"),
          R"({"num_classes": 3, "partitions": [[[0], [1], [2]], [[0, 1], [2]]], "weights": [0.5, 0.5]})");
    Result r = run({"entropy", "--dist", "0.25,0.25,0.5", "--structure", ws.path("running.json")});
    REQUIRE(r.code == 0);
    auto t = table(r.out);
    CHECK(t["structured_entropy_bits"] == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(t["shannon_entropy_bits"] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(r.out.find("random_block {0 1},0.25") != std::string::npos);

    auto trivial = table(run({"entropy", "--dist", "0.1,0.2,0.3,0.4"}).out);
    CHECK(trivial["structured_entropy_nats"] == trivial["shannon_entropy_nats"]);

    auto hot = table(run({"entropy", "--dist", "0,1,0", "--structure", ws.path("running.json")}).out);
    CHECK(hot["structured_entropy_bits"] == 0.0);
    CHECK(hot["shannon_entropy_bits"] == 0.0);

    auto months = table(run({"entropy", "--data", ws.path("train.csv"), "--label", "month", "--circular", "12,3",
                             "--p0", "1"})
                            .out);
    CHECK(months["structured_entropy_nats"] == months["shannon_entropy_nats"]);

    CHECK(run({"entropy", "--dist", "0.5,0.6"}).code == cli::kExitData);
}

TEST_CASE("gen-structure") {
    Workspace ws;
    Result c = run({"gen-structure", "--circular", "12,3", "--p0", "0.25", "--out", ws.path("c.json")});
    REQUIRE(c.code == 0);
    auto file = load_structure(ws.path("c.json"));
    CHECK(file.structure.size() == 4);
    CHECK(file.structure.partition(1) == circular_structure(12, 3, 0.25).partition(1));

    Result h = run({"gen-structure", "--hierarchy", "builtin:cifar100", "--weights", "0.25,0.25,0.25,0.25"});
    REQUIRE(h.code == 0);
    CHECK(h.out.find("aquarium_fish") != std::string::npos);

    write(ws.path("grid.txt"), "4\n0 1\n1 2\n2 3\n3 0\n");
    Result g1 = run({"gen-structure", "--graph", ws.path("grid.txt"), "--partition-size", "2", "--p0", "0.5",
                     "--seed", "6"});
    Result g2 = run({"gen-structure", "--graph", ws.path("grid.txt"), "--partition-size", "2", "--p0", "0.5",
                     "--seed", "6"});
    REQUIRE(g1.code == 0);
    CHECK(g1.out == g2.out);
    CHECK(run({"gen-structure"}).code == cli::kExitUsage);
}
