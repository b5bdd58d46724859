#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace strent {

using Block = std::vector<std::size_t>;

// Probability vector over classes 0..k-1. Entries are non-negative and sum to
// one within kProbTolerance.
class ProbDist {
public:
    static constexpr double kProbTolerance = 1e-9;

    explicit ProbDist(std::vector<double> probs);
    ProbDist(std::initializer_list<double> probs) : ProbDist(std::vector<double>(probs)) {}

    static ProbDist uniform(std::size_t k);
    static ProbDist one_hot(std::size_t k, std::size_t hot);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }

    bool operator==(const ProbDist&) const = default;

private:
    std::vector<double> probs_;
};

// A set of disjoint non-empty blocks covering 0..k-1. Blocks are kept in
// canonical order: members ascending, blocks ascending by smallest member.
class Partition {
public:
    std::size_t num_classes() const noexcept { return block_of_.size(); }
    std::size_t num_blocks() const noexcept { return blocks_.size(); }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const Block& block(std::size_t b) const { return blocks_.at(b); }

    // Index of the block containing class y. Throws OutOfRange.
    std::size_t block_of(std::size_t y) const;
    std::span<const std::size_t> block_map() const noexcept { return block_of_; }

    bool operator==(const Partition& other) const { return blocks_ == other.blocks_; }

private:
    friend Partition validate_partition(std::vector<Block> blocks, std::size_t k);
    Partition() = default;

    std::vector<Block> blocks_;
    std::vector<std::size_t> block_of_;
};

// Probability distribution over a structure (a list of partitions of the same
// class set). Duplicate partitions are kept as separate entries.
class RandomPartition {
public:
    static constexpr double kWeightTolerance = 1e-9;

    RandomPartition(std::vector<Partition> partitions, std::vector<double> weights);

    std::size_t num_classes() const noexcept { return partitions_.front().num_classes(); }
    std::size_t size() const noexcept { return partitions_.size(); }
    const std::vector<Partition>& partitions() const noexcept { return partitions_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const Partition& partition(std::size_t i) const { return partitions_.at(i); }
    double weight(std::size_t i) const { return weights_.at(i); }

    bool operator==(const RandomPartition&) const = default;

private:
    std::vector<Partition> partitions_;
    std::vector<double> weights_;
};

// Distribution of the random block Z(Y) over the union of all blocks used by
// a random partition. `cells` keeps the (partition, block) joint masses the
// merged probabilities were assembled from.
struct BlockUnionDist {
    struct Cell {
        std::size_t partition;
        std::size_t block;  // index into `blocks`
        double mass;        // weight(partition) * P(Y in block)
    };

    std::vector<Block> blocks;
    std::vector<double> probs;
    std::vector<Cell> cells;
};

Partition validate_partition(std::vector<Block> blocks, std::size_t k);
Partition singleton_partition(std::size_t k);
// The partition with a single block holding every class.
Partition one_block_partition(std::size_t k);
RandomPartition trivial_random_partition(std::size_t k);

std::size_t coarsen_label(const Partition& p, std::size_t y);
ProbDist coarsen_dist(const Partition& p, const ProbDist& dist);
BlockUnionDist random_block_dist(const RandomPartition& rp, const ProbDist& dist);

}  // namespace strent
