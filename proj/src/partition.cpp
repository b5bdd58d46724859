#include "strent/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "strent/error.hpp"

namespace strent {

ProbDist::ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw Error(Errc::InvalidDistribution, "empty distribution");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        double p = probs_[i];
        if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kProbTolerance) {
            throw Error(Errc::InvalidDistribution, "entry " + std::to_string(i) + " is not a probability", i);
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kProbTolerance) {
        throw Error(Errc::InvalidDistribution, "probabilities sum to " + std::to_string(total));
    }
}

ProbDist ProbDist::uniform(std::size_t k) {
    return ProbDist(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

ProbDist ProbDist::one_hot(std::size_t k, std::size_t hot) {
    if (hot >= k) {
        throw Error(Errc::OutOfRange, "one_hot index", hot);
    }
    std::vector<double> p(k, 0.0);
    p[hot] = 1.0;
    return ProbDist(std::move(p));
}

Partition validate_partition(std::vector<Block> blocks, std::size_t k) {
    if (k == 0) {
        throw Error(Errc::OutOfRange, "a partition needs at least one class", 0);
    }
    std::vector<bool> seen(k, false);
    for (const Block& block : blocks) {
        if (block.empty()) {
            throw Error(Errc::EmptyBlock, "partition contains an empty block");
        }
        for (std::size_t y : block) {
            if (y >= k) {
                throw Error(Errc::OutOfRange, "class " + std::to_string(y) + " outside 0.." + std::to_string(k - 1), y);
            }
            if (seen[y]) {
                throw Error(Errc::Overlap, "class " + std::to_string(y) + " appears in more than one block", y);
            }
            seen[y] = true;
        }
    }
    for (std::size_t y = 0; y < k; ++y) {
        if (!seen[y]) {
            throw Error(Errc::Missing, "class " + std::to_string(y) + " is not covered", y);
        }
    }

    for (Block& block : blocks) {
        std::sort(block.begin(), block.end());
    }
    std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });

    Partition p;
    p.block_of_.assign(k, 0);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (std::size_t y : blocks[b]) {
            p.block_of_[y] = b;
        }
    }
    p.blocks_ = std::move(blocks);
    return p;
}

Partition singleton_partition(std::size_t k) {
    std::vector<Block> blocks(k);
    for (std::size_t i = 0; i < k; ++i) {
        blocks[i] = {i};
    }
    return validate_partition(std::move(blocks), k);
}

Partition one_block_partition(std::size_t k) {
    Block all(k);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return validate_partition({std::move(all)}, k);
}

std::size_t Partition::block_of(std::size_t y) const {
    if (y >= block_of_.size()) {
        throw Error(Errc::OutOfRange, "class " + std::to_string(y) + " outside partition", y);
    }
    return block_of_[y];
}

RandomPartition::RandomPartition(std::vector<Partition> partitions, std::vector<double> weights)
    : partitions_(std::move(partitions)), weights_(std::move(weights)) {
    if (partitions_.empty()) {
        throw Error(Errc::InvalidWeights, "a random partition needs at least one partition");
    }
    if (partitions_.size() != weights_.size()) {
        throw Error(Errc::InvalidWeights, "partition and weight counts differ");
    }
    const std::size_t k = partitions_.front().num_classes();
    double total = 0.0;
    for (std::size_t i = 0; i < partitions_.size(); ++i) {
        if (partitions_[i].num_classes() != k) {
            throw Error(Errc::DimensionMismatch, "partition " + std::to_string(i) + " covers a different class count", i);
        }
        if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
            throw Error(Errc::InvalidWeights, "weight " + std::to_string(i) + " is negative or not finite", i);
        }
        total += weights_[i];
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
        throw Error(Errc::InvalidWeights, "weights sum to " + std::to_string(total));
    }
}

RandomPartition trivial_random_partition(std::size_t k) {
    return RandomPartition({singleton_partition(k)}, {1.0});
}

std::size_t coarsen_label(const Partition& p, std::size_t y) {
    return p.block_of(y);
}

ProbDist coarsen_dist(const Partition& p, const ProbDist& dist) {
    if (dist.size() != p.num_classes()) {
        throw Error(Errc::DimensionMismatch, "distribution has " + std::to_string(dist.size()) +
                                                 " classes, partition has " + std::to_string(p.num_classes()));
    }
    std::vector<double> mass(p.num_blocks(), 0.0);
    for (std::size_t b = 0; b < p.num_blocks(); ++b) {
        for (std::size_t y : p.block(b)) {
            mass[b] += dist[y];
        }
    }
    return ProbDist(std::move(mass));
}

BlockUnionDist random_block_dist(const RandomPartition& rp, const ProbDist& dist) {
    if (dist.size() != rp.num_classes()) {
        throw Error(Errc::DimensionMismatch, "distribution and random partition disagree on class count");
    }
    BlockUnionDist out;
    std::map<Block, std::size_t> index;
    for (std::size_t i = 0; i < rp.size(); ++i) {
        const Partition& part = rp.partition(i);
        ProbDist coarse = coarsen_dist(part, dist);
        for (std::size_t b = 0; b < part.num_blocks(); ++b) {
            auto [it, inserted] = index.try_emplace(part.block(b), out.blocks.size());
            if (inserted) {
                out.blocks.push_back(part.block(b));
                out.probs.push_back(0.0);
            }
            double mass = rp.weight(i) * coarse[b];
            out.probs[it->second] += mass;
            out.cells.push_back({i, it->second, mass});
        }
    }
    return out;
}

}  // namespace strent
