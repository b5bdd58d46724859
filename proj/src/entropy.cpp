#include "strent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "strent/error.hpp"

namespace strent {

namespace {

double log_in(double x, LogBase base) {
    return base == LogBase::Two ? std::log2(x) : std::log(x);
}

// -sum p log p with 0 log 0 = 0. Masses that round to just above one would
// otherwise give a tiny negative result.
double entropy_of(std::span<const double> probs, LogBase base) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) {
            h -= p * log_in(p, base);
        }
    }
    return std::max(h, 0.0);
}

void check_classes(std::size_t have, std::size_t want, const char* what) {
    if (have != want) {
        throw Error(Errc::DimensionMismatch, std::string(what) + ": expected " + std::to_string(want) +
                                                 " classes, got " + std::to_string(have));
    }
}

// H(B | A) for the table coarsened by `rows` on X and `cols` on Y.
double coarsened_conditional_entropy(const JointTable& joint, const Partition& rows, const Partition& cols,
                                     LogBase base) {
    Matrix coarse(rows.num_blocks(), cols.num_blocks());
    for (std::size_t x = 0; x < joint.x_size(); ++x) {
        std::size_t a = rows.block_of(x);
        for (std::size_t y = 0; y < joint.y_size(); ++y) {
            coarse(a, cols.block_of(y)) += joint(x, y);
        }
    }
    double h = 0.0;
    for (std::size_t a = 0; a < coarse.rows(); ++a) {
        auto row = coarse.row(a);
        double mass = 0.0;
        for (double v : row) {
            mass += v;
        }
        if (mass <= 0.0) {
            continue;
        }
        double inner = 0.0;
        for (double v : row) {
            if (v > 0.0) {
                double c = v / mass;
                inner -= c * log_in(c, base);
            }
        }
        h += mass * inner;
    }
    return h;
}

}  // namespace

JointTable::JointTable(Matrix table) : table_(std::move(table)) {
    if (table_.rows() == 0 || table_.cols() == 0) {
        throw Error(Errc::InvalidDistribution, "empty joint table");
    }
    double total = 0.0;
    for (double v : table_.data()) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(Errc::InvalidDistribution, "joint table has a negative or non-finite cell");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > ProbDist::kProbTolerance) {
        throw Error(Errc::InvalidDistribution, "joint table sums to " + std::to_string(total));
    }
}

ProbDist JointTable::marginal_x() const {
    std::vector<double> m(x_size(), 0.0);
    for (std::size_t x = 0; x < x_size(); ++x) {
        for (std::size_t y = 0; y < y_size(); ++y) {
            m[x] += table_(x, y);
        }
    }
    return ProbDist(std::move(m));
}

ProbDist JointTable::marginal_y() const {
    std::vector<double> m(y_size(), 0.0);
    for (std::size_t x = 0; x < x_size(); ++x) {
        for (std::size_t y = 0; y < y_size(); ++y) {
            m[y] += table_(x, y);
        }
    }
    return ProbDist(std::move(m));
}

JointTable JointTable::transposed() const {
    Matrix t(y_size(), x_size());
    for (std::size_t x = 0; x < x_size(); ++x) {
        for (std::size_t y = 0; y < y_size(); ++y) {
            t(y, x) = table_(x, y);
        }
    }
    return JointTable(std::move(t));
}

ProbDist JointTable::flatten() const {
    auto d = table_.data();
    return ProbDist(std::vector<double>(d.begin(), d.end()));
}

double shannon_entropy(const ProbDist& dist, LogBase base) {
    return entropy_of(dist.probs(), base);
}

double structured_entropy(const ProbDist& dist, const RandomPartition& rp, LogBase base) {
    check_classes(dist.size(), rp.num_classes(), "structured_entropy");
    double h = 0.0;
    for (std::size_t i = 0; i < rp.size(); ++i) {
        h += rp.weight(i) * shannon_entropy(coarsen_dist(rp.partition(i), dist), base);
    }
    return h;
}

double conditional_structured_entropy(const JointTable& joint, const RandomPartition& w_on_x,
                                      const RandomPartition& z_on_y, LogBase base) {
    check_classes(joint.x_size(), w_on_x.num_classes(), "conditional_structured_entropy (X axis)");
    check_classes(joint.y_size(), z_on_y.num_classes(), "conditional_structured_entropy (Y axis)");
    double h = 0.0;
    for (std::size_t i = 0; i < z_on_y.size(); ++i) {
        for (std::size_t j = 0; j < w_on_x.size(); ++j) {
            double w = z_on_y.weight(i) * w_on_x.weight(j);
            h += w * coarsened_conditional_entropy(joint, w_on_x.partition(j), z_on_y.partition(i), base);
        }
    }
    return h;
}

bool is_absolutely_continuous(const ProbDist& p, const ProbDist& q, const RandomPartition& rp) {
    check_classes(p.size(), rp.num_classes(), "is_absolutely_continuous");
    check_classes(q.size(), rp.num_classes(), "is_absolutely_continuous");
    for (std::size_t i = 0; i < rp.size(); ++i) {
        if (rp.weight(i) <= 0.0) {
            continue;
        }
        ProbDist cp = coarsen_dist(rp.partition(i), p);
        ProbDist cq = coarsen_dist(rp.partition(i), q);
        for (std::size_t b = 0; b < cp.size(); ++b) {
            if (cp[b] > 0.0 && cq[b] <= 0.0) {
                return false;
            }
        }
    }
    return true;
}

double structured_relative_entropy(const ProbDist& p, const ProbDist& q, const RandomPartition& rp,
                                   LogBase base) {
    check_classes(p.size(), rp.num_classes(), "structured_relative_entropy");
    check_classes(q.size(), rp.num_classes(), "structured_relative_entropy");
    double d = 0.0;
    for (std::size_t i = 0; i < rp.size(); ++i) {
        if (rp.weight(i) <= 0.0) {
            continue;
        }
        ProbDist cp = coarsen_dist(rp.partition(i), p);
        ProbDist cq = coarsen_dist(rp.partition(i), q);
        double inner = 0.0;
        for (std::size_t b = 0; b < cp.size(); ++b) {
            if (cp[b] <= 0.0) {
                continue;
            }
            if (cq[b] <= 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            inner += cp[b] * log_in(cp[b] / cq[b], base);
        }
        d += rp.weight(i) * inner;
    }
    return d;
}

double structured_cross_entropy(const ProbDist& p, const ProbDist& q, const RandomPartition& rp, LogBase base) {
    check_classes(p.size(), rp.num_classes(), "structured_cross_entropy");
    check_classes(q.size(), rp.num_classes(), "structured_cross_entropy");
    double h = 0.0;
    for (std::size_t i = 0; i < rp.size(); ++i) {
        if (rp.weight(i) <= 0.0) {
            continue;
        }
        ProbDist cp = coarsen_dist(rp.partition(i), p);
        ProbDist cq = coarsen_dist(rp.partition(i), q);
        double inner = 0.0;
        for (std::size_t b = 0; b < cp.size(); ++b) {
            if (cp[b] <= 0.0) {
                continue;
            }
            if (cq[b] <= 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            inner -= cp[b] * log_in(cq[b], base);
        }
        h += rp.weight(i) * inner;
    }
    return h;
}

double structured_mutual_information(const JointTable& joint, const RandomPartition& w_on_x,
                                     const RandomPartition& z_on_y, LogBase base) {
    return structured_entropy(joint.marginal_y(), z_on_y, base) -
           conditional_structured_entropy(joint, w_on_x, z_on_y, base);
}

JointRandomPartition joint_structure(const RandomPartition& w_on_x, const RandomPartition& z_on_y) {
    const std::size_t nx = w_on_x.num_classes();
    const std::size_t ny = z_on_y.num_classes();
    std::vector<Partition> parts;
    std::vector<double> weights;
    parts.reserve(w_on_x.size() * z_on_y.size());
    for (std::size_t i = 0; i < w_on_x.size(); ++i) {
        const Partition& rx = w_on_x.partition(i);
        for (std::size_t j = 0; j < z_on_y.size(); ++j) {
            const Partition& sy = z_on_y.partition(j);
            std::vector<Block> blocks;
            blocks.reserve(rx.num_blocks() * sy.num_blocks());
            for (const Block& a : rx.blocks()) {
                for (const Block& b : sy.blocks()) {
                    Block cell;
                    cell.reserve(a.size() * b.size());
                    for (std::size_t x : a) {
                        for (std::size_t y : b) {
                            cell.push_back(x * ny + y);
                        }
                    }
                    blocks.push_back(std::move(cell));
                }
            }
            parts.push_back(validate_partition(std::move(blocks), nx * ny));
            weights.push_back(w_on_x.weight(i) * z_on_y.weight(j));
        }
    }
    return {nx, ny, RandomPartition(std::move(parts), std::move(weights))};
}

double joint_structured_entropy(const JointTable& joint, const RandomPartition& w_on_x,
                                const RandomPartition& z_on_y, LogBase base) {
    check_classes(joint.x_size(), w_on_x.num_classes(), "joint_structured_entropy (X axis)");
    check_classes(joint.y_size(), z_on_y.num_classes(), "joint_structured_entropy (Y axis)");
    JointRandomPartition product = joint_structure(w_on_x, z_on_y);
    return structured_entropy(joint.flatten(), product.structure, base);
}

ProbDist max_entropy_three_state(double q1) {
    if (!(q1 >= 0.0 && q1 <= 1.0)) {
        throw Error(Errc::OutOfRange, "q1 must lie in [0, 1]");
    }
    double p = 1.0 / (2.0 * (1.0 + std::exp2(-q1)));
    return ProbDist({p, p, 1.0 - 2.0 * p});
}

}  // namespace strent
