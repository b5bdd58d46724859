#pragma once

#include <cstddef>
#include <vector>

#include "strent/matrix.hpp"
#include "strent/partition.hpp"

namespace strent {

enum class LogBase { Natural, Two };

// Joint distribution of (X, Y): rows index X states, columns index Y states.
class JointTable {
public:
    explicit JointTable(Matrix table);

    std::size_t x_size() const noexcept { return table_.rows(); }
    std::size_t y_size() const noexcept { return table_.cols(); }
    double operator()(std::size_t x, std::size_t y) const { return table_(x, y); }
    const Matrix& table() const noexcept { return table_; }

    ProbDist marginal_x() const;
    ProbDist marginal_y() const;
    JointTable transposed() const;
    // Row-major flattening; cell (x, y) maps to x * y_size() + y.
    ProbDist flatten() const;

private:
    Matrix table_;
};

// Product structure on S_X x S_Y; product-space index is x * y_size + y.
struct JointRandomPartition {
    std::size_t x_size = 0;
    std::size_t y_size = 0;
    RandomPartition structure;
};

double shannon_entropy(const ProbDist& dist, LogBase base = LogBase::Natural);

double structured_entropy(const ProbDist& dist, const RandomPartition& rp, LogBase base = LogBase::Natural);

// Sum over partition pairs of r_j q_i H(S_i(Y) | R_j(X)). X states with zero
// coarsened mass are skipped.
double conditional_structured_entropy(const JointTable& joint, const RandomPartition& w_on_x,
                                      const RandomPartition& z_on_y, LogBase base = LogBase::Natural);

// Weighted KL divergence of the coarsened distributions. Returns +infinity
// when some block has p-mass but no q-mass under a partition of positive
// weight; see is_absolutely_continuous.
double structured_relative_entropy(const ProbDist& p, const ProbDist& q, const RandomPartition& rp,
                                   LogBase base = LogBase::Natural);
bool is_absolutely_continuous(const ProbDist& p, const ProbDist& q, const RandomPartition& rp);

// -sum_t w_t sum_B P(B) log Q(B). Equals structured_entropy(p) plus
// structured_relative_entropy(p, q).
double structured_cross_entropy(const ProbDist& p, const ProbDist& q, const RandomPartition& rp,
                                LogBase base = LogBase::Natural);

double structured_mutual_information(const JointTable& joint, const RandomPartition& w_on_x,
                                     const RandomPartition& z_on_y, LogBase base = LogBase::Natural);

JointRandomPartition joint_structure(const RandomPartition& w_on_x, const RandomPartition& z_on_y);

double joint_structured_entropy(const JointTable& joint, const RandomPartition& w_on_x,
                                const RandomPartition& z_on_y, LogBase base = LogBase::Natural);

// Maximiser of the base-2 structured entropy for three states under
// {singleton: q1, {{0,1},{2}}: 1-q1}.
ProbDist max_entropy_three_state(double q1);

}  // namespace strent
