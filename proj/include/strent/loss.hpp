#pragma once

#include <cstddef>
#include <span>

#include "strent/matrix.hpp"
#include "strent/partition.hpp"

namespace strent {

// Smallest probability fed to a logarithm.
inline constexpr double kProbClamp = 1e-15;

// Per-observation derivatives of a loss with respect to the logits. Rows are
// not averaged over the batch.
struct GradHess {
    Matrix grad;
    Matrix hess_diag;
};

// Row-wise softmax with max subtraction. Throws NonFiniteInput.
Matrix softmax(const Matrix& logits);

// -(1/n) sum_l log q[l, y_l].
double log_loss(const Matrix& probs, std::span<const std::size_t> labels);

// -(1/n) sum_l sum_t w_t log(sum_{j in B_t(y_l)} q[l, j]).
double structured_log_loss(const Matrix& probs, std::span<const std::size_t> labels, const RandomPartition& rp);

// Exact gradient and diagonal Hessian of n * structured_log_loss(softmax(logits)).
//
// With a = softmax restricted to the label's block B_t:
//   dL/dz_k   = sum_t w_t (q_k - [k in B_t] a_k)
//   d2L/dz_k2 = sum_t w_t (q_k (1 - q_k) - [k in B_t] a_k (1 - a_k))
// The Hessian diagonal can be negative when a block holds several classes.
GradHess structured_grad_hess(const Matrix& logits, std::span<const std::size_t> labels, const RandomPartition& rp);

// Fraction of rows whose fine argmax lands in the same block as the label.
double coarsened_accuracy(const Matrix& probs, std::span<const std::size_t> labels, const Partition& p);

// Index of the largest entry; the first one wins ties.
std::size_t argmax(std::span<const double> row);

}  // namespace strent
