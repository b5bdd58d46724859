#include "strent/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "strent/error.hpp"

namespace strent {

namespace {

void check_batch(const Matrix& m, std::span<const std::size_t> labels, std::size_t k, const char* what) {
    if (m.rows() != labels.size()) {
        throw Error(Errc::DimensionMismatch, std::string(what) + ": " + std::to_string(m.rows()) + " rows but " +
                                                 std::to_string(labels.size()) + " labels");
    }
    if (m.cols() != k) {
        throw Error(Errc::DimensionMismatch, std::string(what) + ": " + std::to_string(m.cols()) +
                                                 " columns but structure has " + std::to_string(k) + " classes");
    }
    for (std::size_t l = 0; l < labels.size(); ++l) {
        if (labels[l] >= k) {
            throw Error(Errc::OutOfRange, std::string(what) + ": label " + std::to_string(labels[l]) + " on row " +
                                              std::to_string(l),
                        l);
        }
    }
}

void check_finite(const Matrix& m) {
    for (double v : m.data()) {
        if (!std::isfinite(v)) {
            throw Error(Errc::NonFiniteInput, "logits contain a non-finite value");
        }
    }
}

double neg_log(double p) {
    return -std::log(std::max(p, kProbClamp));
}

}  // namespace

std::size_t argmax(std::span<const double> row) {
    return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

Matrix softmax(const Matrix& logits) {
    check_finite(logits);
    Matrix out(logits.rows(), logits.cols());
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        auto z = logits.row(r);
        auto q = out.row(r);
        double zmax = *std::max_element(z.begin(), z.end());
        double total = 0.0;
        for (std::size_t c = 0; c < z.size(); ++c) {
            q[c] = std::exp(z[c] - zmax);
            total += q[c];
        }
        for (double& v : q) {
            v /= total;
        }
    }
    return out;
}

double log_loss(const Matrix& probs, std::span<const std::size_t> labels) {
    check_batch(probs, labels, probs.cols(), "log_loss");
    if (labels.empty()) {
        throw Error(Errc::DimensionMismatch, "log_loss of an empty batch");
    }
    std::vector<double> terms(labels.size());
    for (std::size_t l = 0; l < labels.size(); ++l) {
        terms[l] = neg_log(probs(l, labels[l]));
    }
    return pairwise_sum(terms) / static_cast<double>(labels.size());
}

double structured_log_loss(const Matrix& probs, std::span<const std::size_t> labels, const RandomPartition& rp) {
    check_batch(probs, labels, rp.num_classes(), "structured_log_loss");
    if (labels.empty()) {
        throw Error(Errc::DimensionMismatch, "structured_log_loss of an empty batch");
    }
    std::vector<double> terms(labels.size(), 0.0);
    for (std::size_t l = 0; l < labels.size(); ++l) {
        auto q = probs.row(l);
        double acc = 0.0;
        for (std::size_t t = 0; t < rp.size(); ++t) {
            const Partition& part = rp.partition(t);
            double mass = 0.0;
            for (std::size_t j : part.block(part.block_of(labels[l]))) {
                mass += q[j];
            }
            acc += rp.weight(t) * neg_log(mass);
        }
        terms[l] = acc;
    }
    return pairwise_sum(terms) / static_cast<double>(labels.size());
}

GradHess structured_grad_hess(const Matrix& logits, std::span<const std::size_t> labels, const RandomPartition& rp) {
    check_batch(logits, labels, rp.num_classes(), "structured_grad_hess");
    Matrix probs = softmax(logits);
    const std::size_t k = logits.cols();
    GradHess out{Matrix(logits.rows(), k), Matrix(logits.rows(), k)};

    double total_weight = 0.0;
    for (double w : rp.weights()) {
        total_weight += w;
    }
    std::vector<double> within(k);
    for (std::size_t l = 0; l < logits.rows(); ++l) {
        auto z = logits.row(l);
        auto q = probs.row(l);
        auto g = out.grad.row(l);
        auto h = out.hess_diag.row(l);
        for (std::size_t c = 0; c < k; ++c) {
            g[c] = total_weight * q[c];
            h[c] = total_weight * q[c] * (1.0 - q[c]);
        }
        for (std::size_t t = 0; t < rp.size(); ++t) {
            const double w = rp.weight(t);
            if (w == 0.0) {
                continue;
            }
            const Partition& part = rp.partition(t);
            const Block& block = part.block(part.block_of(labels[l]));
            // Softmax restricted to the block, from the logits so small blocks stay accurate.
            double zmax = z[block.front()];
            for (std::size_t j : block) {
                zmax = std::max(zmax, z[j]);
            }
            double total = 0.0;
            for (std::size_t j : block) {
                within[j] = std::exp(z[j] - zmax);
                total += within[j];
            }
            for (std::size_t j : block) {
                double a = within[j] / total;
                g[j] -= w * a;
                h[j] -= w * a * (1.0 - a);
            }
        }
    }
    return out;
}

double coarsened_accuracy(const Matrix& probs, std::span<const std::size_t> labels, const Partition& p) {
    check_batch(probs, labels, p.num_classes(), "coarsened_accuracy");
    if (labels.empty()) {
        throw Error(Errc::DimensionMismatch, "coarsened_accuracy of an empty batch");
    }
    std::size_t hits = 0;
    for (std::size_t l = 0; l < labels.size(); ++l) {
        if (p.block_of(argmax(probs.row(l))) == p.block_of(labels[l])) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

}  // namespace strent
