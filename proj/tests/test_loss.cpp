#include <doctest.h>

#include <cmath>

#include "strent/error.hpp"
#include "strent/loss.hpp"
#include "test_util.hpp"

using namespace strent;
using doctest::Approx;

namespace {

RandomPartition running_example(double q1) {
    return RandomPartition({singleton_partition(3), validate_partition({{0, 1}, {2}}, 3)}, {q1, 1.0 - q1});
}

}  // namespace

TEST_CASE("softmax") {
    Matrix z = Matrix::from_rows({{0, 0, 0}, {1000, 0, 0}, {std::log(1.0), std::log(2.0), std::log(3.0)}});
    Matrix q = softmax(z);
    for (std::size_t c = 0; c < 3; ++c) CHECK(q(0, c) == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(q(1, 0) == Approx(1.0));
    CHECK(q(1, 1) >= 0.0);
    CHECK(std::isfinite(q(1, 1)));
    CHECK(q(2, 0) == Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(q(2, 1) == Approx(2.0 / 6.0).epsilon(1e-14));
    CHECK(q(2, 2) == Approx(3.0 / 6.0).epsilon(1e-14));

    Matrix bad(1, 2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(softmax(bad), Error);
}

TEST_CASE("log_loss") {
    Matrix near_perfect = Matrix::from_rows({{1 - 1e-12, 1e-12}, {1e-12, 1 - 1e-12}});
    std::vector<std::size_t> y{0, 1};
    CHECK(log_loss(near_perfect, y) < 1e-11);

    Matrix uniform(5, 4, 0.25);
    CHECK(log_loss(uniform, std::vector<std::size_t>{0, 1, 2, 3, 3}) == Approx(std::log(4.0)).epsilon(1e-15));

    Matrix two = Matrix::from_rows({{0.7, 0.2, 0.1}, {0.1, 0.1, 0.8}});
    CHECK(log_loss(two, std::vector<std::size_t>{0, 2}) == Approx(0.2899092476264711).epsilon(1e-15));

    Matrix zero = Matrix::from_rows({{1.0, 0.0}});
    CHECK(log_loss(zero, std::vector<std::size_t>{1}) == Approx(-std::log(1e-15)));

    CHECK_THROWS_AS(log_loss(two, std::vector<std::size_t>{0}), Error);
}

TEST_CASE("structured_log_loss examples") {
    Matrix q = Matrix::from_rows({{0.2, 0.3, 0.5}});
    CHECK(structured_log_loss(q, std::vector<std::size_t>{0}, running_example(0.5)) ==
          Approx(1.1512925464970227).epsilon(1e-15));

    RandomPartition lump({one_block_partition(3)}, {1.0});
    CHECK(structured_log_loss(q, std::vector<std::size_t>{2}, lump) == 0.0);

    CHECK_THROWS_AS(structured_log_loss(q, std::vector<std::size_t>{0}, trivial_random_partition(4)), Error);
}

TEST_CASE("trivial structure reproduces log_loss bitwise") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + rng.uniform_index(40), k = 2 + rng.uniform_index(6);
        Matrix probs = softmax(testing::random_logits(rng, n, k, 8.0));
        auto labels = testing::random_labels(rng, n, k);
        CHECK(structured_log_loss(probs, labels, trivial_random_partition(k)) == log_loss(probs, labels));
    }
}

TEST_CASE("structured loss is the weighted average of coarsened log-losses") {
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + rng.uniform_index(10), k = 2 + rng.uniform_index(5);
        Matrix probs = softmax(testing::random_logits(rng, n, k));
        auto labels = testing::random_labels(rng, n, k);
        RandomPartition rp = testing::random_random_partition(rng, k);
        double expected = 0.0;
        for (std::size_t t = 0; t < rp.size(); ++t) {
            const Partition& p = rp.partition(t);
            Matrix coarse(n, p.num_blocks());
            std::vector<std::size_t> coarse_labels(n);
            for (std::size_t l = 0; l < n; ++l) {
                for (std::size_t j = 0; j < k; ++j) coarse(l, p.block_of(j)) += probs(l, j);
                coarse_labels[l] = p.block_of(labels[l]);
            }
            expected += rp.weight(t) * log_loss(coarse, coarse_labels);
        }
        CHECK(std::abs(structured_log_loss(probs, labels, rp) - expected) <= 1e-12);
    }
}

TEST_CASE("permutation equivariance") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng.uniform_index(8), k = 2 + rng.uniform_index(5);
        Matrix probs = softmax(testing::random_logits(rng, n, k));
        auto labels = testing::random_labels(rng, n, k);
        RandomPartition rp = testing::random_random_partition(rng, k);

        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t j = k; j > 1; --j) std::swap(perm[j - 1], perm[rng.uniform_index(j)]);

        Matrix pp(n, k);
        std::vector<std::size_t> pl(n);
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t j = 0; j < k; ++j) pp(l, perm[j]) = probs(l, j);
            pl[l] = perm[labels[l]];
        }
        std::vector<Partition> parts;
        for (const auto& p : rp.partitions()) {
            std::vector<Block> blocks;
            for (const auto& b : p.blocks()) {
                Block nb;
                for (std::size_t j : b) nb.push_back(perm[j]);
                blocks.push_back(nb);
            }
            parts.push_back(validate_partition(blocks, k));
        }
        RandomPartition prp(parts, rp.weights());
        CHECK(std::abs(structured_log_loss(probs, labels, rp) - structured_log_loss(pp, pl, prp)) <= 1e-12);
        CHECK(std::abs(log_loss(probs, labels) - log_loss(pp, pl)) <= 1e-12);
    }
}

TEST_CASE("structured_grad_hess closed forms and finite differences") {
    SUBCASE("trivial structure gives q - onehot") {
        Rng rng(10);
        Matrix z = testing::random_logits(rng, 6, 4);
        auto y = testing::random_labels(rng, 6, 4);
        GradHess gh = structured_grad_hess(z, y, trivial_random_partition(4));
        Matrix q = softmax(z);
        for (std::size_t l = 0; l < 6; ++l) {
            for (std::size_t c = 0; c < 4; ++c) {
                CHECK(gh.grad(l, c) == Approx(q(l, c) - (c == y[l] ? 1.0 : 0.0)).epsilon(1e-14));
                CHECK(gh.hess_diag(l, c) == Approx(q(l, c) * (1 - q(l, c))).epsilon(1e-14));
                CHECK(gh.hess_diag(l, c) >= -1e-8);
            }
        }
    }
    SUBCASE("random instances against central differences") {
        Rng rng(12);
        for (int i = 0; i < 100; ++i) {
            const std::size_t n = 1 + rng.uniform_index(8), k = 2 + rng.uniform_index(5);
            Matrix z = testing::random_logits(rng, n, k);
            auto y = testing::random_labels(rng, n, k);
            RandomPartition rp = testing::random_random_partition(rng, k);
            GradHess gh = structured_grad_hess(z, y, rp);
            auto fd = testing::finite_difference_check(z, y, rp, gh.grad, gh.hess_diag);
            CHECK(fd.max_grad_error < 1e-6);
            CHECK(fd.max_hess_error < 1e-4);
            for (std::size_t l = 0; l < n; ++l) {
                double s = 0.0;
                for (double g : gh.grad.row(l)) s += g;
                CHECK(std::abs(s) <= 1e-8);
            }
        }
    }
    SUBCASE("the exact diagonal can be negative under a coarse block") {
        Matrix z(1, 3);
        GradHess gh = structured_grad_hess(z, std::vector<std::size_t>{0},
                                           RandomPartition({validate_partition({{0, 1}, {2}}, 3)}, {1.0}));
        // q = 1/3, in-block share 1/2: 2/9 - 1/4
        CHECK(gh.hess_diag(0, 0) == Approx(2.0 / 9.0 - 0.25).epsilon(1e-14));
    }
    SUBCASE("errors") {
        Matrix z(1, 3);
        z(0, 0) = std::nan("");
        CHECK_THROWS_AS(structured_grad_hess(z, std::vector<std::size_t>{0}, trivial_random_partition(3)), Error);
        CHECK_THROWS_AS(structured_grad_hess(Matrix(1, 3), std::vector<std::size_t>{5}, trivial_random_partition(3)),
                        Error);
    }
}

TEST_CASE("coarsened_accuracy") {
    Matrix q = Matrix::from_rows({{0.4, 0.35, 0.25}});
    std::vector<std::size_t> y{1};
    CHECK(coarsened_accuracy(q, y, singleton_partition(3)) == 0.0);
    CHECK(coarsened_accuracy(q, y, validate_partition({{0, 1}, {2}}, 3)) == 1.0);
    CHECK(coarsened_accuracy(q, y, one_block_partition(3)) == 1.0);

    Rng rng(14);
    Matrix probs = softmax(testing::random_logits(rng, 50, 5));
    auto labels = testing::random_labels(rng, 50, 5);
    std::size_t hits = 0;
    for (std::size_t l = 0; l < 50; ++l) {
        hits += argmax(probs.row(l)) == labels[l];
    }
    CHECK(coarsened_accuracy(probs, labels, singleton_partition(5)) == Approx(hits / 50.0));
    CHECK(coarsened_accuracy(probs, labels, one_block_partition(5)) == 1.0);
}
