#include <random>

#include <Eigen/Dense>

#include "core/sparse.hpp"
#include "doctest.h"

using namespace pmflow;

namespace {

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& m) {
  std::vector<Triplet> trips;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0.0) trips.push_back({r, c, m(r, c)});
  return from_triplets(static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                       std::move(trips));
}

} // namespace

TEST_CASE("lu_solve: identity and diagonal") {
  const SparseMatrix eye = from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
  const auto x = lu_solve(eye, {3.0, -1.0, 2.5});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == doctest::Approx(3.0));
  CHECK((*x)[1] == doctest::Approx(-1.0));
  CHECK((*x)[2] == doctest::Approx(2.5));

  const SparseMatrix diag = from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, 4.0}});
  const auto y = lu_solve(diag, {2.0, 8.0});
  REQUIRE(y.has_value());
  CHECK((*y)[0] == doctest::Approx(1.0));
  CHECK((*y)[1] == doctest::Approx(2.0));
}

TEST_CASE("lu_solve: residual contract on random well-conditioned systems") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 50;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r) {
      a(r, r) = 10.0 + std::abs(dist(rng));
      for (int k = 0; k < 4; ++k) a(r, rng() % n) += dist(rng);
    }
    std::vector<double> b(n);
    for (double& v : b) v = dist(rng);

    const SparseMatrix sp = dense_to_sparse(a);
    const auto x = lu_solve(sp, b);
    REQUIRE(x.has_value());

    std::vector<double> ax;
    matvec(sp, *x, ax);
    double rnorm = 0.0, bnorm = 0.0;
    for (int r = 0; r < n; ++r) {
      rnorm += (ax[r] - b[r]) * (ax[r] - b[r]);
      bnorm += b[r] * b[r];
    }
    CHECK(std::sqrt(rnorm) / std::max(std::sqrt(bnorm), 1e-300) <= 1e-11);
  }
}

TEST_CASE("lu_solve: singular matrices are reported") {
  // structurally singular (empty row)
  const SparseMatrix empty_row = from_triplets(2, 2, {{0, 0, 1.0}});
  CHECK(!lu_solve(empty_row, {1.0, 1.0}).has_value());

  // numerically singular (rank deficient)
  const SparseMatrix rank1 =
      from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  CHECK(!lu_solve(rank1, {1.0, 2.0}).has_value());
}

TEST_CASE("block_assemble: zero and identity blocks") {
  const SparseMatrix zero = from_triplets(2, 2, {{0, 0, 0.0}, {1, 1, 0.0}});
  const SparseMatrix eye = from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});

  const SparseMatrix z4 = block_assemble({&zero, &zero, &zero, &zero});
  for (double v : z4.values) CHECK(v == 0.0);

  const SparseMatrix i4 = block_assemble({&eye, &zero, &zero, &eye});
  std::vector<double> x = {1.0, 2.0, 3.0, 4.0}, y;
  matvec(i4, x, y);
  for (int i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(x[i]));
}

TEST_CASE("block_assemble: matvec equals blockwise computation") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const int m = 3;
  Eigen::MatrixXd app(m, m), aps(m, m), asp(m, m), ass(m, m);
  for (auto* blk : {&app, &aps, &asp, &ass})
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) (*blk)(r, c) = dist(rng);

  const SparseMatrix sapp = dense_to_sparse(app), saps = dense_to_sparse(aps);
  const SparseMatrix sasp = dense_to_sparse(asp), sass = dense_to_sparse(ass);
  const SparseMatrix big = block_assemble({&sapp, &saps, &sasp, &sass});

  Eigen::VectorXd v(2 * m);
  for (int i = 0; i < 2 * m; ++i) v[i] = dist(rng);
  Eigen::MatrixXd dense(2 * m, 2 * m);
  dense << app, aps, asp, ass;
  const Eigen::VectorXd expect = dense * v;

  std::vector<double> xv(v.data(), v.data() + 2 * m), y;
  matvec(big, xv, y);
  for (int i = 0; i < 2 * m; ++i)
    CHECK(std::abs(y[i] - expect[i]) <=
          1e-14 * std::max(1.0, std::abs(expect[i])));
}

TEST_CASE("lower_block_matvec") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const int m = 4;
  Eigen::MatrixXd app(m, m), asp(m, m), ass(m, m);
  for (auto* blk : {&app, &asp, &ass})
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) (*blk)(r, c) = dist(rng);
  const SparseMatrix sapp = dense_to_sparse(app);
  const SparseMatrix sasp = dense_to_sparse(asp);
  const SparseMatrix sass = dense_to_sparse(ass);

  SUBCASE("zero vector maps to zero") {
    std::vector<double> v1(m, 0.0), v2(m, 0.0), o1, o2;
    lower_block_matvec(sapp, sasp, sass, v1, v2, o1, o2);
    for (int i = 0; i < m; ++i) {
      CHECK(o1[i] == 0.0);
      CHECK(o2[i] == 0.0);
    }
  }

  SUBCASE("matches the dense lower-triangular product") {
    Eigen::VectorXd v1(m), v2(m);
    for (int i = 0; i < m; ++i) {
      v1[i] = dist(rng);
      v2[i] = dist(rng);
    }
    const Eigen::VectorXd e1 = app * v1;
    const Eigen::VectorXd e2 = asp * v1 + ass * v2;
    std::vector<double> x1(v1.data(), v1.data() + m), x2(v2.data(), v2.data() + m);
    std::vector<double> o1, o2;
    lower_block_matvec(sapp, sasp, sass, x1, x2, o1, o2);
    for (int i = 0; i < m; ++i) {
      CHECK(o1[i] == doctest::Approx(e1[i]).epsilon(1e-13));
      CHECK(o2[i] == doctest::Approx(e2[i]).epsilon(1e-13));
    }
  }
}
