#include "core/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace pmflow {

int SparseMatrix::find(int row, int col) const {
  const int begin = row_offsets[row];
  const int end = row_offsets[row + 1];
  const auto it = std::lower_bound(col_indices.begin() + begin,
                                   col_indices.begin() + end, col);
  if (it == col_indices.begin() + end || *it != col) return -1;
  return static_cast<int>(it - col_indices.begin());
}

SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.assign(rows + 1, 0);
  for (size_t i = 0; i < triplets.size();) {
    size_t j = i;
    double sum = 0.0;
    while (j < triplets.size() && triplets[j].row == triplets[i].row &&
           triplets[j].col == triplets[i].col)
      sum += triplets[j++].value;
    m.col_indices.push_back(triplets[i].col);
    m.values.push_back(sum);
    ++m.row_offsets[triplets[i].row + 1];
    i = j;
  }
  for (int r = 0; r < rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  return m;
}

void matvec(const SparseMatrix& a, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(a.rows, 0.0);
  for (int r = 0; r < a.rows; ++r) {
    double sum = 0.0;
    for (int s = a.row_offsets[r]; s < a.row_offsets[r + 1]; ++s)
      sum += a.values[s] * x[a.col_indices[s]];
    y[r] = sum;
  }
}

SparseMatrix block_assemble(const BlockSystem& blocks) {
  const SparseMatrix& app = *blocks.app;
  const SparseMatrix& aps = *blocks.aps;
  const SparseMatrix& asp = *blocks.asp;
  const SparseMatrix& ass = *blocks.ass;
  const int m = app.rows;
  if (app.cols != m || aps.rows != m || aps.cols != m || asp.rows != m ||
      asp.cols != m || ass.rows != m || ass.cols != m)
    throw std::invalid_argument("block_assemble: blocks must be conforming M x M");

  SparseMatrix out;
  out.rows = out.cols = 2 * m;
  out.row_offsets.resize(2 * m + 1);
  out.row_offsets[0] = 0;
  const int nnz = app.nnz() + aps.nnz() + asp.nnz() + ass.nnz();
  out.col_indices.reserve(nnz);
  out.values.reserve(nnz);

  auto append_row = [&](const SparseMatrix& left, const SparseMatrix& right,
                        int r, int out_row) {
    for (int s = left.row_offsets[r]; s < left.row_offsets[r + 1]; ++s) {
      out.col_indices.push_back(left.col_indices[s]);
      out.values.push_back(left.values[s]);
    }
    for (int s = right.row_offsets[r]; s < right.row_offsets[r + 1]; ++s) {
      out.col_indices.push_back(right.col_indices[s] + m);
      out.values.push_back(right.values[s]);
    }
    out.row_offsets[out_row + 1] = static_cast<int>(out.col_indices.size());
  };
  for (int r = 0; r < m; ++r) append_row(app, aps, r, r);
  for (int r = 0; r < m; ++r) append_row(asp, ass, r, m + r);
  return out;
}

void lower_block_matvec(const SparseMatrix& app, const SparseMatrix& asp,
                        const SparseMatrix& ass, const std::vector<double>& v1,
                        const std::vector<double>& v2, std::vector<double>& out1,
                        std::vector<double>& out2) {
  matvec(app, v1, out1);
  matvec(asp, v1, out2);
  std::vector<double> tmp;
  matvec(ass, v2, tmp);
  for (size_t i = 0; i < out2.size(); ++i) out2[i] += tmp[i];
}

std::optional<std::vector<double>> lu_solve(const SparseMatrix& a,
                                            const std::vector<double>& b) {
  if (a.rows != a.cols || static_cast<int>(b.size()) != a.rows)
    throw std::invalid_argument("lu_solve: matrix must be square and match b");

  // Row equilibration: the assembled systems mix pressure- and
  // saturation-scaled rows, and balancing them keeps the pivot test and the
  // residual check meaningful.
  std::vector<double> row_scale(a.rows, 1.0);
  for (int r = 0; r < a.rows; ++r) {
    double mx = 0.0;
    for (int s = a.row_offsets[r]; s < a.row_offsets[r + 1]; ++s)
      mx = std::max(mx, std::abs(a.values[s]));
    if (mx == 0.0) return std::nullopt; // structurally singular row
    row_scale[r] = 1.0 / mx;
  }

  Eigen::SparseMatrix<double> csc(a.rows, a.cols);
  csc.reserve(a.nnz());
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(a.nnz());
    for (int r = 0; r < a.rows; ++r)
      for (int s = a.row_offsets[r]; s < a.row_offsets[r + 1]; ++s)
        trips.emplace_back(r, a.col_indices[s], a.values[s] * row_scale[r]);
    csc.setFromTriplets(trips.begin(), trips.end());
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(csc);
  if (lu.info() != Eigen::Success) return std::nullopt;

  Eigen::VectorXd rhs(a.rows);
  for (int r = 0; r < a.rows; ++r) rhs[r] = b[r] * row_scale[r];
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) return std::nullopt;

  // Residual sanity check guards against a numerically singular factorization
  // that slipped past the pivot test.
  const double scale = std::max(rhs.norm(), 1e-300);
  if (!((csc * x - rhs).norm() / scale < 1e-8)) return std::nullopt;

  return std::vector<double>(x.data(), x.data() + x.size());
}

} // namespace pmflow
