#pragma once

#include <optional>
#include <vector>

namespace pmflow {

/// Compressed-row sparse matrix with sorted, unique column indices per row.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets; // size rows + 1
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_indices.size()); }
  void set_zero() { std::fill(values.begin(), values.end(), 0.0); }

  /// Slot of entry (row, col) in `values`, or -1 if not in the pattern.
  int find(int row, int col) const;
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Builds a CSR matrix from (row, col, value) triplets; duplicates are summed.
SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

/// y = A x
void matvec(const SparseMatrix& a, const std::vector<double>& x, std::vector<double>& y);

/// Named Jacobian blocks of the field-split system: rows (g, h), columns
/// (p, s). All four blocks are M x M with identical dimensions.
struct BlockSystem {
  const SparseMatrix* app = nullptr; // d g / d p
  const SparseMatrix* aps = nullptr; // d g / d s
  const SparseMatrix* asp = nullptr; // d h / d p
  const SparseMatrix* ass = nullptr; // d h / d s
};

/// Assembles the four blocks into one 2M x 2M matrix in segregated unknown
/// ordering (all pressures, then all saturations).
SparseMatrix block_assemble(const BlockSystem& blocks);

/// Applies the lower block-triangular factor L = [[App, 0], [Asp, Ass]]:
/// out1 = App v1, out2 = Asp v1 + Ass v2.
void lower_block_matvec(const SparseMatrix& app, const SparseMatrix& asp,
                        const SparseMatrix& ass, const std::vector<double>& v1,
                        const std::vector<double>& v2, std::vector<double>& out1,
                        std::vector<double>& out2);

/// Sparse direct LU solve (fill-reducing ordering, partial pivoting). Returns
/// nullopt on a structurally or numerically singular matrix, or when the
/// computed solution fails a residual sanity check.
std::optional<std::vector<double>> lu_solve(const SparseMatrix& a,
                                            const std::vector<double>& b);

} // namespace pmflow
