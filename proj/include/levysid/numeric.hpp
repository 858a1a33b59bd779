#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "levysid/errors.hpp"

namespace levysid {

/// Dense row-major matrix of finite doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of `data` (size rows·cols); throws DataError on a size
  /// mismatch or a non-finite entry.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const noexcept { return data_; }

  DenseMatrix transpose() const;
  double frobenius_norm() const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Sum of `values` by recursive halving; the grouping depends only on the
/// length, so results are bit-stable.
double pairwise_sum(std::span<const double> values);

/// Symmetric eigendecomposition a = Q diag(λ) Qᵀ by cyclic Jacobi rotations.
/// Eigenvalues are sorted descending (ties keep their original order) and
/// each eigenvector's first entry that is nonzero (above 1e-12 of the
/// column max) is made positive.
struct SymmetricEigen {
  DenseMatrix vectors;         // columns are eigenvectors
  std::vector<double> values;  // descending
};

/// Throws DomainError if `a` is not square or not symmetric to 1e-10
/// relative to its largest entry.
SymmetricEigen sym_eigen(const DenseMatrix& a);

/// Singular values of a square matrix (one-sided Jacobi), descending.
std::vector<double> singular_values(const DenseMatrix& a);

/// Cholesky factor L of an SPD matrix (a = LLᵀ); returns false on a
/// non-positive pivot.
bool cholesky(const DenseMatrix& a, DenseMatrix& lower);

enum class SolveMethod { kNormalEquations, kQr };

std::string_view solve_method_name(SolveMethod method);

struct LeastSquaresResult {
  DenseMatrix coefficients;           // K × nrhs
  std::vector<double> residual_norms;  // ‖A c_j − b_j‖₂ per right-hand side
  double condition = 0.0;              // estimated cond₂(AᵀA)
  SolveMethod method = SolveMethod::kNormalEquations;
};

/// Condition number of AᵀA above which the normal equations are abandoned
/// for the QR route.
inline constexpr double kNormalEquationsConditionLimit = 1e10;
/// cond₂(A) beyond which no stable solution is reported.
inline constexpr double kRankDeficiencyLimit = 1e12;

/// Streaming least-squares state for min ‖A c − B‖ over row blocks.
///
/// Keeps AᵀA and AᵀB for the normal-equations route and the triangular
/// factor of the augmented matrix [A | B] (updated by Householder
/// reflections) for the QR route and the residual norms. Rows never need to
/// be held all at once; results depend only on the order of add/merge calls.
class LeastSquaresAccumulator {
 public:
  LeastSquaresAccumulator(std::size_t unknowns, std::size_t rhs_count);

  std::size_t unknowns() const noexcept { return unknowns_; }
  std::size_t rhs_count() const noexcept { return rhs_count_; }
  std::size_t rows() const noexcept { return rows_; }

  /// Appends rows: `a` is rows×K, `b` is rows×nrhs.
  void add_block(const DenseMatrix& a, const DenseMatrix& b);
  void merge(const LeastSquaresAccumulator& other);

  const DenseMatrix& gram() const noexcept { return gram_; }
  const DenseMatrix& rhs_projection() const noexcept { return atb_; }

  /// Solves (AᵀA)c = AᵀB by Cholesky when cond(AᵀA) ≤ `condition_limit`,
  /// otherwise (with a warning into `diagnostics`) by back substitution on
  /// the QR factor. Throws InsufficientDataError when rows < K and
  /// RankDeficientError when cond(A) exceeds kRankDeficiencyLimit.
  LeastSquaresResult solve(double condition_limit = kNormalEquationsConditionLimit,
                           Diagnostics* diagnostics = nullptr) const;

 private:
  void absorb_rows(std::span<const double> rows, std::size_t count);

  std::size_t unknowns_;
  std::size_t rhs_count_;
  std::size_t rows_ = 0;
  DenseMatrix gram_;
  DenseMatrix atb_;
  DenseMatrix triangle_;  // (K+nrhs)² upper-triangular factor of [A | B]
};

/// Merges accumulators by a balanced binary tree in index order.
LeastSquaresAccumulator merge_pairwise(std::vector<LeastSquaresAccumulator> parts);

/// min ‖A c − b‖₂ for a single right-hand side.
std::vector<double> solve_least_squares(const DenseMatrix& a, std::span<const double> b,
                                        Diagnostics* diagnostics = nullptr);

/// Multi right-hand-side form; rows are processed in fixed-size chunks.
LeastSquaresResult solve_least_squares(const DenseMatrix& a, const DenseMatrix& b,
                                       Diagnostics* diagnostics = nullptr);

}  // namespace levysid
