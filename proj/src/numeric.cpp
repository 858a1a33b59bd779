#include "levysid/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "levysid/parallel.hpp"

namespace levysid {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw DataError("matrix storage does not match its shape");
  for (double v : data_) {
    if (!std::isfinite(v)) throw DataError("matrix entries must be finite");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
  DenseMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return std::sqrt(sum);
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product shape mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("matrix difference shape mismatch");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SymmetricEigen sym_eigen(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw DomainError("sym_eigen requires a square matrix");
  double scale = 0.0;
  for (double v : input.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > 1e-10 * scale) {
        throw DomainError("sym_eigen requires a symmetric matrix");
      }
    }
  }

  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));
  }
  DenseMatrix v = DenseMatrix::identity(n);

  auto off_diagonal = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sum += a(i, j) * a(i, j);
    }
    return std::sqrt(sum);
  };

  const double norm = a.frobenius_norm();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal() <= std::numeric_limits<double>::epsilon() * 1e-2 * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen result{DenseMatrix(n, n), std::vector<double>(n)};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    result.values[col] = a(src, src);
    double col_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) col_max = std::max(col_max, std::abs(v(k, src)));
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(v(k, src)) > 1e-12 * col_max) {
        sign = v(k, src) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t k = 0; k < n; ++k) result.vectors(k, col) = sign * v(k, src);
  }
  return result;
}

std::vector<double> singular_values(const DenseMatrix& input) {
  // One-sided Jacobi (Hestenes): orthogonalise columns, read off norms.
  DenseMatrix u = input;
  const std::size_t m = u.rows();
  const std::size_t n = u.cols();
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += u(k, p) * u(k, p);
          beta += u(k, q) * u(k, q);
          gamma += u(k, p) * u(k, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(zeta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double ukp = u(k, p);
          const double ukq = u(k, q);
          u(k, p) = c * ukp - s * ukq;
          u(k, q) = s * ukp + c * ukq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += u(k, j) * u(k, j);
    values[j] = std::sqrt(sum);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

bool cholesky(const DenseMatrix& a, DenseMatrix& lower) {
  const std::size_t n = a.rows();
  lower = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0.0)) return false;
    lower(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double sum = a(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= lower(i, k) * lower(j, k);
      lower(i, j) = sum / lower(j, j);
    }
  }
  return true;
}

std::string_view solve_method_name(SolveMethod method) {
  return method == SolveMethod::kQr ? "qr" : "normal-equations";
}

LeastSquaresAccumulator::LeastSquaresAccumulator(std::size_t unknowns, std::size_t rhs_count)
    : unknowns_(unknowns),
      rhs_count_(rhs_count),
      gram_(unknowns, unknowns),
      atb_(unknowns, rhs_count),
      triangle_(unknowns + rhs_count, unknowns + rhs_count) {
  if (unknowns == 0 || rhs_count == 0) throw DomainError("least squares needs K >= 1 and at least one right-hand side");
}

void LeastSquaresAccumulator::absorb_rows(std::span<const double> rows, std::size_t count) {
  // Householder triangularisation of [triangle_; rows].
  const std::size_t p = unknowns_ + rhs_count_;
  const std::size_t total = p + count;
  std::vector<double> w(total * p);
  std::copy(triangle_.data().begin(), triangle_.data().end(), w.begin());
  std::copy(rows.begin(), rows.end(), w.begin() + static_cast<std::ptrdiff_t>(p * p));
  auto at = [&](std::size_t r, std::size_t c) -> double& { return w[r * p + c]; };

  std::vector<double> v(total);
  for (std::size_t j = 0; j < p; ++j) {
    double norm2 = 0.0;
    for (std::size_t r = j; r < total; ++r) norm2 += at(r, j) * at(r, j);
    if (norm2 == 0.0) continue;
    const double norm = std::sqrt(norm2);
    const double x0 = at(j, j);
    const double alpha = x0 >= 0.0 ? -norm : norm;
    for (std::size_t r = j; r < total; ++r) v[r] = at(r, j);
    v[j] -= alpha;
    const double vnorm2 = norm2 - x0 * x0 + v[j] * v[j];
    at(j, j) = alpha;
    for (std::size_t r = j + 1; r < total; ++r) at(r, j) = 0.0;
    if (vnorm2 == 0.0) continue;
    for (std::size_t c = j + 1; c < p; ++c) {
      double dot = 0.0;
      for (std::size_t r = j; r < total; ++r) dot += v[r] * at(r, c);
      const double s = 2.0 * dot / vnorm2;
      for (std::size_t r = j; r < total; ++r) at(r, c) -= s * v[r];
    }
  }
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) triangle_(r, c) = c >= r ? at(r, c) : 0.0;
  }
}

void LeastSquaresAccumulator::add_block(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t k = unknowns_;
  const std::size_t q = rhs_count_;
  if (a.cols() != k || b.cols() != q || a.rows() != b.rows()) {
    throw DomainError("least-squares block shape mismatch");
  }
  const std::size_t count = a.rows();
  if (count == 0) return;

  for (std::size_t r = 0; r < count; ++r) {
    const auto ar = a.row(r);
    const auto br = b.row(r);
    for (std::size_t i = 0; i < k; ++i) {
      const double ai = ar[i];
      for (std::size_t j = i; j < k; ++j) gram_(i, j) += ai * ar[j];
      for (std::size_t j = 0; j < q; ++j) atb_(i, j) += ai * br[j];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) gram_(i, j) = gram_(j, i);
  }

  const std::size_t p = k + q;
  std::vector<double> augmented(count * p);
  for (std::size_t r = 0; r < count; ++r) {
    std::copy(a.row(r).begin(), a.row(r).end(), augmented.begin() + static_cast<std::ptrdiff_t>(r * p));
    std::copy(b.row(r).begin(), b.row(r).end(), augmented.begin() + static_cast<std::ptrdiff_t>(r * p + k));
  }
  absorb_rows(augmented, count);
  rows_ += count;
}

void LeastSquaresAccumulator::merge(const LeastSquaresAccumulator& other) {
  if (other.unknowns_ != unknowns_ || other.rhs_count_ != rhs_count_) {
    throw DomainError("cannot merge least-squares states of different shapes");
  }
  for (std::size_t i = 0; i < unknowns_; ++i) {
    for (std::size_t j = 0; j < unknowns_; ++j) gram_(i, j) += other.gram_(i, j);
    for (std::size_t j = 0; j < rhs_count_; ++j) atb_(i, j) += other.atb_(i, j);
  }
  absorb_rows(other.triangle_.data(), unknowns_ + rhs_count_);
  rows_ += other.rows_;
}

LeastSquaresResult LeastSquaresAccumulator::solve(double condition_limit,
                                                  Diagnostics* diagnostics) const {
  const std::size_t k = unknowns_;
  const std::size_t q = rhs_count_;
  if (rows_ < k) {
    throw InsufficientDataError("least squares needs at least " + std::to_string(k) +
                                " rows, got " + std::to_string(rows_));
  }

  DenseMatrix r(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) r(i, j) = triangle_(i, j);
  }
  const auto sv = singular_values(r);
  const double cond_a = sv.back() > 0.0 ? sv.front() / sv.back() : std::numeric_limits<double>::infinity();

  LeastSquaresResult result;
  result.coefficients = DenseMatrix(k, q);
  result.condition = cond_a * cond_a;
  result.residual_norms.resize(q);
  for (std::size_t j = 0; j < q; ++j) {
    double sum = 0.0;
    for (std::size_t i = k; i <= k + j; ++i) sum += triangle_(i, k + j) * triangle_(i, k + j);
    result.residual_norms[j] = std::sqrt(sum);
  }

  if (!(cond_a <= kRankDeficiencyLimit)) {
    std::ostringstream msg;
    msg << "design matrix is rank deficient (estimated condition number " << cond_a << ")";
    throw RankDeficientError(msg.str(), cond_a);
  }

  if (result.condition <= condition_limit) {
    DenseMatrix lower;
    if (cholesky(gram_, lower)) {
      for (std::size_t j = 0; j < q; ++j) {
        std::vector<double> y(k);
        for (std::size_t i = 0; i < k; ++i) {
          double sum = atb_(i, j);
          for (std::size_t m = 0; m < i; ++m) sum -= lower(i, m) * y[m];
          y[i] = sum / lower(i, i);
        }
        for (std::size_t i = k; i-- > 0;) {
          double sum = y[i];
          for (std::size_t m = i + 1; m < k; ++m) sum -= lower(m, i) * result.coefficients(m, j);
          result.coefficients(i, j) = sum / lower(i, i);
        }
      }
      result.method = SolveMethod::kNormalEquations;
      return result;
    }
    if (diagnostics) diagnostics->warn("Cholesky factorisation of the normal equations failed; solved by QR");
  } else if (diagnostics) {
    std::ostringstream msg;
    msg << "normal equations ill-conditioned (cond(AtA) ~ " << result.condition << "); solved by QR";
    diagnostics->warn(msg.str());
  }

  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = k; i-- > 0;) {
      double sum = triangle_(i, k + j);
      for (std::size_t m = i + 1; m < k; ++m) sum -= triangle_(i, m) * result.coefficients(m, j);
      result.coefficients(i, j) = sum / triangle_(i, i);
    }
  }
  result.method = SolveMethod::kQr;
  return result;
}

LeastSquaresAccumulator merge_pairwise(std::vector<LeastSquaresAccumulator> parts) {
  if (parts.empty()) throw DomainError("nothing to merge");
  while (parts.size() > 1) {
    std::vector<LeastSquaresAccumulator> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      parts[i].merge(parts[i + 1]);
      next.push_back(std::move(parts[i]));
    }
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

LeastSquaresResult solve_least_squares(const DenseMatrix& a, const DenseMatrix& b,
                                       Diagnostics* diagnostics) {
  if (a.rows() != b.rows()) throw DomainError("A and B must have the same number of rows");
  if (a.cols() == 0) throw DomainError("least squares needs at least one unknown");
  if (a.rows() < a.cols()) {
    throw InsufficientDataError("least squares needs at least as many rows as unknowns");
  }
  const std::size_t rows = a.rows();
  const std::size_t chunks = chunk_count(rows);
  std::vector<LeastSquaresAccumulator> parts(chunks, LeastSquaresAccumulator(a.cols(), b.cols()));
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kRowChunk;
    const std::size_t end = std::min(rows, begin + kRowChunk);
    DenseMatrix ablock(end - begin, a.cols());
    DenseMatrix bblock(end - begin, b.cols());
    for (std::size_t r = begin; r < end; ++r) {
      std::copy(a.row(r).begin(), a.row(r).end(), ablock.row(r - begin).begin());
      std::copy(b.row(r).begin(), b.row(r).end(), bblock.row(r - begin).begin());
    }
    parts[c].add_block(ablock, bblock);
  });
  return merge_pairwise(std::move(parts)).solve(kNormalEquationsConditionLimit, diagnostics);
}

std::vector<double> solve_least_squares(const DenseMatrix& a, std::span<const double> b,
                                        Diagnostics* diagnostics) {
  DenseMatrix rhs(b.size(), 1, std::vector<double>(b.begin(), b.end()));
  const auto result = solve_least_squares(a, rhs, diagnostics);
  std::vector<double> c(a.cols());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = result.coefficients(i, 0);
  return c;
}

}  // namespace levysid
