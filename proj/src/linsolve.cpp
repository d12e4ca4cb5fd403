#include "porostab/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

namespace porostab {

namespace {

// Nearest power of two (as an exact scale factor), 1 for empty rows.
double pow2_scale(double max_abs) {
  if (!(max_abs > 0.0)) return 1.0;
  return std::exp2(-std::ilogb(max_abs));
}

}  // namespace

struct FactorizedOperator::Impl {
  SparseMatrix original;
  Eigen::VectorXd row_scale;
  Eigen::VectorXd col_scale;
  Eigen::SparseLU<SparseMatrix> lu;
};

FactorizedOperator::FactorizedOperator(const SparseMatrix& M)
    : impl_(std::make_unique<Impl>()) {
  if (M.rows() != M.cols())
    throw SolverError("linsolve: operator must be square", 0.0);
  impl_->original = M;

  const int n = static_cast<int>(M.rows());
  Eigen::VectorXd row_max = Eigen::VectorXd::Zero(n);
  for (int col = 0; col < M.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(M, col); it; ++it)
      row_max[it.row()] = std::max(row_max[it.row()], std::abs(it.value()));
  impl_->row_scale.resize(n);
  for (int i = 0; i < n; ++i) impl_->row_scale[i] = pow2_scale(row_max[i]);

  Eigen::VectorXd col_max = Eigen::VectorXd::Zero(n);
  for (int col = 0; col < M.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(M, col); it; ++it)
      col_max[col] = std::max(col_max[col], std::abs(it.value()) * impl_->row_scale[it.row()]);
  impl_->col_scale.resize(n);
  for (int i = 0; i < n; ++i) impl_->col_scale[i] = pow2_scale(col_max[i]);

  SparseMatrix scaled = M;
  for (int col = 0; col < scaled.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(scaled, col); it; ++it)
      it.valueRef() *= impl_->row_scale[it.row()] * impl_->col_scale[col];

  impl_->lu.compute(scaled);
  if (impl_->lu.info() != Eigen::Success)
    throw SolverError("linsolve: sparse LU factorization failed (singular operator?)",
                      std::numeric_limits<double>::quiet_NaN());
}

FactorizedOperator::~FactorizedOperator() = default;
FactorizedOperator::FactorizedOperator(FactorizedOperator&&) noexcept = default;
FactorizedOperator& FactorizedOperator::operator=(FactorizedOperator&&) noexcept = default;

Eigen::VectorXd FactorizedOperator::solve(const Eigen::VectorXd& rhs, double tol) const {
  const auto& M = impl_->original;
  if (rhs.size() != M.rows())
    throw SolverError("linsolve: rhs dimension mismatch", 0.0);

  auto scaled_solve = [this](const Eigen::VectorXd& b) -> Eigen::VectorXd {
    Eigen::VectorXd bs = impl_->row_scale.cwiseProduct(b);
    Eigen::VectorXd ys = impl_->lu.solve(bs);
    return impl_->col_scale.cwiseProduct(ys);
  };

  Eigen::VectorXd x = scaled_solve(rhs);
  const double rhs_norm = rhs.norm();
  double res = (rhs - M * x).norm();
  const double target = tol * std::max(rhs_norm, 1e-300);

  for (int pass = 0; pass < 3 && res > target; ++pass) {
    Eigen::VectorXd r = rhs - M * x;
    x += scaled_solve(r);
    res = (rhs - M * x).norm();
  }

  if (!x.allFinite())
    throw SolverError("linsolve: non-finite solution", std::numeric_limits<double>::quiet_NaN());
  if (rhs_norm > 0.0 && res > target)
    throw SolverError("linsolve: residual " + std::to_string(res / rhs_norm) +
                          " exceeds tolerance " + std::to_string(tol),
                      res / rhs_norm);
  return x;
}

Eigen::VectorXd solve(const SparseMatrix& M, const Eigen::VectorXd& rhs, double tol) {
  FactorizedOperator fac(M);
  return fac.solve(rhs, tol);
}

}  // namespace porostab
