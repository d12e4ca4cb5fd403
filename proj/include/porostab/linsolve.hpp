#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "porostab/assembly.hpp"

namespace porostab {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

/// Sparse LU factorization of a square operator, reusable across right-hand
/// sides. Rows and columns are equilibrated with powers of two before
/// factoring (the block systems mix force- and volume-scaled rows), and each
/// solve applies iterative refinement until the residual of the original
/// system meets the tolerance.
class FactorizedOperator {
 public:
  explicit FactorizedOperator(const SparseMatrix& M);
  ~FactorizedOperator();
  FactorizedOperator(FactorizedOperator&&) noexcept;
  FactorizedOperator& operator=(FactorizedOperator&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, double tol = 1e-10) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot solve with relative residual ||b - M x|| <= tol ||b||.
Eigen::VectorXd solve(const SparseMatrix& M, const Eigen::VectorXd& rhs,
                      double tol = 1e-10);

}  // namespace porostab
