#pragma once

#include <stdexcept>
#include <string>

namespace tpl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad shape, not a projection, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// T fails the Crimmins test TT*T = T^2.
class NotAProductError : public ValidationError {
 public:
  NotAProductError(const std::string& what, double residual)
      : ValidationError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A factorization did not converge or two independent routes disagree.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class RankDeficiencyError : public NumericalFailure {
 public:
  RankDeficiencyError(const std::string& what, double sigma_min)
      : NumericalFailure(what, sigma_min) {}
  double sigma_min() const noexcept { return residual(); }
};

/// A unitary has an eigenvalue on the branch cut of the principal logarithm.
class BranchCutError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace tpl
