#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phiproj {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument fell outside the open domain of a function (for example
/// phi'(x) requested at x <= a_phi). Distinct from a numeric failure.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Extended-real arithmetic produced an indeterminate form such as inf - inf.
class IndeterminateForm : public Error {
 public:
  using Error::Error;
};

class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The functions {1, g_1, ..., g_l} are linearly dependent on supp P.
/// `kernel()` holds a nonzero lambda with lambda^T g(x_j) ~ 0 on every atom.
class RankDeficient : public Error {
 public:
  RankDeficient(std::string what, std::vector<double> kernel)
      : Error(std::move(what)), kernel_(std::move(kernel)) {}
  const std::vector<double>& kernel() const noexcept { return kernel_; }

 private:
  std::vector<double> kernel_;
};

/// The linear system "mass one, zero moments" has no solution at all.
class InfeasibleAffineSystem : public Error {
 public:
  using Error::Error;
};

/// A candidate measure violates the moment constraints beyond tolerance.
class InfeasibleCandidate : public Error {
 public:
  using Error::Error;
};

/// Primal recovery was requested from a dual solve that did not converge.
class NotConverged : public Error {
 public:
  using Error::Error;
};

class InvalidOptions : public Error {
 public:
  using Error::Error;
};

}  // namespace phiproj
