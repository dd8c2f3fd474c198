#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cmkz {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: bad partitions, coincident positions, wrong sizes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not certify its result (rank failure,
/// ill-conditioned probe, non-commuting family, repeated roots).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A point (z, p) of T*(C^n - diagonals), usually produced as a joint
/// eigenvalue tuple of a commuting family.
struct SpectralPoint {
  std::vector<cplx> z;
  std::vector<cplx> p;
  double residual = 0.0;
};

/// Infinity norm of a complex vector.
double max_abs(const std::vector<cplx>& v);

/// Minimum pairwise distance; +inf for fewer than two entries.
double min_pairwise_distance(const std::vector<cplx>& v);

/// Lexicographic order on (re, im).
bool lex_less(cplx a, cplx b);

}  // namespace cmkz
