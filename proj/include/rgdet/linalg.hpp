#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace rgdet {

using Complex = std::complex<double>;
using DenseComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using WideComplex = std::complex<long double>;
using WideMatrix = Eigen::Matrix<WideComplex, Eigen::Dynamic, Eigen::Dynamic>;

// Determinant split as phase * exp(log_magnitude); a singular matrix has
// phase 0 and log_magnitude -inf.
struct LogDet {
  Complex phase{1.0, 0.0};
  double log_magnitude = 0.0;

  Complex value() const;
  bool singular() const { return phase == Complex{0.0, 0.0}; }
};

// Running product kept in log-magnitude + phase form so that long products of
// small or large factors neither overflow nor underflow.
class ScaledProduct {
 public:
  void multiply(Complex factor);
  void divide(Complex factor);
  void multiply(const LogDet& det);
  void multiply(const ScaledProduct& other);

  Complex phase() const { return phase_; }
  double log_magnitude() const { return log_magnitude_; }
  bool is_zero() const { return zero_; }
  Complex value() const;

 private:
  Complex phase_{1.0, 0.0};
  double log_magnitude_ = 0.0;
  bool zero_ = false;
};

struct Factorized {
  LogDet det;
  // Reciprocal condition estimate of the pivoted LU (1-norm); 0 when singular.
  double rcond = 1.0;
};

// Determinant through partial-pivoted LU. The 0x0 determinant is 1.
Complex det_lu(const DenseComplexMatrix& m);
LogDet log_det_lu(const DenseComplexMatrix& m);
Factorized factorize(const DenseComplexMatrix& m);
// Extended-precision LU for ill-conditioned inputs.
LogDet log_det_wide(const WideMatrix& m);

double max_abs(const DenseComplexMatrix& m);

// |a - b| / max(|a|, |b|, floor); the comparison used by every cross-check.
double relative_deviation(Complex a, Complex b, double floor = 1e-300);

}  // namespace rgdet
