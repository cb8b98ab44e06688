#include "rgdet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rgdet {

Complex LogDet::value() const {
  if (singular()) return {0.0, 0.0};
  return phase * std::exp(log_magnitude);
}

void ScaledProduct::multiply(Complex factor) {
  const double mag = std::abs(factor);
  if (mag == 0.0) {
    zero_ = true;
    return;
  }
  phase_ *= factor / mag;
  log_magnitude_ += std::log(mag);
}

void ScaledProduct::divide(Complex factor) {
  const double mag = std::abs(factor);
  if (mag == 0.0) {
    log_magnitude_ = std::numeric_limits<double>::infinity();
    return;
  }
  phase_ *= std::conj(factor) / mag;
  log_magnitude_ -= std::log(mag);
}

void ScaledProduct::multiply(const LogDet& det) {
  if (det.singular()) {
    zero_ = true;
    return;
  }
  phase_ *= det.phase;
  log_magnitude_ += det.log_magnitude;
}

void ScaledProduct::multiply(const ScaledProduct& other) {
  zero_ = zero_ || other.zero_;
  phase_ *= other.phase_;
  log_magnitude_ += other.log_magnitude_;
}

Complex ScaledProduct::value() const {
  if (zero_) return {0.0, 0.0};
  return phase_ * std::exp(log_magnitude_);
}

namespace {

double one_norm(const DenseComplexMatrix& m) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) best = std::max(best, m.col(c).cwiseAbs().sum());
  return best;
}

}  // namespace

Factorized factorize(const DenseComplexMatrix& m) {
  Factorized out;
  if (m.rows() == 0) return out;
  Eigen::PartialPivLU<DenseComplexMatrix> lu(m);
  const auto& packed = lu.matrixLU();
  Complex phase{static_cast<double>(lu.permutationP().determinant()), 0.0};
  double log_mag = 0.0;
  for (Eigen::Index k = 0; k < packed.rows(); ++k) {
    const Complex pivot = packed(k, k);
    const double mag = std::abs(pivot);
    if (mag == 0.0 || !std::isfinite(mag)) {
      out.det = LogDet{{0.0, 0.0}, -std::numeric_limits<double>::infinity()};
      out.rcond = 0.0;
      return out;
    }
    phase *= pivot / mag;
    log_mag += std::log(mag);
  }
  out.det = LogDet{phase, log_mag};
  // Explicit inverse is affordable at the sizes used here (n <= ~20).
  const double norm = one_norm(m);
  const double inv_norm = one_norm(lu.inverse());
  out.rcond = (norm > 0.0 && inv_norm > 0.0) ? 1.0 / (norm * inv_norm) : 0.0;
  return out;
}

LogDet log_det_lu(const DenseComplexMatrix& m) { return factorize(m).det; }

LogDet log_det_wide(const WideMatrix& m) {
  if (m.rows() == 0) return {};
  const Eigen::PartialPivLU<WideMatrix> lu(m);
  WideComplex phase = static_cast<long double>(lu.permutationP().determinant());
  long double log_mag = 0.0L;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const WideComplex pivot = lu.matrixLU()(k, k);
    const long double mag = std::abs(pivot);
    if (mag == 0.0L || !std::isfinite(mag)) return LogDet{{0.0, 0.0}, -std::numeric_limits<double>::infinity()};
    phase *= pivot / mag;
    log_mag += std::log(mag);
  }
  return LogDet{Complex(phase), static_cast<double>(log_mag)};
}

Complex det_lu(const DenseComplexMatrix& m) { return log_det_lu(m).value(); }

double max_abs(const DenseComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double relative_deviation(Complex a, Complex b, double floor) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace rgdet
