#include "rgdet/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgdet/errors.hpp"

namespace rgdet {

namespace {

double pair_scale(const CauchyPair& pair) {
  double s = 0.0;
  for (const auto& e : pair.eps) s = std::max(s, std::abs(e));
  for (const auto& x : pair.xs) s = std::max(s, std::abs(x));
  return s > 0.0 ? s : 1.0;
}

void require_pole_free(const CauchyPair& pair) {
  const double tol = kCauchyPoleTolerance * pair_scale(pair);
  for (int i = 0; i < pair.rows(); ++i) {
    for (int a = 0; a < pair.cols(); ++a) {
      if (std::abs(pair.eps[i] - pair.xs[a]) <= tol) {
        throw Error(ErrorKind::Pole, "Cauchy pole: eps_" + std::to_string(i) + " coincides with x_" + std::to_string(a));
      }
    }
  }
}

void require_distinct(const std::vector<Complex>& values, double scale, const char* name) {
  const double tol = kCauchyPoleTolerance * scale;
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      if (std::abs(values[a] - values[b]) <= tol) {
        throw Error(ErrorKind::Collision, std::string("Cauchy pair: repeated entry in ") + name);
      }
    }
  }
}

void require_square(const CauchyPair& pair, const char* what) {
  if (!pair.square()) throw Error(ErrorKind::Validation, std::string(what) + " requires a square Cauchy pair");
}

DenseComplexMatrix identity(int n) { return DenseComplexMatrix::Identity(n, n); }

}  // namespace

DenseComplexMatrix cauchy_matrix(const CauchyPair& pair) {
  require_pole_free(pair);
  DenseComplexMatrix c(pair.rows(), pair.cols());
  for (int i = 0; i < pair.rows(); ++i) {
    for (int a = 0; a < pair.cols(); ++a) c(i, a) = 1.0 / (pair.eps[i] - pair.xs[a]);
  }
  return c;
}

DenseComplexMatrix cauchy_inverse(const CauchyPair& pair) {
  require_square(pair, "cauchy_inverse");
  require_pole_free(pair);
  const double scale = pair_scale(pair);
  require_distinct(pair.eps, scale, "eps");
  require_distinct(pair.xs, scale, "xs");
  const int n = pair.rows();

  // p(x_a) / q'(x_a) and q(eps_i) / p'(eps_i), each as a running product.
  std::vector<Complex> dx(n, 1.0), de(n, 1.0);
  for (int a = 0; a < n; ++a) {
    ScaledProduct prod;
    for (int k = 0; k < n; ++k) prod.multiply(pair.xs[a] - pair.eps[k]);
    for (int b = 0; b < n; ++b) {
      if (b != a) prod.divide(pair.xs[a] - pair.xs[b]);
    }
    dx[a] = prod.value();
  }
  for (int i = 0; i < n; ++i) {
    ScaledProduct prod;
    for (int b = 0; b < n; ++b) prod.multiply(pair.eps[i] - pair.xs[b]);
    for (int k = 0; k < n; ++k) {
      if (k != i) prod.divide(pair.eps[i] - pair.eps[k]);
    }
    de[i] = prod.value();
  }

  DenseComplexMatrix inv(n, n);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) inv(a, i) = -dx[a] * de[i] / (pair.eps[i] - pair.xs[a]);
  }
  return inv;
}

namespace {

// Closed-form det C, or its inverse, accumulated into prod.
void accumulate_cauchy_det(const CauchyPair& pair, ScaledProduct& prod, bool inverse) {
  const int n = pair.rows();
  auto up = [&](Complex z) { inverse ? prod.divide(z) : prod.multiply(z); };
  auto down = [&](Complex z) { inverse ? prod.multiply(z) : prod.divide(z); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) up(pair.eps[i] - pair.eps[j]);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) up(pair.xs[a] - pair.xs[b]);
  }
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) down(pair.eps[i] - pair.xs[a]);
  }
}

// log det[C*C] with the entries and the LU carried in long double.
LogDet log_det_hadamard_square(const CauchyPair& pair) {
  using Wide = WideComplex;
  const int n = pair.rows();
  WideMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      const Wide d = Wide(pair.eps[i]) - Wide(pair.xs[a]);
      m(i, a) = 1.0L / (d * d);
    }
  }
  return log_det_wide(m);
}

bool has_repeats(const std::vector<Complex>& z) {
  for (std::size_t a = 0; a < z.size(); ++a) {
    for (std::size_t b = a + 1; b < z.size(); ++b) {
      if (z[a] == z[b]) return true;
    }
  }
  return false;
}

}  // namespace

Complex cauchy_determinant(const CauchyPair& pair) {
  require_square(pair, "cauchy_determinant");
  require_pole_free(pair);
  ScaledProduct prod;
  accumulate_cauchy_det(pair, prod, false);
  return prod.value();
}

DenseComplexMatrix hadamard_power(const DenseComplexMatrix& m, int power) {
  DenseComplexMatrix out = DenseComplexMatrix::Ones(m.rows(), m.cols());
  for (int p = 0; p < power; ++p) out = out.cwiseProduct(m);
  return out;
}

Complex borchardt_permanent(const CauchyPair& pair) {
  require_square(pair, "borchardt_permanent");
  if (has_repeats(pair.eps) || has_repeats(pair.xs)) {
    throw Error(ErrorKind::Collision, "borchardt_permanent: singular Cauchy matrix (repeated entries)");
  }
  ScaledProduct ratio;
  require_pole_free(pair);
  ratio.multiply(log_det_hadamard_square(pair));
  accumulate_cauchy_det(pair, ratio, true);
  return ratio.value();
}

DenseComplexMatrix j_eps_matrix(const CauchyPair& pair) {
  require_pole_free(pair);
  const int m = pair.rows();
  DenseComplexMatrix j(m, m);
  for (int i = 0; i < m; ++i) {
    Complex diag = 0.0;
    for (const auto& x : pair.xs) diag += 1.0 / (pair.eps[i] - x);
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      const Complex inv = 1.0 / (pair.eps[i] - pair.eps[k]);
      diag -= inv;
      j(i, k) = -inv;
    }
    j(i, i) = diag;
  }
  return j;
}

DenseComplexMatrix j_x_matrix(const CauchyPair& pair) {
  require_pole_free(pair);
  const int n = pair.cols();
  DenseComplexMatrix j(n, n);
  for (int a = 0; a < n; ++a) {
    Complex diag = 0.0;
    for (const auto& e : pair.eps) diag -= 1.0 / (pair.xs[a] - e);
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      const Complex inv = 1.0 / (pair.xs[a] - pair.xs[b]);
      diag += inv;
      j(a, b) = -inv;
    }
    j(a, a) = diag;
  }
  return j;
}

IdentityCheck check_sylvester_mixed(const CauchyPair& pair) {
  IdentityCheck out;
  out.lhs = det_lu(identity(pair.cols()) + j_x_matrix(pair));
  out.rhs = det_lu(identity(pair.rows()) + j_eps_matrix(pair));
  return out;
}

IdentityCheck check_hadamard3(const CauchyPair& pair) {
  require_square(pair, "check_hadamard3");
  const DenseComplexMatrix c = cauchy_matrix(pair);
  const DenseComplexMatrix je = j_eps_matrix(pair);
  const Eigen::PartialPivLU<DenseComplexMatrix> je_lu(je);
  if (log_det_lu(je).singular()) throw Error(ErrorKind::Singular, "check_hadamard3: J_eps is singular");

  IdentityCheck out;
  const LogDet num = log_det_lu(2.0 * hadamard_power(c, 3));
  const LogDet den = log_det_lu(hadamard_power(c, 2));
  if (den.singular()) throw Error(ErrorKind::Singular, "check_hadamard3: det[C*C] vanishes");
  ScaledProduct ratio;
  ratio.multiply(num);
  ratio.multiply(LogDet{std::conj(den.phase), -den.log_magnitude});
  out.lhs = ratio.value();
  out.rhs = det_lu(j_x_matrix(pair) + c.transpose() * je_lu.solve(c));
  return out;
}

IdentityCheck check_matrix_det_lemma(const CauchyPair& pair, Complex G) {
  if (pair.rows() < pair.cols()) {
    throw Error(ErrorKind::Validation, "check_matrix_det_lemma requires at least as many eps as x values");
  }
  for (const auto& e : pair.eps) {
    if (e == Complex{0.0, 0.0}) throw Error(ErrorKind::Validation, "check_matrix_det_lemma: zero eps value");
  }
  for (const auto& x : pair.xs) {
    if (x == Complex{0.0, 0.0}) throw Error(ErrorKind::Validation, "check_matrix_det_lemma: zero x value");
  }

  DenseComplexMatrix left = j_eps_matrix(pair);
  ScaledProduct lhs;
  for (int i = 0; i < pair.rows(); ++i) {
    left(i, i) += (G - 1.0) / (2.0 * pair.eps[i]);
    lhs.multiply(pair.eps[i]);
  }
  lhs.multiply(log_det_lu(left));

  DenseComplexMatrix right = j_x_matrix(pair);
  ScaledProduct rhs;
  for (int a = 0; a < pair.cols(); ++a) {
    right(a, a) += (G + 1.0) / (2.0 * pair.xs[a]);
    rhs.multiply(pair.xs[a]);
  }
  for (int k = 1; k <= pair.rows() - pair.cols(); ++k) rhs.multiply((G + 1.0) / 2.0 - static_cast<double>(k));
  rhs.multiply(log_det_lu(right));

  return IdentityCheck{lhs.value(), rhs.value()};
}

}  // namespace rgdet
