#pragma once

#include <vector>

#include "rgdet/linalg.hpp"

namespace rgdet {

// Two parameter sets defining C_{i alpha} = 1 / (eps_i - x_alpha). The sets
// may differ in size.
struct CauchyPair {
  std::vector<Complex> eps;
  std::vector<Complex> xs;

  int rows() const { return static_cast<int>(eps.size()); }
  int cols() const { return static_cast<int>(xs.size()); }
  bool square() const { return eps.size() == xs.size(); }
};

// Both sides of a determinant identity.
struct IdentityCheck {
  Complex lhs;
  Complex rhs;

  double deviation() const { return relative_deviation(lhs, rhs); }
};

// Distances below tol * scale count as coincident.
inline constexpr double kCauchyPoleTolerance = 1e-12;

DenseComplexMatrix cauchy_matrix(const CauchyPair& pair);

// Closed-form inverse: (C^-1)_{alpha i} = -(1/(eps_i - x_alpha)) p(x_alpha) q(eps_i)
// / (p'(eps_i) q'(x_alpha)), with p, q the monic polynomials vanishing on eps
// and xs. Products are accumulated pointwise, never through coefficients.
DenseComplexMatrix cauchy_inverse(const CauchyPair& pair);

// prod_{j<i}(eps_i - eps_j) prod_{a<b}(x_a - x_b) / prod_{i,a}(eps_i - x_a).
Complex cauchy_determinant(const CauchyPair& pair);

// Entrywise power C * C * ... * C.
DenseComplexMatrix hadamard_power(const DenseComplexMatrix& m, int power);

// per[C] = det[C * C] / det[C].
Complex borchardt_permanent(const CauchyPair& pair);

// (J_eps)_ii = sum_a 1/(eps_i - x_a) - sum_{k != i} 1/(eps_i - eps_k),
// (J_eps)_ij = -1/(eps_i - eps_j).
DenseComplexMatrix j_eps_matrix(const CauchyPair& pair);
// (J_x)_aa = -sum_i 1/(x_a - eps_i) + sum_{b != a} 1/(x_a - x_b),
// (J_x)_ab = -1/(x_a - x_b).
DenseComplexMatrix j_x_matrix(const CauchyPair& pair);

// det[1_n + J_x] against det[1_m + J_eps]; sizes may differ.
IdentityCheck check_sylvester_mixed(const CauchyPair& pair);

// det[2 (C*C*C)] / det[C*C] against det[J_x + C^T J_eps^-1 C].
IdentityCheck check_hadamard3(const CauchyPair& pair);

// (prod eps) det[(G-1)/(2 eps) + J_eps] against
// prod_{k=1}^{m-n} ((G+1)/2 - k) (prod x) det[(G+1)/(2 x) + J_x], m >= n.
IdentityCheck check_matrix_det_lemma(const CauchyPair& pair, Complex G);

}  // namespace rgdet
