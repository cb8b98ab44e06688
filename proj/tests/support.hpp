#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "rgdet/linalg.hpp"
#include "rgdet/model.hpp"

namespace testing {

using rgdet::Complex;

// Sum over all n! permutations.
inline Complex naive_permanent(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Complex total = 0.0;
  do {
    Complex prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= m(i, p[i]);
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Leibniz expansion, for cross-checking small LU determinants.
inline Complex naive_det(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Complex total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) inversions += p[i] > p[j];
    }
    Complex prod = inversions % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) prod *= m(i, p[i]);
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Central differences of a complex residual w.r.t. each complex argument
// (holomorphic, so a real step suffices).
template <class F>
Eigen::MatrixXcd fd_jacobian_complex(F residual, const std::vector<Complex>& x, double h) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXcd j(n, n);
  for (int b = 0; b < n; ++b) {
    auto up = x, dn = x;
    up[b] += h;
    dn[b] -= h;
    const auto fu = residual(up);
    const auto fd = residual(dn);
    for (int a = 0; a < n; ++a) j(a, b) = (fu[a] - fd[a]) / (2.0 * h);
  }
  return j;
}

template <class F>
Eigen::MatrixXd fd_jacobian_real(F residual, const std::vector<double>& x, double h) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd j(n, n);
  for (int b = 0; b < n; ++b) {
    auto up = x, dn = x;
    up[b] += h;
    dn[b] -= h;
    const auto fu = residual(up);
    const auto fd = residual(dn);
    for (int a = 0; a < n; ++a) j(a, b) = (fu[a] - fd[a]) / (2.0 * h);
  }
  return j;
}

// max_ij |a_ij - b_ij| / max(|b_ij|, floor).
template <class A, class B>
double entrywise_relative(const A& a, const B& b, double floor) {
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(std::abs(b(i, j)), floor));
    }
  }
  return worst;
}

inline rgdet::ModelParams make_model(rgdet::ModelKind kind, double g, std::vector<double> eps) {
  rgdet::ModelParams m;
  m.kind = kind;
  m.g = g;
  m.epsilons = std::move(eps);
  return m;
}

}  // namespace testing
