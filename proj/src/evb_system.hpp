#pragma once

#include <Eigen/Dense>

#include "rgdet/model.hpp"

namespace rgdet::detail {

// r_i = -k_i(g) Lambda_i.
template <class T>
T charge_scale(const ModelParams& model, T g, int i) {
  return (model.kind == ModelKind::Hyperbolic) ? g * T(model.epsilons[i]) : T(0.5) * g;
}

// Residual F, Jacobian dF/dLambda and the coupling derivative dF/dg.
template <class T>
void evb_system(const ModelParams& model, T g, const Eigen::Matrix<T, -1, 1>& lam, Eigen::Matrix<T, -1, 1>& f,
                Eigen::Matrix<T, -1, -1>& jac, Eigen::Matrix<T, -1, 1>& dfdg) {
  const int l = model.size();
  const auto& e = model.epsilons;
  f.resize(l);
  jac.resize(l, l);
  dfdg.resize(l);
  for (int i = 0; i < l; ++i) {
    T sum = 0.0, diag = 0.0;
    if (model.kind == ModelKind::Hyperbolic) {
      for (int j = 0; j < l; ++j) {
        if (j == i) continue;
        const T inv = T(1.0) / (T(e[i]) - T(e[j]));
        sum += (e[i] * lam[i] - e[j] * lam[j]) * inv;
        diag += e[i] * inv;
        jac(i, j) = e[j] * inv;
      }
      f[i] = e[i] * lam[i] * lam[i] + lam[i] / g - sum;
      jac(i, i) = 2.0 * e[i] * lam[i] + 1.0 / g - diag;
      dfdg[i] = -lam[i] / (g * g);
    } else {
      for (int j = 0; j < l; ++j) {
        if (j == i) continue;
        const T inv = T(1.0) / (T(e[i]) - T(e[j]));
        sum += (lam[i] - lam[j]) * inv;
        diag += inv;
        jac(i, j) = inv;
      }
      f[i] = lam[i] * lam[i] + 2.0 / g * lam[i] - sum;
      jac(i, i) = 2.0 * lam[i] + 2.0 / g - diag;
      dfdg[i] = -2.0 * lam[i] / (g * g);
    }
  }
}

}  // namespace rgdet::detail
