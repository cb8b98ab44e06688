#include "rgdet/inner_products.hpp"

#include <algorithm>
#include <cmath>

#include "evb_system.hpp"
#include "rgdet/cauchy.hpp"
#include "rgdet/errors.hpp"
#include "rgdet/oracle.hpp"
#include "rgdet/solvers.hpp"

namespace rgdet {

namespace {

constexpr double kOnShellTolerance = 1e-9;

bool hyperbolic(const ModelParams& model) { return model.kind == ModelKind::Hyperbolic; }

double sign_power(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

double spread(const ModelParams& model, const std::vector<Complex>& values) {
  double s = model.scale();
  for (const auto& v : values) s = std::max(s, std::abs(v));
  return s;
}

void require_apart(const ModelParams& model, const std::vector<Complex>& a, const std::vector<Complex>& b, bool same,
                   const char* what) {
  std::vector<Complex> all(a);
  all.insert(all.end(), b.begin(), b.end());
  const double tol = model.tolerances.collision * spread(model, all);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = same ? i + 1 : 0; j < b.size(); ++j) {
      if (std::abs(a[i] - b[j]) <= tol) throw Error(ErrorKind::Collision, std::string(what) + ": coinciding rapidities");
    }
  }
}

// Throws Error(Pole) when a rapidity sits on a level.
void require_off_levels(const ModelParams& model, const SpectralSet& values);

void require_on_shell(const ModelParams& model, const SpectralSet& v) {
  if (bethe_residual_norm(model, v) > kOnShellTolerance) {
    throw Error(ErrorKind::Validation, "bra rapidities do not satisfy the Bethe equations");
  }
}

const SpectralSet& bra_rapidities(const EigenstateRecord& bra) {
  if (!bra.rapidities) throw Error(ErrorKind::Validation, "bra record carries no rapidities");
  return *bra.rapidities;
}

FormulaEvaluation finish(ScaledProduct prefactor, const DenseComplexMatrix& m, std::string form) {
  FormulaEvaluation out;
  const Factorized f = factorize(m);
  out.det = f.det;
  out.rcond = f.rcond;
  out.prefactor = prefactor;
  prefactor.multiply(f.det);
  out.value = prefactor.value();
  out.prefactor_form = std::move(form);
  return out;
}

// Newton on the eigenvalue equations in long double, starting from the stored
// doubles. Falls back to the input when the iteration does not settle.
Eigen::Matrix<long double, -1, 1> refined_lambdas(const ModelParams& model, const LambdaSet& lambdas) {
  using Vec = Eigen::Matrix<long double, -1, 1>;
  using Mat = Eigen::Matrix<long double, -1, -1>;
  const int l = model.size();
  Vec lam(l);
  for (int i = 0; i < l; ++i) lam[i] = lambdas.lambdas[i];
  const Vec start = lam;
  Vec f, dfdg;
  Mat jac;
  const long double g = model.g;
  detail::evb_system<long double>(model, g, lam, f, jac, dfdg);
  const long double f0 = f.cwiseAbs().maxCoeff();
  for (int it = 0; it < 4; ++it) {
    lam -= jac.partialPivLu().solve(f);
    detail::evb_system<long double>(model, g, lam, f, jac, dfdg);
  }
  if (!(f.cwiseAbs().maxCoeff() <= f0)) return start;
  return lam;
}

FormulaEvaluation finish_wide(ScaledProduct prefactor, const WideMatrix& m, std::string form) {
  FormulaEvaluation out = finish(prefactor, m.cast<Complex>(), std::move(form));
  out.det = log_det_wide(m);
  prefactor.multiply(out.det);
  out.value = prefactor.value();
  return out;
}

// prod_{k=1}^{m} (g^-1 + 1 - k), read as Gamma(g^-1 + 1) / Gamma(g^-1 + 1 - m)
// when m < 0. Throws Error(Singular) on a vanishing factor.
ScaledProduct read_green_product(const ModelParams& model, int m) {
  const double ginv = 1.0 / model.g;
  ScaledProduct p;
  auto check = [&](double factor, int k) {
    if (std::abs(factor) <= 1e-12 * (1.0 + std::abs(ginv))) {
      throw Error(ErrorKind::Singular, "singular hyperbolic prefactor: g^-1 + 1 - k vanishes for k = " + std::to_string(k));
    }
  };
  for (int k = 1; k <= m; ++k) {
    const double factor = ginv + 1.0 - k;
    check(factor, k);
    p.multiply(factor);
  }
  for (int k = 0; k > m; --k) {
    const double factor = ginv + 1.0 - k;
    check(factor, k);
    p.divide(factor);
  }
  return p;
}

// Equal as multisets within the collision tolerance.
bool same_multiset(const ModelParams& model, std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return false;
  sort_canonical(a);
  sort_canonical(b);
  std::vector<Complex> all(a);
  all.insert(all.end(), b.begin(), b.end());
  const double tol = model.tolerances.collision * spread(model, all);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > tol) return false;
  }
  return true;
}

ScaledProduct product_of(const std::vector<Complex>& values) {
  ScaledProduct p;
  for (const auto& v : values) p.multiply(v);
  return p;
}

}  // namespace

const char* to_string(OverlapMethod method) {
  switch (method) {
    case OverlapMethod::Slavnov: return "slavnov";
    case OverlapMethod::DetJ: return "detj";
    case OverlapMethod::DetK: return "detk";
    case OverlapMethod::Oracle: return "oracle";
  }
  return "unknown";
}

OverlapMethod overlap_method_from_string(const std::string& name) {
  for (auto m : {OverlapMethod::Slavnov, OverlapMethod::DetJ, OverlapMethod::DetK, OverlapMethod::Oracle}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::Validation, "unknown overlap method '" + name + "'");
}

FormulaEvaluation slavnov_evaluation(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell) {
  const auto& v = on_shell.values;
  const auto& w = off_shell.values;
  const int n = on_shell.size();
  if (off_shell.size() != n) throw Error(ErrorKind::Validation, "slavnov: rapidity sets differ in size");
  require_apart(model, v, v, true, "slavnov");
  require_apart(model, w, w, true, "slavnov");
  require_apart(model, v, w, false, "slavnov");
  require_on_shell(model, on_shell);

  ScaledProduct pre;
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      if (a != b || hyperbolic(model)) pre.multiply(v[a] - w[b]);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      pre.divide(v[b] - v[a]);
      pre.divide(w[a] - w[b]);
    }
  }

  DenseComplexMatrix s(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Complex bracket = 0.0;
      if (hyperbolic(model)) {
        for (double e : model.epsilons) bracket += 1.0 / (w[b] - e);
        for (int c = 0; c < n; ++c) {
          if (c != a) bracket -= 2.0 / (w[b] - v[c]);
        }
        bracket -= (1.0 / model.g + 1.0) / w[b];
        s(a, b) = w[b] / ((v[a] - w[b]) * (v[a] - w[b])) * bracket;
      } else {
        for (double e : model.epsilons) bracket += 1.0 / ((v[a] - e) * (w[b] - e));
        for (int c = 0; c < n; ++c) {
          if (c != a) bracket -= 2.0 / ((v[a] - v[c]) * (w[b] - v[c]));
        }
        s(a, b) = (v[b] - w[b]) / (v[a] - w[b]) * bracket;
      }
    }
  }
  return finish(pre, s, hyperbolic(model) ? "prod_{a,b}(v_a - w_b) / Vandermonde(v, w)" : "prod_{a!=b}(v_a - w_b) / Vandermonde(v, w)");
}

Complex slavnov(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell) {
  return slavnov_evaluation(model, on_shell, off_shell).value;
}

std::vector<Complex> complex_lambdas(const ModelParams& model, const SpectralSet& values) {
  std::vector<Complex> out(model.size(), 0.0);
  for (int i = 0; i < model.size(); ++i) {
    for (const auto& w : values.values) {
      if (std::abs(model.epsilons[i] - w) <= model.tolerances.collision * spread(model, values.values)) {
        throw Error(ErrorKind::Pole, "rapidity coincides with level " + std::to_string(i));
      }
      out[i] += 1.0 / (model.epsilons[i] - w);
    }
  }
  return out;
}

namespace {
void require_off_levels(const ModelParams& model, const SpectralSet& values) { complex_lambdas(model, values); }
}  // namespace

namespace {

template <class C>
Eigen::Matrix<C, -1, -1> j_l_entries(const ModelParams& model, const std::vector<C>& bra, const std::vector<C>& ket) {
  using R = typename C::value_type;
  const int l = model.size();
  if (static_cast<int>(bra.size()) != l || static_cast<int>(ket.size()) != l) {
    throw Error(ErrorKind::Validation, "lambda count differs from the number of levels");
  }
  const auto& e = model.epsilons;
  const R g = model.g;
  Eigen::Matrix<C, -1, -1> j(l, l);
  for (int i = 0; i < l; ++i) {
    C diag = (hyperbolic(model) ? R(1) / (g * R(e[i])) : R(2) / g) + bra[i] + ket[i];
    for (int k = 0; k < l; ++k) {
      if (k == i) continue;
      const R inv = R(1) / (R(e[i]) - R(e[k]));
      diag -= inv;
      j(i, k) = -inv;
    }
    j(i, i) = diag;
  }
  return j;
}

}  // namespace

DenseComplexMatrix j_l_matrix(const ModelParams& model, const std::vector<Complex>& bra, const std::vector<Complex>& ket) {
  return j_l_entries(model, bra, ket);
}

namespace {

FormulaEvaluation det_j_wide(const ModelParams& model, const EigenstateRecord& bra, const std::vector<WideComplex>& ket_lambdas) {
  const int l = model.size();
  const int n = bra.n;
  const auto refined = refined_lambdas(model, bra.lambdas);
  std::vector<WideComplex> bra_lambdas(refined.data(), refined.data() + l);
  ScaledProduct pre;
  pre.multiply(sign_power(n));
  std::string form;
  if (hyperbolic(model)) {
    const auto& v = bra_rapidities(bra);
    for (double e : model.epsilons) pre.multiply(e);
    for (const auto& x : v.values) pre.divide(x);
    const ScaledProduct rg = read_green_product(model, l - 2 * n);
    pre.multiply(LogDet{std::conj(rg.phase()), -rg.log_magnitude()});
    form = "(-1)^N (prod eps / prod v) / prod_{k=1}^{L-2N}(1/g + 1 - k)";
  } else {
    const double half_g = 0.5 * model.g;
    for (int k = 0; k < std::abs(l - 2 * n); ++k) {
      if (l - 2 * n > 0) {
        pre.multiply(half_g);
      } else {
        pre.divide(half_g);
      }
    }
    form = "(-1)^N (g/2)^(L-2N)";
  }
  return finish_wide(pre, j_l_entries(model, bra_lambdas, ket_lambdas), form);
}

}  // namespace

FormulaEvaluation det_j_evaluation(const ModelParams& model, const EigenstateRecord& bra, const std::vector<Complex>& ket,
                                   int ket_n) {
  if (ket_n != bra.n) throw Error(ErrorKind::Validation, "detj: bra and ket particle numbers differ");
  const int l = model.size();
  if (static_cast<int>(ket.size()) != l) throw Error(ErrorKind::Validation, "lambda count differs from the number of levels");
  const auto refined = refined_lambdas(model, bra.lambdas);
  std::vector<WideComplex> ket_lambdas(l);
  for (int i = 0; i < l; ++i) {
    // an on-shell ket equal to the bra shares the refined values
    ket_lambdas[i] = ket[i] == Complex(bra.lambdas.lambdas[i]) ? WideComplex(refined[i]) : WideComplex(ket[i]);
  }
  return det_j_wide(model, bra, ket_lambdas);
}

FormulaEvaluation det_j_evaluation(const ModelParams& model, const EigenstateRecord& bra, const SpectralSet& ket) {
  if (ket.size() != bra.n) throw Error(ErrorKind::Validation, "detj: bra and ket particle numbers differ");
  require_off_levels(model, ket);
  std::vector<WideComplex> ket_lambdas(model.size(), 0.0L);
  for (int i = 0; i < model.size(); ++i) {
    for (const auto& w : ket.values) ket_lambdas[i] += 1.0L / (WideComplex(model.epsilons[i]) - WideComplex(w));
  }
  return det_j_wide(model, bra, ket_lambdas);
}

FormulaEvaluation det_j_evaluation(const ModelParams& model, const EigenstateRecord& bra, const LambdaSet& ket) {
  return det_j_evaluation(model, bra, std::vector<Complex>(ket.lambdas.begin(), ket.lambdas.end()), ket.particle_number);
}

Complex det_j_overlap(const ModelParams& model, const EigenstateRecord& bra, const LambdaSet& ket) {
  return det_j_evaluation(model, bra, ket).value;
}

DenseComplexMatrix k_matrix(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell) {
  std::vector<Complex> x(on_shell.values);
  x.insert(x.end(), off_shell.values.begin(), off_shell.values.end());
  require_apart(model, x, x, true, "detk");
  require_off_levels(model, SpectralSet{x, SpectralRole::OffShell});
  const int m = static_cast<int>(x.size());
  DenseComplexMatrix k(m, m);
  for (int a = 0; a < m; ++a) {
    Complex diag = hyperbolic(model) ? (1.0 / model.g + 1.0) / x[a] : Complex(2.0 / model.g);
    for (double e : model.epsilons) diag -= 1.0 / (x[a] - e);
    for (int c = 0; c < m; ++c) {
      if (c == a) continue;
      diag += 1.0 / (x[a] - x[c]);
      k(a, c) = -1.0 / (x[a] - x[c]);
    }
    k(a, a) = diag;
  }
  return k;
}

FormulaEvaluation det_k_evaluation(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell) {
  if (on_shell.size() != off_shell.size()) throw Error(ErrorKind::Validation, "detk: rapidity sets differ in size");
  const DenseComplexMatrix k = k_matrix(model, on_shell, off_shell);
  ScaledProduct pre;
  pre.multiply(sign_power(on_shell.size()));
  if (hyperbolic(model)) pre.multiply(product_of(off_shell.values));
  return finish(pre, k, hyperbolic(model) ? "(-1)^N prod w" : "(-1)^N");
}

Complex det_k_overlap(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell) {
  return det_k_evaluation(model, on_shell, off_shell).value;
}

double gaudin_jacobian_scale(const ModelParams& model) { return hyperbolic(model) ? 1.0 : 2.0; }

DenseComplexMatrix gaudin_matrix(const ModelParams& model, const SpectralSet& rapidities) {
  try {
    require_apart(model, rapidities.values, rapidities.values, true, "gaudin");
  } catch (const Error& e) {
    throw Error(ErrorKind::Degenerate, "gaudin: degenerate rapidities");
  }
  return gaudin_jacobian_scale(model) * bethe_jacobian(model, rapidities);
}

DenseComplexMatrix evb_gaudin_matrix(const ModelParams& model, const LambdaSet& lambdas) {
  const std::vector<Complex> lam(lambdas.lambdas.begin(), lambdas.lambdas.end());
  return j_l_matrix(model, lam, lam);
}

FormulaEvaluation gaudin_norm_evaluation(const ModelParams& model, const EigenstateRecord& record) {
  const auto& v = bra_rapidities(record);
  ScaledProduct pre;
  if (hyperbolic(model)) pre = product_of(v.values);
  return finish(pre, gaudin_matrix(model, v), hyperbolic(model) ? "prod v" : "1");
}

double gaudin_norm(const ModelParams& model, const EigenstateRecord& record) {
  return gaudin_norm_evaluation(model, record).value.real();
}

FormulaEvaluation evb_norm_evaluation(const ModelParams& model, const EigenstateRecord& record) {
  return det_j_evaluation(model, record, record.lambdas);
}

double evb_norm(const ModelParams& model, const EigenstateRecord& record) {
  return evb_norm_evaluation(model, record).value.real();
}

IzerginBorchardtResult izergin_borchardt(const ModelParams& model, const OccupationState& occ, const SpectralSet& rapidities) {
  const int n = occ.count();
  if (rapidities.size() != n) throw Error(ErrorKind::Validation, "izergin_borchardt: occupation and rapidity counts differ");
  if (occ.levels() != model.size()) throw Error(ErrorKind::Validation, "izergin_borchardt: occupation size differs from L");
  const auto& v = rapidities.values;
  require_apart(model, v, v, true, "izergin_borchardt");
  CauchyPair pair;
  for (int i : occ.occupied()) pair.eps.emplace_back(model.epsilons[i]);
  pair.xs = v;
  require_off_levels(model, rapidities);

  double weight = 1.0;
  if (hyperbolic(model)) {
    for (int i : occ.occupied()) weight *= model.epsilons[i];
    weight = std::sqrt(weight);
  }

  ScaledProduct pre;
  DenseComplexMatrix sq(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Complex d = pair.eps[b] - v[a];
      pre.multiply(d);
      sq(a, b) = 1.0 / (d * d);
    }
  }
  for (int b = 0; b < n; ++b) {
    for (int c = b + 1; c < n; ++c) pre.divide(pair.eps[b] - pair.eps[c]);
  }
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < a; ++c) pre.divide(v[a] - v[c]);
  }
  pre.multiply(weight);
  pre.multiply(log_det_lu(sq));

  IzerginBorchardtResult out;
  out.value = pre.value();
  out.permanent = weight * (n <= 10 ? permanent_ryser(cauchy_matrix(pair)) : borchardt_permanent(pair));
  out.max_deviation = relative_deviation(out.value, out.permanent);

  bool on_shell = false;
  try {
    on_shell = bethe_residual_norm(model, rapidities) <= kOnShellTolerance;
  } catch (const Error&) {
    on_shell = false;
  }
  if (on_shell) {
    out.j_route = weight * det_lu(j_eps_matrix(pair));
    out.k_route = weight * det_lu(j_x_matrix(pair));
    out.max_deviation = std::max({out.max_deviation, relative_deviation(out.value, *out.j_route),
                                  relative_deviation(out.value, *out.k_route)});
  }
  return out;
}

Complex dual_ratio(const ModelParams& model, const EigenstateRecord& record) {
  if (!record.converged) throw Error(ErrorKind::Validation, "dual_ratio needs a converged record");
  const int l = model.size();
  const int n = record.n;
  ScaledProduct c;
  c.multiply(sign_power(n));
  if (hyperbolic(model)) {
    if (l - 2 * n <= 0) {
      throw Error(ErrorKind::OutOfValidity, "hyperbolic dual ratio is only available for L - 2N > 0");
    }
    const auto& v = bra_rapidities(record);
    c.multiply(product_of(v.values));
    for (double e : model.epsilons) c.divide(std::sqrt(e));
    c.multiply(read_green_product(model, l - 2 * n));
  } else {
    for (int k = 0; k < std::abs(l - 2 * n); ++k) {
      if (l - 2 * n > 0) {
        c.divide(0.5 * model.g);
      } else {
        c.multiply(0.5 * model.g);
      }
    }
  }
  return c.value();
}

OverlapResult overlap(const OverlapRequest& request) {
  const auto& model = request.model;
  const auto& bra = request.bra;
  if (!bra.converged) throw Error(ErrorKind::Validation, "bra record is not converged");

  OverlapResult out;
  out.method = request.method;
  auto take = [&](const FormulaEvaluation& f) {
    out.value = f.value;
    out.condition_estimate = f.rcond;
    out.prefactor = PrefactorBreakdown{f.prefactor.phase(), f.prefactor.log_magnitude(), f.prefactor_form};
  };
  auto oracle_with = [&](const SectorAmplitudes& ket) {
    const auto b = build_bethe_state(model, bra_rapidities(bra));
    out.value = exact_inner_product(b, ket);
    out.condition_estimate = 1.0;
    out.prefactor = PrefactorBreakdown{1.0, 0.0, "oracle"};
  };

  if (const auto* w = std::get_if<SpectralSet>(&request.ket)) {
    if (request.method == OverlapMethod::Slavnov || request.method == OverlapMethod::DetK) {
      if (same_multiset(model, bra_rapidities(bra).values, w->values)) {
        take(gaudin_norm_evaluation(model, bra));
        return out;
      }
    }
    switch (request.method) {
      case OverlapMethod::Slavnov: take(slavnov_evaluation(model, bra_rapidities(bra), *w)); break;
      case OverlapMethod::DetJ: take(det_j_evaluation(model, bra, *w)); break;
      case OverlapMethod::DetK: take(det_k_evaluation(model, bra_rapidities(bra), *w)); break;
      case OverlapMethod::Oracle: oracle_with(build_bethe_state(model, *w)); break;
    }
  } else if (const auto* lam = std::get_if<LambdaSet>(&request.ket)) {
    if (request.method != OverlapMethod::DetJ) {
      throw Error(ErrorKind::Validation, std::string("method ") + to_string(request.method) + " needs ket rapidities");
    }
    take(det_j_evaluation(model, bra, *lam));
  } else {
    const auto& occ = std::get<OccupationState>(request.ket);
    if (occ.count() != bra.n) throw Error(ErrorKind::Validation, "bra and ket particle numbers differ");
    if (request.method == OverlapMethod::Oracle) {
      oracle_with(build_product_state(occ));
      return out;
    }
    const auto ib = izergin_borchardt(model, occ, bra_rapidities(bra));
    std::optional<Complex> value = ib.value;
    if (request.method == OverlapMethod::DetJ) value = ib.j_route;
    if (request.method == OverlapMethod::DetK) value = ib.k_route;
    if (!value) throw Error(ErrorKind::Validation, "J_N and K_N routes need on-shell bra rapidities");
    out.value = std::conj(*value);
    out.condition_estimate = 1.0;
    out.prefactor = PrefactorBreakdown{1.0, 0.0, "product state"};
  }
  return out;
}

}  // namespace rgdet
