#include "rgdet/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "evb_system.hpp"
#include "rgdet/errors.hpp"

namespace rgdet {

namespace {

std::string fmt_sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

using detail::charge_scale;
using detail::evb_system;
using Eigen::MatrixXd;
using Eigen::VectorXd;

bool hyperbolic(const ModelParams& model) { return model.kind == ModelKind::Hyperbolic; }

VectorXd to_vector(const std::vector<double>& v) { return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::vector<double> to_std(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct Corrector {
  const ModelParams& model;
  const SolveOptions& opts;

  // Newton at fixed g. Fails on a non-finite or oversized move in r, or when
  // the steps stop contracting.
  bool run(Complex g, VectorXcd& lam) const {
    const int l = model.size();
    VectorXcd f, dfdg;
    MatrixXcd jac;
    const VectorXcd start = lam;
    double previous = INFINITY;
    for (int it = 0; it < opts.homotopy.corrector_iter; ++it) {
      evb_system(model, g, lam, f, jac, dfdg);
      if (!f.allFinite()) return false;
      // Near-singular Jacobians leave the steps noisy long after F is small.
      if (it > 0 && f.cwiseAbs().maxCoeff() <= 1e-2 * opts.newton_tol) return true;
      const VectorXcd d = jac.partialPivLu().solve(-f);
      if (!d.allFinite()) return false;
      lam += d;
      double step = 0.0, moved = 0.0, rmax = 0.0;
      for (int i = 0; i < l; ++i) {
        const Complex k = charge_scale(model, g, i);
        step = std::max(step, std::abs(k * d[i]));
        moved = std::max(moved, std::abs(k * (lam[i] - start[i])));
        rmax = std::max(rmax, std::abs(k * lam[i]));
      }
      if (moved > opts.homotopy.max_correction) return false;
      if (step <= 1e-14 * (1.0 + rmax)) return true;
      if (step > 1e-7 * (1.0 + rmax) && step > 0.5 * previous) return false;
      previous = step;
    }
    evb_system(model, g, lam, f, jac, dfdg);
    return f.allFinite() && f.cwiseAbs().maxCoeff() <= opts.newton_tol;
  }
};

// Continuation path g(t) = target (t + i b t (1 - t)) for t in (0, 1]. The
// hyperbolic detour leaves the real axis, where branches of different sectors
// meet at integer g^-1.
struct CouplingPath {
  double target;
  double bump;

  Complex at(double t) const { return target * Complex(t, bump * t * (1.0 - t)); }
  Complex slope(double t) const { return target * Complex(1.0, bump * (1.0 - 2.0 * t)); }
};

std::optional<int> read_green_integer(const ModelParams& model, int n) {
  if (model.kind != ModelKind::Hyperbolic) return std::nullopt;
  const double inv = 1.0 / model.g;
  const double p = std::round(inv);
  if (std::abs(inv - p) > 1e-6 || p == 0.0) return std::nullopt;
  if ((p >= -n && p <= -1) || (p >= 1 && p <= model.size() - 2 * n + 1)) return static_cast<int>(p);
  return std::nullopt;
}

std::string describe_seed(const OccupationState& seed) { return seed.bitstring(); }

double spectral_scale(const ModelParams& model, const std::vector<Complex>& values) {
  double s = model.scale();
  for (const auto& v : values) s = std::max(s, std::abs(v));
  return s;
}

void require_pole_free(const ModelParams& model, const std::vector<Complex>& values) {
  const double tol = model.tolerances.collision * spectral_scale(model, values);
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (int i = 0; i < model.size(); ++i) {
      if (std::abs(values[a] - model.epsilons[i]) <= tol) {
        throw Error(ErrorKind::Pole, "rapidity " + std::to_string(a) + " coincides with level " + std::to_string(i));
      }
    }
    if (hyperbolic(model) && std::abs(values[a]) <= tol) {
      throw Error(ErrorKind::Pole, "rapidity " + std::to_string(a) + " vanishes in the hyperbolic model");
    }
  }
}

void require_separated(const ModelParams& model, const std::vector<Complex>& values, ErrorKind kind) {
  const double tol = model.tolerances.collision * spectral_scale(model, values);
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      if (std::abs(values[a] - values[b]) <= tol) {
        throw Error(kind, "rapidities " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
      }
    }
  }
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void SolveOptions::validate() const {
  if (!(newton_tol > 0.0) || !(bethe_tol > 0.0)) throw Error(ErrorKind::Validation, "solver tolerances must be positive");
  if (max_iter < 1) throw Error(ErrorKind::Validation, "max_iter must be at least 1");
  if (threads < 1) throw Error(ErrorKind::Validation, "threads must be at least 1");
  const auto& h = homotopy;
  if (!(h.initial_fraction > 0.0) || !(h.max_fraction >= h.initial_fraction) || !(h.shrink > 0.0 && h.shrink < 1.0) || !(h.grow >= 1.0) || h.grow_after < 1 ||
      !(h.min_fraction > 0.0) || h.corrector_iter < 1 || !(h.max_correction > 0.0) || !std::isfinite(h.detour)) {
    throw Error(ErrorKind::Validation, "invalid continuation step control");
  }
  if (target_g && (!std::isfinite(*target_g) || *target_g == 0.0)) {
    throw Error(ErrorKind::Validation, "target_g must be finite and nonzero");
  }
}

std::vector<double> residual_evb(const ModelParams& model, const LambdaSet& lambdas) {
  if (lambdas.size() != model.size()) throw Error(ErrorKind::Validation, "lambda count differs from the number of levels");
  VectorXd f, dfdg;
  MatrixXd jac;
  evb_system(model, model.g, to_vector(lambdas.lambdas), f, jac, dfdg);
  return to_std(f);
}

Eigen::MatrixXd evb_jacobian(const ModelParams& model, const LambdaSet& lambdas) {
  if (lambdas.size() != model.size()) throw Error(ErrorKind::Validation, "lambda count differs from the number of levels");
  VectorXd f, dfdg;
  MatrixXd jac;
  evb_system(model, model.g, to_vector(lambdas.lambdas), f, jac, dfdg);
  return jac;
}

double evb_residual_norm(const ModelParams& model, const LambdaSet& lambdas) {
  double m = 0.0;
  for (double r : residual_evb(model, lambdas)) m = std::max(m, std::abs(r));
  return m;
}

std::vector<Complex> residual_bethe(const ModelParams& model, const SpectralSet& rapidities) {
  const auto& v = rapidities.values;
  require_pole_free(model, v);
  require_separated(model, v, ErrorKind::Collision);
  const int n = rapidities.size();
  std::vector<Complex> f(n);
  for (int a = 0; a < n; ++a) {
    Complex levels = 0.0, pairs = 0.0;
    for (double e : model.epsilons) levels += 1.0 / (e - v[a]);
    for (int b = 0; b < n; ++b) {
      if (b != a) pairs += 1.0 / (v[b] - v[a]);
    }
    if (hyperbolic(model)) {
      f[a] = (1.0 + 1.0 / model.g) / v[a] + levels - 2.0 * pairs;
    } else {
      f[a] = 1.0 / model.g + 0.5 * levels - pairs;
    }
  }
  return f;
}

DenseComplexMatrix bethe_jacobian(const ModelParams& model, const SpectralSet& rapidities) {
  const auto& v = rapidities.values;
  require_pole_free(model, v);
  require_separated(model, v, ErrorKind::Collision);
  const int n = rapidities.size();
  const double level_weight = hyperbolic(model) ? 1.0 : 0.5;
  const double pair_weight = hyperbolic(model) ? 2.0 : 1.0;
  DenseComplexMatrix jac(n, n);
  for (int a = 0; a < n; ++a) {
    Complex diag = 0.0;
    for (double e : model.epsilons) diag += level_weight / ((e - v[a]) * (e - v[a]));
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      const Complex inv2 = 1.0 / ((v[b] - v[a]) * (v[b] - v[a]));
      diag -= pair_weight * inv2;
      jac(a, b) = pair_weight * inv2;
    }
    if (hyperbolic(model)) diag -= (1.0 + 1.0 / model.g) / (v[a] * v[a]);
    jac(a, a) = diag;
  }
  return jac;
}

double bethe_residual_norm(const ModelParams& model, const SpectralSet& rapidities) {
  return max_abs(residual_bethe(model, rapidities));
}

std::vector<OccupationState> seed_occupations(int levels, int n) {
  if (levels < 0 || n < 0 || n > levels) {
    throw Error(ErrorKind::Validation, "particle number " + std::to_string(n) + " outside [0, " + std::to_string(levels) + "]");
  }
  std::vector<OccupationState> out;
  std::vector<int> idx(n);
  for (int k = 0; k < n; ++k) idx[k] = k;
  while (true) {
    out.emplace_back(idx, levels);
    int k = n - 1;
    while (k >= 0 && idx[k] == levels - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int m = k + 1; m < n; ++m) idx[m] = idx[m - 1] + 1;
  }
  return out;
}

EigenstateRecord solve_evb_seed(const ModelParams& model, const OccupationState& seed, const SolveOptions& opts) {
  opts.validate();
  const double target = opts.target_g.value_or(model.g);
  const ModelParams target_model = model.with_coupling(target);
  require_valid(target_model);
  if (seed.levels() != model.size()) throw Error(ErrorKind::Validation, "seed occupation size differs from the number of levels");

  const int l = model.size();
  const auto& h = opts.homotopy;
  const Corrector corrector{target_model, opts};
  auto fail = [&](double last_g, const std::string& why) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "continuation failed for seed " << describe_seed(seed) << " at g = " << last_g << ": " << why;
    if (const auto p = read_green_integer(target_model, seed.count())) msg << " (target g^-1 = " << *p << " is a Read-Green point)";
    return ContinuationError(last_g, msg.str());
  };

  const CouplingPath path{target, hyperbolic(model) ? h.detour : 0.0};
  double t = h.initial_fraction;
  VectorXcd lam = VectorXcd::Zero(l);
  for (int i : seed.occupied()) lam[i] = -1.0 / charge_scale(target_model, path.at(t), i);
  if (!corrector.run(path.at(t), lam)) throw fail(t * target, "no convergence at the starting coupling");

  double dt = t;
  int streak = 0;
  VectorXcd fc, dfdgc, r(l), drdt(l), pred(l);
  MatrixXcd jc;
  while (t != 1.0) {
    const double next = std::min(1.0, t + dt);
    const Complex g = path.at(t), gn = path.at(next);

    // Tangent predictor in the charge eigenvalues, which stay O(1) along the path.
    evb_system(target_model, g, lam, fc, jc, dfdgc);
    const VectorXcd tangent = jc.partialPivLu().solve(-dfdgc);
    for (int i = 0; i < l; ++i) {
      const Complex k = charge_scale(target_model, g, i);
      r[i] = k * lam[i];
      drdt[i] = (k / g * lam[i] + k * tangent[i]) * path.slope(t);
    }
    for (int i = 0; i < l; ++i) pred[i] = (r[i] + drdt[i] * (next - t)) / charge_scale(target_model, gn, i);

    VectorXcd trial = pred;
    if (tangent.allFinite() && corrector.run(gn, trial)) {
      lam = trial;
      t = next;
      if (++streak >= h.grow_after) {
        dt = std::min(dt * h.grow, h.max_fraction);
        streak = 0;
      }
    } else {
      dt *= h.shrink;
      streak = 0;
      if (dt < h.min_fraction) throw fail(t * target, "step underflow");
    }
  }

  if (l > 0 && lam.imag().cwiseAbs().maxCoeff() > 1e-6 * (1.0 + lam.cwiseAbs().maxCoeff())) {
    throw fail(target, "path ended on a complex solution");
  }
  VectorXd lamr = lam.real();
  VectorXd f, dfdg;
  MatrixXd jac;
  // Final polish at the target coupling.
  double res = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    evb_system(target_model, target, lamr, f, jac, dfdg);
    res = f.cwiseAbs().maxCoeff();
    if (res <= 1e-3 * opts.newton_tol) break;
    const VectorXd d = jac.partialPivLu().solve(-f);
    VectorXd trial = lamr + d;
    VectorXd ft, dt;
    MatrixXd jt;
    evb_system(target_model, target, trial, ft, jt, dt);
    if (!(ft.cwiseAbs().maxCoeff() < res)) break;
    lamr = trial;
  }
  evb_system(target_model, target, lamr, f, jac, dfdg);
  res = l > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
  if (!(res <= opts.newton_tol)) throw fail(target, "residual " + fmt_sci(res) + " above tolerance");

  EigenstateRecord rec;
  rec.n = seed.count();
  rec.lambdas = LambdaSet{to_std(lamr), seed.count()};
  rec.seed_occupation = seed;
  rec.residual_norm = res;
  rec.converged = true;
  return rec;
}

SectorSolution solve_evb_sector(const ModelParams& model, int n, const SolveOptions& opts) {
  opts.validate();
  require_valid(model.with_coupling(opts.target_g.value_or(model.g)));
  const auto seeds = seed_occupations(model.size(), n);
  const int count = static_cast<int>(seeds.size());
  std::vector<std::optional<EigenstateRecord>> results(count);
  std::vector<std::optional<ContinuationFailure>> failed(count);

  auto work = [&](int s) {
    try {
      results[s] = solve_evb_seed(model, seeds[s], opts);
    } catch (const ContinuationError& e) {
      failed[s] = ContinuationFailure{seeds[s], e.last_g(), e.what()};
    } catch (const Error& e) {
      failed[s] = ContinuationFailure{seeds[s], 0.0, e.what()};
    }
  };
  const int workers = std::min(opts.threads, count);
  if (workers <= 1) {
    for (int s = 0; s < count; ++s) work(s);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int s = next++; s < count; s = next++) work(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  SectorSolution out;
  for (int s = 0; s < count; ++s) {
    if (results[s]) out.records.push_back(std::move(*results[s]));
    if (failed[s]) out.failures.push_back(std::move(*failed[s]));
  }

  const double gap = 1e6 * opts.newton_tol;
  std::vector<std::vector<double>> sorted;
  for (const auto& rec : out.records) {
    auto s = rec.lambdas.lambdas;
    std::sort(s.begin(), s.end());
    sorted.push_back(std::move(s));
  }
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      double d = 0.0;
      for (std::size_t i = 0; i < sorted[a].size(); ++i) d = std::max(d, std::abs(sorted[a][i] - sorted[b][i]));
      if (d <= gap && !sorted[a].empty()) {
        throw Error(ErrorKind::Convergence, "duplicate solution from seeds " + out.records[b].seed_occupation.bitstring() +
                                                " and " + out.records[a].seed_occupation.bitstring());
      }
    }
  }
  return out;
}

std::vector<EigenstateRecord> solve_evb_all(const ModelParams& model, int n, const SolveOptions& opts) {
  auto sol = solve_evb_sector(model, n, opts);
  if (!sol.complete()) {
    std::string msg = "continuation failed for " + std::to_string(sol.failures.size()) + " seed(s):";
    for (const auto& f : sol.failures) msg += " " + f.seed.bitstring();
    msg += "; first: " + sol.failures.front().message;
    throw Error(ErrorKind::Convergence, msg);
  }
  return std::move(sol.records);
}

LambdaSet lambdas_from_rapidities(const ModelParams& model, const SpectralSet& rapidities) {
  require_pole_free(model, rapidities.values);
  const bool closed = is_conjugation_closed(rapidities.values, 1e-7 * spectral_scale(model, rapidities.values));
  LambdaSet out;
  out.particle_number = rapidities.size();
  out.lambdas.resize(model.size());
  for (int i = 0; i < model.size(); ++i) {
    Complex sum = 0.0;
    for (const auto& v : rapidities.values) sum += 1.0 / (model.epsilons[i] - v);
    if (closed && std::abs(sum.imag()) > 1e-9 * std::max(1.0, std::abs(sum))) {
      throw Error(ErrorKind::Validation, "non-real eigenvalue-based variable from a conjugation-closed rapidity set");
    }
    out.lambdas[i] = sum.real();
  }
  return out;
}

BethePolynomial rapidities_from_lambdas(const ModelParams& model, const LambdaSet& lambdas, int n, const SolveOptions& opts) {
  const int l = model.size();
  if (lambdas.size() != l) throw Error(ErrorKind::Validation, "lambda count differs from the number of levels");
  if (n < 0 || n > l) throw Error(ErrorKind::Validation, "particle number outside [0, L]");
  BethePolynomial poly;
  poly.degree = n;
  poly.roots.role = SpectralRole::OnShell;
  if (n == 0) return poly;

  double center = 0.0;
  for (double e : model.epsilons) center += e;
  center /= l;
  double span = 0.0;
  for (double e : model.epsilons) span = std::max(span, std::abs(e - center));
  if (span == 0.0) span = model.scale();

  // P(t) = T_n(t) + sum_{k<n} c_k T_k(t) in Chebyshev form, t = (z - center) / span;
  // each level gives P'(t_i) = span * Lambda_i * P(t_i).
  MatrixXd a(l, n);
  VectorXd b(l);
  for (int i = 0; i < l; ++i) {
    const double t = (model.epsilons[i] - center) / span;
    const double sl = span * lambdas.lambdas[i];
    std::vector<double> tk(n + 1), dk(n + 1);
    tk[0] = 1.0;
    dk[0] = 0.0;
    if (n >= 1) {
      tk[1] = t;
      dk[1] = 1.0;
    }
    for (int k = 1; k < n; ++k) {
      tk[k + 1] = 2.0 * t * tk[k] - tk[k - 1];
      dk[k + 1] = 2.0 * tk[k] + 2.0 * t * dk[k] - dk[k - 1];
    }
    for (int k = 0; k < n; ++k) a(i, k) = dk[k] - sl * tk[k];
    b[i] = sl * tk[n] - dk[n];
    const double row = std::max(a.row(i).cwiseAbs().maxCoeff(), std::abs(b[i]));
    if (row > 0.0) {
      a.row(i) /= row;
      b[i] /= row;
    }
  }
  const VectorXd c = a.colPivHouseholderQr().solve(b);
  poly.fit_residual = (a * c - b).cwiseAbs().maxCoeff();
  if (!c.allFinite() || !(poly.fit_residual < 1e-6)) {
    throw Error(ErrorKind::Validation, "inconsistent lambdas: residue conditions leave residual " + fmt_sci(poly.fit_residual));
  }

  // Monomial coefficients of P, low order first.
  std::vector<std::vector<double>> cheb(n + 1, std::vector<double>(n + 1, 0.0));
  cheb[0][0] = 1.0;
  if (n >= 1) cheb[1][1] = 1.0;
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j <= k; ++j) cheb[k + 1][j + 1] += 2.0 * cheb[k][j];
    for (int j = 0; j < k; ++j) cheb[k + 1][j] -= cheb[k - 1][j];
  }
  std::vector<double> mono(cheb[n]);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j <= k; ++j) mono[j] += c[k] * cheb[k][j];
  }
  MatrixXd companion = MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < n; ++k) companion(k, n - 1) = -mono[k] / mono[n];
  const Eigen::EigenSolver<MatrixXd> eig(companion, false);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "companion eigenvalue solver failed");

  SpectralSet seed;
  seed.role = SpectralRole::OnShell;
  for (int k = 0; k < n; ++k) seed.values.push_back(center + span * Complex(eig.eigenvalues()[k]));
  try {
    poly.roots = solve_bethe_direct(model, seed, opts).roots;
  } catch (const Error& e) {
    throw Error(e.kind(),
                std::string("root polish diverged: ") + e.what());
  }
  return poly;
}

BetheSolveResult solve_bethe_direct(const ModelParams& model, const SpectralSet& seed, const SolveOptions& opts) {
  opts.validate();
  std::vector<Complex> v = seed.values;
  require_pole_free(model, v);
  const int n = static_cast<int>(v.size());
  BetheSolveResult out;
  out.roots.role = seed.role;

  // Residual norm of a trial point, +inf when it hits a pole or a collision.
  auto norm_at = [&](const std::vector<Complex>& x) {
    try {
      const double r = max_abs(residual_bethe(model, SpectralSet{x, seed.role}));
      return std::isfinite(r) ? r : INFINITY;
    } catch (const Error&) {
      return static_cast<double>(INFINITY);
    }
  };

  double res = n > 0 ? norm_at(v) : 0.0;
  if (!std::isfinite(res)) throw Error(ErrorKind::Collision, "seed rapidities coincide");
  int it = 0;
  for (; it < opts.max_iter && res > opts.newton_tol; ++it) {
    const DenseComplexMatrix jac = bethe_jacobian(model, SpectralSet{v, seed.role});
    const auto f = residual_bethe(model, SpectralSet{v, seed.role});
    ComplexVector rhs(n);
    for (int a = 0; a < n; ++a) rhs[a] = -f[a];
    const ComplexVector d = jac.partialPivLu().solve(rhs);
    if (!d.allFinite()) break;
    bool accepted = false;
    double step = 1.0;
    for (int halve = 0; halve < 30 && !accepted; ++halve, step *= 0.5) {
      std::vector<Complex> trial(v);
      for (int a = 0; a < n; ++a) trial[a] += step * d[a];
      const double tr = norm_at(trial);
      if (tr < res) {
        v = std::move(trial);
        res = tr;
        accepted = true;
      }
    }
    if (!accepted) break;
  }

  const double tol = model.tolerances.collision * spectral_scale(model, v);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (std::abs(v[a] - v[b]) <= 1e3 * tol) {
        throw Error(ErrorKind::Degenerate, "Bethe solver collapsed onto coinciding rapidities");
      }
    }
  }
  if (!(res <= opts.bethe_tol)) {
    throw Error(ErrorKind::Convergence, "Bethe solver did not converge: residual " + fmt_sci(res));
  }
  sort_canonical(v);
  out.roots.values = std::move(v);
  out.iterations = it;
  out.residual = res;
  return out;
}

ModelParams dual_model(const ModelParams& model) { return model.with_coupling(-model.g); }

LambdaSet dual_lambdas(const ModelParams& model, const LambdaSet& lambdas) {
  LambdaSet out = lambdas;
  out.particle_number = model.size() - lambdas.particle_number;
  for (int i = 0; i < model.size(); ++i) {
    out.lambdas[i] += hyperbolic(model) ? 1.0 / (model.g * model.epsilons[i]) : 2.0 / model.g;
  }
  return out;
}

void require_regular_dual(const ModelParams& model, int n) {
  if (!hyperbolic(model)) return;
  const double ginv = 1.0 / model.g;
  const double p = std::round(ginv);
  if (std::abs(ginv - p) > 1e-6) return;
  const int l = model.size();
  if ((p >= 0 && p <= l - 2 * n - 1) || (p <= -1 && p >= -n)) {
    std::ostringstream msg;
    msg << "singular coupling: g^-1 = " << static_cast<long long>(p) << " is a Read-Green point for L = " << l
        << ", N = " << n;
    throw Error(ErrorKind::Singular, msg.str());
  }
}

SpectralSet dual_rapidities(const ModelParams& model, const EigenstateRecord& record, const SolveOptions& opts) {
  if (!record.converged) throw Error(ErrorKind::Validation, "dual rapidities need a converged record");
  require_regular_dual(model, record.n);
  auto roots = rapidities_from_lambdas(dual_model(model), dual_lambdas(model, record.lambdas), model.size() - record.n, opts).roots;
  roots.role = SpectralRole::Dual;
  return roots;
}

void attach_rapidities(const ModelParams& model, EigenstateRecord& record, bool with_duals, const SolveOptions& opts) {
  record.rapidities = rapidities_from_lambdas(model, record.lambdas, record.n, opts).roots;
  if (with_duals) record.dual_rapidities = dual_rapidities(model, record, opts);
}

}  // namespace rgdet
