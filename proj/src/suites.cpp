#include "rgdet/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rgdet/errors.hpp"
#include "rgdet/inner_products.hpp"
#include "rgdet/oracle.hpp"
#include "rgdet/solvers.hpp"

namespace rgdet {

namespace {

class Tracker {
 public:
  Tracker(std::string name, double tol) { result_.name = std::move(name), result_.tolerance = tol; }

  void record(double deviation, const std::string& where) {
    if (!(deviation <= result_.worst) || std::isnan(deviation)) {
      result_.worst = std::isnan(deviation) ? INFINITY : deviation;
      result_.detail = where;
    }
  }
  void fail(const std::string& why) {
    failed_ = true;
    result_.detail = why;
  }
  PropertyResult done() {
    result_.passed = !failed_ && result_.worst <= result_.tolerance;
    return result_;
  }

 private:
  PropertyResult result_;
  bool failed_ = false;
};

ModelParams truncated(const ModelParams& model, int lmax) {
  ModelParams m = model;
  if (m.size() > lmax) m.epsilons.resize(lmax);
  return m;
}

std::vector<PropertyResult> cauchy_suite(const SuiteOptions& opts) {
  Rng rng(opts.seed);
  Tracker inverse("cauchy inverse", 1e-10), permanent("Borchardt permanent", 1e-9), explicit_det("Cauchy determinant", 1e-9),
      sylvester("mixed Sylvester identity", 1e-9), had3("Hadamard identity", 1e-8), lemma("matrix determinant lemma", 1e-8);
  std::uniform_int_distribution<int> size8(1, 8), size7(1, 7), size6(1, 6), size0(0, 6);
  for (int t = 0; t < opts.cauchy_instances; ++t) {
    const std::string where = "instance " + std::to_string(t);
    {
      const int n = size8(rng);
      const auto p = random_cauchy_pair(rng, n, n);
      const DenseComplexMatrix prod = cauchy_matrix(p) * cauchy_inverse(p);
      inverse.record(max_abs(prod - DenseComplexMatrix::Identity(n, n)), where);
      explicit_det.record(relative_deviation(cauchy_determinant(p), det_lu(cauchy_matrix(p))), where);
    }
    {
      const int n = size7(rng);
      const auto p = random_cauchy_pair(rng, n, n);
      permanent.record(relative_deviation(borchardt_permanent(p), permanent_ryser(cauchy_matrix(p))), where);
    }
    {
      const auto p = random_cauchy_pair(rng, size0(rng), size0(rng));
      sylvester.record(check_sylvester_mixed(p).deviation(), where);
    }
    {
      const int n = size6(rng);
      had3.record(check_hadamard3(random_cauchy_pair(rng, n, n)).deviation(), where);
    }
    {
      const int n = size6(rng) - 1;
      std::uniform_int_distribution<int> extra(0, 3);
      const auto p = random_cauchy_pair(rng, n + extra(rng), n);
      std::uniform_real_distribution<double> u(-3.0, 3.0);
      lemma.record(check_matrix_det_lemma(p, Complex(u(rng), u(rng))).deviation(), where);
    }
  }
  return {inverse.done(), permanent.done(), explicit_det.done(), sylvester.done(), had3.done(), lemma.done()};
}

// Runs fn for every solved sector of every prefix model up to lmax.
void for_each_sector(const ModelParams& model, const SuiteOptions& opts, bool with_duals, Tracker& failures,
                     const std::function<void(const ModelParams&, int, std::vector<EigenstateRecord>&)>& fn) {
  const ModelParams m = truncated(model, opts.lmax);
  SolveOptions so;
  so.threads = opts.threads;
  for (int n = 0; n <= m.size(); ++n) {
    try {
      auto records = solve_evb_all(m, n, so);
      for (auto& r : records) attach_rapidities(m, r, with_duals, so);
      fn(m, n, records);
    } catch (const Error& e) {
      failures.fail("N = " + std::to_string(n) + ": " + e.what());
    }
  }
}

std::vector<PropertyResult> duality_suite(const ModelParams& model, const SuiteOptions& opts) {
  Tracker state("dual state = ratio x original", 1e-9), lambdas("dual rapidities reproduce dual lambdas", 1e-8),
      residual("dual Bethe residual", 1e-8);
  const ModelParams m = truncated(model, opts.lmax);
  const bool hyp = m.kind == ModelKind::Hyperbolic;
  for_each_sector(m, opts, false, state, [&](const ModelParams& mm, int n, std::vector<EigenstateRecord>& records) {
    if (hyp && mm.size() - 2 * n <= 0) return;
    try {
      require_regular_dual(mm, n);
    } catch (const Error&) {
      return;
    }
    for (auto& r : records) {
      const std::string where = "N = " + std::to_string(n) + ", seed " + r.seed_occupation.bitstring();
      const SpectralSet dual = dual_rapidities(mm, r);
      residual.record(bethe_residual_norm(dual_model(mm), dual), where);
      const auto want = dual_lambdas(mm, r.lambdas);
      const auto got = lambdas_from_rapidities(mm, dual);
      double d = 0.0;
      for (int i = 0; i < mm.size(); ++i) d = std::max(d, std::abs(want.lambdas[i] - got.lambdas[i]));
      lambdas.record(d, where);
      const auto orig = build_bethe_state(mm, *r.rapidities);
      const auto dstate = build_bethe_state(mm, dual, true);
      const Complex c = dual_ratio(mm, r);
      double worst = 0.0;
      const double scale = std::max(orig.amplitudes.cwiseAbs().maxCoeff(), 1e-300);
      for (int k = 0; k < orig.basis.size(); ++k) {
        worst = std::max(worst, std::abs(dstate.amplitudes[k] - c * orig.amplitudes[k]) / (std::abs(c) * scale));
      }
      state.record(worst, where);
    }
  });
  return {state.done(), lambdas.done(), residual.done()};
}

std::vector<PropertyResult> orthogonality_suite(const ModelParams& model, const SuiteOptions& opts) {
  Tracker ortho("orthogonality of distinct eigenstates", 1e-9), norms("Gaudin norm = eigenvalue-based norm = oracle", 1e-9);
  for_each_sector(model, opts, false, ortho, [&](const ModelParams& m, int n, std::vector<EigenstateRecord>& records) {
    if (m.kind == ModelKind::Hyperbolic) {
      for (int k = 1; k <= m.size() - 2 * n; ++k) {
        if (std::abs(1.0 / m.g + 1.0 - k) < 1e-6) return;
      }
    }
    std::vector<double> nrm;
    for (const auto& r : records) {
      const std::string where = "N = " + std::to_string(n) + ", seed " + r.seed_occupation.bitstring();
      const double gn = gaudin_norm(m, r);
      const double en = evb_norm(m, r);
      const auto psi = build_bethe_state(m, *r.rapidities);
      const double on = exact_inner_product(psi, psi).real();
      norms.record(std::max({relative_deviation(gn, on), relative_deviation(en, on)}), where);
      nrm.push_back(on);
    }
    for (std::size_t a = 0; a < records.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        const Complex v = det_j_overlap(m, records[a], records[b].lambdas);
        ortho.record(std::abs(v) / std::sqrt(std::abs(nrm[a] * nrm[b])),
                     "N = " + std::to_string(n) + ", seeds " + records[a].seed_occupation.bitstring() + "/" +
                         records[b].seed_occupation.bitstring());
      }
    }
  });
  return {ortho.done(), norms.done()};
}

std::vector<PropertyResult> charges_suite(const ModelParams& model, const SuiteOptions& opts) {
  Tracker comm("charges commute", 1e-10), quad("quadratic charge identities", 1e-10), eig("Bethe states diagonalize charges", 1e-9);
  const ModelParams m = truncated(model, opts.lmax);
  for (int l = 1; l <= m.size(); ++l) {
    ModelParams sub = m;
    sub.epsilons.resize(l);
    for (int n = 0; n <= l; ++n) {
      const auto rep = verify_quadratic_identity(sub, n);
      const std::string where = "L = " + std::to_string(l) + ", N = " + std::to_string(n);
      comm.record(rep.worst_commutator, where);
      quad.record(rep.worst_quadratic, where);
    }
  }
  for_each_sector(m, opts, false, eig, [&](const ModelParams& mm, int n, std::vector<EigenstateRecord>& records) {
    for (const auto& r : records) {
      eig.record(verify_eigenstate(mm, r).worst, "N = " + std::to_string(n) + ", seed " + r.seed_occupation.bitstring());
    }
  });
  return {comm.done(), quad.done(), eig.done()};
}

}  // namespace

std::vector<double> random_levels(Rng& rng, int count, double lo, double hi, double min_gap) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<double> e(count);
    for (auto& x : e) x = u(rng);
    std::sort(e.begin(), e.end());
    bool ok = true;
    for (int i = 1; i < count && ok; ++i) ok = e[i] - e[i - 1] >= min_gap;
    if (ok) return e;
  }
  throw Error(ErrorKind::Validation, "could not draw separated levels");
}

std::vector<Complex> random_points(Rng& rng, int count, double radius, double min_gap, const std::vector<Complex>& avoid) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Complex> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 100000) throw Error(ErrorKind::Validation, "could not draw separated points");
    const Complex z(u(rng), u(rng));
    bool ok = true;
    for (const auto& a : out) ok = ok && std::abs(z - a) >= min_gap;
    for (const auto& a : avoid) ok = ok && std::abs(z - a) >= min_gap;
    if (ok) out.push_back(z);
  }
  return out;
}

CauchyPair random_cauchy_pair(Rng& rng, int m, int n, double min_gap) {
  CauchyPair p;
  p.eps = random_points(rng, m, 2.0, min_gap, {Complex(0.0, 0.0)});
  auto avoid = p.eps;
  avoid.emplace_back(0.0, 0.0);
  p.xs = random_points(rng, n, 2.0, min_gap, avoid);
  return p;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cauchy", "duality", "orthogonality", "charges", "all"};
  return names;
}

std::vector<PropertyResult> run_suite(const std::string& suite, const ModelParams& model, const SuiteOptions& opts) {
  require_valid(model);
  if (opts.lmax < 1) throw Error(ErrorKind::Validation, "lmax must be at least 1");
  std::vector<PropertyResult> out;
  auto append = [&](std::vector<PropertyResult> part) { out.insert(out.end(), part.begin(), part.end()); };
  const bool all = suite == "all";
  if (!all && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw Error(ErrorKind::Validation, "unknown suite '" + suite + "'");
  }
  if (all || suite == "cauchy") append(cauchy_suite(opts));
  if (all || suite == "duality") append(duality_suite(model, opts));
  if (all || suite == "orthogonality") append(orthogonality_suite(model, opts));
  if (all || suite == "charges") append(charges_suite(model, opts));
  return out;
}

}  // namespace rgdet
