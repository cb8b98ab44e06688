#include <doctest.h>

#include <random>

#include "rgdet/errors.hpp"
#include "rgdet/inner_products.hpp"
#include "rgdet/oracle.hpp"
#include "rgdet/solvers.hpp"
#include "rgdet/suites.hpp"
#include "support.hpp"

using namespace rgdet;
using testing::make_model;

namespace {

std::vector<EigenstateRecord> solved(const ModelParams& m, int n) {
  auto recs = solve_evb_all(m, n);
  for (auto& r : recs) attach_rapidities(m, r, false);
  return recs;
}

// One-level fixture: v = eps + g/2.
struct Single {
  double g = 0.6, e = 1.3;
  ModelParams model = make_model(ModelKind::Rational, g, {e});
  EigenstateRecord rec = solved(model, 1)[0];
  Complex v = rec.rapidities->values[0];
};

}  // namespace

TEST_CASE("single-level overlaps") {
  Single s;
  CHECK(std::abs(s.v - (s.e + s.g / 2)) < 1e-12);
  const Complex w(0.2, 0.5);
  const SpectralSet ket{{w}, SpectralRole::OffShell};
  const Complex direct = 1.0 / ((s.e - s.v) * (s.e - w));
  CHECK(relative_deviation(slavnov(s.model, *s.rec.rapidities, ket), direct) < 1e-12);
  CHECK(relative_deviation(det_k_overlap(s.model, *s.rec.rapidities, ket), direct) < 1e-12);
  CHECK(relative_deviation(det_j_evaluation(s.model, s.rec, complex_lambdas(s.model, ket), 1).value, direct) < 1e-12);
}

TEST_CASE("single-level norms") {
  Single s;
  const double expected = 4.0 / (s.g * s.g);
  CHECK(gaudin_norm(s.model, s.rec) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(evb_norm(s.model, s.rec) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(det_j_overlap(s.model, s.rec, s.rec.lambdas).real() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("vacuum overlaps are one") {
  const auto m = make_model(ModelKind::Rational, 0.8, {0.5, 1.5, 2.5});
  const auto vac = solved(m, 0)[0];
  CHECK(std::abs(det_j_overlap(m, vac, vac.lambdas) - 1.0) < 1e-12);
  CHECK(det_k_overlap(m, SpectralSet{}, SpectralSet{}) == Complex(1.0));
  CHECK(gaudin_norm(m, vac) == 1.0);
}

TEST_CASE("detk refuses coinciding rapidities") {
  Single s;
  try {
    det_k_overlap(s.model, *s.rec.rapidities, *s.rec.rapidities);
    FAIL("expected a collision error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Collision);
  }
}

TEST_CASE("slavnov approaches the Gaudin norm") {
  const auto m = make_model(ModelKind::Rational, 0.7, {0.4, 1.2, 2.1, 2.9});
  const auto rec = solved(m, 2)[2];
  const auto& v = rec.rapidities->values;
  auto at = [&](double h) {
    SpectralSet w{{v[0] * (1.0 + h), v[1] * (1.0 + h)}, SpectralRole::OffShell};
    return slavnov(m, *rec.rapidities, w);
  };
  // Richardson extrapolation of a first-order approach.
  const Complex limit = 2.0 * at(1e-6) - at(2e-6);
  CHECK(relative_deviation(limit, gaudin_norm(m, rec)) < 1e-8);
}

TEST_CASE("property: cross-method agreement and permutation invariance") {
  Rng rng(99);
  for (auto kind : {ModelKind::Rational, ModelKind::Hyperbolic}) {
    const auto eps = random_levels(rng, 5, 0.5, 2.5, 0.1);
    const auto m = make_model(kind, 0.45, eps);
    for (int n = 1; n <= 3; ++n) {
      for (const auto& rec : solved(m, n)) {
        auto ws = random_points(rng, n, 2.0, 0.2, std::vector<Complex>(eps.begin(), eps.end()));
        for (auto& w : ws) w += 1.5;
        const SpectralSet ket{ws, SpectralRole::OffShell};
        const auto bra_state = build_bethe_state(m, *rec.rapidities);
        const Complex oracle = exact_inner_product(bra_state, build_bethe_state(m, ket));
        const double scale = std::sqrt(std::abs(exact_inner_product(bra_state, bra_state)) *
                                       std::abs(exact_inner_product(build_bethe_state(m, ket), build_bethe_state(m, ket))));
        const Complex s = slavnov(m, *rec.rapidities, ket);
        const Complex k = det_k_overlap(m, *rec.rapidities, ket);
        const Complex j = det_j_evaluation(m, rec, ket).value;
        CHECK(std::abs(s - oracle) <= 1e-9 * (std::abs(oracle) + scale));
        CHECK(std::abs(k - oracle) <= 1e-9 * (std::abs(oracle) + scale));
        CHECK(std::abs(j - oracle) <= 1e-9 * (std::abs(oracle) + scale));

        auto shuffled_w = ws;
        std::reverse(shuffled_w.begin(), shuffled_w.end());
        auto shuffled_v = *rec.rapidities;
        std::reverse(shuffled_v.values.begin(), shuffled_v.values.end());
        const SpectralSet ket2{shuffled_w, SpectralRole::OffShell};
        CHECK(std::abs(slavnov(m, shuffled_v, ket2) - s) <= 1e-12 * std::max(1.0, std::abs(s)) + 1e-11 * scale);
        CHECK(std::abs(det_k_overlap(m, shuffled_v, ket2) - k) <= 1e-12 * std::max(1.0, std::abs(k)) + 1e-11 * scale);
      }
    }
  }
}

TEST_CASE("hyperbolic detj for L < 2N") {
  const auto m = make_model(ModelKind::Hyperbolic, 0.7, {0.6, 1.0, 1.5, 2.2});
  for (int n : {3, 4}) {
    for (const auto& rec : solved(m, n)) {
      const auto psi = build_bethe_state(m, *rec.rapidities);
      CHECK(relative_deviation(evb_norm(m, rec), exact_inner_product(psi, psi).real()) < 1e-9);
    }
  }
}

TEST_CASE("hyperbolic detj without rapidities and at singular couplings") {
  const auto m = make_model(ModelKind::Hyperbolic, 0.7, {0.6, 1.0, 1.5, 2.2});
  auto rec = solve_evb_all(m, 1)[0];
  CHECK_THROWS_AS(det_j_overlap(m, rec, rec.lambdas), Error);
  // g^-1 = 2: the factor g^-1 + 1 - k vanishes at k = 3.
  const auto rg = m.with_coupling(0.5);
  auto r2 = solved(rg, 0)[0];
  try {
    det_j_overlap(rg, r2, r2.lambdas);
    FAIL("expected a singular prefactor");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Singular);
    CHECK(std::string(e.what()).find("k = 3") != std::string::npos);
  }
}

TEST_CASE("Izergin-Borchardt") {
  const auto m = make_model(ModelKind::Rational, 0.5, {0.3, 1.1, 1.8});
  const SpectralSet one{{Complex(0.7, 0.2)}, SpectralRole::OffShell};
  const auto r = izergin_borchardt(m, OccupationState({1}, 3), one);
  CHECK(std::abs(r.value - 1.0 / (1.1 - one.values[0])) < 1e-14);
  CHECK_FALSE(r.j_route.has_value());

  const SpectralSet three{{Complex(0.7, 0.2), Complex(2.5, 0), Complex(-0.4, 0.1)}, SpectralRole::OffShell};
  CauchyPair pair{{0.3, 1.1, 1.8}, three.values};
  const auto full = izergin_borchardt(m, OccupationState({0, 1, 2}, 3), three);
  CHECK(relative_deviation(full.value, borchardt_permanent(pair)) < 1e-9);

  const auto m4 = make_model(ModelKind::Hyperbolic, 0.45, {0.6, 1.1, 1.8, 2.4});
  for (const auto& rec : solved(m4, 2)) {
    const auto ib = izergin_borchardt(m4, OccupationState({1, 3}, 4), *rec.rapidities);
    REQUIRE(ib.j_route.has_value());
    CHECK(ib.max_deviation < 1e-9);
    const auto psi = build_bethe_state(m4, *rec.rapidities);
    CHECK(relative_deviation(ib.value, psi.amplitudes[psi.basis.index_of(0b1010)]) < 1e-9);
  }
}

TEST_CASE("dual ratio") {
  const auto m2 = make_model(ModelKind::Rational, 0.8, {0.4, 1.3});
  for (const auto& rec : solved(m2, 1)) CHECK(std::abs(dual_ratio(m2, rec) + 1.0) < 1e-14);

  // L = 1, N = 0: the dual rapidity obeys -1/g + 1/(2(e - v')) = 0, so the
  // dual state S^-(v')|up> equals (2/g)|down>.
  const double g = 0.8;
  const auto m1 = make_model(ModelKind::Rational, g, {1.0});
  const auto vac = solved(m1, 0)[0];
  CHECK(std::abs(dual_ratio(m1, vac) - 2.0 / g) < 1e-14);
  const auto dual = dual_rapidities(m1, vac);
  const auto d = build_bethe_state(m1, dual, true);
  CHECK(std::abs(d.amplitudes[0] - 2.0 / g) < 1e-12);

  const auto h = make_model(ModelKind::Hyperbolic, 0.7, {1, 2, 3});
  for (auto rec : solved(h, 1)) {
    const auto orig = build_bethe_state(h, *rec.rapidities);
    const auto dstate = build_bethe_state(h, dual_rapidities(h, rec), true);
    const Complex c = dual_ratio(h, rec);
    for (int k = 0; k < orig.basis.size(); ++k) CHECK(relative_deviation(dstate.amplitudes[k], c * orig.amplitudes[k]) < 1e-9);
  }
  const auto h2 = solved(h, 2)[0];
  try {
    dual_ratio(h, h2);
    FAIL("expected out-of-validity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfValidity);
  }
}

TEST_CASE("overlap dispatcher") {
  const auto m = make_model(ModelKind::Rational, 0.85, {0.2, 1.0, 1.9, 2.7});
  const auto recs = solved(m, 2);
  const SpectralSet w{{Complex(0.6, 0.3), Complex(0.6, -0.3)}, SpectralRole::OffShell};
  const auto s = overlap({m, recs[0], w, OverlapMethod::Slavnov});
  const auto k = overlap({m, recs[0], w, OverlapMethod::DetK});
  const auto o = overlap({m, recs[0], w, OverlapMethod::Oracle});
  CHECK(relative_deviation(s.value, k.value) < 1e-9);
  CHECK(relative_deviation(s.value, o.value) < 1e-9);
  CHECK(s.condition_estimate > 0.0);
  CHECK(s.condition_estimate <= 1.0);

  const auto norm = overlap({m, recs[1], *recs[1].rapidities, OverlapMethod::Slavnov});
  CHECK(relative_deviation(norm.value, gaudin_norm(m, recs[1])) < 1e-12);

  const auto j = overlap({m, recs[0], recs[0].lambdas, OverlapMethod::DetJ});
  CHECK(j.prefactor.form == "(-1)^N (g/2)^(L-2N)");
  CHECK_THROWS_AS(overlap({m, recs[0], recs[0].lambdas, OverlapMethod::Slavnov}), Error);

  const OccupationState occ({0, 2}, 4);
  const auto ib = overlap({m, recs[3], occ, OverlapMethod::Slavnov});
  const auto ibo = overlap({m, recs[3], occ, OverlapMethod::Oracle});
  CHECK(relative_deviation(ib.value, ibo.value) < 1e-9);

  auto stale = recs[0];
  stale.converged = false;
  CHECK_THROWS_AS(overlap({m, stale, w, OverlapMethod::Slavnov}), Error);
}

TEST_CASE("property: Gaudin matrices are Jacobians") {
  Rng rng(8);
  for (auto kind : {ModelKind::Rational, ModelKind::Hyperbolic}) {
    const auto m = make_model(kind, 0.55, random_levels(rng, 5, 0.5, 2.5, 0.1));
    for (const auto& rec : solved(m, 2)) {
      auto fb = [&](const std::vector<Complex>& x) { return residual_bethe(m, SpectralSet{x, SpectralRole::OffShell}); };
      const auto fd = testing::fd_jacobian_complex(fb, rec.rapidities->values, 1e-6);
      const DenseComplexMatrix scaled = gaudin_jacobian_scale(m) * fd;
      CHECK(testing::entrywise_relative(gaudin_matrix(m, *rec.rapidities), scaled, 1e-3) < 1e-5);

      // Hyperbolic derivatives are taken w.r.t. y_i = eps_i Lambda_i.
      std::vector<double> y = rec.lambdas.lambdas;
      if (kind == ModelKind::Hyperbolic) {
        for (int i = 0; i < m.size(); ++i) y[i] *= m.epsilons[i];
      }
      auto fe = [&](const std::vector<double>& x) {
        auto lam = x;
        if (kind == ModelKind::Hyperbolic) {
          for (int i = 0; i < m.size(); ++i) lam[i] /= m.epsilons[i];
        }
        return residual_evb(m, LambdaSet{lam, 2});
      };
      const Eigen::MatrixXd fdj = testing::fd_jacobian_real(fe, y, 1e-6);
      const DenseComplexMatrix want = fdj.transpose().cast<Complex>();
      CHECK(testing::entrywise_relative(evb_gaudin_matrix(m, rec.lambdas), want, 1e-3) < 1e-5);
    }
  }
}

TEST_CASE("eigenvalue-based norm survives a badly conditioned J_L") {
  const auto m = make_model(ModelKind::Hyperbolic, 0.3, {0.7699, 1.523, 1.815, 1.942, 2.051, 2.265});
  double worst_rcond = 1.0;
  for (const auto& rec : solved(m, 1)) {
    const auto st = build_bethe_state(m, *rec.rapidities);
    const double exact = exact_inner_product(st, st).real();
    const auto ev = evb_norm_evaluation(m, rec);
    worst_rcond = std::min(worst_rcond, ev.rcond);
    CHECK(std::abs(ev.value.real() - exact) / exact < 1e-11);
  }
  CHECK(worst_rcond < 1e-7);
}
