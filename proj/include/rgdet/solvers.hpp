#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rgdet/errors.hpp"
#include "rgdet/linalg.hpp"
#include "rgdet/model.hpp"

namespace rgdet {

// Adaptive step controller for the continuation in g.
struct StepControl {
  // The path runs over t in (0, 1], with g(0) = 0 and g(1) = target_g.
  // Starting t, also the first step.
  double initial_fraction = 1e-3;
  // Largest step in t.
  double max_fraction = 0.02;
  double shrink = 0.5;
  double grow = 2.0;
  int grow_after = 3;
  // Step underflow once the step in t drops below this.
  double min_fraction = 1e-12;
  // Corrector iterations per step, and the largest accepted corrector move
  // measured on the charge eigenvalues r_i.
  int corrector_iter = 20;
  double max_correction = 0.3;
  // Hyperbolic paths follow g(t) = target (t + i detour t (1 - t)).
  double detour = 0.5;
};

struct SolveOptions {
  double newton_tol = 1e-12;
  int max_iter = 200;
  StepControl homotopy;
  // Coupling to continue to; the model coupling when absent.
  std::optional<double> target_g;
  // Worker threads for solve_evb_all (1 = serial).
  int threads = 1;
  // Residual accepted from the direct Bethe solver.
  double bethe_tol = 1e-9;

  // Throws Error(Validation) for non-positive tolerances or max_iter < 1.
  void validate() const;
};

// Monic polynomial through its roots; the coefficients are not kept.
struct BethePolynomial {
  int degree = 0;
  SpectralSet roots;
  // Max-norm residual of the row-scaled least-squares coefficient system.
  double fit_residual = 0.0;
};

struct BetheSolveResult {
  SpectralSet roots;
  int iterations = 0;
  double residual = 0.0;
};

// Thrown by solve_evb_seed when the path in g cannot be followed.
class ContinuationError : public Error {
 public:
  ContinuationError(double last_g, const std::string& message) : Error(ErrorKind::Convergence, message), last_g_(last_g) {}

  double last_g() const noexcept { return last_g_; }

 private:
  double last_g_;
};

// Seed whose continuation did not reach target_g.
struct ContinuationFailure {
  OccupationState seed;
  double last_g = 0.0;
  std::string message;
};

struct SectorSolution {
  std::vector<EigenstateRecord> records;  // successful seeds, in seed order
  std::vector<ContinuationFailure> failures;

  bool complete() const { return failures.empty(); }
};

std::vector<double> residual_evb(const ModelParams& model, const LambdaSet& lambdas);
// dF_i/dLambda_j of residual_evb.
Eigen::MatrixXd evb_jacobian(const ModelParams& model, const LambdaSet& lambdas);
double evb_residual_norm(const ModelParams& model, const LambdaSet& lambdas);

std::vector<Complex> residual_bethe(const ModelParams& model, const SpectralSet& rapidities);
// dF_a/dv_b of residual_bethe.
DenseComplexMatrix bethe_jacobian(const ModelParams& model, const SpectralSet& rapidities);
double bethe_residual_norm(const ModelParams& model, const SpectralSet& rapidities);

// Occupations with N of L levels set, in lexicographic order of the sorted
// index lists.
std::vector<OccupationState> seed_occupations(int levels, int n);

// Continues the g -> 0 seed of one occupation to the target coupling.
// Throws ContinuationError on step underflow, naming the seed and last g.
EigenstateRecord solve_evb_seed(const ModelParams& model, const OccupationState& seed, const SolveOptions& opts = {});

// All C(L, N) seeds; failures are collected, not thrown. Throws
// Error(Convergence) when two seeds land on the same solution.
SectorSolution solve_evb_sector(const ModelParams& model, int n, const SolveOptions& opts = {});
// As above, but throws Error(Convergence) listing every failed seed.
std::vector<EigenstateRecord> solve_evb_all(const ModelParams& model, int n, const SolveOptions& opts = {});

// Lambda_i = sum_a 1/(eps_i - v_a).
LambdaSet lambdas_from_rapidities(const ModelParams& model, const SpectralSet& rapidities);

// Rapidities from the residue conditions P'(eps_i) = Lambda_i P(eps_i),
// then polished against residual_bethe.
BethePolynomial rapidities_from_lambdas(const ModelParams& model, const LambdaSet& lambdas, int n,
                                        const SolveOptions& opts = {});

// Newton on residual_bethe from the given seed.
BetheSolveResult solve_bethe_direct(const ModelParams& model, const SpectralSet& seed, const SolveOptions& opts = {});

// Model obeyed by the dual rapidities: the same levels at coupling -g.
ModelParams dual_model(const ModelParams& model);
LambdaSet dual_lambdas(const ModelParams& model, const LambdaSet& lambdas);
// Throws Error(Singular) when the hyperbolic g^-1 sits within 1e-6 of an
// integer p in [0, L-2N-1] or [-N, -1]. No-op for the rational model.
void require_regular_dual(const ModelParams& model, int n);
SpectralSet dual_rapidities(const ModelParams& model, const EigenstateRecord& record, const SolveOptions& opts = {});

// Solves and attaches rapidities (and dual rapidities when requested).
void attach_rapidities(const ModelParams& model, EigenstateRecord& record, bool with_duals,
                       const SolveOptions& opts = {});

}  // namespace rgdet
