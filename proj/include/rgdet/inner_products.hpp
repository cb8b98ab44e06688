#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rgdet/linalg.hpp"
#include "rgdet/model.hpp"

namespace rgdet {

enum class OverlapMethod { Slavnov, DetJ, DetK, Oracle };

const char* to_string(OverlapMethod method);
// Accepts "slavnov", "detj", "detk", "oracle".
OverlapMethod overlap_method_from_string(const std::string& name);

// A determinant formula split into its scalar prefactor and determinant.
struct FormulaEvaluation {
  Complex value;
  ScaledProduct prefactor;
  LogDet det;
  double rcond = 1.0;
  // Human-readable prefactor form, e.g. "(-1)^N (g/2)^(L-2N)".
  std::string prefactor_form;
};

// <v|w> for on-shell v and arbitrary w. Throws Collision when some v_a and
// w_b coincide, Validation when v misses the Bethe equations by more than 1e-9.
FormulaEvaluation slavnov_evaluation(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell);
Complex slavnov(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell);

// Lambda_i(w) = sum_b 1/(eps_i - w_b), complex for arbitrary w.
std::vector<Complex> complex_lambdas(const ModelParams& model, const SpectralSet& values);

// L x L eigenvalue-based matrix J_L(Lambda(v), Lambda(w)).
DenseComplexMatrix j_l_matrix(const ModelParams& model, const std::vector<Complex>& bra, const std::vector<Complex>& ket);

// <v|w> from the eigenvalue-based variables of both sides. The hyperbolic
// prefactor needs prod v_a, taken from the bra rapidities.
FormulaEvaluation det_j_evaluation(const ModelParams& model, const EigenstateRecord& bra, const std::vector<Complex>& ket,
                                   int ket_n);
FormulaEvaluation det_j_evaluation(const ModelParams& model, const EigenstateRecord& bra, const LambdaSet& ket);
// Ket given by rapidities; Lambda(w) is formed in extended precision.
FormulaEvaluation det_j_evaluation(const ModelParams& model, const EigenstateRecord& bra, const SpectralSet& ket);
Complex det_j_overlap(const ModelParams& model, const EigenstateRecord& bra, const LambdaSet& ket);

// 2N x 2N matrix on {v} U {w}.
DenseComplexMatrix k_matrix(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell);
// Refuses coinciding entries; norms go through gaudin_norm.
FormulaEvaluation det_k_evaluation(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell);
Complex det_k_overlap(const ModelParams& model, const SpectralSet& on_shell, const SpectralSet& off_shell);

// N x N Gaudin matrix; gaudin_jacobian_scale() times the Bethe Jacobian.
DenseComplexMatrix gaudin_matrix(const ModelParams& model, const SpectralSet& rapidities);
double gaudin_jacobian_scale(const ModelParams& model);
// L x L matrix J_L(Lambda, Lambda); the transpose of the eigenvalue-based
// Jacobian (taken w.r.t. Lambda_i, or eps_i Lambda_i for the hyperbolic model).
DenseComplexMatrix evb_gaudin_matrix(const ModelParams& model, const LambdaSet& lambdas);

// <v|v> through the N x N Gaudin determinant.
FormulaEvaluation gaudin_norm_evaluation(const ModelParams& model, const EigenstateRecord& record);
double gaudin_norm(const ModelParams& model, const EigenstateRecord& record);
// <v|v> through the L x L eigenvalue-based determinant.
FormulaEvaluation evb_norm_evaluation(const ModelParams& model, const EigenstateRecord& record);
double evb_norm(const ModelParams& model, const EigenstateRecord& record);

struct IzerginBorchardtResult {
  Complex value;                 // Izergin-Borchardt determinant route
  Complex permanent;             // Borchardt permanent route
  std::optional<Complex> j_route;  // det J_N, on-shell rapidities only
  std::optional<Complex> k_route;  // det K_N, on-shell rapidities only
  double max_deviation = 0.0;    // worst relative disagreement among routes
};

// <i_1 ... i_N | v> for a product state.
IzerginBorchardtResult izergin_borchardt(const ModelParams& model, const OccupationState& occ, const SpectralSet& rapidities);

// c with |dual> = c |original>. Hyperbolic: raises OutOfValidity for
// L - 2N <= 0 and Singular on a vanishing prefactor.
Complex dual_ratio(const ModelParams& model, const EigenstateRecord& record);

using OverlapKet = std::variant<SpectralSet, LambdaSet, OccupationState>;

struct OverlapRequest {
  ModelParams model;
  EigenstateRecord bra;
  OverlapKet ket;
  OverlapMethod method = OverlapMethod::Slavnov;
};

struct PrefactorBreakdown {
  Complex phase{1.0, 0.0};
  double log_magnitude = 0.0;
  std::string form;
};

struct OverlapResult {
  Complex value;
  OverlapMethod method = OverlapMethod::Slavnov;
  double condition_estimate = 1.0;
  PrefactorBreakdown prefactor;
};

// <bra|ket>. A ket equal to the bra rapidities is a norm and goes through
// the Gaudin determinant for Slavnov and DetK. Product-state kets use the
// Izergin-Borchardt determinant for Slavnov, J_N for DetJ and K_N for DetK.
OverlapResult overlap(const OverlapRequest& request);

}  // namespace rgdet
