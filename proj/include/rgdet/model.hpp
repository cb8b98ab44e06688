#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rgdet {

using Complex = std::complex<double>;

enum class ModelKind { Rational, Hyperbolic };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct Tolerances {
  // Minimum level gap, relative to max |eps_i|.
  double level_separation = 1e-8;
  // Minimum distance between rapidities (and between rapidities and levels),
  // relative to the model scale.
  double collision = 1e-8;

  bool operator==(const Tolerances&) const = default;
};

// Model parameters: coupling g and the real levels eps_1..eps_L.
struct ModelParams {
  ModelKind kind = ModelKind::Rational;
  double g = 1.0;
  std::vector<double> epsilons;
  Tolerances tolerances;

  int size() const { return static_cast<int>(epsilons.size()); }
  // max |eps_i|, or 1 for an all-zero / empty level set.
  double scale() const;
  // Same levels with a different coupling.
  ModelParams with_coupling(double coupling) const;

  bool operator==(const ModelParams&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_model(const ModelParams& model);
// Throws Error(Validation) listing every violation.
void require_valid(const ModelParams& model);

enum class SpectralRole { OnShell, Dual, OffShell };

const char* to_string(SpectralRole role);

// Ordered multiset of complex parameters: rapidities, dual rapidities or
// arbitrary off-shell values.
struct SpectralSet {
  std::vector<Complex> values;
  SpectralRole role = SpectralRole::OffShell;

  int size() const { return static_cast<int>(values.size()); }

  bool operator==(const SpectralSet&) const = default;
};

struct SpectralCheck {
  bool conjugation_closed = true;
  bool degenerate = false;       // two values closer than the collision tolerance
  std::vector<std::string> violations;  // poles, non-closure for on-shell/dual sets

  bool ok() const { return violations.empty() && !degenerate; }
};

SpectralCheck check_spectral_set(const ModelParams& model, const SpectralSet& set);

bool is_conjugation_closed(const std::vector<Complex>& values, double tol);

// Sort by (real, imag); the canonical rapidity order.
void sort_canonical(std::vector<Complex>& values);

// Eigenvalue-based variables Lambda_i of one state.
struct LambdaSet {
  std::vector<double> lambdas;
  int particle_number = 0;

  int size() const { return static_cast<int>(lambdas.size()); }

  bool operator==(const LambdaSet&) const = default;
};

// Sorted, distinct occupied level indices (0-based).
class OccupationState {
 public:
  OccupationState() = default;
  // Throws Error(Validation) unless indices lie in [0, levels) and are
  // strictly increasing.
  OccupationState(std::vector<int> occupied, int levels);

  static OccupationState from_mask(std::uint64_t mask, int levels);
  // Character i is '1' when level i is occupied.
  static OccupationState from_bitstring(const std::string& bits);

  const std::vector<int>& occupied() const { return occupied_; }
  int levels() const { return levels_; }
  int count() const { return static_cast<int>(occupied_.size()); }
  bool contains(int level) const;
  std::uint64_t mask() const;
  std::string bitstring() const;
  OccupationState complement() const;

  bool operator==(const OccupationState&) const = default;

 private:
  std::vector<int> occupied_;
  int levels_ = 0;
};

// A solved eigenstate.
struct EigenstateRecord {
  int n = 0;
  LambdaSet lambdas;
  std::optional<SpectralSet> rapidities;
  std::optional<SpectralSet> dual_rapidities;
  OccupationState seed_occupation;
  double residual_norm = 0.0;
  bool converged = false;

  bool operator==(const EigenstateRecord&) const = default;
};

// Per-level factor k_i such that the charge eigenvalue is r_i = -k_i * Lambda_i:
// g/2 (rational) or g * eps_i (hyperbolic).
double charge_factor(const ModelParams& model, int level);
std::vector<double> charge_eigenvalues(const ModelParams& model, const LambdaSet& lambdas);

// Amplitude weight of level i in a raising operator: 1 or sqrt(eps_i).
double level_weight(const ModelParams& model, int level);

}  // namespace rgdet
