#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rgdet/linalg.hpp"
#include "rgdet/model.hpp"

namespace rgdet {

// Fixed-N sector of L spins-1/2. Bit i of a state is set when spin i is up.
// States are ordered lexicographically by their sorted occupied-index lists.
class SectorBasis {
 public:
  SectorBasis() = default;
  SectorBasis(int levels, int n);

  int levels() const { return levels_; }
  int n() const { return n_; }
  int size() const { return static_cast<int>(states_.size()); }
  std::uint64_t state(int k) const { return states_[k]; }
  const std::vector<std::uint64_t>& states() const { return states_; }
  // -1 when the mask is not in the sector.
  int index_of(std::uint64_t mask) const;

  bool operator==(const SectorBasis& other) const { return levels_ == other.levels_ && n_ == other.n_; }

 private:
  int levels_ = 0;
  int n_ = 0;
  std::vector<std::uint64_t> states_;
  std::unordered_map<std::uint64_t, int> index_;
};

struct SectorAmplitudes {
  SectorBasis basis;
  ComplexVector amplitudes;
};

using SectorOperator = Eigen::MatrixXd;

// Permanent by Ryser's formula with Gray-code updates.
Complex permanent_ryser(const DenseComplexMatrix& m);

// Pi_a sum_i w_i S_i^+ / (eps_i - v_a) |down...down>, w_i = 1 or sqrt(eps_i).
// With dual = true the values are dual rapidities and lowering operators act
// on |up...up>, landing in the sector with L - |v| up spins.
SectorAmplitudes build_bethe_state(const ModelParams& model, const SpectralSet& rapidities, bool dual = false);

// Product state prod_b S^+_{i_b} |down...down>.
SectorAmplitudes build_product_state(const OccupationState& occ);

// Matrix of the conserved charge R_i on the N-up sector.
SectorOperator conserved_charge(const ModelParams& model, int level, int n);

// sum_k conj(a_k) b_k. Throws Error(Validation) when the bases differ.
Complex exact_inner_product(const SectorAmplitudes& a, const SectorAmplitudes& b);

struct EigenstateReport {
  std::vector<double> relative_residuals;  // ||R_i psi - r_i psi|| / ||psi||
  double worst = 0.0;
  bool passed = false;
};

// Checks R_i |psi> = r_i |psi>, r_i = -k_i Lambda_i, for the record's rapidities.
EigenstateReport verify_eigenstate(const ModelParams& model, const EigenstateRecord& record, double tol = 1e-9);

struct OperatorReport {
  double worst_commutator = 0.0;  // max_{i<j} ||[R_i, R_j]||_max
  double worst_quadratic = 0.0;   // max_i ||R_i^2 - R_i + g k_i sum_j (R_i - R_j)/(eps_i - eps_j)||_max
  bool passed = false;
};

// Commutators and quadratic identities of all charges in sector N.
OperatorReport verify_quadratic_identity(const ModelParams& model, int n, double tol = 1e-10);

// Lines "bitstring re im", one per basis state.
std::string dump_amplitudes(const SectorAmplitudes& state);

}  // namespace rgdet
