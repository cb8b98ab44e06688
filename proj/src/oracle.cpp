#include "rgdet/oracle.hpp"

#include <bit>
#include <cmath>

#include "rgdet/cauchy.hpp"
#include "rgdet/document.hpp"
#include "rgdet/errors.hpp"

namespace rgdet {

namespace {

constexpr int kRyserLimit = 6;

std::vector<int> occupied_of(std::uint64_t mask, int levels) {
  std::vector<int> out;
  for (int i = 0; i < levels; ++i) {
    if (mask >> i & 1u) out.push_back(i);
  }
  return out;
}

// Permanent of [w_i / (eps_i - v_a)] over the given levels.
Complex weighted_permanent(const ModelParams& model, const std::vector<int>& levels, const std::vector<Complex>& v) {
  const int n = static_cast<int>(levels.size());
  if (n == 0) return 1.0;
  Complex weight = 1.0;
  for (int i : levels) weight *= level_weight(model, i);
  if (n <= kRyserLimit) {
    DenseComplexMatrix m(n, n);
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) m(b, a) = 1.0 / (model.epsilons[levels[b]] - v[a]);
    }
    return weight * permanent_ryser(m);
  }
  CauchyPair pair;
  for (int i : levels) pair.eps.emplace_back(model.epsilons[i]);
  pair.xs = v;
  return weight * borchardt_permanent(pair);
}

}  // namespace

SectorBasis::SectorBasis(int levels, int n) : levels_(levels), n_(n) {
  if (levels < 0 || levels > 62 || n < 0 || n > levels) {
    throw Error(ErrorKind::Validation, "invalid sector L = " + std::to_string(levels) + ", N = " + std::to_string(n));
  }
  std::vector<int> idx(n);
  for (int k = 0; k < n; ++k) idx[k] = k;
  while (true) {
    std::uint64_t mask = 0;
    for (int i : idx) mask |= std::uint64_t{1} << i;
    index_.emplace(mask, static_cast<int>(states_.size()));
    states_.push_back(mask);
    int k = n - 1;
    while (k >= 0 && idx[k] == levels - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int m = k + 1; m < n; ++m) idx[m] = idx[m - 1] + 1;
  }
}

int SectorBasis::index_of(std::uint64_t mask) const {
  const auto it = index_.find(mask);
  return it == index_.end() ? -1 : it->second;
}

Complex permanent_ryser(const DenseComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw Error(ErrorKind::Validation, "permanent of a non-square matrix");
  if (n == 0) return 1.0;
  ComplexVector row_sums = ComplexVector::Zero(n);
  Complex total = 0.0;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const int col = std::countr_zero(k);
    const std::uint64_t next = k ^ (k >> 1);
    if (next & (std::uint64_t{1} << col)) {
      row_sums += m.col(col);
    } else {
      row_sums -= m.col(col);
    }
    gray = next;
    Complex prod = 1.0;
    for (int r = 0; r < n; ++r) prod *= row_sums[r];
    total += (std::popcount(gray) % 2 == 1 ? -1.0 : 1.0) * prod;
  }
  return (n % 2 == 1 ? -1.0 : 1.0) * total;
}

SectorAmplitudes build_bethe_state(const ModelParams& model, const SpectralSet& rapidities, bool dual) {
  const int l = model.size();
  const int m = rapidities.size();
  if (m > l) throw Error(ErrorKind::Validation, "more rapidities than levels");
  for (const auto& v : rapidities.values) {
    for (int i = 0; i < l; ++i) {
      if (std::abs(v - model.epsilons[i]) <= model.tolerances.collision * model.scale()) {
        throw Error(ErrorKind::Pole, "rapidity coincides with level " + std::to_string(i));
      }
    }
  }
  SectorAmplitudes out{SectorBasis(l, dual ? l - m : m), {}};
  out.amplitudes.resize(out.basis.size());
  const std::uint64_t full = l == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << l) - 1;
  for (int k = 0; k < out.basis.size(); ++k) {
    const std::uint64_t mask = out.basis.state(k);
    const auto levels = occupied_of(dual ? (full & ~mask) : mask, l);
    out.amplitudes[k] = weighted_permanent(model, levels, rapidities.values);
  }
  return out;
}

SectorAmplitudes build_product_state(const OccupationState& occ) {
  SectorAmplitudes out{SectorBasis(occ.levels(), occ.count()), {}};
  out.amplitudes = ComplexVector::Zero(out.basis.size());
  out.amplitudes[out.basis.index_of(occ.mask())] = 1.0;
  return out;
}

SectorOperator conserved_charge(const ModelParams& model, int level, int n) {
  const int l = model.size();
  if (level < 0 || level >= l) throw Error(ErrorKind::Validation, "charge index out of range");
  const SectorBasis basis(l, n);
  const auto& e = model.epsilons;
  const bool hyp = model.kind == ModelKind::Hyperbolic;
  const int i = level;
  SectorOperator r = SectorOperator::Zero(basis.size(), basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    const std::uint64_t s = basis.state(k);
    const bool up_i = s >> i & 1u;
    double diag = up_i ? 1.0 : 0.0;
    for (int j = 0; j < l; ++j) {
      if (j == i) continue;
      const double inv = model.g / (e[i] - e[j]);
      const bool up_j = s >> j & 1u;
      // S^z_i S^z_j - 1/4 is 0 for aligned spins and -1/2 otherwise.
      const double ising = up_i == up_j ? 0.0 : -0.5;
      diag += inv * (hyp ? 2.0 * e[i] : 1.0) * ising;
      if (up_i != up_j) {
        const std::uint64_t flipped = s ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j);
        r(basis.index_of(flipped), k) += inv * (hyp ? std::sqrt(e[i] * e[j]) : 0.5);
      }
    }
    r(k, k) += diag;
  }
  return r;
}

Complex exact_inner_product(const SectorAmplitudes& a, const SectorAmplitudes& b) {
  if (!(a.basis == b.basis)) throw Error(ErrorKind::Validation, "inner product of states in different sectors");
  return a.amplitudes.dot(b.amplitudes);
}

EigenstateReport verify_eigenstate(const ModelParams& model, const EigenstateRecord& record, double tol) {
  if (!record.rapidities) throw Error(ErrorKind::Validation, "eigenstate check needs rapidities");
  const auto psi = build_bethe_state(model, *record.rapidities);
  const auto r = charge_eigenvalues(model, record.lambdas);
  EigenstateReport report;
  const double norm = psi.amplitudes.norm();
  for (int i = 0; i < model.size(); ++i) {
    const ComplexVector diff = conserved_charge(model, i, record.n).cast<Complex>() * psi.amplitudes - r[i] * psi.amplitudes;
    const double rel = norm > 0.0 ? diff.norm() / norm : diff.norm();
    report.relative_residuals.push_back(rel);
    report.worst = std::max(report.worst, rel);
  }
  report.passed = report.worst < tol;
  return report;
}

OperatorReport verify_quadratic_identity(const ModelParams& model, int n, double tol) {
  const int l = model.size();
  std::vector<SectorOperator> r;
  for (int i = 0; i < l; ++i) r.push_back(conserved_charge(model, i, n));
  OperatorReport report;
  for (int i = 0; i < l; ++i) {
    for (int j = i + 1; j < l; ++j) {
      const SectorOperator c = r[i] * r[j] - r[j] * r[i];
      report.worst_commutator = std::max(report.worst_commutator, c.cwiseAbs().maxCoeff());
    }
    SectorOperator q = r[i] * r[i] - r[i];
    const double k = model.g * (model.kind == ModelKind::Hyperbolic ? model.epsilons[i] : 0.5);
    for (int j = 0; j < l; ++j) {
      if (j != i) q += k * (r[i] - r[j]) / (model.epsilons[i] - model.epsilons[j]);
    }
    if (q.size() > 0) report.worst_quadratic = std::max(report.worst_quadratic, q.cwiseAbs().maxCoeff());
  }
  report.passed = report.worst_commutator < tol && report.worst_quadratic < tol;
  return report;
}

std::string dump_amplitudes(const SectorAmplitudes& state) {
  std::string out;
  for (int k = 0; k < state.basis.size(); ++k) {
    const auto occ = OccupationState::from_mask(state.basis.state(k), state.basis.levels());
    out += occ.bitstring() + " " + format_double(state.amplitudes[k].real()) + " " + format_double(state.amplitudes[k].imag()) + "\n";
  }
  return out;
}

}  // namespace rgdet
