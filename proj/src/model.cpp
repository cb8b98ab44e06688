#include "rgdet/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgdet/errors.hpp"

namespace rgdet {

const char* to_string(ModelKind kind) {
  return kind == ModelKind::Rational ? "rational" : "hyperbolic";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "rational") return ModelKind::Rational;
  if (name == "hyperbolic") return ModelKind::Hyperbolic;
  throw Error(ErrorKind::Validation, "unknown model kind '" + name + "'");
}

const char* to_string(SpectralRole role) {
  switch (role) {
    case SpectralRole::OnShell: return "on-shell";
    case SpectralRole::Dual: return "dual";
    case SpectralRole::OffShell: return "off-shell";
  }
  return "off-shell";
}

double ModelParams::scale() const {
  double s = 0.0;
  for (double e : epsilons) s = std::max(s, std::abs(e));
  return s > 0.0 ? s : 1.0;
}

ModelParams ModelParams::with_coupling(double coupling) const {
  ModelParams copy = *this;
  copy.g = coupling;
  return copy;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

ValidationReport validate_model(const ModelParams& model) {
  ValidationReport report;
  if (model.epsilons.empty()) report.violations.push_back("at least one level required");
  if (!std::isfinite(model.g) || model.g == 0.0) report.violations.push_back("g must be finite and nonzero");
  bool finite = true;
  for (double e : model.epsilons) finite = finite && std::isfinite(e);
  if (!finite) {
    report.violations.push_back("levels must be finite");
    return report;
  }
  if (model.kind == ModelKind::Hyperbolic &&
      std::any_of(model.epsilons.begin(), model.epsilons.end(), [](double e) { return e <= 0.0; })) {
    report.violations.push_back("eps_i > 0 required for the hyperbolic model");
  }
  const double min_gap = model.tolerances.level_separation * model.scale();
  for (int i = 0; i < model.size(); ++i) {
    for (int j = i + 1; j < model.size(); ++j) {
      if (std::abs(model.epsilons[i] - model.epsilons[j]) <= min_gap) {
        std::ostringstream os;
        os << "levels too close: eps_" << i << " and eps_" << j;
        report.violations.push_back(os.str());
      }
    }
  }
  return report;
}

void require_valid(const ModelParams& model) {
  auto report = validate_model(model);
  if (!report.ok()) throw Error(ErrorKind::Validation, "invalid model: " + report.summary());
}

bool is_conjugation_closed(const std::vector<Complex>& values, double tol) {
  std::vector<bool> used(values.size(), false);
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (used[a]) continue;
    const Complex target = std::conj(values[a]);
    const double slack = tol * (1.0 + std::abs(values[a]));
    if (std::abs(values[a].imag()) <= slack) {
      used[a] = true;
      continue;
    }
    bool matched = false;
    for (std::size_t b = a + 1; b < values.size() && !matched; ++b) {
      if (!used[b] && std::abs(values[b] - target) <= slack) {
        used[a] = used[b] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

SpectralCheck check_spectral_set(const ModelParams& model, const SpectralSet& set) {
  SpectralCheck check;
  const double tol = model.tolerances.collision * model.scale();
  for (int a = 0; a < set.size(); ++a) {
    const Complex v = set.values[a];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      check.violations.push_back("non-finite value at index " + std::to_string(a));
      continue;
    }
    for (int i = 0; i < model.size(); ++i) {
      if (std::abs(v - model.epsilons[i]) <= tol) {
        check.violations.push_back("value " + std::to_string(a) + " coincides with eps_" + std::to_string(i));
      }
    }
    for (int b = a + 1; b < set.size(); ++b) {
      if (std::abs(v - set.values[b]) <= tol) check.degenerate = true;
    }
  }
  check.conjugation_closed = is_conjugation_closed(set.values, 1e-7);
  if (set.role != SpectralRole::OffShell && !check.conjugation_closed) {
    check.violations.push_back("on-shell/dual set is not closed under conjugation");
  }
  return check;
}

void sort_canonical(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

OccupationState::OccupationState(std::vector<int> occupied, int levels)
    : occupied_(std::move(occupied)), levels_(levels) {
  if (levels_ < 0 || levels_ > 63) throw Error(ErrorKind::Validation, "occupation: level count out of range");
  for (std::size_t k = 0; k < occupied_.size(); ++k) {
    if (occupied_[k] < 0 || occupied_[k] >= levels_) {
      throw Error(ErrorKind::Validation, "occupation: index " + std::to_string(occupied_[k]) + " out of range");
    }
    if (k > 0 && occupied_[k] <= occupied_[k - 1]) {
      throw Error(ErrorKind::Validation, "occupation: indices must be strictly increasing");
    }
  }
}

OccupationState OccupationState::from_mask(std::uint64_t mask, int levels) {
  std::vector<int> occ;
  for (int i = 0; i < levels; ++i) {
    if (mask & (std::uint64_t{1} << i)) occ.push_back(i);
  }
  if (levels < 64 && (mask >> levels) != 0) throw Error(ErrorKind::Validation, "occupation: mask has bits beyond L");
  return OccupationState(std::move(occ), levels);
}

OccupationState OccupationState::from_bitstring(const std::string& bits) {
  std::vector<int> occ;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      occ.push_back(static_cast<int>(i));
    } else if (bits[i] != '0') {
      throw Error(ErrorKind::Validation, "occupation: bitstring may only contain '0' and '1'");
    }
  }
  return OccupationState(std::move(occ), static_cast<int>(bits.size()));
}

bool OccupationState::contains(int level) const {
  return std::binary_search(occupied_.begin(), occupied_.end(), level);
}

std::uint64_t OccupationState::mask() const {
  std::uint64_t m = 0;
  for (int i : occupied_) m |= std::uint64_t{1} << i;
  return m;
}

std::string OccupationState::bitstring() const {
  std::string bits(static_cast<std::size_t>(levels_), '0');
  for (int i : occupied_) bits[static_cast<std::size_t>(i)] = '1';
  return bits;
}

OccupationState OccupationState::complement() const {
  std::vector<int> rest;
  for (int i = 0; i < levels_; ++i) {
    if (!contains(i)) rest.push_back(i);
  }
  return OccupationState(std::move(rest), levels_);
}

double charge_factor(const ModelParams& model, int level) {
  return model.kind == ModelKind::Rational ? 0.5 * model.g : model.g * model.epsilons[level];
}

std::vector<double> charge_eigenvalues(const ModelParams& model, const LambdaSet& lambdas) {
  std::vector<double> r(lambdas.lambdas.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = -charge_factor(model, static_cast<int>(i)) * lambdas.lambdas[i];
  }
  return r;
}

double level_weight(const ModelParams& model, int level) {
  return model.kind == ModelKind::Rational ? 1.0 : std::sqrt(model.epsilons[level]);
}

}  // namespace rgdet
