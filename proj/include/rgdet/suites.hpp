#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rgdet/cauchy.hpp"
#include "rgdet/model.hpp"

namespace rgdet {

// One checked property with its measured worst-case deviation.
struct PropertyResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  int lmax = 6;
  std::uint64_t seed = 1;
  int cauchy_instances = 200;
  int threads = 1;
};

using Rng = std::mt19937_64;

// Sorted levels uniform in [lo, hi] with pairwise gaps >= min_gap.
std::vector<double> random_levels(Rng& rng, int count, double lo, double hi, double min_gap);
// Complex points in the square [-radius, radius]^2, at least min_gap apart
// from each other and from every point in avoid.
std::vector<Complex> random_points(Rng& rng, int count, double radius, double min_gap, const std::vector<Complex>& avoid = {});
// eps and xs of the given sizes, all entries mutually separated.
CauchyPair random_cauchy_pair(Rng& rng, int m, int n, double min_gap = 0.2);

// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

// Runs "cauchy", "duality", "orthogonality", "charges" or "all" against the
// model (levels beyond lmax are dropped).
std::vector<PropertyResult> run_suite(const std::string& suite, const ModelParams& model, const SuiteOptions& opts);

}  // namespace rgdet
