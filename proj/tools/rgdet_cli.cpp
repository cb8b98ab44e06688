// Command-line front end: solve spectra, evaluate overlaps, run the
// verification suites and the Cauchy identities.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rgdet/cauchy.hpp"
#include "rgdet/document.hpp"
#include "rgdet/errors.hpp"
#include "rgdet/inner_products.hpp"
#include "rgdet/solvers.hpp"
#include "rgdet/suites.hpp"

namespace {

using namespace rgdet;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kCheckFailed = 1, kIo = 2, kValidation = 3, kNumerical = 4 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Parse: return kIo;
    case ErrorKind::Validation:
    case ErrorKind::OutOfValidity: return kValidation;
    default: return kNumerical;
  }
}

struct Common {
  std::string model_path;
  std::string out_path;
  std::string format = "json";
  double tol = 1e-12;
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool needs_model) {
  auto* m = cmd->add_option("--model", c.model_path, "Model document (JSON)");
  if (needs_model) m->required();
  cmd->add_option("--out", c.out_path, "Output file (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--tol", c.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Seed for randomized fixtures");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
}

void emit(const Common& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(c.out_path, text);
  }
}

SolveOptions solve_options(const Common& c) {
  SolveOptions o;
  o.newton_tol = c.tol;
  o.threads = c.threads;
  return o;
}

// Comma-separated complex values, each "re" or "re:im".
std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    try {
      std::size_t used = 0;
      const double re = std::stod(item.substr(0, colon), &used);
      double im = 0.0;
      if (colon != std::string::npos) im = std::stod(item.substr(colon + 1));
      out.emplace_back(re, im);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Validation, "cannot parse complex value '" + item + "'");
    }
  }
  return out;
}

std::string fmt(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

// ---------------------------------------------------------------- solve

struct SolveArgs {
  Common common;
  int n = -1;
  std::string method = "evb";
  bool with_rapidities = false;
  bool duals = false;
};

int run_solve(const SolveArgs& a) {
  const ModelParams model = load_model(a.common.model_path);
  require_valid(model);
  if (a.n < 0 || a.n > model.size()) {
    throw Error(ErrorKind::Validation, "--n " + std::to_string(a.n) + " outside [0, " + std::to_string(model.size()) + "]");
  }
  const SolveOptions opts = solve_options(a.common);
  if (a.duals) require_regular_dual(model, a.n);

  SectorSolution sol = solve_evb_sector(model, a.n, opts);
  const bool rapidities = a.with_rapidities || a.duals || a.method == "bethe";
  for (auto& r : sol.records) {
    if (!rapidities) continue;
    attach_rapidities(model, r, a.duals, opts);
    if (a.method == "bethe") {
      // Refine directly on the Bethe equations and rebuild Lambda from the roots.
      const auto refined = solve_bethe_direct(model, *r.rapidities, opts);
      r.rapidities = refined.roots;
      r.lambdas = lambdas_from_rapidities(model, refined.roots);
      r.residual_norm = evb_residual_norm(model, r.lambdas);
    }
  }
  emit(a.common, a.common.format == "csv" ? states_to_csv(sol.records) : serialize_states(sol.records));

  if (!sol.complete()) {
    std::string seeds;
    for (const auto& f : sol.failures) seeds += (seeds.empty() ? "" : " ") + f.seed.bitstring();
    std::cerr << "failed seeds: " << seeds << "\n";
    for (const auto& f : sol.failures) std::cerr << "  " << f.message << "\n";
    return kNumerical;
  }
  return kOk;
}

// ---------------------------------------------------------------- overlap

struct OverlapArgs {
  Common common;
  std::string bra;
  std::string ket;
  std::string ket_rapidities;
  std::string ket_occ;
  std::string method = "all";
};

// "FILE#idx" -> record idx of FILE.
EigenstateRecord load_record(const std::string& ref) {
  const auto hash = ref.rfind('#');
  if (hash == std::string::npos) throw Error(ErrorKind::Validation, "record reference '" + ref + "' must be FILE#index");
  int idx = -1;
  try {
    idx = std::stoi(ref.substr(hash + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::Validation, "bad record index in '" + ref + "'");
  }
  const auto records = load_states(ref.substr(0, hash));
  if (idx < 0 || idx >= static_cast<int>(records.size())) {
    throw Error(ErrorKind::Io, "record index " + std::to_string(idx) + " out of range in '" + ref + "' (" +
                                   std::to_string(records.size()) + " records)");
  }
  return records[idx];
}

int run_overlap(const OverlapArgs& a) {
  const ModelParams model = load_model(a.common.model_path);
  require_valid(model);
  const SolveOptions opts = solve_options(a.common);
  const int given = !a.ket.empty() + !a.ket_rapidities.empty() + !a.ket_occ.empty();
  if (given != 1) throw Error(ErrorKind::Validation, "give exactly one of --ket, --ket-rapidities, --ket-occ");

  EigenstateRecord bra = load_record(a.bra);
  if (!bra.rapidities) attach_rapidities(model, bra, false, opts);

  OverlapKet ket;
  std::string ket_id;
  if (!a.ket.empty()) {
    EigenstateRecord k = load_record(a.ket);
    if (!k.rapidities) attach_rapidities(model, k, false, opts);
    ket = *k.rapidities;
    ket_id = a.ket;
  } else if (!a.ket_rapidities.empty()) {
    ket = SpectralSet{parse_complex_list(a.ket_rapidities), SpectralRole::OffShell};
    ket_id = "rapidities";
  } else {
    ket = OccupationState::from_bitstring(a.ket_occ);
    ket_id = "occ:" + a.ket_occ;
  }

  std::vector<OverlapMethod> methods;
  if (a.method == "all") {
    methods = {OverlapMethod::Slavnov, OverlapMethod::DetJ, OverlapMethod::DetK, OverlapMethod::Oracle};
  } else {
    methods = {overlap_method_from_string(a.method)};
  }

  std::vector<OverlapResult> results;
  for (auto m : methods) results.push_back(overlap(OverlapRequest{model, bra, ket, m}));
  double deviation = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) deviation = std::max(deviation, relative_deviation(results[i].value, results[j].value));
  }

  std::string text;
  if (a.common.format == "csv") {
    text = "bra_id,ket_id,method,value_re,value_im,rcond\n";
    for (const auto& r : results) {
      text += a.bra + "," + ket_id + "," + to_string(r.method) + "," + fmt(r.value) + "," + format_double(r.condition_estimate) + "\n";
    }
    if (results.size() > 1) text += "# max_deviation," + format_double(deviation) + "\n";
  } else {
    ordered_json doc;
    doc["results"] = ordered_json::array();
    for (const auto& r : results) {
      doc["results"].push_back({{"bra_id", a.bra},
                                {"ket_id", ket_id},
                                {"method", to_string(r.method)},
                                {"value_re", r.value.real()},
                                {"value_im", r.value.imag()},
                                {"rcond", r.condition_estimate},
                                {"prefactor", r.prefactor.form}});
    }
    if (results.size() > 1) doc["max_deviation"] = deviation;
    text = doc.dump(2) + "\n";
  }
  emit(a.common, text);
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::string suite = "all";
  int lmax = 6;
  int instances = 200;
};

int run_verify(const VerifyArgs& a) {
  const ModelParams model = load_model(a.common.model_path);
  SuiteOptions so;
  so.lmax = a.lmax;
  so.seed = a.common.seed;
  so.cauchy_instances = a.instances;
  so.threads = a.common.threads;
  const auto results = run_suite(a.suite, model, so);
  std::string text;
  bool ok = true;
  if (a.common.format == "csv") {
    text = "property,passed,worst,tolerance,detail\n";
    for (const auto& r : results) {
      text += "\"" + r.name + "\"," + (r.passed ? "1" : "0") + "," + format_double(r.worst) + "," + format_double(r.tolerance) +
              ",\"" + r.detail + "\"\n";
    }
  } else {
    for (const auto& r : results) {
      text += std::string(r.passed ? "PASS" : "FAIL") + "  " + r.name + "  worst=" + format_double(r.worst) +
              "  tol=" + format_double(r.tolerance) + (r.detail.empty() ? "" : "  (" + r.detail + ")") + "\n";
    }
  }
  for (const auto& r : results) ok = ok && r.passed;
  emit(a.common, text);
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- identities

struct IdentityArgs {
  Common common;
  std::string eps;
  std::string xs;
  std::string G = "3";
  int m = 4;
  int n = 3;
};

int run_identities(const IdentityArgs& a) {
  CauchyPair pair;
  if (!a.eps.empty() || !a.xs.empty()) {
    pair.eps = parse_complex_list(a.eps);
    pair.xs = parse_complex_list(a.xs);
  } else {
    if (a.m < 0 || a.n < 0) throw Error(ErrorKind::Validation, "--m and --n must be non-negative");
    Rng rng(a.common.seed);
    pair = random_cauchy_pair(rng, a.m, a.n);
  }
  const auto g = parse_complex_list(a.G);
  if (g.size() != 1) throw Error(ErrorKind::Validation, "--G takes one complex value");

  struct Row {
    std::string name;
    IdentityCheck check;
  };
  std::vector<Row> rows;
  rows.push_back({"sylvester_mixed", check_sylvester_mixed(pair)});
  if (pair.square()) {
    const DenseComplexMatrix c = cauchy_matrix(pair);
    rows.push_back({"cauchy_determinant", {cauchy_determinant(pair), det_lu(c)}});
    const auto inv = cauchy_inverse(pair);
    rows.push_back({"cauchy_inverse", {det_lu(c * inv), 1.0}});
    rows.push_back({"borchardt_permanent", {borchardt_permanent(pair), det_lu(j_eps_matrix(pair))}});
    rows.push_back({"hadamard3", check_hadamard3(pair)});
  }
  // The lemma divides by every eps and x.
  const auto nonzero = [](const std::vector<Complex>& z) { return std::none_of(z.begin(), z.end(), [](Complex c) { return c == 0.0; }); };
  if (pair.rows() >= pair.cols() && nonzero(pair.eps) && nonzero(pair.xs)) {
    rows.push_back({"matrix_det_lemma", check_matrix_det_lemma(pair, g.front())});
  }

  std::string text;
  if (a.common.format == "csv") {
    text = "identity,lhs_re,lhs_im,rhs_re,rhs_im,deviation\n";
    for (const auto& r : rows) text += r.name + "," + fmt(r.check.lhs) + "," + fmt(r.check.rhs) + "," + format_double(r.check.deviation()) + "\n";
  } else {
    ordered_json doc = ordered_json::array();
    for (const auto& r : rows) {
      doc.push_back({{"identity", r.name},
                     {"lhs_re", r.check.lhs.real()},
                     {"lhs_im", r.check.lhs.imag()},
                     {"rhs_re", r.check.rhs.real()},
                     {"rhs_im", r.check.rhs.imag()},
                     {"deviation", r.check.deviation()}});
    }
    text = doc.dump(2) + "\n";
  }
  emit(a.common, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Richardson-Gaudin solver and determinant inner products"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve all eigenstates in a particle-number sector");
  add_common(s, solve.common, true);
  s->add_option("--n", solve.n, "Particle number N")->required();
  s->add_option("--method", solve.method, "evb, or bethe to refine on the Bethe equations")->check(CLI::IsMember({"evb", "bethe"}));
  s->add_flag("--with-rapidities", solve.with_rapidities, "Attach rapidities");
  s->add_flag("--duals", solve.duals, "Attach dual rapidities");

  OverlapArgs ov;
  auto* o = app.add_subcommand("overlap", "Inner product of a solved bra with a ket");
  add_common(o, ov.common, true);
  o->add_option("--bra", ov.bra, "Bra record FILE#index")->required();
  o->add_option("--ket", ov.ket, "Ket record FILE#index");
  o->add_option("--ket-rapidities", ov.ket_rapidities, "Ket rapidities re[:im],...");
  o->add_option("--ket-occ", ov.ket_occ, "Ket product state as a bitstring");
  o->add_option("--method", ov.method, "Formula")->check(CLI::IsMember({"all", "slavnov", "detj", "detk", "oracle"}));

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Run a verification suite");
  add_common(v, ver.common, true);
  v->add_option("--suite", ver.suite, "Suite")->check(CLI::IsMember(suite_names()));
  v->add_option("--lmax", ver.lmax, "Largest system size")->check(CLI::PositiveNumber);
  v->add_option("--instances", ver.instances, "Random Cauchy pairs per identity")->check(CLI::PositiveNumber);

  IdentityArgs id;
  auto* i = app.add_subcommand("identities", "Evaluate both sides of the Cauchy identities");
  add_common(i, id.common, false);
  i->add_option("--eps", id.eps, "eps values re[:im],...");
  i->add_option("--xs", id.xs, "x values re[:im],...");
  i->add_option("--G", id.G, "Parameter of the matrix determinant lemma");
  i->add_option("--m", id.m, "Random pair: number of eps values");
  i->add_option("--n", id.n, "Random pair: number of x values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*s) return run_solve(solve);
    if (*o) return run_overlap(ov);
    if (*v) return run_verify(ver);
    if (*i) return run_identities(id);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
