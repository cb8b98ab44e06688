#include "rgdet/document.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rgdet/errors.hpp"

namespace rgdet {

using nlohmann::json;

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  int line = 1;
  for (std::size_t k = 0; k < byte; ++k) {
    if (text[k] == '\n') ++line;
  }
  return line;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, 0, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, 0, "missing field '" + key + "'");
  return *it;
}

double as_double(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path, 0, "expected a number");
  return value.get<double>();
}

std::vector<double> as_double_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path, 0, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t k = 0; k < value.size(); ++k) {
    out.push_back(as_double(value[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

json complex_array(const std::vector<Complex>& values) {
  json arr = json::array();
  for (const auto& z : values) arr.push_back(json::array({z.real(), z.imag()}));
  return arr;
}

std::vector<Complex> as_complex_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path, 0, "expected an array of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t k = 0; k < value.size(); ++k) {
    const std::string here = path + "[" + std::to_string(k) + "]";
    const json& pair = value[k];
    if (!pair.is_array() || pair.size() != 2) throw ParseError(here, 0, "expected [re, im]");
    out.emplace_back(as_double(pair[0], here), as_double(pair[1], here));
  }
  return out;
}

json model_json(const ModelParams& model) {
  return json{{"kind", to_string(model.kind)}, {"g", model.g}, {"epsilon", model.epsilons}};
}

ModelParams model_from_json(const json& doc, const std::string& path) {
  ModelParams model;
  const json& kind = require(doc, "kind", path);
  if (!kind.is_string()) throw ParseError(path.empty() ? "kind" : path + ".kind", 0, "expected a string");
  try {
    model.kind = model_kind_from_string(kind.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(path.empty() ? "kind" : path + ".kind", 0, e.what());
  }
  model.g = as_double(require(doc, "g", path), path.empty() ? "g" : path + ".g");
  model.epsilons = as_double_array(require(doc, "epsilon", path), path.empty() ? "epsilon" : path + ".epsilon");
  return model;
}

json record_json(const EigenstateRecord& record) {
  json out{{"n", record.n},
           {"lambda", record.lambdas.lambdas},
           {"seed_occupation", record.seed_occupation.bitstring()},
           {"residual", record.residual_norm},
           {"converged", record.converged}};
  if (record.rapidities) out["rapidities"] = complex_array(record.rapidities->values);
  if (record.dual_rapidities) out["dual_rapidities"] = complex_array(record.dual_rapidities->values);
  return out;
}

EigenstateRecord record_from_json(const json& doc, const std::string& path) {
  EigenstateRecord record;
  const json& n = require(doc, "n", path);
  if (!n.is_number_integer()) throw ParseError(path + ".n", 0, "expected an integer");
  record.n = n.get<int>();
  record.lambdas.lambdas = as_double_array(require(doc, "lambda", path), path + ".lambda");
  record.lambdas.particle_number = record.n;
  const json& seed = require(doc, "seed_occupation", path);
  if (!seed.is_string()) throw ParseError(path + ".seed_occupation", 0, "expected a bitstring");
  try {
    record.seed_occupation = OccupationState::from_bitstring(seed.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(path + ".seed_occupation", 0, e.what());
  }
  if (record.seed_occupation.levels() != record.lambdas.size()) {
    throw ParseError(path + ".seed_occupation", 0, "bitstring length differs from lambda length");
  }
  record.residual_norm = as_double(require(doc, "residual", path), path + ".residual");
  record.converged = true;
  if (auto it = doc.find("converged"); it != doc.end()) {
    if (!it->is_boolean()) throw ParseError(path + ".converged", 0, "expected a boolean");
    record.converged = it->get<bool>();
  }
  if (auto it = doc.find("rapidities"); it != doc.end()) {
    record.rapidities = SpectralSet{as_complex_array(*it, path + ".rapidities"), SpectralRole::OnShell};
  }
  if (auto it = doc.find("dual_rapidities"); it != doc.end()) {
    record.dual_rapidities = SpectralSet{as_complex_array(*it, path + ".dual_rapidities"), SpectralRole::Dual};
  }
  return record;
}

}  // namespace

std::string serialize_model(const ModelParams& model) { return model_json(model).dump(2) + "\n"; }

ModelParams deserialize_model(const std::string& text) { return model_from_json(parse_json(text), ""); }

std::string serialize_states(const std::vector<EigenstateRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_json(r));
  return arr.dump(2) + "\n";
}

std::vector<EigenstateRecord> deserialize_states(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_array()) throw ParseError("", 0, "state document must be an array of records");
  std::vector<EigenstateRecord> out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    out.push_back(record_from_json(doc[k], "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::string states_to_csv(const std::vector<EigenstateRecord>& records) {
  std::ostringstream os;
  const int levels = records.empty() ? 0 : records.front().lambdas.size();
  os << "index,n,seed_occupation,converged,residual";
  for (int i = 0; i < levels; ++i) os << ",lambda_" << (i + 1);
  os << "\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    os << k << ',' << r.n << ',' << r.seed_occupation.bitstring() << ',' << (r.converged ? 1 : 0) << ','
       << format_double(r.residual_norm);
    for (double l : r.lambdas.lambdas) os << ',' << format_double(l);
    os << "\n";
  }
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

ModelParams load_model(const std::filesystem::path& path) { return deserialize_model(read_text_file(path)); }

std::vector<EigenstateRecord> load_states(const std::filesystem::path& path) {
  return deserialize_states(read_text_file(path));
}

}  // namespace rgdet
