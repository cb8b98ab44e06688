#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rgdet/model.hpp"

namespace rgdet {

// Model document:   {"kind": "rational", "g": 1.0, "epsilon": [1, 2, 3]}
// State document:   [{"n": 1, "lambda": [...], "rapidities": [[re, im], ...],
//                     "seed_occupation": "010", "residual": 1e-15,
//                     "converged": true}, ...]
// "rapidities" and "dual_rapidities" are optional; "converged" defaults to true.
// Doubles are written in shortest round-trip form, so parse(write(x)) == x
// bit for bit.

std::string serialize_model(const ModelParams& model);
ModelParams deserialize_model(const std::string& text);

std::string serialize_states(const std::vector<EigenstateRecord>& records);
std::vector<EigenstateRecord> deserialize_states(const std::string& text);

// One row per record: index,n,seed_occupation,converged,residual,lambda_1..L
std::string states_to_csv(const std::vector<EigenstateRecord>& records);

// Decimal with 17 significant digits, '.' separator regardless of locale.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

ModelParams load_model(const std::filesystem::path& path);
std::vector<EigenstateRecord> load_states(const std::filesystem::path& path);

}  // namespace rgdet
