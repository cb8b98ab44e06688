#include <doctest.h>

#include <filesystem>

#include "rgdet/document.hpp"
#include "rgdet/errors.hpp"
#include "support.hpp"

using namespace rgdet;

namespace {

EigenstateRecord sample_record() {
  EigenstateRecord r;
  r.n = 1;
  r.lambdas = LambdaSet{{-2.0 / 3.0, 0.1 + 0.2, 1e-300}, 1};
  r.rapidities = SpectralSet{{Complex(1.0 / 3.0, -0.0)}, SpectralRole::OnShell};
  r.seed_occupation = OccupationState({0}, 3);
  r.residual_norm = 3.3e-16;
  r.converged = true;
  return r;
}

}  // namespace

TEST_CASE("model round trip") {
  const auto m = testing::make_model(ModelKind::Rational, 0.1 + 0.2, {1.0, 2.0 / 3.0, 3.0});
  CHECK(deserialize_model(serialize_model(m)) == m);
  const auto h = testing::make_model(ModelKind::Hyperbolic, -1.0 / 7.0, {0.5, 1.75});
  CHECK(deserialize_model(serialize_model(h)) == h);
}

TEST_CASE("missing coupling names the field") {
  try {
    deserialize_model(R"({"kind": "rational", "epsilon": [1, 2, 3]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "g");
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("syntax errors carry the line") {
  try {
    deserialize_model("{\n  \"kind\": \"rational\",\n  \"g\": ,\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("unknown model kind is rejected") {
  CHECK_THROWS_AS(deserialize_model(R"({"kind": "trig", "g": 1, "epsilon": [1]})"), ParseError);
}

TEST_CASE("state round trip") {
  const std::vector<EigenstateRecord> recs{sample_record()};
  const auto back = deserialize_states(serialize_states(recs));
  REQUIRE(back.size() == 1);
  CHECK(back[0] == recs[0]);
}

TEST_CASE("rapidities are optional") {
  const auto back = deserialize_states(R"([{"n": 0, "lambda": [0, 0], "seed_occupation": "00", "residual": 0}])");
  REQUIRE(back.size() == 1);
  CHECK_FALSE(back[0].rapidities.has_value());
  CHECK(back[0].converged);
}

TEST_CASE("missing lambda names the record") {
  try {
    deserialize_states(R"([{"n": 0, "lambda": [0], "seed_occupation": "0", "residual": 0}, {"n": 0}])");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field().find("[1]") != std::string::npos);
  }
}

TEST_CASE("csv uses 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  const auto csv = states_to_csv({sample_record()});
  CHECK(csv.rfind("index,n,seed_occupation,converged,residual,lambda_1,lambda_2,lambda_3\n", 0) == 0);
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "rgdet_document_test.json";
  write_text_file(path, serialize_states({sample_record()}));
  CHECK(load_states(path).size() == 1);
  std::filesystem::remove(path);
  try {
    load_states(path);
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}
