#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzlab/io.hpp"

namespace fs = std::filesystem;
namespace io = mzlab::io;
using io::json;
using mzlab::space::DiscreteMeasure;
using mzlab::space::Exponent;
using mzlab::space::FunctionFamily;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Independent FNV-1a 64 over bytes, written without reference to the
// library implementation.
std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    h = h ^ static_cast<unsigned char>(bytes[i]);
    h = h * 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

fs::path fresh_dir(const char* leaf) {
  const fs::path dir = fs::temp_directory_path() / "mzlab_io_tests" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("exponent serialization round trip") {
  CHECK(io::exponent_json(Exponent(2.5)) == json(2.5));
  CHECK(io::exponent_json(Exponent::infinity()) == json("inf"));
  CHECK(io::exponent_from(json(1.8), "$.r").value() == 1.8);
  CHECK(io::exponent_from(json("inf"), "$.r").is_inf());
  for (const Exponent& e :
       {Exponent(1.0), Exponent(0.5), Exponent(3.25), Exponent::infinity()}) {
    const Exponent back = io::exponent_from(io::exponent_json(e), "$.e");
    CHECK(back.is_inf() == e.is_inf());
    if (!e.is_inf()) CHECK(back.value() == e.value());
  }
  // Errors carry the field path.
  try {
    io::exponent_from(json("abc"), "$.q[1]");
    FAIL("expected SchemaError");
  } catch (const io::SchemaError& e) {
    CHECK(std::string(e.what()).find("$.q[1]") != std::string::npos);
  }
  CHECK_THROWS_AS(io::exponent_from(json(0.0), "$.p"), io::SchemaError);
  CHECK_THROWS_AS(io::exponent_from(json::object(), "$.p"), io::SchemaError);
}

TEST_CASE("exponent text parsing") {
  CHECK(io::exponent_from_string("2").value() == 2.0);
  CHECK(io::exponent_from_string("1.5").value() == 1.5);
  CHECK(io::exponent_from_string("inf").is_inf());
  CHECK_THROWS_AS(io::exponent_from_string("0"), std::invalid_argument);
  CHECK_THROWS_AS(io::exponent_from_string("-1"), std::invalid_argument);
  CHECK_THROWS_AS(io::exponent_from_string("abc"), std::invalid_argument);
  CHECK_THROWS_AS(io::exponent_from_string(""), std::invalid_argument);
  CHECK_THROWS_AS(io::exponent_from_string("2x"), std::invalid_argument);
}

TEST_CASE("measure round trip and schema errors") {
  const DiscreteMeasure mu = DiscreteMeasure({0.5, 2.0, 1.25});
  const json j = io::measure_json(mu);
  const DiscreteMeasure back = io::measure_from(j, "$");
  CHECK(back.weights() == mu.weights());

  try {
    io::measure_from(json::object(), "$");
    FAIL("expected SchemaError");
  } catch (const io::SchemaError& e) {
    CHECK(std::string(e.what()).find("$.weights") != std::string::npos);
  }
  CHECK_THROWS_AS(io::measure_from(json{{"weights", 3}}, "$"),
                  io::SchemaError);
  CHECK_THROWS_AS(
      io::measure_from(json{{"weights", json::array({1.0, "x"})}}, "$"),
      io::SchemaError);
  // A nonpositive weight is rejected by the measure itself and
  // surfaces as a schema error with the path attached.
  try {
    io::measure_from(json{{"weights", json::array({1.0, -2.0})}}, "$.mu");
    FAIL("expected SchemaError");
  } catch (const io::SchemaError& e) {
    CHECK(std::string(e.what()).find("$.mu.weights") != std::string::npos);
  }
}

TEST_CASE("family round trip and shape validation") {
  const DiscreteMeasure mu = DiscreteMeasure({1.0, 0.5, 2.0});
  const FunctionFamily fam({1.0, -2.0, 0.0, 0.5, 0.25, 3.0}, 2, mu);
  const json j = io::family_json(fam);
  const FunctionFamily back = io::family_from(j, "$");
  CHECK(back.function_count() == 2);
  CHECK(back.values() == fam.values());
  CHECK(back.measure().weights() == mu.weights());

  json bad = j;
  bad["values"][1] = json::array({1.0, 2.0});  // wrong atom count
  try {
    io::family_from(bad, "$");
    FAIL("expected SchemaError");
  } catch (const io::SchemaError& e) {
    CHECK(std::string(e.what()).find("$.values[1]") != std::string::npos);
  }
  json empty = j;
  empty["values"] = json::array();
  CHECK_THROWS_AS(io::family_from(empty, "$"), io::SchemaError);
}

TEST_CASE("operator round trip and coefficient count validation") {
  const DiscreteMeasure in1 = DiscreteMeasure({1.0, 2.0});
  const DiscreteMeasure in2 = DiscreteMeasure::counting(2);
  const DiscreteMeasure out = DiscreteMeasure({0.5, 0.25});
  std::vector<double> coeffs(8);
  for (std::size_t i = 0; i < 8; ++i) coeffs[i] = static_cast<double>(i + 1);
  const mzlab::op::MultilinearOperator T({in1, in2}, out, coeffs);

  const json j = io::operator_json(T);
  const auto back = io::operator_from(j, "$");
  CHECK(back.arity() == 2);
  CHECK(back.coeffs() == coeffs);
  CHECK(back.input_measure(0).weights() == in1.weights());
  CHECK(back.output_measure().weights() == out.weights());

  json bad = j;
  bad["coeffs"].erase(7);
  try {
    io::operator_from(bad, "$");
    FAIL("expected SchemaError");
  } catch (const io::SchemaError& e) {
    CHECK(std::string(e.what()).find("$.coeffs") != std::string::npos);
    CHECK(std::string(e.what()).find("expected 8") != std::string::npos);
  }
  json dims = j;
  dims["input_dims"][0] = 3;  // disagrees with the measure
  try {
    io::operator_from(dims, "$");
    FAIL("expected SchemaError");
  } catch (const io::SchemaError& e) {
    CHECK(std::string(e.what()).find("$.input_dims[0]") != std::string::npos);
  }
  json arity = j;
  arity["arity"] = 3;
  CHECK_THROWS_AS(io::operator_from(arity, "$"), io::SchemaError);
  CHECK_THROWS_AS(io::operator_from(json::object(), "$"), io::SchemaError);
}

TEST_CASE("canonical dump is key-order independent") {
  json a;
  a["zeta"] = 1;
  a["alpha"] = json{{"y", 2.0}, {"x", "inf"}};
  json b;
  b["alpha"] = json::object();
  b["alpha"]["x"] = "inf";
  b["alpha"]["y"] = 2.0;
  b["zeta"] = 1;
  CHECK(io::canonical_dump(a) == io::canonical_dump(b));
  CHECK(io::content_hash_hex(a) == io::content_hash_hex(b));
}

TEST_CASE("content hash matches an independent FNV-1a") {
  const json doc{{"command", "estimate"},
                 {"n", json::array({2, 4})},
                 {"p", "inf"},
                 {"value", 1.25}};
  CHECK(io::content_hash_hex(doc) == fnv1a_hex(io::canonical_dump(doc)));
  CHECK(io::content_hash_hex(json{{"a", 1}}) !=
        io::content_hash_hex(json{{"a", 2}}));
  CHECK(io::content_hash_hex(doc).size() == 16);
}

TEST_CASE("atomic write and report sidecar") {
  const fs::path dir = fresh_dir("report");
  const fs::path file = dir / "body.json";
  const json body{{"command", "classify"}, {"value", 0.5}};
  io::write_report(file, body);

  CHECK(slurp(file) == io::canonical_dump(body) + "\n");
  CHECK_FALSE(fs::exists(dir / "body.json.tmp"));

  const fs::path side = dir / "body.json.sidecar.json";
  REQUIRE(fs::exists(side));
  const json sc = json::parse(slurp(side));
  CHECK(sc.at("content_hash").get<std::string>() ==
        io::content_hash_hex(body));
  const std::string stamp = sc.at("written_at").get<std::string>();
  CHECK(stamp.size() == 20);
  CHECK(stamp.back() == 'Z');
  CHECK(stamp[4] == '-');
  CHECK(stamp[10] == 'T');

  // Overwrite in place: readers only ever see complete bytes.
  const json body2{{"command", "classify"}, {"value", 0.75}};
  io::write_report(file, body2);
  CHECK(slurp(file) == io::canonical_dump(body2) + "\n");

  io::atomic_write(dir / "nested" / "deep.txt", "abc");
  CHECK(slurp(dir / "nested" / "deep.txt") == "abc");
}

TEST_CASE("csv table has a fixed header and full-precision values") {
  const std::vector<io::CsvRow> rows{{4, 1.0, 2.0, 8.0, 4.0, 7},
                                     {16, 0.1, 2.5, 8.0, 4.0, 9}};
  const std::string want =
      "n,lower_bound,norm_upper,lhs,rhs_product,seed\n"
      "4,1,2,8,4,7\n"
      "16,0.10000000000000001,2.5,8,4,9\n";
  CHECK(io::csv_table(rows) == want);
  CHECK(io::csv_table({}) == "n,lower_bound,norm_upper,lhs,rhs_product,seed\n");
}

TEST_CASE("cache honors the environment override per call") {
  const fs::path dir1 = fresh_dir("cache1");
  const fs::path dir2 = fresh_dir("cache2");
  REQUIRE(setenv("MZLAB_CACHE_DIR", dir1.c_str(), 1) == 0);
  CHECK(io::cache_dir() == dir1);

  const json body{{"result", 42}, {"list", json::array({1.5, "inf"})}};
  CHECK_FALSE(io::cache_lookup("deadbeef00000000").has_value());
  io::cache_store("deadbeef00000000", body);
  const auto hit = io::cache_lookup("deadbeef00000000");
  REQUIRE(hit.has_value());
  CHECK(*hit == body);

  // A damaged entry reads as a miss, not an error.
  {
    std::ofstream out(dir1 / "deadbeef00000000.json",
                      std::ios::binary | std::ios::trunc);
    out << "{not json";
  }
  CHECK_FALSE(io::cache_lookup("deadbeef00000000").has_value());

  // The environment is consulted on every call, not latched.
  REQUIRE(setenv("MZLAB_CACHE_DIR", dir2.c_str(), 1) == 0);
  CHECK(io::cache_dir() == dir2);
  CHECK_FALSE(io::cache_lookup("deadbeef00000000").has_value());
  unsetenv("MZLAB_CACHE_DIR");
}

TEST_CASE("bracket serialization encodes an unbounded upper endpoint") {
  mzlab::solver::NormBracket b;
  b.lower = 1.5;
  b.upper = std::numeric_limits<double>::infinity();
  b.method = mzlab::solver::NormMethod::holder;
  b.exact = false;
  b.converged = false;
  const json j = io::bracket_json(b);
  CHECK(j.at("upper") == json("inf"));
  CHECK(j.at("lower") == json(1.5));
  CHECK(j.at("method") == json("holder_bound"));
  CHECK_FALSE(j.at("exact").get<bool>());

  b.upper = 2.0;
  b.method = mzlab::solver::NormMethod::vertex_enum;
  CHECK(io::bracket_json(b).at("upper") == json(2.0));
  CHECK(io::bracket_json(b).at("method") == json("vertex_enum"));
}

TEST_CASE("witness bundle nests the operator under its metadata") {
  const DiscreteMeasure atoms = DiscreteMeasure::counting(2);
  const mzlab::op::MultilinearOperator T({atoms, atoms},
                                         DiscreteMeasure::counting(1),
                                         {1.0, 1.0, 1.0, -1.0});
  mzlab::solver::NormBracket b;
  b.lower = b.upper = 2.0;
  b.exact = true;
  const json j = io::witness_bundle_json(T, "littlewood", 2, 5, b);
  CHECK(j.contains("operator"));
  CHECK(j.at("metadata").at("kind") == json("littlewood"));
  CHECK(j.at("metadata").at("n") == json(2));
  CHECK(j.at("metadata").at("seed") == json(5));
  CHECK(j.at("metadata").at("bracket").at("upper") == json(2.0));
  // The nested operator parses back to the same coefficients.
  const auto back = io::operator_from(j.at("operator"), "$.operator");
  CHECK(back.coeffs() == T.coeffs());
}

}  // TEST_SUITE
