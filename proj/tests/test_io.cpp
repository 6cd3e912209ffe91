#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "jnr/io.hpp"

using namespace jnr;
using namespace jnr::testing;

TEST_CASE("problem round trip is byte identical") {
  for (const auto& name : demo_names()) {
    const auto p = demo_problem(name);
    const std::string text = serialize_problem(p);
    const auto q = parse_problem(text);
    CHECK(q.n == p.n);
    REQUIRE(q.tuple.size() == p.tuple.size());
    for (int j = 0; j < p.tuple.size(); ++j)
      CHECK((q.tuple.A[j] - p.tuple.A[j]).norm() == 0.0);
    CHECK(serialize_problem(q) == text);
  }
}

TEST_CASE("demo fixtures match the published matrices") {
  const auto p1 = demo_problem("ex3.1");
  CHECK(p1.n == 5);
  const Complex w = p1.tuple.A[0](1, 1);
  CHECK(w.real() == -0.5);
  CHECK(near(w.imag(), std::sqrt(3.0) / 2.0, 0.0));
  CHECK(p1.tuple.A[0](2, 2) == std::conj(w));
  CHECK(p1.tuple.A[0](3, 4) == Complex(0.1, 0));

  const auto p2 = demo_problem("ex3.2");
  const auto H = hermitian_expand(p2.tuple);
  CHECK(unitary_defect(H[0]) <= 1e-12);
  CHECK(unitary_defect(H[1]) <= 1e-12);

  const auto p3 = demo_problem("ex5.2");
  CHECK(p3.tuple.size() == 3);
  CHECK(p3.tuple.all_hermitian());

  CHECK_THROWS_AS(demo_problem("nope"), UnknownDemo);
  try {
    demo_problem("nope");
  } catch (const UnknownDemo& e) {
    CHECK(std::string(e.what()).find("ex3.1") != std::string::npos);
    CHECK(std::string(e.what()).find("ex5.2") != std::string::npos);
  }
}

TEST_CASE("parse_problem validation errors") {
  CHECK_THROWS_AS(parse_problem("not json"), ParseError);
  CHECK_THROWS_AS(parse_problem("{}"), ParseError);
  CHECK_THROWS_AS(parse_problem(R"({"n": 2, "matrices": []})"), ParseError);

  // a short row is reported with its index
  const std::string bad_row =
      R"({"n": 2, "matrices": [{"name": "X", "re": [[1, 0], [1]]}]})";
  try {
    parse_problem(bad_row);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    CHECK(std::string(e.what()).find("X") != std::string::npos);
  }

  CHECK_THROWS_AS(
      parse_problem(R"({"n": 1, "matrices": [{"re": [[1]]}], "weight": {}})"), ParseError);
  CHECK_THROWS_AS(parse_problem(R"({"n": 300, "matrices": [{"re": [[1]]}]})"), ParseError);

  const auto ok = parse_problem(R"({"n": 1, "matrices": [{"re": [[2.5]]}]})");
  CHECK(ok.tuple.A[0](0, 0) == Complex(2.5, 0));
  CHECK_FALSE(ok.has_weight());
  CHECK_THROWS_AS(ok.weight(), BadWeight);
}

TEST_CASE("weight resolution from files") {
  const auto pk = parse_problem(R"({"n": 3, "matrices": [{"re": [[0,0,0],[0,0,0],[0,0,0]]}],
                                    "weight": {"k": 2}})");
  CHECK(pk.weight().krange == 2);
  CHECK(pk.weight().gamma == 1);

  const auto pc = parse_problem(R"({"n": 3, "matrices": [{"re": [[0,0,0],[0,0,0],[0,0,0]]}],
                                    "weight": {"c": [3, 1, 2]}})");
  CHECK(pc.weight().c[0] == 3.0);
  CHECK(pc.weight().c[1] == 2.0);
  CHECK(pc.weight().c[2] == 1.0);
}

TEST_CASE("report serialization is deterministic") {
  const auto p = demo_problem("ex5.2");
  RunParams rp;
  rp.dirs = 64;
  const auto rep = decide_polyhedral(p.tuple, make_weight(1, 6), {64, 0, 1e-8, {}, 0.05});
  const std::string a = analysis_report_json(rep, rp);
  const std::string b = analysis_report_json(
      decide_polyhedral(p.tuple, make_weight(1, 6), {64, 0, 1e-8, {}, 0.05}), rp);
  CHECK(a == b);
  CHECK(a.find("\"verdict\": \"NotPolyhedral\"") != std::string::npos);
  CHECK(a.find("\"tool\": \"jnr\"") != std::string::npos);
  CHECK(a.find("\"seed\"") != std::string::npos);
  CHECK(a.find("\"tol\"") != std::string::npos);
}

TEST_CASE("write_atomic replaces the target") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "jnr_io_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.txt";
  write_atomic(target.string(), "first\n");
  write_atomic(target.string(), "second\n");
  std::ifstream in(target);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  fs::remove_all(dir);
}
