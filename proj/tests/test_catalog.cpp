#include "doctest.h"

#include <fstream>

#include "g2lcc/catalog.hpp"
#include "g2lcc/error.hpp"
#include "g2lcc/notation.hpp"

using namespace g2lcc;
using Status = CheckResult::Status;

namespace {

const char* kSample =
    "# sample\n"
    "algebra (0,0,0,0,e14+e23,e13-e24)\n"
    "form omega 2 e12+e34+e56\n"
    "\n"
    "form psi_plus 3 e135-e146-e236-e245\n"
    "vector v 1 0 -1/2 0 0 1/4\n"
    "matrix m 2 3 1 2 3 4 5 6\n"
    "expect su3_class omega psi_plus coupled c=-1 source=published\n";

ParseError parse_error(const std::string& text) {
  try {
    StructureFile::parse(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("accepted: " << text);
  return ParseError("", 0, 0);
}

EntryReport verify_text(const std::string& text) { return verify("inline", StructureFile::parse(text), text); }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("g2lcc_catalog_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write(const std::filesystem::path& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("structure file parsing") {
  const StructureFile f = StructureFile::parse(kSample);
  CHECK(f.dim() == 6);
  CHECK(f.form("omega").approx_equal(parse_form("e12+e34+e56", 6), 0.0));
  CHECK(f.form("psi_plus").degree() == 3);
  CHECK(f.vector("v")(2) == -0.5);
  CHECK(f.vector("v")(5) == 0.25);
  CHECK(f.matrix("m").rows() == 2);
  CHECK(f.matrix("m")(1, 0) == 4);
  REQUIRE(f.expectations().size() == 1);
  CHECK(f.expectations()[0].check == "su3_class");
  CHECK(f.expectations()[0].line == 8);
  CHECK(f.expectations()[0].args.size() == 5);
  CHECK(f.format() == kSample);
  CHECK_THROWS_AS(f.form("phi"), std::out_of_range);
  CHECK_THROWS_AS(f.vector("w"), std::out_of_range);

  SUBCASE("canonical printing normalizes spacing and coefficients") {
    const StructureFile g = StructureFile::parse("algebra ( 0, 0 ,e12)  \nform a 2   2e21 \nvector v 1.0 0 +2\n");
    CHECK(g.format() == "algebra (0,0,e12)\nform a 2 -2e12\nvector v 1 0 2\n");
  }
}

TEST_CASE("structure file errors carry line and column") {
  struct Case {
    std::string text;
    std::size_t line, column;
  };
  const Case cases[] = {
      {"form a 2 e12\n", 1, 1},                                   // before the algebra
      {"algebra (0,0,0)\nalgebra (0,0,0)\n", 2, 1},               // second algebra
      {"algebra (0,0,0)\nfrom a 2 e12\n", 2, 1},                  // unknown directive
      {"algebra (0,0,e12x)\n", 1, 17},                            // salamon error, shifted
      {"algebra (0,0,0)\nform a 2 e12+e4\n", 2, 15},              // label beyond dim
      {"algebra (0,0,0)\nform a x e12\n", 2, 8},                  // bad degree
      {"algebra (0,0,0)\nform a 4 0\n", 2, 8},                    // degree too large
      {"algebra (0,0,0)\nform a 1 e1\nform a 1 e2\n", 3, 6},      // duplicate
      {"algebra (0,0,0)\nform a-b 1 e1\n", 2, 6},                 // bad name
      {"algebra (0,0,0)\nvector v 1 2\n", 2, 1},                  // too short
      {"algebra (0,0,0)\nvector v 1 2 3 4\n", 2, 16},             // too long
      {"algebra (0,0,0)\nvector v 1 y 3\n", 2, 12},               // bad scalar
      {"algebra (0,0,0)\nmatrix m 2 2 1 2 3\n", 2, 1},            // too short
      {"algebra (0,0,0)\nform a 2\n", 2, 9},                      // missing fields
      {"# nothing\n", 1, 1},                                      // no algebra
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    const ParseError e = parse_error(c.text);
    CHECK(e.line() == c.line);
    CHECK(e.column() == c.column);
  }
}

TEST_CASE("plain matrix files") {
  const LinearMap m = parse_matrix("# D\n1 0\n\n-1/2 3\n");
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == -0.5);
  CHECK_THROWS_AS(parse_matrix("1 2\n3\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("# empty\n"), ParseError);
  try {
    parse_matrix("1 2\n3 z\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("shipped catalog") {
  const std::vector<std::string> names = catalog_entries();
  for (const char* required : {"iwasawa_ex33", "iwasawa_s5", "model_forms", "solvable_q", "solvable_s", "su2su2_nk"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  CHECK(std::is_sorted(names.begin(), names.end()));

  for (const std::string& name : names) {
    CAPTURE(name);
    const EntryReport r = verify(name);
    for (const CheckResult& c : r.checks) {
      CAPTURE(c.check);
      CAPTURE(c.line);
      CAPTURE(c.detail);
      CHECK(c.status != Status::Fail);
      CHECK(!c.source.empty());
      const bool known_source = c.source == "published" || c.source == "trivial" || c.source.starts_with("derived:");
      CHECK(known_source);
    }
    CHECK(r.passed());
    CHECK(r.checks.size() > 1);
  }

  SUBCASE("the hyperbolic lattice is the only expected failure") {
    const EntryReport q = verify("solvable_q");
    int expected_failures = 0;
    for (const CheckResult& c : q.checks)
      if (c.status == Status::ExpectedFail) {
        ++expected_failures;
        CHECK(c.check == "lattice");
        CHECK(c.detail.find("diagonal=0.135335283237") != std::string::npos);
      }
    CHECK(expected_failures == 1);
  }
}

TEST_CASE("verify_all is deterministic and ordered") {
  const CatalogReport a = verify_all(), b = verify_all();
  CHECK(a.passed());
  CHECK(a.count(Status::Fail) == 0);
  CHECK(a.count(Status::ExpectedFail) == 1);
  REQUIRE(a.entries.size() == b.entries.size());
  CHECK(a.entries.size() == catalog_entries().size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].name == catalog_entries()[i]);
    REQUIRE(a.entries[i].checks.size() == b.entries[i].checks.size());
    for (std::size_t j = 0; j < a.entries[i].checks.size(); ++j) {
      CHECK(a.entries[i].checks[j].detail == b.entries[i].checks[j].detail);
      CHECK(a.entries[i].checks[j].status == b.entries[i].checks[j].status);
    }
  }
}

TEST_CASE("verification has teeth") {
  const std::string head = "algebra (0,0,0,0,e14+e23,e13-e24)\nform omega 2 e12+e34+e56\nform psi_plus 3 e135-e146-e236-e245\n";
  const auto last = [](const EntryReport& r) { return r.checks.back(); };

  CHECK(last(verify_text(head + "expect su3_class omega psi_plus coupled c=-1 source=published\n")).status ==
        Status::Pass);
  CHECK(last(verify_text(head + "expect su3_class omega psi_plus coupled c=1 source=published\n")).status ==
        Status::Fail);
  CHECK(last(verify_text(head + "expect su3_class omega psi_plus nearly_kahler source=published\n")).status ==
        Status::Fail);
  // a passing check marked as an expected failure is a failure
  CHECK(last(verify_text(head + "expect su3_class omega psi_plus coupled source=trivial status=expected_fail\n"))
            .status == Status::Fail);
  CHECK(last(verify_text(head + "expect su3_class omega psi_plus coupled c=1 source=trivial status=expected_fail\n"))
            .status == Status::ExpectedFail);
  CHECK(last(verify_text(head + "expect su3_class omega psi_plus coupled\n")).status == Status::Fail);
  CHECK(last(verify_text(head + "expect no_such_check omega source=trivial\n")).status == Status::Fail);
  CHECK(last(verify_text(head + "expect su3_class omega missing coupled source=trivial\n")).status == Status::Fail);

  const EntryReport spaced = verify("inline", StructureFile::parse(head + "form  x 1 e1\n"), head + "form  x 1 e1\n");
  CHECK(spaced.checks.front().check == "canonical");
  CHECK(spaced.checks.front().status == Status::Fail);
  CHECK_FALSE(spaced.passed());
}

TEST_CASE("parse failures name the entry") {
  const auto dir = scratch_dir("broken");
  write(dir / "good.txt", "algebra (0,0)\n");
  write(dir / "broken.txt", "algebra (0,0)\nform a 1 e3\n");
  try {
    verify("broken", dir);
    FAIL("broken entry accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("broken.txt:2:") != std::string::npos);
    CHECK(e.line() == 2);
  }
  const CatalogReport r = verify_all(dir);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].name == "broken");
  CHECK_FALSE(r.entries[0].passed());
  CHECK(r.entries[0].error.find("broken.txt:2:") != std::string::npos);
  CHECK(r.entries[1].passed());
  CHECK_FALSE(r.passed());
  std::filesystem::remove_all(dir);
}
