#pragma once

// Line-oriented structure files:
//
//   algebra <salamon string>
//   form <name> <degree> <sum of monomials>
//   vector <name> <dim scalars>
//   matrix <name> <rows> <cols> <rows*cols scalars, row-major>
//   expect <check> <token>...
//   # comment
//
// Exactly one algebra line, before any form or vector. Names are unique per
// kind. format() prints the canonical text; comments and blank lines are
// kept in place.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "g2lcc/forms.hpp"
#include "g2lcc/lie.hpp"

namespace g2lcc {

struct Expectation {
  std::string check;
  std::vector<std::string> args;
  std::size_t line = 0;
};

class StructureFile {
 public:
  /// Throws ParseError with 1-based line and column.
  static StructureFile parse(std::string_view text);
  static StructureFile load(const std::filesystem::path& path);

  const LieAlgebra& algebra() const { return *algebra_; }
  int dim() const { return algebra_->dim(); }

  bool has_form(const std::string& name) const { return forms_.contains(name); }
  bool has_vector(const std::string& name) const { return vectors_.contains(name); }
  bool has_matrix(const std::string& name) const { return matrices_.contains(name); }
  /// Throw std::out_of_range naming the missing entry.
  const KForm& form(const std::string& name) const;
  const Vector& vector(const std::string& name) const;
  const LinearMap& matrix(const std::string& name) const;
  const std::vector<Expectation>& expectations() const { return expectations_; }

  std::string format() const;

 private:
  struct Line {
    enum class Kind { Verbatim, Algebra, Form, Vector, Matrix, Expect } kind;
    std::string text;  // verbatim text or entry name
  };

  std::optional<LieAlgebra> algebra_;
  std::vector<Line> lines_;
  std::map<std::string, KForm> forms_;
  std::map<std::string, Vector> vectors_;
  std::map<std::string, LinearMap> matrices_;
  std::vector<Expectation> expectations_;
};

/// Plain matrix text: one row per line, whitespace-separated scalars, '#'
/// comments. All rows must have the same length.
LinearMap parse_matrix(std::string_view text);
LinearMap load_matrix(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace g2lcc
