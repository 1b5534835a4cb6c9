#pragma once

// Text notation for forms and structure equations.
//
//   algebra := '(' entry (',' entry)* ')'
//   entry   := '0' | sum                      (the k-th entry is de^k)
//   sum     := ['+'|'-'] term (('+'|'-') term)*
//   term    := [coeff] 'e' digit+             (one digit per basis label)
//   coeff   := digits ['.' digits] | digits '/' digits
//
// Whitespace between tokens is ignored. Labels may appear in any order
// within a term (e31 = -e13); repeated labels are an error. The canonical
// printed form has ascending multi-indices, no spaces, and omits unit
// coefficients, so that parse(print(x)) == x byte-for-byte.

#include <string>
#include <string_view>

#include "g2lcc/forms.hpp"

namespace g2lcc {

class LieAlgebra;

/// Parse a sum of monomials on R^dim. A negative `degree` is inferred from
/// the first term; a bare "0" needs an explicit degree.
KForm parse_form(std::string_view text, int dim, int degree = -1);

struct FormatOptions {
  /// 0 prints the shortest text that parses back to the same double;
  /// otherwise coefficients are rounded to this many significant digits.
  int significant_digits = 0;
  /// Coefficients with |c| <= drop_below are omitted.
  double drop_below = 0.0;
};

std::string format_form(const KForm& form, const FormatOptions& options = {});
std::string format_scalar(double value, const FormatOptions& options = {});

/// `expected_dim` of 0 accepts any entry count.
LieAlgebra parse_salamon(std::string_view text, int expected_dim = 0);
std::string format_salamon(const LieAlgebra& algebra, const FormatOptions& options = {});

/// Parse a single coefficient: decimal, p/q, optionally signed.
double parse_scalar(std::string_view text);

}  // namespace g2lcc
