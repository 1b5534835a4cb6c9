#include "g2lcc/notation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "g2lcc/lie.hpp"

namespace g2lcc {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class SumParser {
 public:
  SumParser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  std::size_t pos() const { return pos_; }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string found = pos_ < text_.size() ? std::string("'") + text_[pos_] + "'" : "end of input";
    throw ParseError(message + " but found " + found + " at column " + std::to_string(pos_ + 1),
                     pos_ + 1);
  }

  /// Sum of monomials, stopping before ',' or ')' or the end of input.
  KForm sum(int degree) {
    std::optional<KForm> acc;
    if (degree >= 0) acc.emplace(dim_, degree);
    bool first = true;
    while (true) {
      const char c = peek();
      if (c == '\0' || c == ',' || c == ')') {
        if (first) fail("expected a term");
        break;
      }
      double sign = 1.0;
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      const std::size_t term_start = pos_;
      bool bare_zero = false;
      KForm term = monomial(sign, bare_zero);
      if (bare_zero) {
        if (!first || degree < 0) {
          pos_ = term_start;
          fail("expected a monomial");
        }
        first = false;
        continue;
      }
      if (!acc) acc.emplace(dim_, term.degree());
      if (term.degree() != acc->degree()) {
        pos_ = term_start;
        fail("term degree differs from " + std::to_string(acc->degree()));
      }
      *acc += term;
      first = false;
    }
    return *acc;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  std::string_view digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  static double to_double(std::string_view s) {
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
  }

  // [coeff] 'e' digit+; a bare "0" sets `bare_zero`.
  KForm monomial(double sign, bool& bare_zero) {
    skip_ws();
    double coeff = 1.0;
    bool has_coeff = false;
    if (pos_ < text_.size() && is_digit(text_[pos_])) {
      has_coeff = true;
      const std::size_t start = pos_;
      digits();
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        if (digits().empty()) fail("expected digits after '.'");
        coeff = to_double(text_.substr(start, pos_ - start));
      } else if (pos_ < text_.size() && text_[pos_] == '/') {
        const double num = to_double(text_.substr(start, pos_ - start));
        ++pos_;
        const auto den = digits();
        if (den.empty()) fail("expected a denominator after '/'");
        const double q = to_double(den);
        if (q == 0.0) {
          pos_ -= den.size();
          fail("zero denominator");
        }
        coeff = num / q;
      } else {
        coeff = to_double(text_.substr(start, pos_ - start));
      }
    }
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != 'e') {
      if (has_coeff && coeff == 0.0) {
        bare_zero = true;
        return KForm(dim_, 0);
      }
      fail("expected 'e'");
    }
    ++pos_;
    std::vector<int> labels;
    std::uint32_t seen = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) {
      const int label = text_[pos_] - '0';
      if (label == 0) fail("basis labels run from 1");
      if (label > dim_)
        fail("basis label " + std::to_string(label) + " exceeds dimension " + std::to_string(dim_));
      if (seen & (1u << label)) fail("repeated index " + std::to_string(label) + " within a term");
      seen |= 1u << label;
      labels.push_back(label);
      ++pos_;
    }
    if (labels.empty()) fail("expected basis labels after 'e'");
    return KForm::monomial(dim_, labels, sign * coeff);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, end);
}

std::string rounded(double v, int digits) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  std::string s(buf);
  if (s.find('e') == std::string::npos) return s;
  // Outside %g's plain range: print in fixed notation with the same precision.
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const int decimals = std::max(0, digits - 1 - exponent);
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

}  // namespace

std::string format_scalar(double value, const FormatOptions& options) {
  if (value == 0.0) return "0";
  if (options.significant_digits > 0) return rounded(value, options.significant_digits);
  if (std::abs(value) < 1e15 && value == std::round(value)) return rounded(value, 17);
  for (int q = 2; q <= 1000; ++q) {
    const double p = std::round(value * q);
    if (std::abs(p) < 1e15 && p / q == value) return rounded(p, 17) + "/" + std::to_string(q);
  }
  return shortest(value);
}

std::string format_form(const KForm& form, const FormatOptions& options) {
  if (form.degree() == 0) return format_scalar(form.size() ? form.coeff(0) : 0.0, options);
  std::string out;
  for (int p = 0; p < form.size(); ++p) {
    const double c = form.coeff(p);
    if (c == 0.0 || std::abs(c) <= options.drop_below) continue;
    std::string mag = format_scalar(std::abs(c), options);
    if (mag == "0") continue;
    if (c < 0) out += '-';
    else if (!out.empty()) out += '+';
    if (mag != "1") out += mag;
    out += 'e';
    for (int l : form.index(p).labels()) out += static_cast<char>('0' + l);
  }
  return out.empty() ? "0" : out;
}

KForm parse_form(std::string_view text, int dim, int degree) {
  SumParser parser(text, dim);
  KForm f = parser.sum(degree);
  if (!parser.at_end()) parser.fail("unexpected trailing input");
  return f;
}

LieAlgebra parse_salamon(std::string_view text, int expected_dim) {
  // The dimension is the entry count, which bounds the labels; count
  // top-level commas first so labels can be validated while parsing.
  int entries = 1;
  for (char c : text)
    if (c == ',') ++entries;
  if (entries > kMaxDim) entries = kMaxDim + 1;
  const int dim = std::min(entries, kMaxDim);

  SumParser parser(text, dim);
  parser.expect('(');
  std::vector<KForm> de;
  while (true) {
    de.push_back(parser.sum(2));
    const char c = parser.peek();
    if (c == ')') break;
    parser.expect(',');
  }
  parser.expect(')');
  if (!parser.at_end()) parser.fail("unexpected trailing input");
  if (static_cast<int>(de.size()) > kMaxDim)
    throw ParseError("algebras of dimension above " + std::to_string(kMaxDim) + " are not supported",
                     1);
  if (expected_dim > 0 && static_cast<int>(de.size()) != expected_dim)
    throw ParseError("expected " + std::to_string(expected_dim) + " entries, found " +
                         std::to_string(de.size()),
                     parser.pos());
  return LieAlgebra(std::move(de));
}

std::string format_salamon(const LieAlgebra& algebra, const FormatOptions& options) {
  std::string out = "(";
  for (int k = 0; k < algebra.dim(); ++k) {
    if (k) out += ',';
    out += format_form(algebra.differentials()[k], options);
  }
  return out + ")";
}

double parse_scalar(std::string_view text) {
  bool negative = false;
  std::size_t i = 0;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  // Reuse the monomial grammar: "<coeff>e1" parses the coefficient.
  const std::string probe = std::string(text.substr(i)) + "e1";
  const std::string_view body = text.substr(i);
  if (body.empty() || !is_digit(body.front()))
    throw ParseError("expected a number at column " + std::to_string(i + 1), i + 1);
  try {
    const KForm f = parse_form(probe, 1, 1);
    return negative ? -f.coeff(0) : f.coeff(0);
  } catch (const ParseError& e) {
    throw ParseError(std::string("malformed number: ") + e.what(), e.column() + i);
  }
}

}  // namespace g2lcc
