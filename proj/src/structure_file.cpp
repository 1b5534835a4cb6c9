#include "g2lcc/structure_file.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "g2lcc/error.hpp"
#include "g2lcc/notation.hpp"

namespace g2lcc {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::string_view strip_trailing(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Everything from token `first` to the end of the line.
std::string_view rest_of_line(std::string_view line, const Token& first) {
  return strip_trailing(line.substr(first.column - 1));
}

int parse_count(const Token& t, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size() || value < 0)
    throw ParseError("expected a non-negative integer, found '" + std::string(t.text) + "'", t.column, line);
  return value;
}

double parse_scalar_at(const Token& t, std::size_t line) {
  try {
    return parse_scalar(t.text);
  } catch (const ParseError& e) {
    throw e.at_line(line, t.column - 1);
  }
}

void need_tokens(const std::vector<Token>& tokens, std::size_t count, std::string_view what, std::size_t line,
                 std::string_view text) {
  if (tokens.size() < count)
    throw ParseError(std::string(what) + ": missing fields", strip_trailing(text).size() + 1, line);
}

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

void check_name(const Token& t, std::size_t line) {
  if (!valid_name(t.text))
    throw ParseError("invalid name '" + std::string(t.text) + "'", t.column, line);
}

template <class Map>
void check_unique(const Map& map, const Token& t, std::size_t line) {
  if (map.contains(std::string(t.text)))
    throw ParseError("duplicate name '" + std::string(t.text) + "'", t.column, line);
}

std::string join_scalars(const Eigen::MatrixXd& values) {
  std::string out;
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j) out += " " + format_scalar(values(i, j));
  return out;
}

}  // namespace

StructureFile StructureFile::parse(std::string_view text) {
  StructureFile file;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;

    const std::vector<Token> tokens = split(line);
    if (tokens.empty() || tokens.front().text.front() == '#') {
      file.lines_.push_back({Line::Kind::Verbatim, std::string(strip_trailing(line))});
      continue;
    }
    const Token& head = tokens.front();
    const auto need_algebra = [&] {
      if (!file.algebra_) throw ParseError("'" + std::string(head.text) + "' before the algebra line", head.column, number);
    };

    if (head.text == "algebra") {
      need_tokens(tokens, 2, "algebra", number, line);
      if (file.algebra_) throw ParseError("second algebra line", head.column, number);
      try {
        file.algebra_ = parse_salamon(rest_of_line(line, tokens[1]));
      } catch (const ParseError& e) {
        throw e.at_line(number, tokens[1].column - 1);
      }
      file.lines_.push_back({Line::Kind::Algebra, {}});
    } else if (head.text == "form") {
      need_algebra();
      need_tokens(tokens, 4, "form", number, line);
      check_name(tokens[1], number);
      check_unique(file.forms_, tokens[1], number);
      const int degree = parse_count(tokens[2], number);
      if (degree > file.dim())
        throw ParseError("degree exceeds the algebra dimension", tokens[2].column, number);
      try {
        file.forms_.emplace(tokens[1].text, parse_form(rest_of_line(line, tokens[3]), file.dim(), degree));
      } catch (const ParseError& e) {
        throw e.at_line(number, tokens[3].column - 1);
      }
      file.lines_.push_back({Line::Kind::Form, std::string(tokens[1].text)});
    } else if (head.text == "vector") {
      need_algebra();
      need_tokens(tokens, 2, "vector", number, line);
      check_name(tokens[1], number);
      check_unique(file.vectors_, tokens[1], number);
      const std::size_t n = static_cast<std::size_t>(file.dim());
      if (tokens.size() != n + 2)
        throw ParseError("vector needs " + std::to_string(n) + " components, found " +
                             std::to_string(tokens.size() - 2),
                         tokens.size() > n + 2 ? tokens[n + 2].column : head.column, number);
      Vector v(file.dim());
      for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = parse_scalar_at(tokens[i + 2], number);
      file.vectors_.emplace(tokens[1].text, std::move(v));
      file.lines_.push_back({Line::Kind::Vector, std::string(tokens[1].text)});
    } else if (head.text == "matrix") {
      need_tokens(tokens, 4, "matrix", number, line);
      check_name(tokens[1], number);
      check_unique(file.matrices_, tokens[1], number);
      const int rows = parse_count(tokens[2], number), cols = parse_count(tokens[3], number);
      const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
      if (tokens.size() != n + 4)
        throw ParseError("matrix needs " + std::to_string(n) + " entries, found " + std::to_string(tokens.size() - 4),
                         tokens.size() > n + 4 ? tokens[n + 4].column : head.column, number);
      LinearMap m(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
          m(i, j) = parse_scalar_at(tokens[4 + static_cast<std::size_t>(i * cols + j)], number);
      file.matrices_.emplace(tokens[1].text, std::move(m));
      file.lines_.push_back({Line::Kind::Matrix, std::string(tokens[1].text)});
    } else if (head.text == "expect") {
      need_tokens(tokens, 2, "expect", number, line);
      Expectation e{std::string(tokens[1].text), {}, number};
      std::string canonical = "expect";
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (i > 1) e.args.emplace_back(tokens[i].text);
        canonical += " " + std::string(tokens[i].text);
      }
      file.expectations_.push_back(std::move(e));
      file.lines_.push_back({Line::Kind::Expect, std::move(canonical)});
    } else {
      throw ParseError("unknown directive '" + std::string(head.text) + "'", head.column, number);
    }
  }
  if (!file.algebra_) throw ParseError("missing algebra line", 1, number == 0 ? 1 : number);
  return file;
}

StructureFile StructureFile::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

const KForm& StructureFile::form(const std::string& name) const {
  const auto it = forms_.find(name);
  if (it == forms_.end()) throw std::out_of_range("no form named '" + name + "'");
  return it->second;
}

const Vector& StructureFile::vector(const std::string& name) const {
  const auto it = vectors_.find(name);
  if (it == vectors_.end()) throw std::out_of_range("no vector named '" + name + "'");
  return it->second;
}

const LinearMap& StructureFile::matrix(const std::string& name) const {
  const auto it = matrices_.find(name);
  if (it == matrices_.end()) throw std::out_of_range("no matrix named '" + name + "'");
  return it->second;
}

std::string StructureFile::format() const {
  std::string out;
  for (const Line& line : lines_) {
    switch (line.kind) {
      case Line::Kind::Verbatim:
      case Line::Kind::Expect:
        out += line.text;
        break;
      case Line::Kind::Algebra:
        out += "algebra " + format_salamon(*algebra_);
        break;
      case Line::Kind::Form: {
        const KForm& f = forms_.at(line.text);
        out += "form " + line.text + " " + std::to_string(f.degree()) + " " + format_form(f);
        break;
      }
      case Line::Kind::Vector:
        out += "vector " + line.text + join_scalars(vectors_.at(line.text).transpose());
        break;
      case Line::Kind::Matrix: {
        const LinearMap& m = matrices_.at(line.text);
        out += "matrix " + line.text + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) +
               join_scalars(m);
        break;
      }
    }
    out += '\n';
  }
  return out;
}

LinearMap parse_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t number = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    const std::vector<Token> tokens = split(line);
    if (tokens.empty() || tokens.front().text.front() == '#') continue;
    std::vector<double> row;
    for (const Token& t : tokens) row.push_back(parse_scalar_at(t, number));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       tokens.back().column, number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix", 1, number == 0 ? 1 : number);
  LinearMap m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

LinearMap load_matrix(const std::filesystem::path& path) { return parse_matrix(read_text_file(path)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace g2lcc
