#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

#include "g2lcc/catalog.hpp"
#include "g2lcc/error.hpp"
#include "g2lcc/extensions.hpp"
#include "g2lcc/g2.hpp"
#include "g2lcc/notation.hpp"
#include "g2lcc/structure_file.hpp"
#include "g2lcc/su3.hpp"

namespace g2lcc::cli {

namespace {

constexpr int kOk = 0, kFalse = 1, kParse = 2, kNumeric = 3;

const FormatOptions kPrint{12, 1e-12};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string flag(bool b) { return b ? "true" : "false"; }
std::string form_text(const KForm& f) { return format_form(f, kPrint); }

std::string join(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += (out.empty() ? "" : ",") + num(m(i, j));
  return out;
}

std::string warped_text(const WarpedForm& w) {
  std::string out;
  for (const auto& t : w.terms()) {
    const std::string r = t.m == 0 ? "" : t.m == 1 ? "r*" : "r^" + std::to_string(t.m) + "*";
    const auto add = [&](const KForm& f, const char* suffix) {
      if (f.max_abs() <= kPrint.drop_below) return;
      if (!out.empty()) out += " + ";
      out += r + "(" + form_text(f) + ")" + suffix;
    };
    add(t.alpha, "");
    if (w.degree() > 0) add(t.beta, "^dr");
  }
  return out.empty() ? "0" : out;
}

// Parse errors from files are reported as path:line:column.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
auto with_path(const std::string& path, F&& load) {
  try {
    return load();
  } catch (const ParseError& e) {
    throw FileError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
  }
}

StructureFile load_structure(const std::string& path) {
  return with_path(path, [&] { return StructureFile::load(path); });
}

LinearMap load_matrix_file(const std::string& path) {
  return with_path(path, [&] { return load_matrix(path); });
}

// A form given by name, or else as a literal sum of monomials.
KForm form_arg(const StructureFile& file, const std::string& text, int degree, const char* option) {
  if (file.has_form(text)) {
    if (file.form(text).degree() != degree)
      throw DimensionError(std::string(option) + " needs a " + std::to_string(degree) + "-form");
    return file.form(text);
  }
  try {
    return parse_form(text, file.dim(), degree);
  } catch (const ParseError& e) {
    throw FileError(std::string(option) + " '" + text + "': not a form name, and column " +
                    std::to_string(e.column()) + ": " + e.what());
  }
}

struct Options {
  std::string file, form = "phi", omega = "omega", psi = "psi_plus", theta, gamma, vector, derivation, basis,
                    dir = default_catalog_dir().string();
  std::vector<std::string> t;
  bool check_pattern4 = false, roundtrip = false;
};

int classify_g2_cmd(const Options& o, std::ostream& out) {
  const StructureFile f = load_structure(o.file);
  const G2Structure s(f.algebra(), f.form(o.form));
  const G2Class c = classify_g2(s);
  out << to_string(c.tag) << " theta=" << form_text(c.theta) << "\n";
  out << "tag=" << to_string(c.tag) << "\n";
  out << "theta=" << form_text(c.theta) << "\n";
  out << "d_phi_norm=" << num(c.d_phi_norm) << "\n";
  out << "d_theta_norm=" << num(c.d_theta_norm) << "\n";
  out << "lcc_residual=" << num(c.lcc_residual) << "\n";
  out << "lcp_residual=" << num(c.lcp_residual) << "\n";
  return c.tag == G2Class::Tag::Other ? kFalse : kOk;
}

int classify_su3_cmd(const Options& o, std::ostream& out) {
  const StructureFile f = load_structure(o.file);
  const SU3Structure s(f.algebra(), f.form(o.omega), f.form(o.psi));
  const SU3Class c = classify_su3(s);
  out << to_string(c.tag) << " c=" << num(c.coupled_constant) << "\n";
  out << "tag=" << to_string(c.tag) << "\n";
  out << "coupled=" << flag(c.coupled) << "\n";
  out << "nearly_kahler=" << flag(c.nearly_kahler) << "\n";
  out << "half_flat=" << flag(c.half_flat) << "\n";
  out << "coupled_constant=" << num(c.coupled_constant) << "\n";
  out << "coupled_residual=" << num(c.coupled_residual) << "\n";
  out << "nk_omega_residual=" << num(c.nk_omega_residual) << "\n";
  out << "nk_psi_residual=" << num(c.nk_psi_residual) << "\n";
  out << "nk_psi_residual_flipped=" << num(c.nk_psi_residual_flipped) << "\n";
  out << "half_flat_residual=" << num(c.half_flat_residual) << "\n";
  out << "psi_minus=" << form_text(s.psi_minus()) << "\n";
  return c.tag == SU3Class::Tag::None ? kFalse : kOk;
}

int lee_cmd(const Options& o, std::ostream& out) {
  const StructureFile f = load_structure(o.file);
  const KForm theta = lee_form(G2Structure(f.algebra(), f.form(o.form)));
  out << "theta=" << form_text(theta) << "\n";
  for (int i = 1; i <= theta.dim(); ++i) out << "theta_" << i << "=" << num(theta.component({i})) << "\n";
  return kOk;
}

int extend_cmd(const Options& o, std::ostream& out) {
  const StructureFile f = load_structure(o.file);
  const SU3Structure s(f.algebra(), f.form(o.omega), f.form(o.psi));
  const LinearMap d = load_matrix_file(o.derivation);
  if (o.check_pattern4) {
    const PatternFit fit = fit_pattern4(d);
    out << "pattern4_residual=" << num(fit.residual) << "\n";
    const ExtensionResult r = g2_from_coupled(s, d);
    out << "algebra=" << format_salamon(r.g2.algebra()) << "\n";
    out << "phi=" << form_text(r.g2.phi()) << "\n";
    out << "coupled_constant=" << num(r.coupled_constant) << "\n";
    out << "tag=" << to_string(r.classification.tag) << "\n";
    out << "theta=" << form_text(r.classification.theta) << "\n";
    out << "expected_theta=" << form_text(r.expected_theta) << "\n";
    out << "stabilizer_residual=" << num(r.stabilizer_residual) << "\n";
    out << "torsion_residual=" << num(r.torsion_residual) << "\n";
    out << "verified=" << flag(r.verified) << "\n";
    return r.verified ? kOk : kFalse;
  }
  // Without the pattern check: build phi = omega ^ e7 + psi_plus anyway and
  // report whether it is lcc with theta = c e7.
  const SU3Class cls = classify_su3(s);
  if (!cls.coupled) throw NumericError(NumericError::Kind::NotCoupled, "the SU(3)-structure is not coupled");
  const LieAlgebra g = extend(s.algebra(), d);
  LinearMap embed = LinearMap::Zero(6, 7);
  embed.leftCols(6).setIdentity();
  const KForm eta = KForm::monomial(7, {7});
  const G2Structure g2(g, wedge(pullback(embed, s.omega()), eta) + pullback(embed, s.psi_plus()));
  const G2Class c = classify_g2(g2);
  const double c0 = cls.coupled_constant;
  const double torsion = g2.norm(g.d(g2.phi()) + c0 * wedge(eta, g2.phi()));
  const bool ok = c.tag == G2Class::Tag::Lcc && torsion <= kTolerance && g2.norm(c.theta - c0 * eta) <= kTolerance;
  out << "algebra=" << format_salamon(g) << "\n";
  out << "phi=" << form_text(g2.phi()) << "\n";
  out << "coupled_constant=" << num(c0) << "\n";
  out << "tag=" << to_string(c.tag) << "\n";
  out << "theta=" << form_text(c.theta) << "\n";
  out << "expected_theta=" << form_text(c0 * eta) << "\n";
  out << "torsion_residual=" << num(torsion) << "\n";
  out << "verified=" << flag(ok) << "\n";
  return ok ? kOk : kFalse;
}

int dtheta_solve_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  const StructureFile f = load_structure(o.file);
  const G2Structure s(f.algebra(), f.form(o.form));
  const KForm theta = form_arg(f, o.theta, 1, "--theta");
  const double closed = f.algebra().d(theta).max_abs();
  if (closed > kTolerance)
    err << "warning: d theta is not zero (max coefficient " << num(closed) << "), so d_theta^2 != 0\n";
  const DThetaSolution sol = d_theta_solve(s, theta);
  out << "rank=" << sol.rank << "\n";
  out << "kernel_dim=" << sol.kernel_dim << "\n";
  out << "residual=" << num(sol.residual) << "\n";
  out << "gamma=" << (sol.gamma ? form_text(*sol.gamma) : "NOT-EXACT") << "\n";
  bool ok = sol.gamma.has_value();
  if (!o.gamma.empty()) {
    const KForm gamma = form_arg(f, o.gamma, 2, "--gamma");
    const double r = s.norm(d_theta(f.algebra(), theta, gamma) - s.phi());
    out << "user_gamma=" << form_text(gamma) << "\n";
    out << "user_gamma_residual=" << num(r) << "\n";
    out << "user_gamma_verified=" << flag(r <= kTolerance) << "\n";
    ok = ok && r <= kTolerance;
  }
  return ok ? kOk : kFalse;
}

int reduce_cmd(const Options& o, std::ostream& out) {
  const StructureFile f = load_structure(o.file);
  const G2Structure s(f.algebra(), f.form(o.form));
  const SU3Reduction r = reduce_to_su3(s, f.vector(o.vector));
  const Eigen::MatrixXd restricted = r.basis.transpose() * s.metric().matrix() * r.basis;
  out << "omega=" << form_text(r.su3.omega()) << "\n";
  out << "psi_plus=" << form_text(r.su3.psi_plus()) << "\n";
  out << "psi_minus=" << form_text(r.su3.psi_minus()) << "\n";
  for (int j = 0; j < 6; ++j) out << "w" << j + 1 << "=" << join(r.basis.col(j).transpose()) << "\n";
  out << "is_subalgebra=" << flag(r.is_subalgebra) << "\n";
  out << "metric_residual=" << num((r.su3.metric().matrix() - restricted).cwiseAbs().maxCoeff()) << "\n";
  return kOk;
}

int warped_cmd(const Options& o, bool is_cone, std::ostream& out) {
  const StructureFile f = load_structure(o.file);
  const SU3Structure s(f.algebra(), f.form(o.omega), f.form(o.psi));
  const WarpedReport r = is_cone ? cone(s) : cylinder(s);
  out << "coupled_constant=" << num(r.coupled_constant) << "\n";
  out << "phi=" << warped_text(r.phi) << "\n";
  out << "theta=" << warped_text(r.theta) << "\n";
  out << "lcc_residual=" << num(r.lcc_residual) << "\n";
  out << "theta_closed_residual=" << num(r.theta_closed_residual) << "\n";
  out << "metric_residual=" << num(r.metric_residual) << "\n";
  out << "verified=" << flag(r.verified) << "\n";
  return r.verified ? kOk : kFalse;
}

int lattice_cmd(const Options& o, std::ostream& out) {
  const LinearMap d = load_matrix_file(o.derivation);
  const LinearMap basis = o.basis.empty() ? LinearMap::Identity(d.rows(), d.cols()) : load_matrix_file(o.basis);
  std::vector<double> ts;
  for (const std::string& t : o.t) {
    try {
      ts.push_back(parse_scalar(t));
    } catch (const ParseError& e) {
      throw FileError("--t '" + t + "': " + e.what());
    }
  }
  bool any = false;
  for (const LatticeReport& r : lattice_scan(d, basis, ts)) {
    out << "t=" << num(r.t) << " integral=" << flag(r.integral) << " max_integer_deviation="
        << num(r.max_integer_deviation) << " det=" << num(r.determinant) << " unimodular=" << flag(r.unimodular)
        << " matrix=" << join(r.matrix) << "\n";
    any = any || (r.integral && r.unimodular);
  }
  return any ? kOk : kFalse;
}

int verify_all_cmd(const Options& o, std::ostream& out) {
  const CatalogReport report = verify_all(o.dir);
  bool errors = false;
  for (const EntryReport& e : report.entries) {
    if (!e.error.empty()) {
      out << e.name << " ERROR " << e.error << "\n";
      errors = true;
    }
    for (const CheckResult& c : e.checks)
      out << e.name << ":" << c.line << " " << c.check << " " << to_string(c.status) << " source=" << c.source << " "
          << c.detail << "\n";
  }
  out << "entries=" << report.entries.size() << "\n";
  out << "passed=" << report.count(CheckResult::Status::Pass) << "\n";
  out << "failed=" << report.count(CheckResult::Status::Fail) << "\n";
  out << "expected_fail=" << report.count(CheckResult::Status::ExpectedFail) << "\n";
  out << "result=" << (report.passed() ? "pass" : "FAIL") << "\n";
  if (errors) return kParse;
  return report.passed() ? kOk : kFalse;
}

int parse_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string text = read_text_file(o.file);
  const StructureFile f = with_path(o.file, [&] { return StructureFile::parse(text); });
  const std::string canonical = f.format();
  out << canonical;
  if (!o.roundtrip || canonical == text) return kOk;
  std::istringstream a(text), b(canonical);
  std::string la, lb;
  for (int line = 1;; ++line) {
    const bool ha = static_cast<bool>(std::getline(a, la)), hb = static_cast<bool>(std::getline(b, lb));
    if (!ha && !hb) {
      err << o.file << ": differs from its canonical form in line endings\n";
      break;
    }
    if (!ha || !hb || la != lb) {
      err << o.file << ":" << line << ": differs from its canonical form\n< " << la << "\n> " << lb << "\n";
      break;
    }
  }
  return kFalse;
}

// CLI11 would read "-e7" in "--theta -e7" as an option; glue such values on.
std::vector<std::string> glue_negative_values(const std::vector<std::string>& args) {
  static const char* valued[] = {"--theta", "--gamma", "--t", "--form", "--omega", "--psi", "--vector"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const bool takes_value = std::find(std::begin(valued), std::end(valued), args[i]) != std::end(valued);
    if (takes_value && i + 1 < args.size() && args[i + 1].size() > 1 && args[i + 1][0] == '-' &&
        args[i + 1][1] != '-') {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computations with G2- and SU(3)-structures on Lie algebras", "g2lcc"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;

  auto file_arg = [&](CLI::App* sub) { sub->add_option("FILE", o.file, "structure file")->required(); };
  auto phi_arg = [&](CLI::App* sub) { sub->add_option("--form", o.form, "name of the G2 3-form")->capture_default_str(); };
  auto pair_args = [&](CLI::App* sub) {
    sub->add_option("--omega", o.omega, "name of omega")->capture_default_str();
    sub->add_option("--psi", o.psi, "name of psi_plus")->capture_default_str();
  };

  auto* g2c = app.add_subcommand("classify-g2", "torsion class and Lee form of a G2-structure");
  file_arg(g2c);
  phi_arg(g2c);
  g2c->callback([&] { action = [&] { return classify_g2_cmd(o, out); }; });

  auto* su3c = app.add_subcommand("classify-su3", "class and coupled constant of an SU(3)-structure");
  file_arg(su3c);
  pair_args(su3c);
  su3c->callback([&] { action = [&] { return classify_su3_cmd(o, out); }; });

  auto* lee = app.add_subcommand("lee", "Lee form of a G2-structure");
  file_arg(lee);
  phi_arg(lee);
  lee->callback([&] { action = [&] { return lee_cmd(o, out); }; });

  auto* ext = app.add_subcommand("extend", "rank-one extension of a coupled SU(3)-structure");
  file_arg(ext);
  pair_args(ext);
  ext->add_option("--derivation", o.derivation, "matrix file, columns are images")->required();
  ext->add_flag("--check-pattern4", o.check_pattern4, "require D in realified sl(3,C) annihilating psi_plus");
  ext->callback([&] { action = [&] { return extend_cmd(o, out); }; });

  auto* dts = app.add_subcommand("dtheta-solve", "solve d_theta gamma = phi");
  file_arg(dts);
  phi_arg(dts);
  dts->add_option("--theta", o.theta, "1-form name or literal")->required();
  dts->add_option("--gamma", o.gamma, "candidate 2-form to verify");
  dts->callback([&] { action = [&] { return dtheta_solve_cmd(o, out, err); }; });

  auto* red = app.add_subcommand("reduce", "SU(3)-structure on the orthogonal complement of a unit vector");
  file_arg(red);
  phi_arg(red);
  red->add_option("--vector", o.vector, "name of the unit vector")->required();
  red->callback([&] { action = [&] { return reduce_cmd(o, out); }; });

  for (const bool is_cone : {false, true}) {
    auto* w = app.add_subcommand(is_cone ? "cone" : "cylinder",
                                 is_cone ? "G2-structure on the cone" : "G2-structure on the cylinder");
    file_arg(w);
    pair_args(w);
    w->callback([&, is_cone] { action = [&, is_cone] { return warped_cmd(o, is_cone, out); }; });
  }

  auto* lat = app.add_subcommand("lattice-scan", "test exp(tD) for integrality in a basis");
  lat->add_option("DFILE", o.derivation, "matrix file")->required();
  lat->add_option("--basis", o.basis, "matrix file, basis vectors as columns");
  lat->add_option("--t", o.t, "candidate values")->required()->delimiter(',');
  lat->callback([&] { action = [&] { return lattice_cmd(o, out); }; });

  auto* cat = app.add_subcommand("catalog", "regression catalog");
  cat->require_subcommand(1);
  auto* va = cat->add_subcommand("verify-all", "verify every catalog entry");
  va->add_option("--dir", o.dir, "catalog directory")->capture_default_str();
  va->callback([&] { action = [&] { return verify_all_cmd(o, out); }; });

  auto* prs = app.add_subcommand("parse", "parse a structure file and print it canonically");
  prs->add_option("FILE", o.file, "structure file")->required();
  prs->add_flag("--roundtrip", o.roundtrip, "exit 1 unless the file is already canonical");
  prs->callback([&] { action = [&] { return parse_cmd(o, out, err); }; });

  try {
    std::vector<std::string> reversed = glue_negative_values(args);
    std::reverse(reversed.begin(), reversed.end());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    return action();
  } catch (const FileError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ParseError& e) {
    err << "parse error: line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
    return kParse;
  } catch (const NumericError& e) {
    err << "numeric error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kNumeric;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kParse;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
}

}  // namespace g2lcc::cli
