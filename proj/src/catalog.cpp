#include "g2lcc/catalog.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <map>
#include <optional>

#include "g2lcc/error.hpp"
#include "g2lcc/extensions.hpp"
#include "g2lcc/g2.hpp"
#include "g2lcc/notation.hpp"
#include "g2lcc/su3.hpp"

namespace g2lcc {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> keyed;

  explicit Args(const std::vector<std::string>& tokens) {
    for (const std::string& t : tokens) {
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        positional.push_back(t);
      else
        keyed[t.substr(0, eq)] = t.substr(eq + 1);
    }
  }

  const std::string& at(std::size_t i) const {
    if (i >= positional.size()) throw std::out_of_range("missing argument " + std::to_string(i + 1));
    return positional[i];
  }
  std::optional<std::string> get(const std::string& key) const {
    const auto it = keyed.find(key);
    if (it == keyed.end()) return std::nullopt;
    return it->second;
  }
  const std::string& need(const std::string& key) const {
    const auto it = keyed.find(key);
    if (it == keyed.end()) throw std::out_of_range("missing " + key + "=");
    return it->second;
  }
  bool flag(const std::string& word) const {
    return std::find(positional.begin(), positional.end(), word) != positional.end();
  }
};

struct Outcome {
  bool ok;
  std::string detail;
};

class Checker {
 public:
  Checker(const StructureFile& file, double tol) : file_(file), alg_(file.algebra()), tol_(tol) {}

  Outcome run(const std::string& check, const Args& a) const {
    if (check == "g2_metric") return g2_metric(a);
    if (check == "g2_class") return g2_class(a);
    if (check == "su3_class") return su3_class(a);
    if (check == "su3_metric") return su3_metric(a);
    if (check == "extend") return extend_check(a);
    if (check == "nk_torus") return nk_torus(a);
    if (check == "automorphism") return automorphism(a);
    if (check == "interior") return interior_check(a);
    if (check == "lie_derivative") return lie_derivative_check(a);
    if (check == "dtheta") return dtheta(a);
    if (check == "dtheta_solve") return dtheta_solve(a);
    if (check == "reduce") return reduce(a);
    if (check == "lattice") return lattice(a);
    return {false, "unknown check '" + check + "'"};
  }

 private:
  KForm inline_form(const std::string& text, int dim) const { return parse_form(text, dim); }
  G2Structure g2(const std::string& phi) const { return G2Structure(alg_, file_.form(phi), tol_); }
  SU3Structure su3(const std::string& omega, const std::string& psi) const {
    return SU3Structure(alg_, file_.form(omega), file_.form(psi), tol_);
  }

  Outcome g2_metric(const Args& a) const {
    if (!a.flag("identity")) return {false, "only 'identity' is supported"};
    const MetricAndVolume mv = metric_from_phi(file_.form(a.at(0)), tol_);
    const int n = mv.g.dim();
    const double dg = (mv.g.matrix() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    const double dv = (mv.volume - KForm::monomial(n, all)).max_abs();
    return {dg <= tol_ && dv <= tol_, "metric_error=" + num(dg) + " volume_error=" + num(dv)};
  }

  Outcome g2_class(const Args& a) const {
    const G2Class cls = classify_g2(g2(a.at(0)), tol_);
    bool ok = a.at(1) == to_string(cls.tag);
    std::string detail = std::string("tag=") + to_string(cls.tag) + " theta=" + format_form(cls.theta, {12, 1e-12});
    if (const auto theta = a.get("theta")) {
      const double err = (cls.theta - inline_form(*theta, alg_.dim())).max_abs();
      ok = ok && err <= tol_;
      detail += " theta_error=" + num(err);
    }
    return {ok, detail};
  }

  Outcome su3_class(const Args& a) const {
    const SU3Class cls = classify_su3(su3(a.at(0), a.at(1)), tol_);
    bool ok = a.at(2) == to_string(cls.tag);
    std::string detail = std::string("tag=") + to_string(cls.tag) + " c=" + num(cls.coupled_constant);
    if (const auto c = a.get("c")) {
      const double err = std::abs(cls.coupled_constant - parse_scalar(*c));
      ok = ok && cls.coupled && err <= tol_;
      detail += " c_error=" + num(err);
    }
    return {ok, detail};
  }

  Outcome su3_metric(const Args& a) const {
    if (!a.flag("identity")) return {false, "only 'identity' is supported"};
    const SU3Structure s = su3(a.at(0), a.at(1));
    const double err = (s.metric().matrix() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff();
    return {err <= tol_, "metric_error=" + num(err)};
  }

  Outcome extend_check(const Args& a) const {
    const ExtensionResult r = g2_from_coupled(su3(a.at(0), a.at(1)), file_.matrix(a.at(2)), tol_);
    const std::string printed = format_salamon(r.g2.algebra());
    const bool same = printed == a.need("salamon");
    return {same && r.verified, "algebra=" + printed + " tag=" + to_string(r.classification.tag) +
                                    " torsion_residual=" + num(r.torsion_residual)};
  }

  Outcome nk_torus(const Args& a) const {
    const NearlyKahlerTorus t = nk_mapping_torus(su3(a.at(0), a.at(1)), tol_);
    return {t.verified, std::string("tag=") + to_string(t.extension.classification.tag) +
                            " d_phi_residual=" + num(t.d_phi_residual) +
                            " d_star_phi_residual=" + num(t.d_star_phi_residual) +
                            " star_residual=" + num(t.star_residual)};
  }

  Outcome automorphism(const Args& a) const {
    const LinearMap& nu = file_.matrix(a.at(0));
    const double res = alg_.automorphism_residual(nu);
    bool ok = res <= tol_;
    std::string detail = "automorphism_residual=" + num(res);
    if (const auto name = a.get("preserves")) {
      const KForm& f = file_.form(*name);
      const double err = (pullback(nu, f) - f).max_abs();
      ok = ok && err <= tol_;
      detail += " pullback_error=" + num(err);
    }
    return {ok, detail};
  }

  Outcome interior_check(const Args& a) const {
    const KForm got = interior(file_.vector(a.at(1)), file_.form(a.at(0)));
    const double err = (got - inline_form(a.at(2), alg_.dim())).max_abs();
    return {err <= tol_, "value=" + format_form(got, {12, 1e-12}) + " error=" + num(err)};
  }

  Outcome lie_derivative_check(const Args& a) const {
    const G2Structure s = g2(a.at(0));
    const double n = s.norm(lie_derivative(alg_, file_.vector(a.at(1)), s.phi()));
    const bool zero = a.flag("zero");
    if (!zero && !a.flag("nonzero")) return {false, "expected 'zero' or 'nonzero'"};
    return {zero ? n <= tol_ : n > kNonzeroThreshold, "norm=" + num(n)};
  }

  Outcome dtheta(const Args& a) const {
    const G2Structure s = g2(a.at(0));
    const KForm theta = inline_form(a.need("theta"), alg_.dim());
    const KForm value = d_theta(alg_, theta, inline_form(a.need("gamma"), alg_.dim()));
    if (a.flag("equals")) {
      const double err = s.norm(value - s.phi());
      return {err <= tol_, "residual=" + num(err)};
    }
    if (a.flag("not_proportional")) {
      const double lambda = inner(value, s.phi(), s.metric()) / norm2(s.phi(), s.metric());
      const double err = s.norm(value - lambda * s.phi());
      return {err > kNonzeroThreshold, "best_multiple=" + num(lambda) + " residual=" + num(err)};
    }
    return {false, "expected 'equals' or 'not_proportional'"};
  }

  Outcome dtheta_solve(const Args& a) const {
    const G2Structure s = g2(a.at(0));
    const DThetaSolution sol = d_theta_solve(s, inline_form(a.need("theta"), alg_.dim()), tol_);
    bool ok = a.flag("exact") ? sol.gamma.has_value() && sol.residual <= tol_ : !sol.gamma.has_value();
    if (const auto r = a.get("rank")) ok = ok && std::to_string(sol.rank) == *r;
    if (const auto k = a.get("kernel")) ok = ok && std::to_string(sol.kernel_dim) == *k;
    std::string detail = "residual=" + num(sol.residual) + " rank=" + std::to_string(sol.rank) +
                         " kernel=" + std::to_string(sol.kernel_dim);
    if (sol.gamma) detail += " gamma=" + format_form(*sol.gamma, {12, 1e-12});
    return {ok, detail};
  }

  Outcome reduce(const Args& a) const {
    const G2Structure s = g2(a.at(0));
    const SU3Reduction r = reduce_to_su3(s, file_.vector(a.at(1)), tol_);
    const double e_omega = (r.su3.omega() - inline_form(a.need("omega"), 6)).max_abs();
    const double e_psi = (r.su3.psi_plus() - inline_form(a.need("psi_plus"), 6)).max_abs();
    const Eigen::MatrixXd restricted = r.basis.transpose() * s.metric().matrix() * r.basis;
    const double e_metric = (r.su3.metric().matrix() - restricted).cwiseAbs().maxCoeff();
    return {e_omega <= tol_ && e_psi <= tol_ && e_metric <= tol_,
            "omega_error=" + num(e_omega) + " psi_plus_error=" + num(e_psi) + " metric_error=" + num(e_metric)};
  }

  Outcome lattice(const Args& a) const {
    const LinearMap& d = file_.matrix(a.at(0));
    const LinearMap basis = a.get("basis") ? file_.matrix(*a.get("basis")) : LinearMap::Identity(d.rows(), d.cols());
    const double t[] = {parse_scalar(a.need("t"))};
    const LatticeReport rep = lattice_scan(d, basis, t, tol_).front();
    bool ok = true;
    if (a.flag("integral")) ok = ok && rep.integral;
    if (a.flag("not_integral")) ok = ok && !rep.integral;
    if (a.flag("unimodular")) ok = ok && rep.unimodular;
    std::string detail = "integer_deviation=" + num(rep.max_integer_deviation) + " det=" + num(rep.determinant);
    if (const auto m = a.get("matrix")) {
      const LinearMap& expected = file_.matrix(*m);
      const double err = (rep.matrix - expected).cwiseAbs().maxCoeff();
      ok = ok && err <= tol_;
      detail += " matrix_error=" + num(err);
    }
    std::string diag;
    for (Eigen::Index i = 0; i < rep.matrix.rows(); ++i) diag += (i ? "," : "") + num(rep.matrix(i, i));
    return {ok, detail + " diagonal=" + diag};
  }

  const StructureFile& file_;
  const LieAlgebra& alg_;
  double tol_;
};

}  // namespace

const char* to_string(CheckResult::Status status) {
  switch (status) {
    case CheckResult::Status::Pass: return "pass";
    case CheckResult::Status::Fail: return "FAIL";
    case CheckResult::Status::ExpectedFail: return "EXPECTED-FAIL";
  }
  return "?";
}

bool EntryReport::passed() const {
  return error.empty() &&
         std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckResult::Status::Fail; });
}

bool CatalogReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const EntryReport& e) { return e.passed(); });
}

int CatalogReport::count(CheckResult::Status status) const {
  int n = 0;
  for (const EntryReport& e : entries)
    n += static_cast<int>(std::count_if(e.checks.begin(), e.checks.end(),
                                        [&](const CheckResult& c) { return c.status == status; }));
  return n;
}

std::filesystem::path default_catalog_dir() { return G2LCC_CATALOG_DIR; }

std::vector<std::string> catalog_entries(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& item : std::filesystem::directory_iterator(dir))
    if (item.is_regular_file() && item.path().extension() == ".txt") names.push_back(item.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

StructureFile load_entry(const std::string& name, const std::filesystem::path& dir) {
  const std::string text = read_text_file(dir / (name + ".txt"));
  try {
    return StructureFile::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(name + ".txt:" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what(),
                     e.column(), e.line());
  }
}

EntryReport verify(const std::string& name, const StructureFile& file, const std::string& text, double tol) {
  EntryReport report{name, {}, {}};
  const bool canonical = file.format() == text;
  report.checks.push_back({"canonical", 0, canonical ? CheckResult::Status::Pass : CheckResult::Status::Fail,
                           "trivial", canonical ? "text is canonical" : "text differs from its canonical form"});
  const Checker checker(file, tol);
  for (const Expectation& e : file.expectations()) {
    const Args args(e.args);
    CheckResult result{e.check, e.line, CheckResult::Status::Fail, args.get("source").value_or(""), {}};
    const bool expected_fail = args.get("status") == "expected_fail";
    Outcome outcome{false, {}};
    try {
      outcome = checker.run(e.check, args);
    } catch (const std::exception& ex) {
      outcome = {false, std::string("error: ") + ex.what()};
    }
    result.detail = outcome.detail;
    if (result.source.empty()) {
      result.detail = "missing source= tag; " + result.detail;
    } else if (expected_fail) {
      result.status = outcome.ok ? CheckResult::Status::Fail : CheckResult::Status::ExpectedFail;
      if (outcome.ok) result.detail = "expected failure did not occur; " + result.detail;
    } else {
      result.status = outcome.ok ? CheckResult::Status::Pass : CheckResult::Status::Fail;
    }
    report.checks.push_back(std::move(result));
  }
  return report;
}

EntryReport verify(const std::string& name, const std::filesystem::path& dir, double tol) {
  const StructureFile file = load_entry(name, dir);
  return verify(name, file, read_text_file(dir / (name + ".txt")), tol);
}

CatalogReport verify_all(const std::filesystem::path& dir, double tol) {
  const std::vector<std::string> names = catalog_entries(dir);
  std::vector<std::future<EntryReport>> jobs;
  for (const std::string& name : names)
    jobs.push_back(std::async(std::launch::async, [&dir, name, tol] {
      try {
        return verify(name, dir, tol);
      } catch (const std::exception& e) {
        return EntryReport{name, {}, e.what()};
      }
    }));
  CatalogReport report;
  for (auto& job : jobs) report.entries.push_back(job.get());
  return report;
}

}  // namespace g2lcc
