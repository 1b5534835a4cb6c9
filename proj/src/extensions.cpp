#include "g2lcc/extensions.hpp"

#include <algorithm>
#include <cmath>

#include "g2lcc/error.hpp"

namespace g2lcc {

namespace {

using Kind = NumericError::Kind;

// [I | 0]: pulls forms on R^n back to R^(n+1).
LinearMap embedding(int n) {
  LinearMap p = LinearMap::Zero(n, n + 1);
  p.leftCols(n).setIdentity();
  return p;
}

double sign_of_degree(int k) { return (k & 1) ? -1.0 : 1.0; }

}  // namespace

KForm infinitesimal_action(const LinearMap& d, const KForm& a) {
  const int n = a.dim();
  if (d.rows() != n || d.cols() != n) throw DimensionError("infinitesimal_action: matrix size mismatch");
  KForm out(n, a.degree());
  for (int p = 0; p < a.size(); ++p) {
    const double c = a.coeff(p);
    if (c == 0.0) continue;
    const auto labels = a.index(p).labels();
    // D.e^i = sum_l D_il e^l, applied slot by slot.
    for (std::size_t slot = 0; slot < labels.size(); ++slot) {
      KForm term = KForm::scalar(n, c);
      for (std::size_t s = 0; s < labels.size(); ++s) {
        const KForm factor = s == slot ? KForm::one_form(d.row(labels[s] - 1).transpose())
                                       : KForm::monomial(n, {labels[s]});
        term = wedge(term, factor);
      }
      out += term;
    }
  }
  return out;
}

PatternFit fit_pattern4(const LinearMap& d) {
  if (d.rows() != 6 || d.cols() != 6) throw DimensionError("fit_pattern4 needs a 6x6 matrix");
  PatternFit out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.a(i, j) = {0.5 * (d(2 * i, 2 * j) + d(2 * i + 1, 2 * j + 1)),
                     0.5 * (d(2 * i, 2 * j + 1) - d(2 * i + 1, 2 * j))};
  const std::complex<double> shift = out.a.trace() / 3.0;
  for (int i = 0; i < 3; ++i) out.a(i, i) -= shift;
  out.residual = (d - realify(out.a)).norm();
  return out;
}

ExtensionResult g2_from_coupled(const SU3Structure& s, const LinearMap& d, double tol) {
  const SU3Class cls = classify_su3(s, tol);
  if (!cls.coupled) throw NumericError(Kind::NotCoupled, "the SU(3)-structure is not coupled");
  const LieAlgebra& h = s.algebra();
  if (d.rows() != 6 || d.cols() != 6) throw DimensionError("derivation must be 6x6");
  if (!h.is_derivation(d, tol))
    throw NumericError(Kind::NotADerivation,
                       "matrix is not a derivation (residual " + std::to_string(h.derivation_residual(d)) + ")");
  const PatternFit fit = fit_pattern4(d);
  if (fit.residual > tol)
    throw NumericError(Kind::NotInPattern, "derivation is not the realification of a traceless complex matrix "
                                           "(residual " + std::to_string(fit.residual) + ")");
  const double stabilizer = infinitesimal_action(d, s.psi_plus()).max_abs();
  if (stabilizer > tol)
    throw NumericError(Kind::NotInPattern, "derivation does not annihilate psi_plus (residual " +
                                               std::to_string(stabilizer) + ")");

  const LinearMap p = embedding(6);
  const KForm eta = KForm::monomial(7, {7});
  const KForm omega = pullback(p, s.omega());
  const KForm psi = pullback(p, s.psi_plus());
  const double c = cls.coupled_constant;
  G2Structure g2(extend(h, d, tol), wedge(omega, eta) + psi, tol);

  const KForm dphi = g2.algebra().d(g2.phi());
  const double torsion = g2.norm(dphi + c * wedge(eta, g2.phi()));
  G2Class g2cls = classify_g2(g2, tol);
  const bool ok = torsion <= tol && g2cls.tag == G2Class::Tag::Lcc &&
                  g2.norm(g2cls.theta - c * eta) <= tol;
  return {std::move(g2), eta,   omega, psi, c, c * eta, std::move(g2cls), stabilizer, torsion,
          ok};
}

NearlyKahlerTorus nk_mapping_torus(const SU3Structure& s, double tol) {
  if (!classify_su3(s, tol).nearly_kahler)
    throw NumericError(Kind::NotNearlyKahler, "the SU(3)-structure is not nearly Kaehler");
  NearlyKahlerTorus out{g2_from_coupled(s, LinearMap::Zero(6, 6), tol)};
  const G2Structure& g2 = out.extension.g2;
  const KForm& eta = out.extension.eta;
  const KForm psi_minus = pullback(embedding(6), s.psi_minus());
  const KForm half_omega2 = 0.5 * wedge(out.extension.omega, out.extension.omega);
  out.star_residual = g2.norm(g2.star_phi() - (wedge(psi_minus, eta) + half_omega2));
  out.star_residual_flipped = g2.norm(g2.star_phi() - (wedge(-psi_minus, eta) + half_omega2));
  out.d_phi_residual = g2.norm(g2.algebra().d(g2.phi()) + 3.0 * wedge(eta, g2.phi()));
  out.d_star_phi_residual = g2.norm(g2.algebra().d(g2.star_phi()) + 4.0 * wedge(eta, g2.star_phi()));
  out.verified = out.star_residual <= tol && out.d_phi_residual <= tol && out.d_star_phi_residual <= tol &&
                 out.extension.classification.tag == G2Class::Tag::Lcp;
  return out;
}

// ---------------------------------------------------------------------------
// Warped forms

WarpedForm WarpedForm::power(int m, const KForm& alpha) {
  WarpedForm w(alpha.dim(), alpha.degree());
  w.add(m, alpha, KForm(alpha.dim(), std::max(0, alpha.degree() - 1)));
  return w;
}

WarpedForm WarpedForm::power_dr(int m, const KForm& beta) {
  WarpedForm w(beta.dim(), beta.degree() + 1);
  w.add(m, KForm(beta.dim(), beta.degree() + 1), beta);
  return w;
}

void WarpedForm::add(int m, const KForm& alpha, const KForm& beta) {
  if (alpha.dim() != dim_ || beta.dim() != dim_ || alpha.degree() != degree_ ||
      beta.degree() != std::max(0, degree_ - 1))
    throw DimensionError("warped term has inconsistent degrees");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, int key) { return t.m < key; });
  if (it != terms_.end() && it->m == m) {
    it->alpha += alpha;
    if (degree_ > 0) it->beta += beta;
  } else {
    terms_.insert(it, Term{m, alpha, degree_ > 0 ? beta : KForm(dim_, 0)});
  }
}

WarpedForm& WarpedForm::operator+=(const WarpedForm& other) {
  if (other.dim_ != dim_ || other.degree_ != degree_) throw DimensionError("warped forms differ in shape");
  for (const Term& t : other.terms_) add(t.m, t.alpha, t.beta);
  return *this;
}

WarpedForm& WarpedForm::operator*=(double s) {
  for (Term& t : terms_) {
    t.alpha *= s;
    t.beta *= s;
  }
  return *this;
}

double WarpedForm::max_abs() const {
  double out = 0;
  for (const Term& t : terms_) out = std::max({out, t.alpha.max_abs(), degree_ > 0 ? t.beta.max_abs() : 0.0});
  return out;
}

KForm WarpedForm::at(double r) const {
  const LinearMap p = embedding(dim_);
  const KForm dr = KForm::monomial(dim_ + 1, {dim_ + 1});
  KForm out(dim_ + 1, degree_);
  for (const Term& t : terms_) {
    KForm f = pullback(p, t.alpha);
    if (degree_ > 0) f += wedge(pullback(p, t.beta), dr);
    out += std::pow(r, t.m) * f;
  }
  return out;
}

WarpedForm warped_d(const LieAlgebra& alg, const WarpedForm& w) {
  WarpedForm out(w.dim(), w.degree() + 1);
  const int k = w.degree();
  for (const auto& t : w.terms()) {
    // d(r^m alpha) = r^m d alpha + m r^(m-1) (-1)^k alpha ^ dr
    // d(r^m beta ^ dr) = r^m d beta ^ dr
    out.add(t.m, alg.d(t.alpha), k > 0 ? alg.d(t.beta) : KForm(w.dim(), k));
    if (t.m != 0) out.add(t.m - 1, KForm(w.dim(), k + 1), t.m * sign_of_degree(k) * t.alpha);
  }
  return out;
}

WarpedForm wedge(const WarpedForm& a, const WarpedForm& b) {
  if (a.dim() != b.dim()) throw DimensionError("warped wedge: dimension mismatch");
  const int n = a.dim();
  WarpedForm out(n, a.degree() + b.degree());
  for (const auto& s : a.terms())
    for (const auto& t : b.terms()) {
      // (a1 + b1 dr)(a2 + b2 dr) = a1 a2 + (a1 b2 + (-1)^deg(a2) b1 a2) dr
      KForm beta(n, std::max(0, out.degree() - 1));
      if (b.degree() > 0) beta += wedge(s.alpha, t.beta);
      if (a.degree() > 0) beta += sign_of_degree(b.degree()) * wedge(s.beta, t.alpha);
      out.add(s.m + t.m, wedge(s.alpha, t.alpha), beta);
    }
  return out;
}

namespace {

WarpedReport warped_report(const SU3Structure& s, int omega_power, int psi_power, WarpedForm theta, double c,
                           double tol) {
  WarpedReport out;
  out.coupled_constant = c;
  out.phi = WarpedForm::power_dr(omega_power, s.omega()) + WarpedForm::power(psi_power, s.psi_plus());
  out.theta = std::move(theta);
  const LieAlgebra& alg = s.algebra();
  out.lcc_residual = (warped_d(alg, out.phi) + wedge(out.theta, out.phi)).max_abs();
  out.theta_closed_residual = warped_d(alg, out.theta).max_abs();
  const Eigen::MatrixXd& h = s.metric().matrix();
  for (double r : {0.5, 1.0, 2.0}) {
    Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(7, 7);
    expected.topLeftCorner(6, 6) = std::pow(r, omega_power) * h;
    const auto mv = metric_from_phi(out.phi.at(r), tol);
    out.metric_residual = std::max(out.metric_residual, (mv.g.matrix() - expected).cwiseAbs().maxCoeff());
  }
  out.verified = out.lcc_residual <= tol && out.theta_closed_residual <= tol && out.metric_residual <= tol;
  return out;
}

double require_coupled(const SU3Structure& s, double tol) {
  const SU3Class cls = classify_su3(s, tol);
  if (!cls.coupled) throw NumericError(Kind::NotCoupled, "the SU(3)-structure is not coupled");
  return cls.coupled_constant;
}

}  // namespace

WarpedReport cylinder(const SU3Structure& s, double tol) {
  const double c = require_coupled(s, tol);
  return warped_report(s, 0, 0, WarpedForm::power_dr(0, KForm::scalar(6, c)), c, tol);
}

WarpedReport cone(const SU3Structure& s, double tol) {
  const double c = require_coupled(s, tol);
  if (std::abs(c - 3.0) <= tol)
    throw NumericError(Kind::InvalidArgument,
                       "coupled constant 3: phi is closed on the cone, so it is not locally conformal calibrated");
  return warped_report(s, 2, 3, WarpedForm::power_dr(-1, KForm::scalar(6, c - 3.0)), c, tol);
}

}  // namespace g2lcc
