#include "g2lcc/g2.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "g2lcc/error.hpp"

namespace g2lcc {

namespace {

using Kind = NumericError::Kind;

KForm top_form(int n, double c) { return KForm(n, n, Eigen::VectorXd::Constant(1, c)); }

}  // namespace

MetricAndVolume metric_from_phi(const KForm& phi, double tol) {
  if (phi.dim() != 7 || phi.degree() != 3) throw DimensionError("metric_from_phi needs a 3-form on R^7");
  Eigen::MatrixXd b(7, 7);
  std::vector<KForm> contracted;
  for (int i = 1; i <= 7; ++i) contracted.push_back(interior(basis_vector(7, i), phi));
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j)
      b(i, j) = b(j, i) = wedge(wedge(contracted[i], contracted[j]), phi).coeff(0) / 6.0;

  double ref = 1.0;
  double det = b.determinant();
  const double scale = std::pow(std::max(phi.max_abs(), 1e-300), 3);
  if (!std::isfinite(det) || std::abs(det) <= tol * std::pow(scale, 7))
    throw NumericError(Kind::NotAG2Form, "the bilinear form of phi is degenerate");
  if (det < 0) {
    ref = -1.0;
    b = -b;
    det = -det;
  }
  Eigen::MatrixXd g = std::pow(det, -1.0 / 9.0) * b;
  try {
    return {Metric(std::move(g), tol), top_form(7, ref * std::pow(det, 1.0 / 9.0))};
  } catch (const NumericError&) {
    throw NumericError(Kind::NotAG2Form, "the bilinear form of phi is indefinite");
  }
}

G2Structure::G2Structure(LieAlgebra algebra, KForm phi, double tol)
    : alg_(std::move(algebra)), phi_(std::move(phi)) {
  if (alg_.dim() != 7 || phi_.dim() != 7 || phi_.degree() != 3)
    throw DimensionError("a G2-structure needs a 3-form on a 7-dimensional algebra");
  auto mv = metric_from_phi(phi_, tol);
  g_ = std::move(mv.g);
  vol_ = std::move(mv.volume);
  star_phi_ = star(phi_);
}

double G2Structure::norm(const KForm& a) const { return std::sqrt(std::max(0.0, norm2(a, g_))); }

KForm lee_form(const G2Structure& s) {
  const KForm dphi = s.algebra().d(s.phi());
  return 0.25 * s.star(wedge(s.star(dphi), s.phi()));
}

const char* to_string(G2Class::Tag tag) {
  switch (tag) {
    case G2Class::Tag::Calibrated: return "calibrated";
    case G2Class::Tag::Lcc: return "lcc";
    case G2Class::Tag::Lcp: return "lcp";
    case G2Class::Tag::Other: return "other";
  }
  return "other";
}

G2Class classify_g2(const G2Structure& s, double tol) {
  const LieAlgebra& alg = s.algebra();
  G2Class out;
  const KForm dphi = alg.d(s.phi());
  out.d_phi_norm = s.norm(dphi);
  out.theta = lee_form(s);
  out.d_theta_norm = s.norm(alg.d(out.theta));
  out.lcc_residual = s.norm(dphi + wedge(out.theta, s.phi()));
  out.lcp_residual = s.norm(alg.d(s.star_phi()) + (4.0 / 3.0) * wedge(out.theta, s.star_phi()));
  if (out.d_phi_norm <= tol) {
    out.tag = G2Class::Tag::Calibrated;
    out.theta = KForm(7, 1);
  } else if (out.d_theta_norm <= tol && out.lcc_residual <= tol) {
    out.tag = out.lcp_residual <= tol ? G2Class::Tag::Lcp : G2Class::Tag::Lcc;
  }
  return out;
}

KForm d_theta(const LieAlgebra& alg, const KForm& theta, const KForm& a) {
  if (theta.degree() != 1) throw DimensionError("d_theta: theta must be a 1-form");
  return alg.d(a) + wedge(theta, a);
}

DThetaSolution d_theta_solve(const G2Structure& s, const KForm& theta, double tol) {
  const LieAlgebra& alg = s.algebra();
  const int cols = binomial(7, 2), rows = binomial(7, 3);
  Eigen::MatrixXd m(rows, cols);
  for (int p = 0; p < cols; ++p) {
    KForm e(7, 2);
    e.coeff(p) = 1.0;
    m.col(p) = d_theta(alg, theta, e).coefficients();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  cod.setThreshold(1e-10);

  DThetaSolution out;
  out.rank = static_cast<int>(cod.rank());
  out.kernel_dim = cols - out.rank;
  KForm gamma(7, 2, cod.solve(s.phi().coefficients()));
  out.residual = s.norm(d_theta(alg, theta, gamma) - s.phi());
  if (out.residual <= tol) out.gamma = std::move(gamma);
  return out;
}

KForm lie_derivative(const LieAlgebra& alg, const Vector& x, const KForm& a) {
  KForm out = interior(x, alg.d(a));
  if (a.degree() > 0) out += alg.d(interior(x, a));
  return out;
}

ConformalReport conformal_analysis(const G2Structure& s, const Vector& x, double tol) {
  const LieAlgebra& alg = s.algebra();
  const KForm theta = lee_form(s);
  ConformalReport out;
  out.omega = interior(x, s.phi());
  const KForm dw = d_theta(alg, theta, out.omega);
  const double f = inner(dw, s.phi(), s.metric()) / norm2(s.phi(), s.metric());
  out.proportionality_residual = s.norm(dw - f * s.phi());
  out.theta_of_x = theta.as_vector().dot(x);
  if (out.proportionality_residual <= tol) {
    out.f_x = f;
    out.rho_x = f - out.theta_of_x;
  }
  out.norm2_x = s.metric().inner(x, x);
  out.lie_derivative_norm = s.norm(lie_derivative(alg, x, s.phi()));

  const Vector theta_sharp = sharp(theta, s.metric());
  out.x_is_sharp_theta = (x - theta_sharp).norm() <= tol * std::max(1.0, theta_sharp.norm());
  if (out.x_is_sharp_theta) {
    out.lie_derivative_vanishes = out.lie_derivative_norm <= tol;
    out.theta_x_phi_equals_d_theta_omega = s.norm(out.theta_of_x * s.phi() - dw) <= tol;
    out.theta_x_equals_norm2 = std::abs(out.theta_of_x - out.norm2_x) <= tol;
  }
  return out;
}

double identity_2star(const G2Structure& s, const Vector& x) {
  const KForm w = interior(x, s.phi());
  return s.norm(wedge(s.phi(), w) - 2.0 * s.star(w));
}

SU3Reduction reduce_to_su3(const G2Structure& s, const Vector& n, double tol) {
  if (n.size() != 7) throw DimensionError("reduce_to_su3: n must have 7 components");
  const Metric& g = s.metric();
  const double nn = g.inner(n, n);
  if (std::abs(nn - 1.0) > tol)
    throw NumericError(Kind::InvalidArgument, "n is not a unit vector (g(n, n) = " + std::to_string(nn) + ")");

  const Vector gn = g.matrix() * n;  // g(e_i, n)
  int drop = 0;
  for (int i = 1; i < 7; ++i)
    if (std::abs(gn[i]) > std::abs(gn[drop])) drop = i;

  LinearMap w(7, 6);
  int col = 0;
  for (int i = 0; i < 7; ++i) {
    if (i == drop) continue;
    Vector v = Vector::Unit(7, i) - gn[i] * n;
    for (int c = 0; c < col; ++c) v -= g.inner(w.col(c), v) * w.col(c);
    w.col(col++) = v / std::sqrt(g.inner(v, v));
  }

  const LieAlgebra& alg = s.algebra();
  // Dual coframe on W: w^k(v) = g(w_k, v).
  const Eigen::MatrixXd coframe = w.transpose() * g.matrix();
  bool closed = true;
  std::vector<KForm> de(6, KForm(6, 2));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      const Vector br = alg.bracket(w.col(i), w.col(j));
      if (std::abs(gn.dot(br)) > tol) closed = false;
      const Vector c = coframe * br;
      for (int k = 0; k < 6; ++k) de[k] += KForm::monomial(6, {i + 1, j + 1}, -c[k]);
    }

  LieAlgebra sub = closed ? LieAlgebra(de) : LieAlgebra::abelian(6);
  SU3Structure su3(std::move(sub), pullback(w, interior(n, s.phi())), pullback(w, s.phi()), tol);
  if ((su3.metric().matrix() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() > tol)
    throw NumericError(Kind::NotCompatible, "induced SU(3) metric differs from g restricted to n^perp");
  return {std::move(su3), std::move(w), closed};
}

KForm model_phi() {
  return KForm::monomial(7, {1, 2, 7}) + KForm::monomial(7, {3, 4, 7}) + KForm::monomial(7, {5, 6, 7}) +
         KForm::monomial(7, {1, 3, 5}) - KForm::monomial(7, {1, 4, 6}) - KForm::monomial(7, {2, 3, 6}) -
         KForm::monomial(7, {2, 4, 5});
}

}  // namespace g2lcc
