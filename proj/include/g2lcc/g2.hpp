#pragma once

// G2-structures phi on seven-dimensional Lie algebras: induced metric and
// volume, Lee form, torsion classes, the twisted differential d_theta and
// the reduction to SU(3) on the orthogonal complement of a unit vector.

#include <optional>

#include "g2lcc/forms.hpp"
#include "g2lcc/lie.hpp"
#include "g2lcc/su3.hpp"

namespace g2lcc {

struct MetricAndVolume {
  Metric g;
  KForm volume;  // 7-form
};

/// g(X, Y) dV = (1/6) i_X phi ^ i_Y phi ^ phi. With B defined against
/// e^{1..7}, a negative det B flips the reference volume; then
/// g = det(B)^{-1/9} B and dV = det(B)^{1/9} times the reference.
/// Throws NotAG2Form when B is singular or indefinite.
MetricAndVolume metric_from_phi(const KForm& phi, double tol = kTolerance);

class G2Structure {
 public:
  G2Structure(LieAlgebra algebra, KForm phi, double tol = kTolerance);

  const LieAlgebra& algebra() const { return alg_; }
  const KForm& phi() const { return phi_; }
  const Metric& metric() const { return g_; }
  const KForm& volume() const { return vol_; }
  const KForm& star_phi() const { return star_phi_; }

  /// Hodge star of g in the orientation of the volume form.
  KForm star(const KForm& a) const { return hodge(a, g_, vol_); }
  /// |a|_g with the Gram-determinant pairing.
  double norm(const KForm& a) const;

 private:
  LieAlgebra alg_;
  KForm phi_;
  Metric g_ = Metric::identity(7);
  KForm vol_, star_phi_;
};

/// theta = (1/4) * ( *d phi ^ phi ).
KForm lee_form(const G2Structure& s);

struct G2Class {
  enum class Tag { Calibrated, Lcc, Lcp, Other };
  Tag tag = Tag::Other;
  KForm theta;                 // Lee form; zero when calibrated
  double d_phi_norm = 0;       // |d phi|
  double d_theta_norm = 0;     // |d theta|
  double lcc_residual = 0;     // |d phi + theta ^ phi|
  double lcp_residual = 0;     // |d *phi + (4/3) theta ^ *phi|
};

const char* to_string(G2Class::Tag tag);

G2Class classify_g2(const G2Structure& s, double tol = kTolerance);

/// d a + theta ^ a. Squares to zero only when d theta = 0.
KForm d_theta(const LieAlgebra& alg, const KForm& theta, const KForm& a);

struct DThetaSolution {
  std::optional<KForm> gamma;  // minimum-norm solution of d_theta gamma = phi
  double residual = 0;         // |d_theta gamma - phi|_g
  int rank = 0;                // rank of d_theta on 2-forms
  int kernel_dim = 0;          // dim of d_theta-closed 2-forms
};

DThetaSolution d_theta_solve(const G2Structure& s, const KForm& theta, double tol = kTolerance);

/// L_X a = d(i_X a) + i_X(d a) for a left-invariant vector field X.
KForm lie_derivative(const LieAlgebra& alg, const Vector& x, const KForm& a);

struct ConformalReport {
  KForm omega;                   // i_X phi
  std::optional<double> f_x;     // d_theta omega = f_X phi, when proportional
  std::optional<double> rho_x;   // f_X - theta(X)
  double proportionality_residual = 0;
  double theta_of_x = 0;
  double norm2_x = 0;            // g(X, X)
  double lie_derivative_norm = 0;
  /// Filled when X is the g-dual of theta.
  bool x_is_sharp_theta = false;
  bool lie_derivative_vanishes = false;
  bool theta_x_phi_equals_d_theta_omega = false;  // theta(X) phi = d_theta omega
  bool theta_x_equals_norm2 = false;              // theta(X) = |X|^2
};

/// theta is the Lee form of s.
ConformalReport conformal_analysis(const G2Structure& s, const Vector& x, double tol = kTolerance);

/// |phi ^ i_X phi - 2 *(i_X phi)|_g.
double identity_2star(const G2Structure& s, const Vector& x);

struct SU3Reduction {
  SU3Structure su3;
  LinearMap basis;          // 7x6, columns form a g-orthonormal basis of n^perp
  bool is_subalgebra;       // n^perp closed under the bracket
};

/// omega = i_n phi and psi_plus = phi restricted to W = n^perp. The basis of
/// W drops the ambient e_i with the largest |g(e_i, n)| (lowest index on
/// ties) and Gram-Schmidts the rest in index order. When W is a subalgebra
/// its bracket is carried over; otherwise the abelian algebra is used.
/// Throws InvalidArgument unless g(n, n) = 1.
SU3Reduction reduce_to_su3(const G2Structure& s, const Vector& n, double tol = kTolerance);

/// e^127 + e^347 + e^567 + e^135 - e^146 - e^236 - e^245.
KForm model_phi();

}  // namespace g2lcc
