#pragma once

// G2-structures built from SU(3)-structures: the rank-one extension
// h (+)_D R xi with phi = omega ^ eta + psi_plus, the D = 0 extension of a
// nearly Kaehler pair, and the cylinder and cone over a coupled structure
// in an r-dependent calculus.

#include <complex>
#include <vector>

#include "g2lcc/forms.hpp"
#include "g2lcc/g2.hpp"
#include "g2lcc/lie.hpp"
#include "g2lcc/su3.hpp"

namespace g2lcc {

/// (D.a)(X1..Xk) = sum_i a(X1, .., D Xi, .., Xk).
KForm infinitesimal_action(const LinearMap& d, const KForm& a);

struct PatternFit {
  Eigen::Matrix3cd a;   // traceless, with realify(a) closest to D
  double residual = 0;  // Frobenius norm of D - realify(a)
};

/// Orthogonal projection of a 6x6 matrix onto realify(sl(3, C)).
PatternFit fit_pattern4(const LinearMap& d);

struct ExtensionResult {
  G2Structure g2;               // on h (+)_D R xi, xi = e_7
  KForm eta;                    // e^7
  KForm omega, psi_plus;        // the SU(3) pair pulled back to dimension 7
  double coupled_constant = 0;  // c
  KForm expected_theta;         // c eta
  G2Class classification;
  double stabilizer_residual = 0;  // |D . psi_plus|, max coefficient
  double torsion_residual = 0;     // |d phi + c eta ^ phi|_g
  bool verified = false;           // lcc with theta = c eta, within tolerance
};

/// Requires s coupled (NotCoupled), D a derivation (NotADerivation), D in
/// realify(sl(3, C)) (NotInPattern) and D . psi_plus = 0 (NotInPattern).
ExtensionResult g2_from_coupled(const SU3Structure& s, const LinearMap& d, double tol = kTolerance);

struct NearlyKahlerTorus {
  ExtensionResult extension;
  double star_residual = 0;          // |*phi - (psi_minus ^ eta + omega^2 / 2)|_g
  double star_residual_flipped = 0;  // same with -psi_minus
  double d_phi_residual = 0;         // |d phi + 3 eta ^ phi|_g
  double d_star_phi_residual = 0;    // |d *phi + 4 eta ^ *phi|_g
  bool verified = false;             // all three residuals small and the class is lcp
};

/// The D = 0 extension of a nearly Kaehler pair. Throws NotNearlyKahler.
NearlyKahlerTorus nk_mapping_torus(const SU3Structure& s, double tol = kTolerance);

/// sum over terms of r^m (alpha + beta ^ dr), with alpha, beta forms on the
/// six-dimensional algebra and dr written rightmost. Homogeneous: every
/// alpha has degree k and every beta degree k - 1.
class WarpedForm {
 public:
  struct Term {
    int m;
    KForm alpha, beta;
  };

  WarpedForm(int dim, int degree) : dim_(dim), degree_(degree) {}
  /// r^m alpha.
  static WarpedForm power(int m, const KForm& alpha);
  /// r^m beta ^ dr.
  static WarpedForm power_dr(int m, const KForm& beta);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  /// Terms sorted by exponent, one per exponent.
  const std::vector<Term>& terms() const { return terms_; }

  void add(int m, const KForm& alpha, const KForm& beta);
  WarpedForm& operator+=(const WarpedForm& other);
  WarpedForm& operator*=(double s);
  friend WarpedForm operator+(WarpedForm a, const WarpedForm& b) { return a += b; }
  friend WarpedForm operator-(WarpedForm a, const WarpedForm& b) { return a += b * -1.0; }
  friend WarpedForm operator*(WarpedForm a, double s) { return a *= s; }
  friend WarpedForm operator*(double s, WarpedForm a) { return a *= s; }

  /// Largest coefficient over all terms.
  double max_abs() const;
  bool is_zero(double tol = kTolerance) const { return max_abs() <= tol; }

  /// The 7-dimensional form at radius r, with dr as e^7.
  KForm at(double r) const;

 private:
  int dim_, degree_;
  std::vector<Term> terms_;
};

WarpedForm warped_d(const LieAlgebra& alg, const WarpedForm& w);
WarpedForm wedge(const WarpedForm& a, const WarpedForm& b);

struct WarpedReport {
  double coupled_constant = 0;
  WarpedForm phi{6, 3};
  WarpedForm theta{6, 1};
  double lcc_residual = 0;        // max coefficient of d phi + theta ^ phi
  double theta_closed_residual = 0;  // max coefficient of d theta
  /// max over r in {1/2, 1, 2} of |g_phi(r) - (r^k h + dr^2)|, with k = 0 for
  /// the cylinder and k = 2 for the cone.
  double metric_residual = 0;
  bool verified = false;
};

/// phi = omega ^ dr + psi_plus, theta = c dr. Throws NotCoupled.
WarpedReport cylinder(const SU3Structure& s, double tol = kTolerance);
/// phi = r^2 omega ^ dr + r^3 psi_plus, theta = (c - 3) r^-1 dr. Throws
/// NotCoupled, and InvalidArgument when c = 3 (theta would vanish).
WarpedReport cone(const SU3Structure& s, double tol = kTolerance);

}  // namespace g2lcc
