#pragma once

// Lie algebras given by structure constants, with the Chevalley-Eilenberg
// differential on left-invariant forms.
//
// Convention: [e_i, e_j] = sum_k c^k_ij e_k and de(X, Y) = -e([X, Y]) on
// 1-forms, so de^k = -sum_{i<j} c^k_ij e^{ij}. Algebras are usually built
// from the list (de^1, ..., de^n) in Salamon notation.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "g2lcc/forms.hpp"

namespace g2lcc {

class LieAlgebra {
 public:
  /// `differentials[k]` is the 2-form de^{k+1}.
  explicit LieAlgebra(std::vector<KForm> differentials);
  static LieAlgebra abelian(int n);

  int dim() const { return dim_; }
  const std::vector<KForm>& differentials() const { return de_; }
  /// c^k_ij with 1-based labels.
  double structure_constant(int k, int i, int j) const;
  Vector bracket(const Vector& u, const Vector& v) const;
  /// Matrix of ad_X = [X, .].
  Eigen::MatrixXd ad(const Vector& x) const;

  /// Chevalley-Eilenberg differential on forms of any degree.
  KForm d(const KForm& a) const;
  /// Matrix of d on degree-k forms in the dense layout.
  const Eigen::MatrixXd& d_matrix(int degree) const { return d_matrices_.at(degree); }

  /// max |d(de^k)|; zero iff the Jacobi identity holds.
  double jacobi_residual() const;
  bool satisfies_jacobi(double tol = kTolerance) const { return jacobi_residual() <= tol; }

  /// max over basis pairs of |M[u,v] - [Mu,v] - [u,Mv]|.
  double derivation_residual(const LinearMap& m) const;
  bool is_derivation(const LinearMap& m, double tol = kTolerance) const {
    return derivation_residual(m) <= tol;
  }
  /// max over basis pairs of |L[u,v] - [Lu,Lv]|. The matrix acts on
  /// vectors; its i-th row lists the pullback L^* e^i.
  double automorphism_residual(const LinearMap& l) const;
  bool is_automorphism(const LinearMap& l, double tol = kTolerance) const;

 private:
  int dim_;
  std::vector<KForm> de_;
  std::vector<double> c_;  // c_[(k*n + i)*n + j], 0-based
  std::vector<Eigen::MatrixXd> d_matrices_;
};

/// Real 6x6 form of a complex 3x3 matrix: block (i,j) is
/// [[Re A_ij, Im A_ij], [-Im A_ij, Re A_ij]].
LinearMap realify(const Eigen::Matrix3cd& a);

/// A matrix checked to be a derivation of its base algebra.
class Derivation {
 public:
  Derivation(LieAlgebra base, LinearMap matrix, double tol = kTolerance);

  const LieAlgebra& base() const { return base_; }
  const LinearMap& matrix() const { return matrix_; }

 private:
  LieAlgebra base_;
  LinearMap matrix_;
};

/// h (+)_D R xi with [xi, U] = D(U): de^k gains (e^k o D) ^ e^{n+1} and
/// de^{n+1} = 0. Throws NotADerivation if D fails the Leibniz rule.
LieAlgebra extend(const LieAlgebra& h, const LinearMap& d, double tol = kTolerance);
inline LieAlgebra extend(const Derivation& d) { return extend(d.base(), d.matrix()); }

/// exp(t M) by scaling and squaring with a degree-13 Pade approximant.
LinearMap matexp(const LinearMap& m, double t = 1.0);

struct LatticeReport {
  double t = 0.0;
  LinearMap matrix;  // basis^{-1} exp(tD) basis
  bool integral = false;
  double max_integer_deviation = 0.0;
  double determinant = 0.0;
  bool unimodular = false;
};

/// Evaluates each candidate t independently; results keep input order.
/// `basis` holds the new basis vectors as columns. Throws Singular if
/// `basis` is not invertible.
std::vector<LatticeReport> lattice_scan(const LinearMap& d, const LinearMap& basis,
                                        std::span<const double> candidates,
                                        double tol = kTolerance);

}  // namespace g2lcc
