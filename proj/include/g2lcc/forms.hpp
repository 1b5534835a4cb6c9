#pragma once

// Exterior algebra over the standard basis of R^n (n <= 8).
//
// Conventions: e^{i1...ik}(v1,...,vk) = det[e^{ia}(vb)], so that
// (a ^ b) = (r+s)!/(r!s!) Alt(a (x) b) and, for a 1-form t and a 2-form w,
// (t ^ w)_{ijk} = t_i w_{jk} - t_j w_{ik} + t_k w_{ij}.
// Forms are stored densely over strictly increasing multi-indices in
// lexicographic order. Basis labels are 1-based in every public interface.

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "g2lcc/error.hpp"

namespace g2lcc {

inline constexpr int kMaxDim = 8;
inline constexpr double kTolerance = 1e-9;

using Vector = Eigen::VectorXd;
using LinearMap = Eigen::MatrixXd;

/// Strictly increasing tuple of basis labels, stored as a bitmask.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::uint32_t mask) : mask_(mask) {}

  /// Labels must be 1-based and strictly increasing.
  static MultiIndex from_labels(std::span<const int> labels);
  static MultiIndex from_labels(std::initializer_list<int> labels) {
    return from_labels(std::span<const int>(labels.begin(), labels.size()));
  }

  std::uint32_t mask() const { return mask_; }
  int degree() const;
  bool contains(int label) const { return (mask_ >> (label - 1)) & 1u; }
  std::vector<int> labels() const;

  friend bool operator==(MultiIndex, MultiIndex) = default;

 private:
  std::uint32_t mask_ = 0;
};

/// Number of strictly increasing k-tuples from 1..n.
int binomial(int n, int k);

/// Multi-index stored at `pos` in the dense layout of degree-k forms on R^n.
MultiIndex index_at(int n, int k, int pos);

/// Position of `index` in the dense layout (its degree fixes k).
int position_of(int n, MultiIndex index);

/// (-1)^(number of pairs i in a, j in b with i > j): the sign of
/// e^a ^ e^b relative to e^(a u b). Requires disjoint sets.
int merge_sign(MultiIndex a, MultiIndex b);

class KForm {
 public:
  KForm() : KForm(0, 0) {}
  KForm(int dim, int degree);
  KForm(int dim, int degree, Eigen::VectorXd coeffs);

  static KForm scalar(int dim, double value);
  /// c * e^{l1} ^ ... ^ e^{lk} for labels in any order; repeated labels give
  /// the zero form.
  static KForm monomial(int dim, std::initializer_list<int> labels, double c = 1.0);
  static KForm monomial(int dim, std::span<const int> labels, double c = 1.0);
  static KForm one_form(const Vector& components);
  static KForm from_two_form_matrix(const Eigen::MatrixXd& skew);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  double coeff(int pos) const { return coeffs_[pos]; }
  double& coeff(int pos) { return coeffs_[pos]; }
  double operator[](MultiIndex index) const;
  void set(MultiIndex index, double value);
  MultiIndex index(int pos) const { return index_at(dim_, degree_, pos); }

  /// Fully antisymmetric tensor component a_{l1...lk}; labels 1-based, any
  /// order.
  double component(std::span<const int> labels) const;
  double component(std::initializer_list<int> labels) const {
    return component(std::span<const int>(labels.begin(), labels.size()));
  }

  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  Eigen::VectorXd& coefficients() { return coeffs_; }

  /// Components of a 1-form, or the skew matrix of a 2-form.
  Vector as_vector() const;
  Eigen::MatrixXd as_skew_matrix() const;

  double max_abs() const;
  bool is_zero(double tol = kTolerance) const { return max_abs() <= tol; }
  bool approx_equal(const KForm& other, double tol = kTolerance) const;
  bool is_finite() const;

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double s);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(KForm a, double s) { return a *= s; }
  friend KForm operator*(double s, KForm a) { return a *= s; }
  friend KForm operator/(KForm a, double s) { return a *= 1.0 / s; }
  KForm operator-() const { return *this * -1.0; }

 private:
  void require_same_shape(const KForm& other, const char* op) const;

  int dim_;
  int degree_;
  Eigen::VectorXd coeffs_;
};

/// Symmetric positive-definite inner product on R^n, with cached inverse.
class Metric {
 public:
  explicit Metric(Eigen::MatrixXd matrix, double tol = kTolerance);
  static Metric identity(int n) { return Metric(Eigen::MatrixXd::Identity(n, n)); }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double determinant() const { return determinant_; }
  double operator()(int i, int j) const { return matrix_(i, j); }

  double inner(const Vector& x, const Vector& y) const { return x.dot(matrix_ * y); }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd inverse_;
  double determinant_;
};

KForm wedge(const KForm& a, const KForm& b);
/// Contraction in the first slot: (i_X a)(Y...) = a(X, Y...).
KForm interior(const Vector& x, const KForm& a);
/// (L^* a)(X1..Xk) = a(L X1, ..., L Xk). L maps R^m -> R^n, a lives on R^n.
KForm pullback(const LinearMap& map, const KForm& a);
/// a(X1, ..., Xk) with the vectors given as matrix columns.
double evaluate(const KForm& a, const Eigen::MatrixXd& vectors);

/// Gram-determinant pairing; |e^{12}|^2 = 1 for the identity metric.
double inner(const KForm& a, const KForm& b, const Metric& g);
double norm2(const KForm& a, const Metric& g);
/// Full tensor contraction a_{i..} a_{j..} g^{ij}..., equal to k! * norm2.
double tensor_norm2(const KForm& a, const Metric& g);

/// u_i = g^{rk} theta_r omega_{ki}.
KForm contraction_u(const KForm& theta, const KForm& omega, const Metric& g);

/// Riemannian volume form of g in the orientation of `orientation`.
KForm volume_form(const Metric& g, const KForm& orientation);
/// Hodge star with a ^ *b = <a, b>_g vol_g.
KForm hodge(const KForm& a, const Metric& g, const KForm& orientation);

Vector sharp(const KForm& theta, const Metric& g);
KForm flat(const Vector& x, const Metric& g);

/// Standard basis vector e_label of R^n.
Vector basis_vector(int n, int label);

}  // namespace g2lcc
