#include "g2lcc/forms.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

namespace g2lcc {

const char* to_string(NumericError::Kind kind) {
  using K = NumericError::Kind;
  switch (kind) {
    case K::NotAG2Form: return "NotAG2Form";
    case K::NotStable: return "NotStable";
    case K::NotCompatible: return "NotCompatible";
    case K::NotNormalized: return "NotNormalized";
    case K::NotPositive: return "NotPositive";
    case K::NotADerivation: return "NotADerivation";
    case K::NotInPattern: return "NotInPattern";
    case K::NotNearlyKahler: return "NotNearlyKahler";
    case K::NotCoupled: return "NotCoupled";
    case K::Singular: return "Singular";
    case K::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

struct IndexTable {
  std::vector<std::uint32_t> masks;
  std::array<int, 1u << kMaxDim> position{};
};

void enumerate(int n, int k, int start, std::uint32_t mask, std::vector<std::uint32_t>& out) {
  if (k == 0) {
    out.push_back(mask);
    return;
  }
  for (int i = start; i <= n - k; ++i) enumerate(n, k - 1, i + 1, mask | (1u << i), out);
}

const IndexTable& table(int n, int k) {
  static const auto tables = [] {
    std::array<std::array<IndexTable, kMaxDim + 1>, kMaxDim + 1> t;
    for (int n = 0; n <= kMaxDim; ++n) {
      for (int k = 0; k <= n; ++k) {
        auto& entry = t[n][k];
        entry.position.fill(-1);
        enumerate(n, k, 0, 0, entry.masks);
        for (std::size_t p = 0; p < entry.masks.size(); ++p)
          entry.position[entry.masks[p]] = static_cast<int>(p);
      }
    }
    return t;
  }();
  return tables[n][k];
}

void check_dim(int n) {
  if (n < 0 || n > kMaxDim)
    throw DimensionError("ambient dimension " + std::to_string(n) + " outside 0.." +
                         std::to_string(kMaxDim));
}

// Labels (0-based) of a mask in increasing order.
std::array<int, kMaxDim> bits_of(std::uint32_t mask, int& count) {
  std::array<int, kMaxDim> out{};
  count = 0;
  for (int i = 0; i < kMaxDim; ++i)
    if ((mask >> i) & 1u) out[count++] = i;
  return out;
}

double submatrix_det(const Eigen::MatrixXd& m, std::uint32_t rows, std::uint32_t cols) {
  int nr = 0, nc = 0;
  const auto r = bits_of(rows, nr);
  const auto c = bits_of(cols, nc);
  if (nr == 0) return 1.0;
  if (nr == 1) return m(r[0], c[0]);
  if (nr == 2) return m(r[0], c[0]) * m(r[1], c[1]) - m(r[0], c[1]) * m(r[1], c[0]);
  Eigen::MatrixXd sub(nr, nc);
  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < nc; ++b) sub(a, b) = m(r[a], c[b]);
  return sub.determinant();
}

}  // namespace

MultiIndex MultiIndex::from_labels(std::span<const int> labels) {
  std::uint32_t mask = 0;
  int prev = 0;
  for (int l : labels) {
    if (l <= prev || l > kMaxDim)
      throw DimensionError("multi-index labels must be strictly increasing within 1.." +
                           std::to_string(kMaxDim));
    mask |= 1u << (l - 1);
    prev = l;
  }
  return MultiIndex(mask);
}

int MultiIndex::degree() const { return std::popcount(mask_); }

std::vector<int> MultiIndex::labels() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if ((mask_ >> i) & 1u) out.push_back(i + 1);
  return out;
}

int binomial(int n, int k) {
  check_dim(n);
  if (k < 0 || k > n) return 0;
  return static_cast<int>(table(n, k).masks.size());
}

MultiIndex index_at(int n, int k, int pos) { return MultiIndex(table(n, k).masks.at(pos)); }

int position_of(int n, MultiIndex index) {
  check_dim(n);
  if (index.mask() >> n) throw DimensionError("multi-index label exceeds dimension");
  return table(n, index.degree()).position[index.mask()];
}

int merge_sign(MultiIndex a, MultiIndex b) {
  int inversions = 0;
  for (std::uint32_t m = b.mask(); m; m &= m - 1) {
    const int j = std::countr_zero(m);
    inversions += std::popcount(a.mask() >> (j + 1));
  }
  return (inversions & 1) ? -1 : 1;
}

// ---------------------------------------------------------------------------
// KForm

KForm::KForm(int dim, int degree) : dim_(dim), degree_(degree) {
  check_dim(dim);
  if (degree < 0)
    throw DimensionError("degree " + std::to_string(degree) + " invalid in dimension " +
                         std::to_string(dim));
  coeffs_ = Eigen::VectorXd::Zero(binomial(dim, degree));
}

KForm::KForm(int dim, int degree, Eigen::VectorXd coeffs) : KForm(dim, degree) {
  if (coeffs.size() != coeffs_.size())
    throw DimensionError("coefficient vector has wrong length for the form degree");
  if (!coeffs.allFinite())
    throw NumericError(NumericError::Kind::InvalidArgument, "non-finite form coefficient");
  coeffs_ = std::move(coeffs);
}

KForm KForm::scalar(int dim, double value) {
  KForm f(dim, 0);
  f.coeffs_[0] = value;
  return f;
}

KForm KForm::monomial(int dim, std::initializer_list<int> labels, double c) {
  return monomial(dim, std::span<const int>(labels.begin(), labels.size()), c);
}

KForm KForm::monomial(int dim, std::span<const int> labels, double c) {
  KForm f(dim, static_cast<int>(labels.size()));
  std::vector<int> sorted(labels.begin(), labels.end());
  for (int l : sorted)
    if (l < 1 || l > dim)
      throw DimensionError("basis label " + std::to_string(l) + " outside 1.." +
                           std::to_string(dim));
  int sign = 1;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[i] == sorted[j]) return f;
      if (sorted[i] > sorted[j]) sign = -sign;
    }
  std::sort(sorted.begin(), sorted.end());
  f.set(MultiIndex::from_labels(sorted), sign * c);
  return f;
}

KForm KForm::one_form(const Vector& components) {
  return KForm(static_cast<int>(components.size()), 1, components);
}

KForm KForm::from_two_form_matrix(const Eigen::MatrixXd& skew) {
  const int n = static_cast<int>(skew.rows());
  KForm f(n, 2);
  for (int p = 0; p < f.size(); ++p) {
    const auto l = f.index(p).labels();
    f.coeffs_[p] = 0.5 * (skew(l[0] - 1, l[1] - 1) - skew(l[1] - 1, l[0] - 1));
  }
  return f;
}

double KForm::operator[](MultiIndex index) const {
  if (index.degree() != degree_) throw DimensionError("multi-index degree mismatch");
  return coeffs_[position_of(dim_, index)];
}

void KForm::set(MultiIndex index, double value) {
  if (index.degree() != degree_) throw DimensionError("multi-index degree mismatch");
  coeffs_[position_of(dim_, index)] = value;
}

double KForm::component(std::span<const int> labels) const {
  if (static_cast<int>(labels.size()) != degree_)
    throw DimensionError("component arity differs from form degree");
  const KForm unit = monomial(dim_, labels, 1.0);
  // unit = sign * e^{sorted}; the component is sign * a_{sorted}
  return unit.coeffs_.dot(coeffs_);
}

Vector KForm::as_vector() const {
  if (degree_ != 1) throw DimensionError("as_vector requires a 1-form");
  return coeffs_;
}

Eigen::MatrixXd KForm::as_skew_matrix() const {
  if (degree_ != 2) throw DimensionError("as_skew_matrix requires a 2-form");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int p = 0; p < size(); ++p) {
    const auto l = index(p).labels();
    m(l[0] - 1, l[1] - 1) = coeffs_[p];
    m(l[1] - 1, l[0] - 1) = -coeffs_[p];
  }
  return m;
}

double KForm::max_abs() const { return coeffs_.size() ? coeffs_.cwiseAbs().maxCoeff() : 0.0; }

bool KForm::approx_equal(const KForm& other, double tol) const {
  require_same_shape(other, "approx_equal");
  return (*this - other).max_abs() <= tol;
}

bool KForm::is_finite() const { return coeffs_.allFinite(); }

void KForm::require_same_shape(const KForm& other, const char* op) const {
  if (dim_ != other.dim_ || degree_ != other.degree_)
    throw DimensionError(std::string(op) + ": forms differ in dimension or degree");
}

KForm& KForm::operator+=(const KForm& other) {
  require_same_shape(other, "+");
  coeffs_ += other.coeffs_;
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  require_same_shape(other, "-");
  coeffs_ -= other.coeffs_;
  return *this;
}

KForm& KForm::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Metric

Metric::Metric(Eigen::MatrixXd matrix, double tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("metric must be square");
  if (!matrix_.allFinite())
    throw NumericError(NumericError::Kind::InvalidArgument, "non-finite metric entry");
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw NumericError(NumericError::Kind::NotPositive, "metric is not symmetric");
  matrix_ = 0.5 * (matrix_ + matrix_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix_, Eigen::EigenvaluesOnly);
  if (matrix_.rows() > 0 && eig.eigenvalues().minCoeff() <= tol)
    throw NumericError(NumericError::Kind::NotPositive, "metric is not positive definite");
  inverse_ = matrix_.inverse();
  inverse_ = 0.5 * (inverse_ + inverse_.transpose());
  determinant_ = matrix_.determinant();
}

// ---------------------------------------------------------------------------
// Operations

KForm wedge(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim()) throw DimensionError("wedge: dimension mismatch");
  const int n = a.dim();
  const int k = a.degree() + b.degree();
  KForm out(n, k);
  if (k > n) return out;
  for (int i = 0; i < a.size(); ++i) {
    const double ai = a.coeff(i);
    if (ai == 0.0) continue;
    const MultiIndex I = a.index(i);
    for (int j = 0; j < b.size(); ++j) {
      const double bj = b.coeff(j);
      if (bj == 0.0) continue;
      const MultiIndex J = b.index(j);
      if (I.mask() & J.mask()) continue;
      out.coeff(position_of(n, MultiIndex(I.mask() | J.mask()))) += merge_sign(I, J) * ai * bj;
    }
  }
  return out;
}

KForm interior(const Vector& x, const KForm& a) {
  if (a.degree() < 1) throw DimensionError("interior product of a 0-form");
  if (x.size() != a.dim()) throw DimensionError("interior: vector dimension mismatch");
  const int n = a.dim();
  KForm out(n, a.degree() - 1);
  for (int p = 0; p < a.size(); ++p) {
    const double c = a.coeff(p);
    if (c == 0.0) continue;
    const std::uint32_t mask = a.index(p).mask();
    int slot = 0;
    for (int i = 0; i < n; ++i) {
      if (!((mask >> i) & 1u)) continue;
      const double sign = (slot & 1) ? -1.0 : 1.0;
      out.coeff(position_of(n, MultiIndex(mask & ~(1u << i)))) += sign * x[i] * c;
      ++slot;
    }
  }
  return out;
}

KForm pullback(const LinearMap& map, const KForm& a) {
  if (map.rows() != a.dim()) throw DimensionError("pullback: map codomain differs from form dimension");
  const int m = static_cast<int>(map.cols());
  check_dim(m);
  KForm out(m, a.degree());
  if (a.degree() > m) return out;
  for (int i = 0; i < a.size(); ++i) {
    const double ai = a.coeff(i);
    if (ai == 0.0) continue;
    const std::uint32_t rows = a.index(i).mask();
    for (int j = 0; j < out.size(); ++j)
      out.coeff(j) += ai * submatrix_det(map, rows, out.index(j).mask());
  }
  return out;
}

double evaluate(const KForm& a, const Eigen::MatrixXd& vectors) {
  if (vectors.rows() != a.dim() || vectors.cols() != a.degree())
    throw DimensionError("evaluate: need degree-many vectors of the ambient dimension");
  const std::uint32_t all = a.degree() == 0 ? 0u : (1u << a.degree()) - 1u;
  double sum = 0.0;
  for (int p = 0; p < a.size(); ++p)
    if (a.coeff(p) != 0.0) sum += a.coeff(p) * submatrix_det(vectors, a.index(p).mask(), all);
  return sum;
}

double inner(const KForm& a, const KForm& b, const Metric& g) {
  if (a.degree() != b.degree()) throw DimensionError("inner: degree mismatch");
  if (a.dim() != b.dim() || a.dim() != g.dim()) throw DimensionError("inner: dimension mismatch");
  const Eigen::MatrixXd& ginv = g.inverse();
  double sum = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    if (a.coeff(i) == 0.0) continue;
    for (int j = 0; j < b.size(); ++j) {
      if (b.coeff(j) == 0.0) continue;
      sum += a.coeff(i) * b.coeff(j) * submatrix_det(ginv, a.index(i).mask(), b.index(j).mask());
    }
  }
  return sum;
}

double norm2(const KForm& a, const Metric& g) { return inner(a, a, g); }

double tensor_norm2(const KForm& a, const Metric& g) {
  double factorial = 1.0;
  for (int i = 2; i <= a.degree(); ++i) factorial *= i;
  return factorial * norm2(a, g);
}

KForm contraction_u(const KForm& theta, const KForm& omega, const Metric& g) {
  if (theta.degree() != 1 || omega.degree() != 2)
    throw DimensionError("contraction_u expects a 1-form and a 2-form");
  if (theta.dim() != omega.dim() || theta.dim() != g.dim())
    throw DimensionError("contraction_u: dimension mismatch");
  const Vector raised = g.inverse() * theta.as_vector();  // g^{rk} theta_r
  const Vector u = omega.as_skew_matrix().transpose() * raised;  // sum_k raised_k w_{ki}
  return KForm::one_form(u);
}

KForm volume_form(const Metric& g, const KForm& orientation) {
  if (orientation.degree() != orientation.dim() || orientation.dim() != g.dim())
    throw DimensionError("orientation must be a top-degree form on the metric's space");
  const double top = orientation.coeff(0);
  if (top == 0.0)
    throw NumericError(NumericError::Kind::InvalidArgument, "orientation form is zero");
  return KForm(g.dim(), g.dim(),
               Eigen::VectorXd::Constant(1, std::copysign(std::sqrt(g.determinant()), top)));
}

KForm hodge(const KForm& a, const Metric& g, const KForm& orientation) {
  const int n = a.dim();
  if (g.dim() != n) throw DimensionError("hodge: metric dimension mismatch");
  if (a.degree() > n) throw DimensionError("hodge: degree exceeds dimension");
  const double vol = volume_form(g, orientation).coeff(0);
  const std::uint32_t full = n == 0 ? 0u : (1u << n) - 1u;
  const Eigen::MatrixXd& ginv = g.inverse();
  KForm out(n, n - a.degree());
  // coefficient of e^{K^c} in *e^I is <e^K, e^I> vol sign(K, K^c)
  for (int i = 0; i < a.size(); ++i) {
    const double ai = a.coeff(i);
    if (ai == 0.0) continue;
    const std::uint32_t I = a.index(i).mask();
    for (int k = 0; k < a.size(); ++k) {
      const MultiIndex K = a.index(k);
      const MultiIndex Kc(full & ~K.mask());
      out.coeff(position_of(n, Kc)) +=
          ai * vol * merge_sign(K, Kc) * submatrix_det(ginv, K.mask(), I);
    }
  }
  return out;
}

Vector sharp(const KForm& theta, const Metric& g) {
  if (theta.degree() != 1 || theta.dim() != g.dim()) throw DimensionError("sharp expects a 1-form");
  return g.inverse() * theta.as_vector();
}

KForm flat(const Vector& x, const Metric& g) {
  if (x.size() != g.dim()) throw DimensionError("flat: dimension mismatch");
  return KForm::one_form(g.matrix() * x);
}

Vector basis_vector(int n, int label) {
  if (label < 1 || label > n) throw DimensionError("basis label out of range");
  return Vector::Unit(n, label - 1);
}

}  // namespace g2lcc
