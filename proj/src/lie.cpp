#include "g2lcc/lie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace g2lcc {

namespace {

// Monomial on labels[begin, end).
KForm prefix_monomial(int n, const std::vector<int>& labels, std::size_t begin, std::size_t end) {
  std::vector<int> part(labels.begin() + begin, labels.begin() + end);
  return KForm::monomial(n, part);
}

}  // namespace

LieAlgebra::LieAlgebra(std::vector<KForm> differentials)
    : dim_(static_cast<int>(differentials.size())), de_(std::move(differentials)) {
  const int n = dim_;
  if (n < 1 || n > kMaxDim)
    throw DimensionError("Lie algebra dimension must lie in 1.." + std::to_string(kMaxDim));
  for (const auto& f : de_)
    if (f.dim() != n || f.degree() != 2)
      throw DimensionError("structure equations must be 2-forms on the algebra's dual");

  c_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) c_[(k * n + i) * n + j] = -de_[k].component({i + 1, j + 1});

  // d(e^I) = sum_a (-1)^a e^{i1..} ^ de^{ia} ^ e^{..ik}
  d_matrices_.reserve(n + 1);
  for (int p = 0; p <= n; ++p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(binomial(n, p + 1), binomial(n, p));
    for (int col = 0; col < m.cols(); ++col) {
      const auto labels = index_at(n, p, col).labels();
      KForm image(n, p + 1);
      for (std::size_t a = 0; a < labels.size(); ++a) {
        const KForm left = prefix_monomial(n, labels, 0, a);
        const KForm right = prefix_monomial(n, labels, a + 1, labels.size());
        const KForm term = wedge(wedge(left, de_[labels[a] - 1]), right);
        if (a & 1) image -= term;
        else image += term;
      }
      m.col(col) = image.coefficients();
    }
    d_matrices_.push_back(std::move(m));
  }
}

LieAlgebra LieAlgebra::abelian(int n) {
  return LieAlgebra(std::vector<KForm>(static_cast<std::size_t>(n), KForm(n, 2)));
}

double LieAlgebra::structure_constant(int k, int i, int j) const {
  if (k < 1 || i < 1 || j < 1 || k > dim_ || i > dim_ || j > dim_)
    throw DimensionError("structure constant label out of range");
  return c_[((k - 1) * dim_ + (i - 1)) * dim_ + (j - 1)];
}

Vector LieAlgebra::bracket(const Vector& u, const Vector& v) const {
  if (u.size() != dim_ || v.size() != dim_) throw DimensionError("bracket: dimension mismatch");
  Vector w = Vector::Zero(dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i) {
      if (u[i] == 0.0) continue;
      for (int j = 0; j < dim_; ++j) w[k] += c_[(k * dim_ + i) * dim_ + j] * u[i] * v[j];
    }
  return w;
}

Eigen::MatrixXd LieAlgebra::ad(const Vector& x) const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int j = 0; j < dim_; ++j) m.col(j) = bracket(x, Vector::Unit(dim_, j));
  return m;
}

KForm LieAlgebra::d(const KForm& a) const {
  if (a.dim() != dim_) throw DimensionError("d: form lives on a space of different dimension");
  if (a.degree() >= dim_) return KForm(dim_, a.degree() + 1);
  return KForm(dim_, a.degree() + 1, d_matrices_[a.degree()] * a.coefficients());
}

double LieAlgebra::jacobi_residual() const {
  double r = 0.0;
  for (const auto& f : de_) r = std::max(r, d(f).max_abs());
  return r;
}

double LieAlgebra::derivation_residual(const LinearMap& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw DimensionError("derivation matrix has wrong shape");
  double r = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      const Vector ei = Vector::Unit(dim_, i), ej = Vector::Unit(dim_, j);
      const Vector lhs = m * bracket(ei, ej);
      const Vector rhs = bracket(m.col(i), ej) + bracket(ei, m.col(j));
      r = std::max(r, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return r;
}

double LieAlgebra::automorphism_residual(const LinearMap& l) const {
  if (l.rows() != dim_ || l.cols() != dim_) throw DimensionError("automorphism matrix has wrong shape");
  double r = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      const Vector lhs = l * bracket(Vector::Unit(dim_, i), Vector::Unit(dim_, j));
      const Vector rhs = bracket(l.col(i), l.col(j));
      r = std::max(r, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return r;
}

bool LieAlgebra::is_automorphism(const LinearMap& l, double tol) const {
  if (automorphism_residual(l) > tol) return false;
  return std::abs(l.determinant()) > tol;
}

LinearMap realify(const Eigen::Matrix3cd& a) {
  LinearMap out(6, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double re = a(i, j).real(), im = a(i, j).imag();
      out.block<2, 2>(2 * i, 2 * j) << re, im, -im, re;
    }
  return out;
}

Derivation::Derivation(LieAlgebra base, LinearMap matrix, double tol)
    : base_(std::move(base)), matrix_(std::move(matrix)) {
  const double r = base_.derivation_residual(matrix_);
  if (r > tol)
    throw NumericError(NumericError::Kind::NotADerivation,
                       "matrix is not a derivation (Leibniz residual " + std::to_string(r) + ")");
}

LieAlgebra extend(const LieAlgebra& h, const LinearMap& d, double tol) {
  const int n = h.dim();
  const double r = h.derivation_residual(d);
  if (r > tol)
    throw NumericError(NumericError::Kind::NotADerivation,
                       "refusing extension: matrix is not a derivation (Leibniz residual " +
                           std::to_string(r) + ")");
  if (n + 1 > kMaxDim) throw DimensionError("extension exceeds the supported dimension");

  LinearMap projection = LinearMap::Zero(n, n + 1);
  projection.leftCols(n).setIdentity();
  std::vector<KForm> de;
  de.reserve(n + 1);
  for (int k = 0; k < n; ++k) {
    KForm f = pullback(projection, h.differentials()[k]);
    for (int i = 0; i < n; ++i)
      if (d(k, i) != 0.0) f += KForm::monomial(n + 1, {i + 1, n + 1}, d(k, i));
    de.push_back(std::move(f));
  }
  de.emplace_back(n + 1, 2);
  return LieAlgebra(std::move(de));
}

LinearMap matexp(const LinearMap& m, double t) {
  if (m.rows() != m.cols()) throw DimensionError("matexp needs a square matrix");
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = m.rows();
  LinearMap a = t * m;
  if (!a.allFinite()) throw NumericError(NumericError::Kind::InvalidArgument, "non-finite matrix");
  const double norm1 = n ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  if (norm1 == 0.0) return LinearMap::Identity(n, n);
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  a /= std::ldexp(1.0, squarings);

  const LinearMap id = LinearMap::Identity(n, n);
  const LinearMap a2 = a * a, a4 = a2 * a2, a6 = a4 * a2;
  const LinearMap u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const LinearMap v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  LinearMap r = (v - u).partialPivLu().solve(u + v);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

std::vector<LatticeReport> lattice_scan(const LinearMap& d, const LinearMap& basis,
                                        std::span<const double> candidates, double tol) {
  if (d.rows() != d.cols() || basis.rows() != d.rows() || basis.cols() != d.cols())
    throw DimensionError("lattice_scan: derivation and basis must be square of equal size");
  Eigen::FullPivLU<LinearMap> lu(basis);
  if (!lu.isInvertible())
    throw NumericError(NumericError::Kind::Singular, "basis change matrix is singular");
  const LinearMap inv = lu.inverse();

  std::vector<LatticeReport> out;
  out.reserve(candidates.size());
  for (double t : candidates) {
    LatticeReport rep;
    rep.t = t;
    rep.matrix = inv * matexp(d, t) * basis;
    rep.max_integer_deviation =
        rep.matrix.size() ? (rep.matrix - rep.matrix.array().round().matrix()).cwiseAbs().maxCoeff()
                          : 0.0;
    rep.integral = rep.max_integer_deviation <= tol;
    rep.determinant = rep.matrix.determinant();
    rep.unimodular = std::abs(std::abs(rep.determinant) - 1.0) <= tol;
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace g2lcc
