#include "g2lcc/su3.hpp"

#include <cmath>

#include "g2lcc/error.hpp"

namespace g2lcc {

namespace {

using Kind = NumericError::Kind;

double scale_of(const KForm& a) { return std::max(1.0, a.max_abs()); }

double h_norm(const KForm& a, const Metric& h) { return std::sqrt(std::max(0.0, norm2(a, h))); }

}  // namespace

HitchinEndomorphism hitchin_endomorphism(const KForm& psi, const KForm& vol_ref) {
  if (psi.dim() != 6 || psi.degree() != 3) throw DimensionError("hitchin_endomorphism needs a 3-form on R^6");
  if (vol_ref.dim() != 6 || vol_ref.degree() != 6) throw DimensionError("reference volume must be a 6-form on R^6");
  const double v = vol_ref.coeff(0);
  if (v == 0.0) throw NumericError(Kind::InvalidArgument, "reference volume is zero");

  HitchinEndomorphism out;
  out.k = LinearMap::Zero(6, 6);
  for (int i = 1; i <= 6; ++i) {
    const KForm beta = wedge(interior(basis_vector(6, i), psi), psi);
    // i_{e_j} e^{123456} = (-1)^(j-1) e^{1..^j..6}
    for (int j = 1; j <= 6; ++j) {
      const MultiIndex rest(0x3fu & ~(1u << (j - 1)));
      out.k(j - 1, i - 1) = ((j - 1) & 1 ? -1.0 : 1.0) * beta[rest] / v;
    }
  }
  out.lambda = (out.k * out.k).trace() / 6.0;
  return out;
}

SU3Structure::SU3Structure(LieAlgebra algebra, KForm omega, KForm psi_plus, double tol)
    : alg_(std::move(algebra)), omega_(std::move(omega)), psi_plus_(std::move(psi_plus)) {
  if (alg_.dim() != 6 || omega_.dim() != 6 || omega_.degree() != 2 || psi_plus_.dim() != 6 ||
      psi_plus_.degree() != 3)
    throw DimensionError("an SU(3)-structure needs a 2-form and a 3-form on a 6-dimensional algebra");

  const KForm omega3 = wedge(wedge(omega_, omega_), omega_);
  if (std::abs(omega3.coeff(0)) <= tol * std::pow(scale_of(omega_), 3))
    throw NumericError(Kind::NotStable, "omega is degenerate (omega^3 = 0)");

  const auto hitchin = hitchin_endomorphism(psi_plus_, KForm::monomial(6, {1, 2, 3, 4, 5, 6}));
  lambda_ = hitchin.lambda;
  if (!(lambda_ < -tol * std::pow(scale_of(psi_plus_), 4)))
    throw NumericError(Kind::NotStable, "psi_plus is not stable of positive type (lambda = " +
                                            std::to_string(lambda_) + ")");

  const KForm mixed = wedge(omega_, psi_plus_);
  if (mixed.max_abs() > tol * scale_of(omega_) * scale_of(psi_plus_))
    throw NumericError(Kind::NotCompatible, "omega ^ psi_plus is not zero");

  const LinearMap j = hitchin.k / std::sqrt(-lambda_);
  const Eigen::MatrixXd big_omega = omega_.as_skew_matrix();
  bool found = false;
  for (double sign : {1.0, -1.0}) {
    try {
      h_ = Metric(big_omega * (sign * j), tol);
      j_ = sign * j;
      found = true;
      break;
    } catch (const NumericError&) {
    }
  }
  if (!found)
    throw NumericError(Kind::NotPositive, "omega(., J.) is not positive definite for either sign of J");

  psi_minus_ = pullback(j_, psi_plus_);
  vol_ = omega3 / 6.0;
  const KForm defect = wedge(psi_plus_, psi_minus_) - (2.0 / 3.0) * omega3;
  if (defect.max_abs() > tol * std::max(1.0, std::abs(omega3.coeff(0))))
    throw NumericError(Kind::NotNormalized,
                       "psi_plus ^ psi_minus differs from (2/3) omega^3 by " +
                           std::to_string(defect.max_abs()));
}

const char* to_string(SU3Class::Tag tag) {
  switch (tag) {
    case SU3Class::Tag::NearlyKahler: return "nearly_kahler";
    case SU3Class::Tag::Coupled: return "coupled";
    case SU3Class::Tag::HalfFlat: return "half_flat";
    case SU3Class::Tag::None: return "none_of_these";
  }
  return "none_of_these";
}

SU3Class classify_su3(const SU3Structure& s, double tol) {
  const LieAlgebra& alg = s.algebra();
  const Metric& h = s.metric();
  const KForm d_omega = alg.d(s.omega());
  const KForm omega2 = wedge(s.omega(), s.omega());

  SU3Class out;
  out.coupled_constant = inner(d_omega, s.psi_plus(), h) / norm2(s.psi_plus(), h);
  out.coupled_residual = h_norm(d_omega - out.coupled_constant * s.psi_plus(), h);
  out.coupled = out.coupled_residual <= tol && std::abs(out.coupled_constant) > tol;

  const KForm d_psi_minus = alg.d(s.psi_minus());
  out.nk_omega_residual = h_norm(d_omega - 3.0 * s.psi_plus(), h);
  out.nk_psi_residual = h_norm(d_psi_minus + 2.0 * omega2, h);
  out.nk_psi_residual_flipped = h_norm(d_psi_minus - 2.0 * omega2, h);
  out.nearly_kahler = out.nk_omega_residual <= tol && out.nk_psi_residual <= tol;

  out.half_flat_residual = std::max(h_norm(alg.d(omega2), h), h_norm(alg.d(s.psi_plus()), h));
  out.half_flat = out.half_flat_residual <= tol;

  if (out.nearly_kahler) out.tag = SU3Class::Tag::NearlyKahler;
  else if (out.coupled) out.tag = SU3Class::Tag::Coupled;
  else if (out.half_flat) out.tag = SU3Class::Tag::HalfFlat;
  return out;
}

SU3Structure rescale_coupled(const SU3Structure& s, double k, double tol) {
  if (k == 0.0 || !std::isfinite(k)) throw NumericError(Kind::InvalidArgument, "rescaling factor must be nonzero");
  if (!classify_su3(s, tol).coupled) throw NumericError(Kind::NotCoupled, "structure is not coupled");
  return SU3Structure(s.algebra(), k * k * s.omega(), k * k * k * s.psi_plus(), tol);
}

KForm model_omega() {
  return KForm::monomial(6, {1, 2}) + KForm::monomial(6, {3, 4}) + KForm::monomial(6, {5, 6});
}

KForm model_psi_plus() {
  return KForm::monomial(6, {1, 3, 5}) - KForm::monomial(6, {1, 4, 6}) -
         KForm::monomial(6, {2, 3, 6}) - KForm::monomial(6, {2, 4, 5});
}

KForm model_psi_minus() {
  return KForm::monomial(6, {1, 3, 6}) + KForm::monomial(6, {1, 4, 5}) +
         KForm::monomial(6, {2, 3, 5}) - KForm::monomial(6, {2, 4, 6});
}

}  // namespace g2lcc
