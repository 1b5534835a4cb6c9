#pragma once

// SU(3)-structures (omega, psi_plus) on six-dimensional Lie algebras.
//
// J comes from Hitchin's endomorphism of psi_plus relative to the reference
// volume e^{123456}, normalized by sqrt(-lambda); its sign is the one making
// h(X, Y) = omega(X, JY) positive definite. psi_minus(X, Y, Z) is
// psi_plus(JX, JY, JZ). For the model pair this is the real and imaginary
// part of (e^1 + i e^2) ^ (e^3 + i e^4) ^ (e^5 + i e^6).

#include "g2lcc/forms.hpp"
#include "g2lcc/lie.hpp"

namespace g2lcc {

struct HitchinEndomorphism {
  LinearMap k;         // column i is K(e_i)
  double lambda = 0;   // tr(K^2) / 6; negative for stable forms of positive type
};

/// K(X) is the vector v with i_v vol_ref = i_X psi ^ psi.
HitchinEndomorphism hitchin_endomorphism(const KForm& psi, const KForm& vol_ref);

class SU3Structure {
 public:
  /// Validates in order: omega nondegenerate, psi_plus stable, omega ^ psi_plus
  /// = 0, h positive definite, psi_plus ^ psi_minus = (2/3) omega^3.
  /// Each failure throws NumericError with its own kind.
  SU3Structure(LieAlgebra algebra, KForm omega, KForm psi_plus, double tol = kTolerance);

  const LieAlgebra& algebra() const { return alg_; }
  const KForm& omega() const { return omega_; }
  const KForm& psi_plus() const { return psi_plus_; }
  const KForm& psi_minus() const { return psi_minus_; }
  const LinearMap& j() const { return j_; }
  const Metric& metric() const { return h_; }
  /// omega^3 / 6.
  const KForm& volume() const { return vol_; }
  double lambda() const { return lambda_; }

 private:
  LieAlgebra alg_;
  KForm omega_, psi_plus_, psi_minus_, vol_;
  LinearMap j_;
  Metric h_ = Metric::identity(6);
  double lambda_ = 0;
};

inline SU3Structure build_su3(LieAlgebra algebra, KForm omega, KForm psi_plus,
                              double tol = kTolerance) {
  return SU3Structure(std::move(algebra), std::move(omega), std::move(psi_plus), tol);
}

struct SU3Class {
  enum class Tag { NearlyKahler, Coupled, HalfFlat, None };
  /// The most specific class that holds.
  Tag tag = Tag::None;
  bool coupled = false;
  bool nearly_kahler = false;
  bool half_flat = false;

  /// Least-squares c in d omega = c psi_plus and |d omega - c psi_plus|_h.
  double coupled_constant = 0;
  double coupled_residual = 0;
  /// |d omega - 3 psi_plus|_h and |d psi_minus + 2 omega^2|_h.
  double nk_omega_residual = 0;
  double nk_psi_residual = 0;
  /// |d psi_minus - 2 omega^2|_h: the same test with the opposite sign for
  /// psi_minus, reported so that a convention mismatch is visible.
  double nk_psi_residual_flipped = 0;
  /// max(|d(omega^2)|_h, |d psi_plus|_h).
  double half_flat_residual = 0;
};

const char* to_string(SU3Class::Tag tag);

SU3Class classify_su3(const SU3Structure& s, double tol = kTolerance);

/// (k^2 omega, k^3 psi_plus); the coupled constant becomes c / k. Throws
/// InvalidArgument for k = 0 and NotCoupled if s is not coupled.
SU3Structure rescale_coupled(const SU3Structure& s, double k, double tol = kTolerance);

/// omega = e^12 + e^34 + e^56 and the matching psi_plus, psi_minus on R^6.
KForm model_omega();
KForm model_psi_plus();
KForm model_psi_minus();

}  // namespace g2lcc
