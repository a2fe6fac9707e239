#pragma once

#include <string>

#include "symforge/poly.hpp"

namespace symforge {

/// Canonical phase-space coordinates.
enum class Coord { theta, phi, p_theta, p_phi };

/// Canonical rational function  num / (sin_theta^k * H_phi^h)  with
/// H_phi = p_phi^2 + a cos_phi^-2.
///
/// cos_phi is a Laurent symbol in `num`, so sec/tan never need a denominator;
/// sin_theta cannot be Laurent (sin^2 reduces) and is tracked by k instead.
/// The representation with minimal (k, h) is unique, which makes `==` and
/// `is_zero` decide equality of functions on 0<theta<pi, -pi/2<phi<pi/2.
/// The H_phi slot is only used by phase-space expressions (derivatives of s);
/// operator coefficients always have h = 0.
class TrigCoeff {
 public:
  TrigCoeff() = default;
  TrigCoeff(long c) : num_(c) {}  // NOLINT(google-explicit-constructor)
  TrigCoeff(const mpq_class& c) : num_(c) {}  // NOLINT(google-explicit-constructor)
  TrigCoeff(Poly num) : num_(std::move(num)) {}  // NOLINT(google-explicit-constructor)
  TrigCoeff(Poly num, int sin_theta_power, int hphi_power);

  static TrigCoeff var(Var v, int exp = 1) { return TrigCoeff(Poly::var(v, exp)); }
  static TrigCoeff cot_theta();
  static TrigCoeff csc_theta(int power = 1);
  static TrigCoeff sec_phi(int power = 1);
  static TrigCoeff tan_phi();
  static const Poly& hphi_poly();

  const Poly& numerator() const { return num_; }
  int sin_theta_power() const { return den_sin_theta_; }
  int hphi_power() const { return den_hphi_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_sin_theta_ == 0 && den_hphi_ == 0 && num_.is_constant(); }

  TrigCoeff operator-() const;
  TrigCoeff& operator+=(const TrigCoeff& o);
  TrigCoeff& operator-=(const TrigCoeff& o);
  TrigCoeff& operator*=(const TrigCoeff& o);
  friend TrigCoeff operator+(TrigCoeff a, const TrigCoeff& b) { return a += b; }
  friend TrigCoeff operator-(TrigCoeff a, const TrigCoeff& b) { return a -= b; }
  friend TrigCoeff operator*(TrigCoeff a, const TrigCoeff& b) { return a *= b; }
  bool operator==(const TrigCoeff& o) const = default;

  TrigCoeff pow(unsigned e) const;
  /// Exact division. Only units of the ring may be inverted: rational
  /// constants times monomials in sin_theta, cos_phi, and powers of H_phi.
  /// Throws std::domain_error otherwise and for zero.
  TrigCoeff inverse() const;
  friend TrigCoeff operator/(const TrigCoeff& a, const TrigCoeff& b) { return a * b.inverse(); }

  /// d/dtheta, d/dphi, d/dp_theta, d/dp_phi with the chain rules of the
  /// trig symbols and of s = sqrt(H_phi).
  TrigCoeff diff(Coord coordinate) const;

  TrigCoeff substitute(Var v, const Poly& value) const;
  TrigCoeff negate_var(Var v) const;
  /// Numerator coefficient of v^e; valid for symbols that never enter the
  /// denominators (imag, sqrt_hphi, eps, M, ...).
  TrigCoeff coefficient(Var v, int e) const;
  bool depends_on(Var v) const { return num_.depends_on(v); }

  /// Numeric value; `at` supplies every symbol present. H_phi denominators
  /// are evaluated from the p_phi, cos_phi and alpha2 entries.
  std::complex<double> evaluate(const std::array<std::complex<double>, kVarCount>& at) const;

  std::string to_string() const;

 private:
  void normalize();

  Poly num_;
  int den_sin_theta_ = 0;
  int den_hphi_ = 0;
};

}  // namespace symforge
