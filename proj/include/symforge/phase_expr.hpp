#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "symforge/trig_coeff.hpp"

namespace symforge {

/// Point of phase space after the substitution phi = k * varphi.
struct PhaseState {
  double t = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws DomainError unless 0 < theta < pi and -pi/2 < phi < pi/2.
void check_domain(const PhaseState& state);

/// Classical function of (theta, phi, p_theta, p_phi), polynomial in the
/// momenta, in s = sqrt(H_phi) (degree <= 1) and in i (degree <= 1), with
/// trig-rational coefficients. Every value is canonical on construction.
class PhaseExpr {
 public:
  PhaseExpr() = default;
  explicit PhaseExpr(TrigCoeff value) : value_(std::move(value)) {}
  PhaseExpr(long c) : value_(c) {}  // NOLINT(google-explicit-constructor)
  PhaseExpr(const mpq_class& c) : value_(c) {}  // NOLINT(google-explicit-constructor)

  static PhaseExpr p_theta() { return PhaseExpr(TrigCoeff::var(Var::p_theta)); }
  static PhaseExpr p_phi() { return PhaseExpr(TrigCoeff::var(Var::p_phi)); }
  static PhaseExpr sqrt_hphi() { return PhaseExpr(TrigCoeff::var(Var::sqrt_hphi)); }
  static PhaseExpr imag() { return PhaseExpr(TrigCoeff::var(Var::imag)); }
  static PhaseExpr alpha2() { return PhaseExpr(TrigCoeff::var(Var::alpha2)); }
  static PhaseExpr cos_theta() { return PhaseExpr(TrigCoeff::var(Var::cos_theta)); }
  static PhaseExpr sin_theta() { return PhaseExpr(TrigCoeff::var(Var::sin_theta)); }
  static PhaseExpr cos_phi() { return PhaseExpr(TrigCoeff::var(Var::cos_phi)); }
  static PhaseExpr sin_phi() { return PhaseExpr(TrigCoeff::var(Var::sin_phi)); }
  static PhaseExpr cot_theta() { return PhaseExpr(TrigCoeff::cot_theta()); }
  static PhaseExpr csc_theta(int power = 1) { return PhaseExpr(TrigCoeff::csc_theta(power)); }
  static PhaseExpr sec_phi(int power = 1) { return PhaseExpr(TrigCoeff::sec_phi(power)); }
  static PhaseExpr tan_phi() { return PhaseExpr(TrigCoeff::tan_phi()); }

  const TrigCoeff& value() const { return value_; }
  bool is_zero() const { return value_.is_zero(); }
  bool operator==(const PhaseExpr& o) const = default;

  PhaseExpr operator-() const { return PhaseExpr(-value_); }
  PhaseExpr& operator+=(const PhaseExpr& o) {
    value_ += o.value_;
    return *this;
  }
  PhaseExpr& operator-=(const PhaseExpr& o) {
    value_ -= o.value_;
    return *this;
  }
  PhaseExpr& operator*=(const PhaseExpr& o) {
    value_ *= o.value_;
    return *this;
  }
  friend PhaseExpr operator+(PhaseExpr a, const PhaseExpr& b) { return a += b; }
  friend PhaseExpr operator-(PhaseExpr a, const PhaseExpr& b) { return a -= b; }
  friend PhaseExpr operator*(PhaseExpr a, const PhaseExpr& b) { return a *= b; }
  friend PhaseExpr operator/(const PhaseExpr& a, const PhaseExpr& b) { return PhaseExpr(a.value_ / b.value_); }
  PhaseExpr pow(unsigned e) const { return PhaseExpr(value_.pow(e)); }

  /// i -> -i.
  PhaseExpr conj() const { return PhaseExpr(value_.negate_var(Var::imag)); }
  PhaseExpr real_part() const { return PhaseExpr(value_.coefficient(Var::imag, 0)); }
  PhaseExpr imag_part() const { return PhaseExpr(value_.coefficient(Var::imag, 1)); }
  /// Coefficient of s^e (e = 0 or 1) in the s-reduced form.
  PhaseExpr sqrt_hphi_part(int e) const { return PhaseExpr(value_.coefficient(Var::sqrt_hphi, e)); }
  /// Replaces a by a rational number.
  PhaseExpr with_alpha2(const mpq_class& a) const { return PhaseExpr(value_.substitute(Var::alpha2, Poly(a))); }

  PhaseExpr diff(Coord coordinate) const { return PhaseExpr(value_.diff(coordinate)); }

  /// Total degree in (p_theta, p_phi) of the numerator; s counts as one.
  int momentum_degree() const;

  std::complex<double> eval(const PhaseState& state, double alpha2) const;

  std::string to_string() const { return value_.to_string(); }

 private:
  TrigCoeff value_;
};

/// Every PhaseExpr is stored in canonical form; kept as a named operation for
/// call sites that want to state the intent.
inline PhaseExpr canonicalize(const PhaseExpr& e) { return e; }

/// sum over q in {theta, phi} of  df/dq dg/dp_q - df/dp_q dg/dq.
PhaseExpr poisson(const PhaseExpr& f, const PhaseExpr& g);

/// Double-precision copy of an expression for repeated evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const PhaseExpr& e);

  std::complex<double> operator()(const PhaseState& state, double alpha2) const;
  /// Real part only; throws if the expression carries i or s.
  double real(const PhaseState& state, double alpha2) const;

 private:
  struct Term {
    double coeff;
    Monomial mono;
  };
  std::vector<Term> terms_;
  int den_sin_theta_ = 0;
  int den_hphi_ = 0;
  bool complex_ = false;
};

}  // namespace symforge
