#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>

#include "symforge/report.hpp"
#include "symforge/trig_coeff.hpp"

namespace symforge {

/// Exponents of d/dtheta and d/dphi in a normal-ordered term.
struct DerivOrder {
  int theta = 0;
  int phi = 0;
  auto operator<=>(const DerivOrder&) const = default;
};

/// Linear differential operator  sum f_{ab} d_theta^a d_phi^b  in normal
/// order (coefficients left of derivatives). Coefficients are TrigCoeff
/// values that may carry the commuting symbols eps, M and a; those are never
/// differentiated. Zero coefficients are never stored, so an operator is zero
/// iff it has no terms.
class DiffOp {
 public:
  using Terms = std::map<DerivOrder, TrigCoeff>;

  DiffOp() = default;
  DiffOp(long c) : DiffOp(TrigCoeff(c)) {}  // NOLINT(google-explicit-constructor)
  DiffOp(const TrigCoeff& c);  // NOLINT(google-explicit-constructor)

  static DiffOp identity() { return DiffOp(1L); }
  static DiffOp d_theta(int order = 1);
  static DiffOp d_phi(int order = 1);
  static DiffOp term(const TrigCoeff& c, DerivOrder order);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const DiffOp& o) const = default;

  /// Highest a+b present; -1 for the zero operator.
  int order() const;
  int order_theta() const;
  int order_phi() const;
  TrigCoeff coefficient(DerivOrder order) const;

  DiffOp operator-() const;
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  /// Composition p * q = p o q, normal ordered by the Leibniz rule.
  friend DiffOp operator*(const DiffOp& p, const DiffOp& q);
  DiffOp& operator*=(const DiffOp& o) { return *this = *this * o; }
  DiffOp pow(unsigned e) const;

  /// Left multiplication by a scalar coefficient (no derivative expansion).
  DiffOp scaled(const TrigCoeff& c) const;

  DiffOp substitute(Var v, const Poly& value) const;
  /// Coefficient of v^e in every coefficient (v = eps, M, ...).
  DiffOp coefficient_of(Var v, int e) const;
  int max_degree(Var v) const;
  bool depends_on(Var v) const;

  /// Formal adjoint for the weight sin(theta) dtheta dphi:
  ///   (d_theta)^+ = -(d_theta + cot theta),  (d_phi)^+ = -d_phi,  f^+ = f.
  /// Requires real coefficients (no i, no s).
  DiffOp adjoint() const;

  std::string to_string() const;

 private:
  void add_term(DerivOrder order, const TrigCoeff& c);

  Terms terms_;
};

DiffOp commutator(const DiffOp& p, const DiffOp& q);
inline DiffOp compose(const DiffOp& p, const DiffOp& q) { return p * q; }

namespace diffop {

/// H_theta^M = -d_theta^2 - cot d_theta + M^2 csc^2 theta, with M any
/// polynomial in the formal symbols (usually M itself or k*eps + j).
DiffOp hamiltonian_theta(const Poly& M);
/// H_phi = -d_phi^2 + a sec^2 phi.
DiffOp hamiltonian_phi();

/// B+_e = -cos phi d_phi + e sin phi,  B-_e = cos phi d_phi + (e+1) sin phi.
DiffOp ladder_plus(const Poly& index);
DiffOp ladder_minus(const Poly& index);
/// A+_M = -d_theta + (M-1) cot theta,  A-_M = d_theta + M cot theta.
DiffOp shift_plus(const Poly& index);
DiffOp shift_minus(const Poly& index);

/// lambda_M = M (M - 1).
Poly default_lambda(const Poly& M);

/// Factorization and intertwining of the H_theta^M hierarchy with M a
/// formal symbol; `lambda` lets tests inject a wrong factorization constant.
VerificationReport intertwine_check(const std::function<Poly(const Poly&)>& lambda = default_lambda);

}  // namespace diffop

}  // namespace symforge
