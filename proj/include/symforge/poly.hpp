#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace symforge {

// Symbols of the coefficient ring. Order fixes the printed monomial order.
enum class Var : std::uint8_t {
  alpha2,     // a = alpha^2
  eps,        // formal eigenvalue symbol
  M,          // formal shift index
  Hop,        // commuting symbol standing for the full Hamiltonian
  Hphiop,     // commuting symbol standing for H_phi
  cos_theta,
  sin_theta,
  cos_phi,    // Laurent: negative exponents allowed
  sin_phi,
  p_theta,
  p_phi,
  sqrt_hphi,  // s, with s^2 = p_phi^2 + a cos_phi^-2
  imag,       // i, with i^2 = -1
  count
};

inline constexpr std::size_t kVarCount = static_cast<std::size_t>(Var::count);

const char* var_name(Var v);

struct Monomial {
  std::array<std::int8_t, kVarCount> exps{};

  std::int8_t operator[](Var v) const { return exps[static_cast<std::size_t>(v)]; }
  std::int8_t& operator[](Var v) { return exps[static_cast<std::size_t>(v)]; }

  bool is_one() const;
  int total(std::initializer_list<Var> vars) const;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

/// Sparse multivariate polynomial over Q in the symbols of `Var`.
///
/// Every stored monomial is reduced: sin_theta, sin_phi, imag and sqrt_hphi
/// appear with exponent at most one, using
///   sin^2 -> 1 - cos^2,  i^2 -> -1,  s^2 -> p_phi^2 + a cos_phi^-2.
/// With that reduction the representation is unique, so `==` is equality of
/// ring elements. Terms are kept sorted by monomial.
class Poly {
 public:
  using Term = std::pair<Monomial, mpq_class>;

  Poly() = default;
  Poly(long c);  // NOLINT(google-explicit-constructor)
  Poly(const mpq_class& c);  // NOLINT(google-explicit-constructor)

  static Poly var(Var v, int exp = 1);
  static Poly term(const Monomial& m, const mpq_class& c);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool is_constant() const;
  mpq_class constant_term() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const mpq_class& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const mpq_class& c) { return a *= c; }
  friend Poly operator*(const mpq_class& c, Poly a) { return a *= c; }
  bool operator==(const Poly& o) const;

  Poly pow(unsigned e) const;
  Poly mul_monomial(const Monomial& m) const;

  int max_degree(Var v) const;
  int min_degree(Var v) const;
  int max_total_degree(std::initializer_list<Var> vars) const;
  bool depends_on(Var v) const;

  /// Terms whose exponent of v equals e, with v removed.
  Poly coefficient(Var v, int e) const;
  Poly substitute(Var v, const Poly& value) const;
  /// Maps v -> -v; used for complex conjugation (imag) and parity in eps.
  Poly negate_var(Var v) const;
  /// Formal partial derivative treating every symbol as independent; the
  /// trigonometric chain rule lives in TrigCoeff.
  Poly formal_partial(Var v) const;

  std::complex<double> evaluate(const std::array<std::complex<double>, kVarCount>& at) const;

  std::string to_string() const;

 private:
  static Poly from_accumulator(std::vector<Term>&& raw);
  void add_scaled(const Poly& o, int sign);

  std::vector<Term> terms_;
};

std::string to_string(const mpq_class& q);

}  // namespace symforge
