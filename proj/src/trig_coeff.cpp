#include "symforge/trig_coeff.hpp"

#include <stdexcept>

namespace symforge {

namespace {

Poly sin_theta_power_poly(int k) { return Poly::var(Var::sin_theta).pow(static_cast<unsigned>(k)); }

Poly hphi_power_poly(int h) { return TrigCoeff::hphi_poly().pow(static_cast<unsigned>(h)); }

Monomial single(Var v, int e) {
  Monomial m;
  m[v] = static_cast<std::int8_t>(e);
  return m;
}

// n = x0 + x1 sth with x0, x1 free of sth. n / sth = x1 + sth x0 / (1 - cth^2)
// exists iff (cth^2 - 1) divides x0 as a polynomial in cth.
bool divide_by_sin_theta(const Poly& n, Poly& out) {
  const Poly x0 = n.coefficient(Var::sin_theta, 0);
  const Poly x1 = n.coefficient(Var::sin_theta, 1);
  const int top = x0.max_degree(Var::cos_theta);
  std::vector<Poly> r(static_cast<std::size_t>(std::max(top, 1)) + 1);
  for (int e = 0; e <= top; ++e) r[static_cast<std::size_t>(e)] = x0.coefficient(Var::cos_theta, e);
  Poly quotient;
  for (int e = top; e >= 2; --e) {
    const Poly& q = r[static_cast<std::size_t>(e)];
    if (q.is_zero()) continue;
    quotient += q.mul_monomial(single(Var::cos_theta, e - 2));
    r[static_cast<std::size_t>(e - 2)] += q;
  }
  if (!r[0].is_zero() || !r[1].is_zero()) return false;
  out = x1 - quotient * Poly::var(Var::sin_theta);
  return true;
}

// H_phi = cph^-2 (a + cph^2 pph^2); divide by the monic-in-a factor with Horner.
bool divide_by_hphi(const Poly& n, Poly& out) {
  const int top = n.max_degree(Var::alpha2);
  if (top == 0) return false;
  Monomial t_shift;
  t_shift[Var::cos_phi] = 2;
  t_shift[Var::p_phi] = 2;
  std::vector<Poly> q(static_cast<std::size_t>(top));
  q[static_cast<std::size_t>(top - 1)] = n.coefficient(Var::alpha2, top);
  for (int e = top - 1; e >= 1; --e)
    q[static_cast<std::size_t>(e - 1)] =
        n.coefficient(Var::alpha2, e) - q[static_cast<std::size_t>(e)].mul_monomial(t_shift);
  const Poly remainder = n.coefficient(Var::alpha2, 0) - q[0].mul_monomial(t_shift);
  if (!remainder.is_zero()) return false;
  Poly quotient;
  for (int e = 0; e < top; ++e) quotient += q[static_cast<std::size_t>(e)].mul_monomial(single(Var::alpha2, e));
  out = quotient.mul_monomial(single(Var::cos_phi, 2));
  return true;
}

bool is_unit_monomial(const Poly& p) {
  if (p.size() != 1) return false;
  const Monomial& m = p.terms().front().first;
  for (std::size_t k = 0; k < kVarCount; ++k) {
    const auto v = static_cast<Var>(k);
    if (v == Var::cos_phi || v == Var::sin_theta) continue;
    if (m.exps[k] != 0) return false;
  }
  return true;
}

}  // namespace

TrigCoeff::TrigCoeff(Poly num, int sin_theta_power, int hphi_power)
    : num_(std::move(num)), den_sin_theta_(sin_theta_power), den_hphi_(hphi_power) {
  if (sin_theta_power < 0 || hphi_power < 0) throw std::domain_error("negative denominator power");
  normalize();
}

const Poly& TrigCoeff::hphi_poly() {
  static const Poly h = Poly::var(Var::p_phi, 2) + Poly::term(
                                                       [] {
                                                         Monomial m;
                                                         m[Var::alpha2] = 1;
                                                         m[Var::cos_phi] = -2;
                                                         return m;
                                                       }(),
                                                       1);
  return h;
}

TrigCoeff TrigCoeff::cot_theta() { return TrigCoeff(Poly::var(Var::cos_theta), 1, 0); }

TrigCoeff TrigCoeff::csc_theta(int power) { return TrigCoeff(Poly(1L), power, 0); }

TrigCoeff TrigCoeff::sec_phi(int power) { return TrigCoeff(Poly::var(Var::cos_phi, -power)); }

TrigCoeff TrigCoeff::tan_phi() { return TrigCoeff(Poly::var(Var::sin_phi) * Poly::var(Var::cos_phi, -1)); }

void TrigCoeff::normalize() {
  if (num_.is_zero()) {
    den_sin_theta_ = 0;
    den_hphi_ = 0;
    return;
  }
  Poly reduced;
  while (den_sin_theta_ > 0 && divide_by_sin_theta(num_, reduced)) {
    num_ = std::move(reduced);
    --den_sin_theta_;
  }
  while (den_hphi_ > 0 && divide_by_hphi(num_, reduced)) {
    num_ = std::move(reduced);
    --den_hphi_;
  }
}

TrigCoeff TrigCoeff::operator-() const {
  TrigCoeff r = *this;
  r.num_ = -r.num_;
  return r;
}

TrigCoeff& TrigCoeff::operator+=(const TrigCoeff& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_sin_theta_ == o.den_sin_theta_ && den_hphi_ == o.den_hphi_) {
    num_ += o.num_;
  } else {
    const int k = std::max(den_sin_theta_, o.den_sin_theta_);
    const int h = std::max(den_hphi_, o.den_hphi_);
    Poly lhs = num_;
    if (k > den_sin_theta_) lhs *= sin_theta_power_poly(k - den_sin_theta_);
    if (h > den_hphi_) lhs *= hphi_power_poly(h - den_hphi_);
    Poly rhs = o.num_;
    if (k > o.den_sin_theta_) rhs *= sin_theta_power_poly(k - o.den_sin_theta_);
    if (h > o.den_hphi_) rhs *= hphi_power_poly(h - o.den_hphi_);
    num_ = lhs + rhs;
    den_sin_theta_ = k;
    den_hphi_ = h;
  }
  normalize();
  return *this;
}

TrigCoeff& TrigCoeff::operator-=(const TrigCoeff& o) { return *this += -o; }

TrigCoeff& TrigCoeff::operator*=(const TrigCoeff& o) {
  num_ *= o.num_;
  den_sin_theta_ += o.den_sin_theta_;
  den_hphi_ += o.den_hphi_;
  normalize();
  return *this;
}

TrigCoeff TrigCoeff::pow(unsigned e) const {
  TrigCoeff r(1L);
  for (unsigned j = 0; j < e; ++j) r *= *this;
  return r;
}

TrigCoeff TrigCoeff::inverse() const {
  if (is_zero()) throw std::domain_error("division by an identically zero coefficient");
  Poly rest = num_;
  int hphi_factors = 0;
  Poly reduced;
  while (divide_by_hphi(rest, reduced)) {
    rest = std::move(reduced);
    ++hphi_factors;
  }
  if (!is_unit_monomial(rest)) throw std::domain_error("coefficient is not invertible: " + num_.to_string());
  const auto& [m, c] = rest.terms().front();
  Monomial inv;
  inv[Var::cos_phi] = static_cast<std::int8_t>(-m[Var::cos_phi]);
  Poly numerator = Poly::term(inv, mpq_class(1) / c);
  numerator *= sin_theta_power_poly(den_sin_theta_);
  numerator *= hphi_power_poly(den_hphi_);
  return TrigCoeff(std::move(numerator), m[Var::sin_theta], hphi_factors);
}

TrigCoeff TrigCoeff::diff(Coord coordinate) const {
  const Poly& n = num_;
  const int k = den_sin_theta_;
  const int h = den_hphi_;
  switch (coordinate) {
    case Coord::theta: {
      const Poly sth = Poly::var(Var::sin_theta);
      const Poly cth = Poly::var(Var::cos_theta);
      const Poly dn = cth * n.formal_partial(Var::sin_theta) - sth * n.formal_partial(Var::cos_theta);
      if (k == 0) return TrigCoeff(dn, 0, h);
      return TrigCoeff(dn * sth - mpq_class(k) * n * cth, k + 1, h);
    }
    case Coord::phi: {
      const Poly sph = Poly::var(Var::sin_phi);
      const Poly cph = Poly::var(Var::cos_phi);
      const Poly dn = cph * n.formal_partial(Var::sin_phi) - sph * n.formal_partial(Var::cos_phi);
      const Poly ds = n.formal_partial(Var::sqrt_hphi);
      if (ds.is_zero() && h == 0) return TrigCoeff(dn, k, 0);
      // a sph cph^-3: d(H_phi)/dphi = 2 * this, ds/dphi = this * s / H_phi
      Monomial w;
      w[Var::alpha2] = 1;
      w[Var::sin_phi] = 1;
      w[Var::cos_phi] = -3;
      const Poly weight = Poly::term(w, 1);
      Poly top = dn * hphi_poly() + ds * weight * Poly::var(Var::sqrt_hphi);
      if (h > 0) top -= mpq_class(2 * h) * n * weight;
      return TrigCoeff(std::move(top), k, h + 1);
    }
    case Coord::p_theta:
      return TrigCoeff(n.formal_partial(Var::p_theta), k, h);
    case Coord::p_phi: {
      const Poly dn = n.formal_partial(Var::p_phi);
      const Poly ds = n.formal_partial(Var::sqrt_hphi);
      if (ds.is_zero() && h == 0) return TrigCoeff(dn, k, 0);
      const Poly pph = Poly::var(Var::p_phi);
      Poly top = dn * hphi_poly() + ds * pph * Poly::var(Var::sqrt_hphi);
      if (h > 0) top -= mpq_class(2 * h) * pph * n;
      return TrigCoeff(std::move(top), k, h + 1);
    }
  }
  throw std::invalid_argument("unknown coordinate");
}

TrigCoeff TrigCoeff::substitute(Var v, const Poly& value) const {
  if (den_hphi_ > 0 && (v == Var::alpha2 || v == Var::p_phi || v == Var::cos_phi))
    throw std::domain_error("cannot substitute a symbol that occurs in the H_phi denominator");
  if (v == Var::sin_theta || v == Var::cos_theta) throw std::domain_error("cannot substitute a theta symbol");
  return TrigCoeff(num_.substitute(v, value), den_sin_theta_, den_hphi_);
}

TrigCoeff TrigCoeff::negate_var(Var v) const {
  TrigCoeff r = *this;
  r.num_ = num_.negate_var(v);
  return r;
}

TrigCoeff TrigCoeff::coefficient(Var v, int e) const {
  return TrigCoeff(num_.coefficient(v, e), den_sin_theta_, den_hphi_);
}

std::complex<double> TrigCoeff::evaluate(const std::array<std::complex<double>, kVarCount>& at) const {
  std::complex<double> v = num_.evaluate(at);
  if (den_sin_theta_ > 0) v /= std::pow(at[static_cast<std::size_t>(Var::sin_theta)], den_sin_theta_);
  if (den_hphi_ > 0) {
    const auto cph = at[static_cast<std::size_t>(Var::cos_phi)];
    const auto pph = at[static_cast<std::size_t>(Var::p_phi)];
    v /= std::pow(pph * pph + at[static_cast<std::size_t>(Var::alpha2)] / (cph * cph), den_hphi_);
  }
  return v;
}

std::string TrigCoeff::to_string() const {
  if (den_sin_theta_ == 0 && den_hphi_ == 0) return num_.to_string();
  std::string den;
  auto power = [](const char* base, int e) { return e == 1 ? std::string(base) : base + ("^" + std::to_string(e)); };
  if (den_sin_theta_ > 0) den = power("sth", den_sin_theta_);
  if (den_hphi_ > 0) den += std::string(den.empty() ? "" : "*") + power("Hphi", den_hphi_);
  return "(" + num_.to_string() + ")/(" + den + ")";
}

}  // namespace symforge
