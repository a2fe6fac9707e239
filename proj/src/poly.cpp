#include "symforge/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace symforge {

namespace {

using Accumulator = std::unordered_map<Monomial, mpq_class, MonomialHash>;

std::int8_t checked_exp(int e) {
  if (e > 127 || e < -128) throw std::overflow_error("monomial exponent overflow");
  return static_cast<std::int8_t>(e);
}

void accumulate(Accumulator& acc, const Monomial& m, const mpq_class& c) {
  auto [it, inserted] = acc.try_emplace(m, c);
  if (!inserted) it->second += c;
}

// Expands a monomial whose reduced symbols may carry exponent 2 into reduced
// monomials, adding c times the result into acc.
void accumulate_reduced(Accumulator& acc, Monomial m, const mpq_class& c) {
  if (m[Var::sin_theta] >= 2) {
    m[Var::sin_theta] = checked_exp(m[Var::sin_theta] - 2);
    accumulate_reduced(acc, m, c);
    m[Var::cos_theta] = checked_exp(m[Var::cos_theta] + 2);
    accumulate_reduced(acc, m, -c);
    return;
  }
  if (m[Var::sin_phi] >= 2) {
    m[Var::sin_phi] = checked_exp(m[Var::sin_phi] - 2);
    accumulate_reduced(acc, m, c);
    m[Var::cos_phi] = checked_exp(m[Var::cos_phi] + 2);
    accumulate_reduced(acc, m, -c);
    return;
  }
  if (m[Var::imag] >= 2) {
    m[Var::imag] = checked_exp(m[Var::imag] - 2);
    accumulate_reduced(acc, m, -c);
    return;
  }
  if (m[Var::sqrt_hphi] >= 2) {
    m[Var::sqrt_hphi] = checked_exp(m[Var::sqrt_hphi] - 2);
    Monomial kinetic = m;
    kinetic[Var::p_phi] = checked_exp(kinetic[Var::p_phi] + 2);
    accumulate_reduced(acc, kinetic, c);
    m[Var::alpha2] = checked_exp(m[Var::alpha2] + 1);
    m[Var::cos_phi] = checked_exp(m[Var::cos_phi] - 2);
    accumulate_reduced(acc, m, c);
    return;
  }
  accumulate(acc, m, c);
}

Monomial raw_product(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t k = 0; k < kVarCount; ++k) r.exps[k] = checked_exp(a.exps[k] + b.exps[k]);
  return r;
}

bool is_reduced_symbol(Var v) {
  return v == Var::sin_theta || v == Var::sin_phi || v == Var::imag || v == Var::sqrt_hphi;
}

}  // namespace

const char* var_name(Var v) {
  switch (v) {
    case Var::alpha2: return "a";
    case Var::eps: return "eps";
    case Var::M: return "M";
    case Var::Hop: return "H";
    case Var::Hphiop: return "Hphi";
    case Var::cos_theta: return "cth";
    case Var::sin_theta: return "sth";
    case Var::cos_phi: return "cph";
    case Var::sin_phi: return "sph";
    case Var::p_theta: return "pth";
    case Var::p_phi: return "pph";
    case Var::sqrt_hphi: return "s";
    case Var::imag: return "i";
    case Var::count: break;
  }
  return "?";
}

bool Monomial::is_one() const {
  return std::all_of(exps.begin(), exps.end(), [](std::int8_t e) { return e == 0; });
}

int Monomial::total(std::initializer_list<Var> vars) const {
  int t = 0;
  for (Var v : vars) t += (*this)[v];
  return t;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (std::int8_t e : m.exps) {
    h ^= static_cast<std::uint8_t>(e);
    h *= 1099511628211ULL;
  }
  return h;
}

Poly::Poly(long c) : Poly(mpq_class(c)) {}

Poly::Poly(const mpq_class& c) {
  if (c == 0) return;
  terms_.emplace_back(Monomial{}, c);
  terms_.back().second.canonicalize();  // callers may pass mpq_class(p, q) unreduced
}

Poly Poly::var(Var v, int exp) {
  if (exp < 0 && v != Var::cos_phi) throw std::domain_error("negative exponent only allowed for cos_phi");
  if (!is_reduced_symbol(v) || exp <= 1) {
    Monomial m;
    m[v] = checked_exp(exp);
    return term(m, 1);
  }
  return var(v).pow(static_cast<unsigned>(exp));
}

Poly Poly::term(const Monomial& m, const mpq_class& c0) {
  Poly p;
  if (c0 == 0) return p;
  mpq_class c = c0;
  c.canonicalize();
  Accumulator acc;
  accumulate_reduced(acc, m, c);
  std::vector<Term> raw(acc.begin(), acc.end());
  return from_accumulator(std::move(raw));
}

Poly Poly::from_accumulator(std::vector<Term>&& raw) {
  Poly p;
  raw.erase(std::remove_if(raw.begin(), raw.end(), [](const Term& t) { return t.second == 0; }), raw.end());
  std::sort(raw.begin(), raw.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  p.terms_ = std::move(raw);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().first.is_one());
}

mpq_class Poly::constant_term() const {
  for (const auto& [m, c] : terms_)
    if (m.is_one()) return c;
  return 0;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

void Poly::add_scaled(const Poly& o, int sign) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a));
      ++a;
    } else if (a == terms_.end() || b->first < a->first) {
      merged.emplace_back(b->first, sign > 0 ? b->second : mpq_class(-b->second));
      ++b;
    } else {
      mpq_class c = sign > 0 ? mpq_class(a->second + b->second) : mpq_class(a->second - b->second);
      if (c != 0) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

Poly& Poly::operator+=(const Poly& o) {
  add_scaled(o, 1);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  add_scaled(o, -1);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Accumulator acc;
  acc.reserve(a.size() * b.size());
  mpq_class prod;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      prod = ca * cb;
      accumulate_reduced(acc, raw_product(ma, mb), prod);
    }
  }
  std::vector<Poly::Term> raw;
  raw.reserve(acc.size());
  for (auto& kv : acc) raw.emplace_back(kv.first, std::move(kv.second));
  return Poly::from_accumulator(std::move(raw));
}

Poly& Poly::operator*=(const Poly& o) {
  *this = *this * o;
  return *this;
}

Poly& Poly::operator*=(const mpq_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

bool Poly::operator==(const Poly& o) const { return terms_ == o.terms_; }

Poly Poly::pow(unsigned e) const {
  Poly result(1L);
  Poly base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

Poly Poly::mul_monomial(const Monomial& m) const {
  bool touches_reduced = false;
  for (Var v : {Var::sin_theta, Var::sin_phi, Var::imag, Var::sqrt_hphi}) touches_reduced |= m[v] != 0;
  if (touches_reduced) return *this * term(m, 1);
  Poly r;
  r.terms_.reserve(terms_.size());
  for (const auto& [mm, c] : terms_) r.terms_.emplace_back(raw_product(mm, m), c);
  // Adding the same exponent vector to every key preserves lexicographic order.
  return r;
}

int Poly::max_degree(Var v) const {
  int d = std::numeric_limits<int>::min();
  for (const auto& t : terms_) d = std::max<int>(d, t.first[v]);
  return terms_.empty() ? 0 : d;
}

int Poly::min_degree(Var v) const {
  int d = std::numeric_limits<int>::max();
  for (const auto& t : terms_) d = std::min<int>(d, t.first[v]);
  return terms_.empty() ? 0 : d;
}

int Poly::max_total_degree(std::initializer_list<Var> vars) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.total(vars));
  return d;
}

bool Poly::depends_on(Var v) const {
  return std::any_of(terms_.begin(), terms_.end(), [v](const Term& t) { return t.first[v] != 0; });
}

Poly Poly::coefficient(Var v, int e) const {
  std::vector<Term> raw;
  for (const auto& [m, c] : terms_) {
    if (m[v] != e) continue;
    Monomial r = m;
    r[v] = 0;
    raw.emplace_back(r, c);
  }
  return from_accumulator(std::move(raw));
}

Poly Poly::substitute(Var v, const Poly& value) const {
  if (!depends_on(v)) return *this;
  const int lo = min_degree(v);
  const int hi = max_degree(v);
  if (lo < 0) throw std::domain_error("cannot substitute into a Laurent symbol");
  Poly result;
  Poly power(1L);
  for (int e = 0; e <= hi; ++e) {
    Poly c = coefficient(v, e);
    if (!c.is_zero()) result += c * power;
    if (e < hi) power *= value;
  }
  return result;
}

Poly Poly::negate_var(Var v) const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_)
    if (m[v] % 2 != 0) c = -c;
  return r;
}

Poly Poly::formal_partial(Var v) const {
  Accumulator acc;
  for (const auto& [m, c] : terms_) {
    const int e = m[v];
    if (e == 0) continue;
    Monomial r = m;
    r[v] = checked_exp(e - 1);
    accumulate_reduced(acc, r, c * e);
  }
  std::vector<Term> raw;
  for (auto& kv : acc) raw.emplace_back(kv.first, std::move(kv.second));
  return from_accumulator(std::move(raw));
}

std::complex<double> Poly::evaluate(const std::array<std::complex<double>, kVarCount>& at) const {
  std::complex<double> sum = 0.0;
  for (const auto& [m, c] : terms_) {
    std::complex<double> t = c.get_d();
    for (std::size_t k = 0; k < kVarCount; ++k) {
      const int e = m.exps[k];
      if (e == 0) continue;
      t *= std::pow(at[k], e);
    }
    sum += t;
  }
  return sum;
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    mpq_class mag = abs(c);
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1 || m.is_one()) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t k = 0; k < kVarCount; ++k) {
      const int e = m.exps[k];
      if (e == 0) continue;
      if (wrote) os << "*";
      os << var_name(static_cast<Var>(k));
      if (e != 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace symforge
