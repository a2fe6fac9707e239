#include "symforge/diffop.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace symforge {

namespace {

mpq_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return mpq_class(r);
}

// table[i][j] = d_theta^i d_phi^j g
std::vector<std::vector<TrigCoeff>> derivative_table(const TrigCoeff& g, int max_theta, int max_phi) {
  std::vector<std::vector<TrigCoeff>> table(static_cast<std::size_t>(max_theta + 1));
  TrigCoeff row = g;
  for (int i = 0; i <= max_theta; ++i) {
    auto& r = table[static_cast<std::size_t>(i)];
    r.reserve(static_cast<std::size_t>(max_phi + 1));
    TrigCoeff cur = row;
    for (int j = 0; j <= max_phi; ++j) {
      r.push_back(cur);
      if (j < max_phi) cur = cur.is_zero() ? cur : cur.diff(Coord::phi);
    }
    if (i < max_theta) row = row.is_zero() ? row : row.diff(Coord::theta);
  }
  return table;
}

}  // namespace

DiffOp::DiffOp(const TrigCoeff& c) { add_term({0, 0}, c); }

DiffOp DiffOp::d_theta(int order) { return term(TrigCoeff(1L), {order, 0}); }
DiffOp DiffOp::d_phi(int order) { return term(TrigCoeff(1L), {0, order}); }

DiffOp DiffOp::term(const TrigCoeff& c, DerivOrder order) {
  if (order.theta < 0 || order.phi < 0) throw std::invalid_argument("negative derivative order");
  DiffOp r;
  r.add_term(order, c);
  return r;
}

void DiffOp::add_term(DerivOrder order, const TrigCoeff& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(order, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int DiffOp::order() const {
  int r = -1;
  for (const auto& [o, c] : terms_) r = std::max(r, o.theta + o.phi);
  return r;
}

int DiffOp::order_theta() const {
  int r = -1;
  for (const auto& [o, c] : terms_) r = std::max(r, o.theta);
  return r;
}

int DiffOp::order_phi() const {
  int r = -1;
  for (const auto& [o, c] : terms_) r = std::max(r, o.phi);
  return r;
}

TrigCoeff DiffOp::coefficient(DerivOrder order) const {
  auto it = terms_.find(order);
  return it == terms_.end() ? TrigCoeff() : it->second;
}

DiffOp DiffOp::operator-() const {
  DiffOp r = *this;
  for (auto& [o, c] : r.terms_) c = -c;
  return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  for (const auto& [ord, c] : o.terms_) add_term(ord, c);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  for (const auto& [ord, c] : o.terms_) add_term(ord, -c);
  return *this;
}

DiffOp operator*(const DiffOp& p, const DiffOp& q) {
  DiffOp r;
  const int max_theta = std::max(p.order_theta(), 0);
  const int max_phi = std::max(p.order_phi(), 0);
  for (const auto& [qo, g] : q.terms_) {
    const auto table = derivative_table(g, max_theta, max_phi);
    for (const auto& [po, f] : p.terms_) {
      // d_theta^a d_phi^b g = sum C(a,i) C(b,j) (d^{a-i,b-j} g) d^{i,j}
      for (int i = 0; i <= po.theta; ++i) {
        for (int j = 0; j <= po.phi; ++j) {
          const TrigCoeff& dg = table[static_cast<std::size_t>(po.theta - i)][static_cast<std::size_t>(po.phi - j)];
          if (dg.is_zero()) continue;
          const mpq_class w = binomial(po.theta, i) * binomial(po.phi, j);
          r.add_term({qo.theta + i, qo.phi + j}, f * dg * TrigCoeff(w));
        }
      }
    }
  }
  return r;
}

DiffOp DiffOp::pow(unsigned e) const {
  DiffOp r = identity();
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

DiffOp DiffOp::scaled(const TrigCoeff& c) const {
  DiffOp r;
  for (const auto& [o, f] : terms_) r.add_term(o, c * f);
  return r;
}

DiffOp DiffOp::substitute(Var v, const Poly& value) const {
  DiffOp r;
  for (const auto& [o, f] : terms_) r.add_term(o, f.substitute(v, value));
  return r;
}

DiffOp DiffOp::coefficient_of(Var v, int e) const {
  DiffOp r;
  for (const auto& [o, f] : terms_) r.add_term(o, f.coefficient(v, e));
  return r;
}

int DiffOp::max_degree(Var v) const {
  int r = 0;
  for (const auto& [o, f] : terms_) r = std::max(r, f.numerator().max_degree(v));
  return r;
}

bool DiffOp::depends_on(Var v) const {
  return std::any_of(terms_.begin(), terms_.end(), [v](const auto& t) { return t.second.depends_on(v); });
}

DiffOp DiffOp::adjoint() const {
  const DiffOp dth_dag = -(d_theta() + DiffOp(TrigCoeff::cot_theta()));
  const DiffOp dph_dag = -d_phi();
  DiffOp r;
  for (const auto& [o, f] : terms_) {
    if (f.depends_on(Var::imag) || f.depends_on(Var::sqrt_hphi))
      throw std::domain_error("adjoint requires real coefficients");
    // (f d_theta^a d_phi^b)^+ = (d_phi^+)^b (d_theta^+)^a f
    r += dph_dag.pow(static_cast<unsigned>(o.phi)) * dth_dag.pow(static_cast<unsigned>(o.theta)) * DiffOp(f);
  }
  return r;
}

std::string DiffOp::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [o, f] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + f.to_string() + ")";
    if (o.theta > 0) out += "*Dtheta" + (o.theta > 1 ? "^" + std::to_string(o.theta) : std::string());
    if (o.phi > 0) out += "*Dphi" + (o.phi > 1 ? "^" + std::to_string(o.phi) : std::string());
  }
  return out;
}

DiffOp commutator(const DiffOp& p, const DiffOp& q) { return p * q - q * p; }

namespace diffop {

DiffOp hamiltonian_theta(const Poly& M) {
  return -DiffOp::d_theta(2) - DiffOp(TrigCoeff::cot_theta()) * DiffOp::d_theta() +
         DiffOp(TrigCoeff(M * M) * TrigCoeff::csc_theta(2));
}

DiffOp hamiltonian_phi() {
  return -DiffOp::d_phi(2) + DiffOp(TrigCoeff::var(Var::alpha2) * TrigCoeff::sec_phi(2));
}

DiffOp ladder_plus(const Poly& index) {
  return -DiffOp(TrigCoeff::var(Var::cos_phi)) * DiffOp::d_phi() + DiffOp(TrigCoeff(index) * TrigCoeff::var(Var::sin_phi));
}

DiffOp ladder_minus(const Poly& index) {
  return DiffOp(TrigCoeff::var(Var::cos_phi)) * DiffOp::d_phi() +
         DiffOp(TrigCoeff(index + Poly(1L)) * TrigCoeff::var(Var::sin_phi));
}

DiffOp shift_plus(const Poly& index) {
  return -DiffOp::d_theta() + DiffOp(TrigCoeff(index - Poly(1L)) * TrigCoeff::cot_theta());
}

DiffOp shift_minus(const Poly& index) {
  return DiffOp::d_theta() + DiffOp(TrigCoeff(index) * TrigCoeff::cot_theta());
}

Poly default_lambda(const Poly& M) { return M * (M - Poly(1L)); }

namespace {

Residual zero_residual(const DiffOp& d) { return {d.is_zero(), d.to_string()}; }

}  // namespace

VerificationReport intertwine_check(const std::function<Poly(const Poly&)>& lambda) {
  const Poly M = Poly::var(Var::M);
  const Poly M1 = M + Poly(1L);
  const Poly Mm1 = M - Poly(1L);
  VerificationReport rep;
  rep.k = "M";
  rep.entries.push_back(timed_entry("H_theta^M = A+_M A-_M + lambda_M", "facqht2", [&] {
    return zero_residual(hamiltonian_theta(M) - shift_plus(M) * shift_minus(M) - DiffOp(TrigCoeff(lambda(M))));
  }));
  rep.entries.push_back(timed_entry("H_theta^M = A-_{M+1} A+_{M+1} + lambda_{M+1}", "facqht2", [&] {
    return zero_residual(hamiltonian_theta(M) - shift_minus(M1) * shift_plus(M1) - DiffOp(TrigCoeff(lambda(M1))));
  }));
  rep.entries.push_back(timed_entry("A-_M H_theta^M = H_theta^{M-1} A-_M", "aint", [&] {
    return zero_residual(shift_minus(M) * hamiltonian_theta(M) - hamiltonian_theta(Mm1) * shift_minus(M));
  }));
  rep.entries.push_back(timed_entry("A+_M H_theta^{M-1} = H_theta^M A+_M", "aint", [&] {
    return zero_residual(shift_plus(M) * hamiltonian_theta(Mm1) - hamiltonian_theta(M) * shift_plus(M));
  }));
  rep.entries.push_back(timed_entry("A-_1 H_theta^1 = H_theta^0 A-_1", "aint", [&] {
    const Poly one(1L);
    return zero_residual(shift_minus(one) * hamiltonian_theta(one) - hamiltonian_theta(Poly(0L)) * shift_minus(one));
  }));
  return rep;
}

}  // namespace diffop

}  // namespace symforge
