#include "symforge/phase_expr.hpp"

#include <cmath>
#include <numbers>

namespace symforge {

namespace {

struct Point {
  std::array<std::complex<double>, kVarCount> at{};
  double sin_theta = 0.0;
  double hphi = 0.0;
};

Point make_point(const PhaseState& s, double alpha2) {
  check_domain(s);
  Point p;
  const double cph = std::cos(s.phi);
  p.hphi = s.p_phi * s.p_phi + alpha2 / (cph * cph);
  if (!(p.hphi > 0.0)) throw DomainError("H_phi must be positive to evaluate sqrt(H_phi)");
  p.sin_theta = std::sin(s.theta);
  auto set = [&p](Var v, std::complex<double> x) { p.at[static_cast<std::size_t>(v)] = x; };
  set(Var::alpha2, alpha2);
  set(Var::cos_theta, std::cos(s.theta));
  set(Var::sin_theta, p.sin_theta);
  set(Var::cos_phi, cph);
  set(Var::sin_phi, std::sin(s.phi));
  set(Var::p_theta, s.p_theta);
  set(Var::p_phi, s.p_phi);
  set(Var::sqrt_hphi, std::sqrt(p.hphi));
  set(Var::imag, std::complex<double>(0.0, 1.0));
  return p;
}

void reject_formal_symbols(const Monomial& m) {
  for (Var v : {Var::eps, Var::M, Var::Hop, Var::Hphiop})
    if (m[v] != 0) throw std::invalid_argument(std::string("cannot evaluate formal symbol ") + var_name(v));
}

}  // namespace

void check_domain(const PhaseState& state) {
  constexpr double pi = std::numbers::pi;
  if (!(state.theta > 0.0 && state.theta < pi)) throw DomainError("theta outside (0, pi)");
  if (!(state.phi > -pi / 2 && state.phi < pi / 2)) throw DomainError("phi outside (-pi/2, pi/2)");
}

int PhaseExpr::momentum_degree() const {
  return value_.numerator().max_total_degree({Var::p_theta, Var::p_phi, Var::sqrt_hphi}) -
         2 * value_.hphi_power();
}

std::complex<double> PhaseExpr::eval(const PhaseState& state, double alpha2) const {
  const Point p = make_point(state, alpha2);
  for (const auto& t : value_.numerator().terms()) reject_formal_symbols(t.first);
  std::complex<double> v = value_.numerator().evaluate(p.at);
  v /= std::pow(p.sin_theta, value_.sin_theta_power());
  v /= std::pow(p.hphi, value_.hphi_power());
  return v;
}

PhaseExpr poisson(const PhaseExpr& f, const PhaseExpr& g) {
  PhaseExpr r = f.diff(Coord::theta) * g.diff(Coord::p_theta) - f.diff(Coord::p_theta) * g.diff(Coord::theta);
  r += f.diff(Coord::phi) * g.diff(Coord::p_phi) - f.diff(Coord::p_phi) * g.diff(Coord::phi);
  return r;
}

CompiledExpr::CompiledExpr(const PhaseExpr& e)
    : den_sin_theta_(e.value().sin_theta_power()), den_hphi_(e.value().hphi_power()) {
  for (const auto& [m, c] : e.value().numerator().terms()) {
    reject_formal_symbols(m);
    terms_.push_back({c.get_d(), m});
    complex_ |= m[Var::imag] != 0;
  }
}

std::complex<double> CompiledExpr::operator()(const PhaseState& state, double alpha2) const {
  const Point p = make_point(state, alpha2);
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) {
    std::complex<double> x = t.coeff;
    for (std::size_t k = 0; k < kVarCount; ++k) {
      const int e = t.mono.exps[k];
      if (e == 0) continue;
      if (e == 1) {
        x *= p.at[k];
      } else {
        x *= std::pow(p.at[k].real(), e);
      }
    }
    sum += x;
  }
  sum /= std::pow(p.sin_theta, den_sin_theta_);
  sum /= std::pow(p.hphi, den_hphi_);
  return sum;
}

double CompiledExpr::real(const PhaseState& state, double alpha2) const {
  if (complex_) throw std::logic_error("expression has an imaginary part");
  return (*this)(state, alpha2).real();
}

}  // namespace symforge
