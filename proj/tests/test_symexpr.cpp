#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "symforge/phase_expr.hpp"

using namespace symforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PhaseExpr cth() { return PhaseExpr::cos_theta(); }
PhaseExpr sth() { return PhaseExpr::sin_theta(); }
PhaseExpr cph() { return PhaseExpr::cos_phi(); }
PhaseExpr sph() { return PhaseExpr::sin_phi(); }
PhaseExpr pth() { return PhaseExpr::p_theta(); }
PhaseExpr pph() { return PhaseExpr::p_phi(); }
PhaseExpr s() { return PhaseExpr::sqrt_hphi(); }
PhaseExpr a() { return PhaseExpr::alpha2(); }

// A few unrelated expressions exercising every kind of symbol.
std::vector<PhaseExpr> samples() {
  return {
      pth().pow(2) * PhaseExpr::cot_theta() + pph() * sph(),
      PhaseExpr::sec_phi(2) * pth() + cth() * pph().pow(2),
      s() * cth() + PhaseExpr::tan_phi() * pth() * pph(),
      a() * PhaseExpr::csc_theta(2) + pth() * sth() * s(),
      pph().pow(3) * cph() - PhaseExpr(mpq_class(3, 2)) * pth() * sph() * cth(),
  };
}

// H written with plain libm calls, independent of the canonical forms.
double direct_h(const PhaseState& st, double k, double alpha2) {
  const double hphi = st.p_phi * st.p_phi + alpha2 / (std::cos(st.phi) * std::cos(st.phi));
  return st.p_theta * st.p_theta + k * k * hphi / (std::sin(st.theta) * std::sin(st.theta));
}

}  // namespace

TEST_CASE("sin^2 reduces against cos^2", "[poly]") {
  CHECK(Poly::var(Var::sin_theta, 2) == Poly(1) - Poly::var(Var::cos_theta, 2));
  CHECK(Poly::var(Var::sin_phi, 3) == Poly::var(Var::sin_phi) - Poly::var(Var::sin_phi) * Poly::var(Var::cos_phi, 2));
  CHECK((sth().pow(2) + cth().pow(2) - 1L).is_zero());
}

TEST_CASE("i and s reduce", "[poly]") {
  CHECK(Poly::var(Var::imag, 2) == Poly(-1));
  CHECK(Poly::var(Var::sqrt_hphi, 2) ==
        Poly::var(Var::p_phi, 2) + Poly::var(Var::alpha2) * Poly::var(Var::cos_phi, -2));
  CHECK(s().pow(3) == s() * (pph().pow(2) + a() * PhaseExpr::sec_phi(2)));
}

TEST_CASE("rational coefficients are stored in lowest terms", "[poly]") {
  const mpq_class unreduced(12, 2);  // gmp leaves this as 12/2
  CHECK(Poly(unreduced) == Poly(6));
  CHECK(Poly(unreduced).to_string() == "6");
  CHECK(Poly::term(Monomial{}, mpq_class(4, 8)) == Poly(mpq_class(1, 2)));
}

TEST_CASE("cos_phi is a Laurent symbol", "[poly]") {
  const Poly sec = Poly::var(Var::cos_phi, -1);
  CHECK(sec * Poly::var(Var::cos_phi) == Poly(1));
  CHECK(sec.min_degree(Var::cos_phi) == -1);
}

TEST_CASE("substitution and coefficient extraction", "[poly]") {
  const Poly e = Poly::var(Var::eps);
  const Poly p = e.pow(2) * Poly(3) + e * Poly::var(Var::M) + Poly(5);
  CHECK(p.coefficient(Var::eps, 2) == Poly(3));
  CHECK(p.coefficient(Var::eps, 1) == Poly::var(Var::M));
  CHECK(p.substitute(Var::eps, Poly(2)) == Poly(17) + Poly(2) * Poly::var(Var::M));
  CHECK(p.negate_var(Var::eps) == e.pow(2) * Poly(3) - e * Poly::var(Var::M) + Poly(5));
}

TEST_CASE("trigonometric derivatives", "[trig]") {
  CHECK(PhaseExpr::cot_theta().diff(Coord::theta) == -PhaseExpr::csc_theta(2));
  CHECK(PhaseExpr::tan_phi().diff(Coord::phi) == PhaseExpr::sec_phi(2));
  CHECK(PhaseExpr::sec_phi().diff(Coord::phi) == PhaseExpr::sec_phi() * PhaseExpr::tan_phi());
  CHECK(PhaseExpr::csc_theta().diff(Coord::theta) == -PhaseExpr::csc_theta() * PhaseExpr::cot_theta());
  CHECK(sth().diff(Coord::theta) == cth());
  CHECK(cph().diff(Coord::phi) == -sph());
}

TEST_CASE("derivatives of sqrt(H_phi)", "[trig]") {
  // d s/dp_phi = p_phi / s, d s/dphi = a sec^2 tan / s
  CHECK(s().diff(Coord::p_phi) * s() == pph());
  CHECK(s().diff(Coord::phi) * s() == a() * PhaseExpr::sec_phi(2) * PhaseExpr::tan_phi());
  CHECK(s().diff(Coord::theta).is_zero());
}

TEST_CASE("exact division by units only", "[trig]") {
  CHECK(PhaseExpr::csc_theta() * sth() == PhaseExpr(1L));
  CHECK(PhaseExpr(1L) / (s() * s()) * (pph().pow(2) + a() * PhaseExpr::sec_phi(2)) == PhaseExpr(1L));
  CHECK_THROWS_AS(PhaseExpr(1L) / cth(), std::domain_error);
  CHECK_THROWS_AS(PhaseExpr(1L) / PhaseExpr(0L), std::domain_error);
}

TEST_CASE("evaluation matches direct arithmetic", "[eval]") {
  const mpq_class k(3, 2);
  const PhaseExpr H = pth().pow(2) + PhaseExpr(k * k) * (pph().pow(2) + a() * PhaseExpr::sec_phi(2)) *
                                         PhaseExpr::csc_theta(2);
  const PhaseState st{0.0, 1.2, 0.2, 0.4, 0.8};
  CHECK_THAT(H.eval(st, 1.0).real(), WithinRel(direct_h(st, 1.5, 1.0), 1e-14));
  CHECK_THAT(CompiledExpr(H).real(st, 1.0), WithinRel(direct_h(st, 1.5, 1.0), 1e-14));
  const double hphi = 0.64 + 1.0 / std::pow(std::cos(0.2), 2);
  CHECK_THAT(s().eval(st, 1.0).real(), WithinRel(std::sqrt(hphi), 1e-14));
  CHECK_THAT(PhaseExpr::imag().eval(st, 1.0).imag(), WithinAbs(1.0, 0));
}

TEST_CASE("domain checks", "[eval]") {
  CHECK_NOTHROW(check_domain({0, 1.0, 0.0, 0, 0}));
  CHECK_THROWS_AS(check_domain({0, 0.0, 0.0, 0, 0}), DomainError);
  CHECK_THROWS_AS(check_domain({0, 1.0, M_PI / 2, 0, 0}), DomainError);
  CHECK_THROWS_AS(check_domain({0, 1.0, -2.0, 0, 0}), DomainError);
}

TEST_CASE("canonical brackets", "[poisson]") {
  CHECK(poisson(cth(), pth()) == -sth());
  CHECK(poisson(pth(), cth()) == sth());
  CHECK(poisson(sph(), pph()) == cph());
  CHECK(poisson(pth(), pph()).is_zero());
  CHECK(poisson(cth(), sph()).is_zero());
  // {H_phi, s} = 0 since s is a function of H_phi.
  CHECK(poisson(pph().pow(2) + a() * PhaseExpr::sec_phi(2), s()).is_zero());
}

TEST_CASE("bracket antisymmetry, Leibniz and Jacobi", "[poisson]") {
  const auto xs = samples();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& f = xs[i];
    const auto& g = xs[(i + 1) % xs.size()];
    const auto& h = xs[(i + 2) % xs.size()];
    CHECK((poisson(f, g) + poisson(g, f)).is_zero());
    CHECK((poisson(f, g * h) - poisson(f, g) * h - g * poisson(f, h)).is_zero());
    CHECK((poisson(f, poisson(g, h)) + poisson(g, poisson(h, f)) + poisson(h, poisson(f, g))).is_zero());
  }
}

TEST_CASE("symbolic brackets agree with finite differences at seeded states", "[poisson][oracle]") {
  const auto xs = samples();
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> th(0.3, 2.8), ph(-1.2, 1.2), p(-1.5, 1.5);
  const double alpha2 = 0.7;

  auto partial = [&](const PhaseExpr& f, PhaseState st, int c) {
    double* x[4] = {&st.theta, &st.phi, &st.p_theta, &st.p_phi};
    const double x0 = *x[c], h = 1e-3;
    auto at = [&](double d) {
      *x[c] = x0 + d;
      return f.eval(st, alpha2).real();
    };
    return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
  };

  for (int trial = 0; trial < 100; ++trial) {
    const PhaseState st{0.0, th(rng), ph(rng), p(rng), p(rng)};
    const auto& f = xs[static_cast<std::size_t>(trial) % xs.size()];
    const auto& g = xs[static_cast<std::size_t>(trial + 2) % xs.size()];
    double fd = 0, scale = 0;
    for (int c = 0; c < 2; ++c) {
      const double u = partial(f, st, c) * partial(g, st, c + 2);
      const double v = partial(f, st, c + 2) * partial(g, st, c);
      fd += u - v;
      scale += std::abs(u) + std::abs(v);
    }
    const double exact = poisson(f, g).eval(st, alpha2).real();
    CHECK(std::abs(exact - fd) <= 1e-6 * scale + 1e-12);
  }
}

TEST_CASE("conjugation and parts", "[phase]") {
  const PhaseExpr i = PhaseExpr::imag();
  const PhaseExpr z = pth() + i * s() * cph();
  CHECK(z.conj() == pth() - i * s() * cph());
  CHECK(z.real_part() == pth());
  CHECK(z.imag_part() == s() * cph());
  CHECK(z.imag_part().sqrt_hphi_part(1) == cph());
  CHECK((z * z.conj()).imag_part().is_zero());
  CHECK(z.with_alpha2(0) == z);
  CHECK((s() * s()).with_alpha2(0) == pph().pow(2));
}

TEST_CASE("momentum degree", "[phase]") {
  CHECK(pth().pow(2).momentum_degree() == 2);
  CHECK((s() * pth()).momentum_degree() == 2);
  CHECK(PhaseExpr::cot_theta().momentum_degree() == 0);
}
