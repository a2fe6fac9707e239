#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "symforge/dynamics.hpp"

using namespace symforge;
using namespace symforge::dynamics;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// H with libm only, for the finite-difference oracle.
double energy(double th, double ph, double pt, double pp, double k, double a) {
  const double c = std::cos(ph), s = std::sin(th);
  return pt * pt + k * k * (pp * pp + a / (c * c)) / (s * s);
}

const PhaseState kGolden{0.0, 1.2, 0.2, 0.4, 0.8};

}  // namespace

TEST_CASE("equations of motion at a symmetric point", "[dynamics]") {
  // theta = pi/2, phi = 0, p_phi = 0: only theta moves.
  const Vec4 d = hamilton_rhs({0, M_PI / 2, 0, 1.0, 0}, 1.0, 1.0);
  CHECK_THAT(d[0], WithinAbs(2.0, 1e-15));
  CHECK_THAT(d[1], WithinAbs(0.0, 1e-15));
  CHECK_THAT(d[2], WithinAbs(0.0, 1e-15));
  CHECK_THAT(d[3], WithinAbs(0.0, 1e-15));
}

TEST_CASE("equations of motion against finite differences of H", "[dynamics][oracle]") {
  const double th = 1.0, ph = 0.3, pt = 0.5, pp = 0.7, k = 2.0, a = 1.0, h = 1e-4;
  auto dH = [&](int c) {
    double x[4] = {th, ph, pt, pp};
    auto at = [&](double dx) {
      double y[4] = {x[0], x[1], x[2], x[3]};
      y[c] += dx;
      return energy(y[0], y[1], y[2], y[3], k, a);
    };
    return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
  };
  const Vec4 d = hamilton_rhs({0, th, ph, pt, pp}, k, a);
  CHECK_THAT(d[0], WithinRel(dH(2), 1e-9));
  CHECK_THAT(d[1], WithinRel(dH(3), 1e-9));
  CHECK_THAT(d[2], WithinRel(-dH(0), 1e-9));
  CHECK_THAT(d[3], WithinRel(-dH(1), 1e-9));
  CHECK_THROWS_AS(hamilton_rhs({0, 0.0, 0.0, 0, 0}, k, a), DomainError);
}

TEST_CASE("invariants are conserved along the golden orbit", "[dynamics]") {
  const auto p = Params::rational({3, 2}, 1.0);
  const auto tr = integrate(kGolden, p, 100.0, 1e-10);
  CHECK(tr.complete);
  CHECK(tr.samples.size() == 2001);
  CHECK_THAT(tr.samples.back().t, WithinAbs(100.0, 1e-12));
  for (int c = 0; c < 4; ++c) CHECK(tr.relative_drift(c) <= 1e-8);
  CHECK_THAT(tr.energy, WithinRel(energy(1.2, 0.2, 0.4, 0.8, 1.5, 1.0), 1e-14));
}

TEST_CASE("|X+|^2 equals the product of the separated energies", "[dynamics]") {
  const auto p = Params::rational({3, 2}, 1.0);
  const auto tr = integrate(kGolden, p, 1.0, 1e-10);
  const double rhs = std::pow(tr.energy_phi - 1.0, 2) * std::pow(tr.energy - 2.25 * tr.energy_phi, 3);
  CHECK_THAT(tr.q * tr.q, WithinRel(rhs, 1e-12));
}

TEST_CASE("time reversal returns to the start", "[dynamics]") {
  const auto p = Params::rational({3, 2}, 1.0);
  const auto fwd = integrate(kGolden, p, 100.0, 1e-10);
  PhaseState back = fwd.samples.back();
  back.t = 0;
  back.p_theta = -back.p_theta;
  back.p_phi = -back.p_phi;
  const auto rev = integrate(back, p, 100.0, 1e-10);
  const auto& end = rev.samples.back();
  CHECK_THAT(end.theta, WithinAbs(kGolden.theta, 1e-6));
  CHECK_THAT(end.phi, WithinAbs(kGolden.phi, 1e-6));
  CHECK_THAT(-end.p_theta, WithinAbs(kGolden.p_theta, 1e-6));
  CHECK_THAT(-end.p_phi, WithinAbs(kGolden.p_phi, 1e-6));
}

TEST_CASE("propagate matches the sampled trajectory", "[dynamics]") {
  const auto p = Params::rational({1, 1}, 1.0);
  const auto tr = integrate(kGolden, p, 2.0, 1e-10);
  const auto s = propagate(kGolden, p, 2.0, 1e-10);
  CHECK_THAT(s.theta, WithinAbs(tr.samples.back().theta, 1e-8));
  CHECK_THAT(s.p_phi, WithinAbs(tr.samples.back().p_phi, 1e-8));
}

TEST_CASE("rational k closes, irrational k does not", "[dynamics]") {
  const auto closed = integrate(kGolden, Params::rational({1, 1}, 1.0), 30.0, 1e-11);
  const auto t = detect_closure(closed, 1e-6);
  REQUIRE(t);
  CHECK(*t > 0.1);
  const auto open = integrate(kGolden, Params::irrational(std::sqrt(2.0), 1.0), 30.0, 1e-11);
  CHECK_FALSE(detect_closure(open, 1e-6));
  CHECK(std::isnan(open.ledger.front().O));
  CHECK(detect_closure(open, std::numeric_limits<double>::infinity()) == open.samples[1].t);
}

TEST_CASE("bad inputs and step underflow", "[dynamics]") {
  const auto p = Params::rational({1, 1}, 1.0);
  CHECK_THROWS_AS(integrate({0, 0.0, 0.2, 0, 0}, p, 1.0, 1e-10), DomainError);
  CHECK_THROWS_AS(integrate(kGolden, p, 1.0, 0.0), std::invalid_argument);
  try {
    integrate(kGolden, p, 1.0, 1e-300);
    FAIL("expected an integration error");
  } catch (const IntegrationError& e) {
    CHECK_FALSE(e.partial().complete);
    CHECK_FALSE(e.partial().samples.empty());
    CHECK_FALSE(e.partial().error.empty());
  }
}

TEST_CASE("trajectory CSV", "[dynamics]") {
  const auto tr = integrate(kGolden, Params::rational({1, 1}, 1.0), 0.1, 1e-10);
  std::ostringstream out;
  write_csv(tr, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,theta,phi,p_theta,p_phi,H,Hphi,O,E");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
  }
  CHECK(rows == 3);
}
