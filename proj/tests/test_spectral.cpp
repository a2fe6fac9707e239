#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "symforge/spectral.hpp"

using namespace symforge::spectral;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("phi levels are evenly spaced in eps", "[spectral]") {
  const auto s = solve_phi(2.0, 2000, 6);
  REQUIRE(s.pairs.size() == 6);
  for (std::size_t j = 0; j + 1 < s.pairs.size(); ++j) {
    const double gap = std::sqrt(s.pairs[j + 1].value) - std::sqrt(s.pairs[j].value);
    CHECK_THAT(gap, WithinAbs(1.0, 1e-4));
  }
}

TEST_CASE("a = 0 is the box of width pi", "[spectral]") {
  // -psi'' = E psi on (-pi/2, pi/2) with Dirichlet ends: E = (j+1)^2, and
  // the three-point matrix has exactly (4/h^2) sin^2((j+1) h/2).
  const int N = 1000;
  const double h = M_PI / (N + 1);
  const auto s = solve_phi(0.0, N, 4);
  for (int j = 0; j < 4; ++j) {
    const double discrete = 4 / (h * h) * std::pow(std::sin((j + 1) * h / 2), 2);
    CHECK_THAT(s.pairs[j].value, WithinRel(discrete, 1e-10));
    CHECK_THAT(s.pairs[j].value, WithinRel((j + 1.0) * (j + 1.0), 1e-4));
  }
}

TEST_CASE("second-order convergence and Richardson", "[spectral]") {
  auto err = [](int N) { return std::abs(solve_phi(0.0, N, 2).pairs[1].value - 4.0); };
  const double e1 = err(199), e2 = err(399);
  CHECK_THAT(e1 / e2, WithinRel(4.0, 0.02));
  CHECK_THAT(richardson(1.0, 0.25), WithinAbs(0.0, 1e-15));
  const auto x = solve_phi_extrapolated(0.0, 199, 2);
  CHECK(std::abs(x.pairs[1].value - 4.0) < 1e-3 * e1);
}

TEST_CASE("eigenvectors are orthonormal", "[spectral]") {
  const auto s = solve_phi(1.0, 400, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK_THAT(inner(s.grid, s.pairs[i].psi, s.pairs[j].psi), WithinAbs(i == j ? 1.0 : 0.0, 1e-10));
  const auto t = solve_theta(1.0, 400, 3);
  CHECK_THAT(inner(t.grid, t.pairs[0].psi, t.pairs[1].psi), WithinAbs(0.0, 1e-10));
  CHECK_THAT(norm(t.grid, t.pairs[2].psi), WithinAbs(1.0, 1e-10));
}

TEST_CASE("theta levels for M = 0 are l(l+1)", "[spectral]") {
  const auto s = solve_theta(0.0, 2000, 4);
  for (int l = 0; l < 4; ++l) CHECK_THAT(s.pairs[l].value, WithinAbs(l * (l + 1.0), 1e-3));
}

TEST_CASE("stencils are fourth order", "[spectral]") {
  const Grid1D g = Grid1D::make(Variable::phi, 200);
  std::vector<double> f(200);
  for (int i = 0; i < 200; ++i) f[i] = std::sin(2 * g.x(i));
  const auto d = derivative(g, f), d2 = second_derivative(g, f);
  for (int i = 0; i < 200; ++i) {
    CHECK_THAT(d[i], WithinAbs(2 * std::cos(2 * g.x(i)), 1e-5));
    CHECK_THAT(d2[i], WithinAbs(-4 * std::sin(2 * g.x(i)), 1e-3));
  }
}

TEST_CASE("phi ladder: alignment and factorization", "[spectral][oracle]") {
  for (int j = 0; j < 3; ++j) {
    CAPTURE(j);
    const auto r = ladder_residual(2.0, j, 2000);
    CHECK(r.alignment_defect <= 1e-4);
    CHECK(r.factorization_residual <= 1e-5);
    CHECK_THAT(r.eps, WithinAbs(j + 2.0, 1e-6));
  }
}

TEST_CASE("a wrong ladder eps is caught", "[spectral][mutation]") {
  const auto r = ladder_residual(2.0, 1, 2000, 0.5);
  CHECK(r.alignment_defect > 1e-4);
}

TEST_CASE("theta shift operators intertwine neighbouring M", "[spectral][oracle]") {
  for (int M = 1; M <= 2; ++M) {
    CAPTURE(M);
    const double E = (M + 1.0) * (M + 2.0);
    const auto r = shift_residual(M, E, 2000);
    CHECK(r.alignment_defect <= 1e-4);
    CHECK(r.factorization_residual <= 1e-4);
  }
  CHECK_THROWS_AS(shift_residual(1.0, 5.0, 400), SolverError);
}

TEST_CASE("rational k levels are degenerate", "[spectral]") {
  CHECK(degeneracy_gap(1, 1, 1.0, 0, 2, 1000) < 1e-5);
  CHECK(degeneracy_gap(2, 1, 1.0, 0, 3, 1000) < 1e-5);
  CHECK_THROWS_AS(degeneracy_gap(2, 1, 1.0, 0, 1, 1000), std::invalid_argument);
}

TEST_CASE("bad requests", "[spectral]") {
  CHECK_THROWS_AS(solve_phi(-1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(solve_phi(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(solve_phi(1.0, 10, 20), SolverError);
}

TEST_CASE("eigenfunction CSV", "[spectral]") {
  const auto s = solve_phi(1.0, 10, 1);
  std::ostringstream out;
  write_csv(s.grid, s.pairs[0].psi, out);
  const std::string text = out.str();
  CHECK(text.rfind("x,psi\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}
