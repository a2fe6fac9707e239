#include "symforge/classical.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace symforge::classical {

namespace {

const PhaseExpr& I() {
  static const PhaseExpr i = PhaseExpr::imag();
  return i;
}

PhaseExpr sign_factor(Sign sign) { return sign == Sign::plus ? PhaseExpr(1L) : PhaseExpr(-1L); }

Residual zero_residual(const PhaseExpr& lhs, const PhaseExpr& rhs) {
  const PhaseExpr diff = lhs - rhs;
  return {diff.is_zero(), diff.to_string()};
}

// Structure function of the polynomial algebra:
//   [-k m^2 (H_phi - a) + n^2 (H - k^2 H_phi)] (H_phi - a)^(n-1) (H - k^2 H_phi)^(m-1)
PhaseExpr structure_function(const ClassicalSymmetrySet& s) {
  const int m = s.k.m();
  const int n = s.k.n();
  const mpq_class k = s.k.value();
  const PhaseExpr a = PhaseExpr::alpha2();
  const PhaseExpr phi_part = s.Hphi - a;
  const PhaseExpr theta_part = s.H - PhaseExpr(k * k) * s.Hphi;
  const PhaseExpr bracket = PhaseExpr(mpq_class(-k * m * m)) * phi_part + PhaseExpr(mpq_class(n * n)) * theta_part;
  return bracket * phi_part.pow(static_cast<unsigned>(n - 1)) * theta_part.pow(static_cast<unsigned>(m - 1));
}

PhaseExpr product_value(const ClassicalSymmetrySet& s) {
  const mpq_class k = s.k.value();
  const PhaseExpr phi_part = s.Hphi - PhaseExpr::alpha2();
  const PhaseExpr theta_part = s.H - PhaseExpr(k * k) * s.Hphi;
  return phi_part.pow(static_cast<unsigned>(s.k.n())) * theta_part.pow(static_cast<unsigned>(s.k.m()));
}

struct PrintedBrackets {
  mpq_class hphi_O;  // {H_phi, O} = hphi_O * E
  mpq_class hphi_E;  // {H_phi, E} = hphi_E * H_phi O
  const char* anchor;
};

std::optional<PrintedBrackets> printed_brackets(int m, int n) {
  if (m == 1 && n == 1) return PrintedBrackets{-2, 2, "pbps11"};
  if (m == 1 && n == 2) return PrintedBrackets{-4, 4, "pbps12"};
  if (m == 2 && n == 1) return PrintedBrackets{-2, 2, "pbps21"};
  if (m == 3 && n == 1) return PrintedBrackets{-1, 1, "pbps31"};
  return std::nullopt;
}

}  // namespace

PhaseExpr hamiltonian_phi() { return PhaseExpr::p_phi().pow(2) + PhaseExpr::alpha2() * PhaseExpr::sec_phi(2); }

PhaseExpr hamiltonian(const mpq_class& k) {
  return PhaseExpr::p_theta().pow(2) + PhaseExpr(k * k) * hamiltonian_phi() * PhaseExpr::csc_theta(2);
}

PhaseExpr build_ladder(Sign sign) {
  return -sign_factor(sign) * I() * PhaseExpr::cos_phi() * PhaseExpr::p_phi() +
         PhaseExpr::sqrt_hphi() * PhaseExpr::sin_phi();
}

PhaseExpr build_shift(Sign sign, const mpq_class& k) {
  return -sign_factor(sign) * I() * PhaseExpr::p_theta() + PhaseExpr(k) * PhaseExpr::sqrt_hphi() * PhaseExpr::cot_theta();
}

PhaseExpr build_X(const RationalK& k, Sign sign) {
  // B factors first, then A factors; the ring is commutative.
  return build_ladder(sign).pow(static_cast<unsigned>(k.n())) *
         build_shift(sign, k.value()).pow(static_cast<unsigned>(k.m()));
}

ParitySplit parity_split(const PhaseExpr& x_plus, bool even_parity) {
  const PhaseExpr even = x_plus.sqrt_hphi_part(0);
  const PhaseExpr odd = x_plus.sqrt_hphi_part(1);
  ParitySplit split;
  if (even_parity) {
    // odd = i O, even = E
    if (!odd.real_part().is_zero() || !even.imag_part().is_zero())
      throw std::logic_error("parity split: non-real residue for m+n even");
    split.O = odd.imag_part();
    split.E = even.real_part();
  } else {
    // odd = O, even = -i E
    if (!odd.imag_part().is_zero() || !even.real_part().is_zero())
      throw std::logic_error("parity split: non-real residue for m+n odd");
    split.O = odd.real_part();
    split.E = -even.imag_part();
  }
  return split;
}

ClassicalSymmetrySet build_symmetries(const RationalK& k) {
  ClassicalSymmetrySet s{k, hamiltonian(k), hamiltonian_phi(), build_X(k, Sign::plus), build_X(k, Sign::minus), {}, {}};
  auto [O, E] = parity_split(s.Xplus, k.even_parity());
  s.O = std::move(O);
  s.E = std::move(E);
  return s;
}

std::optional<ParitySplit> golden_OE(int m, int n) {
  const PhaseExpr pt = PhaseExpr::p_theta();
  const PhaseExpr pp = PhaseExpr::p_phi();
  const PhaseExpr a = PhaseExpr::alpha2();
  const PhaseExpr cot = PhaseExpr::cot_theta();
  const PhaseExpr cph = PhaseExpr::cos_phi();
  const PhaseExpr sph = PhaseExpr::sin_phi();
  const PhaseExpr sec = PhaseExpr::sec_phi();
  const PhaseExpr tan = PhaseExpr::tan_phi();
  auto c = [](long num, long den = 1) { return PhaseExpr(mpq_class(num, den)); };

  if (m == 1 && n == 1) {
    return ParitySplit{-pp * cot * cph - sph * pt, -cph * pt * pp + cot * (pp.pow(2) * sph + a * sec * tan)};
  }
  if (m == 1 && n == 2) {
    PhaseExpr O = c(1, 2) * (-pp.pow(2) * cph.pow(2) * cot - c(4) * pt * pp * cph * sph +
                             cot * (pp.pow(2) * sph.pow(2) + a * tan.pow(2)));
    PhaseExpr E = -pt * pp.pow(2) * cph.pow(2) + pp.pow(3) * cph * cot * sph + pt * pp.pow(2) * sph.pow(2) +
                  a * tan * (pp * cot + pt * tan);
    return ParitySplit{O, E};
  }
  if (m == 2 && n == 1) {
    PhaseExpr O = -c(4) * pt * pp * cph * cot - (pt.pow(2) - c(4) * pp.pow(2) * cot.pow(2)) * sph +
                  c(4) * a * cot.pow(2) * sec * tan;
    PhaseExpr E = -pp * cph * (pt.pow(2) - c(4) * pp.pow(2) * cot.pow(2)) +
                  c(4) * cot * (pp * a * cot * sec + pt * pp.pow(2) * sph + pt * a * sec * tan);
    return ParitySplit{O, E};
  }
  if (m == 3 && n == 1) {
    PhaseExpr O = c(9) * pp * cph * cot * (pt.pow(2) - c(3) * pp.pow(2) * cot.pow(2)) -
                  c(27) * pp * a * cot.pow(3) * sec + pt.pow(3) * sph -
                  c(27) * pt * cot.pow(2) * (pp.pow(2) * sph + a * sec * tan);
    // cos(2 phi) = 2 cos^2 phi - 1
    const PhaseExpr cos2 = c(2) * cph.pow(2) - c(1);
    PhaseExpr E = pt * pp * cph * (pt.pow(2) - c(27) * pp.pow(2) * cot.pow(2)) -
                  c(9) * cot *
                      (c(3) * pt * pp * a * cot * sec -
                       c(3, 4) * (pp.pow(2) + c(2) * a + pp.pow(2) * cos2).pow(2) * cot.pow(2) * sec.pow(3) * tan +
                       pt.pow(2) * (pp.pow(2) * sph + a * sec * tan));
    return ParitySplit{O, E};
  }
  return std::nullopt;
}

VerificationReport verify_classical_algebra(const RationalK& k, Bracket bracket) {
  VerificationReport report;
  report.m = k.m();
  report.n = k.n();
  report.k = k.to_string();
  report.mode = "symbolic";

  const int m = k.m();
  const int n = k.n();
  const mpq_class kv = k.value();
  const ClassicalSymmetrySet s = build_symmetries(k);
  const PhaseExpr a = PhaseExpr::alpha2();
  const PhaseExpr sq = PhaseExpr::sqrt_hphi();
  const PhaseExpr Bp = build_ladder(Sign::plus);
  const PhaseExpr Bm = build_ladder(Sign::minus);
  const PhaseExpr Ap = build_shift(Sign::plus, kv);
  const PhaseExpr Am = build_shift(Sign::minus, kv);
  const PhaseExpr M = PhaseExpr(kv) * sq;
  auto add = [&](const char* identity, const char* anchor, const std::function<Residual()>& check) {
    report.entries.push_back(timed_entry(identity, anchor, check));
  };
  auto num = [](long v) { return PhaseExpr(v); };

  add("{H_phi,B+} = -2i s B+", "commpt", [&] { return zero_residual(bracket(s.Hphi, Bp), num(-2) * I() * sq * Bp); });
  add("{H_phi,B-} = 2i s B-", "commpt", [&] { return zero_residual(bracket(s.Hphi, Bm), num(2) * I() * sq * Bm); });
  add("{B-,B+} = -2i s", "commpt", [&] { return zero_residual(bracket(Bm, Bp), num(-2) * I() * sq); });
  add("H_phi = B+ B- + a", "cpth2", [&] { return zero_residual(s.Hphi, Bp * Bm + a); });
  add("H = A+ A- + M^2, M^2 = k^2 H_phi", "cht2",
      [&] { return zero_residual(s.H, Ap * Am + PhaseExpr(kv * kv) * s.Hphi); });
  add("{H,A+} = 2i M csc^2 A+", "commpt3",
      [&] { return zero_residual(bracket(s.H, Ap), num(2) * I() * M * PhaseExpr::csc_theta(2) * Ap); });
  add("{H,A-} = -2i M csc^2 A-", "commpt3",
      [&] { return zero_residual(bracket(s.H, Am), num(-2) * I() * M * PhaseExpr::csc_theta(2) * Am); });
  add("{A-,A+} = 2i M csc^2", "commpt3",
      [&] { return zero_residual(bracket(Am, Ap), num(2) * I() * M * PhaseExpr::csc_theta(2)); });
  add("{H,X+} = 0", "csymmet1", [&] { return zero_residual(bracket(s.H, s.Xplus), 0L); });
  add("{H,X-} = 0", "csymmet1", [&] { return zero_residual(bracket(s.H, s.Xminus), 0L); });
  add("conj(X+) = X-", "csymmet1", [&] { return zero_residual(s.Xplus.conj(), s.Xminus); });
  add("X+ X- = (H_phi-a)^n (H-k^2 H_phi)^m", "prod", [&] { return zero_residual(s.Xplus * s.Xminus, product_value(s)); });
  add("{H,H_phi} = 0", "pbfs", [&] { return zero_residual(bracket(s.H, s.Hphi), 0L); });
  add("{H_phi,X+} = -2i n s X+", "pbfs",
      [&] { return zero_residual(bracket(s.Hphi, s.Xplus), num(-2 * n) * I() * sq * s.Xplus); });
  add("{H_phi,X-} = 2i n s X-", "pbfs",
      [&] { return zero_residual(bracket(s.Hphi, s.Xminus), num(2 * n) * I() * sq * s.Xminus); });
  add("{X+,X-} = 2i s F(H,H_phi)", "pbfs",
      [&] { return zero_residual(bracket(s.Xplus, s.Xminus), num(2) * I() * sq * structure_function(s)); });
  add(s.k.even_parity() ? "X+- = +-i O s + E" : "X+- = O s -+ i E", s.k.even_parity() ? "even" : "odd", [&] {
    const PhaseExpr rebuilt = s.k.even_parity() ? I() * s.O * sq + s.E : s.O * sq - I() * s.E;
    const PhaseExpr rebuilt_minus = s.k.even_parity() ? -I() * s.O * sq + s.E : s.O * sq + I() * s.E;
    const PhaseExpr d_plus = s.Xplus - rebuilt;
    const PhaseExpr d_minus = s.Xminus - rebuilt_minus;
    return Residual{d_plus.is_zero() && d_minus.is_zero(), d_plus.to_string() + "; " + d_minus.to_string()};
  });
  add("O, E real", "even", [&] {
    const bool real = s.O.imag_part().is_zero() && s.E.imag_part().is_zero() && !s.O.value().depends_on(Var::sqrt_hphi) &&
                      !s.E.value().depends_on(Var::sqrt_hphi);
    return Residual{real, real ? "0" : "imaginary or s-dependent residue"};
  });
  add("deg O = m+n-1, deg E = m+n", "even", [&] {
    const int dO = s.O.momentum_degree();
    const int dE = s.E.momentum_degree();
    return Residual{dO == m + n - 1 && dE == m + n, "deg O = " + std::to_string(dO) + ", deg E = " + std::to_string(dE)};
  });
  add("{H,O} = 0", "ps", [&] { return zero_residual(bracket(s.H, s.O), 0L); });
  add("{H,E} = 0", "ps", [&] { return zero_residual(bracket(s.H, s.E), 0L); });
  const PhaseExpr hphi_O = bracket(s.Hphi, s.O);
  const PhaseExpr hphi_E = bracket(s.Hphi, s.E);
  add("{H_phi,O} = -2n E", "pbps", [&] { return zero_residual(hphi_O, num(-2 * n) * s.E); });
  add("{H_phi,E} = 2n H_phi O", "pbps", [&] { return zero_residual(hphi_E, num(2 * n) * s.Hphi * s.O); });
  add("{O,E} = -n O^2 + F(H,H_phi)", "pbps",
      [&] { return zero_residual(bracket(s.O, s.E), num(-n) * s.O.pow(2) + structure_function(s)); });
  add("O^2 H_phi + E^2 = (H_phi-a)^n (H-k^2 H_phi)^m", "prod2",
      [&] { return zero_residual(s.O.pow(2) * s.Hphi + s.E.pow(2), product_value(s)); });

  if (auto golden = golden_OE(m, n)) {
    const std::string tag = std::to_string(m) + std::to_string(n);
    ReportEntry e = timed_entry("O, E equal the worked example up to a global sign", "o" + tag + "/e" + tag, [&] {
      for (long sign : {1L, -1L}) {
        if (s.O == PhaseExpr(sign) * golden->O && s.E == PhaseExpr(sign) * golden->E)
          return Residual{true, "global sign " + std::to_string(sign)};
      }
      const PhaseExpr dO = s.O - golden->O;
      const PhaseExpr dE = s.E - golden->E;
      return Residual{false, "O - O_golden = " + dO.to_string() + "; E - E_golden = " + dE.to_string()};
    });
    report.entries.push_back(std::move(e));
  }
  if (auto printed = printed_brackets(m, n)) {
    const bool general_O = (hphi_O - PhaseExpr(mpq_class(-2 * n)) * s.E).is_zero();
    const bool general_E = (hphi_E - PhaseExpr(mpq_class(2 * n)) * s.Hphi * s.O).is_zero();
    auto printed_entry = [&](const char* identity, const PhaseExpr& residual, bool general_holds) {
      ReportEntry e = timed_entry(identity, printed->anchor, [&] { return Residual{residual.is_zero(), residual.to_string()}; });
      if (e.status == Status::fail && general_holds) {
        e.status = Status::discrepancy;
        e.witness = "printed coefficient disagrees with the general relation, which holds; residual " + e.witness;
      }
      report.entries.push_back(std::move(e));
    };
    printed_entry("{H_phi,O} = c E (printed example)", hphi_O - PhaseExpr(printed->hphi_O) * s.E, general_O);
    printed_entry("{H_phi,E} = c H_phi O (printed example)", hphi_E - PhaseExpr(printed->hphi_E) * s.Hphi * s.O, general_E);
  }
  return report;
}

namespace {

// d f / d x_c with the five-point stencil; c indexes theta, phi, p_theta, p_phi.
double partial(const CompiledExpr& f, PhaseState s, int c, double alpha2) {
  double* x[4] = {&s.theta, &s.phi, &s.p_theta, &s.p_phi};
  const double x0 = *x[c];
  const double h = 1e-3;
  auto at = [&](double dx) {
    *x[c] = x0 + dx;
    return f.real(s, alpha2);
  };
  return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
}

}  // namespace

VerificationReport poisson_fd_oracle(const RationalK& k, double alpha2, std::uint64_t seed, int count,
                                     double tolerance) {
  const auto sym = build_symmetries(k);
  struct Named {
    const char* name;
    PhaseExpr expr;
    CompiledExpr f;
  };
  const Named fs[4] = {{"H", sym.H, CompiledExpr(sym.H)},
                       {"H_phi", sym.Hphi, CompiledExpr(sym.Hphi)},
                       {"O", sym.O, CompiledExpr(sym.O)},
                       {"E", sym.E, CompiledExpr(sym.E)}};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(0.3, 2.8), phi(-1.2, 1.2), p(-1.5, 1.5);
  std::vector<PhaseState> states(static_cast<std::size_t>(count));
  for (auto& s : states) s = {0.0, theta(rng), phi(rng), p(rng), p(rng)};

  VerificationReport report{k.m(), k.n(), k.to_string(), "numeric", {}};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const CompiledExpr bracket(poisson(fs[i].expr, fs[j].expr));
      const std::string name = std::string("{") + fs[i].name + "," + fs[j].name + "} by finite differences";
      report.entries.push_back(timed_entry(name, "pb", [&] {
        double worst = 0.0;
        for (const auto& s : states) {
          double fd = 0.0, scale = 0.0;
          for (int c = 0; c < 2; ++c) {
            const double a = partial(fs[i].f, s, c, alpha2) * partial(fs[j].f, s, c + 2, alpha2);
            const double b = partial(fs[i].f, s, c + 2, alpha2) * partial(fs[j].f, s, c, alpha2);
            fd += a - b;
            scale += std::abs(a) + std::abs(b);
          }
          const double exact = bracket.real(s, alpha2);
          worst = std::max(worst, std::abs(fd - exact) / std::max(scale, 1e-300));
        }
        std::ostringstream w;
        w << "max relative residual " << worst << " over " << states.size() << " states";
        return Residual{worst <= tolerance, w.str()};
      }));
    }
  }
  return report;
}

}  // namespace symforge::classical
