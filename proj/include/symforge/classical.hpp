#pragma once

#include <cstdint>
#include <optional>

#include "symforge/phase_expr.hpp"
#include "symforge/rational_k.hpp"
#include "symforge/report.hpp"

namespace symforge::classical {

enum class Sign { plus, minus };

/// H = p_theta^2 + k^2 (p_phi^2 + a sec^2 phi) / sin^2 theta.
PhaseExpr hamiltonian(const mpq_class& k);
inline PhaseExpr hamiltonian(const RationalK& k) { return hamiltonian(k.value()); }
/// H_phi = p_phi^2 + a sec^2 phi.
PhaseExpr hamiltonian_phi();

/// B+- = -+ i cos(phi) p_phi + s sin(phi).
PhaseExpr build_ladder(Sign sign);
/// A+- = -+ i p_theta + k s cot(theta); the shift parameter is M = k s.
PhaseExpr build_shift(Sign sign, const mpq_class& k);
/// X+- = (B+-)^n (A+-)^m.
PhaseExpr build_X(const RationalK& k, Sign sign);

struct ParitySplit {
  PhaseExpr O;  // odd powers of s
  PhaseExpr E;  // even powers of s
};

/// Reads O and E off X+:
///   m+n even:  X+- = +-i O s + E
///   m+n odd:   X+- = O s -+ i E
/// Throws std::logic_error if O or E would not be real.
ParitySplit parity_split(const PhaseExpr& x_plus, bool even_parity);

struct ClassicalSymmetrySet {
  RationalK k;
  PhaseExpr H;
  PhaseExpr Hphi;
  PhaseExpr Xplus;
  PhaseExpr Xminus;
  PhaseExpr O;
  PhaseExpr E;
};

ClassicalSymmetrySet build_symmetries(const RationalK& k);

/// Golden O and E for the worked cases (1,1), (1,2), (2,1), (3,1), written
/// with sec/tan/cot and transcribed into the canonical symbols.
std::optional<ParitySplit> golden_OE(int m, int n);

using Bracket = PhaseExpr (*)(const PhaseExpr&, const PhaseExpr&);

/// Every bracket, factorization and dependence identity for k = m/n, each
/// checked by canonicalizing the difference of both sides to zero. `bracket`
/// exists so tests can inject a wrong Poisson convention.
VerificationReport verify_classical_algebra(const RationalK& k, Bracket bracket = poisson);

/// Numeric cross-check of the bracket engine: at `count` random states drawn
/// from `seed`, each symbolic bracket {f,g} among H, H_phi, O, E is evaluated
/// and compared with fourth-order central differences of f and g. The
/// residual is relative to sum |df/dq dg/dp| + |df/dp dg/dq|.
VerificationReport poisson_fd_oracle(const RationalK& k, double alpha2, std::uint64_t seed, int count = 100,
                                     double tolerance = 1e-6);

}  // namespace symforge::classical
