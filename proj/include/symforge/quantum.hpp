#pragma once

#include <optional>
#include <utility>

#include "symforge/diffop.hpp"
#include "symforge/rational_k.hpp"
#include "symforge/report.hpp"

namespace symforge::quantum {

enum class Sign { plus, minus };

/// H = -d_theta^2 - cot d_theta + k^2 csc^2 theta H_phi.
DiffOp hamiltonian(const mpq_class& k);
DiffOp hamiltonian_phi();

/// X+ = A+_{k eps+m} ... A+_{k eps+1}  B+_{eps+n-1} ... B+_eps
/// X- = A-_{k eps-m+1} ... A-_{k eps}  B-_{eps-n} ... B-_{eps-1}
/// Coefficients are polynomial in eps, the sqrt(H_phi) eigenvalue of the
/// function acted on. A nonzero `chain_offset` shifts every A index (a fault
/// injected by the mutation tests).
DiffOp build_X(const RationalK& k, Sign sign, int chain_offset = 0);

/// An eps-dependent operator D(eps) acting on H_phi eigenfunctions, written as
/// even + odd sqrt(H_phi): eps^{2j} -> H_phi^j composed on the right.
struct EpsSplit {
  DiffOp even;
  DiffOp odd;
};
EpsSplit split_eps(const DiffOp& d);

/// X+ = O sqrt(H_phi) + E in both parity cases (X- differs only in signs).
struct ParitySplit {
  DiffOp O;
  DiffOp E;
};
ParitySplit parity_split(const DiffOp& x_plus);

/// P1, P2 as polynomials in the commuting symbols Hop, Hphiop and alpha2.
struct PPair {
  Poly P1;
  Poly P2;
};
/// Even/odd split of the closed product formula for X+X- (odd part = -P2 eps).
PPair compute_P(const RationalK& k);
/// Same split of the X-X+ formula (odd part = +P2 eps).
PPair compute_P_reverse(const RationalK& k);

/// Replaces Hop, Hphiop by the operators H and H_phi.
DiffOp to_operator(const Poly& p, const mpq_class& k);

struct QuantumSymmetrySet {
  RationalK k;
  DiffOp H;
  DiffOp Hphi;
  DiffOp Xplus;
  DiffOp Xminus;
  DiffOp O;
  DiffOp E;
  DiffOp Eprime;  // E + (n/2) O
  Poly P1;
  Poly P2;
};

QuantumSymmetrySet build_symmetries(const RationalK& k, int chain_offset = 0);

/// Golden O, E, P1, P2 for (1,1), (1,2), (2,1), (3,1), transcribed from the
/// worked examples.
struct Golden {
  DiffOp O;
  DiffOp E;
  Poly P1;
  Poly P2;
};
std::optional<Golden> golden(int m, int n);

VerificationReport verify_quantum_algebra(const RationalK& k, int chain_offset = 0);
VerificationReport verify_hermitian(const RationalK& k);

}  // namespace symforge::quantum
