#pragma once

#include <array>
#include <complex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "symforge/phase_expr.hpp"
#include "symforge/rational_k.hpp"

namespace symforge::dynamics {

/// System parameters. `m`, `n` are zero for an irrational surrogate k; O, E
/// and Q+ are only tracked when they are set.
struct Params {
  double k = 1.0;
  double alpha2 = 1.0;
  int m = 0;
  int n = 0;

  static Params rational(const RationalK& k, double alpha2) { return {k.as_double(), alpha2, k.m(), k.n()}; }
  static Params irrational(double k, double alpha2) { return {k, alpha2, 0, 0}; }
  bool has_symmetries() const { return m > 0 && n > 0; }
};

using Vec4 = std::array<double, 4>;  // theta, phi, p_theta, p_phi

/// (dtheta, dphi, dp_theta, dp_phi) from derivatives of the symbolic H.
/// Throws DomainError outside 0<theta<pi, -pi/2<phi<pi/2.
Vec4 hamilton_rhs(const PhaseState& state, double k, double alpha2);

struct LedgerRow {
  double H = 0;
  double Hphi = 0;
  double O = 0;  // NaN without symmetries
  double E = 0;
};

struct Trajectory {
  Params params;
  double tol = 0;
  double sample_dt = 0;
  std::vector<PhaseState> samples;
  std::vector<LedgerRow> ledger;
  // Constants of the initial state: E, E_phi and Q+ = q exp(i phi0).
  double energy = 0;
  double energy_phi = 0;
  double q = 0;
  double phi0 = 0;
  std::size_t steps = 0;
  bool complete = true;
  std::string error;

  /// max_t |v(t) - v(0)| / |v(0)|, column 0..3 = H, Hphi, O, E.
  double relative_drift(int column) const;
  double max_relative_drift() const;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Adaptive Runge-Kutta-Fehlberg 7(8), stepping exactly onto every sample
/// time (a multiple of sample_dt). Local error control runs at tol/100 so
/// that invariant drift over a run stays below 100 x tol.
/// Throws IntegrationError (carrying the samples so far) on step underflow or
/// when the state leaves the domain.
Trajectory integrate(const PhaseState& initial, const Params& params, double t_max, double tol,
                     double sample_dt = 0.05);

/// Advances one state by dt (dt may be negative) at the given tolerance.
PhaseState propagate(const PhaseState& state, const Params& params, double dt, double tol);

/// Smallest sampled-then-refined t > 0 with every coordinate within eps of
/// the initial state. Local minima of the sampled distance are refined by
/// re-integration from the neighbouring samples.
std::optional<double> detect_closure(const Trajectory& traj, double eps);

void write_csv(const Trajectory& traj, std::ostream& out);

/// H, H_phi, O, E and X+ evaluated through the classical symbolic forms.
class Invariants {
 public:
  explicit Invariants(const Params& params);
  LedgerRow operator()(const PhaseState& s) const;
  std::complex<double> x_plus(const PhaseState& s) const;

 private:
  Params params_;
  CompiledExpr H_, Hphi_, O_, E_, Xplus_;
};

}  // namespace symforge::dynamics
