#include "symforge/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "symforge/classical.hpp"

namespace symforge::dynamics {

namespace odeint = boost::numeric::odeint;

namespace {

// Local error control runs this much tighter than the user tolerance so the
// accumulated drift of the invariants stays within 100 x tol.
constexpr double kLocalTolFactor = 1e-2;

// H = K + k^2 T with K = p_theta^2, T = H_phi / sin^2 theta; k enters
// numerically so the same derivatives serve an irrational surrogate.
struct RhsTables {
  CompiledExpr K[4];  // dK/dtheta, dK/dphi, dK/dp_theta, dK/dp_phi
  CompiledExpr T[4];

  RhsTables() {
    const PhaseExpr K_expr = PhaseExpr::p_theta().pow(2);
    const PhaseExpr T_expr = classical::hamiltonian_phi() * PhaseExpr::csc_theta(2);
    const Coord coords[4] = {Coord::theta, Coord::phi, Coord::p_theta, Coord::p_phi};
    for (int i = 0; i < 4; ++i) {
      K[i] = CompiledExpr(K_expr.diff(coords[i]));
      T[i] = CompiledExpr(T_expr.diff(coords[i]));
    }
  }
};

const RhsTables& tables() {
  static const RhsTables t;
  return t;
}

PhaseState to_state(double t, const Vec4& x) { return {t, x[0], x[1], x[2], x[3]}; }
Vec4 to_vec(const PhaseState& s) { return {s.theta, s.phi, s.p_theta, s.p_phi}; }

struct System {
  double k2;
  double alpha2;
  void operator()(const Vec4& x, Vec4& dxdt, double t) const {
    const PhaseState s = to_state(t, x);
    check_domain(s);
    const auto& tb = tables();
    double d[4];
    for (int i = 0; i < 4; ++i) d[i] = tb.K[i].real(s, alpha2) + k2 * tb.T[i].real(s, alpha2);
    dxdt = {d[2], d[3], -d[0], -d[1]};
  }
};

double distance(const PhaseState& a, const PhaseState& b) {
  // theta and phi live on open intervals, so plain differences are the
  // manifold differences.
  return std::max({std::abs(a.theta - b.theta), std::abs(a.phi - b.phi), std::abs(a.p_theta - b.p_theta),
                   std::abs(a.p_phi - b.p_phi)});
}

}  // namespace

Vec4 hamilton_rhs(const PhaseState& state, double k, double alpha2) {
  Vec4 out;
  System{k * k, alpha2}(to_vec(state), out, state.t);
  return out;
}

Invariants::Invariants(const Params& params) : params_(params) {
  H_ = CompiledExpr(PhaseExpr::p_theta().pow(2));  // k^2 H_phi / sin^2 added numerically
  Hphi_ = CompiledExpr(classical::hamiltonian_phi());
  if (params.has_symmetries()) {
    const RationalK k(params.m, params.n);
    const auto sym = classical::build_symmetries(k);
    O_ = CompiledExpr(sym.O);
    E_ = CompiledExpr(sym.E);
    Xplus_ = CompiledExpr(sym.Xplus);
  }
}

LedgerRow Invariants::operator()(const PhaseState& s) const {
  LedgerRow r;
  const double a = params_.alpha2;
  const double sth = std::sin(s.theta);
  r.Hphi = Hphi_.real(s, a);
  r.H = H_.real(s, a) + params_.k * params_.k * r.Hphi / (sth * sth);
  if (params_.has_symmetries()) {
    r.O = O_.real(s, a);
    r.E = E_.real(s, a);
  } else {
    r.O = r.E = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::complex<double> Invariants::x_plus(const PhaseState& s) const {
  if (!params_.has_symmetries()) return {std::nan(""), std::nan("")};
  return Xplus_(s, params_.alpha2);
}

double Trajectory::relative_drift(int column) const {
  if (ledger.empty()) return 0.0;
  auto get = [column](const LedgerRow& r) {
    switch (column) {
      case 0: return r.H;
      case 1: return r.Hphi;
      case 2: return r.O;
      default: return r.E;
    }
  };
  const double v0 = get(ledger.front());
  if (std::isnan(v0)) return 0.0;
  const double scale = std::max(std::abs(v0), std::numeric_limits<double>::min());
  double worst = 0.0;
  for (const auto& r : ledger) worst = std::max(worst, std::abs(get(r) - v0) / scale);
  return worst;
}

double Trajectory::max_relative_drift() const {
  double d = 0.0;
  for (int c = 0; c < 4; ++c) d = std::max(d, relative_drift(c));
  return d;
}

Trajectory integrate(const PhaseState& initial, const Params& params, double t_max, double tol, double sample_dt) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  if (!(sample_dt > 0)) throw std::invalid_argument("sample interval must be positive");
  check_domain(initial);

  Trajectory traj;
  traj.params = params;
  traj.tol = tol;
  traj.sample_dt = sample_dt;
  const Invariants inv(params);
  const LedgerRow first = inv(initial);
  traj.energy = first.H;
  traj.energy_phi = first.Hphi;
  if (params.has_symmetries()) {
    const auto q = inv.x_plus(initial);
    traj.q = std::abs(q);
    traj.phi0 = std::arg(q);
  }
  // Real states satisfy these automatically; a violation means bad input.
  if (traj.energy_phi < params.alpha2 * (1 - 1e-12) ||
      traj.energy < params.k * params.k * traj.energy_phi * (1 - 1e-12))
    throw DomainError("initial state violates E_phi >= a or E >= k^2 E_phi");

  const System sys{params.k * params.k, params.alpha2};
  const double local_tol = tol * kLocalTolFactor;
  auto stepper = odeint::make_controlled(local_tol, local_tol, odeint::runge_kutta_fehlberg78<Vec4>());
  const double t0 = initial.t;
  Vec4 x = to_vec(initial);
  double t = t0;
  double dt = std::min(sample_dt, 1e-2);

  auto record = [&](double time, const Vec4& y) {
    const PhaseState st = to_state(time, y);
    traj.samples.push_back(st);
    traj.ledger.push_back(inv(st));
  };
  record(t0, x);

  const auto n_samples = static_cast<std::size_t>(std::floor(t_max / sample_dt + 1e-9));
  try {
    for (std::size_t next = 1; next <= n_samples; ++next) {
      const double target = t0 + static_cast<double>(next) * sample_dt;
      while (t < target) {
        const bool clamped = dt >= target - t;
        double h = clamped ? target - t : dt;
        const Vec4 before = x;
        odeint::controlled_step_result result;
        try {
          result = stepper.try_step(sys, x, t, h);
        } catch (const DomainError&) {
          // A trial stage left the domain: treat as a rejected step.
          x = before;
          result = odeint::fail;
          h *= 0.5;
        }
        if (result == odeint::fail) {
          dt = h;
          if (dt < 1e-13 * std::max(1.0, std::abs(t)))
            throw IntegrationError("step size underflow at t = " + std::to_string(t), traj);
          continue;
        }
        ++traj.steps;
        if (!clamped) dt = h;
        check_domain(to_state(t, x));
      }
      t = target;  // try_step lands on target up to rounding
      record(target, x);
    }
  } catch (const IntegrationError& e) {
    Trajectory partial = traj;
    partial.complete = false;
    partial.error = e.what();
    throw IntegrationError(e.what(), partial);
  } catch (const std::exception& e) {
    traj.complete = false;
    traj.error = e.what();
    throw IntegrationError(std::string("integration failed: ") + e.what(), traj);
  }
  return traj;
}

PhaseState propagate(const PhaseState& state, const Params& params, double dt, double tol) {
  if (dt == 0.0) return state;
  Vec4 x = to_vec(state);
  const System sys{params.k * params.k, params.alpha2};
  odeint::integrate_adaptive(odeint::make_controlled(tol * kLocalTolFactor, tol * kLocalTolFactor,
                                                     odeint::runge_kutta_fehlberg78<Vec4>()),
                             sys, x, state.t,
                             state.t + dt, dt / 8);
  return to_state(state.t + dt, x);
}

std::optional<double> detect_closure(const Trajectory& traj, double eps) {
  const auto& s = traj.samples;
  if (s.size() < 2) return std::nullopt;
  if (std::isinf(eps)) return s[1].t;
  const PhaseState& origin = s.front();
  std::vector<double> d(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = distance(s[i], origin);

  const double tol = std::min(traj.tol, 1e-12);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (d[i] > d[i - 1] || d[i] > d[i + 1]) continue;
    if (d[i] < eps) return s[i].t;
    // Between samples no coordinate moves faster than the local speed, so a
    // minimum far above eps cannot dip below it.
    double speed = 0.0;
    for (std::size_t j = i - 1; j <= i + 1; ++j)
      for (double v : hamilton_rhs(s[j], traj.params.k, traj.params.alpha2)) speed = std::max(speed, std::abs(v));
    if (d[i] - 2.0 * speed * traj.sample_dt > eps) continue;
    // Candidate recurrence: golden-section search on [t_{i-1}, t_{i+1}],
    // evaluating by re-integration from sample i-1.
    auto f = [&](double t) { return distance(propagate(s[i - 1], traj.params, t - s[i - 1].t, tol), origin); };
    const double g = (std::sqrt(5.0) - 1) / 2;
    double lo = s[i - 1].t, hi = s[i + 1].t;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = f(x2);
      }
    }
    if (std::min(f1, f2) < eps) return f1 < f2 ? x1 : x2;
  }
  return std::nullopt;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,theta,phi,p_theta,p_phi,H,Hphi,O,E\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const auto& l = traj.ledger[i];
    out << s.t << ',' << s.theta << ',' << s.phi << ',' << s.p_theta << ',' << s.p_phi << ',' << l.H << ',' << l.Hphi
        << ',' << l.O << ',' << l.E << '\n';
  }
}

}  // namespace symforge::dynamics
