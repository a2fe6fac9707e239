#include "symforge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <string>

#include <lapacke.h>

namespace symforge::spectral {

namespace {

constexpr double kPi = std::numbers::pi;

// Lowest `count` eigenpairs of the symmetric tridiagonal matrix (diag, off).
std::vector<std::pair<double, std::vector<double>>> tridiagonal_lowest(std::vector<double> d, std::vector<double> e,
                                                                        int count) {
  const auto n = static_cast<lapack_int>(d.size());
  if (count < 1 || count > n) throw SolverError("requested " + std::to_string(count) + " levels of " + std::to_string(n));
  e.resize(d.size());
  lapack_int found = 0;
  std::vector<double> w(d.size());
  std::vector<double> z(d.size() * static_cast<std::size_t>(count));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, count, 0.0,
                                         &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count)
    throw SolverError("dstevr failed: info = " + std::to_string(info) + ", found " + std::to_string(found) + " of " +
                      std::to_string(count) + " levels, N = " + std::to_string(n));
  std::vector<std::pair<double, std::vector<double>>> out;
  for (lapack_int j = 0; j < count; ++j) {
    const auto* col = z.data() + static_cast<std::size_t>(j) * d.size();
    out.emplace_back(w[static_cast<std::size_t>(j)], std::vector<double>(col, col + d.size()));
  }
  return out;
}

void normalize(const Grid1D& g, std::vector<double>& psi) {
  const double nrm = norm(g, psi);
  double peak = 0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  double sign = 1;
  for (double v : psi)
    if (std::abs(v) > 1e-3 * peak) {
      sign = v > 0 ? 1 : -1;
      break;
    }
  for (double& v : psi) v *= sign / nrm;
}

std::vector<double> axpy(const std::vector<double>& a, double s, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

// Index of the level closest to E, or -1 when none is within rel_tol.
int find_level(const Spectrum& s, double E, double rel_tol) {
  int best = -1;
  double gap = 1e300;
  for (const auto& p : s.pairs) {
    const double d = std::abs(p.value - E);
    if (d < gap) {
      gap = d;
      best = p.index;
    }
  }
  return gap <= rel_tol * std::max(1.0, std::abs(E)) ? best : -1;
}

}  // namespace

Grid1D Grid1D::make(Variable v, int N) {
  if (N < 4) throw std::invalid_argument("grid needs at least 4 points");
  Grid1D g;
  g.variable = v;
  g.N = N;
  g.lo = v == Variable::phi ? -kPi / 2 : 0.0;
  g.hi = v == Variable::phi ? kPi / 2 : kPi;
  g.weighted = v == Variable::theta;
  g.offset = g.weighted ? 0.5 : 1.0;
  g.h = (g.hi - g.lo) / (g.weighted ? N : N + 1);
  return g;
}

double Grid1D::weight(int i) const { return weighted ? std::sin(x(i)) : 1.0; }

double inner(const Grid1D& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (int i = 0; i < g.N; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)] * g.weight(i);
  return s * g.h;
}

double norm(const Grid1D& g, const std::vector<double>& a) { return std::sqrt(inner(g, a, a)); }

double alignment_defect(const Grid1D& g, const std::vector<double>& u, const std::vector<double>& v) {
  return 1.0 - std::abs(inner(g, u, v)) / (norm(g, u) * norm(g, v));
}

std::vector<double> derivative(const Grid1D& g, const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  if (n < 6) throw std::invalid_argument("derivative needs at least 6 samples");
  auto at = [&](int i) { return f[static_cast<std::size_t>(i)]; };
  std::vector<double> out(f.size());
  const double s = 1.0 / (12 * g.h);
  for (int i = 2; i < n - 2; ++i)
    out[static_cast<std::size_t>(i)] = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) * s;
  out[0] = (-25 * at(0) + 48 * at(1) - 36 * at(2) + 16 * at(3) - 3 * at(4)) * s;
  out[1] = (-3 * at(0) - 10 * at(1) + 18 * at(2) - 6 * at(3) + at(4)) * s;
  const int l = n - 1;
  out[static_cast<std::size_t>(l)] = -(-25 * at(l) + 48 * at(l - 1) - 36 * at(l - 2) + 16 * at(l - 3) - 3 * at(l - 4)) * s;
  out[static_cast<std::size_t>(l - 1)] = -(-3 * at(l) - 10 * at(l - 1) + 18 * at(l - 2) - 6 * at(l - 3) + at(l - 4)) * s;
  return out;
}

std::vector<double> second_derivative(const Grid1D& g, const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  if (n < 6) throw std::invalid_argument("derivative needs at least 6 samples");
  auto at = [&](int i) { return f[static_cast<std::size_t>(i)]; };
  std::vector<double> out(f.size());
  const double s = 1.0 / (12 * g.h * g.h);
  for (int i = 2; i < n - 2; ++i)
    out[static_cast<std::size_t>(i)] = (-at(i + 2) + 16 * at(i + 1) - 30 * at(i) + 16 * at(i - 1) - at(i - 2)) * s;
  out[0] = (45 * at(0) - 154 * at(1) + 214 * at(2) - 156 * at(3) + 61 * at(4) - 10 * at(5)) * s;
  out[1] = (10 * at(0) - 15 * at(1) - 4 * at(2) + 14 * at(3) - 6 * at(4) + at(5)) * s;
  const int l = n - 1;
  out[static_cast<std::size_t>(l)] = (45 * at(l) - 154 * at(l - 1) + 214 * at(l - 2) - 156 * at(l - 3) + 61 * at(l - 4) - 10 * at(l - 5)) * s;
  out[static_cast<std::size_t>(l - 1)] = (10 * at(l) - 15 * at(l - 1) - 4 * at(l - 2) + 14 * at(l - 3) - 6 * at(l - 4) + at(l - 5)) * s;
  return out;
}

Spectrum solve_phi(double alpha2, int N, int count) {
  if (!(alpha2 >= 0)) throw std::invalid_argument("alpha2 must be non-negative");
  Spectrum s;
  s.grid = Grid1D::make(Variable::phi, N);
  const double h2 = s.grid.h * s.grid.h;
  std::vector<double> d(static_cast<std::size_t>(N)), e(static_cast<std::size_t>(N - 1), -1.0 / h2);
  for (int i = 0; i < N; ++i) {
    const double c = std::cos(s.grid.x(i));
    d[static_cast<std::size_t>(i)] = 2.0 / h2 + alpha2 / (c * c);
  }
  int j = 0;
  for (auto& [value, psi] : tridiagonal_lowest(std::move(d), std::move(e), count)) {
    normalize(s.grid, psi);
    s.pairs.push_back({value, std::move(psi), j++});
  }
  return s;
}

Spectrum solve_phi_extrapolated(double alpha2, int N, int count) {
  Spectrum coarse = solve_phi(alpha2, N, count);
  const Spectrum fine = solve_phi(alpha2, 2 * N + 1, count);
  for (auto& p : coarse.pairs) {
    const auto& f = fine.pairs[static_cast<std::size_t>(p.index)];
    p.value = richardson(p.value, f.value);
    // coarse point i sits at fine point 2i+1; both vectors carry the same sign rule
    for (int i = 0; i < N; ++i) {
      auto& v = p.psi[static_cast<std::size_t>(i)];
      v = richardson(v, f.psi[static_cast<std::size_t>(2 * i + 1)]);
    }
    normalize(coarse.grid, p.psi);
  }
  return coarse;
}

Spectrum solve_theta(double M, int N, int count) {
  Spectrum s;
  s.grid = Grid1D::make(Variable::theta, N);
  const Grid1D& g = s.grid;
  const double h2 = g.h * g.h;
  // -(1/s_i)[s_{i+1/2}(T_{i+1} - T_i) - s_{i-1/2}(T_i - T_{i-1})]/h^2 + M^2/s_i^2 T_i,
  // with s_{-1/2} = s_{N-1/2} = 0, conjugated by sqrt(s_i).
  std::vector<double> d(static_cast<std::size_t>(N)), e(static_cast<std::size_t>(N - 1));
  for (int i = 0; i < N; ++i) {
    const double si = std::sin(g.x(i));
    const double up = i + 1 < N ? std::sin(g.x(i) + g.h / 2) : 0.0;
    const double down = i > 0 ? std::sin(g.x(i) - g.h / 2) : 0.0;
    d[static_cast<std::size_t>(i)] = (up + down) / (h2 * si) + M * M / (si * si);
    if (i + 1 < N) e[static_cast<std::size_t>(i)] = -up / (h2 * std::sqrt(si * std::sin(g.x(i + 1))));
  }
  int j = 0;
  for (auto& [value, chi] : tridiagonal_lowest(std::move(d), std::move(e), count)) {
    for (int i = 0; i < N; ++i) chi[static_cast<std::size_t>(i)] /= std::sqrt(std::sin(s.grid.x(i)));
    normalize(s.grid, chi);
    s.pairs.push_back({value, std::move(chi), j++});
  }
  return s;
}

LadderResult ladder_residual(double alpha2, int j, int N, double eps_shift) {
  const Spectrum s = solve_phi_extrapolated(alpha2, N, j + 2);
  const Grid1D& g = s.grid;
  const auto& phi = s.pairs[static_cast<std::size_t>(j)].psi;
  LadderResult r;
  r.eps = std::sqrt(s.pairs[static_cast<std::size_t>(j)].value);
  const double e = r.eps + eps_shift;

  // B+_e f = -cos f' + e sin f,  B-_e f = cos f' + (e+1) sin f
  auto b_plus = [&](const std::vector<double>& f) {
    const auto df = derivative(g, f);
    std::vector<double> out(f.size());
    for (int i = 0; i < g.N; ++i) {
      const auto k = static_cast<std::size_t>(i);
      out[k] = -std::cos(g.x(i)) * df[k] + e * std::sin(g.x(i)) * f[k];
    }
    return out;
  };
  auto b_minus = [&](const std::vector<double>& f) {
    const auto df = derivative(g, f);
    std::vector<double> out(f.size());
    for (int i = 0; i < g.N; ++i) {
      const auto k = static_cast<std::size_t>(i);
      out[k] = std::cos(g.x(i)) * df[k] + (e + 1) * std::sin(g.x(i)) * f[k];
    }
    return out;
  };

  const auto raised = b_plus(phi);
  r.alignment_defect = alignment_defect(g, raised, s.pairs[static_cast<std::size_t>(j + 1)].psi);
  const auto back = b_minus(raised);
  r.factorization_residual = norm(g, axpy(back, -(e * (e + 1) - alpha2), phi)) / norm(g, phi);
  return r;
}

ShiftResult shift_residual(double M, double E, int N) {
  constexpr int kLevels = 12;
  const Spectrum upper = solve_theta(M, N, kLevels);
  const Spectrum lower = solve_theta(M - 1, N, kLevels);
  ShiftResult r;
  r.level_M = find_level(upper, E, 1e-3);
  r.level_Mm1 = find_level(lower, E, 1e-3);
  if (r.level_M < 0 || r.level_Mm1 < 0)
    throw SolverError("energy " + std::to_string(E) + " not found in the spectra of H_theta^M and H_theta^{M-1}");
  const Grid1D& g = upper.grid;
  const auto& theta = upper.pairs[static_cast<std::size_t>(r.level_M)].psi;
  r.energy = upper.pairs[static_cast<std::size_t>(r.level_M)].value;

  const auto d1 = derivative(g, theta);
  std::vector<double> lowered(theta.size());
  for (int i = 0; i < g.N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    lowered[k] = d1[k] + M / std::tan(g.x(i)) * theta[k];  // A-_M
  }
  r.alignment_defect = alignment_defect(g, lowered, lower.pairs[static_cast<std::size_t>(r.level_Mm1)].psi);

  // H^M Theta against (A+_M A-_M + M(M-1)) Theta
  const auto d2 = second_derivative(g, theta);
  const auto dl = derivative(g, lowered);
  std::vector<double> diff(theta.size());
  for (int i = 0; i < g.N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double cot = 1.0 / std::tan(g.x(i));
    const double sn = std::sin(g.x(i));
    const double h_theta = -d2[k] - cot * d1[k] + M * M / (sn * sn) * theta[k];
    const double factored = -dl[k] + (M - 1) * cot * lowered[k] + M * (M - 1) * theta[k];
    diff[k] = h_theta - factored;
  }
  r.factorization_residual = norm(g, diff) / norm(g, theta);
  return r;
}

double degeneracy_gap(int m, int n, double alpha2, int j, int l, int N) {
  if (l < m) throw std::invalid_argument("theta level must be at least m");
  const Spectrum phi = solve_phi(alpha2, N, j + n + 1);
  const double k = static_cast<double>(m) / n;
  const double eps_low = std::sqrt(phi.pairs[static_cast<std::size_t>(j)].value);
  const double eps_high = std::sqrt(phi.pairs[static_cast<std::size_t>(j + n)].value);
  const double e1 = solve_theta(k * eps_low, N, l + 1).pairs[static_cast<std::size_t>(l)].value;
  const double e2 = solve_theta(k * eps_high, N, l - m + 1).pairs[static_cast<std::size_t>(l - m)].value;
  return std::abs(e1 - e2) / std::abs(e1);
}

double richardson(double coarse, double fine, int order) {
  const double f = std::pow(2.0, order);
  return (f * fine - coarse) / (f - 1);
}

void write_csv(const Grid1D& g, const std::vector<double>& psi, std::ostream& out) {
  out << "x,psi\n" << std::setprecision(17);
  for (int i = 0; i < g.N; ++i) out << g.x(i) << ',' << psi[static_cast<std::size_t>(i)] << '\n';
}

}  // namespace symforge::spectral
