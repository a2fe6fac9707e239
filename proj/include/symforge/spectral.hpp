#pragma once

#include <ostream>
#include <stdexcept>
#include <vector>

namespace symforge::spectral {

enum class Variable { phi, theta };

/// phi: N interior vertices with Dirichlet ends, h = pi/(N+1).
/// theta: N cell centres, h = pi/N; the sin(theta) flux vanishes at the
/// poles, so no boundary condition is imposed there.
struct Grid1D {
  Variable variable = Variable::phi;
  int N = 0;
  double lo = 0;
  double hi = 0;
  double h = 0;
  double offset = 1.0;    // x(i) = lo + (i + offset) h
  bool weighted = false;  // sin(theta) measure for the theta problem

  static Grid1D make(Variable v, int N);
  double x(int i) const { return lo + (i + offset) * h; }  // i = 0..N-1
  double weight(int i) const;
};

/// Eigenvalue with its sampled eigenfunction, normalized in the grid inner
/// product (with sin(theta) for the theta problem). Sign fixed so the first
/// significant sample is positive.
struct Eigenpair {
  double value = 0;
  std::vector<double> psi;
  int index = 0;
};

struct Spectrum {
  Grid1D grid;
  std::vector<Eigenpair> pairs;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowest `count` levels of -d^2/dphi^2 + a sec^2 phi on (-pi/2, pi/2).
/// Eigenvalues are E_phi = eps^2.
Spectrum solve_phi(double alpha2, int N, int count = 8);

/// solve_phi on N and on the nested grid 2N+1 (h/2, sharing every other
/// point), combined by Richardson extrapolation: eigenvalues and the
/// eigenvectors sampled on the N grid become fourth-order accurate.
Spectrum solve_phi_extrapolated(double alpha2, int N, int count = 8);

/// Lowest `count` levels of H_theta^M = -(1/sin)(sin Theta')' + M^2 csc^2 Theta
/// on (0, pi), discretized in flux form and symmetrized with
/// chi = sqrt(sin theta) Theta. Returned psi is Theta.
Spectrum solve_theta(double M, int N, int count = 8);

/// Inner product and norm in the grid's measure.
double inner(const Grid1D& g, const std::vector<double>& a, const std::vector<double>& b);
double norm(const Grid1D& g, const std::vector<double>& a);

/// 1 - |<u, v>| / (|u| |v|).
double alignment_defect(const Grid1D& g, const std::vector<double>& u, const std::vector<double>& v);

/// Fourth-order first and second derivatives of sampled values; one-sided
/// stencils on the two points next to each end.
std::vector<double> derivative(const Grid1D& g, const std::vector<double>& f);
std::vector<double> second_derivative(const Grid1D& g, const std::vector<double>& f);

struct LadderResult {
  double eps = 0;
  double alignment_defect = 0;        // B+_eps Phi_j against Phi_{j+1}
  double factorization_residual = 0;  // |B-_eps B+_eps Phi_j - (eps(eps+1) - a) Phi_j| / |Phi_j|
};

/// Uses the extrapolated phi spectrum. `eps_shift` is added to eps before
/// applying B+ (mutation tests).
LadderResult ladder_residual(double alpha2, int j, int N, double eps_shift = 0.0);

struct ShiftResult {
  int level_M = 0;     // level of H_theta^M with energy E
  int level_Mm1 = 0;   // level of H_theta^{M-1} with the same energy
  double energy = 0;
  double alignment_defect = 0;        // A-_M Theta^M against Theta^{M-1}
  double factorization_residual = 0;  // |H^M Theta - (A+_M A-_M + M(M-1)) Theta| / |Theta|
};

/// Throws SolverError when E is not (within 1e-3 relative) in both spectra.
ShiftResult shift_residual(double M, double E, int N);

/// Degeneracy witness for k = m/n: the total energy E_l(M = k eps_j) equals
/// E_{l-m}(M = k eps_{j+n}). Returns the relative gap between the two.
double degeneracy_gap(int m, int n, double alpha2, int j, int l, int N);

/// (2^p f_fine - f_coarse) / (2^p - 1) for a grid refinement by 2.
double richardson(double coarse, double fine, int order = 2);

/// CSV with header `x,psi`.
void write_csv(const Grid1D& g, const std::vector<double>& psi, std::ostream& out);

}  // namespace symforge::spectral
