#pragma once

// Intertwining-operator ladder that grafts two levels -mu, +mu onto a uniform chain.
//
//   H1  = Q R - mu          (N-1 sites, uniform open chain)
//   H2  = R Q - mu          (N sites, adds the level -mu)
//   H2' = P H2 P            (mirror image)
//   H2' = Q' R' + mu
//   H3  = R' Q' + mu        (N+1 sites, adds the level +mu)
//
// with mu = 2 cos(kappa). H3 carries +-2i sin(kappa) at its ends and sqrt(2)-weighted
// end bonds, i.e. it is the bonding sector of the PT ring with gamma = 2 sin(kappa).
// Indices below are 0-based; labels n of eigenfunctions keep the 1-based numbering
// psi_1 .. psi_{N+1}.

#include <vector>

#include "nhlab/linalg.hpp"
#include "nhlab/spectra.hpp"

namespace nhlab {

class KappaMode {
 public:
  enum class Kind { real, bound, broken };

  /// kappa in (0, pi); mu = 2 cos kappa.
  static KappaMode real(double kappa);
  /// kappa = -i omega: Hermitian H3 with two bound states at +-2 cosh(omega).
  static KappaMode bound(double omega);
  /// kappa = pi/2 - i omega: broken PT phase with levels +-2i sinh(omega).
  static KappaMode broken(double omega);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }
  cplx kappa() const;
  cplx mu() const { return 2.0 * std::cos(kappa()); }

 private:
  KappaMode(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

/// m x m uniform open chain with hopping -1.
Matrix chain_hamiltonian(int m);

struct SusyFactorization {
  Matrix Q;  // (N-1) x N
  Matrix R;  // N x (N-1)
  cplx mu;
};

/// First factorization, H1 = Q R - mu. Throws Error{InvalidN} for N < 2.
SusyFactorization factorize(int N, const KappaMode& mode);

/// Second factorization, H2' = Q' R' + mu; Q' is N x (N+1), R' is (N+1) x N.
SusyFactorization factorize_mirrored(int N, const KappaMode& mode);

struct LadderChain {
  Matrix H1;
  Matrix H2;
  Matrix H2_prime;
  Matrix H3;
  Matrix P;  // N x N mirror, P_ij = delta_{i, N+1-j}
  SusyFactorization first;
  SusyFactorization second;
  KappaMode mode;
};

LadderChain build_ladder(int N, const KappaMode& mode);

struct Eigenfunction {
  int label = 0;  // 1-based: psi_1 .. psi_{N+1}
  cplx eigenvalue;
  Vector vector;      // unnormalized, as constructed
  Vector normalized;  // unit 2-norm copy
  double residual = 0.0;  // ||H3 psi - lambda psi|| / ||psi||
};

/// psi_n = R' P R phi_n (n < N) with lambda = -2 cos(n pi/N); psi_N = R' P e^{-i kappa j}
/// with lambda = -mu; psi_{N+1} = (-1)^j e^{-i kappa j} with 1/sqrt(2) end weights and
/// lambda = +mu.
std::vector<Eigenfunction> eigenfunctions(int N, const KappaMode& mode);

/// v proportional to w: || v/|v| - e^{i phi} w/|w| || minimised over the phase.
double proportionality_deviation(const Vector& v, const Vector& w);

struct ResonanceCoalescence {
  int N = 0;
  int n = 0;
  double k = 0.0;  // n pi / N
  /// Closed forms of psi_n, psi_{N-n}, psi_N, psi_{N+1} at kappa = k, keyed by label
  /// (psi_n and psi_{N-n} share a label when n = N/2).
  std::vector<std::pair<int, Vector>> closed_forms;
  /// Coalescing label groups: {n, N} and {N-n, N+1}; {N/2, N, N+1} when n = N/2.
  std::vector<std::vector<int>> groups;
  /// Worst proportionality deviation inside each group.
  std::vector<double> deviations;
  /// Worst deviation between each closed form and the constructed eigenfunction.
  double construction_deviation = 0.0;
  /// Bilinear self-overlap of each unit-normalized closed form, same order as closed_forms.
  std::vector<cplx> self_overlaps;
  bool triple = false;

  bool coalesced(double tol = 1e-10) const;
};

/// Throws Error{InvalidN} unless N >= 2 and 1 <= n <= N-1.
ResonanceCoalescence coalescence_at_resonance(int N, int n);

}  // namespace nhlab
