#pragma once

// Exactly solvable ring geometries.
//
// A 2N-site uniform ring (hopping J) is the center; the leads attach at sites 0 and N
// (sites 1 and N+1 in one-based labels). Three incidence modes are provided:
//   resonant(n):  g != sqrt(2) J, E = -2J cos(n pi / N), joint potentials -(E/2) g^2/J^2
//   critical(eps): g  = sqrt(2) J, E = eps in (-2J, 2J), joint potentials -(eps/2) g^2/J^2
//   bare(theta):  g  = J, E = -2J cos theta, no potentials
// The first two reduce to the PT ring with +i gamma / -i gamma at the joints.

#include <array>
#include <variant>
#include <vector>

#include "nhlab/linalg.hpp"
#include "nhlab/netgraph.hpp"
#include "nhlab/reduce.hpp"

namespace nhlab {

struct ResonantMode {
  int n = 1;
};
struct CriticalMode {
  double eps = 0.0;
};
struct BareMode {
  double theta = 0.0;
};
using RingMode = std::variant<ResonantMode, CriticalMode, BareMode>;

class RingSpec {
 public:
  /// Throws Error{InvalidMode} for n outside [1, N-1] or g == sqrt(2) J.
  static RingSpec resonant(int N, double g, int n, double J = 1.0);
  /// g is fixed to sqrt(2) J. Throws Error{InvalidMode} unless -2J < eps < 2J.
  static RingSpec critical(int N, double eps, double J = 1.0);
  /// g is fixed to J. Throws Error{InvalidMode} unless 0 < theta < pi.
  static RingSpec bare(int N, double theta, double J = 1.0);

  int N() const noexcept { return N_; }
  double g() const noexcept { return g_; }
  double J() const noexcept { return J_; }
  const RingMode& mode() const noexcept { return mode_; }

  /// Wavevector of the incident wave selected by the mode.
  double incident_k() const;
  double incident_energy() const;

 private:
  RingSpec(int N, double g, double J, RingMode mode);
  int N_;
  double g_;
  double J_;
  RingMode mode_;
};

ScatteringSystem build_ring_system(const RingSpec& spec);

/// gamma_n = (g^2/J) sin(n pi/N) for resonant mode, sqrt(4J^2 - eps^2) for critical.
/// Throws Error{InvalidMode} for bare mode.
double gamma_value(const RingSpec& spec);

/// 2N-site uniform ring with +i gamma at site 0 and -i gamma at site N.
Matrix pt_ring_hamiltonian(int N, double gamma, double J = 1.0);

/// One-based involution j -> (N + 2 - j) mod 2N, expressed on 0-based sites:
/// s -> (N - s) mod 2N. Exchanges the two joints.
std::vector<int> ring_parity(int N);

struct AnalyticRingSpectrum {
  std::vector<double> bulk;  // -2J cos(j pi/N), j = 1..N-1, each 2-fold
  std::array<cplx, 2> extra{};  // +-sqrt(4J^2 - gamma^2), imaginary when gamma > 2J
  double gamma = 0.0;

  /// All 2N eigenvalues with multiplicity.
  std::vector<cplx> multiset() const;
};

AnalyticRingSpectrum analytic_spectrum(int N, double gamma, double J = 1.0);

/// Closed-form joint potentials of the bare ring at E = -2J cos theta.
/// Throws Error{SingularDenominator} when |e^{i theta N} sin((N-1) theta) - sin theta| <= 1e-12.
EffectivePotentials nonpt_potentials(int N, double theta, double J = 1.0);

/// The 2N-site ring with U_A at site 0 and U_B at site N.
Matrix ring_with_potentials(int N, const EffectivePotentials& potentials, double J = 1.0);

struct CharDet {
  cplx value{0.0, 0.0};                 // D, the (N+1)-dimensional bonding-block determinant
  std::vector<cplx> recursion;          // D_j, j = 0..N-1, from D_j = -E D_{j-1} - D_{j-2}
  std::vector<cplx> closed_form;        // D_j from (1 - e^{2(j+1)ik}) / (1 - e^{2ik}) e^{-jik}
  double normalization = 1.0;           // product of row max-norms of the block
};

/// Cofactor expansion of the bonding block of M^[theta] + 2 cos theta (units J = 1),
/// using the closed-form potentials.
CharDet char_det(int N, double theta);
/// Same, with explicit potentials (already in units of J).
CharDet char_det(int N, double theta, const EffectivePotentials& potentials);

struct DetZeroReport {
  double cofactor = 0.0;  // |D| / normalization
  double direct = 0.0;    // |det(M + 2J cos theta)| / product of row max-norms (LU)
  bool zero = false;
};

DetZeroReport det_zero_report(int N, double theta, const EffectivePotentials& potentials,
                              double J = 1.0);
/// True iff both determinants vanish to 1e-8 (scale-normalized) for the exact potentials.
bool verify_det_zero(int N, double theta, double J = 1.0);

struct RingBlocks {
  Matrix alpha;  // (N+1)x(N+1) open chain: -sqrt(2)J end bonds, U_A and U_B at the ends
  Matrix beta;   // (N-1)x(N-1) uniform open chain
};

/// Splits a 2N-site ring with potentials only at sites 0 and N into its
/// reflection-symmetric (alpha) and antisymmetric (beta) sectors.
/// Throws Error{ShapeMismatch} when the input is not such a ring.
RingBlocks ring_decompose(const Matrix& ring, int N);

}  // namespace nhlab
