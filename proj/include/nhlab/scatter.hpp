#pragma once

// Plane-wave scattering through a center network with two semi-infinite leads.
//
// Lead amplitudes follow the Bethe ansatz
//   f_l = e^{ik(l+1)} + r e^{-ik(l+1)}   (l <= -1, lead A)
//   f_l = t e^{ik(l-1)}                   (l >=  1, lead B)
// and the center amplitudes h are unknowns, so that with x = (r, t, h) the
// stationary equations form an (N+2)-dimensional complex linear system.

#include <optional>
#include <span>
#include <vector>

#include "nhlab/errors.hpp"
#include "nhlab/linalg.hpp"
#include "nhlab/netgraph.hpp"

namespace nhlab {

/// Incident wavevector. The reversed flag marks the time-reversed process, in which
/// every plane wave e^{ikl} is replaced by e^{-ikl}.
struct WaveVector {
  double k = 0.0;
  bool reversed = false;

  double signed_k() const noexcept { return reversed ? -k : k; }
  /// e^{i k} for the forward process, e^{-i k} for the reversed one.
  cplx phase() const noexcept { return std::polar(1.0, signed_k()); }

  friend bool operator==(const WaveVector&, const WaveVector&) = default;
};

struct ScatteringSolution {
  WaveVector k;
  double energy = 0.0;  // -2 J cos k
  cplx r{0.0, 0.0};
  cplx t{0.0, 0.0};
  Vector h;  // center amplitudes, one per site
  /// Set when |h_A| or |h_B| <= 1e-12; the reduction is undefined at a vanishing h_A.
  bool vanishing_joint = false;
  /// Number of center eigenstates at this energy that vanish at both joints. They
  /// leave r and t unique but make h ambiguous; h is then the minimum-norm choice,
  /// orthogonal to those states.
  int decoupled_states = 0;

  /// arg r in (-pi, pi], absent when |r| <= 1e-13.
  std::optional<double> reflection_phase() const;
  double reflectance() const { return std::norm(r); }
  double transmittance() const { return std::norm(t); }
};

/// Tolerances of the linear solve, relative to the largest matrix entry.
struct SolveTolerances {
  double pivot = 1e-13;
  double residual = 1e-10;
  double vanishing_amplitude = 1e-12;
  /// Singular values below this fraction of the largest count as zero in the
  /// rank-deficient fallback.
  double rank = 1e-10;
  /// Solve rank-deficient systems whose null space is confined to h (decoupled
  /// bound states in the continuum). When false, any small pivot is an error.
  bool allow_decoupled = true;
};

/// Assembles the (N+2)x(N+2) system for incidence from lead A and solves it by LU
/// with partial pivoting. On a vanishing pivot the system is re-solved by SVD; this
/// succeeds when the null space has no r, t component and the equations stay
/// consistent, which is the case for center states with nodes at both joints.
/// Throws Error{BandEdge} when sin k == 0, Error{InvalidValue} for k outside [0, pi]
/// and Error{SingularSystem} when r and t are not determined.
ScatteringSolution solve_scattering(const ScatteringSystem& system, double k,
                                    const SolveTolerances& tol = {});

/// The (N+2)x(N+2) matrix and right-hand side used by solve_scattering.
struct ScatteringEquations {
  Matrix matrix;
  Vector rhs;
};
ScatteringEquations scattering_equations(const ScatteringSystem& system, const WaveVector& k);

/// Conjugated Bethe-ansatz state: r -> r*, t -> t*, h -> h*, same energy.
ScatteringSolution time_reversed(const ScatteringSolution& solution);

/// Residuals of a solution against the stationary equations of the system.
struct ScatteringResiduals {
  double interior = 0.0;    // max over center rows of |(H_c h)_j + lead terms - E h_j|
  double junction_a = 0.0;  // |g_A h_A - J (phase + r / phase)|
  double junction_b = 0.0;  // |g_B h_B - J t / phase|
};
ScatteringResiduals scattering_residuals(const ScatteringSystem& system,
                                         const ScatteringSolution& solution);

struct TransmissionPoint {
  double k = 0.0;
  double transmittance = 0.0;
  double reflectance = 0.0;
  std::optional<ErrorCode> failure;  // set when the solve at this k failed
};

/// Per-k solves sorted by k; failed points are marked instead of aborting the sweep.
std::vector<TransmissionPoint> transmission_curve(const ScatteringSystem& system,
                                                  std::span<const double> k_grid);

}  // namespace nhlab
