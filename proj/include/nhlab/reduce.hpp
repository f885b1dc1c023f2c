#pragma once

// Replacing the two leads by complex on-site potentials at the joints.
//
// With h_A = (J/g_A)(e^{ik} + r e^{-ik}) and h_B = (J/g_B) t e^{-ik}, the lead
// amplitudes f_{-1}, f_1 are proportional to h_A, h_B, so the center equations
// close on h alone with
//   U_A = V_A - (g_A^2/J) (1 + r) / (e^{ik} + r e^{-ik}),
//   U_B = V_B - (g_B^2/J) e^{ik}.
// The interior scattering amplitudes are then an eigenvector of
//   H_eff = H_c + (U_A - V_A) n_A + (U_B - V_B) n_B
// at the incident energy.

#include "nhlab/linalg.hpp"
#include "nhlab/netgraph.hpp"
#include "nhlab/scatter.hpp"

namespace nhlab {

inline constexpr double kDefaultTolerance = 1e-8;

struct EffectivePotentials {
  cplx u_a{0.0, 0.0};
  cplx u_b{0.0, 0.0};
};

/// Throws Error{VanishingJointAmplitude} when |e^{ik} + r e^{-ik}| <= 1e-12.
EffectivePotentials effective_potentials(const ScatteringSystem& system,
                                         const ScatteringSolution& solution);

struct EffectiveHamiltonian {
  Matrix matrix;
  int site_a = 0;
  int site_b = 0;
  WaveVector k;  // the incident wave the reduction was built for
  EffectivePotentials potentials;
};

EffectiveHamiltonian effective_hamiltonian(const ScatteringSystem& system,
                                           const ScatteringSolution& solution);

/// H_eff with explicit potentials; used for reductions that are known in closed form.
Matrix with_joint_potentials(const TightBindingNetwork& network, int site_a, int site_b,
                             const EffectivePotentials& potentials);

struct ReductionReport {
  double energy = 0.0;
  double eigen_residual = 0.0;  // ||(H_eff - E) h||_2 / ||h||_2
  double gain_loss_product = 0.0;
  bool matched = false;
};

/// Checks that the center amplitudes are an eigenvector of the reduction at E.
/// Throws Error{ZeroInteriorState} when h == 0.
ReductionReport verify_reduction(const EffectiveHamiltonian& h_eff,
                                 const ScatteringSolution& solution,
                                 double tol = kDefaultTolerance);

struct GainLoss {
  double product = 0.0;      // Im U_A * Im U_B
  double closed_form = 0.0;  // -(g_A g_B sin k)^2 (1-|r|^2) / (J^2 |e^{ik} + r e^{-ik}|^2)
};

GainLoss gain_loss_sign(const ScatteringSystem& system, const EffectivePotentials& potentials,
                        const ScatteringSolution& solution);

}  // namespace nhlab
