#include "nhlab/reduce.hpp"

#include <cmath>

#include "nhlab/errors.hpp"

namespace nhlab {

EffectivePotentials effective_potentials(const ScatteringSystem& system,
                                         const ScatteringSolution& solution) {
  const auto& leads = system.leads();
  const cplx p = solution.k.phase();
  const cplx denom = p + solution.r / p;
  if (std::abs(denom) <= 1e-12) {
    throw Error(ErrorCode::VanishingJointAmplitude, "h_A vanishes; the reduction is undefined");
  }
  const double v_a = system.network().potential(leads.site_a);
  const double v_b = system.network().potential(leads.site_b);
  EffectivePotentials u;
  u.u_a = v_a - (leads.g_a * leads.g_a / leads.J) * (1.0 + solution.r) / denom;
  u.u_b = v_b - (leads.g_b * leads.g_b / leads.J) * p;
  return u;
}

Matrix with_joint_potentials(const TightBindingNetwork& network, int site_a, int site_b,
                             const EffectivePotentials& potentials) {
  Matrix m = center_matrix(network);
  m(site_a, site_a) += potentials.u_a - network.potential(site_a);
  m(site_b, site_b) += potentials.u_b - network.potential(site_b);
  return m;
}

EffectiveHamiltonian effective_hamiltonian(const ScatteringSystem& system,
                                           const ScatteringSolution& solution) {
  EffectiveHamiltonian out;
  out.potentials = effective_potentials(system, solution);
  out.site_a = system.leads().site_a;
  out.site_b = system.leads().site_b;
  out.k = solution.k;
  out.matrix = with_joint_potentials(system.network(), out.site_a, out.site_b, out.potentials);
  return out;
}

ReductionReport verify_reduction(const EffectiveHamiltonian& h_eff,
                                 const ScatteringSolution& solution, double tol) {
  const double norm = solution.h.norm();
  if (norm == 0.0) {
    throw Error(ErrorCode::ZeroInteriorState, "scattering state vanishes inside the center");
  }
  if (h_eff.matrix.rows() != solution.h.size()) {
    throw Error(ErrorCode::DimensionMismatch, "H_eff and h have different dimensions");
  }
  ReductionReport rep;
  rep.energy = solution.energy;
  rep.eigen_residual =
      (h_eff.matrix * solution.h - solution.energy * solution.h).norm() / norm;
  rep.gain_loss_product = h_eff.potentials.u_a.imag() * h_eff.potentials.u_b.imag();
  rep.matched = rep.eigen_residual <= tol;
  return rep;
}

GainLoss gain_loss_sign(const ScatteringSystem& system, const EffectivePotentials& potentials,
                        const ScatteringSolution& solution) {
  const auto& leads = system.leads();
  const double k = solution.k.signed_k();
  const double r_abs = std::abs(solution.r);
  // 1 + 2|r| cos(delta - 2k) + |r|^2, written via r e^{-2ik} so that delta is not needed at r = 0.
  const double denom = 1.0 + 2.0 * (solution.r * std::polar(1.0, -2.0 * k)).real() + r_abs * r_abs;
  const double s = leads.g_a * leads.g_b * std::sin(k);
  GainLoss gl;
  gl.product = potentials.u_a.imag() * potentials.u_b.imag();
  gl.closed_form = -(s * s) * (1.0 - r_abs * r_abs) / (leads.J * leads.J * denom);
  return gl;
}

}  // namespace nhlab
