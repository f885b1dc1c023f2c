#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nhlab/errors.hpp"
#include "nhlab/models.hpp"
#include "nhlab/reduce.hpp"
#include "nhlab/scatter.hpp"
#include "support.hpp"

using namespace nhlab;
using std::numbers::pi;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an nhlab::Error");
  return ErrorCode::InvalidValue;
}

double relative_residual(const Matrix& m, const Vector& h, double e) {
  return (m * h - e * h).norm() / h.norm();
}

}  // namespace

TEST_CASE("U_B of the bare ring is -J e^{i theta}") {
  for (double J : {1.0, 0.7}) {
    const auto sys = build_ring_system(RingSpec::bare(3, 0.8, J));
    const auto s = solve_scattering(sys, 0.8);
    const auto u = effective_potentials(sys, s);
    CHECK(std::abs(u.u_b - (-J * std::polar(1.0, 0.8))) <= 1e-14);
  }
}

TEST_CASE("uniform chain composite: U_A = -J e^{-ik}, U_B = -J e^{ik}") {
  const auto sys = attach_leads(build_network(1, {}), {0, 0, 1.0, 1.0, 1.0});
  for (double k : {0.3, 1.0, 2.5}) {
    const auto s = solve_scattering(sys, k);
    const auto u = effective_potentials(sys, s);
    CHECK(std::abs(u.u_a - (-std::polar(1.0, -k))) <= 1e-12);
    CHECK(std::abs(u.u_b - (-std::polar(1.0, k))) <= 1e-12);
    const auto h_eff = effective_hamiltonian(sys, s);
    // One site carrying both leads: the 1x1 reduction U_A + U_B is the real energy.
    CHECK(std::abs(h_eff.matrix(0, 0) - s.energy) <= 1e-12);
    CHECK(verify_reduction(h_eff, s).matched);
  }
}

TEST_CASE("resonant ring gives +i gamma and -i gamma") {
  for (double g : {0.7, 1.0, 1.3}) {
    for (int N = 2; N <= 6; ++N) {
      for (int n = 1; n < N; ++n) {
        const auto spec = RingSpec::resonant(N, g, n);
        const auto sys = build_ring_system(spec);
        const auto s = solve_scattering(sys, spec.incident_k());
        const auto u = effective_potentials(sys, s);
        const double gamma = g * g * std::sin(n * pi / N);
        CHECK(std::abs(u.u_a - cplx(0.0, gamma)) <= 1e-10);
        CHECK(std::abs(u.u_b - cplx(0.0, -gamma)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("effective Hamiltonian only changes the joint diagonals") {
  const auto sys = attach_leads(
      build_network(4, {{0, 1, 1.0}, {1, 2, 0.4}, {2, 3, 1.7}, {3, 0, 0.9}}, {{0, 0.2}, {2, -0.5}}),
      {0, 2, 0.9, 1.1, 1.0});
  const auto s = solve_scattering(sys, 1.3);
  const auto h_eff = effective_hamiltonian(sys, s);
  const Matrix hc = center_matrix(sys.network());
  const Matrix diff = h_eff.matrix - hc;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j && (i == 0 || i == 2)) continue;
      CHECK(diff(i, j) == cplx(0.0));
    }
  }
  CHECK(h_eff.matrix(0, 0) == h_eff.potentials.u_a);
  CHECK(h_eff.matrix(2, 2) == h_eff.potentials.u_b);
  CHECK(h_eff.site_a == 0);
  CHECK(h_eff.site_b == 2);
  CHECK(h_eff.matrix == with_joint_potentials(sys.network(), 0, 2, h_eff.potentials));
}

TEST_CASE("bare ring reduction is the closed-form non-PT ring") {
  for (int N = 2; N <= 6; ++N) {
    const double theta = 0.35 + 0.3 * N;
    const auto sys = build_ring_system(RingSpec::bare(N, theta));
    const auto s = solve_scattering(sys, theta);
    const auto h_eff = effective_hamiltonian(sys, s);
    const Matrix closed = ring_with_potentials(N, nonpt_potentials(N, theta));
    CHECK((h_eff.matrix - closed).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("verify_reduction flags perturbed states and empty states") {
  const auto sys = build_ring_system(RingSpec::bare(3, 0.9));
  const auto s = solve_scattering(sys, 0.9);
  const auto h_eff = effective_hamiltonian(sys, s);
  const auto ok = verify_reduction(h_eff, s);
  CHECK(ok.matched);
  CHECK(ok.energy == s.energy);
  CHECK(ok.eigen_residual <= 1e-12);
  CHECK(ok.gain_loss_product < 0.0);

  testing::Rng rng(0xbadbad);
  auto noisy = s;
  for (Eigen::Index j = 0; j < noisy.h.size(); ++j) {
    noisy.h(j) *= 1.0 + 0.01 * cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  const auto bad = verify_reduction(h_eff, noisy);
  CHECK(!bad.matched);
  CHECK(bad.eigen_residual > 1e-4);

  // Tolerance tighter than the solver guarantees can fail; matched follows the residual.
  const auto strict = verify_reduction(h_eff, s, 1e-30);
  CHECK(strict.matched == (strict.eigen_residual <= 1e-30));

  auto empty = s;
  empty.h.setZero();
  CHECK(code_of([&] { verify_reduction(h_eff, empty); }) == ErrorCode::ZeroInteriorState);
  auto wrong = s;
  wrong.h = Vector::Ones(2);
  CHECK(code_of([&] { verify_reduction(h_eff, wrong); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("vanishing joint amplitude is rejected") {
  // Force r so that e^{ik} + r e^{-ik} = 0.
  const auto sys = build_ring_system(RingSpec::bare(3, 0.9));
  auto s = solve_scattering(sys, 0.9);
  s.r = -std::polar(1.0, 2.0 * 0.9);
  CHECK(code_of([&] { effective_potentials(sys, s); }) == ErrorCode::VanishingJointAmplitude);
  CHECK(code_of([&] { effective_hamiltonian(sys, s); }) == ErrorCode::VanishingJointAmplitude);
}

TEST_CASE("property: central reduction theorem on random networks") {
  testing::Rng rng(0x7e0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sys = testing::random_system(rng, {.min_sites = 1, .max_sites = 10});
    const double k = rng.uniform(0.1, pi - 0.1);
    const auto s = solve_scattering(sys, k);
    const auto h_eff = effective_hamiltonian(sys, s);
    const auto rep = verify_reduction(h_eff, s);
    CHECK(rep.matched);
    // Independent recomputation of the residual.
    CHECK(relative_residual(h_eff.matrix, s.h, s.energy) <= 1e-8);
  }
}

TEST_CASE("property: gain/loss law and its closed form") {
  testing::Rng rng(0x6a1);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto sys = testing::random_system(rng);
    const double k = rng.uniform(0.1, pi - 0.1);
    const auto s = solve_scattering(sys, k);
    if (std::abs(s.r) >= 1.0 - 1e-6) continue;
    const auto u = effective_potentials(sys, s);
    const auto gl = gain_loss_sign(sys, u, s);
    CHECK(gl.product == u.u_a.imag() * u.u_b.imag());
    CHECK(gl.product < 0.0);
    // Oracle written from the phase form: 1 + 2|r| cos(delta - 2k) + |r|^2.
    const auto& L = sys.leads();
    const double delta = std::arg(s.r);
    const double r = std::abs(s.r);
    const double expected = -std::pow(L.g_a * L.g_b * std::sin(k), 2) * (1.0 - r * r) /
                            (L.J * L.J * (1.0 + 2.0 * r * std::cos(delta - 2.0 * k) + r * r));
    CHECK(std::abs(gl.product - expected) <= 1e-10);
    CHECK(std::abs(gl.closed_form - expected) <= 1e-10);
    ++checked;
  }
  CHECK(checked > 250);
}

TEST_CASE("total reflection gives a vanishing gain/loss product") {
  // Total reflection needs a disconnected B joint, which the validated networks here
  // never produce, so set |r| = 1 by hand.
  const auto sys = build_ring_system(RingSpec::bare(3, 0.9));
  auto s = solve_scattering(sys, 0.9);
  s.r = std::polar(1.0, 0.4);
  s.t = 0.0;
  const auto u = effective_potentials(sys, s);
  const auto gl = gain_loss_sign(sys, u, s);
  CHECK(std::abs(gl.closed_form) <= 1e-10);
}

TEST_CASE("asymmetric network has unequal gain and loss magnitudes") {
  const auto sys = attach_leads(build_network(3, {{0, 1, 1.0}, {1, 2, 0.5}}, {{1, 0.3}}), {0, 2, 1.0, 0.6, 1.0});
  const auto s = solve_scattering(sys, 1.1);
  const auto u = effective_potentials(sys, s);
  CHECK(std::abs(std::abs(u.u_a.imag()) - std::abs(u.u_b.imag())) > 1e-3);
  CHECK(u.u_a.imag() * u.u_b.imag() < 0.0);
}

TEST_CASE("property: time reversal yields the conjugate transpose") {
  testing::Rng rng(0x71e);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = testing::random_system(rng);
    const double k = rng.uniform(0.1, pi - 0.1);
    const auto s = solve_scattering(sys, k);
    const auto fwd = effective_hamiltonian(sys, s);
    const auto rev_state = time_reversed(s);
    const auto rev = effective_hamiltonian(sys, rev_state);
    CHECK((rev.matrix - fwd.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(verify_reduction(rev, rev_state).matched);
  }
}
