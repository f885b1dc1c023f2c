#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nhlab/errors.hpp"
#include "nhlab/models.hpp"
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

ScatteringSystem single_site() { return attach_leads(build_network(1, {}), {0, 0, 1.0, 1.0, 1.0}); }

ScatteringSystem bare_ring(int N, double g = 1.0) {
  return attach_leads(uniform_ring(2 * N), {0, N, g, g, 1.0});
}

// Sites 2 and 3 hang off site 0; their antisymmetric combination has E = 0 and
// never touches the joints.
ScatteringSystem dangling_pair() {
  return attach_leads(build_network(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}), {0, 1, 1.0, 1.0, 1.0});
}

}  // namespace

TEST_CASE("single site is perfectly transparent at every k") {
  for (double k : {0.1, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    const auto s = solve_scattering(single_site(), k);
    CHECK(std::abs(s.r) <= 1e-12);
    CHECK(std::abs(std::abs(s.t) - 1.0) <= 1e-12);
    CHECK(s.energy == -2.0 * std::cos(k));
    CHECK(!s.reflection_phase().has_value());
    // Uniform chain: the incident wave passes unchanged, h_0 = e^{ik} and t = e^{2ik}.
    CHECK(std::abs(s.h(0) - std::polar(1.0, k)) <= 1e-12);
    CHECK(std::abs(s.t - std::polar(1.0, 2.0 * k)) <= 1e-12);
  }
}

TEST_CASE("ring with N=3 at k = pi/3 conserves current and matches the oracle") {
  const auto sys = bare_ring(3);
  const auto s = solve_scattering(sys, pi / 3.0);
  CHECK(std::abs(s.reflectance() + s.transmittance() - 1.0) <= 1e-10);
  const auto oracle = testing::truncated_lead_oracle(sys, pi / 3.0);
  CHECK(std::abs(s.r - oracle.r) <= 1e-6);
  CHECK(std::abs(s.t - oracle.t) <= 1e-6);
}

TEST_CASE("junction identities hold to 1e-12") {
  testing::Rng rng(0xa11ce);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = testing::random_system(rng);
    const double k = rng.uniform(0.1, pi - 0.1);
    const auto s = solve_scattering(sys, k);
    const auto& L = sys.leads();
    const cplx p = std::polar(1.0, k);
    const cplx ha = (L.J / L.g_a) * (p + s.r / p);
    const cplx hb = (L.J / L.g_b) * s.t / p;
    CHECK(std::abs(s.h(L.site_a) - ha) <= 1e-12 * std::max(1.0, std::abs(ha)));
    CHECK(std::abs(s.h(L.site_b) - hb) <= 1e-12 * std::max(1.0, std::abs(hb)));
    const auto res = scattering_residuals(sys, s);
    CHECK(res.interior <= 1e-10 * std::max(1.0, s.h.cwiseAbs().maxCoeff()));
    CHECK(res.junction_a <= 1e-12 * std::max(1.0, std::abs(ha)));
    CHECK(res.junction_b <= 1e-12 * std::max(1.0, std::abs(hb)));
  }
}

TEST_CASE("property: current conservation over random networks") {
  testing::Rng rng(0xc0ffee);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sys = testing::random_system(rng, {.min_sites = 1, .max_sites = 10});
    const double k = rng.uniform(0.05, pi - 0.05);
    const auto s = solve_scattering(sys, k);
    CHECK(std::abs(s.reflectance() + s.transmittance() - 1.0) <= 1e-10);
  }
}

TEST_CASE("property: agreement with the truncated-lead oracle") {
  testing::Rng rng(0x04ac1e);
  for (int trial = 0; trial < 6; ++trial) {
    const auto sys = testing::random_system(rng, {.min_sites = 1, .max_sites = 6});
    const double k = rng.uniform(0.3, pi - 0.3);
    const auto s = solve_scattering(sys, k);
    const auto o = testing::truncated_lead_oracle(sys, k);
    CHECK(std::abs(s.r - o.r) <= 1e-6);
    CHECK(std::abs(s.t - o.t) <= 1e-6);
  }
}

TEST_CASE("band edges and out-of-range k") {
  CHECK(code_of([] { solve_scattering(single_site(), 0.0); }) == ErrorCode::BandEdge);
  CHECK(code_of([] { solve_scattering(single_site(), pi); }) == ErrorCode::BandEdge);
  CHECK(code_of([] { solve_scattering(single_site(), -0.5); }) == ErrorCode::InvalidValue);
  CHECK(code_of([] { solve_scattering(single_site(), 4.0); }) == ErrorCode::InvalidValue);
  CHECK(code_of([] { solve_scattering(single_site(), std::nan("")); }) == ErrorCode::InvalidValue);
}

TEST_CASE("decoupled states: strict mode rejects, default mode keeps r and t unique") {
  SolveTolerances strict;
  strict.allow_decoupled = false;
  CHECK(code_of([&] { solve_scattering(dangling_pair(), pi / 2.0, strict); }) ==
        ErrorCode::SingularSystem);

  const auto s = solve_scattering(dangling_pair(), pi / 2.0);
  CHECK(s.decoupled_states == 1);
  CHECK(std::abs(s.reflectance() + s.transmittance() - 1.0) <= 1e-10);
  // Minimum-norm choice: no weight on the decoupled combination of sites 2 and 3.
  CHECK(std::abs(s.h(2) - s.h(3)) <= 1e-12);
  // r and t are continuous through the decoupled energy.
  const auto near = solve_scattering(dangling_pair(), pi / 2.0 + 1e-7);
  CHECK(near.decoupled_states == 0);
  CHECK(std::abs(near.r - s.r) <= 1e-6);
  CHECK(std::abs(near.t - s.t) <= 1e-6);
}

TEST_CASE("ring resonance has nodes at both joints but a unique scattering state") {
  for (int N = 2; N <= 6; ++N) {
    for (int n = 1; n < N; ++n) {
      const auto sys = build_ring_system(RingSpec::resonant(N, 1.0, n));
      const auto s = solve_scattering(sys, n * pi / N);
      CHECK(s.decoupled_states >= 1);
      CHECK(std::abs(s.r) <= 1e-10);
      CHECK(std::abs(s.reflectance() + s.transmittance() - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("time reversal conjugates amplitudes and is an involution") {
  const auto sys = bare_ring(3, 0.7);
  const auto s = solve_scattering(sys, 0.9);
  const auto rev = time_reversed(s);
  CHECK(rev.k.reversed);
  CHECK(rev.energy == s.energy);
  CHECK(rev.r == std::conj(s.r));
  CHECK(rev.t == std::conj(s.t));
  CHECK(rev.h == s.h.conjugate());
  const auto back = time_reversed(rev);
  CHECK(!back.k.reversed);
  CHECK(back.r == s.r);
  CHECK(back.h == s.h);

  // The reversed state solves the equations with every plane wave conjugated.
  const auto res = scattering_residuals(sys, rev);
  CHECK(res.interior <= 1e-10);
  CHECK(res.junction_a <= 1e-12);
  CHECK(res.junction_b <= 1e-12);

  ScatteringSolution real_state;
  real_state.r = 0.5;
  real_state.t = -0.25;
  real_state.h = Vector::Constant(2, cplx(1.5));
  const auto fixed = time_reversed(real_state);
  CHECK(fixed.r == real_state.r);
  CHECK(fixed.h == real_state.h);
}

TEST_CASE("reflection phase is arg r") {
  const auto s = solve_scattering(bare_ring(3, 0.6), 1.1);
  REQUIRE(s.reflection_phase().has_value());
  CHECK(*s.reflection_phase() == doctest::Approx(std::arg(s.r)));
}

TEST_CASE("incidence from B by swapping leads") {
  const auto sys = attach_leads(build_network(3, {{0, 1, 1.0}, {1, 2, 0.5}}, {{1, 0.3}}), {0, 2, 1.0, 0.8, 1.0});
  const auto a = solve_scattering(sys, 1.2);
  const auto b = solve_scattering(swap_leads(sys), 1.2);
  // Reciprocity: equal transmission probability from either side.
  CHECK(std::abs(a.transmittance() - b.transmittance()) <= 1e-12);
}

TEST_CASE("transmission curve") {
  CHECK(transmission_curve(single_site(), {}).empty());

  std::vector<double> grid;
  for (int i = 1; i < 40; ++i) grid.push_back(pi * i / 40.0);
  std::reverse(grid.begin(), grid.end());
  const auto uniform = transmission_curve(single_site(), grid);
  REQUIRE(uniform.size() == grid.size());
  for (std::size_t i = 0; i < uniform.size(); ++i) {
    if (i) CHECK(uniform[i - 1].k < uniform[i].k);
    CHECK(uniform[i].transmittance == doctest::Approx(1.0).epsilon(1e-12));
  }

  for (const auto& pt : transmission_curve(bare_ring(2), grid)) {
    REQUIRE(!pt.failure);
    CHECK(std::abs(pt.transmittance + pt.reflectance - 1.0) <= 1e-10);
  }

  const std::vector<double> with_edge{0.0, 1.0};
  const auto marked = transmission_curve(single_site(), with_edge);
  REQUIRE(marked.size() == 2);
  CHECK(marked[0].failure == ErrorCode::BandEdge);
  CHECK(std::isnan(marked[0].transmittance));
  CHECK(!marked[1].failure);
}
