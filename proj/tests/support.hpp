#pragma once

// Shared generators and independent oracles for the test suites. Nothing here calls
// into the solver paths it is used to check.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "nhlab/linalg.hpp"
#include "nhlab/netgraph.hpp"

namespace nhlab::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

struct RandomSystemOptions {
  int min_sites = 1;
  int max_sites = 8;
  double t_min = 0.2;
  double t_max = 2.0;
  double v_max = 1.0;
  double g_min = 0.5;
  double g_max = 1.5;
  bool random_couplings = true;
};

/// Connected random network: a random spanning tree plus extra random edges, random
/// potentials, distinct random joints (or site 0 twice for a single site).
ScatteringSystem random_system(Rng& rng, const RandomSystemOptions& opt = {});

/// r and t from a finite chain: `lead_sites` sites per lead, stationary state built from
/// the resolvent with sources at the far ends, matched to plane waves next to the center.
struct OracleAmplitudes {
  cplx r;
  cplx t;
};
OracleAmplitudes truncated_lead_oracle(const ScatteringSystem& system, double k, int lead_sites = 200);

/// Determinant by Gaussian elimination with full pivoting.
cplx full_pivot_determinant(Matrix m);

/// Determinant by Laplace expansion along the first row (dimension <= 9).
cplx laplace_determinant(const Matrix& m);

/// Eigenvalues of a 2x2 matrix from the characteristic polynomial.
std::pair<cplx, cplx> eigenvalues_2x2(const Matrix& m);

/// Hungarian-free exhaustive multiset distance for small sizes (<= 8), else sorted-pair.
double brute_multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

std::vector<cplx> as_list(const Vector& v);

}  // namespace nhlab::testing
