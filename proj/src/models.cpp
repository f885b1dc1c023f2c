#include "nhlab/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nhlab/errors.hpp"

namespace nhlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void check_ring_size(int N) {
  if (N < 2) throw Error(ErrorCode::InvalidMode, "ring needs N >= 2 (2N >= 4 sites)");
}

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidMode, std::string(what) + " must be positive");
  }
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kPi)) {
    throw Error(ErrorCode::InvalidMode, "theta must lie in (0, pi)");
  }
}

}  // namespace

RingSpec::RingSpec(int N, double g, double J, RingMode mode)
    : N_(N), g_(g), J_(J), mode_(mode) {}

RingSpec RingSpec::resonant(int N, double g, int n, double J) {
  check_ring_size(N);
  check_positive(g, "g");
  check_positive(J, "J");
  if (n < 1 || n > N - 1) {
    throw Error(ErrorCode::InvalidMode, "resonant index n must lie in [1, N-1]");
  }
  if (std::abs(g - kSqrt2 * J) <= 1e-12 * J) {
    throw Error(ErrorCode::InvalidMode, "resonant mode requires g != sqrt(2) J");
  }
  return RingSpec(N, g, J, ResonantMode{n});
}

RingSpec RingSpec::critical(int N, double eps, double J) {
  check_ring_size(N);
  check_positive(J, "J");
  if (!(eps > -2.0 * J && eps < 2.0 * J)) {
    throw Error(ErrorCode::InvalidMode, "critical energy must lie in (-2J, 2J)");
  }
  return RingSpec(N, kSqrt2 * J, J, CriticalMode{eps});
}

RingSpec RingSpec::bare(int N, double theta, double J) {
  check_ring_size(N);
  check_positive(J, "J");
  check_theta(theta);
  return RingSpec(N, J, J, BareMode{theta});
}

double RingSpec::incident_k() const {
  if (const auto* r = std::get_if<ResonantMode>(&mode_)) return r->n * kPi / N_;
  if (const auto* c = std::get_if<CriticalMode>(&mode_)) return std::acos(-c->eps / (2.0 * J_));
  return std::get<BareMode>(mode_).theta;
}

double RingSpec::incident_energy() const {
  if (const auto* c = std::get_if<CriticalMode>(&mode_)) return c->eps;
  return -2.0 * J_ * std::cos(incident_k());
}

ScatteringSystem build_ring_system(const RingSpec& spec) {
  const int n = spec.N();
  std::vector<Hopping> hops;
  for (int s = 0; s < 2 * n; ++s) hops.push_back({s, (s + 1) % (2 * n), spec.J()});
  std::vector<SitePotential> pots;
  if (!std::holds_alternative<BareMode>(spec.mode())) {
    const double v = -(spec.incident_energy() / 2.0) * (spec.g() * spec.g()) / (spec.J() * spec.J());
    pots = {{0, v}, {n, v}};
  }
  return attach_leads(build_network(2 * n, std::move(hops), std::move(pots)),
                      LeadConfig{0, n, spec.g(), spec.g(), spec.J()});
}

double gamma_value(const RingSpec& spec) {
  if (const auto* r = std::get_if<ResonantMode>(&spec.mode())) {
    return spec.g() * spec.g() / spec.J() * std::sin(r->n * kPi / spec.N());
  }
  if (const auto* c = std::get_if<CriticalMode>(&spec.mode())) {
    return std::sqrt(4.0 * spec.J() * spec.J() - c->eps * c->eps);
  }
  throw Error(ErrorCode::InvalidMode, "bare ring has no imaginary potential gamma");
}

Matrix pt_ring_hamiltonian(int N, double gamma, double J) {
  return ring_with_potentials(N, {cplx(0.0, gamma), cplx(0.0, -gamma)}, J);
}

Matrix ring_with_potentials(int N, const EffectivePotentials& potentials, double J) {
  check_ring_size(N);
  const int d = 2 * N;
  Matrix m = Matrix::Zero(d, d);
  for (int s = 0; s < d; ++s) {
    const int t = (s + 1) % d;
    m(s, t) = -J;
    m(t, s) = -J;
  }
  m(0, 0) = potentials.u_a;
  m(N, N) = potentials.u_b;
  return m;
}

std::vector<int> ring_parity(int N) {
  std::vector<int> p(static_cast<std::size_t>(2 * N));
  for (int s = 0; s < 2 * N; ++s) p[static_cast<std::size_t>(s)] = ((N - s) % (2 * N) + 2 * N) % (2 * N);
  return p;
}

std::vector<cplx> AnalyticRingSpectrum::multiset() const {
  std::vector<cplx> out;
  for (double e : bulk) {
    out.emplace_back(e, 0.0);
    out.emplace_back(e, 0.0);
  }
  out.push_back(extra[0]);
  out.push_back(extra[1]);
  return out;
}

AnalyticRingSpectrum analytic_spectrum(int N, double gamma, double J) {
  check_ring_size(N);
  AnalyticRingSpectrum a;
  a.gamma = gamma;
  for (int j = 1; j < N; ++j) a.bulk.push_back(-2.0 * J * std::cos(j * kPi / N));
  const double radicand = 4.0 * J * J - gamma * gamma;
  const cplx root = radicand >= 0.0 ? cplx(std::sqrt(radicand), 0.0) : cplx(0.0, std::sqrt(-radicand));
  a.extra = {root, -root};
  return a;
}

EffectivePotentials nonpt_potentials(int N, double theta, double J) {
  check_ring_size(N);
  check_theta(theta);
  const cplx phase = std::polar(1.0, theta * N);
  const double s = std::sin(theta);
  const cplx denom = phase * std::sin((N - 1) * theta) - s;
  if (std::abs(denom) <= 1e-12) {
    throw Error(ErrorCode::SingularDenominator, "U_A closed form is singular at this theta");
  }
  EffectivePotentials u;
  u.u_a = -J * (phase * std::cos((N - 1) * theta) + kI * s) / denom * 2.0 * s;
  u.u_b = -J * std::polar(1.0, theta);
  return u;
}

CharDet char_det(int N, double theta) { return char_det(N, theta, nonpt_potentials(N, theta)); }

CharDet char_det(int N, double theta, const EffectivePotentials& potentials) {
  check_ring_size(N);
  check_theta(theta);
  const double e = -2.0 * std::cos(theta);
  const cplx ua = potentials.u_a;
  const cplx ub = potentials.u_b;

  CharDet out;
  out.recursion.resize(static_cast<std::size_t>(N));
  out.recursion[0] = 1.0;
  if (N > 1) out.recursion[1] = -e;
  for (int j = 2; j < N; ++j) {
    out.recursion[static_cast<std::size_t>(j)] =
        -e * out.recursion[static_cast<std::size_t>(j - 1)] - out.recursion[static_cast<std::size_t>(j - 2)];
  }
  const cplx q = std::polar(1.0, 2.0 * theta);
  for (int j = 0; j < N; ++j) {
    out.closed_form.push_back((1.0 - std::pow(q, j + 1)) / (1.0 - q) * std::polar(1.0, -j * theta));
  }

  const cplx d_nm1 = out.recursion[static_cast<std::size_t>(N - 1)];
  const cplx d_nm2 = out.recursion[static_cast<std::size_t>(N - 2)];
  out.value = (e * e + ua * ub - e * (ua + ub) - 4.0) * d_nm1 - 2.0 * (ua + ub) * d_nm2;

  // Row max-norms of the (N+1)-dimensional bonding block.
  const double inner = std::max(std::abs(e), 1.0);
  double norm = std::max(std::abs(ua - e), kSqrt2) * std::max(std::abs(ub - e), kSqrt2);
  for (int row = 1; row < N; ++row) {
    const bool next_to_end = (row == 1 || row == N - 1);
    norm *= next_to_end ? std::max(inner, kSqrt2) : inner;
  }
  out.normalization = norm;
  return out;
}

DetZeroReport det_zero_report(int N, double theta, const EffectivePotentials& potentials,
                              double J) {
  const EffectivePotentials scaled{potentials.u_a / J, potentials.u_b / J};
  const CharDet cd = char_det(N, theta, scaled);

  Matrix shifted = ring_with_potentials(N, potentials, J);
  shifted.diagonal().array() += 2.0 * J * std::cos(theta);
  double row_norms = 1.0;
  for (Eigen::Index r = 0; r < shifted.rows(); ++r) row_norms *= shifted.row(r).cwiseAbs().maxCoeff();
  const cplx det = Eigen::PartialPivLU<Matrix>(shifted).determinant();

  DetZeroReport rep;
  rep.cofactor = std::abs(cd.value) / cd.normalization;
  rep.direct = std::abs(det) / row_norms;
  rep.zero = rep.cofactor <= 1e-8 && rep.direct <= 1e-8;
  return rep;
}

bool verify_det_zero(int N, double theta, double J) {
  return det_zero_report(N, theta, nonpt_potentials(N, theta, J), J).zero;
}

RingBlocks ring_decompose(const Matrix& ring, int N) {
  if (N < 2 || ring.rows() != 2 * N || ring.cols() != 2 * N) {
    throw Error(ErrorCode::ShapeMismatch, "expected a 2N x 2N ring matrix");
  }
  const int d = 2 * N;
  const cplx hop = ring(0, 1);
  const double tol = 1e-12 * std::max(1.0, max_abs_entry(ring));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      cplx expected{0.0, 0.0};
      if (i == j) {
        if (i == 0 || i == N) continue;
      } else if ((i + 1) % d == j || (j + 1) % d == i) {
        expected = hop;
      }
      if (std::abs(ring(i, j) - expected) > tol) {
        throw Error(ErrorCode::ShapeMismatch,
                    "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") breaks the uniform-ring / joint-potential pattern");
      }
    }
  }

  const double w = 1.0 / kSqrt2;
  Matrix ta = Matrix::Zero(N + 1, d);
  Matrix tb = Matrix::Zero(N - 1, d);
  ta(0, 0) = 1.0;
  ta(N, N) = 1.0;
  for (int s = 1; s < N; ++s) {
    ta(s, s) = w;
    ta(s, d - s) = w;
    tb(s - 1, s) = w;
    tb(s - 1, d - s) = -w;
  }
  RingBlocks blocks;
  blocks.alpha = ta * ring * ta.transpose();
  blocks.beta = tb * ring * tb.transpose();
  return blocks;
}

}  // namespace nhlab
