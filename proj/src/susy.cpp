#include "nhlab/susy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nhlab/errors.hpp"

namespace nhlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void check_chain(int N) {
  if (N < 2) throw Error(ErrorCode::InvalidN, "ladder needs N >= 2");
}

cplx expi(cplx z) { return std::exp(kI * z); }

double sign_pow(int j) { return (j % 2 == 0) ? 1.0 : -1.0; }

// psi_{N+1}(j) = (-1)^j e^{-i kappa j}, weighted by 1/sqrt(2) at j = 1 and j = N+1.
Vector top_state(int N, cplx kappa) {
  Vector v(N + 1);
  for (int j = 1; j <= N + 1; ++j) {
    v(j - 1) = sign_pow(j) * expi(-kappa * static_cast<double>(j));
  }
  v(0) /= kSqrt2;
  v(N) /= kSqrt2;
  return v;
}

Matrix mirror(int N) {
  Matrix p = Matrix::Zero(N, N);
  for (int i = 0; i < N; ++i) p(i, N - 1 - i) = 1.0;
  return p;
}

}  // namespace

KappaMode KappaMode::real(double kappa) {
  if (!(kappa > 0.0 && kappa < kPi)) {
    throw Error(ErrorCode::InvalidMode, "kappa must lie in (0, pi)");
  }
  return {Kind::real, kappa};
}

KappaMode KappaMode::bound(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidMode, "omega must be positive");
  }
  return {Kind::bound, omega};
}

KappaMode KappaMode::broken(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidMode, "omega must be positive");
  }
  return {Kind::broken, omega};
}

cplx KappaMode::kappa() const {
  switch (kind_) {
    case Kind::real: return {parameter_, 0.0};
    case Kind::bound: return {0.0, -parameter_};
    case Kind::broken: return {kPi / 2.0, -parameter_};
  }
  return {};
}

Matrix chain_hamiltonian(int m) {
  if (m < 1) throw Error(ErrorCode::InvalidN, "chain needs at least one site");
  Matrix h = Matrix::Zero(m, m);
  for (int i = 0; i + 1 < m; ++i) {
    h(i, i + 1) = -1.0;
    h(i + 1, i) = -1.0;
  }
  return h;
}

SusyFactorization factorize(int N, const KappaMode& mode) {
  check_chain(N);
  const cplx kappa = mode.kappa();
  const cplx diag = -expi(-kappa / 2.0);  // r_n = q_n
  const cplx off = expi(kappa / 2.0);     // rbar_n = qbar_n
  SusyFactorization f{Matrix::Zero(N - 1, N), Matrix::Zero(N, N - 1), mode.mu()};
  for (int n = 0; n < N - 1; ++n) {
    f.Q(n, n) = diag;
    f.Q(n, n + 1) = off;
    f.R(n, n) = diag;
    f.R(n + 1, n) = off;
  }
  return f;
}

SusyFactorization factorize_mirrored(int N, const KappaMode& mode) {
  check_chain(N);
  const cplx kappa = mode.kappa();
  SusyFactorization f{Matrix::Zero(N, N + 1), Matrix::Zero(N + 1, N), mode.mu()};
  for (int n = 0; n < N; ++n) {
    const cplx diag = (n == 0 ? kSqrt2 : 1.0) * kI * expi(-kappa / 2.0);
    const cplx off = (n == N - 1 ? kSqrt2 : 1.0) * kI * expi(kappa / 2.0);
    f.Q(n, n) = diag;
    f.Q(n, n + 1) = off;
    f.R(n, n) = diag;
    f.R(n + 1, n) = off;
  }
  return f;
}

LadderChain build_ladder(int N, const KappaMode& mode) {
  auto first = factorize(N, mode);
  auto second = factorize_mirrored(N, mode);
  const cplx mu = first.mu;
  const Matrix p = mirror(N);
  Matrix h1 = first.Q * first.R - mu * Matrix::Identity(N - 1, N - 1);
  Matrix h2 = first.R * first.Q - mu * Matrix::Identity(N, N);
  Matrix h2p = p * h2 * p;  // P^{-1} = P
  Matrix h3 = second.R * second.Q + mu * Matrix::Identity(N + 1, N + 1);
  return LadderChain{std::move(h1), std::move(h2), std::move(h2p), std::move(h3), p,
                     std::move(first), std::move(second), mode};
}

std::vector<Eigenfunction> eigenfunctions(int N, const KappaMode& mode) {
  const LadderChain ladder = build_ladder(N, mode);
  const cplx kappa = mode.kappa();
  const Matrix lift = ladder.second.R * ladder.P;  // R' P

  std::vector<Eigenfunction> out;
  auto push = [&](int label, cplx lambda, Vector v) {
    Eigenfunction e;
    e.label = label;
    e.eigenvalue = lambda;
    e.normalized = v / v.norm();
    e.residual = (ladder.H3 * v - lambda * v).norm() / v.norm();
    e.vector = std::move(v);
    out.push_back(std::move(e));
  };

  for (int n = 1; n < N; ++n) {
    Vector phi(N - 1);
    for (int j = 1; j < N; ++j) phi(j - 1) = std::sqrt(2.0 / N) * std::sin(n * kPi * j / N);
    push(n, -2.0 * std::cos(n * kPi / N), lift * (ladder.first.R * phi));
  }
  Vector varphi(N);
  for (int j = 1; j <= N; ++j) varphi(j - 1) = expi(-kappa * static_cast<double>(j));
  push(N, -ladder.first.mu, lift * varphi);
  push(N + 1, ladder.first.mu, top_state(N, kappa));
  return out;
}

double proportionality_deviation(const Vector& v, const Vector& w) {
  const Vector a = v / v.norm();
  const Vector b = w / w.norm();
  const cplx ov = b.dot(a);  // <b, a>
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0, 0.0);
  return (a - phase * b).norm();
}

bool ResonanceCoalescence::coalesced(double tol) const {
  for (double d : deviations) {
    if (!(d <= tol)) return false;
  }
  for (const auto& s : self_overlaps) {
    if (!(std::abs(s) <= tol)) return false;
  }
  return true;
}

ResonanceCoalescence coalescence_at_resonance(int N, int n) {
  if (N < 2 || n < 1 || n > N - 1) {
    throw Error(ErrorCode::InvalidN, "resonance index must satisfy 1 <= n <= N-1, N >= 2");
  }
  ResonanceCoalescence rep;
  rep.N = N;
  rep.n = n;
  rep.k = n * kPi / N;
  rep.triple = (2 * n == N);
  const double k = rep.k;
  const double s = std::sin(k);
  const cplx half = std::polar(1.0, -k / 2.0);

  // Interior entries are j = 2..N in one-based labels.
  Vector psi_n(N + 1), psi_m(N + 1), psi_top_minus(N + 1);
  psi_n(0) = -kI * kSqrt2 * sign_pow(n) * s;
  psi_m(0) = kI * kSqrt2 * sign_pow(N) * sign_pow(n) * s;
  psi_top_minus(0) = kI * kSqrt2 * sign_pow(n) * half;
  for (int j = 2; j <= N; ++j) {
    psi_n(j - 1) = -2.0 * kI * std::polar(1.0, -(N + 1 - j) * k) * s;
    psi_m(j - 1) = -sign_pow(N - j) * 2.0 * kI * std::polar(1.0, (N + 1 - j) * k) * s;
    psi_top_minus(j - 1) = 2.0 * kI * std::polar(1.0, -(N + 1 - j) * k) * half;
  }
  psi_n(N) = -kI * kSqrt2 * s;
  psi_m(N) = kI * kSqrt2 * s;
  psi_top_minus(N) = kI * kSqrt2 * half;
  const Vector psi_top = top_state(N, cplx(k, 0.0));

  rep.closed_forms.emplace_back(n, psi_n);
  rep.closed_forms.emplace_back(N - n, psi_m);
  rep.closed_forms.emplace_back(N, psi_top_minus);
  rep.closed_forms.emplace_back(N + 1, psi_top);

  if (rep.triple) {
    rep.groups = {{n, N, N + 1}};
  } else {
    rep.groups = {{n, N}, {N - n, N + 1}};
  }
  // When n = N/2 the forms for psi_n and psi_{N-n} describe the same state, so both
  // take part in the triple.
  for (const auto& g : rep.groups) {
    std::vector<const Vector*> members;
    for (const auto& [label, v] : rep.closed_forms) {
      if (std::find(g.begin(), g.end(), label) != g.end()) members.push_back(&v);
    }
    double worst = 0.0;
    for (std::size_t a = 1; a < members.size(); ++a) {
      worst = std::max(worst, proportionality_deviation(*members[0], *members[a]));
    }
    rep.deviations.push_back(worst);
  }

  const auto constructed = eigenfunctions(N, KappaMode::real(k));
  for (const auto& [label, v] : rep.closed_forms) {
    rep.self_overlaps.push_back(bilinear_self_overlap(v / v.norm()));
    rep.construction_deviation = std::max(
        rep.construction_deviation,
        proportionality_deviation(v, constructed[static_cast<std::size_t>(label - 1)].vector));
  }
  return rep;
}

}  // namespace nhlab
