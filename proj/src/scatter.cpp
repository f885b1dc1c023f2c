#include "nhlab/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace nhlab {

namespace {

void check_wavevector(double k) {
  if (!std::isfinite(k) || k < 0.0 || k > std::numbers::pi) {
    throw Error(ErrorCode::InvalidValue, "k = " + std::to_string(k) + " outside (0, pi)");
  }
  if (std::abs(std::sin(k)) < 1e-14) {
    throw Error(ErrorCode::BandEdge, "band edge: sin k = 0 at k = " + std::to_string(k));
  }
}

std::string format_pivot(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Minimum-norm solution of a rank-deficient system. Null vectors touching r or t
// mean the scattering amplitudes themselves are undetermined.
Vector decoupled_solve(const ScatteringEquations& eq, const SolveTolerances& tol, int& nullity) {
  Eigen::JacobiSVD<Matrix> svd(eq.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = tol.rank * sigma(0);
  const Eigen::Index n = sigma.size();
  Vector x = Vector::Zero(n);
  nullity = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector v = svd.matrixV().col(i);
    if (sigma(i) > cutoff) {
      x += v * (svd.matrixU().col(i).dot(eq.rhs) / sigma(i));
      continue;
    }
    ++nullity;
    if (std::abs(v(0)) > 1e-8 || std::abs(v(1)) > 1e-8) {
      throw Error(ErrorCode::SingularSystem,
                  "singular system leaves r and t undetermined at this energy");
    }
  }
  if (nullity == 0) {
    throw Error(ErrorCode::SingularSystem, "pivot below threshold but matrix has full rank");
  }
  return x;
}

}  // namespace

std::optional<double> ScatteringSolution::reflection_phase() const {
  if (std::abs(r) <= 1e-13) {
    return std::nullopt;
  }
  return std::arg(r);
}

ScatteringEquations scattering_equations(const ScatteringSystem& system, const WaveVector& k) {
  const auto& leads = system.leads();
  const int n = system.n_sites();
  const double energy = -2.0 * leads.J * std::cos(k.k);
  const cplx p = k.phase();
  const int a = leads.site_a;
  const int b = leads.site_b;

  // Unknowns: x(0) = r, x(1) = t, x(2 + j) = h_j.
  ScatteringEquations eq{Matrix::Zero(n + 2, n + 2), Vector::Zero(n + 2)};
  const Matrix hc = center_matrix(system.network());
  eq.matrix.block(0, 2, n, n) = hc;
  for (int j = 0; j < n; ++j) {
    eq.matrix(j, 2 + j) -= energy;
  }
  // Row A: ... - g_A f_{-1} with f_{-1} = 1 + r.
  eq.matrix(a, 0) -= leads.g_a;
  eq.rhs(a) += leads.g_a;
  // Row B: ... - g_B f_1 with f_1 = t.
  eq.matrix(b, 1) -= leads.g_b;

  // Junctions: g_A h_A = J (p + r/p), g_B h_B = J t / p.
  eq.matrix(n, 2 + a) = leads.g_a;
  eq.matrix(n, 0) = -leads.J / p;
  eq.rhs(n) = leads.J * p;
  eq.matrix(n + 1, 2 + b) = leads.g_b;
  eq.matrix(n + 1, 1) = -leads.J / p;
  return eq;
}

ScatteringSolution solve_scattering(const ScatteringSystem& system, double k,
                                    const SolveTolerances& tol) {
  check_wavevector(k);
  const WaveVector wave{k, false};
  const auto eq = scattering_equations(system, wave);
  const double scale = max_abs_entry(eq.matrix);

  Eigen::PartialPivLU<Matrix> lu(eq.matrix);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  Vector x;
  int nullity = 0;
  if (min_pivot >= tol.pivot * scale) {
    x = lu.solve(eq.rhs);
  } else if (!tol.allow_decoupled) {
    throw Error(ErrorCode::SingularSystem,
                "pivot " + format_pivot(min_pivot) + " below threshold; a center state is "
                "decoupled from the leads at this energy");
  } else {
    x = decoupled_solve(eq, tol, nullity);
  }
  const double residual = (eq.matrix * x - eq.rhs).cwiseAbs().maxCoeff();
  const double bound = tol.residual * scale * std::max(1.0, x.cwiseAbs().maxCoeff());
  if (!(residual <= bound)) {
    throw Error(ErrorCode::SingularSystem, "row residual " + format_pivot(residual) +
                                               " exceeds bound; system is ill-conditioned");
  }

  ScatteringSolution s;
  s.k = wave;
  s.energy = -2.0 * system.leads().J * std::cos(k);
  s.r = x(0);
  s.t = x(1);
  s.h = x.tail(system.n_sites());
  s.decoupled_states = nullity;
  s.vanishing_joint = std::abs(s.h(system.leads().site_a)) <= tol.vanishing_amplitude ||
                      std::abs(s.h(system.leads().site_b)) <= tol.vanishing_amplitude;
  return s;
}

ScatteringSolution time_reversed(const ScatteringSolution& solution) {
  ScatteringSolution s = solution;
  s.k.reversed = !solution.k.reversed;
  s.r = std::conj(solution.r);
  s.t = std::conj(solution.t);
  s.h = solution.h.conjugate();
  return s;
}

ScatteringResiduals scattering_residuals(const ScatteringSystem& system,
                                         const ScatteringSolution& solution) {
  const auto& leads = system.leads();
  const cplx p = solution.k.phase();
  Vector row = center_matrix(system.network()) * solution.h - solution.energy * solution.h;
  row(leads.site_a) -= leads.g_a * (1.0 + solution.r);
  row(leads.site_b) -= leads.g_b * solution.t;

  ScatteringResiduals res;
  res.interior = row.cwiseAbs().maxCoeff();
  res.junction_a =
      std::abs(leads.g_a * solution.h(leads.site_a) - leads.J * (p + solution.r / p));
  res.junction_b = std::abs(leads.g_b * solution.h(leads.site_b) - leads.J * solution.t / p);
  return res;
}

std::vector<TransmissionPoint> transmission_curve(const ScatteringSystem& system,
                                                  std::span<const double> k_grid) {
  std::vector<TransmissionPoint> out;
  out.reserve(k_grid.size());
  for (double k : k_grid) {
    TransmissionPoint pt;
    pt.k = k;
    try {
      const auto s = solve_scattering(system, k);
      pt.transmittance = s.transmittance();
      pt.reflectance = s.reflectance();
    } catch (const Error& e) {
      pt.failure = e.code();
      pt.transmittance = std::nan("");
      pt.reflectance = std::nan("");
    }
    out.push_back(pt);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TransmissionPoint& x, const TransmissionPoint& y) { return x.k < y.k; });
  return out;
}

}  // namespace nhlab
