#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nhlab::testing {

ScatteringSystem random_system(Rng& rng, const RandomSystemOptions& opt) {
  const int n = rng.integer(opt.min_sites, opt.max_sites);
  std::vector<Hopping> hops;
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  auto add = [&](int i, int j) {
    if (i == j || used[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) return;
    used[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    used[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
    hops.push_back({i, j, rng.uniform(opt.t_min, opt.t_max)});
  };
  for (int s = 1; s < n; ++s) add(s, rng.integer(0, s - 1));
  const int extra = n > 2 ? rng.integer(0, n) : 0;
  for (int e = 0; e < extra; ++e) add(rng.integer(0, n - 1), rng.integer(0, n - 1));

  std::vector<SitePotential> pots;
  for (int s = 0; s < n; ++s) pots.push_back({s, rng.uniform(-opt.v_max, opt.v_max)});

  LeadConfig leads;
  leads.site_a = rng.integer(0, n - 1);
  leads.site_b = leads.site_a;
  while (n > 1 && leads.site_b == leads.site_a) leads.site_b = rng.integer(0, n - 1);
  if (opt.random_couplings) {
    leads.g_a = rng.uniform(opt.g_min, opt.g_max);
    leads.g_b = rng.uniform(opt.g_min, opt.g_max);
  }
  return attach_leads(build_network(n, std::move(hops), std::move(pots)), leads);
}

namespace {

OracleAmplitudes oracle_with_length(const ScatteringSystem& system, double k, int lead_sites, double& gap) {
  const auto& net = system.network();
  const auto& leads = system.leads();
  const int n = net.n_sites();
  const int L = lead_sites;
  const int dim = 2 * L + n;
  // Layout: lead A sites l = -L..-1 at rows 0..L-1, center at L..L+n-1,
  // lead B sites l = 1..L at L+n..2L+n-1.
  auto a_row = [&](int l) { return L + l; };
  auto b_row = [&](int l) { return L + n + l - 1; };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  auto bond = [&](int i, int j, double t) {
    h(i, j) -= t;
    h(j, i) -= t;
  };
  for (int l = -L; l < -1; ++l) bond(a_row(l), a_row(l + 1), leads.J);
  for (int l = 1; l < L; ++l) bond(b_row(l), b_row(l + 1), leads.J);
  for (const auto& hop : net.hoppings()) bond(L + hop.i, L + hop.j, hop.amplitude);
  for (int s = 0; s < n; ++s) h(L + s, L + s) += net.potential(s);
  bond(a_row(-1), L + leads.site_a, leads.g_a);
  bond(b_row(1), L + leads.site_b, leads.g_b);

  const double energy = -2.0 * leads.J * std::cos(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& v = eig.eigenvectors();
  // psi = G(E) e_end with G(E) = V diag(1 / (E - lambda)) V^T. States bound to the center
  // at E itself have no weight on the lead ends; their 0/0 terms are dropped.
  auto resolvent_column = [&](int end) {
    Eigen::VectorXd w = v.row(end).transpose();
    for (int i = 0; i < dim; ++i) {
      const bool bound_at_e = std::abs(energy - lambda(i)) <= 1e-8 && std::abs(w(i)) <= 1e-10;
      w(i) = bound_at_e ? 0.0 : w(i) / (energy - lambda(i));
    }
    return Eigen::VectorXd(v * w);
  };
  gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) {
    if (std::abs(v(0, i)) > 1e-10 || std::abs(v(dim - 1, i)) > 1e-10) gap = std::min(gap, std::abs(energy - lambda(i)));
  }
  const Eigen::VectorXd psi1 = resolvent_column(0);
  const Eigen::VectorXd psi2 = resolvent_column(dim - 1);

  const cplx p = std::polar(1.0, k);
  // f = alpha p^{m} + beta p^{-m} from two consecutive samples at m = 0, 1.
  auto fit = [&](cplx f0, cplx f1) {
    const cplx beta = (f1 - p * f0) / (1.0 / p - p);
    return std::pair<cplx, cplx>{f0 - beta, beta};
  };
  // Lead B: m = l - 1.
  const auto [a1, b1] = fit(psi1(b_row(1)), psi1(b_row(2)));
  const auto [a2, b2] = fit(psi2(b_row(1)), psi2(b_row(2)));
  const cplx c = -b1 / b2;
  auto psi = [&](int row) { return cplx(psi1(row)) + c * psi2(row); };
  const cplx out_b = a1 + c * a2;
  // Lead A: m = l + 1, sampled at l = -1 (m = 0) and l = -2 (m = -1), so swap roles of p.
  const cplx f0 = psi(a_row(-1));
  const cplx fm1 = psi(a_row(-2));
  // f(m) = inc p^m + ref p^{-m}: f(0) = inc + ref, f(-1) = inc / p + ref p.
  const cplx ref = (fm1 - f0 / p) / (p - 1.0 / p);
  const cplx inc = f0 - ref;
  return {ref / inc, out_b / inc};
}

}  // namespace

OracleAmplitudes truncated_lead_oracle(const ScatteringSystem& system, double k, int lead_sites) {
  // Commensurate k can put E on the finite chain's spectrum; nudge the lead length off it.
  OracleAmplitudes best{};
  double best_gap = -1.0;
  for (int extra = 0; extra < 4; ++extra) {
    double gap = 0.0;
    const auto amp = oracle_with_length(system, k, lead_sites + extra, gap);
    if (gap > best_gap) {
      best = amp;
      best_gap = gap;
    }
    if (gap > 1e-3) break;
  }
  return best;
}

cplx full_pivot_determinant(Matrix m) {
  const Eigen::Index n = m.rows();
  cplx det = 1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pr = c;
    Eigen::Index pc = c;
    double best = -1.0;
    for (Eigen::Index i = c; i < n; ++i) {
      for (Eigen::Index j = c; j < n; ++j) {
        if (std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          pr = i;
          pc = j;
        }
      }
    }
    if (best == 0.0) return 0.0;
    if (pr != c) {
      m.row(pr).swap(m.row(c));
      det = -det;
    }
    if (pc != c) {
      m.col(pc).swap(m.col(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      const cplx f = m(i, c) / m(c, c);
      for (Eigen::Index j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

cplx laplace_determinant(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n > 9) throw std::invalid_argument("laplace_determinant: dimension too large");
  if (n == 1) return m(0, 0);
  cplx sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m(0, j) == cplx(0.0)) continue;
    Matrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
        if (c != j) minor(r - 1, cc++) = m(r, c);
      }
    }
    sum += (j % 2 == 0 ? 1.0 : -1.0) * m(0, j) * laplace_determinant(minor);
  }
  return sum;
}

std::pair<cplx, cplx> eigenvalues_2x2(const Matrix& m) {
  const cplx tr = m(0, 0) + m(1, 1);
  const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const cplx disc = std::sqrt(tr * tr / 4.0 - det);
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

namespace {

bool augment(std::size_t i, const std::vector<std::vector<bool>>& ok, std::vector<int>& owner,
             std::vector<bool>& seen) {
  for (std::size_t j = 0; j < ok.size(); ++j) {
    if (!ok[i][j] || seen[j]) continue;
    seen[j] = true;
    if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), ok, owner, seen)) {
      owner[j] = static_cast<int>(i);
      return true;
    }
  }
  return false;
}

bool perfect_matching_within(const std::vector<cplx>& a, const std::vector<cplx>& b, double limit) {
  const std::size_t n = a.size();
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ok[i][j] = std::abs(a[i] - b[j]) <= limit;
  }
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> seen(n, false);
    if (!augment(i, ok, owner, seen)) return false;
  }
  return true;
}

}  // namespace

double brute_multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (a.empty()) return 0.0;
  if (a.size() > 8) {
    // Bottleneck assignment: smallest pairwise distance admitting a perfect matching.
    std::vector<double> candidates;
    for (const auto& x : a) {
      for (const auto& y : b) candidates.push_back(std::abs(x - y));
    }
    std::sort(candidates.begin(), candidates.end());
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (perfect_matching_within(a, b, candidates[mid])) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return candidates[lo];
  }
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size() && worst < best; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<cplx> as_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace nhlab::testing
