#include "nhlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nhlab/errors.hpp"

namespace nhlab {

namespace {

double operator_scale(const Matrix& m) {
  const double s = m.cwiseAbs().rowwise().sum().maxCoeff();
  return s > 0.0 ? s : 1.0;
}

struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
  std::vector<std::vector<int>> groups(int min_size) {
    std::vector<std::vector<int>> by_root(parent.size());
    for (int i = 0; i < static_cast<int>(parent.size()); ++i) {
      by_root[static_cast<std::size_t>(find(i))].push_back(i);
    }
    std::vector<std::vector<int>> out;
    for (auto& g : by_root) {
      if (static_cast<int>(g.size()) >= min_size) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<int> parent;
};

double overlap(const Matrix& vecs, int i, int j) {
  return std::abs(vecs.col(i).dot(vecs.col(j)));
}

// Replaces each numerically split defective eigenvalue group by its mean and by the
// unit vector in the span of the group's eigenvectors that minimises the residual.
std::vector<std::vector<int>> polish_exceptional(const Matrix& m, Vector& values, Matrix& vecs,
                                                 double scale, const EigenOptions& opt) {
  const int n = static_cast<int>(values.size());
  DisjointSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values(i) - values(j)) <= opt.exceptional_window * scale &&
          overlap(vecs, i, j) >= 1.0 - opt.coalescence_overlap) {
        sets.unite(i, j);
      }
    }
  }
  std::vector<std::vector<int>> done;
  for (const auto& group : sets.groups(2)) {
    const auto size = static_cast<Eigen::Index>(group.size());
    cplx mean{0.0, 0.0};
    Matrix span(m.rows(), size);
    for (Eigen::Index c = 0; c < size; ++c) {
      mean += values(group[static_cast<std::size_t>(c)]);
      span.col(c) = vecs.col(group[static_cast<std::size_t>(c)]);
    }
    mean /= static_cast<double>(size);
    const Matrix shifted = m - mean * Matrix::Identity(m.rows(), m.cols());
    Eigen::JacobiSVD<Matrix> svd(shifted * span, Eigen::ComputeThinV);
    Vector v = span * svd.matrixV().col(size - 1);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    v /= norm;
    if ((shifted * v).norm() > opt.polish_residual * scale) continue;
    for (int idx : group) {
      values(idx) = mean;
      vecs.col(idx) = v;
    }
    done.push_back(group);
  }
  return done;
}

}  // namespace

bool lex_less(cplx a, cplx b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

double Spectrum::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

cplx bilinear_self_overlap(const Vector& v) {
  return (v.array() * v.array()).sum();
}

Spectrum eigendecompose(const Matrix& m, const EigenOptions& options) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "eigendecompose needs a non-empty square matrix");
  }
  const int n = static_cast<int>(m.rows());
  Eigen::ComplexEigenSolver<Matrix> solver;
  solver.setMaxIterations(100 * n);
  solver.compute(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence,
                "QR iteration exceeded " + std::to_string(100 * n) + " sweeps");
  }

  Spectrum s;
  s.matrix = m;
  s.scale = operator_scale(m);
  Vector values = solver.eigenvalues();
  Matrix vecs = solver.eigenvectors();
  for (int c = 0; c < n; ++c) {
    const double norm = vecs.col(c).norm();
    if (norm > 0.0) vecs.col(c) /= norm;
  }
  std::vector<std::vector<int>> polished;
  if (options.polish_exceptional) {
    polished = polish_exceptional(m, values, vecs, s.scale, options);
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lex_less(values(a), values(b)); });
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    s.eigenvalues(c) = values(order[static_cast<std::size_t>(c)]);
    s.eigenvectors.col(c) = vecs.col(order[static_cast<std::size_t>(c)]);
  }
  std::vector<int> position(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) position[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])] = c;
  for (auto group : polished) {
    for (int& idx : group) idx = position[static_cast<std::size_t>(idx)];
    std::sort(group.begin(), group.end());
    s.polished.push_back(std::move(group));
  }
  std::sort(s.polished.begin(), s.polished.end());

  s.residuals.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    s.residuals[static_cast<std::size_t>(c)] =
        (m * s.eigenvectors.col(c) - s.eigenvalues(c) * s.eigenvectors.col(c)).norm();
  }

  const double tol = options.cluster * s.scale;
  DisjointSets clusters(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(s.eigenvalues(i) - s.eigenvalues(j)) <= tol) clusters.unite(i, j);
    }
  }
  s.clusters = clusters.groups(2);

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)] || std::abs(s.eigenvalues(i).imag()) <= tol) continue;
    int best = -1;
    double best_d = tol;
    for (int j = 0; j < n; ++j) {
      if (j == i || used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(s.eigenvalues(i) - std::conj(s.eigenvalues(j)));
      if (d <= best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best >= 0) {
      used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(best)] = true;
      s.conjugate_pairs.emplace_back(std::min(i, best), std::max(i, best));
    }
  }
  return s;
}

bool pt_check(const Matrix& m, const std::vector<int>& parity) {
  const int n = static_cast<int>(m.rows());
  if (m.rows() != m.cols() || static_cast<int>(parity.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "parity length differs from matrix dimension");
  }
  for (int i = 0; i < n; ++i) {
    const int p = parity[static_cast<std::size_t>(i)];
    if (p < 0 || p >= n || parity[static_cast<std::size_t>(p)] != i) {
      throw Error(ErrorCode::InvalidValue, "parity is not an involution");
    }
  }
  const double tol = 1e-12 * std::max(1.0, max_abs_entry(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx mapped = std::conj(m(parity[static_cast<std::size_t>(i)], parity[static_cast<std::size_t>(j)]));
      if (std::abs(mapped - m(i, j)) > tol) return false;
    }
  }
  return true;
}

namespace {

// Depth-first enumeration of involutions in lexicographic order, pruning on the
// entries between already-assigned sites.
bool search_involution(const Matrix& m, std::vector<int>& perm, double tol) {
  const int n = static_cast<int>(m.rows());
  int i = 0;
  while (i < n && perm[static_cast<std::size_t>(i)] >= 0) ++i;
  if (i == n) return true;

  auto consistent = [&](int site) {
    for (int j = 0; j < n; ++j) {
      const int pj = perm[static_cast<std::size_t>(j)];
      if (pj < 0) continue;
      const int ps = perm[static_cast<std::size_t>(site)];
      if (std::abs(std::conj(m(ps, pj)) - m(site, j)) > tol) return false;
      if (std::abs(std::conj(m(pj, ps)) - m(j, site)) > tol) return false;
    }
    return true;
  };

  for (int target = i; target < n; ++target) {
    if (perm[static_cast<std::size_t>(target)] >= 0) continue;
    perm[static_cast<std::size_t>(i)] = target;
    perm[static_cast<std::size_t>(target)] = i;
    if (consistent(i) && consistent(target) && search_involution(m, perm, tol)) return true;
    perm[static_cast<std::size_t>(i)] = -1;
    perm[static_cast<std::size_t>(target)] = -1;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_parity(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "find_parity needs a square matrix");
  }
  if (m.rows() > 12) {
    throw Error(ErrorCode::TooLarge, "brute-force parity search is limited to dimension 12");
  }
  std::vector<int> perm(static_cast<std::size_t>(m.rows()), -1);
  const double tol = 1e-12 * std::max(1.0, max_abs_entry(m));
  if (search_involution(m, perm, tol)) return perm;
  return std::nullopt;
}

const char* to_string(PtPhase phase) {
  switch (phase) {
    case PtPhase::unbroken: return "unbroken";
    case PtPhase::broken: return "broken";
    case PtPhase::not_pt: return "not_pt";
  }
  return "unknown";
}

PtPhase classify_phase(const Spectrum& spectrum, double tol) {
  const double bound = tol * spectrum.scale;
  std::vector<cplx> complex_values;
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    if (std::abs(spectrum.eigenvalues(i).imag()) > bound) {
      complex_values.push_back(spectrum.eigenvalues(i));
    }
  }
  if (complex_values.empty()) return PtPhase::unbroken;
  std::vector<cplx> conjugated;
  for (const auto& z : complex_values) conjugated.push_back(std::conj(z));
  return multiset_distance(complex_values, conjugated) <= bound ? PtPhase::broken
                                                                 : PtPhase::not_pt;
}

PTReport pt_report(const Matrix& m, const Spectrum& spectrum,
                   std::optional<std::vector<int>> parity, double tol) {
  PTReport rep;
  if (parity) {
    rep.is_pt_symmetric = pt_check(m, *parity);
    if (rep.is_pt_symmetric) rep.parity = std::move(parity);
  } else if (m.rows() <= 12) {
    rep.parity = find_parity(m);
    rep.is_pt_symmetric = rep.parity.has_value();
  }
  rep.phase = rep.is_pt_symmetric ? classify_phase(spectrum, tol) : PtPhase::not_pt;
  return rep;
}

CoalescenceReport detect_coalescence(const Spectrum& spectrum, double tol, double overlap_tol) {
  const int n = spectrum.dimension();
  const double bound = tol * spectrum.scale;
  CoalescenceReport rep;
  for (int i = 0; i < n; ++i) {
    rep.self_overlaps.push_back(bilinear_self_overlap(spectrum.eigenvectors.col(i)));
  }
  DisjointSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(spectrum.eigenvalues(i) - spectrum.eigenvalues(j)) <= bound &&
          overlap(spectrum.eigenvectors, i, j) >= 1.0 - overlap_tol) {
        sets.unite(i, j);
      }
    }
  }
  for (auto& members : sets.groups(2)) {
    CoalescenceGroup g;
    g.members = members;
    for (int a : members) {
      g.eigenvalue += spectrum.eigenvalues(a);
      for (int b : members) {
        g.eigenvalue_spread =
            std::max(g.eigenvalue_spread, std::abs(spectrum.eigenvalues(a) - spectrum.eigenvalues(b)));
        g.min_overlap = std::min(g.min_overlap, overlap(spectrum.eigenvectors, a, b));
      }
    }
    g.eigenvalue /= static_cast<double>(members.size());
    rep.groups.push_back(std::move(g));
  }
  return rep;
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(std::abs(a[i] - b[j]), i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  std::size_t matched = 0;
  for (const auto& [d, i, j] : pairs) {
    if (used_a[i] || used_b[j]) continue;
    used_a[i] = used_b[j] = true;
    worst = std::max(worst, d);
    if (++matched == n) break;
  }
  return worst;
}

}  // namespace nhlab
