#pragma once

// Dense non-Hermitian eigensystems, PT-symmetry checks and exceptional points.

#include <optional>
#include <vector>

#include "nhlab/linalg.hpp"

namespace nhlab {

/// Lexicographic order on (Re, Im), used for every sorted eigenvalue list.
bool lex_less(cplx a, cplx b);

struct EigenOptions {
  /// Eigenvalues this close (relative to the scale) whose eigenvectors are parallel
  /// to within `coalescence_overlap` are treated as one defective eigenvalue. A
  /// k-fold Jordan block splits by ~eps^(1/k) in floating point, so the window must be
  /// far wider than machine precision to catch third-order points.
  double exceptional_window = 1e-4;
  double coalescence_overlap = 1e-6;
  /// A coalesced group is polished only if the refined pair has a residual this small.
  double polish_residual = 1e-12;
  bool polish_exceptional = true;
  /// Tolerance for the cluster and conjugate-pair annotations.
  double cluster = 1e-8;
};

struct Spectrum {
  Matrix matrix;
  Vector eigenvalues;   // sorted by (Re, Im)
  Matrix eigenvectors;  // unit 2-norm columns
  std::vector<double> residuals;  // ||M v - lambda v||_2 per pair
  /// Index pairs (i, j), i < j, with lambda_j = conj(lambda_i) and Im lambda_i != 0.
  std::vector<std::pair<int, int>> conjugate_pairs;
  /// Groups (size >= 2) of eigenvalues equal to within cluster tolerance.
  std::vector<std::vector<int>> clusters;
  /// Groups that were recognised as coalesced (defective) and polished.
  std::vector<std::vector<int>> polished;
  double scale = 1.0;  // max absolute row sum of the matrix (1 for the zero matrix)

  int dimension() const { return static_cast<int>(eigenvalues.size()); }
  double max_residual() const;
};

/// Full right eigensystem via complex Schur decomposition (Hessenberg reduction and
/// shifted QR), followed by back substitution. Numerically coalesced pairs are replaced
/// by their cluster mean and the best common eigenvector in their span, which is far
/// more accurate than the individually split values at an exceptional point.
/// Throws Error{DimensionMismatch} for a non-square or empty matrix and
/// Error{NoConvergence} if the QR iteration exceeds 100 * dim sweeps.
Spectrum eigendecompose(const Matrix& m, const EigenOptions& options = {});

/// Sum_j v(j)^2 without conjugation.
cplx bilinear_self_overlap(const Vector& v);

/// True iff P conj(M) P == M entry-wise to 1e-12 (relative to the largest entry),
/// where P is the permutation matrix of `parity`.
/// Throws Error{DimensionMismatch} or Error{InvalidValue} (not an involution).
bool pt_check(const Matrix& m, const std::vector<int>& parity);

/// Lexicographically first involution passing pt_check, if any.
/// Throws Error{TooLarge} above dimension 12.
std::optional<std::vector<int>> find_parity(const Matrix& m);

enum class PtPhase { unbroken, broken, not_pt };

const char* to_string(PtPhase phase);

/// unbroken: max |Im lambda| <= tol * scale; broken: the non-real eigenvalues pair into
/// complex conjugates within tol * scale; not_pt otherwise.
PtPhase classify_phase(const Spectrum& spectrum, double tol = 1e-8);

struct PTReport {
  std::optional<std::vector<int>> parity;
  bool is_pt_symmetric = false;
  PtPhase phase = PtPhase::not_pt;
};

/// Uses `parity` when given, otherwise searches for one (dimension <= 12).
PTReport pt_report(const Matrix& m, const Spectrum& spectrum,
                   std::optional<std::vector<int>> parity = std::nullopt, double tol = 1e-8);

struct CoalescenceGroup {
  std::vector<int> members;
  cplx eigenvalue{0.0, 0.0};
  double eigenvalue_spread = 0.0;
  double min_overlap = 1.0;  // smallest pairwise |<v_i, v_j>|
};

struct CoalescenceReport {
  std::vector<CoalescenceGroup> groups;
  std::vector<cplx> self_overlaps;  // bilinear self-overlap of every unit eigenvector
};

/// Groups eigenvectors whose eigenvalues agree within tol * scale and whose unit
/// vectors satisfy |<v_i, v_j>| >= 1 - overlap_tol pairwise.
CoalescenceReport detect_coalescence(const Spectrum& spectrum, double tol = 1e-8,
                                     double overlap_tol = 1e-6);

/// Greedy multiset distance: max over matched pairs of |a_i - b_pi(i)| after sorting
/// both by (Re, Im) and matching nearest neighbours. Returns +inf on size mismatch.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

}  // namespace nhlab
