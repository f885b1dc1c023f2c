#include "nhlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhlab/errors.hpp"
#include "nhlab/models.hpp"
#include "nhlab/network_io.hpp"
#include "nhlab/reduce.hpp"
#include "nhlab/scatter.hpp"
#include "nhlab/spectra.hpp"
#include "nhlab/susy.hpp"

namespace nhlab::cli {

namespace {

constexpr double kAgreement = 1e-8;
constexpr double kEigenResidual = 1e-10;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) { return format_real(x); }

std::string fmt(cplx z) {
  std::string im = format_real(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_real(z.real()) + im + "i";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << content;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) buf_ << ',';
      buf_ << fields[i];
    }
    buf_ << '\n';
  }
  std::string str() const { return buf_.str(); }

 private:
  std::ostringstream buf_;
};

void print_spectrum(std::ostream& out, const Spectrum& s) {
  out << "spectrum (" << s.dimension() << " eigenvalues, max residual " << fmt(s.max_residual())
      << "):\n";
  for (int i = 0; i < s.dimension(); ++i) {
    out << "  [" << i << "] " << fmt(s.eigenvalues(i)) << '\n';
  }
}

void print_coalescence(std::ostream& out, const CoalescenceReport& rep) {
  if (rep.groups.empty()) {
    out << "coalescence groups: none\n";
    return;
  }
  out << "coalescence groups:\n";
  for (const auto& g : rep.groups) {
    out << "  {";
    for (std::size_t i = 0; i < g.members.size(); ++i) out << (i ? ", " : "") << g.members[i];
    double worst = 0.0;
    for (int m : g.members) worst = std::max(worst, std::abs(rep.self_overlaps[static_cast<std::size_t>(m)]));
    out << "} at " << fmt(g.eigenvalue) << ", bilinear self-overlap " << fmt(worst) << '\n';
  }
}

// ---------------------------------------------------------------------------------
// scatter

struct ScatterArgs {
  std::string network;
  double k = 0.0;
  std::string csv;
};

int cmd_scatter(const ScatterArgs& a, std::ostream& out) {
  const auto system = load_network(a.network);
  const auto s = solve_scattering(system, a.k);
  out << "k = " << fmt(a.k) << "\nE = " << fmt(s.energy) << "\nr = " << fmt(s.r)
      << "\nt = " << fmt(s.t) << "\n|r|^2 = " << fmt(s.reflectance())
      << "\n|t|^2 = " << fmt(s.transmittance())
      << "\n|r|^2+|t|^2 = " << fmt(s.reflectance() + s.transmittance()) << '\n';
  for (Eigen::Index j = 0; j < s.h.size(); ++j) out << "h[" << j << "] = " << fmt(s.h(j)) << '\n';
  if (s.vanishing_joint) out << "warning: vanishing joint amplitude\n";

  if (!a.csv.empty()) {
    Csv csv({"quantity", "real", "imag"});
    csv.row({"k", fmt(a.k), "0"});
    csv.row({"E", fmt(s.energy), "0"});
    csv.row({"r", fmt(s.r.real()), fmt(s.r.imag())});
    csv.row({"t", fmt(s.t.real()), fmt(s.t.imag())});
    csv.row({"abs_r2", fmt(s.reflectance()), "0"});
    csv.row({"abs_t2", fmt(s.transmittance()), "0"});
    for (Eigen::Index j = 0; j < s.h.size(); ++j) {
      csv.row({"h" + std::to_string(j), fmt(s.h(j).real()), fmt(s.h(j).imag())});
    }
    write_file(a.csv, csv.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------------
// reduce

struct ReduceArgs {
  std::string network;
  double k = 0.0;
  double tol = 0.0;
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out) {
  const auto system = load_network(a.network);
  const auto s = solve_scattering(system, a.k);
  const auto h_eff = effective_hamiltonian(system, s);
  const auto rep = verify_reduction(h_eff, s, a.tol);
  const auto gl = gain_loss_sign(system, h_eff.potentials, s);
  out << "k = " << fmt(a.k) << "\nE = " << fmt(s.energy)
      << "\nU_A = " << fmt(h_eff.potentials.u_a) << "\nU_B = " << fmt(h_eff.potentials.u_b)
      << "\nIm(U_A)*Im(U_B) = " << fmt(gl.product)
      << "\nclosed form = " << fmt(gl.closed_form)
      << "\nreduction residual = " << fmt(rep.eigen_residual) << "\ntolerance = " << fmt(a.tol)
      << "\nmatched = " << (rep.matched ? "true" : "false") << '\n';
  return rep.matched ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------------
// ring

struct RingArgs {
  int N = 0;
  double g = 0.0;
  double J = 1.0;
  int n = 0;
  double eps = 0.0;
  double theta = 0.0;
};

int ring_pt_mode(const RingSpec& spec, std::ostream& out) {
  const auto system = build_ring_system(spec);
  const double k = spec.incident_k();
  const auto s = solve_scattering(system, k);
  const auto h_eff = effective_hamiltonian(system, s);
  const auto red = verify_reduction(h_eff, s);
  const double gamma = gamma_value(spec);
  const Matrix closed = pt_ring_hamiltonian(spec.N(), gamma, spec.J());
  const double matrix_gap = (h_eff.matrix - closed).cwiseAbs().maxCoeff();

  const auto analytic = analytic_spectrum(spec.N(), gamma, spec.J());
  const auto spectrum = eigendecompose(h_eff.matrix);
  std::vector<cplx> numeric(spectrum.eigenvalues.data(),
                            spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  std::vector<cplx> expected = analytic.multiset();
  const double gap = multiset_distance(numeric, expected);
  std::sort(expected.begin(), expected.end(), lex_less);

  out << "N = " << spec.N() << ", g = " << fmt(spec.g()) << ", J = " << fmt(spec.J()) << '\n'
      << "k = " << fmt(k) << "\nE = " << fmt(s.energy) << "\ngamma = " << fmt(gamma)
      << "\nr = " << fmt(s.r) << "\nU_A = " << fmt(h_eff.potentials.u_a)
      << "\nU_B = " << fmt(h_eff.potentials.u_b)
      << "\nreduction residual = " << fmt(red.eigen_residual)
      << "\nmax |H_eff - H_ring(gamma)| = " << fmt(matrix_gap) << '\n';
  out << "index,analytic_re,analytic_im,numeric_re,numeric_im\n";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    out << i << ',' << fmt(expected[i].real()) << ',' << fmt(expected[i].imag()) << ','
        << fmt(numeric[i].real()) << ',' << fmt(numeric[i].imag()) << '\n';
  }
  const auto pt = pt_report(h_eff.matrix, spectrum, ring_parity(spec.N()));
  out << "spectrum distance = " << fmt(gap) << "\nPT symmetric = "
      << (pt.is_pt_symmetric ? "true" : "false") << "\nphase = " << to_string(pt.phase) << '\n';
  print_coalescence(out, detect_coalescence(spectrum));
  const bool ok = gap <= kAgreement && matrix_gap <= kAgreement && red.matched;
  out << "agreement = " << (ok ? "true" : "false") << '\n';
  return ok ? kExitOk : kExitNumeric;
}

int ring_bare_mode(const RingSpec& spec, double theta, std::ostream& out) {
  const auto system = build_ring_system(spec);
  const auto s = solve_scattering(system, theta);
  const auto h_eff = effective_hamiltonian(system, s);
  const auto red = verify_reduction(h_eff, s);
  const auto closed = nonpt_potentials(spec.N(), theta, spec.J());
  const double pot_gap = std::max(std::abs(closed.u_a - h_eff.potentials.u_a),
                                  std::abs(closed.u_b - h_eff.potentials.u_b));
  const auto det = det_zero_report(spec.N(), theta, closed, spec.J());
  const auto spectrum = eigendecompose(h_eff.matrix);
  double nearest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    nearest = std::min(nearest, std::abs(spectrum.eigenvalues(i) - s.energy));
  }
  const auto pt = pt_report(h_eff.matrix, spectrum, ring_parity(spec.N()));

  out << "N = " << spec.N() << ", J = " << fmt(spec.J()) << "\ntheta = " << fmt(theta)
      << "\nE = " << fmt(s.energy) << "\nU_A = " << fmt(h_eff.potentials.u_a)
      << "\nU_B = " << fmt(h_eff.potentials.u_b) << "\nU_A closed form = " << fmt(closed.u_a)
      << "\nU_B closed form = " << fmt(closed.u_b) << "\npotential gap = " << fmt(pot_gap)
      << "\ndet residual (cofactor) = " << fmt(det.cofactor)
      << "\ndet residual (direct) = " << fmt(det.direct)
      << "\nreduction residual = " << fmt(red.eigen_residual)
      << "\ndistance of E to spectrum = " << fmt(nearest) << '\n';
  print_spectrum(out, spectrum);
  out << "PT symmetric = " << (pt.is_pt_symmetric ? "true" : "false")
      << "\nphase = " << to_string(pt.phase) << '\n';
  const bool ok = det.zero && pot_gap <= kAgreement && nearest <= kAgreement * spectrum.scale;
  out << "agreement = " << (ok ? "true" : "false") << '\n';
  return ok ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------------
// susy

struct SusyArgs {
  int N = 0;
  double kappa = 0.0;
  double bound = 0.0;
  double broken = 0.0;
  int resonant = 0;
};

int cmd_susy(int N, const KappaMode& mode, int resonant, std::ostream& out) {
  const auto ladder = build_ladder(N, mode);
  const cplx mu = mode.mu();
  const auto spectrum = eigendecompose(ladder.H3);
  std::vector<cplx> expected;
  if (N > 1) {
    const auto chain = eigendecompose(ladder.H1);
    for (Eigen::Index i = 0; i < chain.eigenvalues.size(); ++i) expected.push_back(chain.eigenvalues(i));
  }
  expected.push_back(mu);
  expected.push_back(-mu);
  std::vector<cplx> numeric(spectrum.eigenvalues.data(),
                            spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  const double gap = multiset_distance(numeric, expected);

  out << "N = " << N << "\nkappa = " << fmt(mode.kappa()) << "\nmu = " << fmt(mu)
      << "\nedge potential = " << fmt(ladder.H3(0, 0))
      << "\nH3 hermitian = " << (ladder.H3.isApprox(ladder.H3.adjoint(), 1e-14) ? "true" : "false")
      << '\n';
  print_spectrum(out, spectrum);
  out << "spectrum distance to chain + {-mu, +mu} = " << fmt(gap) << '\n';

  bool ok = gap <= kAgreement;
  out << "label,eigenvalue_re,eigenvalue_im,residual,bilinear_self_overlap\n";
  for (const auto& e : eigenfunctions(N, mode)) {
    out << e.label << ',' << fmt(e.eigenvalue.real()) << ',' << fmt(e.eigenvalue.imag()) << ','
        << fmt(e.residual) << ',' << fmt(std::abs(bilinear_self_overlap(e.normalized))) << '\n';
    ok = ok && e.residual <= kEigenResidual;
  }

  if (resonant > 0) {
    const auto rep = coalescence_at_resonance(N, resonant);
    out << "resonance k = " << fmt(rep.k) << (rep.triple ? " (triple coalescence)" : "") << '\n';
    for (std::size_t g = 0; g < rep.groups.size(); ++g) {
      out << "  group {";
      for (std::size_t i = 0; i < rep.groups[g].size(); ++i) {
        out << (i ? ", " : "") << "psi_" << rep.groups[g][i];
      }
      out << "} deviation " << fmt(rep.deviations[g]) << '\n';
    }
    for (std::size_t i = 0; i < rep.closed_forms.size(); ++i) {
      out << "  psi_" << rep.closed_forms[i].first << " bilinear self-overlap "
          << fmt(std::abs(rep.self_overlaps[i])) << '\n';
    }
    out << "  closed form vs construction = " << fmt(rep.construction_deviation) << '\n';
    ok = ok && rep.coalesced(kEigenResidual);
  }
  out << "agreement = " << (ok ? "true" : "false") << '\n';
  return ok ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string network;
  double k_min = 0.0;
  double k_max = 0.0;
  int steps = 0;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  if (!(a.k_min > 0.0 && a.k_min < a.k_max && a.k_max < std::numbers::pi)) {
    throw InputError("sweep range must satisfy 0 < k-min < k-max < pi");
  }
  if (a.steps < 2) throw InputError("--steps must be at least 2");
  const auto system = load_network(a.network);

  Csv csv({"k", "E", "re_r", "im_r", "re_t", "im_t", "abs_t2", "re_UA", "im_UA", "re_UB",
           "im_UB", "reduction_residual", "status"});
  int failed = 0;
  for (int i = 0; i < a.steps; ++i) {
    const double k = a.k_min + (a.k_max - a.k_min) * i / (a.steps - 1);
    const double energy = -2.0 * system.leads().J * std::cos(k);
    try {
      const auto s = solve_scattering(system, k);
      const auto h_eff = effective_hamiltonian(system, s);
      const auto rep = verify_reduction(h_eff, s);
      const auto& u = h_eff.potentials;
      csv.row({fmt(k), fmt(energy), fmt(s.r.real()), fmt(s.r.imag()), fmt(s.t.real()),
               fmt(s.t.imag()), fmt(s.transmittance()), fmt(u.u_a.real()), fmt(u.u_a.imag()),
               fmt(u.u_b.real()), fmt(u.u_b.imag()), fmt(rep.eigen_residual), "ok"});
    } catch (const Error& e) {
      ++failed;
      std::vector<std::string> row(13, "nan");
      row[0] = fmt(k);
      row[1] = fmt(energy);
      row[12] = std::string(error_name(e.code()));
      csv.row(row);
    }
  }
  write_file(a.out, csv.str());
  out << "wrote " << a.steps << " rows to " << a.out << " (" << failed << " failed)\n";
  return kExitOk;
}

}  // namespace

double default_tolerance() {
  if (const char* env = std::getenv("NHLAB_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
  }
  return kDefaultTolerance;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering on tight-binding networks and their non-Hermitian reductions",
               "nhlab"};
  app.require_subcommand(1);

  ScatterArgs scatter_args;
  auto* scatter = app.add_subcommand("scatter", "Solve the scattering problem at one k");
  scatter->add_option("--network", scatter_args.network, "Network file (JSON)")->required();
  scatter->add_option("--k", scatter_args.k, "Incident wavevector in (0, pi)")->required();
  scatter->add_option("--csv", scatter_args.csv, "Write the report as CSV");

  ReduceArgs reduce_args;
  reduce_args.tol = default_tolerance();
  auto* reduce = app.add_subcommand("reduce", "Build and verify the non-Hermitian reduction");
  reduce->add_option("--network", reduce_args.network, "Network file (JSON)")->required();
  reduce->add_option("--k", reduce_args.k, "Incident wavevector in (0, pi)")->required();
  reduce->add_option("--tol", reduce_args.tol, "Relative eigen-residual tolerance");

  RingArgs ring_args;
  auto* ring = app.add_subcommand("ring", "Exactly solvable 2N-site ring");
  ring->add_option("--N", ring_args.N, "Half the ring size")->required();
  auto* ring_g = ring->add_option("--g", ring_args.g, "Lead coupling (resonant mode)");
  ring->add_option("--J", ring_args.J, "Lead and ring hopping");
  auto* ring_n = ring->add_option("--n", ring_args.n, "Resonant mode index in [1, N-1]");
  auto* ring_critical = ring->add_flag("--critical", "Critical coupling g = sqrt(2) J");
  auto* ring_eps = ring->add_option("--eps", ring_args.eps, "Incident energy (critical mode)");
  auto* ring_bare = ring->add_flag("--bare", "Bare ring, g = J, no potentials");
  auto* ring_theta = ring->add_option("--theta", ring_args.theta, "Incident k (bare mode)");

  SusyArgs susy_args;
  auto* susy = app.add_subcommand("susy", "Intertwining-operator ladder");
  susy->add_option("--N", susy_args.N, "Chain parameter N (H3 has N+1 sites)")->required();
  auto* susy_kappa = susy->add_option("--kappa", susy_args.kappa, "Real kappa in (0, pi)");
  auto* susy_bound = susy->add_option("--bound", susy_args.bound, "kappa = -i omega");
  auto* susy_broken = susy->add_option("--broken", susy_args.broken, "kappa = pi/2 - i omega");
  auto* susy_resonant = susy->add_option("--resonant", susy_args.resonant, "kappa = n pi / N");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Sweep k and write plot-ready CSV");
  sweep->add_option("--network", sweep_args.network, "Network file (JSON)")->required();
  sweep->add_option("--k-min", sweep_args.k_min, "First k of the grid")->required();
  sweep->add_option("--k-max", sweep_args.k_max, "Last k of the grid")->required();
  sweep->add_option("--steps", sweep_args.steps, "Number of intervals (steps + 1 rows)")->required();
  sweep->add_option("--out", sweep_args.out, "Output CSV path")->required();

  std::vector<std::string> storage{"nhlab"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (scatter->parsed()) return cmd_scatter(scatter_args, out);
    if (reduce->parsed()) return cmd_reduce(reduce_args, out);
    if (ring->parsed()) {
      const int modes = static_cast<int>(ring_n->count() > 0) +
                        static_cast<int>(ring_critical->count() > 0) +
                        static_cast<int>(ring_bare->count() > 0);
      if (modes != 1) throw InputError("choose exactly one of --n, --critical, --bare");
      if (ring_n->count()) {
        if (!ring_g->count()) throw InputError("--n requires --g");
        if (ring_eps->count() || ring_theta->count()) throw InputError("--n excludes --eps/--theta");
        return ring_pt_mode(RingSpec::resonant(ring_args.N, ring_args.g, ring_args.n, ring_args.J), out);
      }
      if (ring_critical->count()) {
        if (!ring_eps->count()) throw InputError("--critical requires --eps");
        if (ring_theta->count()) throw InputError("--critical excludes --theta");
        if (ring_g->count()) err << "note: --g ignored, critical mode fixes g = sqrt(2) J\n";
        return ring_pt_mode(RingSpec::critical(ring_args.N, ring_args.eps, ring_args.J), out);
      }
      if (!ring_theta->count()) throw InputError("--bare requires --theta");
      if (ring_eps->count()) throw InputError("--bare excludes --eps");
      if (ring_g->count()) err << "note: --g ignored, bare mode fixes g = J\n";
      return ring_bare_mode(RingSpec::bare(ring_args.N, ring_args.theta, ring_args.J),
                            ring_args.theta, out);
    }
    if (susy->parsed()) {
      const int modes = static_cast<int>(susy_kappa->count() > 0) +
                        static_cast<int>(susy_bound->count() > 0) +
                        static_cast<int>(susy_broken->count() > 0) +
                        static_cast<int>(susy_resonant->count() > 0);
      if (modes != 1) {
        throw InputError("choose exactly one of --kappa, --bound, --broken, --resonant");
      }
      if (susy_args.N < 2) throw InputError("--N must be at least 2");
      if (susy_resonant->count()) {
        if (susy_args.resonant < 1 || susy_args.resonant > susy_args.N - 1) {
          throw InputError("--resonant must lie in [1, N-1]");
        }
        const auto mode = KappaMode::real(susy_args.resonant * std::numbers::pi / susy_args.N);
        return cmd_susy(susy_args.N, mode, susy_args.resonant, out);
      }
      if (susy_kappa->count()) return cmd_susy(susy_args.N, KappaMode::real(susy_args.kappa), 0, out);
      if (susy_bound->count()) return cmd_susy(susy_args.N, KappaMode::bound(susy_args.bound), 0, out);
      return cmd_susy(susy_args.N, KappaMode::broken(susy_args.broken), 0, out);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_args, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BandEdge) {
      err << "error: band edge (sin k = 0); choose 0 < k < pi\n";
      return kExitNumeric;
    }
    err << "error: " << e.what() << '\n';
    return is_numeric_failure(e.code()) ? kExitNumeric : kExitInput;
  }
  err << "error: no subcommand\n";
  return kExitInput;
}

}  // namespace nhlab::cli
