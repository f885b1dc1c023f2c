#pragma once

// Center networks and scattering systems.
//
// Sites are 0-based. The single-particle matrix of a network is
//   (H_c)_ij = -t_ij  on every edge {i, j},
//   (H_c)_ii =  V_i,
// with each unordered edge stored once.

#include <span>
#include <utility>
#include <vector>

#include "nhlab/linalg.hpp"

namespace nhlab {

struct Hopping {
  int i = 0;
  int j = 0;
  double amplitude = 0.0;  // t_ij, real, in units of the lead hopping J

  friend bool operator==(const Hopping&, const Hopping&) = default;
};

struct SitePotential {
  int site = 0;
  double value = 0.0;

  friend bool operator==(const SitePotential&, const SitePotential&) = default;
};

class TightBindingNetwork {
 public:
  int n_sites() const noexcept { return n_sites_; }
  const std::vector<Hopping>& hoppings() const noexcept { return hoppings_; }
  /// On-site potential of every site (zero where none was given).
  const std::vector<double>& potentials() const noexcept { return potentials_; }
  double potential(int site) const { return potentials_.at(static_cast<std::size_t>(site)); }

  /// Network with site s moved to perm[s]; perm must be a permutation of [0, n).
  TightBindingNetwork relabeled(std::span<const int> perm) const;

  friend bool operator==(const TightBindingNetwork&, const TightBindingNetwork&) = default;

 private:
  friend TightBindingNetwork build_network(int, std::vector<Hopping>,
                                           std::vector<SitePotential>);
  int n_sites_ = 0;
  std::vector<Hopping> hoppings_;
  std::vector<double> potentials_;
};

/// Validates and freezes a network.
/// Throws Error{InvalidSize, IndexOutOfRange, SelfLoop, DuplicateEdge,
/// DuplicatePotential, InvalidValue}.
TightBindingNetwork build_network(int n_sites, std::vector<Hopping> hoppings,
                                  std::vector<SitePotential> potentials = {});

/// Hermitian (real symmetric) single-particle matrix of the network.
Matrix center_matrix(const TightBindingNetwork& network);

/// Convenience: uniform ring of n sites with hopping t and no potentials.
TightBindingNetwork uniform_ring(int n_sites, double t = 1.0);

struct LeadConfig {
  int site_a = 0;
  int site_b = 0;
  double g_a = 1.0;
  double g_b = 1.0;
  double J = 1.0;

  friend bool operator==(const LeadConfig&, const LeadConfig&) = default;
};

class ScatteringSystem {
 public:
  const TightBindingNetwork& network() const noexcept { return network_; }
  const LeadConfig& leads() const noexcept { return leads_; }
  int n_sites() const noexcept { return network_.n_sites(); }

  friend bool operator==(const ScatteringSystem&, const ScatteringSystem&) = default;

 private:
  friend ScatteringSystem attach_leads(TightBindingNetwork, const LeadConfig&);
  TightBindingNetwork network_;
  LeadConfig leads_;
};

/// Attaches the two semi-infinite leads. A == B is rejected (SameJoint) unless the
/// center is a single site, where both leads necessarily meet on site 0.
/// Throws Error{IndexOutOfRange, SameJoint, InvalidValue}.
ScatteringSystem attach_leads(TightBindingNetwork network, const LeadConfig& leads);

/// Same system with the roles of the two leads exchanged (incidence from B).
ScatteringSystem swap_leads(const ScatteringSystem& system);

}  // namespace nhlab
