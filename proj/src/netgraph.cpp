#include "nhlab/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "nhlab/errors.hpp"

namespace nhlab {

namespace {

void check_index(int site, int n_sites, const char* what) {
  if (site < 0 || site >= n_sites) {
    throw Error(ErrorCode::IndexOutOfRange, std::string(what) + " " + std::to_string(site) +
                                                " outside [0, " + std::to_string(n_sites) + ")");
  }
}

void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidValue, std::string(what) + " must be finite");
  }
}

}  // namespace

TightBindingNetwork build_network(int n_sites, std::vector<Hopping> hoppings,
                                  std::vector<SitePotential> potentials) {
  if (n_sites < 1) {
    throw Error(ErrorCode::InvalidSize, "network needs at least one site");
  }
  std::set<std::pair<int, int>> edges;
  for (const auto& h : hoppings) {
    check_index(h.i, n_sites, "hopping site");
    check_index(h.j, n_sites, "hopping site");
    check_finite(h.amplitude, "hopping amplitude");
    if (h.i == h.j) {
      throw Error(ErrorCode::SelfLoop, "hopping " + std::to_string(h.i) + "-" + std::to_string(h.j));
    }
    if (!edges.emplace(std::min(h.i, h.j), std::max(h.i, h.j)).second) {
      throw Error(ErrorCode::DuplicateEdge,
                  "edge {" + std::to_string(h.i) + ", " + std::to_string(h.j) + "} given twice");
    }
  }

  TightBindingNetwork net;
  net.n_sites_ = n_sites;
  net.potentials_.assign(static_cast<std::size_t>(n_sites), 0.0);
  std::vector<bool> seen(static_cast<std::size_t>(n_sites), false);
  for (const auto& p : potentials) {
    check_index(p.site, n_sites, "potential site");
    check_finite(p.value, "potential");
    auto s = static_cast<std::size_t>(p.site);
    if (seen[s]) {
      throw Error(ErrorCode::DuplicatePotential, "site " + std::to_string(p.site));
    }
    seen[s] = true;
    net.potentials_[s] = p.value;
  }
  net.hoppings_ = std::move(hoppings);
  return net;
}

Matrix center_matrix(const TightBindingNetwork& network) {
  const int n = network.n_sites();
  Matrix m = Matrix::Zero(n, n);
  for (const auto& h : network.hoppings()) {
    m(h.i, h.j) = -h.amplitude;
    m(h.j, h.i) = -h.amplitude;
  }
  for (int s = 0; s < n; ++s) {
    m(s, s) = network.potential(s);
  }
  return m;
}

TightBindingNetwork TightBindingNetwork::relabeled(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != n_sites_) {
    throw Error(ErrorCode::DimensionMismatch, "permutation length differs from site count");
  }
  std::vector<bool> hit(perm.size(), false);
  for (int p : perm) {
    check_index(p, n_sites_, "permutation image");
    if (hit[static_cast<std::size_t>(p)]) {
      throw Error(ErrorCode::InvalidValue, "relabeling is not a permutation");
    }
    hit[static_cast<std::size_t>(p)] = true;
  }
  std::vector<Hopping> hops;
  hops.reserve(hoppings_.size());
  for (const auto& h : hoppings_) {
    hops.push_back({perm[static_cast<std::size_t>(h.i)], perm[static_cast<std::size_t>(h.j)], h.amplitude});
  }
  std::vector<SitePotential> pots;
  for (int s = 0; s < n_sites_; ++s) {
    pots.push_back({perm[static_cast<std::size_t>(s)], potentials_[static_cast<std::size_t>(s)]});
  }
  return build_network(n_sites_, std::move(hops), std::move(pots));
}

TightBindingNetwork uniform_ring(int n_sites, double t) {
  std::vector<Hopping> hops;
  if (n_sites == 2) {
    hops.push_back({0, 1, t});
  } else {
    for (int s = 0; s < n_sites; ++s) {
      hops.push_back({s, (s + 1) % n_sites, t});
    }
  }
  return build_network(n_sites, std::move(hops));
}

ScatteringSystem attach_leads(TightBindingNetwork network, const LeadConfig& leads) {
  const int n = network.n_sites();
  check_index(leads.site_a, n, "lead site A");
  check_index(leads.site_b, n, "lead site B");
  if (leads.site_a == leads.site_b && n > 1) {
    throw Error(ErrorCode::SameJoint, "both leads on site " + std::to_string(leads.site_a));
  }
  if (!(leads.g_a > 0.0) || !(leads.g_b > 0.0) || !std::isfinite(leads.g_a) ||
      !std::isfinite(leads.g_b)) {
    throw Error(ErrorCode::InvalidValue, "lead couplings must be positive and finite");
  }
  if (!(leads.J > 0.0) || !std::isfinite(leads.J)) {
    throw Error(ErrorCode::InvalidValue, "lead hopping J must be positive and finite");
  }
  ScatteringSystem sys;
  sys.network_ = std::move(network);
  sys.leads_ = leads;
  return sys;
}

ScatteringSystem swap_leads(const ScatteringSystem& system) {
  LeadConfig l = system.leads();
  std::swap(l.site_a, l.site_b);
  std::swap(l.g_a, l.g_b);
  return attach_leads(system.network(), l);
}

}  // namespace nhlab
