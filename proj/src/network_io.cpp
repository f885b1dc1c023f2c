#include "nhlab/network_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nhlab/errors.hpp"

namespace nhlab {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::InvalidValue, "network file: " + what);
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) malformed(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) malformed("unknown key \"" + item.key() + "\" in " + where);
  }
}

const json& required(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed("missing key \"" + std::string(key) + "\" in " + where);
  return *it;
}

int as_index(const json& v, const std::string& what) {
  if (!v.is_number_integer()) malformed(what + " must be an integer");
  const auto x = v.get<long long>();
  if (x < -(1LL << 30) || x > (1LL << 30)) malformed(what + " out of range");
  return static_cast<int>(x);
}

double as_real(const json& v, const std::string& what) {
  if (!v.is_number()) malformed(what + " must be a real number");
  return v.get<double>();
}

}  // namespace

ScatteringSystem parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(std::string("not valid JSON (") + e.what() + ")");
  }
  only_keys(doc, {"sites", "hoppings", "potentials", "leads"}, "document");

  const int sites = as_index(required(doc, "sites", "document"), "\"sites\"");

  std::vector<Hopping> hops;
  if (auto it = doc.find("hoppings"); it != doc.end()) {
    if (!it->is_array()) malformed("\"hoppings\" must be an array");
    for (const auto& h : *it) {
      if (!h.is_array() || h.size() != 3) malformed("each hopping must be [i, j, t]");
      hops.push_back({as_index(h[0], "hopping site"), as_index(h[1], "hopping site"),
                      as_real(h[2], "hopping amplitude")});
    }
  }

  std::vector<SitePotential> pots;
  if (auto it = doc.find("potentials"); it != doc.end()) {
    if (!it->is_array()) malformed("\"potentials\" must be an array");
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2) malformed("each potential must be [i, V]");
      pots.push_back({as_index(p[0], "potential site"), as_real(p[1], "potential")});
    }
  }

  const json& leads = required(doc, "leads", "document");
  only_keys(leads, {"A", "B", "J"}, "\"leads\"");
  const json& a = required(leads, "A", "\"leads\"");
  const json& b = required(leads, "B", "\"leads\"");
  only_keys(a, {"site", "g"}, "\"leads.A\"");
  only_keys(b, {"site", "g"}, "\"leads.B\"");
  LeadConfig cfg;
  cfg.site_a = as_index(required(a, "site", "\"leads.A\""), "lead A site");
  cfg.g_a = as_real(required(a, "g", "\"leads.A\""), "lead A coupling");
  cfg.site_b = as_index(required(b, "site", "\"leads.B\""), "lead B site");
  cfg.g_b = as_real(required(b, "g", "\"leads.B\""), "lead B coupling");
  if (auto it = leads.find("J"); it != leads.end()) cfg.J = as_real(*it, "lead hopping J");

  return attach_leads(build_network(sites, std::move(hops), std::move(pots)), cfg);
}

ScatteringSystem load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string serialize_network(const ScatteringSystem& system) {
  const auto& net = system.network();
  json doc;
  doc["sites"] = net.n_sites();
  doc["hoppings"] = json::array();
  for (const auto& h : net.hoppings()) doc["hoppings"].push_back({h.i, h.j, h.amplitude});
  doc["potentials"] = json::array();
  for (int s = 0; s < net.n_sites(); ++s) {
    if (net.potential(s) != 0.0) doc["potentials"].push_back({s, net.potential(s)});
  }
  const auto& l = system.leads();
  doc["leads"] = {{"A", {{"site", l.site_a}, {"g", l.g_a}}},
                  {"B", {{"site", l.site_b}, {"g", l.g_b}}},
                  {"J", l.J}};
  return doc.dump(2) + "\n";
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace nhlab
