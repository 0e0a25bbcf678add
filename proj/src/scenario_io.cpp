// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace tierguard {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(std::vector<Diagnostic>& diags, bool lenient) : diags_(diags), lenient_(lenient) {}

  void error(const std::string& path, const std::string& msg) {
    diags_.push_back({Severity::error, "cli", path + ": " + msg, {}, {}});
  }

  /// Reports unknown keys; false if `j` is not an object.
  bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      diags_.push_back({lenient_ ? Severity::warning : Severity::error, "cli",
                        path + "." + key + ": unknown key", {}, {}});
    }
    return true;
  }

  const json* field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  void str(const json& obj, const char* key, const std::string& path, std::string& out) {
    if (const json* v = field(obj, key)) {
      if (v->is_string()) out = v->get<std::string>();
      else error(path + "." + key, "expected a string");
    }
  }

  template <typename Tag>
  void id(const json& obj, const char* key, const std::string& path, Id<Tag>& out) {
    std::string s = out.str();
    str(obj, key, path, s);
    out = Id<Tag>(std::move(s));
  }

  void number(const json& obj, const char* key, const std::string& path, double& out) {
    if (const json* v = field(obj, key)) {
      if (v->is_number()) out = v->get<double>();
      else error(path + "." + key, "expected a number");
    }
  }

  template <typename U>
  void unsigned_int(const json& obj, const char* key, const std::string& path, U& out) {
    if (const json* v = field(obj, key)) {
      if (v->is_number_unsigned() && v->get<std::uint64_t>() <= std::numeric_limits<U>::max()) {
        out = static_cast<U>(v->get<std::uint64_t>());
      } else {
        error(path + "." + key, "expected a non-negative integer");
      }
    }
  }

  void integer(const json& obj, const char* key, const std::string& path, int& out) {
    if (const json* v = field(obj, key)) {
      if (v->is_number_integer() && v->get<std::int64_t>() >= std::numeric_limits<int>::min() &&
          v->get<std::int64_t>() <= std::numeric_limits<int>::max()) {
        out = static_cast<int>(v->get<std::int64_t>());
      } else {
        error(path + "." + key, "expected an integer");
      }
    }
  }

  void boolean(const json& obj, const char* key, const std::string& path, bool& out) {
    if (const json* v = field(obj, key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else error(path + "." + key, "expected true or false");
    }
  }

  std::optional<LayerId> layer(const json& v, const std::string& path) {
    if (v.is_string()) {
      if (auto l = parse_layer(v.get<std::string>()); l && is_inspection_layer(*l)) return l;
    }
    error(path, "expected one of FW, META, VAULT, IPS, ANTIMAL");
    return std::nullopt;
  }

  std::vector<LayerId> layers(const json& obj, const char* key, const std::string& path) {
    std::vector<LayerId> out;
    const json* v = field(obj, key);
    if (!v) return out;
    if (!v->is_array()) {
      error(path + "." + key, "expected an array of layer names");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (auto l = layer((*v)[i], path + "." + key + "[" + std::to_string(i) + "]")) out.push_back(*l);
    }
    return out;
  }

  std::vector<std::string> strings(const json& obj, const char* key, const std::string& path) {
    std::vector<std::string> out;
    const json* v = field(obj, key);
    if (!v) return out;
    if (!v->is_array()) {
      error(path + "." + key, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if ((*v)[i].is_string()) out.push_back((*v)[i].get<std::string>());
      else error(path + "." + key + "[" + std::to_string(i) + "]", "expected a string");
    }
    return out;
  }

  /// Iterates an optional array field, calling fn(element, element_path).
  template <typename Fn>
  void each(const json& obj, const char* key, const std::string& path, Fn&& fn) {
    const json* v = field(obj, key);
    if (!v) return;
    if (!v->is_array()) {
      error(path + "." + key, "expected an array");
      return;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      fn((*v)[i], path + "." + key + "[" + std::to_string(i) + "]");
    }
  }

 private:
  std::vector<Diagnostic>& diags_;
  bool lenient_;
};

void read_meta(Reader& r, const json& j, Scenario& s) {
  if (!r.object(j, "meta", {"name", "seed", "duration", "bin_width"})) return;
  r.str(j, "name", "meta", s.name);
  r.unsigned_int(j, "seed", "meta", s.seed);
  r.number(j, "duration", "meta", s.duration);
  r.number(j, "bin_width", "meta", s.bin_width);
}

void read_lans(Reader& r, const json& root, Scenario& s) {
  r.each(root, "lans", "", [&](const json& j, const std::string& path) {
    LanDecl lan;
    if (!r.object(j, path, {"tenant", "clients", "vms_per_client", "arrival_rate", "payload_min",
                            "payload_max"})) {
      return;
    }
    r.id(j, "tenant", path, lan.tenant);
    r.unsigned_int(j, "clients", path, lan.clients);
    r.unsigned_int(j, "vms_per_client", path, lan.vms_per_client);
    r.number(j, "arrival_rate", path, lan.arrival_rate);
    r.unsigned_int(j, "payload_min", path, lan.payload_min);
    r.unsigned_int(j, "payload_max", path, lan.payload_max);
    s.lans.push_back(std::move(lan));
  });
}

void read_attackers(Reader& r, const json& root, Scenario& s) {
  r.each(root, "attackers", "", [&](const json& j, const std::string& path) {
    AttackerProfile a;
    if (!r.object(j, path, {"id", "archetype", "source_vm", "target", "intensity",
                            "credentials_granted", "impersonate"})) {
      return;
    }
    r.str(j, "id", path, a.id);
    std::string archetype;
    r.str(j, "archetype", path, archetype);
    if (auto parsed = parse_archetype(archetype)) {
      a.archetype = *parsed;
    } else {
      r.error(path + ".archetype",
              "expected one of external, masquerade, insider_exploit, malware_injector, zero_day");
    }
    if (const json* src = r.field(j, "source_vm")) {
      const std::string sp = path + ".source_vm";
      if (r.object(*src, sp, {"vm_id", "tenant", "tier"})) {
        r.id(*src, "vm_id", sp, a.source_vm.vm_id);
        r.id(*src, "tenant", sp, a.source_vm.tenant_id);
        r.integer(*src, "tier", sp, a.source_vm.tier);
      }
    } else {
      r.error(path, "source_vm is required");
    }
    r.id(j, "target", path, a.target);
    if (const json* v = r.field(j, "intensity"); v && !v->is_null()) {
      double x = 0.0;
      r.number(j, "intensity", path, x);
      a.intensity = x;
    }
    r.boolean(j, "credentials_granted", path, a.credentials_granted);
    if (const json* v = r.field(j, "impersonate"); v && !v->is_null()) {
      TenantId t;
      r.id(j, "impersonate", path, t);
      a.impersonate = t;
    }
    s.attackers.push_back(std::move(a));
  });
}

void read_hierarchy(Reader& r, const json& j, Scenario& s) {
  const std::string path = "hierarchy";
  if (!r.object(j, path, {"tiers", "controls", "links", "auto_links", "application_vm"})) return;
  HierarchyDecl h;
  r.each(j, "tiers", path, [&](const json& t, const std::string& tp) {
    if (!r.object(t, tp, {"tier", "vms"})) return;
    TierDecl decl;
    r.integer(t, "tier", tp, decl.tier);
    for (auto& vm : r.strings(t, "vms", tp)) decl.vms.emplace_back(std::move(vm));
    h.tiers.push_back(std::move(decl));
  });
  r.each(j, "controls", path, [&](const json& c, const std::string& cp) {
    if (!r.object(c, cp, {"id", "from_tier", "to_tier", "gate_layers"})) return;
    ControlNode node;
    r.str(c, "id", cp, node.control_id);
    r.integer(c, "from_tier", cp, node.from_tier);
    r.integer(c, "to_tier", cp, node.to_tier);
    node.gate_layers = r.layers(c, "gate_layers", cp);
    h.controls.push_back(std::move(node));
  });
  r.each(j, "links", path, [&](const json& l, const std::string& lp) {
    if (!r.object(l, lp, {"kind", "from", "to", "via"})) return;
    Link link;
    std::string kind;
    r.str(l, "kind", lp, kind);
    if (kind == "virtual") link.kind = LinkKind::virtual_link;
    else if (kind == "real") link.kind = LinkKind::real;
    else r.error(lp + ".kind", "expected virtual or real");
    r.id(l, "from", lp, link.from);
    r.id(l, "to", lp, link.to);
    if (const json* v = r.field(l, "via"); v && !v->is_null()) {
      std::string via;
      r.str(l, "via", lp, via);
      link.via_control = via;
    }
    h.links.push_back(std::move(link));
  });
  r.boolean(j, "auto_links", path, h.auto_links);
  r.id(j, "application_vm", path, h.application_vm);
  s.hierarchy = std::move(h);
}

void read_repositories(Reader& r, const json& j, Scenario& s) {
  const std::string path = "repositories";
  if (!r.object(j, path, {"profiles", "ips_signatures", "antimalware_signatures", "firewall", "vault"})) {
    return;
  }
  if (const json* profiles = r.field(j, "profiles")) {
    if (!profiles->is_object()) {
      r.error(path + ".profiles", "expected an object of tenant profiles");
    } else {
      for (const auto& [tenant, fields] : profiles->items()) {
        const std::string pp = path + ".profiles." + tenant;
        if (!fields.is_object()) {
          r.error(pp, "expected an object of field names to values");
          continue;
        }
        Profile profile;
        for (const auto& [name, value] : fields.items()) {
          if (value.is_string()) profile[name] = value.get<std::string>();
          else r.error(pp + "." + name, "expected a string");
        }
        s.repositories.profiles[TenantId(tenant)] = std::move(profile);
      }
    }
  }
  s.repositories.ips_signatures = r.strings(j, "ips_signatures", path);
  s.repositories.antimalware_signatures = r.strings(j, "antimalware_signatures", path);
  auto credentials = [&](const char* key, const char* secret_key, std::vector<CredentialEntry>& out) {
    r.each(j, key, path, [&](const json& e, const std::string& ep) {
      if (!r.object(e, ep, {"vm_id", secret_key})) return;
      CredentialEntry c;
      r.id(e, "vm_id", ep, c.vm_id);
      r.str(e, secret_key, ep, c.secret);
      out.push_back(std::move(c));
    });
  };
  credentials("firewall", "token", s.repositories.firewall);
  credentials("vault", "key", s.repositories.vault);
}

void read_latencies(Reader& r, const json& j, Scenario& s) {
  if (!r.object(j, "latencies", {"FW", "META", "VAULT", "IPS", "ANTIMAL"})) return;
  for (auto l : kInspectionLayers) {
    std::string key(to_string(l));
    r.number(j, key.c_str(), "latencies", s.latencies.seconds[layer_index(l)]);
  }
}

void read_parameters(Reader& r, const json& j, Scenario& s) {
  const std::string path = "parameters";
  if (!r.object(j, path, {"challenge_size", "anomaly_threshold", "anomaly_escalation", "queueing",
                          "layer_evaluation", "disabled_layers"})) {
    return;
  }
  auto& p = s.parameters;
  r.unsigned_int(j, "challenge_size", path, p.challenge_size);
  r.unsigned_int(j, "anomaly_threshold", path, p.anomaly_threshold);
  if (const json* v = r.field(j, "anomaly_escalation"); v && !v->is_null()) {
    std::uint32_t n = 0;
    r.unsigned_int(j, "anomaly_escalation", path, n);
    p.anomaly_escalation = n;
  }
  std::string queueing = p.queueing == Queueing::single_server ? "single_server" : "infinite_server";
  r.str(j, "queueing", path, queueing);
  if (queueing == "infinite_server") p.queueing = Queueing::infinite_server;
  else if (queueing == "single_server") p.queueing = Queueing::single_server;
  else r.error(path + ".queueing", "expected infinite_server or single_server");
  std::string eval = p.layer_evaluation == LayerEvaluation::concurrent ? "concurrent" : "sequential";
  r.str(j, "layer_evaluation", path, eval);
  if (eval == "sequential") p.layer_evaluation = LayerEvaluation::sequential;
  else if (eval == "concurrent") p.layer_evaluation = LayerEvaluation::concurrent;
  else r.error(path + ".layer_evaluation", "expected sequential or concurrent");
  p.disabled_layers = r.layers(j, "disabled_layers", path);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ParseResult parse_scenario(std::string_view text, bool lenient) {
  ParseResult result;
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the 1-based byte index just past the offending token.
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    result.diagnostics.push_back({Severity::error, "cli", "syntax error: " + std::string(e.what()), line, col});
    return result;
  }

  Reader r(result.diagnostics, lenient);
  Scenario s;
  if (!r.object(root, "<root>", {"meta", "lans", "attackers", "hierarchy", "repositories",
                                 "latencies", "parameters"})) {
    return result;
  }
  if (const json* v = r.field(root, "meta")) read_meta(r, *v, s);
  else r.error("<root>", "meta section is required");
  // Parameters first: other sections do not depend on them, but keeping the
  // order fixed keeps diagnostics in a stable order.
  if (const json* v = r.field(root, "parameters")) read_parameters(r, *v, s);
  read_lans(r, root, s);
  read_attackers(r, root, s);
  if (const json* v = r.field(root, "hierarchy")) read_hierarchy(r, *v, s);
  if (const json* v = r.field(root, "repositories")) read_repositories(r, *v, s);
  if (const json* v = r.field(root, "latencies")) read_latencies(r, *v, s);

  if (!has_errors(result.diagnostics)) result.scenario = std::move(s);
  return result;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["meta"] = {{"name", s.name}, {"seed", s.seed}, {"duration", s.duration}, {"bin_width", s.bin_width}};

  j["lans"] = json::array();
  for (const auto& lan : s.lans) {
    j["lans"].push_back({{"tenant", lan.tenant.str()},
                         {"clients", lan.clients},
                         {"vms_per_client", lan.vms_per_client},
                         {"arrival_rate", lan.arrival_rate},
                         {"payload_min", lan.payload_min},
                         {"payload_max", lan.payload_max}});
  }

  j["attackers"] = json::array();
  for (const auto& a : s.attackers) {
    json e = {{"id", a.id},
              {"archetype", std::string(to_string(a.archetype))},
              {"source_vm",
               {{"vm_id", a.source_vm.vm_id.str()},
                {"tenant", a.source_vm.tenant_id.str()},
                {"tier", a.source_vm.tier}}},
              {"target", a.target.str()},
              {"credentials_granted", a.credentials_granted}};
    if (a.intensity) e["intensity"] = *a.intensity;
    if (a.impersonate) e["impersonate"] = a.impersonate->str();
    j["attackers"].push_back(std::move(e));
  }

  auto layer_names = [](const std::vector<LayerId>& layers) {
    json arr = json::array();
    for (auto l : layers) arr.push_back(std::string(to_string(l)));
    return arr;
  };

  json h;
  h["tiers"] = json::array();
  for (const auto& t : s.hierarchy.tiers) {
    json vms = json::array();
    for (const auto& vm : t.vms) vms.push_back(vm.str());
    h["tiers"].push_back({{"tier", t.tier}, {"vms", vms}});
  }
  h["controls"] = json::array();
  for (const auto& c : s.hierarchy.controls) {
    h["controls"].push_back({{"id", c.control_id},
                             {"from_tier", c.from_tier},
                             {"to_tier", c.to_tier},
                             {"gate_layers", layer_names(c.gate_layers)}});
  }
  h["links"] = json::array();
  for (const auto& l : s.hierarchy.links) {
    json e = {{"kind", l.kind == LinkKind::real ? "real" : "virtual"},
              {"from", l.from.str()},
              {"to", l.to.str()}};
    if (l.via_control) e["via"] = *l.via_control;
    h["links"].push_back(std::move(e));
  }
  h["auto_links"] = s.hierarchy.auto_links;
  h["application_vm"] = s.hierarchy.application_vm.str();
  j["hierarchy"] = std::move(h);

  json repos;
  repos["profiles"] = json::object();
  for (const auto& [tenant, profile] : s.repositories.profiles) {
    repos["profiles"][tenant.str()] = profile;
  }
  repos["ips_signatures"] = s.repositories.ips_signatures;
  repos["antimalware_signatures"] = s.repositories.antimalware_signatures;
  repos["firewall"] = json::array();
  for (const auto& e : s.repositories.firewall) {
    repos["firewall"].push_back({{"vm_id", e.vm_id.str()}, {"token", e.secret}});
  }
  repos["vault"] = json::array();
  for (const auto& e : s.repositories.vault) {
    repos["vault"].push_back({{"vm_id", e.vm_id.str()}, {"key", e.secret}});
  }
  j["repositories"] = std::move(repos);

  json lat;
  for (auto l : kInspectionLayers) lat[std::string(to_string(l))] = s.latencies.seconds[layer_index(l)];
  j["latencies"] = std::move(lat);

  const auto& p = s.parameters;
  j["parameters"] = {
      {"challenge_size", p.challenge_size},
      {"anomaly_threshold", p.anomaly_threshold},
      {"anomaly_escalation", p.anomaly_escalation ? json(*p.anomaly_escalation) : json(nullptr)},
      {"queueing", p.queueing == Queueing::single_server ? "single_server" : "infinite_server"},
      {"layer_evaluation", p.layer_evaluation == LayerEvaluation::concurrent ? "concurrent" : "sequential"},
      {"disabled_layers", layer_names(p.disabled_layers)}};
  return j;
}

std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Diagnostic> validate_file(const std::filesystem::path& path, bool lenient) {
  auto text = read_file(path);
  if (!text) {
    return {{Severity::error, "io", "cannot read " + path.string(), {}, {}}};
  }
  ParseResult parsed = parse_scenario(*text, lenient);
  if (!parsed.scenario) return parsed.diagnostics;
  auto more = validate_scenario(*parsed.scenario);
  parsed.diagnostics.insert(parsed.diagnostics.end(), more.begin(), more.end());
  return parsed.diagnostics;
}

}  // namespace tierguard
