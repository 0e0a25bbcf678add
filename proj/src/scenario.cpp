// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tierguard {

std::string Diagnostic::to_string() const {
  std::string s = severity == Severity::error ? "error" : "warning";
  if (line) {
    s += " at line " + std::to_string(*line);
    if (column) s += ", column " + std::to_string(*column);
  }
  s += " [" + module + "]: " + message;
  return s;
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& diagnostics) {
  std::string s;
  for (const auto& d : diagnostics) {
    if (!s.empty()) s += "; ";
    s += d.to_string();
  }
  return s;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : Error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::int64_t to_ns(double seconds) { return std::llround(seconds * 1e9); }
double to_seconds(std::int64_t ns) { return static_cast<double>(ns) / 1e9; }

PipelineConfig pipeline_config(const Scenario& s) {
  PipelineConfig c;
  for (std::size_t i = 0; i < kInspectionLayerCount; ++i) {
    c.layers[i].latency_ns = to_ns(s.latencies.seconds[i]);
  }
  for (auto l : s.parameters.disabled_layers) {
    if (is_inspection_layer(l)) c.layers[layer_index(l)].enabled = false;
  }
  c.anomaly_threshold = s.parameters.anomaly_threshold;
  c.anomaly_escalation = s.parameters.anomaly_escalation;
  c.evaluation = s.parameters.layer_evaluation;
  return c;
}

std::optional<TenantId> impersonation_target(const Scenario& s, const AttackerProfile& a) {
  if (a.impersonate) return a.impersonate;
  if (!s.lans.empty()) return s.lans.front().tenant;
  return std::nullopt;
}

double attacker_intensity(const Scenario& s, const AttackerProfile& a) {
  if (a.intensity) return *a.intensity;
  if (s.lans.empty()) return 0.0;
  const auto& lan = s.lans.front();
  return static_cast<double>(lan.clients) * lan.arrival_rate;
}

std::vector<Diagnostic> validate_scenario(const Scenario& s) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string module, std::string msg) {
    out.push_back({Severity::error, std::move(module), std::move(msg), {}, {}});
  };
  auto warn = [&](std::string module, std::string msg) {
    out.push_back({Severity::warning, std::move(module), std::move(msg), {}, {}});
  };
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };

  // meta
  if (s.name.empty()) error("cli", "meta.name must not be empty");
  if (!finite_nonneg(s.duration)) error("sim-engine", "duration must be >= 0");
  if (!(std::isfinite(s.bin_width) && s.bin_width > 0.0)) error("sim-engine", "bin_width must be > 0");
  if (s.lans.empty() && s.attackers.empty()) warn("sim-engine", "scenario generates no sessions");

  const auto& p = s.parameters;
  if (p.challenge_size < 1) error("repositories", "challenge_size must be >= 1");
  if (p.anomaly_escalation && *p.anomaly_escalation < 1) {
    error("pipeline", "anomaly_escalation must be >= 1");
  }
  {
    std::set<LayerId> seen;
    for (auto l : p.disabled_layers) {
      if (!is_inspection_layer(l)) error("pipeline", "APP cannot be disabled");
      if (!seen.insert(l).second) error("pipeline", "layer disabled twice");
    }
  }
  for (std::size_t i = 0; i < kInspectionLayerCount; ++i) {
    if (!finite_nonneg(s.latencies.seconds[i])) {
      error("sim-engine",
            "latency of " + std::string(to_string(kInspectionLayers[i])) + " must be >= 0");
    }
  }

  // lans
  std::set<TenantId> lan_tenants;
  for (const auto& lan : s.lans) {
    if (lan.tenant.empty()) {
      error("sim-engine", "LAN without tenant id");
      continue;
    }
    if (!lan_tenants.insert(lan.tenant).second) {
      error("sim-engine", "tenant " + lan.tenant.str() + " declared by two LANs");
    }
    if (lan.clients == 0) warn("sim-engine", "LAN " + lan.tenant.str() + " has no clients");
    if (lan.vms_per_client < 1) error("sim-engine", "LAN " + lan.tenant.str() + " needs >= 1 VM per client");
    if (!(std::isfinite(lan.arrival_rate) && lan.arrival_rate > 0.0)) {
      error("sim-engine", "LAN " + lan.tenant.str() + " arrival_rate must be > 0");
    }
    if (lan.payload_min > lan.payload_max) {
      error("sim-engine", "LAN " + lan.tenant.str() + " payload_min exceeds payload_max");
    } else if (lan.payload_max > p.anomaly_threshold) {
      warn("sim-engine", "LAN " + lan.tenant.str() +
                             " payloads can exceed the anomaly threshold and raise reports");
    }
  }

  // repositories
  const auto& r = s.repositories;
  for (const auto& t : lan_tenants) {
    if (!r.profiles.contains(t)) error("repositories", "tenant " + t.str() + " referenced but not profiled");
  }
  for (const auto& [tenant, profile] : r.profiles) {
    if (profile.size() < p.challenge_size) {
      error("repositories", "profile of " + tenant.str() + " has fewer fields than challenge_size");
    }
  }
  std::set<std::string> ips(r.ips_signatures.begin(), r.ips_signatures.end());
  std::set<std::string> am(r.antimalware_signatures.begin(), r.antimalware_signatures.end());
  auto check_sigs = [&](const std::vector<std::string>& sigs, const std::set<std::string>& uniq,
                        const char* name) {
    if (uniq.size() != sigs.size()) error("repositories", std::string("duplicate ") + name + " signature");
    for (const auto& sig : sigs) {
      if (sig.empty()) error("repositories", std::string("empty ") + name + " signature");
    }
  };
  check_sigs(r.ips_signatures, ips, "IPS");
  check_sigs(r.antimalware_signatures, am, "anti-malware");
  for (const auto& sig : am) {
    if (ips.contains(sig)) error("repositories", "signature " + sig + " is in both IPS and anti-malware stores");
  }
  {
    std::set<VmId> fw;
    for (const auto& e : r.firewall) {
      if (e.vm_id.empty()) error("repositories", "firewall entry without vm_id");
      if (!fw.insert(e.vm_id).second) error("repositories", "duplicate firewall entry for " + e.vm_id.str());
    }
    std::set<VmId> vault;
    for (const auto& e : r.vault) {
      if (e.vm_id.empty()) error("repositories", "vault entry without vm_id");
      if (!vault.insert(e.vm_id).second) error("repositories", "duplicate vault entry for " + e.vm_id.str());
    }
  }

  // hierarchy
  std::optional<TierGraph> graph;
  try {
    graph = TierGraph::build(s.hierarchy);
  } catch (const TopologyError& e) {
    error("topology", e.what());
  }
  if (graph) {
    if (s.hierarchy.application_vm.empty()) {
      error("topology", "hierarchy.application_vm is required");
    } else {
      try {
        graph->controls_between_tiers(1, graph->tier(s.hierarchy.application_vm));
      } catch (const TopologyError& e) {
        error("topology", std::string("application unreachable from tier 1: ") + e.what());
      }
    }
  }

  // attackers
  std::set<std::string> attacker_ids;
  std::set<VmId> attacker_vms;
  for (const auto& a : s.attackers) {
    const std::string who = "attacker " + (a.id.empty() ? std::string("<unnamed>") : a.id);
    if (a.id.empty()) error("adversary", "attacker without id");
    else if (!attacker_ids.insert(a.id).second) error("adversary", who + " declared twice");
    if (a.source_vm.vm_id.empty() || a.source_vm.tenant_id.empty()) {
      error("adversary", who + " needs source_vm.vm_id and source_vm.tenant_id");
      continue;
    }
    if (a.source_vm.tier < 1) error("adversary", who + " source tier must be >= 1");
    if (!attacker_vms.insert(a.source_vm.vm_id).second) {
      error("adversary", who + " reuses source vm " + a.source_vm.vm_id.str());
    }
    if (lan_tenants.contains(a.source_vm.tenant_id)) {
      error("adversary", who + " shares tenant id with a tenant LAN");
    }
    for (const auto& lan : s.lans) {
      if (a.source_vm.vm_id.str().rfind(lan.tenant.str() + "/", 0) == 0) {
        error("adversary", who + " source vm collides with LAN " + lan.tenant.str());
      }
    }
    if (graph) {
      if (graph->contains(a.source_vm.vm_id) && graph->tier(a.source_vm.vm_id) != a.source_vm.tier) {
        error("adversary", who + " source tier disagrees with the hierarchy");
      }
      if (!graph->contains(a.target)) {
        error("adversary", who + " targets unknown vm " + a.target.str());
      }
    }
    if (a.intensity && !(std::isfinite(*a.intensity) && *a.intensity > 0.0)) {
      error("adversary", who + " intensity must be > 0");
    }
    if (!a.intensity && s.lans.empty()) {
      error("adversary", who + " needs an explicit intensity when no LAN is declared");
    }
    if (a.archetype != Archetype::external && !a.credentials_granted) {
      error("adversary", who + " (" + std::string(to_string(a.archetype)) +
                             ") requires credentials_granted");
    }
    if (a.archetype == Archetype::masquerade) {
      auto victim = impersonation_target(s, a);
      if (!victim) error("adversary", who + " has no tenant to impersonate");
      else if (!r.profiles.contains(*victim)) {
        error("adversary", who + " impersonates unprofiled tenant " + victim->str());
      } else if (*victim == a.source_vm.tenant_id) {
        error("adversary", who + " impersonates its own tenant");
      }
    }
    if (a.archetype == Archetype::insider_exploit && r.ips_signatures.empty()) {
      error("adversary", who + " needs at least one IPS signature");
    }
    if (a.archetype == Archetype::malware_injector) {
      bool usable = false;
      for (const auto& m : am) {
        bool trips = std::any_of(ips.begin(), ips.end(),
                                 [&](const std::string& i) { return m.find(i) != std::string::npos; });
        usable = usable || !trips;
      }
      if (!usable) error("adversary", who + " needs an anti-malware signature unknown to IPS");
    }
  }
  return out;
}

Scenario baseline_scenario() {
  Scenario s;
  s.name = "baseline";
  s.seed = 2018;
  s.duration = 60.0;
  s.bin_width = 1.0;
  const char* tenants[] = {"tenant-a", "tenant-b", "tenant-c", "tenant-d"};
  const char* depts[] = {"finance", "logistics", "research", "retail"};
  for (int i = 0; i < 4; ++i) {
    TenantId t(tenants[i]);
    s.lans.push_back({t, 500, 3, 0.1, 64, 1024});
    s.repositories.profiles[t] = {
        {"organisation", std::string("org-") + tenants[i]},
        {"department", depts[i]},
        {"contact_name", std::string("contact-") + std::to_string(i + 1)},
        {"postcode", "NG" + std::to_string(10 + i) + " " + std::to_string(4 + i) + "AB"},
        {"account_ref", "ACC-" + std::to_string(70431 + 17 * i)},
    };
  }
  s.repositories.ips_signatures = {"EXPLOIT-SQLI-0001", "EXPLOIT-XSS-0002", "EXPLOIT-RCE-0003"};
  s.repositories.antimalware_signatures = {"TROJAN-ZEUS-1001", "TROJAN-EMOTET-1002"};

  auto attacker = [](std::string id, Archetype a, std::string vm, std::string tenant) {
    AttackerProfile p;
    p.id = std::move(id);
    p.archetype = a;
    p.source_vm = {VmId(std::move(vm)), TenantId(std::move(tenant)), 1};
    p.target = VmId("VM7");
    p.credentials_granted = true;
    return p;
  };
  s.attackers = {
      attacker("mallory-1", Archetype::masquerade, "VM2", "attacker-1"),
      attacker("mallory-2", Archetype::insider_exploit, "VM3", "attacker-2"),
      attacker("mallory-3", Archetype::malware_injector, "attacker-3/vm0", "attacker-3"),
  };
  s.attackers[0].impersonate = TenantId("tenant-a");
  return s;
}

}  // namespace tierguard
