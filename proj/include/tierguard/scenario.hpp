// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tierguard/adversary.hpp"
#include "tierguard/core.hpp"
#include "tierguard/pipeline.hpp"
#include "tierguard/repositories.hpp"
#include "tierguard/topology.hpp"

namespace tierguard {

/// One tenant LAN: `clients` clients, each owning `vms_per_client` VMs on
/// tier 1, each client opening sessions at `arrival_rate` per second.
struct LanDecl {
  TenantId tenant;
  std::uint32_t clients = 0;
  std::uint32_t vms_per_client = 3;
  double arrival_rate = 0.1;
  std::uint32_t payload_min = 64;
  std::uint32_t payload_max = 1024;

  friend bool operator==(const LanDecl&, const LanDecl&) = default;
};

struct CredentialEntry {
  VmId vm_id;
  std::string secret;

  friend bool operator==(const CredentialEntry&, const CredentialEntry&) = default;
};

/// Inline repository declarations. LAN VMs and granted attackers receive
/// derived credentials in addition to the explicit entries listed here.
struct RepositoryDecl {
  std::map<TenantId, Profile> profiles;
  std::vector<std::string> ips_signatures;
  std::vector<std::string> antimalware_signatures;
  std::vector<CredentialEntry> firewall;
  std::vector<CredentialEntry> vault;

  friend bool operator==(const RepositoryDecl&, const RepositoryDecl&) = default;
};

enum class Queueing : std::uint8_t { infinite_server, single_server };

struct Parameters {
  std::size_t challenge_size = 2;
  std::size_t anomaly_threshold = 4096;
  std::optional<std::uint32_t> anomaly_escalation;
  Queueing queueing = Queueing::infinite_server;
  LayerEvaluation layer_evaluation = LayerEvaluation::sequential;
  std::vector<LayerId> disabled_layers;

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// Per-layer service time in seconds, indexed by LayerId.
struct Latencies {
  std::array<double, kInspectionLayerCount> seconds = {0.001, 0.002, 0.002, 0.005, 0.005};

  friend bool operator==(const Latencies&, const Latencies&) = default;
};

struct Scenario {
  std::string name = "unnamed";
  std::uint64_t seed = 0;
  double duration = 60.0;
  double bin_width = 1.0;
  std::vector<LanDecl> lans;
  std::vector<AttackerProfile> attackers;
  HierarchyDecl hierarchy = baseline_hierarchy();
  RepositoryDecl repositories;
  Latencies latencies;
  Parameters parameters;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Severity : std::uint8_t { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string module;
  std::string message;
  std::optional<std::size_t> line;
  std::optional<std::size_t> column;

  std::string to_string() const;
};

/// Carries the diagnostics that stopped a scenario from loading.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Checks every cross-module invariant: topology, repository consistency,
/// attacker credential grants, numeric ranges. Errors and warnings both.
std::vector<Diagnostic> validate_scenario(const Scenario& scenario);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Seconds -> integer nanoseconds, rounded to nearest.
std::int64_t to_ns(double seconds);
double to_seconds(std::int64_t ns);

/// Pipeline configuration implied by the scenario's latencies and parameters.
PipelineConfig pipeline_config(const Scenario& scenario);

/// Tenant a masquerading attacker claims: explicit, else the first LAN's.
std::optional<TenantId> impersonation_target(const Scenario& scenario, const AttackerProfile& a);

/// Sessions/s for an attacker; defaults to the first LAN's aggregate rate.
double attacker_intensity(const Scenario& scenario, const AttackerProfile& a);

/// Four LANs of 500 clients with three VMs each, three inside attackers
/// (masquerade, insider exploit, malware injector), three-tier hierarchy.
Scenario baseline_scenario();

}  // namespace tierguard
