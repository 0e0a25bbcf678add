// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "tierguard/core.hpp"
#include "tierguard/repositories.hpp"

namespace tierguard {

enum class Archetype : std::uint8_t { external, masquerade, insider_exploit, malware_injector, zero_day };

inline constexpr std::array<Archetype, 5> kArchetypes = {
    Archetype::external, Archetype::masquerade, Archetype::insider_exploit,
    Archetype::malware_injector, Archetype::zero_day};

std::string_view to_string(Archetype a) noexcept;
std::optional<Archetype> parse_archetype(std::string_view name) noexcept;

struct AttackerProfile {
  std::string id;
  Archetype archetype = Archetype::external;
  /// tenant_id is the attacker's own subscription.
  VmIdentity source_vm;
  VmId target;
  /// Sessions per simulated second. Absent means "same as a tenant LAN".
  std::optional<double> intensity;
  /// Scenario handed the attacker genuine firewall/vault credentials.
  bool credentials_granted = false;
  /// Tenant a masquerading attacker claims to be; defaults to the first LAN.
  std::optional<TenantId> impersonate;

  friend bool operator==(const AttackerProfile&, const AttackerProfile&) = default;
};

struct ExploitPayload {
  std::string pattern;
  bool known_to_ips = false;
  bool known_to_antimal = false;
};

/// Raised when a profile cannot be realised against the loaded repositories.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

struct ForgeOptions {
  std::uint64_t nonce = 0;
  std::size_t anomaly_threshold = 4096;
  /// Claimed tenant for masquerade; required for that archetype.
  std::optional<TenantId> impersonate;
};

/// Exploit an archetype plants, or nullopt for archetypes that plant none.
std::optional<ExploitPayload> choose_exploit(Archetype a, const RepositorySet& repos,
                                             std::mt19937_64& rng);

/// Builds a session whose membership vector is fixed by the archetype.
/// Throws ConfigurationError when the archetype needs credentials the
/// repositories do not hold for the source VM.
SessionPacket forge_session(const AttackerProfile& profile, const RepositorySet& repos,
                            std::mt19937_64& rng, const ForgeOptions& options);

/// external->FW, masquerade->META, insider_exploit->IPS,
/// malware_injector->ANTIMAL, zero_day->none (authorized, anomaly reported).
std::optional<LayerId> expected_denial_layer(Archetype a) noexcept;

/// Lowercase filler of the given length that matches no signature in either
/// store. Returns an empty string if no clean filler was found.
std::string clean_filler(const RepositorySet& repos, std::size_t length, std::mt19937_64& rng);

}  // namespace tierguard
