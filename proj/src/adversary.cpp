// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/adversary.hpp"

namespace tierguard {

std::string_view to_string(Archetype a) noexcept {
  switch (a) {
    case Archetype::external: return "external";
    case Archetype::masquerade: return "masquerade";
    case Archetype::insider_exploit: return "insider_exploit";
    case Archetype::malware_injector: return "malware_injector";
    case Archetype::zero_day: return "zero_day";
  }
  return "?";
}

std::optional<Archetype> parse_archetype(std::string_view name) noexcept {
  for (auto a : kArchetypes) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::optional<LayerId> expected_denial_layer(Archetype a) noexcept {
  switch (a) {
    case Archetype::external: return LayerId::FW;
    case Archetype::masquerade: return LayerId::META;
    case Archetype::insider_exploit: return LayerId::IPS;
    case Archetype::malware_injector: return LayerId::ANTIMAL;
    case Archetype::zero_day: return std::nullopt;
  }
  return std::nullopt;
}

std::string clean_filler(const RepositorySet& repos, std::size_t length, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::string s(length, 'a');
    for (auto& c : s) c = static_cast<char>('a' + rng() % 26);
    if (!repos.ips(s) && !repos.antimalware(s)) return s;
  }
  return {};
}

std::optional<ExploitPayload> choose_exploit(Archetype a, const RepositorySet& repos,
                                             std::mt19937_64& rng) {
  auto pick = [&](const SignatureDb& db) -> const std::string& {
    if (db.empty()) {
      throw ConfigurationError(std::string(to_string(a)) + " needs at least one " +
                               (db.kind() == SignatureKind::ips ? "IPS" : "anti-malware") +
                               " signature");
    }
    return db.patterns()[rng() % db.patterns().size()];
  };
  switch (a) {
    case Archetype::insider_exploit: {
      const auto& p = pick(repos.ips_db);
      return ExploitPayload{p, true, repos.antimalware(p).has_value()};
    }
    case Archetype::malware_injector: {
      const auto& p = pick(repos.antimal_db);
      if (repos.ips(p)) {
        throw ConfigurationError("anti-malware pattern " + p + " also matches an IPS signature");
      }
      return ExploitPayload{p, false, true};
    }
    default: return std::nullopt;
  }
}

SessionPacket forge_session(const AttackerProfile& profile, const RepositorySet& repos,
                            std::mt19937_64& rng, const ForgeOptions& options) {
  const VmIdentity& src = profile.source_vm;
  const bool needs_credentials = profile.archetype != Archetype::external;

  std::string token;
  if (needs_credentials) {
    auto it = repos.fw_db.entries.find(src.vm_id);
    if (!profile.credentials_granted || it == repos.fw_db.entries.end()) {
      throw ConfigurationError("attacker " + profile.id + " (" +
                               std::string(to_string(profile.archetype)) +
                               ") requires granted firewall credentials");
    }
    token = it->second;
  } else {
    // An outsider can only guess; the guess never matches a derived token.
    token = "guess-" + std::to_string(rng());
  }

  VmIdentity claimed = src;
  if (profile.archetype == Archetype::masquerade) {
    if (!options.impersonate) {
      throw ConfigurationError("masquerade attacker " + profile.id + " has no tenant to impersonate");
    }
    claimed.tenant_id = *options.impersonate;
  }

  const bool genuine_insider = profile.archetype == Archetype::insider_exploit ||
                               profile.archetype == Archetype::malware_injector ||
                               profile.archetype == Archetype::zero_day;
  if (genuine_insider) {
    if (!repos.vault_db.keys.contains(src.vm_id)) {
      throw ConfigurationError("attacker " + profile.id + " requires a vault key");
    }
    if (!repos.meta_db.profiles.contains(src.tenant_id)) {
      throw ConfigurationError("attacker " + profile.id + " requires a metadata profile");
    }
  }

  std::string payload;
  std::optional<ExploitPayload> exploit = choose_exploit(profile.archetype, repos, rng);
  if (profile.archetype == Archetype::zero_day) {
    std::size_t len = options.anomaly_threshold + 1 + rng() % 512;
    payload = clean_filler(repos, len, rng);
    if (payload.empty()) throw ConfigurationError("no signature-free zero-day payload found");
  } else {
    std::string head = clean_filler(repos, 16 + rng() % 48, rng);
    std::string tail = clean_filler(repos, 16 + rng() % 48, rng);
    payload = head + (exploit ? exploit->pattern : std::string()) + tail;
    if (exploit && !exploit->known_to_ips && repos.ips(payload)) {
      throw ConfigurationError("malware payload for " + profile.id + " trips an IPS signature");
    }
  }

  SessionPacket packet = new_session(claimed, token, std::move(payload), options.nonce);

  // Responses are drawn from the attacker's own profile: correct for its own
  // tenant, wrong for anyone it impersonates.
  Profile responses;
  if (auto own = repos.meta_db.profiles.find(src.tenant_id); own != repos.meta_db.profiles.end()) {
    std::vector<std::string> asked;
    try {
      asked = repos.challenge(claimed.tenant_id, options.nonce);
    } catch (const UnknownTenant&) {
    }
    for (const auto& field : asked) {
      if (auto v = own->second.find(field); v != own->second.end()) responses[field] = v->second;
    }
  }
  packet = packet.with_metadata(std::move(responses));

  if (auto key = repos.vault_db.keys.find(src.vm_id); key != repos.vault_db.keys.end()) {
    packet = packet.with_key_proof(key_proof(key->second, packet.session_id().str()));
  }

  if (exploit || profile.archetype == Archetype::zero_day) {
    packet = append_evidence(
        packet, {LayerId::META, EvidenceKind::exploit_payload,
                 exploit ? "planted " + exploit->pattern : std::string("planted unknown exploit")});
  }
  return packet;
}

}  // namespace tierguard
