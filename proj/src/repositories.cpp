// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/repositories.hpp"

#include <algorithm>
#include <random>

namespace tierguard {

SignatureDb::SignatureDb(SignatureKind kind, std::vector<std::string> patterns)
    : kind_(kind), patterns_(std::move(patterns)) {
  std::sort(patterns_.begin(), patterns_.end());
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (patterns_[i].empty()) throw Error("signature patterns must be non-empty");
    if (i > 0 && patterns_[i] == patterns_[i - 1]) {
      throw Error("duplicate signature pattern: " + patterns_[i]);
    }
  }
}

Flag fw_lookup(const FirewallDb& db, const VmId& vm_id, std::string_view credentials) {
  auto it = db.entries.find(vm_id);
  return to_flag(it != db.entries.end() && it->second == credentials);
}

std::vector<std::string> challenge_fields(const MetaDb& db, const TenantId& tenant,
                                          std::uint64_t nonce) {
  auto it = db.profiles.find(tenant);
  if (it == db.profiles.end()) throw UnknownTenant("no metadata profile for " + tenant.str());

  std::vector<std::string> names;
  names.reserve(it->second.size());
  for (const auto& [field, value] : it->second) names.push_back(field);

  const std::size_t k = std::min(db.challenge_size, names.size());
  auto seed_digest = digest_fields({"challenge", tenant.str(), std::to_string(nonce)});
  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed |= std::uint64_t{seed_digest[i]} << (8 * i);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates written out so the subset is identical on every
  // standard library (std::shuffle's draw sequence is unspecified).
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (names.size() - i));
    std::swap(names[i], names[j]);
  }
  names.resize(k);
  std::sort(names.begin(), names.end());
  return names;
}

Flag meta_verify(const MetaDb& db, const TenantId& tenant, const Profile& responses,
                 std::span<const std::string> challenged) {
  auto profile = db.profiles.find(tenant);
  if (profile == db.profiles.end()) return Flag::deny;
  for (const auto& field : challenged) {
    auto expected = profile->second.find(field);
    auto given = responses.find(field);
    if (expected == profile->second.end() || given == responses.end() ||
        given->second != expected->second) {
      return Flag::deny;
    }
  }
  return Flag::permit;
}

Flag vault_verify(const VaultDb& db, const VmId& vm_id, const std::optional<Digest>& proof,
                  const SessionId& session_id) {
  if (!proof) return Flag::deny;
  auto it = db.keys.find(vm_id);
  if (it == db.keys.end()) return Flag::deny;
  return to_flag(key_proof(it->second, session_id.str()) == *proof);
}

std::optional<std::string> signature_match(const SignatureDb& db, std::string_view payload) {
  for (const auto& pattern : db.patterns()) {
    if (payload.find(pattern) != std::string_view::npos) return pattern;
  }
  return std::nullopt;
}

Flag RepositorySet::fw(const VmId& vm_id, std::string_view credentials) const {
  return fw_lookup(fw_db, vm_id, credentials);
}
bool RepositorySet::fw_registered(const VmId& vm_id) const {
  return fw_db.entries.contains(vm_id);
}
std::vector<std::string> RepositorySet::challenge(const TenantId& tenant,
                                                  std::uint64_t nonce) const {
  return challenge_fields(meta_db, tenant, nonce);
}
Flag RepositorySet::meta(const TenantId& tenant, const Profile& responses,
                         std::span<const std::string> challenged) const {
  return meta_verify(meta_db, tenant, responses, challenged);
}
Flag RepositorySet::vault(const VmId& vm_id, const std::optional<Digest>& proof,
                          const SessionId& session_id) const {
  return vault_verify(vault_db, vm_id, proof, session_id);
}
std::optional<std::string> RepositorySet::ips(std::string_view payload) const {
  return signature_match(ips_db, payload);
}
std::optional<std::string> RepositorySet::antimalware(std::string_view payload) const {
  return signature_match(antimal_db, payload);
}

std::string derived_fw_token(const VmId& vm_id) {
  return "tok-" + to_hex(digest_fields({"fw-token", vm_id.str()})).substr(0, 24);
}

std::string derived_vault_key(const VmId& vm_id) {
  return to_hex(digest_fields({"vault-key", vm_id.str()}));
}

VmId lan_vm_id(const TenantId& tenant, std::uint32_t client, std::uint32_t vm) {
  return VmId(tenant.str() + "/c" + std::to_string(client) + "/vm" + std::to_string(vm));
}

Profile forged_profile(const TenantId& attacker_tenant, const Profile& template_profile) {
  Profile p;
  for (const auto& [field, value] : template_profile) {
    p[field] = "forged:" + attacker_tenant.str() + ":" + field;
  }
  return p;
}

}  // namespace tierguard
