// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tierguard/core.hpp"

namespace tierguard {

struct Scenario;
struct Diagnostic;

using Profile = std::map<std::string, std::string>;

/// DB_FW: vm_id -> expected credentials token.
struct FirewallDb {
  std::map<VmId, std::string> entries;
};

/// DB_META: registered personal details per tenant.
struct MetaDb {
  std::map<TenantId, Profile> profiles;
  std::size_t challenge_size = 2;
};

/// DB_VAULT: vm_id -> key secret.
struct VaultDb {
  std::map<VmId, std::string> keys;
};

enum class SignatureKind : std::uint8_t { ips, antimalware };

/// DB_IPS / DB_ANTIMAL. Patterns are kept sorted; a pattern is its own identifier.
class SignatureDb {
 public:
  SignatureDb() = default;
  /// Throws Error on an empty or duplicated pattern.
  SignatureDb(SignatureKind kind, std::vector<std::string> patterns);

  SignatureKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& patterns() const noexcept { return patterns_; }
  bool empty() const noexcept { return patterns_.empty(); }

 private:
  SignatureKind kind_ = SignatureKind::ips;
  std::vector<std::string> patterns_;
};

/// Raised by challenge_fields for a tenant with no registered profile.
class UnknownTenant : public Error {
 public:
  using Error::Error;
};

Flag fw_lookup(const FirewallDb& db, const VmId& vm_id, std::string_view credentials);

/// Nonce-seeded subset of the tenant's field names, returned in sorted order.
std::vector<std::string> challenge_fields(const MetaDb& db, const TenantId& tenant,
                                          std::uint64_t nonce);

Flag meta_verify(const MetaDb& db, const TenantId& tenant, const Profile& responses,
                 std::span<const std::string> challenged);

Flag vault_verify(const VaultDb& db, const VmId& vm_id, const std::optional<Digest>& proof,
                  const SessionId& session_id);

/// First pattern (in sorted order) contained in the payload.
std::optional<std::string> signature_match(const SignatureDb& db, std::string_view payload);

/// Query surface the pipeline inspects through. RepositorySet is the real
/// implementation; tests wrap it to observe which stores were touched.
class RepositoryQueries {
 public:
  virtual ~RepositoryQueries() = default;

  virtual Flag fw(const VmId& vm_id, std::string_view credentials) const = 0;
  /// Only consulted to word a firewall denial.
  virtual bool fw_registered(const VmId& vm_id) const = 0;
  virtual std::vector<std::string> challenge(const TenantId& tenant,
                                             std::uint64_t nonce) const = 0;
  virtual Flag meta(const TenantId& tenant, const Profile& responses,
                    std::span<const std::string> challenged) const = 0;
  virtual Flag vault(const VmId& vm_id, const std::optional<Digest>& proof,
                     const SessionId& session_id) const = 0;
  virtual std::optional<std::string> ips(std::string_view payload) const = 0;
  virtual std::optional<std::string> antimalware(std::string_view payload) const = 0;
};

/// The five stores. Immutable once loaded and shared read-only between workers.
struct RepositorySet final : RepositoryQueries {
  FirewallDb fw_db;
  MetaDb meta_db;
  VaultDb vault_db;
  SignatureDb ips_db{SignatureKind::ips, {}};
  SignatureDb antimal_db{SignatureKind::antimalware, {}};

  Flag fw(const VmId& vm_id, std::string_view credentials) const override;
  bool fw_registered(const VmId& vm_id) const override;
  std::vector<std::string> challenge(const TenantId& tenant, std::uint64_t nonce) const override;
  Flag meta(const TenantId& tenant, const Profile& responses,
            std::span<const std::string> challenged) const override;
  Flag vault(const VmId& vm_id, const std::optional<Digest>& proof,
             const SessionId& session_id) const override;
  std::optional<std::string> ips(std::string_view payload) const override;
  std::optional<std::string> antimalware(std::string_view payload) const override;
};

/// Credentials issued to generated VMs. Derived from the vm_id so that
/// repositories and workload generators agree without sharing state.
std::string derived_fw_token(const VmId& vm_id);
std::string derived_vault_key(const VmId& vm_id);

/// Name of the i-th VM of a client in a tenant LAN.
VmId lan_vm_id(const TenantId& tenant, std::uint32_t client, std::uint32_t vm);

/// Profile handed to an attacker tenant that declares none: same field names
/// as `template_profile`, values that can never equal a legitimate tenant's.
Profile forged_profile(const TenantId& attacker_tenant, const Profile& template_profile);

/// Populates all five stores from a scenario. Throws ScenarioError on
/// duplicate firewall vm_ids or tenants referenced without a profile;
/// non-fatal findings are appended to `warnings` when provided.
RepositorySet load_repositories(const Scenario& scenario,
                                std::vector<Diagnostic>* warnings = nullptr);

}  // namespace tierguard
