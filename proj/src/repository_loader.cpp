// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/repositories.hpp"
#include "tierguard/scenario.hpp"

namespace tierguard {

RepositorySet load_repositories(const Scenario& s, std::vector<Diagnostic>* warnings) {
  std::vector<Diagnostic> errors;
  auto fail = [&](std::string msg) {
    errors.push_back({Severity::error, "repositories", std::move(msg), {}, {}});
  };

  RepositorySet repos;
  repos.meta_db.challenge_size = s.parameters.challenge_size;

  auto add_fw = [&](const VmId& vm, std::string token) {
    if (!repos.fw_db.entries.emplace(vm, std::move(token)).second) {
      fail("duplicate firewall entry for " + vm.str());
    }
  };
  auto add_vault = [&](const VmId& vm, std::string key) {
    if (!repos.vault_db.keys.emplace(vm, std::move(key)).second) {
      fail("duplicate vault entry for " + vm.str());
    }
  };

  for (const auto& lan : s.lans) {
    for (std::uint32_t c = 0; c < lan.clients; ++c) {
      for (std::uint32_t v = 0; v < lan.vms_per_client; ++v) {
        VmId vm = lan_vm_id(lan.tenant, c, v);
        add_fw(vm, derived_fw_token(vm));
        add_vault(vm, derived_vault_key(vm));
      }
    }
    auto profile = s.repositories.profiles.find(lan.tenant);
    if (profile == s.repositories.profiles.end()) {
      fail("tenant " + lan.tenant.str() + " referenced but not profiled");
    } else {
      repos.meta_db.profiles[lan.tenant] = profile->second;
    }
  }
  for (const auto& [tenant, profile] : s.repositories.profiles) {
    repos.meta_db.profiles.emplace(tenant, profile);
  }
  for (const auto& e : s.repositories.firewall) add_fw(e.vm_id, e.secret);
  for (const auto& e : s.repositories.vault) add_vault(e.vm_id, e.secret);

  for (const auto& a : s.attackers) {
    const TenantId& own = a.source_vm.tenant_id;
    if (!repos.meta_db.profiles.contains(own)) {
      Profile template_profile;
      if (auto victim = impersonation_target(s, a)) {
        if (auto it = s.repositories.profiles.find(*victim); it != s.repositories.profiles.end()) {
          template_profile = it->second;
        }
      }
      if (template_profile.empty()) {
        fail("attacker tenant " + own.str() + " referenced but not profiled");
      } else {
        repos.meta_db.profiles[own] = forged_profile(own, template_profile);
      }
    }
    if (a.credentials_granted) {
      add_fw(a.source_vm.vm_id, derived_fw_token(a.source_vm.vm_id));
      add_vault(a.source_vm.vm_id, derived_vault_key(a.source_vm.vm_id));
    }
  }

  try {
    repos.ips_db = SignatureDb(SignatureKind::ips, s.repositories.ips_signatures);
    repos.antimal_db = SignatureDb(SignatureKind::antimalware, s.repositories.antimalware_signatures);
  } catch (const Error& e) {
    fail(e.what());
  }

  if (!errors.empty()) throw ScenarioError(std::move(errors));
  if (warnings && repos.fw_db.entries.empty() && repos.meta_db.profiles.empty()) {
    warnings->push_back({Severity::warning, "repositories", "all repositories are empty", {}, {}});
  }
  return repos;
}

}  // namespace tierguard
