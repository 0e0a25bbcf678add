// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "tierguard/scenario.hpp"

namespace tierguard::testing {

inline AttackerProfile attacker(std::string id, Archetype a, std::string vm, std::string tenant,
                                bool granted) {
  AttackerProfile p;
  p.id = std::move(id);
  p.archetype = a;
  p.source_vm = {VmId(std::move(vm)), TenantId(std::move(tenant)), 1};
  p.target = VmId("VM7");
  p.credentials_granted = granted;
  return p;
}

/// Default scenario plus an outside attacker with no credentials.
inline Scenario with_external_attacker(Scenario s) {
  s.attackers.push_back(attacker("mallory-0", Archetype::external, "outsider/vm0", "outsider", false));
  return s;
}

/// Every archetype, including the zero-day insider.
inline Scenario all_archetypes(Scenario s) {
  s = with_external_attacker(std::move(s));
  s.attackers.push_back(attacker("mallory-4", Archetype::zero_day, "attacker-4/vm0", "attacker-4", true));
  return s;
}

/// Small, fast variant of a scenario: fewer clients, shorter horizon.
inline Scenario scaled(Scenario s, std::uint32_t clients, double duration) {
  for (auto& lan : s.lans) lan.clients = clients;
  s.duration = duration;
  return s;
}

}  // namespace tierguard::testing
