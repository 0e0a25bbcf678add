// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

namespace tierguard {

/// SHA-256 output. The single digest function used for session ids, key
/// proofs and derived credentials.
using Digest = std::array<std::uint8_t, 32>;

/// Digest over a sequence of fields. Each field is length-prefixed so that
/// ("ab", "c") and ("a", "bc") hash differently.
Digest digest_fields(std::initializer_list<std::string_view> fields);

std::string to_hex(const Digest& d);
std::optional<Digest> digest_from_hex(std::string_view hex);

/// Proof that the presenter holds `key_secret`, bound to one session.
Digest key_proof(std::string_view key_secret, std::string_view session_id);

}  // namespace tierguard
