// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/digest.hpp"

#include <gtest/gtest.h>
#include <openssl/sha.h>

#include <random>

namespace tierguard {
namespace {

// Independent framing: 8-byte little-endian length, then the bytes.
Digest reference_digest(std::initializer_list<std::string_view> fields) {
  std::string framed;
  for (auto f : fields) {
    std::uint64_t n = f.size();
    for (int i = 0; i < 8; ++i) framed.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
    framed.append(f);
  }
  Digest d{};
  SHA256(reinterpret_cast<const unsigned char*>(framed.data()), framed.size(), d.data());
  return d;
}

TEST(Digest, MatchesOneShotSha256OverFramedFields) {
  EXPECT_EQ(digest_fields({"a", "bc"}), reference_digest({"a", "bc"}));
  EXPECT_EQ(digest_fields({}), reference_digest({}));
  EXPECT_EQ(digest_fields({"", ""}), reference_digest({"", ""}));
}

TEST(Digest, FramingSeparatesFieldBoundaries) {
  EXPECT_NE(digest_fields({"ab", "c"}), digest_fields({"a", "bc"}));
  EXPECT_NE(digest_fields({"abc"}), digest_fields({"abc", ""}));
}

TEST(Digest, EmptyInputMatchesKnownVector) {
  // SHA-256 of eight zero bytes (the framing of one empty field).
  EXPECT_EQ(to_hex(digest_fields({""})),
            "af5570f5a1810b7af78caf4bc70a660f0df51e42baf91d4de5b2328de0e83dfc");
}

TEST(Digest, HexRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    Digest d{};
    for (auto& b : d) b = static_cast<std::uint8_t>(rng());
    std::string hex = to_hex(d);
    ASSERT_EQ(hex.size(), 64u);
    EXPECT_EQ(digest_from_hex(hex), d);
  }
  EXPECT_FALSE(digest_from_hex("abc"));
  EXPECT_FALSE(digest_from_hex(std::string(64, 'g')));
}

TEST(Digest, KeyProofDependsOnBothInputs) {
  EXPECT_EQ(key_proof("k", "s"), key_proof("k", "s"));
  EXPECT_NE(key_proof("k", "s"), key_proof("k2", "s"));
  EXPECT_NE(key_proof("k", "s"), key_proof("k", "s2"));
}

}  // namespace
}  // namespace tierguard
