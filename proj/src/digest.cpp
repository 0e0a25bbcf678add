// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/digest.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace tierguard {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};

void update_u64(EVP_MD_CTX* ctx, std::uint64_t v) {
  std::array<unsigned char, 8> le{};
  for (std::size_t i = 0; i < le.size(); ++i) le[i] = static_cast<unsigned char>(v >> (8 * i));
  EVP_DigestUpdate(ctx, le.data(), le.size());
}

}  // namespace

Digest digest_fields(std::initializer_list<std::string_view> fields) {
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 initialisation failed");
  }
  for (std::string_view f : fields) {
    update_u64(ctx.get(), f.size());
    EVP_DigestUpdate(ctx.get(), f.data(), f.size());
  }
  Digest out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), out.data(), &len);
  return out;
}

std::string to_hex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(d.size() * 2);
  for (auto b : d) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

std::optional<Digest> digest_from_hex(std::string_view hex) {
  if (hex.size() != 64) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Digest d{};
  for (std::size_t i = 0; i < d.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    d[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return d;
}

Digest key_proof(std::string_view key_secret, std::string_view session_id) {
  return digest_fields({"key-proof", key_secret, session_id});
}

}  // namespace tierguard
