// Copyright 2026 The subvertlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBVERTLAB_PRF_HPP_
#define SUBVERTLAB_PRF_HPP_

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "subvertlab/bits.hpp"
#include "subvertlab/errors.hpp"
#include "subvertlab/rng.hpp"

namespace subvertlab {

using Digest = std::array<std::uint8_t, 32>;

// HMAC-SHA256 with the inner and outer pad states hashed once at
// construction. Each evaluation copies those states, which is roughly ten
// times cheaper than a one-shot HMAC call. Safe for concurrent use.
class HmacSha256 {
 public:
  explicit HmacSha256(const std::vector<std::uint8_t>& key) : inner_(EVP_MD_CTX_new()), outer_(EVP_MD_CTX_new()) {
    std::array<std::uint8_t, 64> block{};
    if (key.size() > block.size()) {
      Digest d = sha256(key.data(), key.size());
      std::copy(d.begin(), d.end(), block.begin());
    } else {
      std::copy(key.begin(), key.end(), block.begin());
    }
    std::array<std::uint8_t, 64> ipad{}, opad{};
    for (std::size_t i = 0; i < 64; ++i) {
      ipad[i] = block[i] ^ 0x36;
      opad[i] = block[i] ^ 0x5c;
    }
    check(EVP_DigestInit_ex(inner_.get(), EVP_sha256(), nullptr));
    check(EVP_DigestUpdate(inner_.get(), ipad.data(), ipad.size()));
    check(EVP_DigestInit_ex(outer_.get(), EVP_sha256(), nullptr));
    check(EVP_DigestUpdate(outer_.get(), opad.data(), opad.size()));
  }

  Digest mac(const std::uint8_t* data, std::size_t len) const {
    EVP_MD_CTX* ctx = scratch();
    Digest inner_digest{}, out{};
    unsigned n = 0;
    check(EVP_MD_CTX_copy_ex(ctx, inner_.get()));
    check(EVP_DigestUpdate(ctx, data, len));
    check(EVP_DigestFinal_ex(ctx, inner_digest.data(), &n));
    check(EVP_MD_CTX_copy_ex(ctx, outer_.get()));
    check(EVP_DigestUpdate(ctx, inner_digest.data(), inner_digest.size()));
    check(EVP_DigestFinal_ex(ctx, out.data(), &n));
    return out;
  }

  Digest mac(const std::vector<std::uint8_t>& data) const { return mac(data.data(), data.size()); }

  static Digest sha256(const std::uint8_t* data, std::size_t len) {
    Digest out{};
    unsigned n = 0;
    check(EVP_Digest(data, len, out.data(), &n, EVP_sha256(), nullptr));
    return out;
  }

 private:
  struct CtxFree {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
  };
  using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxFree>;

  static void check(int rc) {
    if (rc != 1) throw std::runtime_error("OpenSSL digest failure");
  }

  static EVP_MD_CTX* scratch() {
    thread_local CtxPtr ctx(EVP_MD_CTX_new());
    return ctx.get();
  }

  CtxPtr inner_;
  CtxPtr outer_;
};

inline BitString digest_bits(const Digest& d) {
  return BitString::from_bytes(std::vector<std::uint8_t>(d.begin(), d.end()), 256);
}

// Keyed function F with Eval_k(d) = HMAC-SHA256(k, payload bytes of d).
class Prf {
 public:
  explicit Prf(const BitString& key) : key_(key), mac_(std::make_shared<HmacSha256>(key.bytes())) {}

  static BitString gen(std::size_t kappa, Rng& rng) { return rng.bits(kappa); }

  const BitString& key() const { return key_; }

  Digest eval(const BitString& input) const { return mac_->mac(input.bytes()); }

  // At least `nbits` bits of HMAC(k, input || ctr) blocks, ctr big-endian 32-bit.
  BitString stream(const BitString& input, std::size_t nbits) const {
    std::vector<std::uint8_t> msg = input.bytes();
    msg.resize(msg.size() + 4);
    std::vector<std::uint8_t> out;
    out.reserve(((nbits + 255) / 256) * 32);
    for (std::uint32_t ctr = 0; out.size() * 8 < nbits; ++ctr) {
      for (int i = 0; i < 4; ++i) msg[msg.size() - 4 + i] = static_cast<std::uint8_t>(ctr >> (24 - 8 * i));
      Digest d = mac_->mac(msg);
      out.insert(out.end(), d.begin(), d.end());
    }
    out.resize((nbits + 7) / 8);
    return BitString::from_bytes(std::move(out), nbits);
  }

 private:
  BitString key_;
  std::shared_ptr<const HmacSha256> mac_;
};

struct BitIndex {
  bool b;
  std::size_t j;
  bool operator==(const BitIndex&) const = default;
};

struct BlockIndex {
  std::uint64_t v;
  std::size_t j;
  bool operator==(const BlockIndex&) const = default;
};

inline std::uint64_t digest_read(const Digest& d, std::size_t pos, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    std::size_t p = pos + i;
    v = (v << 1) | ((d[p >> 3] >> (7 - (p & 7))) & 1U);
  }
  return v;
}

// (b, j): b is the first output bit, j the next log2(ml) bits big-endian.
inline BitIndex prf_split_eval(const Prf& prf, const Document& d, std::size_t ml) {
  require_power_of_two_ml(ml);
  Digest out = prf.eval(d);
  return {digest_read(out, 0, 1) != 0, static_cast<std::size_t>(digest_read(out, 1, log2_exact(ml)))};
}

// (v, j): v is the first block_bits bits; j = floor(U * nblocks / 2^64) for
// the 64 bits U that follow. For a power-of-two block count this is exactly
// the leading index bits of U.
inline BlockIndex prf_block_split_eval(const Prf& prf, const Document& d, std::size_t block_bits,
                                       std::size_t nblocks) {
  require(block_bits >= 1 && block_bits <= 64, "block_bits must be in [1, 64]");
  require(nblocks >= 1, "need at least one block");
  Digest out = prf.eval(d);
  std::uint64_t v = digest_read(out, 0, block_bits);
  std::uint64_t u = digest_read(out, block_bits, 64);
  auto j = static_cast<std::size_t>((static_cast<unsigned __int128>(u) * nblocks) >> 64);
  return {v, j};
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_PRF_HPP_
