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

#ifndef SUBVERTLAB_SIGNATURE_HPP_
#define SUBVERTLAB_SIGNATURE_HPP_

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "subvertlab/bits.hpp"
#include "subvertlab/errors.hpp"
#include "subvertlab/prf.hpp"
#include "subvertlab/rng.hpp"

namespace subvertlab {

enum class SignatureKind { kCoinInjective, kCoinExtractable, kUnique };

inline SignatureKind parse_signature_kind(const std::string& s) {
  if (s == "coin-injective") return SignatureKind::kCoinInjective;
  if (s == "coin-extractable") return SignatureKind::kCoinExtractable;
  if (s == "unique") return SignatureKind::kUnique;
  throw UnsupportedKind("unsupported signature kind: " + s);
}

inline std::string to_string(SignatureKind k) {
  switch (k) {
    case SignatureKind::kCoinInjective: return "coin-injective";
    case SignatureKind::kCoinExtractable: return "coin-extractable";
    case SignatureKind::kUnique: return "unique";
  }
  return "?";
}

struct KeyPair {
  BitString pk;
  BitString sk;
};

// Toy MAC-style signature: sigma = rho || first t bits of HMAC(sk, m || rho).
// The coins sit in the clear, so the coin kinds are both coin-injective and
// coin-extractable. The unique kind uses no coins. pk equals sk, so
// verification is not public; forgery games only ever hand pk to the
// challenger, never to the forger.
class TagSignature {
 public:
  TagSignature(SignatureKind kind, std::size_t kappa, std::size_t message_bits, std::size_t coin_bits,
               std::size_t tag_bits)
      : kind_(kind), kappa_(kappa), message_bits_(message_bits),
        coin_bits_(kind == SignatureKind::kUnique ? 0 : coin_bits), tag_bits_(tag_bits) {
    require(tag_bits >= 1 && tag_bits <= 256, "tag bits must be in [1, 256]");
    require(kind != SignatureKind::kUnique || coin_bits == 0, "unique signatures take no coins");
  }

  // Library defaults: 4 coin bits and 64-bit tags, or an 8-bit tag for the
  // unique kind so its signature space can be swept exhaustively.
  static TagSignature make(SignatureKind kind, std::size_t kappa, std::size_t message_bits) {
    if (kind == SignatureKind::kUnique) return TagSignature(kind, kappa, message_bits, 0, 8);
    return TagSignature(kind, kappa, message_bits, 4, 64);
  }

  SignatureKind kind() const { return kind_; }
  std::size_t kappa() const { return kappa_; }
  std::size_t message_bits() const { return message_bits_; }
  std::size_t coin_bits() const { return coin_bits_; }
  std::size_t tag_bits() const { return tag_bits_; }
  std::size_t signature_bits() const { return coin_bits_ + tag_bits_; }
  bool coin_injective() const { return kind_ != SignatureKind::kUnique; }
  bool coin_extractable() const { return kind_ != SignatureKind::kUnique; }
  bool unique() const { return kind_ == SignatureKind::kUnique; }

  KeyPair generate_keypair(Rng& rng) const {
    BitString sk = rng.bits(kappa_);
    return {sk, sk};
  }

  Document sign_with_coins(const BitString& sk, const BitString& m, const BitString& coins) const {
    if (m.size() != message_bits_ || coins.size() != coin_bits_ || sk.size() != kappa_) {
      throw LengthMismatch("signature: key/message/coin length mismatch");
    }
    return concat(coins, tag(sk, m, coins));
  }

  Document sign(const BitString& sk, const BitString& m, Rng& rng) const {
    return sign_with_coins(sk, m, rng.bits(coin_bits_));
  }

  bool verify(const BitString& pk, const BitString& m, const Document& sigma) const {
    if (sigma.size() != signature_bits() || m.size() != message_bits_ || pk.size() != kappa_) return false;
    BitString coins = sigma.slice(0, coin_bits_);
    return sigma.slice(coin_bits_, tag_bits_) == tag(pk, m, coins);
  }

  // The extractor B of a coin-extractable scheme.
  BitString extract_coins(const Document& sigma) const { return sigma.slice(0, coin_bits_); }

  json parameters() const {
    return {{"kind", to_string(kind_)}, {"kappa", kappa_}, {"r", coin_bits_}, {"ml", message_bits_},
            {"cl", signature_bits()}, {"t", tag_bits_}};
  }

 private:
  BitString tag(const BitString& key, const BitString& m, const BitString& coins) const {
    return digest_bits(Prf(key).eval(concat(m, coins))).slice(0, tag_bits_);
  }

  SignatureKind kind_;
  std::size_t kappa_, message_bits_, coin_bits_, tag_bits_;
};

}  // namespace subvertlab

#endif  // SUBVERTLAB_SIGNATURE_HPP_
