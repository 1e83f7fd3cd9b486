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

#ifndef SUBVERTLAB_ENCRYPTION_HPP_
#define SUBVERTLAB_ENCRYPTION_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "subvertlab/bits.hpp"
#include "subvertlab/distribution.hpp"
#include "subvertlab/errors.hpp"
#include "subvertlab/prf.hpp"
#include "subvertlab/rng.hpp"

namespace subvertlab {

struct SchemeLengths {
  std::size_t key_bits;
  std::size_t message_bits;
  std::size_t ciphertext_bits;
  std::size_t coin_bits;
};

// Symmetric encryption with explicit coins. encrypt() is the only place a
// scheme touches randomness, and it draws exactly coin_bits.
class EncryptionScheme {
 public:
  virtual ~EncryptionScheme() = default;

  virtual SchemeLengths lengths() const = 0;
  virtual std::size_t kappa() const = 0;
  virtual std::string id() const = 0;
  virtual Document encrypt_with_coins(const BitString& k, const BitString& m, const BitString& coins) const = 0;
  virtual std::optional<BitString> decrypt(const BitString& k, const Document& c) const = 0;
  virtual json parameters() const = 0;

  BitString generate_key(Rng& rng) const { return rng.bits(lengths().key_bits); }

  Document encrypt(const BitString& k, const BitString& m, Rng& rng) const {
    return encrypt_with_coins(k, m, rng.bits(lengths().coin_bits));
  }

  Distribution key_distribution() const { return Distribution::uniform_bits(lengths().key_bits); }

  // Exact law of Enc(k, m; coins) over uniform coins.
  Distribution ciphertext_distribution(const BitString& k, const BitString& m) const {
    std::size_t r = lengths().coin_bits;
    require(r <= Distribution::kMaxEnumerableBits, "too many coin bits to enumerate");
    std::map<Document, double> table;
    double p = std::ldexp(1.0, -static_cast<int>(r));
    for (std::uint64_t rho = 0; rho < (std::uint64_t{1} << r); ++rho) {
      table[encrypt_with_coins(k, m, BitString::from_uint(rho, r))] += p;
    }
    return Distribution::from_table(std::move(table));
  }

 protected:
  void check_inputs(const BitString& k, const BitString& m, const BitString& coins) const {
    auto L = lengths();
    if (k.size() != L.key_bits || m.size() != L.message_bits || coins.size() != L.coin_bits) {
      throw LengthMismatch(id() + ": key/message/coin length mismatch");
    }
  }
};

// Enc(k, m; rho) = rho || (m XOR pad_k(rho)), pad from the HMAC stream.
class RandPadScheme final : public EncryptionScheme {
 public:
  RandPadScheme(std::size_t coin_bits, std::size_t kappa, std::size_t ml) : r_(coin_bits), kappa_(kappa), ml_(ml) {
    require(kappa >= 1, "kappa must be positive");
  }

  SchemeLengths lengths() const override { return {kappa_, ml_, r_ + ml_, r_}; }
  std::size_t kappa() const override { return kappa_; }
  std::string id() const override { return "randpad:" + std::to_string(r_); }

  Document encrypt_with_coins(const BitString& k, const BitString& m, const BitString& coins) const override {
    check_inputs(k, m, coins);
    return concat(coins, m ^ Prf(k).stream(coins, ml_));
  }

  std::optional<BitString> decrypt(const BitString& k, const Document& c) const override {
    if (c.size() != r_ + ml_ || k.size() != kappa_) return std::nullopt;
    BitString rho = c.slice(0, r_);
    return c.slice(r_, ml_) ^ Prf(k).stream(rho, ml_);
  }

  json parameters() const override {
    return {{"kind", "randpad"}, {"kappa", kappa_}, {"r", r_}, {"ml", ml_}, {"cl", r_ + ml_}, {"t", nullptr}};
  }

 private:
  std::size_t r_, kappa_, ml_;
};

// Deterministic permutation of {0,1}^ml keyed by k: a four-round Feistel
// network whose round functions are HMAC streams. Zero coins.
class DeterministicScheme final : public EncryptionScheme {
 public:
  static constexpr int kRounds = 4;

  DeterministicScheme(std::size_t kappa, std::size_t ml) : kappa_(kappa), ml_(ml) {
    require(ml >= 2 && ml % 2 == 0, "deterministic scheme needs an even message length >= 2");
    require(kappa >= 1, "kappa must be positive");
  }

  SchemeLengths lengths() const override { return {kappa_, ml_, ml_, 0}; }
  std::size_t kappa() const override { return kappa_; }
  std::string id() const override { return "det"; }

  Document encrypt_with_coins(const BitString& k, const BitString& m, const BitString& coins) const override {
    check_inputs(k, m, coins);
    Prf f(k);
    std::size_t half = ml_ / 2;
    BitString l = m.slice(0, half), r = m.slice(half, half);
    for (int i = 0; i < kRounds; ++i) {
      BitString next = l ^ round(f, i, r);
      l = std::move(r);
      r = std::move(next);
    }
    return concat(l, r);
  }

  std::optional<BitString> decrypt(const BitString& k, const Document& c) const override {
    if (c.size() != ml_ || k.size() != kappa_) return std::nullopt;
    Prf f(k);
    std::size_t half = ml_ / 2;
    BitString l = c.slice(0, half), r = c.slice(half, half);
    for (int i = kRounds - 1; i >= 0; --i) {
      BitString prev = r ^ round(f, i, l);
      r = std::move(l);
      l = std::move(prev);
    }
    return concat(l, r);
  }

  json parameters() const override {
    return {{"kind", "det"}, {"kappa", kappa_}, {"r", 0}, {"ml", ml_}, {"cl", ml_}, {"t", nullptr}};
  }

 private:
  BitString round(const Prf& f, int i, const BitString& half) const {
    return f.stream(concat(BitString::from_uint(static_cast<std::uint64_t>(i), 8), half), half.size());
  }

  std::size_t kappa_, ml_;
};

}  // namespace subvertlab

#endif  // SUBVERTLAB_ENCRYPTION_HPP_
