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

#ifndef SUBVERTLAB_ALGORITHM_HPP_
#define SUBVERTLAB_ALGORITHM_HPP_

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "subvertlab/bits.hpp"
#include "subvertlab/distribution.hpp"
#include "subvertlab/encryption.hpp"
#include "subvertlab/signature.hpp"

namespace subvertlab {

struct AlgorithmLengths {
  std::size_t secret_bits;
  std::size_t input_bits;
  std::size_t output_bits;
  std::size_t coin_bits;
};

// Randomized algorithm R(s, x; coins) with a hardwired secret s.
class RandomizedAlgorithm {
 public:
  virtual ~RandomizedAlgorithm() = default;

  virtual AlgorithmLengths lengths() const = 0;
  virtual std::string id() const = 0;
  virtual BitString generate_secret(Rng& rng) const = 0;
  virtual Document run_with_coins(const BitString& s, const BitString& x, const BitString& coins) const = 0;

  Document run(const BitString& s, const BitString& x, Rng& rng) const {
    return run_with_coins(s, x, rng.bits(lengths().coin_bits));
  }

  bool deterministic() const { return lengths().coin_bits == 0; }

  Distribution output_distribution(const BitString& s, const BitString& x) const {
    std::size_t r = lengths().coin_bits;
    require(r <= Distribution::kMaxEnumerableBits, "too many coin bits to enumerate");
    std::map<Document, double> table;
    double p = std::ldexp(1.0, -static_cast<int>(r));
    for (std::uint64_t rho = 0; rho < (std::uint64_t{1} << r); ++rho) {
      table[run_with_coins(s, x, BitString::from_uint(rho, r))] += p;
    }
    return Distribution::from_table(std::move(table));
  }
};

// Input sampler GenI together with its exact law.
struct InputGenerator {
  std::size_t input_bits = 0;
  std::function<BitString(Rng&)> sample;
  std::function<Distribution()> distribution;
};

inline InputGenerator uniform_inputs(std::size_t n) {
  return {n, [n](Rng& rng) { return rng.bits(n); }, [n] { return Distribution::uniform_bits(n); }};
}

// R = Enc(k, .) of a scheme; secret is the encryption key.
class EncryptionAlgorithm final : public RandomizedAlgorithm {
 public:
  explicit EncryptionAlgorithm(std::shared_ptr<const EncryptionScheme> scheme) : scheme_(std::move(scheme)) {}

  AlgorithmLengths lengths() const override {
    auto L = scheme_->lengths();
    return {L.key_bits, L.message_bits, L.ciphertext_bits, L.coin_bits};
  }
  std::string id() const override { return "enc:" + scheme_->id(); }
  BitString generate_secret(Rng& rng) const override { return scheme_->generate_key(rng); }
  Document run_with_coins(const BitString& s, const BitString& x, const BitString& coins) const override {
    return scheme_->encrypt_with_coins(s, x, coins);
  }
  const EncryptionScheme& scheme() const { return *scheme_; }

 private:
  std::shared_ptr<const EncryptionScheme> scheme_;
};

// R = Sign(sk, .); secret is the signing key.
class SigningAlgorithm final : public RandomizedAlgorithm {
 public:
  explicit SigningAlgorithm(std::shared_ptr<const TagSignature> sig) : sig_(std::move(sig)) {}

  AlgorithmLengths lengths() const override {
    return {sig_->kappa(), sig_->message_bits(), sig_->signature_bits(), sig_->coin_bits()};
  }
  std::string id() const override { return "sign:" + to_string(sig_->kind()); }
  BitString generate_secret(Rng& rng) const override { return sig_->generate_keypair(rng).sk; }
  Document run_with_coins(const BitString& s, const BitString& x, const BitString& coins) const override {
    return sig_->sign_with_coins(s, x, coins);
  }
  const TagSignature& signature() const { return *sig_; }

 private:
  std::shared_ptr<const TagSignature> sig_;
};

}  // namespace subvertlab

#endif  // SUBVERTLAB_ALGORITHM_HPP_
