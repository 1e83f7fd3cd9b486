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

#ifndef SUBVERTLAB_VIEWS_HPP_
#define SUBVERTLAB_VIEWS_HPP_

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "subvertlab/algorithm.hpp"
#include "subvertlab/asa.hpp"
#include "subvertlab/encryption.hpp"
#include "subvertlab/rejsam.hpp"
#include "subvertlab/signature.hpp"

namespace subvertlab {

// Capability objects handed to adversaries. Each game builds one per trial
// and an adversary can reach only what its view exposes.

enum class AdversaryKind { kAttacker, kWatchdog, kWarden, kForger, kDistinguisher };

inline std::string to_string(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::kAttacker: return "attacker";
    case AdversaryKind::kWatchdog: return "watchdog";
    case AdversaryKind::kWarden: return "warden";
    case AdversaryKind::kForger: return "forger";
    case AdversaryKind::kDistinguisher: return "distinguisher";
  }
  return "?";
}

// CPA-Dist: Enc(k, .) or fresh uniform strings.
class CpaView {
 public:
  using Challenge = std::function<Document(const BitString&)>;
  CpaView(const EncryptionScheme& scheme, Challenge challenge, Rng& coins)
      : scheme_(scheme), challenge_(std::move(challenge)), coins_(coins) {}

  const EncryptionScheme& scheme() const { return scheme_; }
  Document challenge(const BitString& m) {
    ++queries_;
    return challenge_(m);
  }
  Rng& coins() { return coins_; }
  std::size_t queries() const { return queries_; }

 private:
  const EncryptionScheme& scheme_;
  Challenge challenge_;
  Rng& coins_;
  std::size_t queries_ = 0;
};

struct ChallengeAnswer {
  Document output;
  State state;
};

// EncASA-Dist: the watchdog picks (am, k, m, sigma) per query and sees the
// ciphertext together with the returned state. aux_coins is a second private
// stream, used by simulations that must stay seed-coupled with a warden's
// channel samples.
class WatchdogView {
 public:
  using Challenge = std::function<ChallengeAnswer(const BitString&, const BitString&, const BitString&, const State&)>;
  WatchdogView(const EncryptionScheme& scheme, std::size_t asa_ml, std::size_t asa_outl, Challenge challenge,
               Rng& coins, Rng& aux_coins)
      : scheme_(scheme), ml_(asa_ml), outl_(asa_outl), challenge_(std::move(challenge)), coins_(coins),
        aux_(aux_coins) {}

  const EncryptionScheme& scheme() const { return scheme_; }
  std::size_t asa_message_bits() const { return ml_; }
  std::size_t asa_output_length() const { return outl_; }
  ChallengeAnswer challenge(const BitString& am, const BitString& k, const BitString& m, const State& sigma) {
    ++queries_;
    return challenge_(am, k, m, sigma);
  }
  Rng& coins() { return coins_; }
  Rng& aux_coins() { return aux_; }
  std::size_t queries() const { return queries_; }

 private:
  const EncryptionScheme& scheme_;
  std::size_t ml_, outl_;
  Challenge challenge_;
  Rng& coins_;
  Rng& aux_;
  std::size_t queries_ = 0;
};

// SS-CHA-Dist: free channel samples plus the challenge oracle.
class WardenView {
 public:
  using Sampler = std::function<Document(const History&)>;
  using Challenge = std::function<ChallengeAnswer(const BitString&, const History&, const State&)>;
  WardenView(json channel_descriptor, std::size_t ml, std::size_t outl, Sampler sample, Challenge challenge,
             Rng& coins)
      : descriptor_(std::move(channel_descriptor)), ml_(ml), outl_(outl), sample_(std::move(sample)),
        challenge_(std::move(challenge)), coins_(coins) {}

  const json& channel_descriptor() const { return descriptor_; }
  std::size_t message_bits() const { return ml_; }
  std::size_t output_length() const { return outl_; }
  Document sample(const History& h) { return sample_(h); }
  ChallengeAnswer challenge(const BitString& am, const History& h, const State& sigma) {
    ++queries_;
    return challenge_(am, h, sigma);
  }
  Rng& coins() { return coins_; }
  std::size_t queries() const { return queries_; }

 private:
  json descriptor_;
  std::size_t ml_, outl_;
  Sampler sample_;
  Challenge challenge_;
  Rng& coins_;
  std::size_t queries_ = 0;
};

// RASA-Dist: the watchdog chooses the secret and every input.
class AlgorithmWatchdogView {
 public:
  using Challenge = std::function<ChallengeAnswer(const BitString&, const BitString&, const BitString&, const State&)>;
  AlgorithmWatchdogView(const RandomizedAlgorithm& alg, std::size_t asa_ml, std::size_t asa_outl, Challenge challenge,
                        Rng& coins)
      : alg_(alg), ml_(asa_ml), outl_(asa_outl), challenge_(std::move(challenge)), coins_(coins) {}

  const RandomizedAlgorithm& algorithm() const { return alg_; }
  std::size_t asa_message_bits() const { return ml_; }
  std::size_t asa_output_length() const { return outl_; }
  ChallengeAnswer challenge(const BitString& am, const BitString& secret, const BitString& x, const State& sigma) {
    ++queries_;
    return challenge_(am, secret, x, sigma);
  }
  Rng& coins() { return coins_; }
  std::size_t queries() const { return queries_; }

 private:
  const RandomizedAlgorithm& alg_;
  std::size_t ml_, outl_;
  Challenge challenge_;
  Rng& coins_;
  std::size_t queries_ = 0;
};

// Sig-Forge: a signing oracle that records Q and public verification.
class ForgerView {
 public:
  using Signer = std::function<Document(const BitString&)>;
  using Verifier = std::function<bool(const BitString&, const Document&)>;
  ForgerView(const TagSignature& sig, Signer sign, Verifier verify, Rng& coins)
      : sig_(sig), sign_(std::move(sign)), verify_(std::move(verify)), coins_(coins) {}

  std::size_t message_bits() const { return sig_.message_bits(); }
  std::size_t signature_bits() const { return sig_.signature_bits(); }
  std::size_t coin_bits() const { return sig_.coin_bits(); }
  Document sign(const BitString& m) {
    signed_.insert(m);
    return sign_(m);
  }
  bool verify(const BitString& m, const Document& sigma) {
    ++verifications_;
    return verify_(m, sigma);
  }
  Rng& coins() { return coins_; }
  const std::set<BitString>& signed_messages() const { return signed_; }
  std::size_t verifications() const { return verifications_; }

 private:
  const TagSignature& sig_;
  Signer sign_;
  Verifier verify_;
  Rng& coins_;
  std::set<BitString> signed_;
  std::size_t verifications_ = 0;
};

struct Forgery {
  BitString message;
  Document signature;
};

template <class View, class Output = bool>
struct Adversary {
  AdversaryKind kind;
  std::string name;
  std::string description;
  std::function<Output(View&)> strategy;
};

using CpaAttacker = Adversary<CpaView>;
using Watchdog = Adversary<WatchdogView>;
using Warden = Adversary<WardenView>;
using AlgorithmWatchdog = Adversary<AlgorithmWatchdogView>;
using Forger = Adversary<ForgerView, Forgery>;

}  // namespace subvertlab

#endif  // SUBVERTLAB_VIEWS_HPP_
