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

#ifndef SUBVERTLAB_ASA_HPP_
#define SUBVERTLAB_ASA_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "subvertlab/algorithm.hpp"
#include "subvertlab/derived_channels.hpp"
#include "subvertlab/encryption.hpp"
#include "subvertlab/rejsam.hpp"

namespace subvertlab {

struct AsaStep {
  Document ciphertext;
  State state;
  std::size_t queries = 0;
};

// Stateless subversion of Enc: (ak, am, k, m, sigma) -> (c, sigma').
class SubstitutionAttack {
 public:
  virtual ~SubstitutionAttack() = default;

  virtual std::size_t message_bits() const = 0;
  virtual std::size_t output_length() const = 0;
  virtual std::size_t key_bits() const = 0;
  virtual AsaStep encrypt(const BitString& ak, const BitString& am, const BitString& k, const BitString& m,
                          const State& sigma, Rng& rng) const = 0;
  virtual std::optional<BitString> extract(const BitString& ak, std::span<const Document> cs) const = 0;
  virtual json parameters() const = 0;

  BitString generate_key(Rng& rng) const { return rng.bits(key_bits()); }
};

// Runs the stego encoder on history k || m^ell, answering each channel query
// with a fresh Enc(k, m). Extraction is the stego decoder.
class AsaFromStego final : public SubstitutionAttack {
 public:
  AsaFromStego(std::shared_ptr<const StegoSystem> steg, std::shared_ptr<const EncryptionScheme> ses)
      : steg_(std::move(steg)), ses_(std::move(ses)) {}

  const StegoSystem& stego() const { return *steg_; }
  const EncryptionScheme& host() const { return *ses_; }

  std::size_t message_bits() const override { return steg_->message_bits(); }
  std::size_t output_length() const override { return steg_->output_length(); }
  std::size_t key_bits() const override { return steg_->key_bits(); }

  History internal_history(const BitString& k, const BitString& m) const {
    History h;
    h.reserve(output_length() + 1);
    h.push_back(k);
    for (std::size_t i = 0; i < output_length(); ++i) h.push_back(m);
    return h;
  }

  AsaStep encrypt(const BitString& ak, const BitString& am, const BitString& k, const BitString& m,
                  const State& sigma, Rng& rng) const override {
    auto L = ses_->lengths();
    if (k.size() != L.key_bits || m.size() != L.message_bits) throw LengthMismatch("host key/message length mismatch");
    if (am.size() != message_bits()) throw LengthMismatch("hidden message must have ml bits");
    const EncryptionScheme& ses = *ses_;
    ChannelOracle oracle = [&ses, &k, &m, &rng](const History&) { return ses.encrypt(k, m, rng); };
    StegoStep st = steg_->encode(ak, am, internal_history(k, m), sigma, oracle, rng);
    if (st.document.size() != L.ciphertext_bits) {
      throw LengthMismatch("stego document length differs from the host ciphertext length");
    }
    return {std::move(st.document), std::move(st.state), st.draws};
  }

  std::optional<BitString> extract(const BitString& ak, std::span<const Document> cs) const override {
    return steg_->decode(ak, cs);
  }

  json parameters() const override {
    return {{"kind", "asa-from-stego"}, {"stego", steg_->parameters()}, {"host", ses_->parameters()}};
  }

 private:
  std::shared_ptr<const StegoSystem> steg_;
  std::shared_ptr<const EncryptionScheme> ses_;
};

struct AsaSequence {
  std::vector<Document> ciphertexts;
  State state;
  std::size_t queries = 0;
};

// for j = 1..ell: (c_j, sigma) <- AEnc(ak, am, k, m_j, sigma).
inline AsaSequence asa_enc_all(const SubstitutionAttack& asa, const BitString& ak, const BitString& am,
                               const BitString& k, const std::vector<BitString>& messages, Rng& rng,
                               State sigma = State()) {
  AsaSequence out;
  out.ciphertexts.reserve(messages.size());
  for (const auto& m : messages) {
    AsaStep st = asa.encrypt(ak, am, k, m, sigma, rng);
    sigma = std::move(st.state);
    out.queries += st.queries;
    out.ciphertexts.push_back(std::move(st.ciphertext));
  }
  out.state = std::move(sigma);
  return out;
}

// ---------------------------------------------------------------------------
// Oracle-only access for universal attacks.

// Explicit-coin encryption oracle. Exposes lengths and Enc(k, m; r) only,
// plus an optional public validity predicate for hosts whose ciphertexts are
// publicly checkable (signed ciphertexts).
class EncryptionOracle {
 public:
  virtual ~EncryptionOracle() = default;
  virtual std::size_t message_bits() const = 0;
  virtual std::size_t ciphertext_bits() const = 0;
  virtual std::size_t coin_bits() const = 0;
  virtual Document query(const BitString& k, const BitString& m, const BitString& coins) = 0;
  virtual bool has_verifier() const { return false; }
  virtual bool verify(const Document&) { return false; }
};

// Forwards to a scheme; anything else about the scheme stays hidden.
class SchemeOracle final : public EncryptionOracle {
 public:
  using Verifier = std::function<bool(const Document&)>;

  explicit SchemeOracle(const EncryptionScheme& scheme, Verifier verifier = nullptr)
      : scheme_(scheme), L_(scheme.lengths()), verifier_(std::move(verifier)) {}

  std::size_t message_bits() const override { return L_.message_bits; }
  std::size_t ciphertext_bits() const override { return L_.ciphertext_bits; }
  std::size_t coin_bits() const override { return L_.coin_bits; }
  Document query(const BitString& k, const BitString& m, const BitString& coins) override {
    return scheme_.encrypt_with_coins(k, m, coins);
  }
  bool has_verifier() const override { return static_cast<bool>(verifier_); }
  bool verify(const Document& c) override { return verifier_ && verifier_(c); }

 private:
  const EncryptionScheme& scheme_;
  SchemeLengths L_;
  Verifier verifier_;
};

struct TranscriptEntry {
  BitString k, m, coins;
  Document c;
};

struct OracleTranscript {
  std::vector<TranscriptEntry> queries;
  std::size_t count() const { return queries.size(); }

  bool contains_output(const Document& c) const {
    for (const auto& q : queries) {
      if (q.c == c) return true;
    }
    return false;
  }

  // JSON lines {trial, query_index, k_hex, m_hex, coins_hex, c_hex}.
  std::vector<json> to_json_lines(std::size_t trial) const {
    std::vector<json> out;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto& q = queries[i];
      out.push_back({{"trial", trial}, {"query_index", i}, {"k_hex", q.k.to_hex()}, {"m_hex", q.m.to_hex()},
                     {"coins_hex", q.coins.to_hex()}, {"c_hex", q.c.to_hex()}});
    }
    return out;
  }
};

class RecordingOracle final : public EncryptionOracle {
 public:
  explicit RecordingOracle(EncryptionOracle& inner) : inner_(inner) {}

  std::size_t message_bits() const override { return inner_.message_bits(); }
  std::size_t ciphertext_bits() const override { return inner_.ciphertext_bits(); }
  std::size_t coin_bits() const override { return inner_.coin_bits(); }
  Document query(const BitString& k, const BitString& m, const BitString& coins) override {
    Document c = inner_.query(k, m, coins);
    transcript_.queries.push_back({k, m, coins, c});
    return c;
  }
  bool has_verifier() const override { return inner_.has_verifier(); }
  bool verify(const Document& c) override { return inner_.verify(c); }

  const OracleTranscript& transcript() const { return transcript_; }

 private:
  EncryptionOracle& inner_;
  OracleTranscript transcript_;
};

// A substitution attack that sees the host only through an oracle.
class UniversalAsa {
 public:
  virtual ~UniversalAsa() = default;
  virtual std::size_t message_bits() const = 0;
  virtual std::size_t output_length() const = 0;
  virtual std::size_t key_bits() const = 0;
  virtual AsaStep encrypt(const BitString& ak, const BitString& am, const BitString& k, const BitString& m,
                          const State& sigma, EncryptionOracle& oracle, Rng& rng) const = 0;
  virtual std::optional<BitString> extract(const BitString& ak, std::span<const Document> cs) const = 0;
  virtual json parameters() const = 0;

  BitString generate_key(Rng& rng) const { return rng.bits(key_bits()); }
};

// Stego encoder whose channel samples are oracle calls with fresh uniform
// coins. Every emitted ciphertext is an oracle answer.
class UniversalStegoAsa final : public UniversalAsa {
 public:
  explicit UniversalStegoAsa(std::shared_ptr<const StegoSystem> steg) : steg_(std::move(steg)) {}

  std::size_t message_bits() const override { return steg_->message_bits(); }
  std::size_t output_length() const override { return steg_->output_length(); }
  std::size_t key_bits() const override { return steg_->key_bits(); }

  AsaStep encrypt(const BitString& ak, const BitString& am, const BitString& k, const BitString& m,
                  const State& sigma, EncryptionOracle& oracle, Rng& rng) const override {
    if (m.size() != oracle.message_bits()) throw LengthMismatch("host message length mismatch");
    std::size_t coins = oracle.coin_bits();
    std::size_t calls = 0;
    ChannelOracle channel = [&](const History&) {
      ++calls;
      return oracle.query(k, m, rng.bits(coins));
    };
    History h;
    h.reserve(output_length() + 1);
    h.push_back(k);
    for (std::size_t i = 0; i < output_length(); ++i) h.push_back(m);
    StegoStep st = steg_->encode(ak, am, h, sigma, channel, rng);
    return {std::move(st.document), std::move(st.state), calls};
  }

  std::optional<BitString> extract(const BitString& ak, std::span<const Document> cs) const override {
    return steg_->decode(ak, cs);
  }

  json parameters() const override { return {{"kind", "universal-stego"}, {"stego", steg_->parameters()}}; }

 private:
  std::shared_ptr<const StegoSystem> steg_;
};

// Binds a universal attack to one host scheme, making it an ordinary
// substitution attack. The optional verifier is passed to the oracle.
class BoundUniversalAsa final : public SubstitutionAttack {
 public:
  BoundUniversalAsa(std::shared_ptr<const UniversalAsa> asa, std::shared_ptr<const EncryptionScheme> ses,
                    SchemeOracle::Verifier verifier = nullptr)
      : asa_(std::move(asa)), ses_(std::move(ses)), verifier_(std::move(verifier)) {}

  std::size_t message_bits() const override { return asa_->message_bits(); }
  std::size_t output_length() const override { return asa_->output_length(); }
  std::size_t key_bits() const override { return asa_->key_bits(); }

  AsaStep encrypt(const BitString& ak, const BitString& am, const BitString& k, const BitString& m,
                  const State& sigma, Rng& rng) const override {
    SchemeOracle oracle(*ses_, verifier_);
    return asa_->encrypt(ak, am, k, m, sigma, oracle, rng);
  }

  std::optional<BitString> extract(const BitString& ak, std::span<const Document> cs) const override {
    return asa_->extract(ak, cs);
  }

  json parameters() const override {
    return {{"kind", "bound-universal"}, {"asa", asa_->parameters()}, {"host", ses_->parameters()}};
  }

 private:
  std::shared_ptr<const UniversalAsa> asa_;
  std::shared_ptr<const EncryptionScheme> ses_;
  SchemeOracle::Verifier verifier_;
};

struct QueryConfig {
  BitString ak, am, k, m;
};

// Max over configurations of the mean number of oracle calls per encryption.
inline double query_count(const UniversalAsa& asa, EncryptionOracle& oracle, const std::vector<QueryConfig>& configs,
                          std::size_t calls_per_config, Rng& rng) {
  require(!configs.empty() && calls_per_config >= 1, "query_count needs configurations and calls");
  double worst = 0;
  for (const auto& cfg : configs) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < calls_per_config; ++i) {
      RecordingOracle rec(oracle);
      AsaStep st = asa.encrypt(cfg.ak, cfg.am, cfg.k, cfg.m, State(), rec, rng);
      if (st.queries != rec.transcript().count()) throw InvariantViolation("query accounting disagrees with transcript");
      total += rec.transcript().count();
    }
    worst = std::max(worst, static_cast<double>(total) / static_cast<double>(calls_per_config));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Attacks on an arbitrary randomized algorithm R(s, x).

class AlgorithmSubstitutionAttack {
 public:
  virtual ~AlgorithmSubstitutionAttack() = default;
  virtual std::size_t message_bits() const = 0;
  virtual std::size_t output_length() const = 0;
  virtual std::size_t key_bits() const = 0;
  virtual AsaStep run(const BitString& ak, const BitString& am, const BitString& secret, const BitString& x,
                      const State& sigma, Rng& rng) const = 0;
  virtual std::optional<BitString> extract(const BitString& ak, std::span<const Document> ys) const = 0;
  virtual const RandomizedAlgorithm& algorithm() const = 0;
  virtual json parameters() const = 0;

  BitString generate_key(Rng& rng) const { return rng.bits(key_bits()); }
};

// Stego encoder run on the channel of R with history s || x^ell. Extraction
// uses the outputs only, never the inputs.
class GenericAlgorithmAsa final : public AlgorithmSubstitutionAttack {
 public:
  GenericAlgorithmAsa(std::shared_ptr<const StegoSystem> steg, std::shared_ptr<const RandomizedAlgorithm> alg,
                      InputGenerator inputs)
      : steg_(std::move(steg)), alg_(alg), channel_(std::move(alg), std::move(inputs), steg_->output_length()) {}

  std::size_t message_bits() const override { return steg_->message_bits(); }
  std::size_t output_length() const override { return steg_->output_length(); }
  std::size_t key_bits() const override { return steg_->key_bits(); }
  const RandomizedAlgorithm& algorithm() const override { return *alg_; }
  const RandAlgChannel& channel() const { return channel_; }

  AsaStep run(const BitString& ak, const BitString& am, const BitString& secret, const BitString& x,
              const State& sigma, Rng& rng) const override {
    History h;
    h.reserve(output_length() + 1);
    h.push_back(secret);
    for (std::size_t i = 0; i < output_length(); ++i) h.push_back(x);
    StegoStep st = steg_->encode(ak, am, h, sigma, channel_oracle(channel_, rng), rng);
    return {std::move(st.document), std::move(st.state), st.draws};
  }

  std::optional<BitString> extract(const BitString& ak, std::span<const Document> ys) const override {
    return steg_->decode(ak, ys);
  }

  json parameters() const override {
    return {{"kind", "generic-algorithm"}, {"stego", steg_->parameters()}, {"algorithm", alg_->id()}};
  }

 private:
  std::shared_ptr<const StegoSystem> steg_;
  std::shared_ptr<const RandomizedAlgorithm> alg_;
  RandAlgChannel channel_;
};

// For deterministic R: keeps y = R(s, x) except its first bit, which becomes
// am[j] XOR mask with (j, mask) derived from PRF(ak, y without its first
// bit). Reliable, but outputs leave the support of R whenever the bit flips.
class ForcedEmbeddingAsa final : public AlgorithmSubstitutionAttack {
 public:
  ForcedEmbeddingAsa(std::shared_ptr<const RandomizedAlgorithm> alg, std::size_t ml, std::size_t outl,
                     std::size_t kappa = 128)
      : alg_(std::move(alg)), ml_(ml), outl_(outl), kappa_(kappa) {
    require_power_of_two_ml(ml);
    require(alg_->lengths().output_bits >= 2, "outputs need at least two bits");
  }

  std::size_t message_bits() const override { return ml_; }
  std::size_t output_length() const override { return outl_; }
  std::size_t key_bits() const override { return kappa_; }
  const RandomizedAlgorithm& algorithm() const override { return *alg_; }

  AsaStep run(const BitString& ak, const BitString& am, const BitString& secret, const BitString& x,
              const State& sigma, Rng& rng) const override {
    Document y = alg_->run(secret, x, rng);
    BitIndex bj = prf_split_eval(Prf(ak), y.slice(1, y.size() - 1), ml_);
    y.set(0, am[bj.j] != bj.b);
    return {std::move(y), sigma, 1};
  }

  std::optional<BitString> extract(const BitString& ak, std::span<const Document> ys) const override {
    if (ys.size() != outl_) throw WrongDocumentCount("extractor expects outl outputs");
    Prf prf(ak);
    BitString am(ml_);
    std::vector<bool> seen(ml_, false);
    for (const auto& y : ys) {
      BitIndex bj = prf_split_eval(prf, y.slice(1, y.size() - 1), ml_);
      am.set(bj.j, y[0] != bj.b);
      seen[bj.j] = true;
    }
    for (bool s : seen) {
      if (!s) return std::nullopt;
    }
    return am;
  }

  json parameters() const override {
    return {{"kind", "forced-embedding"}, {"algorithm", alg_->id()}, {"ml", ml_}, {"outl", outl_}};
  }

 private:
  std::shared_ptr<const RandomizedAlgorithm> alg_;
  std::size_t ml_, outl_, kappa_;
};

// An encryption ASA viewed as an attack on R = Enc.
class EncryptionAsaAsAlgorithmAsa final : public AlgorithmSubstitutionAttack {
 public:
  EncryptionAsaAsAlgorithmAsa(std::shared_ptr<const SubstitutionAttack> asa,
                              std::shared_ptr<const EncryptionAlgorithm> alg)
      : asa_(std::move(asa)), alg_(std::move(alg)) {}
  std::size_t message_bits() const override { return asa_->message_bits(); }
  std::size_t output_length() const override { return asa_->output_length(); }
  std::size_t key_bits() const override { return asa_->key_bits(); }
  const RandomizedAlgorithm& algorithm() const override { return *alg_; }
  AsaStep run(const BitString& ak, const BitString& am, const BitString& secret, const BitString& x,
              const State& sigma, Rng& rng) const override {
    return asa_->encrypt(ak, am, secret, x, sigma, rng);
  }
  std::optional<BitString> extract(const BitString& ak, std::span<const Document> ys) const override {
    return asa_->extract(ak, ys);
  }
  json parameters() const override { return asa_->parameters(); }

 private:
  std::shared_ptr<const SubstitutionAttack> asa_;
  std::shared_ptr<const EncryptionAlgorithm> alg_;
};

}  // namespace subvertlab

#endif  // SUBVERTLAB_ASA_HPP_
