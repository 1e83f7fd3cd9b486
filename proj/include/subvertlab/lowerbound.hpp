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

#ifndef SUBVERTLAB_LOWERBOUND_HPP_
#define SUBVERTLAB_LOWERBOUND_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "subvertlab/asa.hpp"
#include "subvertlab/encryption.hpp"
#include "subvertlab/games.hpp"
#include "subvertlab/signature.hpp"
#include "subvertlab/views.hpp"

namespace subvertlab {

// Enc'(k, m) = (c, Sign(sk, c)) with c <- Enc(k, m); Dec' verifies first.
// Coins are the base coins followed by the signature coins. Ciphertexts are
// zero-padded to the signature's message length before signing.
class SignedScheme final : public EncryptionScheme {
 public:
  SignedScheme(std::shared_ptr<const EncryptionScheme> base, std::shared_ptr<const TagSignature> sig, KeyPair keypair)
      : base_(std::move(base)), sig_(std::move(sig)), kp_(std::move(keypair)) {
    if (sig_->message_bits() < base_->lengths().ciphertext_bits) {
      throw LengthMismatch("signature message length is shorter than the base ciphertext length");
    }
  }

  const EncryptionScheme& base() const { return *base_; }
  const TagSignature& signature() const { return *sig_; }
  const BitString& public_key() const { return kp_.pk; }

  SchemeLengths lengths() const override {
    auto L = base_->lengths();
    return {L.key_bits, L.message_bits, L.ciphertext_bits + sig_->signature_bits(), L.coin_bits + sig_->coin_bits()};
  }
  std::size_t kappa() const override { return base_->kappa(); }
  std::string id() const override { return "signed(" + base_->id() + ")"; }

  BitString pad(const Document& c) const { return concat(c, BitString(sig_->message_bits() - c.size())); }

  Document encrypt_with_coins(const BitString& k, const BitString& m, const BitString& coins) const override {
    check_inputs(k, m, coins);
    std::size_t rb = base_->lengths().coin_bits;
    Document c = base_->encrypt_with_coins(k, m, coins.slice(0, rb));
    Document sigma = sig_->sign_with_coins(kp_.sk, pad(c), coins.slice(rb, sig_->coin_bits()));
    return concat(c, sigma);
  }

  bool valid(const Document& full) const {
    std::size_t cl = base_->lengths().ciphertext_bits;
    if (full.size() != lengths().ciphertext_bits) return false;
    return sig_->verify(kp_.pk, pad(full.slice(0, cl)), full.slice(cl, sig_->signature_bits()));
  }

  std::optional<BitString> decrypt(const BitString& k, const Document& full) const override {
    if (!valid(full)) return std::nullopt;
    return base_->decrypt(k, full.slice(0, base_->lengths().ciphertext_bits));
  }

  SchemeOracle::Verifier verifier() const {
    return [this](const Document& c) { return valid(c); };
  }

  json parameters() const override {
    auto L = lengths();
    return {{"kind", "signed"}, {"kappa", kappa()}, {"r", L.coin_bits}, {"ml", L.message_bits},
            {"cl", L.ciphertext_bits}, {"t", sig_->tag_bits()}, {"base", base_->parameters()},
            {"signature", sig_->parameters()}};
  }

 private:
  std::shared_ptr<const EncryptionScheme> base_;
  std::shared_ptr<const TagSignature> sig_;
  KeyPair kp_;
};

inline std::shared_ptr<SignedScheme> make_signed_family(std::shared_ptr<const EncryptionScheme> ses,
                                                        std::shared_ptr<const TagSignature> sig, KeyPair keypair) {
  return std::make_shared<SignedScheme>(std::move(ses), std::move(sig), std::move(keypair));
}

struct PhiParams {
  std::size_t outl;
  double query;
  std::size_t ml;
};

struct PhiValue {
  long double log2_phi;
  bool exact;  // integer arithmetic only (outl * query an integral power of two)

  bool vacuous() const { return log2_phi >= 0; }
  // phi itself; +inf once it leaves the long double range.
  long double value() const { return log2_phi > 16000 ? INFINITY : std::exp2(log2_phi); }
};

// log2 phi = outl * log2(outl * query) - ml.
inline PhiValue phi(const PhiParams& p) {
  require(p.outl >= 1, "outl must be at least 1");
  require(p.query >= 1, "an attack makes at least one query per output on average");
  require(p.outl <= (std::size_t{1} << 20), "outl above 2^20 is out of range");
  double q_int = std::floor(p.query);
  if (q_int == p.query && q_int < 0x1p52) {
    unsigned __int128 prod = static_cast<unsigned __int128>(p.outl) * static_cast<std::uint64_t>(q_int);
    if ((prod & (prod - 1)) == 0) {
      long long lg = 0;
      while ((static_cast<unsigned __int128>(1) << lg) < prod) ++lg;
      long long v = static_cast<long long>(p.outl) * lg - static_cast<long long>(p.ml);
      return {static_cast<long double>(v), true};
    }
  }
  long double lg = std::log2(static_cast<long double>(p.outl) * static_cast<long double>(p.query));
  return {static_cast<long double>(p.outl) * lg - static_cast<long double>(p.ml), false};
}

// Demonstration attack: makes `queries` oracle calls, then fabricates
//   nonce || am XOR PRF_ak(nonce) || ...rest of the last answer...
// and walks the last `search_bits` bits through every value until the
// oracle's public verifier accepts. Falls back to the last oracle answer if
// no value verifies. Rate ml bits per ciphertext with outl = 1.
class FabricatingAsa final : public UniversalAsa {
 public:
  FabricatingAsa(std::size_t ml = 64, std::size_t queries = 4, std::size_t search_bits = 8, std::size_t nonce_bits = 8,
                 std::size_t kappa = 128)
      : ml_(ml), queries_(queries), search_bits_(search_bits), nonce_bits_(nonce_bits), kappa_(kappa) {
    require(queries >= 1, "at least one oracle query");
    require(search_bits >= 1 && search_bits <= 20, "search_bits must be in [1, 20]");
  }

  std::size_t message_bits() const override { return ml_; }
  std::size_t output_length() const override { return 1; }
  std::size_t key_bits() const override { return kappa_; }
  std::size_t queries() const { return queries_; }

  AsaStep encrypt(const BitString& ak, const BitString& am, const BitString& k, const BitString& m,
                  const State& sigma, EncryptionOracle& oracle, Rng& rng) const override {
    Document last;
    for (std::size_t i = 0; i < queries_; ++i) last = oracle.query(k, m, rng.bits(oracle.coin_bits()));
    if (!oracle.has_verifier()) return {last, sigma, queries_};
    std::size_t cl = oracle.ciphertext_bits();
    if (cl < nonce_bits_ + ml_ + search_bits_) throw LengthMismatch("host ciphertexts too short to fabricate");
    Document c = last;
    BitString nonce = rng.bits(nonce_bits_);
    BitString body = am ^ Prf(ak).stream(nonce, ml_);
    for (std::size_t i = 0; i < nonce_bits_; ++i) c.set(i, nonce[i]);
    for (std::size_t i = 0; i < ml_; ++i) c.set(nonce_bits_ + i, body[i]);
    std::size_t base = cl - search_bits_;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << search_bits_); ++v) {
      for (std::size_t i = 0; i < search_bits_; ++i) c.set(base + i, (v >> (search_bits_ - 1 - i)) & 1U);
      if (oracle.verify(c)) return {c, sigma, queries_};
    }
    return {last, sigma, queries_};
  }

  std::optional<BitString> extract(const BitString& ak, std::span<const Document> cs) const override {
    if (cs.size() != 1) throw WrongDocumentCount("fabricating attack emits one ciphertext");
    const Document& c = cs[0];
    if (c.size() < nonce_bits_ + ml_) return std::nullopt;
    BitString nonce = c.slice(0, nonce_bits_);
    return c.slice(nonce_bits_, ml_) ^ Prf(ak).stream(nonce, ml_);
  }

  json parameters() const override {
    return {{"kind", "fabricating"}, {"ml", ml_}, {"outl", 1}, {"queries", queries_}, {"search_bits", search_bits_}};
  }

 private:
  std::size_t ml_, queries_, search_bits_, nonce_bits_, kappa_;
};

// Oracle used inside the reduction: Enc'(k, m; r) is computed as
// c = base.Enc(k, m; r_base) followed by a call to the signing oracle.
class ForgerSigningOracle final : public EncryptionOracle {
 public:
  ForgerSigningOracle(const EncryptionScheme& base, std::size_t sig_coin_bits, std::size_t sig_bits,
                      std::size_t sig_message_bits, ForgerView& view)
      : base_(base), sig_coins_(sig_coin_bits), sig_bits_(sig_bits), sig_msg_(sig_message_bits), view_(view) {}

  std::size_t message_bits() const override { return base_.lengths().message_bits; }
  std::size_t ciphertext_bits() const override { return base_.lengths().ciphertext_bits + sig_bits_; }
  std::size_t coin_bits() const override { return base_.lengths().coin_bits + sig_coins_; }

  BitString pad(const Document& c) const { return concat(c, BitString(sig_msg_ - c.size())); }

  Document query(const BitString& k, const BitString& m, const BitString& coins) override {
    Document c = base_.encrypt_with_coins(k, m, coins.slice(0, base_.lengths().coin_bits));
    return concat(c, view_.sign(pad(c)));
  }
  bool has_verifier() const override { return true; }
  bool verify(const Document& full) override {
    std::size_t cl = base_.lengths().ciphertext_bits;
    if (full.size() != ciphertext_bits()) return false;
    return view_.verify(pad(full.slice(0, cl)), full.slice(cl, sig_bits_));
  }

  Forgery split(const Document& full) const {
    std::size_t cl = base_.lengths().ciphertext_bits;
    return {pad(full.slice(0, cl)), full.slice(cl, full.size() - cl)};
  }

 private:
  const EncryptionScheme& base_;
  std::size_t sig_coins_, sig_bits_, sig_msg_;
  ForgerView& view_;
};

// The forger of the reduction: picks ak*, am*, k*, m*, runs one encryption
// of the universal attack with the oracle above, and submits the first
// emitted ciphertext-signature pair.
inline Forger forger_from_universal_asa(std::shared_ptr<const UniversalAsa> asa,
                                        std::shared_ptr<const EncryptionScheme> base) {
  return {AdversaryKind::kForger, "from-universal-asa", "submits the first pair emitted by a universal attack",
          [asa, base](ForgerView& v) {
            Rng& rng = v.coins();
            BitString ak = asa->generate_key(rng);
            BitString am = rng.bits(asa->message_bits());
            BitString k = base->generate_key(rng);
            BitString m = rng.bits(base->lengths().message_bits);
            ForgerSigningOracle oracle(*base, v.coin_bits(), v.signature_bits(), v.message_bits(), v);
            AsaStep st = asa->encrypt(ak, am, k, m, State(), oracle, rng);
            return oracle.split(st.ciphertext);
          }};
}

struct RateReport {
  std::size_t ml = 0;
  std::size_t outl = 0;
  double bits_per_ciphertext = 0;
  double log2_phi = 0;
  double insec_hat = 0;
  double unrel_hat = 0;
  std::optional<double> forger_bound;  // 1 - insec - unrel - phi; empty once phi overflows
  std::optional<double> forger_success_hat;

  bool vacuous() const { return !forger_bound || *forger_bound <= 0; }

  json to_json() const {
    return {{"ml", ml},
            {"outl", outl},
            {"bits_per_ciphertext", bits_per_ciphertext},
            {"log2_phi", log2_phi},
            {"insec_hat", insec_hat},
            {"unrel_hat", unrel_hat},
            {"forger_bound", forger_bound ? json(*forger_bound) : json(nullptr)},
            {"forger_success_hat", forger_success_hat ? json(*forger_success_hat) : json(nullptr)}};
  }
};

// insec_hat is the largest normalized advantage among `insec`; unrel_hat and
// the forger success are read from their probability reports.
inline RateReport rate_report(std::size_t ml, std::size_t outl, double query, const std::vector<GameReport>& insec,
                              const std::optional<GameReport>& unrel, const std::optional<GameReport>& forger) {
  RateReport r;
  r.ml = ml;
  r.outl = outl;
  r.bits_per_ciphertext = static_cast<double>(ml) / static_cast<double>(outl);
  PhiValue p = phi({outl, query, ml});
  r.log2_phi = static_cast<double>(p.log2_phi);
  for (const auto& g : insec) r.insec_hat = std::max(r.insec_hat, g.normalized_advantage.value_or(g.p_hat));
  if (unrel) r.unrel_hat = unrel->p_hat;
  if (forger) r.forger_success_hat = forger->p_hat;
  long double ph = p.value();
  if (std::isfinite(static_cast<double>(ph))) r.forger_bound = static_cast<double>(1.0L - r.insec_hat - r.unrel_hat - ph);
  return r;
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_LOWERBOUND_HPP_
