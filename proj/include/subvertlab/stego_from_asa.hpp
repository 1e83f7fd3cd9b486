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

#ifndef SUBVERTLAB_STEGO_FROM_ASA_HPP_
#define SUBVERTLAB_STEGO_FROM_ASA_HPP_

#include <memory>
#include <optional>
#include <span>

#include "subvertlab/asa.hpp"
#include "subvertlab/derived_channels.hpp"
#include "subvertlab/rejsam.hpp"
#include "subvertlab/views.hpp"

namespace subvertlab {

// Stegosystem built from an attack against `ses`. It runs on the channel of
// `ses` with ell = asa.outl: the key, ell messages, then ell subverted
// ciphertexts, 2*ell + 1 documents in total. Only the last ell documents
// carry the hidden message.
class WrappedStego final : public StegoSystem {
 public:
  WrappedStego(std::shared_ptr<const SubstitutionAttack> asa, std::shared_ptr<const EncryptionScheme> ses)
      : asa_(std::move(asa)), ses_(ses), channel_(std::move(ses), asa_->output_length()) {}

  const SesChannel& channel() const { return channel_; }
  std::size_t ell() const { return asa_->output_length(); }

  std::size_t message_bits() const override { return asa_->message_bits(); }
  std::size_t output_length() const override { return 2 * ell() + 1; }
  std::size_t key_bits() const override { return asa_->key_bits(); }

  StegoStep encode(const BitString& ak, const BitString& am, const History& h, const State& sigma,
                   const ChannelOracle&, Rng& rng) const override {
    if (!channel_.accepts(h)) throw InvalidHistory("history does not follow k || m_1..m_ell || c_1..");
    if (h.empty()) return {ses_->generate_key(rng), sigma, 0, true};
    if (h.size() <= ell()) return {rng.bits(ses_->lengths().message_bits), sigma, 0, true};
    AsaStep st = asa_->encrypt(ak, am, h[0], channel_.message_for(h), sigma, rng);
    return {std::move(st.ciphertext), std::move(st.state), st.queries, true};
  }

  std::optional<BitString> decode(const BitString& ak, std::span<const Document> docs) const override {
    if (docs.size() != output_length()) {
      throw WrongDocumentCount("wrapped decoder expects " + std::to_string(output_length()) + " documents");
    }
    return asa_->extract(ak, docs.subspan(ell() + 1, ell()));
  }

  json parameters() const override {
    return {{"kind", "wrapped-stego"}, {"asa", asa_->parameters()}, {"outl", output_length()}};
  }

 private:
  std::shared_ptr<const SubstitutionAttack> asa_;
  std::shared_ptr<const EncryptionScheme> ses_;
  SesChannel channel_;
};

// Watchdog that runs `warden` against the channel of the watchdog's host
// scheme. Channel queries are simulated from aux_coins (Gen, uniform
// message, or Enc(k, m_{(r mod ell)+1})); challenges on full histories are
// forwarded to the watchdog's oracle; challenges on shorter histories are
// answered like channel queries, since the wrapped encoder samples the
// channel there.
inline Watchdog wrapped_warden_to_watchdog(Warden warden) {
  Watchdog w;
  w.kind = AdversaryKind::kWatchdog;
  w.name = "wrapped:" + warden.name;
  w.description = "simulates warden '" + warden.name + "' on the channel of the host scheme";
  w.strategy = [warden](WatchdogView& wv) {
    const EncryptionScheme& scheme = wv.scheme();
    std::size_t ell = wv.asa_output_length();
    SesChannel channel(std::shared_ptr<const EncryptionScheme>(std::shared_ptr<void>(), &scheme), ell);
    Rng& aux = wv.aux_coins();
    auto simulate = [&channel, &aux](const History& h) { return channel.sample(h, aux); };
    WardenView view(
        channel.descriptor(), wv.asa_message_bits(), 2 * ell + 1, simulate,
        [&](const BitString& am, const History& h, const State& sigma) -> ChallengeAnswer {
          if (!channel.accepts(h)) throw InvalidHistory("warden challenged with an invalid history");
          if (h.size() <= ell) return {simulate(h), sigma};
          ChallengeAnswer a = wv.challenge(am, h[0], channel.message_for(h), sigma);
          return a;
        },
        wv.coins());
    return warden.strategy(view);
  };
  return w;
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_STEGO_FROM_ASA_HPP_
