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

#ifndef SUBVERTLAB_DERIVED_CHANNELS_HPP_
#define SUBVERTLAB_DERIVED_CHANNELS_HPP_

#include <memory>
#include <string>

#include "subvertlab/algorithm.hpp"
#include "subvertlab/channel.hpp"
#include "subvertlab/encryption.hpp"

namespace subvertlab {

// Channel of an encryption scheme. Histories read
//   k || m_1 || ... || m_ell || c_1 || c_2 || ...
// The empty history samples Gen, the next ell positions sample uniform
// messages, and ciphertext number r+1 samples Enc(k, m_{(r mod ell)+1}).
class SesChannel final : public Channel {
 public:
  SesChannel(std::shared_ptr<const EncryptionScheme> scheme, std::size_t ell) : scheme_(std::move(scheme)), ell_(ell) {
    require(ell >= 1, "ell must be at least 1");
  }

  const EncryptionScheme& scheme() const { return *scheme_; }
  std::shared_ptr<const EncryptionScheme> scheme_ptr() const { return scheme_; }
  std::size_t ell() const { return ell_; }

  std::size_t max_doc_len() const override {
    auto L = scheme_->lengths();
    return std::max({L.key_bits, L.message_bits, L.ciphertext_bits});
  }

  std::size_t expected_length(std::size_t position) const {
    auto L = scheme_->lengths();
    if (position == 0) return L.key_bits;
    if (position <= ell_) return L.message_bits;
    return L.ciphertext_bits;
  }

  bool accepts(const History& h) const override {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].size() != expected_length(i)) return false;
    }
    return true;
  }

  bool has_exact_pmf() const override { return scheme_->lengths().coin_bits <= Distribution::kMaxEnumerableBits; }

  json descriptor() const override {
    return {{"type", "ses"}, {"kappa", scheme_->kappa()}, {"ell", ell_}, {"scheme_id", scheme_->id()},
            {"max_doc_len", max_doc_len()}};
  }

  // The message a ciphertext at position |h| encrypts; h must be full.
  const Document& message_for(const History& h) const {
    std::size_t r = h.size() - 1 - ell_;
    return h[1 + (r % ell_)];
  }

 protected:
  Document draw(const History& h, Rng& rng) const override {
    if (h.empty()) return scheme_->generate_key(rng);
    if (h.size() <= ell_) return rng.bits(scheme_->lengths().message_bits);
    return scheme_->encrypt(h[0], message_for(h), rng);
  }

  Distribution pmf(const History& h) const override {
    if (h.empty()) return scheme_->key_distribution();
    if (h.size() <= ell_) return Distribution::uniform_bits(scheme_->lengths().message_bits);
    return scheme_->ciphertext_distribution(h[0], message_for(h));
  }

 private:
  std::shared_ptr<const EncryptionScheme> scheme_;
  std::size_t ell_;
};

// Channel of a randomized algorithm: s || x_1 || ... || x_ell || y_1 || ...
// with y_{r+1} drawn from R(s, x_{(r mod ell)+1}).
class RandAlgChannel final : public Channel {
 public:
  RandAlgChannel(std::shared_ptr<const RandomizedAlgorithm> alg, InputGenerator inputs, std::size_t ell)
      : alg_(std::move(alg)), inputs_(std::move(inputs)), ell_(ell) {
    require(ell >= 1, "ell must be at least 1");
    require(inputs_.input_bits == alg_->lengths().input_bits, "input generator length mismatch");
  }

  const RandomizedAlgorithm& algorithm() const { return *alg_; }
  const InputGenerator& inputs() const { return inputs_; }
  std::size_t ell() const { return ell_; }

  std::size_t max_doc_len() const override {
    auto L = alg_->lengths();
    return std::max({L.secret_bits, L.input_bits, L.output_bits});
  }

  std::size_t expected_length(std::size_t position) const {
    auto L = alg_->lengths();
    if (position == 0) return L.secret_bits;
    if (position <= ell_) return L.input_bits;
    return L.output_bits;
  }

  bool accepts(const History& h) const override {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].size() != expected_length(i)) return false;
    }
    return true;
  }

  bool has_exact_pmf() const override {
    return static_cast<bool>(inputs_.distribution) && alg_->lengths().coin_bits <= Distribution::kMaxEnumerableBits;
  }

  json descriptor() const override {
    return {{"type", "rand-alg"}, {"kappa", alg_->lengths().secret_bits}, {"ell", ell_}, {"scheme_id", alg_->id()},
            {"max_doc_len", max_doc_len()}};
  }

  const Document& input_for(const History& h) const {
    std::size_t r = h.size() - 1 - ell_;
    return h[1 + (r % ell_)];
  }

 protected:
  Document draw(const History& h, Rng& rng) const override {
    if (h.empty()) return alg_->generate_secret(rng);
    if (h.size() <= ell_) return inputs_.sample(rng);
    return alg_->run(h[0], input_for(h), rng);
  }

  Distribution pmf(const History& h) const override {
    if (h.empty()) return Distribution::uniform_bits(alg_->lengths().secret_bits);
    if (h.size() <= ell_) return inputs_.distribution();
    return alg_->output_distribution(h[0], input_for(h));
  }

 private:
  std::shared_ptr<const RandomizedAlgorithm> alg_;
  InputGenerator inputs_;
  std::size_t ell_;
};

}  // namespace subvertlab

#endif  // SUBVERTLAB_DERIVED_CHANNELS_HPP_
