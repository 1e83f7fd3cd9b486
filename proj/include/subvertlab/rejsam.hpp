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

#ifndef SUBVERTLAB_REJSAM_HPP_
#define SUBVERTLAB_REJSAM_HPP_

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "subvertlab/bits.hpp"
#include "subvertlab/channel.hpp"
#include "subvertlab/distribution.hpp"
#include "subvertlab/errors.hpp"
#include "subvertlab/prf.hpp"
#include "subvertlab/rng.hpp"

namespace subvertlab {

// Sampling access to C_h handed to an encoder.
using ChannelOracle = std::function<Document(const History&)>;

inline ChannelOracle channel_oracle(const Channel& channel, Rng& rng) {
  return [&channel, &rng](const History& h) { return channel.sample(h, rng); };
}

// ceil(n * (ln n + beta)) for the n = ceil(ml / block_bits) coupons. The
// small slack keeps exact products such as 16 * 16 from rounding up.
inline std::size_t outl_for(std::size_t ml, double beta, std::size_t block_bits = 1) {
  require_power_of_two_ml(ml);
  require(beta > 0, "beta must be positive");
  require(block_bits >= 1, "block_bits must be at least 1");
  double n = static_cast<double>((ml + block_bits - 1) / block_bits);
  return static_cast<std::size_t>(std::ceil(n * (std::log(n) + beta) - 1e-9));
}

inline double default_beta(std::size_t ml) {
  double b = static_cast<double>(ml) - std::log(static_cast<double>(ml));
  return b > 0 ? b : 1.0;
}

struct StegoParams {
  std::size_t kappa = 128;
  std::size_t ml = 8;
  std::size_t s = 64;
  double beta = std::numeric_limits<double>::quiet_NaN();  // NaN selects ml - ln ml
  std::size_t block_bits = 1;
  std::size_t outl = 0;  // 0 selects outl_for(ml, beta, block_bits)

  double effective_beta() const { return std::isnan(beta) ? default_beta(ml) : beta; }
  std::size_t blocks() const { return (ml + block_bits - 1) / block_bits; }
  std::size_t padded_bits() const { return blocks() * block_bits; }
  std::size_t effective_outl() const { return outl ? outl : outl_for(ml, effective_beta(), block_bits); }

  void validate() const {
    require_power_of_two_ml(ml);
    require(s >= 1, "s must be at least 1");
    require(kappa >= 1, "kappa must be positive");
    require(block_bits >= 1 && block_bits <= 64, "block_bits must be in [1, 64]");
    require(block_bits <= ml, "block_bits must not exceed ml");
  }

  json to_json() const {
    return {{"kappa", kappa}, {"ml", ml}, {"s", s}, {"beta", effective_beta()}, {"block_bits", block_bits},
            {"outl", effective_outl()}};
  }
};

struct StegoStep {
  Document document;
  State state;
  std::size_t draws = 0;
  bool matched = false;
};

// One document of the bit variant: draw d <- C_h until am[j] = b or more than
// s draws were made. At most s + 1 draws; the last draw is emitted even if
// it does not match. sigma is passed through untouched.
inline StegoStep rejsam_encode_step(const Prf& prf, const BitString& am, const History& h, const State& sigma,
                                    const ChannelOracle& oracle, std::size_t s) {
  std::size_t ml = am.size();
  std::size_t i = 0;
  Document d;
  do {
    d = oracle(h);
    ++i;
    BitIndex bj = prf_split_eval(prf, d, ml);
    if (am[bj.j] == bj.b) return {std::move(d), sigma, i, true};
  } while (i <= s);
  return {std::move(d), sigma, i, false};
}

inline BitString pad_message(const BitString& am, std::size_t padded_bits) {
  return concat(am, BitString(padded_bits - am.size()));
}

// Block variant: the PRF yields (v, j) and the draw is accepted when block j
// of the zero-padded message equals v.
inline StegoStep rejsam_block_encode_step(const Prf& prf, const BitString& padded_am, std::size_t block_bits,
                                          const History& h, const State& sigma, const ChannelOracle& oracle,
                                          std::size_t s) {
  std::size_t nblocks = padded_am.size() / block_bits;
  std::size_t i = 0;
  Document d;
  do {
    d = oracle(h);
    ++i;
    BlockIndex vj = prf_block_split_eval(prf, d, block_bits, nblocks);
    if (padded_am.read_uint(vj.j * block_bits, block_bits) == vj.v) return {std::move(d), sigma, i, true};
  } while (i <= s);
  return {std::move(d), sigma, i, false};
}

// Every document sets position j to b; later documents overwrite earlier
// ones. Returns nullopt when some position was never set.
inline std::optional<BitString> rejsam_decode(const Prf& prf, std::span<const Document> docs, std::size_t ml) {
  BitString am(ml);
  std::vector<bool> seen(ml, false);
  for (const auto& d : docs) {
    BitIndex bj = prf_split_eval(prf, d, ml);
    am.set(bj.j, bj.b);
    seen[bj.j] = true;
  }
  for (bool s : seen) {
    if (!s) return std::nullopt;
  }
  return am;
}

inline std::optional<BitString> rejsam_block_decode(const Prf& prf, std::span<const Document> docs, std::size_t ml,
                                                    std::size_t block_bits) {
  std::size_t nblocks = (ml + block_bits - 1) / block_bits;
  BitString padded(nblocks * block_bits);
  std::vector<bool> seen(nblocks, false);
  for (const auto& d : docs) {
    BlockIndex vj = prf_block_split_eval(prf, d, block_bits, nblocks);
    for (std::size_t t = 0; t < block_bits; ++t) padded.set(vj.j * block_bits + t, (vj.v >> (block_bits - 1 - t)) & 1U);
    seen[vj.j] = true;
  }
  for (bool s : seen) {
    if (!s) return std::nullopt;
  }
  return padded.slice(0, ml);
}

// Keyed encoder/decoder pair over an abstract channel oracle. `rng` feeds any
// randomness the encoder uses besides channel samples.
class StegoSystem {
 public:
  virtual ~StegoSystem() = default;

  virtual std::size_t message_bits() const = 0;
  virtual std::size_t output_length() const = 0;
  virtual std::size_t key_bits() const = 0;
  virtual StegoStep encode(const BitString& ak, const BitString& am, const History& h, const State& sigma,
                           const ChannelOracle& oracle, Rng& rng) const = 0;
  virtual std::optional<BitString> decode(const BitString& ak, std::span<const Document> docs) const = 0;
  virtual json parameters() const = 0;

  BitString generate_key(Rng& rng) const { return rng.bits(key_bits()); }
};

class RejSam final : public StegoSystem {
 public:
  explicit RejSam(StegoParams p) : p_(p), outl_(p.effective_outl()) { p_.validate(); }

  const StegoParams& params() const { return p_; }
  std::size_t message_bits() const override { return p_.ml; }
  std::size_t output_length() const override { return outl_; }
  std::size_t key_bits() const override { return p_.kappa; }

  StegoStep encode(const BitString& ak, const BitString& am, const History& h, const State& sigma,
                   const ChannelOracle& oracle, Rng&) const override {
    return encode_with(Prf(ak), am, h, sigma, oracle);
  }

  StegoStep encode_with(const Prf& prf, const BitString& am, const History& h, const State& sigma,
                        const ChannelOracle& oracle) const {
    if (am.size() != p_.ml) throw LengthMismatch("hidden message must have ml bits");
    if (p_.block_bits == 1) return rejsam_encode_step(prf, am, h, sigma, oracle, p_.s);
    return rejsam_block_encode_step(prf, pad_message(am, p_.padded_bits()), p_.block_bits, h, sigma, oracle, p_.s);
  }

  std::optional<BitString> decode(const BitString& ak, std::span<const Document> docs) const override {
    if (docs.size() != outl_) {
      throw WrongDocumentCount("decoder expects " + std::to_string(outl_) + " documents, got " +
                               std::to_string(docs.size()));
    }
    Prf prf(ak);
    if (p_.block_bits == 1) return rejsam_decode(prf, docs, p_.ml);
    return rejsam_block_decode(prf, docs, p_.ml, p_.block_bits);
  }

  json parameters() const override {
    json j = p_.to_json();
    j["kind"] = "rejsam";
    return j;
  }

 private:
  StegoParams p_;
  std::size_t outl_;
};

struct EncodedSequence {
  std::vector<Document> documents;
  State state;
  std::size_t draws = 0;
};

// for j = 1..ell: (d_j, sigma) <- SEnc(ak, am, h, sigma); h = h || d_j.
inline EncodedSequence encode_sequence(const StegoSystem& steg, const BitString& ak, const BitString& am, History h,
                                       std::size_t ell, const ChannelOracle& oracle, Rng& rng,
                                       State sigma = State()) {
  EncodedSequence out;
  out.documents.reserve(ell);
  for (std::size_t j = 0; j < ell; ++j) {
    StegoStep st = steg.encode(ak, am, h, sigma, oracle, rng);
    sigma = std::move(st.state);
    out.draws += st.draws;
    h.push_back(st.document);
    out.documents.push_back(std::move(st.document));
  }
  out.state = std::move(sigma);
  return out;
}

// One restart segment: the encoder starts over from `history` and emits
// `length` documents.
struct RebootSegment {
  History history;
  std::size_t length;
};

inline std::vector<Document> encode_rebooted(const StegoSystem& steg, const BitString& ak, const BitString& am,
                                             const std::vector<RebootSegment>& schedule, const ChannelOracle& oracle,
                                             Rng& rng) {
  std::size_t total = 0;
  for (const auto& seg : schedule) total += seg.length;
  if (total != steg.output_length()) {
    throw ScheduleMismatch("schedule lengths sum to " + std::to_string(total) + ", expected " +
                           std::to_string(steg.output_length()));
  }
  std::vector<Document> docs;
  for (const auto& seg : schedule) {
    auto part = encode_sequence(steg, ak, am, seg.history, seg.length, oracle, rng);
    docs.insert(docs.end(), part.documents.begin(), part.documents.end());
  }
  return docs;
}

// Exact law of one emitted document for a fixed key and message on a
// history whose channel law is `cover`.
inline Distribution rejsam_step_distribution(const Prf& prf, const BitString& am, const Distribution& cover,
                                             std::size_t s) {
  auto table = cover.table();
  double g = 0;
  std::map<Document, bool> good;
  for (const auto& [d, p] : table) {
    BitIndex bj = prf_split_eval(prf, d, am.size());
    good[d] = am[bj.j] == bj.b;
    if (good[d]) g += p;
  }
  double miss_all = std::pow(1 - g, static_cast<double>(s));
  double accept_weight = g > 0 ? (1 - miss_all) / g : 0.0;
  std::map<Document, double> out;
  for (const auto& [d, p] : table) out[d] = p * ((good[d] ? accept_weight : 0.0) + miss_all);
  return Distribution::from_table(std::move(out));
}

// Exact law of one emitted document averaged over an ideal random function.
// Each document is independently good with probability 2^-block_bits. The
// cover probabilities must be multiples of 2^-unit_bits; the mass of the good
// set is tracked exactly as an integer count of units.
inline Distribution rejsam_ideal_step_distribution(const Distribution& cover, std::size_t s, std::size_t unit_bits,
                                                   std::size_t block_bits = 1) {
  require(unit_bits <= 24, "unit too fine for exact enumeration");
  auto table = cover.table();
  const double unit = std::ldexp(1.0, -static_cast<int>(unit_bits));
  const std::size_t total = std::size_t{1} << unit_bits;
  const double q = std::ldexp(1.0, -static_cast<int>(block_bits));
  std::vector<std::size_t> units;
  for (const auto& [d, p] : table) {
    double u = p / unit;
    require(u == std::floor(u), "cover probabilities must be multiples of the unit");
    units.push_back(static_cast<std::size_t>(u));
  }
  // dist_without[i][g] = Pr[good mass of all documents except i equals g].
  // Built from prefix and suffix convolutions.
  auto add = [&](const std::vector<double>& f, std::size_t w) {
    std::vector<double> out(total + 1, 0.0);
    for (std::size_t g = 0; g <= total; ++g) {
      if (f[g] == 0) continue;
      out[g] += f[g] * (1 - q);
      out[g + w] += f[g] * q;
    }
    return out;
  };
  std::size_t n = units.size();
  std::vector<std::vector<double>> prefix(n + 1, std::vector<double>(total + 1, 0.0));
  std::vector<std::vector<double>> suffix(n + 1, std::vector<double>(total + 1, 0.0));
  prefix[0][0] = 1;
  suffix[n][0] = 1;
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = add(prefix[i], units[i]);
  for (std::size_t i = n; i-- > 0;) suffix[i] = add(suffix[i + 1], units[i]);

  auto weight = [&](double g, bool good) {
    double miss_all = std::pow(1 - g, static_cast<double>(s));
    return (good && g > 0 ? (1 - miss_all) / g : 0.0) + miss_all;
  };
  std::map<Document, double> out;
  std::size_t i = 0;
  for (const auto& [d, p] : table) {
    // Convolve prefix[i] and suffix[i+1] for the others' mass.
    std::vector<double> others(total + 1, 0.0);
    for (std::size_t a = 0; a <= total; ++a) {
      if (prefix[i][a] == 0) continue;
      for (std::size_t b = 0; a + b <= total; ++b) others[a + b] += prefix[i][a] * suffix[i + 1][b];
    }
    double acc = 0;
    for (std::size_t g = 0; g <= total; ++g) {
      if (others[g] == 0) continue;
      double mass_bad = static_cast<double>(g) * unit;
      double mass_good = static_cast<double>(g + units[i]) * unit;
      acc += others[g] * (q * weight(mass_good, true) + (1 - q) * weight(mass_bad, false));
    }
    out[d] = p * acc;
    ++i;
  }
  return Distribution::from_table(std::move(out));
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_REJSAM_HPP_
