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

#ifndef SUBVERTLAB_CHANNEL_HPP_
#define SUBVERTLAB_CHANNEL_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "subvertlab/bits.hpp"
#include "subvertlab/distribution.hpp"
#include "subvertlab/errors.hpp"
#include "subvertlab/rng.hpp"

namespace subvertlab {

// History-indexed family of document distributions. Implementations are
// immutable; all randomness comes from the caller's Rng.
class Channel {
 public:
  virtual ~Channel() = default;

  virtual std::size_t max_doc_len() const = 0;
  virtual bool accepts(const History& h) const = 0;
  virtual bool has_exact_pmf() const { return false; }
  virtual json descriptor() const = 0;

  Document sample(const History& h, Rng& rng) const {
    if (!accepts(h)) throw InvalidHistory("history rejected by " + descriptor().value("type", std::string("channel")));
    return draw(h, rng);
  }

  Distribution exact_pmf(const History& h) const {
    if (!has_exact_pmf()) throw NoExactPmf("channel has no exact pmf");
    if (!accepts(h)) throw InvalidHistory("history rejected by channel");
    return pmf(h);
  }

 protected:
  virtual Document draw(const History& h, Rng& rng) const = 0;
  virtual Distribution pmf(const History&) const { throw NoExactPmf("channel has no exact pmf"); }
};

// Stateless channel, uniform on n-bit documents for every history.
class UniformChannel final : public Channel {
 public:
  explicit UniformChannel(std::size_t nbits) : n_(nbits) {}
  std::size_t max_doc_len() const override { return n_; }
  bool accepts(const History& h) const override {
    for (const auto& d : h) {
      if (d.size() != n_) return false;
    }
    return true;
  }
  bool has_exact_pmf() const override { return true; }
  json descriptor() const override {
    return {{"type", "uniform"}, {"kappa", nullptr}, {"ell", nullptr}, {"scheme_id", nullptr}, {"max_doc_len", n_}};
  }

 protected:
  Document draw(const History&, Rng& rng) const override { return rng.bits(n_); }
  Distribution pmf(const History&) const override { return Distribution::uniform_bits(n_); }

 private:
  std::size_t n_;
};

// Point-mass channel: min-entropy zero.
class ConstantChannel final : public Channel {
 public:
  explicit ConstantChannel(Document doc) : doc_(std::move(doc)) {}
  std::size_t max_doc_len() const override { return doc_.size(); }
  bool accepts(const History& h) const override {
    for (const auto& d : h) {
      if (d != doc_) return false;
    }
    return true;
  }
  bool has_exact_pmf() const override { return true; }
  json descriptor() const override {
    return {{"type", "constant"}, {"kappa", nullptr}, {"ell", nullptr}, {"scheme_id", nullptr}, {"max_doc_len", doc_.size()}};
  }

 protected:
  Document draw(const History&, Rng&) const override { return doc_; }
  Distribution pmf(const History&) const override { return Distribution::point(doc_); }

 private:
  Document doc_;
};

// Stateless channel with an explicit outcome table, sampled by inversion.
class TableChannel final : public Channel {
 public:
  explicit TableChannel(Distribution dist) : dist_(std::move(dist)) {
    for (const auto& [d, p] : dist_.table()) {
      outcomes_.push_back(d);
      cumulative_.push_back((cumulative_.empty() ? 0.0 : cumulative_.back()) + p);
      max_len_ = std::max(max_len_, d.size());
    }
    require(!outcomes_.empty(), "table channel needs at least one outcome");
  }
  std::size_t max_doc_len() const override { return max_len_; }
  bool accepts(const History& h) const override {
    for (const auto& d : h) {
      if (dist_.probability(d) == 0) return false;
    }
    return true;
  }
  bool has_exact_pmf() const override { return true; }
  json descriptor() const override {
    return {{"type", "table"}, {"kappa", nullptr}, {"ell", nullptr}, {"scheme_id", nullptr}, {"max_doc_len", max_len_}};
  }

 protected:
  Document draw(const History&, Rng& rng) const override {
    double u = rng.uniform01() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return outcomes_[static_cast<std::size_t>(it - cumulative_.begin())];
  }
  Distribution pmf(const History&) const override { return dist_; }

 private:
  Distribution dist_;
  std::vector<Document> outcomes_;
  std::vector<double> cumulative_;
  std::size_t max_len_ = 0;
};

// Self-delimiting history encoding: per document a 32-bit big-endian bit
// length, then the payload zero-padded to a byte boundary.
inline std::vector<std::uint8_t> serialize_history(const History& h) {
  std::vector<std::uint8_t> out;
  for (const auto& d : h) {
    auto n = static_cast<std::uint32_t>(d.size());
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (24 - 8 * i)));
    out.insert(out.end(), d.bytes().begin(), d.bytes().end());
  }
  return out;
}

inline History deserialize_history(const std::vector<std::uint8_t>& bytes) {
  History h;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (pos + 4 > bytes.size()) throw InvalidHistory("truncated length prefix");
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n = (n << 8) | bytes[pos + static_cast<std::size_t>(i)];
    pos += 4;
    std::size_t nbytes = (n + 7) / 8;
    if (pos + nbytes > bytes.size()) throw InvalidHistory("truncated document payload");
    std::vector<std::uint8_t> payload(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + nbytes));
    if (n % 8 && (payload.back() & (0xFF >> (n % 8)))) throw InvalidHistory("nonzero padding bits");
    h.push_back(BitString::from_bytes(std::move(payload), n));
    pos += nbytes;
  }
  return h;
}

inline std::string history_to_hex(const History& h) {
  auto bytes = serialize_history(h);
  return BitString::from_bytes(bytes, bytes.size() * 8).to_hex();
}

inline History history_from_hex(const std::string& hex) {
  if (hex.size() % 2) throw InvalidHistory("odd hex length");
  return deserialize_history(BitString::from_hex(hex, hex.size() * 4).bytes());
}

struct MinEntropyReport {
  enum class Method { kExact, kCollisionEstimate };
  double bits = 0;
  Method method = Method::kExact;
  std::size_t sample_count = 0;

  json to_json() const {
    return {{"bits", bits},
            {"method", method == Method::kExact ? "exact" : "collision-estimate"},
            {"sample_count", sample_count}};
  }
};

inline MinEntropyReport min_entropy_exact(const Channel& channel, const std::vector<History>& histories) {
  if (!channel.has_exact_pmf()) throw NoExactPmf("min_entropy_exact needs an exact pmf");
  require(!histories.empty(), "history set must be nonempty");
  double bits = std::numeric_limits<double>::infinity();
  for (const auto& h : histories) bits = std::min(bits, channel.exact_pmf(h).min_entropy());
  return {bits == 0 ? 0.0 : bits, MinEntropyReport::Method::kExact, 0};
}

// -log2 of the empirical pairwise collision frequency (Renyi-2 entropy, a
// lower bound on Shannon entropy and an upper bound on min-entropy). With no
// collision at all the estimator's resolution log2(pairs) is reported.
inline MinEntropyReport min_entropy_estimate(const Channel& channel, const History& h, std::size_t n, Rng& rng) {
  require(n >= 2, "collision estimate needs at least two samples");
  std::unordered_map<Document, std::uint64_t, BitStringHash> counts;
  for (std::size_t i = 0; i < n; ++i) ++counts[channel.sample(h, rng)];
  long double collisions = 0;
  for (const auto& [d, c] : counts) collisions += static_cast<long double>(c) * (c - 1) / 2;
  long double pairs = static_cast<long double>(n) * (n - 1) / 2;
  double bits = collisions == 0 ? static_cast<double>(std::log2(pairs))
                                : static_cast<double>(-std::log2(collisions / pairs));
  return {bits == 0 ? 0.0 : bits, MinEntropyReport::Method::kCollisionEstimate, n};
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_CHANNEL_HPP_
