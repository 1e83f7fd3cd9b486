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

#ifndef SUBVERTLAB_DISTRIBUTION_HPP_
#define SUBVERTLAB_DISTRIBUTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "subvertlab/bits.hpp"
#include "subvertlab/errors.hpp"

namespace subvertlab {

// Finite distribution over documents. Either uniform over all n-bit strings
// (kept implicit so 128-bit key spaces are representable) or an explicit
// outcome table. Probabilities of toy objects are dyadic, so doubles hold
// them exactly and equality tests are exact.
class Distribution {
 public:
  static constexpr std::size_t kMaxEnumerableBits = 20;

  static Distribution uniform_bits(std::size_t n) {
    Distribution d;
    d.uniform_width_ = n;
    return d;
  }

  static Distribution point(const Document& x) {
    Distribution d;
    d.table_[x] = 1.0;
    return d;
  }

  static Distribution from_table(std::map<Document, double> table) {
    Distribution d;
    for (auto& [k, p] : table) {
      if (p > 0) d.table_[k] = p;
    }
    return d;
  }

  bool is_uniform() const { return uniform_width_.has_value(); }

  double probability(const Document& x) const {
    if (uniform_width_) return x.size() == *uniform_width_ ? std::ldexp(1.0, -static_cast<int>(*uniform_width_)) : 0.0;
    auto it = table_.find(x);
    return it == table_.end() ? 0.0 : it->second;
  }

  double max_probability() const {
    if (uniform_width_) return std::ldexp(1.0, -static_cast<int>(*uniform_width_));
    double m = 0;
    for (const auto& [k, p] : table_) m = std::max(m, p);
    return m;
  }

  double min_entropy() const { return -std::log2(max_probability()); }

  bool enumerable() const { return !uniform_width_ || *uniform_width_ <= kMaxEnumerableBits; }

  // Explicit table; materializes uniform distributions up to 2^20 outcomes.
  std::map<Document, double> table() const {
    if (!uniform_width_) return table_;
    require(enumerable(), "distribution too large to enumerate");
    std::map<Document, double> out;
    double p = max_probability();
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << *uniform_width_); ++v) {
      out[BitString::from_uint(v, *uniform_width_)] = p;
    }
    return out;
  }

  std::size_t support_size() const {
    return uniform_width_ ? (std::size_t{1} << std::min<std::size_t>(*uniform_width_, 63)) : table_.size();
  }

  double total_mass() const {
    if (uniform_width_) return 1.0;
    double s = 0;
    for (const auto& [k, p] : table_) s += p;
    return s;
  }

  bool operator==(const Distribution& o) const {
    if (uniform_width_ && o.uniform_width_) return *uniform_width_ == *o.uniform_width_;
    return table() == o.table();
  }

 private:
  std::optional<std::size_t> uniform_width_;
  std::map<Document, double> table_;
};

inline double total_variation(const Distribution& a, const Distribution& b) {
  auto ta = a.table();
  auto tb = b.table();
  double s = 0;
  for (const auto& [k, p] : ta) {
    auto it = tb.find(k);
    s += std::fabs(p - (it == tb.end() ? 0.0 : it->second));
  }
  for (const auto& [k, p] : tb) {
    if (!ta.count(k)) s += p;
  }
  return s / 2;
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_DISTRIBUTION_HPP_
