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

#ifndef SUBVERTLAB_BITS_HPP_
#define SUBVERTLAB_BITS_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace subvertlab {

using json = nlohmann::json;

// Fixed-length bit string. Bit 0 is the most significant bit of byte 0.
// Unused trailing bits of the last byte are always zero, so byte-wise
// comparison and hashing agree with bit-wise equality.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits) : bytes_((nbits + 7) / 8, 0), nbits_(nbits) {}

  static BitString from_bytes(std::vector<std::uint8_t> bytes, std::size_t nbits) {
    if (bytes.size() != (nbits + 7) / 8) {
      throw std::invalid_argument("BitString: byte count does not match bit length");
    }
    BitString out;
    out.bytes_ = std::move(bytes);
    out.nbits_ = nbits;
    out.clear_padding();
    return out;
  }

  // Low `nbits` bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t nbits) {
    BitString out(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
      std::size_t shift = nbits - 1 - i;
      out.set(i, shift < 64 && ((value >> shift) & 1U));
    }
    return out;
  }

  static BitString from_hex(std::string_view hex, std::size_t nbits) {
    if (hex.size() != 2 * ((nbits + 7) / 8)) {
      throw std::invalid_argument("BitString: hex length does not match bit length");
    }
    std::vector<std::uint8_t> bytes(hex.size() / 2);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      bytes[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    BitString out = from_bytes(std::move(bytes), nbits);
    return out;
  }

  static BitString from_bit_text(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] != '0' && text[i] != '1') throw std::invalid_argument("BitString: expected 0/1");
      out.set(i, text[i] == '1');
    }
    return out;
  }

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  bool get(std::size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1U; }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool v) {
    std::uint8_t mask = static_cast<std::uint8_t>(1U << (7 - (i & 7)));
    if (v) {
      bytes_[i >> 3] |= mask;
    } else {
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
  }

  // Reads `width` bits starting at `pos` as a big-endian unsigned integer.
  std::uint64_t read_uint(std::size_t pos, std::size_t width) const {
    if (width > 64 || pos + width > nbits_) throw std::out_of_range("BitString::read_uint");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(get(pos + i));
    return v;
  }

  std::uint64_t to_uint() const { return read_uint(0, nbits_); }

  BitString slice(std::size_t pos, std::size_t len) const {
    if (pos + len > nbits_) throw std::out_of_range("BitString::slice");
    BitString out(len);
    if ((pos & 7) == 0) {
      std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos >> 3), out.bytes_.size(),
                  out.bytes_.begin());
      out.clear_padding();
      return out;
    }
    for (std::size_t i = 0; i < len; ++i) out.set(i, get(pos + i));
    return out;
  }

  BitString& append(const BitString& other) {
    if ((nbits_ & 7) == 0) {
      bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
      nbits_ += other.nbits_;
      return *this;
    }
    std::size_t base = nbits_;
    nbits_ += other.nbits_;
    bytes_.resize((nbits_ + 7) / 8, 0);
    for (std::size_t i = 0; i < other.nbits_; ++i) set(base + i, other.get(i));
    return *this;
  }

  BitString operator^(const BitString& other) const {
    if (other.nbits_ != nbits_) throw std::invalid_argument("BitString: xor of unequal lengths");
    BitString out = *this;
    for (std::size_t i = 0; i < bytes_.size(); ++i) out.bytes_[i] ^= other.bytes_[i];
    return out;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
      out.push_back(kDigits[b >> 4]);
      out.push_back(kDigits[b & 15]);
    }
    return out;
  }

  std::string to_bit_text() const {
    std::string out(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i) out[i] = get(i) ? '1' : '0';
    return out;
  }

  bool operator==(const BitString& o) const { return nbits_ == o.nbits_ && bytes_ == o.bytes_; }
  std::strong_ordering operator<=>(const BitString& o) const {
    if (auto c = nbits_ <=> o.nbits_; c != 0) return c;
    // Equal bit lengths imply equal byte counts.
    for (std::size_t i = 0; i < bytes_.size(); ++i) {
      if (auto c = bytes_[i] <=> o.bytes_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  static unsigned nibble(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw std::invalid_argument("BitString: bad hex digit");
  }

  void clear_padding() {
    if (nbits_ & 7) bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - (nbits_ & 7)));
  }

  std::vector<std::uint8_t> bytes_;
  std::size_t nbits_ = 0;
};

inline BitString concat(BitString a, const BitString& b) { return a.append(b); }

struct BitStringHash {
  std::size_t operator()(const BitString& s) const {
    // FNV-1a over bytes, mixed with the length.
    std::uint64_t h = 1469598103934665603ULL ^ s.size();
    for (std::uint8_t b : s.bytes()) {
      h ^= b;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

using Document = BitString;
using History = std::vector<Document>;
using State = BitString;

}  // namespace subvertlab

#endif  // SUBVERTLAB_BITS_HPP_
