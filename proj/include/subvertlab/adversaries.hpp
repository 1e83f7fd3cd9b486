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

#ifndef SUBVERTLAB_ADVERSARIES_HPP_
#define SUBVERTLAB_ADVERSARIES_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "subvertlab/views.hpp"

namespace subvertlab {

namespace stats {

// Pearson statistic of `counts` against the uniform law on counts.size() bins.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double n = 0;
  for (auto c : counts) n += static_cast<double>(c);
  double e = n / static_cast<double>(counts.size());
  double x = 0;
  for (auto c : counts) x += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
  return x;
}

inline double chi_square_quantile(double df, double q) {
  return boost::math::quantile(boost::math::chi_squared(df), q);
}

// Smallest t with Pr[Poisson(lambda) <= t] >= q.
inline std::size_t poisson_quantile(double lambda, double q) {
  boost::math::poisson_distribution<> d(lambda);
  std::size_t t = 0;
  while (boost::math::cdf(d, static_cast<double>(t)) < q) ++t;
  return t;
}

template <class Key, class Hash = std::hash<Key>>
std::size_t colliding_pairs(const std::vector<Key>& xs) {
  std::unordered_map<Key, std::size_t, Hash> counts;
  for (const auto& x : xs) ++counts[x];
  std::size_t pairs = 0;
  for (const auto& [k, c] : counts) pairs += c * (c - 1) / 2;
  return pairs;
}

}  // namespace stats

inline BitString all_ones(std::size_t n) {
  BitString s(n);
  for (std::size_t i = 0; i < n; ++i) s.set(i, true);
  return s;
}

inline std::size_t prefix_value(const Document& d, std::size_t width) {
  return static_cast<std::size_t>(d.read_uint(0, std::min(width, d.size())));
}

// ---------------------------------------------------------------------------
// Baselines, one per game.

template <class View>
Adversary<View> constant_adversary(AdversaryKind kind, bool guess) {
  return {kind, std::string("constant-") + (guess ? "1" : "0"), "ignores its oracles and outputs a fixed bit",
          [guess](View&) { return guess; }};
}

template <class View>
Adversary<View> coin_flip_adversary(AdversaryKind kind) {
  return {kind, "coin-flip", "ignores its oracles and outputs a fair coin", [](View& v) { return v.coins().coin(); }};
}

// ---------------------------------------------------------------------------
// CPA attackers.

// Encrypts one message twice; equal answers point to Enc over RAND.
inline CpaAttacker cpa_repeat_query() {
  return {AdversaryKind::kAttacker, "repeat-query", "asks for the same message twice; distinct answers mean RAND",
          [](CpaView& v) {
            BitString m = v.coins().bits(v.scheme().lengths().message_bits);
            return v.challenge(m) != v.challenge(m);
          }};
}

// Chi-square on the leading four bits of q ciphertexts of fresh messages.
inline CpaAttacker cpa_chi_square(std::size_t q = 128) {
  return {AdversaryKind::kAttacker, "chi2", "chi-square on the leading bits of ciphertexts of fresh messages",
          [q](CpaView& v) {
            auto L = v.scheme().lengths();
            std::size_t w = std::min<std::size_t>(4, L.ciphertext_bits);
            std::vector<std::size_t> bins(std::size_t{1} << w, 0);
            for (std::size_t i = 0; i < q; ++i) ++bins[prefix_value(v.challenge(v.coins().bits(L.message_bits)), w)];
            return stats::chi_square_uniform(bins) > stats::chi_square_quantile(static_cast<double>(bins.size() - 1), 0.95);
          }};
}

// ---------------------------------------------------------------------------
// Watchdogs for EncASA-Dist.

// Random key, fixed random am, q fresh messages; chi-square over the leading
// min(coin_bits, 4) bits (the leading 4 ciphertext bits for coinless hosts).
inline Watchdog chi_square_watchdog(std::size_t q = 128) {
  return {AdversaryKind::kWatchdog, "chi2",
          "chi-square over the leading ciphertext bits, fresh message per query", [q](WatchdogView& v) {
            auto L = v.scheme().lengths();
            std::size_t w = L.coin_bits ? std::min<std::size_t>(L.coin_bits, 4) : std::min<std::size_t>(4, L.ciphertext_bits);
            BitString k = v.scheme().generate_key(v.coins());
            BitString am = v.coins().bits(v.asa_message_bits());
            State sigma;
            std::vector<std::size_t> bins(std::size_t{1} << w, 0);
            for (std::size_t i = 0; i < q; ++i) {
              ChallengeAnswer a = v.challenge(am, k, v.coins().bits(L.message_bits), sigma);
              sigma = a.state;
              ++bins[prefix_value(a.output, w)];
            }
            return stats::chi_square_uniform(bins) > stats::chi_square_quantile(static_cast<double>(bins.size() - 1), 0.95);
          }};
}

// Fixed key, q fresh messages; counts repeated leading-field values (the
// coin field, at most 8 bits) against the honest Poisson 95% quantile.
inline Watchdog repeat_frequency_watchdog(std::size_t q = 32) {
  return {AdversaryKind::kWatchdog, "repeat-frequency",
          "repeated coin-field values across fresh-message queries vs the honest rate", [q](WatchdogView& v) {
            auto L = v.scheme().lengths();
            std::size_t w = L.coin_bits ? std::min<std::size_t>(L.coin_bits, 8) : std::min<std::size_t>(8, L.ciphertext_bits);
            BitString k = v.scheme().generate_key(v.coins());
            BitString am = v.coins().bits(v.asa_message_bits());
            State sigma;
            std::vector<std::size_t> prefixes;
            for (std::size_t i = 0; i < q; ++i) {
              ChallengeAnswer a = v.challenge(am, k, v.coins().bits(L.message_bits), sigma);
              sigma = a.state;
              prefixes.push_back(prefix_value(a.output, w));
            }
            double lambda = static_cast<double>(q * (q - 1) / 2) / std::ldexp(1.0, static_cast<int>(w));
            return stats::colliding_pairs(prefixes) > stats::poisson_quantile(lambda, 0.95);
          }};
}

// Same (k, m) twice, hidden message all-zero then all-one. Different answers
// mean the output depends on something besides (k, m) and the coins.
inline Watchdog repeat_query_comparer() {
  return {AdversaryKind::kWatchdog, "repeat-query", "same (k, m) under two hidden messages; outputs 1 if answers differ",
          [](WatchdogView& v) {
            auto L = v.scheme().lengths();
            BitString k = v.scheme().generate_key(v.coins());
            BitString m = v.coins().bits(L.message_bits);
            std::size_t ml = v.asa_message_bits();
            ChallengeAnswer a = v.challenge(BitString(ml), k, m, State());
            ChallengeAnswer b = v.challenge(all_ones(ml), k, m, State());
            return a.output != b.output;
          }};
}

// Decrypts every answer; any ciphertext that does not decrypt to its message
// is proof of subversion.
inline Watchdog validity_watchdog(std::size_t q = 16) {
  return {AdversaryKind::kWatchdog, "validity", "checks Dec(k, c) = m on every answer", [q](WatchdogView& v) {
            auto L = v.scheme().lengths();
            BitString k = v.scheme().generate_key(v.coins());
            BitString am = v.coins().bits(v.asa_message_bits());
            State sigma;
            for (std::size_t i = 0; i < q; ++i) {
              BitString m = v.coins().bits(L.message_bits);
              ChallengeAnswer a = v.challenge(am, k, m, sigma);
              sigma = a.state;
              auto dec = v.scheme().decrypt(k, a.output);
              if (!dec || *dec != m) return true;
            }
            return false;
          }};
}

// Fixed (k, m, am) for all q queries; counts ciphertext collisions against
// the honest Poisson quantile. On hosts with few coin bits a rejection
// sampler concentrates on the accepted half of the support, which doubles
// the collision rate. This is the low-min-entropy regime where the
// collision term of the security bound is not small.
inline Watchdog fixed_input_collision_watchdog(std::size_t q = 64) {
  return {AdversaryKind::kWatchdog, "fixed-input-collision",
          "repeats one (k, m, am) and compares the ciphertext collision count with the honest rate",
          [q](WatchdogView& v) {
            auto L = v.scheme().lengths();
            BitString k = v.scheme().generate_key(v.coins());
            BitString m = v.coins().bits(L.message_bits);
            BitString am = v.coins().bits(v.asa_message_bits());
            std::vector<Document> cs;
            for (std::size_t i = 0; i < q; ++i) cs.push_back(v.challenge(am, k, m, State()).output);
            double lambda = static_cast<double>(q * (q - 1) / 2) / std::ldexp(1.0, static_cast<int>(L.coin_bits));
            return stats::colliding_pairs<Document, BitStringHash>(cs) > stats::poisson_quantile(lambda, 0.95);
          }};
}

// ---------------------------------------------------------------------------
// Wardens for SS-CHA-Dist. On channels of a scheme or algorithm each query
// uses a full history with the same first document and fresh middle part;
// on stateless channels the empty history.

inline History warden_history(WardenView& v, const History& prefix_key) {
  const json& d = v.channel_descriptor();
  std::string type = d.value("type", std::string());
  if (type != "ses" && type != "rand-alg") return {};
  History h = prefix_key;
  std::size_t ell = d.at("ell").get<std::size_t>();
  while (h.size() < ell + 1) h.push_back(v.sample(h));
  return h;
}

inline History warden_key(WardenView& v) {
  std::string type = v.channel_descriptor().value("type", std::string());
  if (type != "ses" && type != "rand-alg") return {};
  return {v.sample(History())};
}

inline Warden chi_square_warden(std::size_t q = 128) {
  return {AdversaryKind::kWarden, "chi2", "chi-square over the leading 4 document bits, fresh history per query",
          [q](WardenView& v) {
            History key = warden_key(v);
            BitString am = v.coins().bits(v.message_bits());
            State sigma;
            std::vector<std::size_t> bins(16, 0);
            for (std::size_t i = 0; i < q; ++i) {
              ChallengeAnswer a = v.challenge(am, warden_history(v, key), sigma);
              sigma = a.state;
              ++bins[prefix_value(a.output, 4)];
            }
            return stats::chi_square_uniform(bins) > stats::chi_square_quantile(15, 0.95);
          }};
}

// Two-sample test: colliding pairs of the leading 8 bits in q challenge
// answers vs q free channel samples on equally drawn histories.
inline Warden repeat_frequency_warden(std::size_t q = 32) {
  return {AdversaryKind::kWarden, "repeat-frequency", "leading-byte collisions, challenge vs free channel samples",
          [q](WardenView& v) {
            History key = warden_key(v);
            BitString am = v.coins().bits(v.message_bits());
            State sigma;
            std::vector<std::size_t> challenged, reference;
            for (std::size_t i = 0; i < q; ++i) {
              ChallengeAnswer a = v.challenge(am, warden_history(v, key), sigma);
              sigma = a.state;
              challenged.push_back(prefix_value(a.output, 8));
              reference.push_back(prefix_value(v.sample(warden_history(v, key)), 8));
            }
            return stats::colliding_pairs(challenged) > stats::colliding_pairs(reference);
          }};
}

// ---------------------------------------------------------------------------
// Watchdogs for RASA-Dist.

inline AlgorithmWatchdog rasa_chi_square_watchdog(std::size_t q = 128) {
  return {AdversaryKind::kWatchdog, "chi2", "chi-square over the leading output bits, fresh input per query",
          [q](AlgorithmWatchdogView& v) {
            auto L = v.algorithm().lengths();
            std::size_t w = L.coin_bits ? std::min<std::size_t>(L.coin_bits, 4) : std::min<std::size_t>(4, L.output_bits);
            BitString secret = v.algorithm().generate_secret(v.coins());
            BitString am = v.coins().bits(v.asa_message_bits());
            State sigma;
            std::vector<std::size_t> bins(std::size_t{1} << w, 0);
            for (std::size_t i = 0; i < q; ++i) {
              ChallengeAnswer a = v.challenge(am, secret, v.coins().bits(L.input_bits), sigma);
              sigma = a.state;
              ++bins[prefix_value(a.output, w)];
            }
            return stats::chi_square_uniform(bins) > stats::chi_square_quantile(static_cast<double>(bins.size() - 1), 0.95);
          }};
}

inline AlgorithmWatchdog rasa_repeat_frequency_watchdog(std::size_t q = 32) {
  return {AdversaryKind::kWatchdog, "repeat-frequency", "repeated leading-field values vs the honest rate",
          [q](AlgorithmWatchdogView& v) {
            auto L = v.algorithm().lengths();
            std::size_t w = L.coin_bits ? std::min<std::size_t>(L.coin_bits, 8) : std::min<std::size_t>(8, L.output_bits);
            BitString secret = v.algorithm().generate_secret(v.coins());
            BitString am = v.coins().bits(v.asa_message_bits());
            State sigma;
            std::vector<std::size_t> prefixes;
            for (std::size_t i = 0; i < q; ++i) {
              ChallengeAnswer a = v.challenge(am, secret, v.coins().bits(L.input_bits), sigma);
              sigma = a.state;
              prefixes.push_back(prefix_value(a.output, w));
            }
            double lambda = static_cast<double>(q * (q - 1) / 2) / std::ldexp(1.0, static_cast<int>(w));
            return stats::colliding_pairs(prefixes) > stats::poisson_quantile(lambda, 0.95);
          }};
}

inline AlgorithmWatchdog rasa_repeat_query_comparer() {
  return {AdversaryKind::kWatchdog, "repeat-query", "same (s, x) under two hidden messages; outputs 1 if answers differ",
          [](AlgorithmWatchdogView& v) {
            auto L = v.algorithm().lengths();
            BitString secret = v.algorithm().generate_secret(v.coins());
            BitString x = v.coins().bits(L.input_bits);
            std::size_t ml = v.asa_message_bits();
            return v.challenge(BitString(ml), secret, x, State()).output !=
                   v.challenge(all_ones(ml), secret, x, State()).output;
          }};
}

// ---------------------------------------------------------------------------
// Forgers.

inline Forger replay_forger() {
  return {AdversaryKind::kForger, "replay", "outputs a pair obtained from the signing oracle", [](ForgerView& v) {
            BitString m = v.coins().bits(v.message_bits());
            return Forgery{m, v.sign(m)};
          }};
}

// Fixes the coin field and walks through tag values with public
// verification, up to `budget` checks.
inline Forger brute_force_forger(std::size_t budget = 256) {
  return {AdversaryKind::kForger, "brute-force", "exhaustive tag search on a fresh message", [budget](ForgerView& v) {
            BitString m = v.coins().bits(v.message_bits());
            std::size_t tag_bits = v.signature_bits() - v.coin_bits();
            BitString coins(v.coin_bits());
            Document sigma = concat(coins, BitString(tag_bits));
            for (std::size_t t = 0; t < budget; ++t) {
              sigma = concat(coins, BitString::from_uint(t, tag_bits));
              if (v.verify(m, sigma)) break;
            }
            return Forgery{m, sigma};
          }};
}

inline Forger random_guess_forger() {
  return {AdversaryKind::kForger, "random-guess", "a uniform signature on a fresh message", [](ForgerView& v) {
            BitString m = v.coins().bits(v.message_bits());
            return Forgery{m, v.coins().bits(v.signature_bits())};
          }};
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_ADVERSARIES_HPP_
