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

#ifndef SUBVERTLAB_GAMES_HPP_
#define SUBVERTLAB_GAMES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "subvertlab/asa.hpp"
#include "subvertlab/channel.hpp"
#include "subvertlab/rejsam.hpp"
#include "subvertlab/rng.hpp"
#include "subvertlab/views.hpp"

namespace subvertlab {

struct Interval {
  double lo = 0;
  double hi = 1;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0, 1};
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1 + z2 / n;
  double center = (p + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct GameReport {
  std::string game;
  std::size_t trials = 0;
  std::size_t success_count = 0;
  double p_hat = 0;
  std::optional<double> normalized_advantage;  // 2|p_hat - 1/2|; empty for probability games
  Interval ci95;                               // Wilson interval on p_hat
  std::uint64_t seed = 0;
  json config = json::object();

  double standard_error() const {
    return trials ? std::sqrt(p_hat * (1 - p_hat) / static_cast<double>(trials)) : 0.0;
  }

  // Distinguishing games: does the interval on p_hat contain 1/2?
  bool advantage_ci_contains_zero() const { return ci95.contains(0.5); }

  // Interval on the normalized advantage induced by the Wilson interval.
  Interval advantage_ci() const {
    double a = 2 * std::fabs(ci95.lo - 0.5), b = 2 * std::fabs(ci95.hi - 0.5);
    if (ci95.contains(0.5)) return {0.0, std::max(a, b)};
    return {std::min(a, b), std::max(a, b)};
  }

  json to_json() const {
    json j = {{"game", game},
              {"trials", trials},
              {"success_count", success_count},
              {"p_hat", p_hat},
              {"normalized_advantage", normalized_advantage ? json(*normalized_advantage) : json(nullptr)},
              {"ci95", {ci95.lo, ci95.hi}},
              {"seed", seed},
              {"config", config}};
    return j;
  }

  static GameReport from_json(const json& j) {
    GameReport r;
    r.game = j.at("game").get<std::string>();
    r.trials = j.at("trials").get<std::size_t>();
    r.success_count = j.at("success_count").get<std::size_t>();
    r.p_hat = j.at("p_hat").get<double>();
    if (!j.at("normalized_advantage").is_null()) r.normalized_advantage = j.at("normalized_advantage").get<double>();
    r.ci95 = {j.at("ci95").at(0).get<double>(), j.at("ci95").at(1).get<double>()};
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.value("config", json::object());
    return r;
  }
};

enum class ReportKind { kDistinguishing, kProbability };

inline GameReport make_report(std::string game, std::size_t trials, std::size_t successes, std::uint64_t seed,
                              ReportKind kind, json config = json::object()) {
  GameReport r;
  r.game = std::move(game);
  r.trials = trials;
  r.success_count = successes;
  r.p_hat = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  if (kind == ReportKind::kDistinguishing) r.normalized_advantage = 2 * std::fabs(r.p_hat - 0.5);
  r.ci95 = wilson_interval(successes, trials);
  r.seed = seed;
  r.config = std::move(config);
  return r;
}

// Runs fn(trial, streams) for trial = 0..N-1 and counts true results. Each
// trial owns streams derived from (seed, trial), so the count does not depend
// on `jobs`.
inline std::size_t run_trials(std::size_t n, std::uint64_t seed, unsigned jobs,
                              const std::function<bool(std::size_t, TrialStreams&)>& fn) {
  std::vector<char> result(n, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      TrialStreams streams(seed, t);
      result[t] = fn(t, streams) ? 1 : 0;
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    std::size_t chunk = (n + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      std::size_t begin = std::min(n, w * chunk), end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::size_t count = 0;
  for (char c : result) count += static_cast<std::size_t>(c);
  return count;
}

struct RunOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// ---------------------------------------------------------------------------
// Distinguishing games. In every game b is the first draw of the game stream;
// a guess of true means "b = 1".

inline GameReport run_cpa_dist(const CpaAttacker& att, const EncryptionScheme& ses, const RunOptions& opt) {
  std::size_t cl = ses.lengths().ciphertext_bits;
  std::size_t wins = run_trials(opt.trials, opt.seed, opt.jobs, [&](std::size_t, TrialStreams& s) {
    bool b = s.game.coin();
    BitString k = ses.generate_key(s.game);
    Rng& ch = s.challenge;
    CpaView view(ses, [&](const BitString& m) { return b ? ch.bits(cl) : ses.encrypt(k, m, ch); }, s.adversary);
    return att.strategy(view) == b;
  });
  return make_report("cpa-dist", opt.trials, wins, opt.seed, ReportKind::kDistinguishing,
                     {{"attacker", att.name}, {"scheme", ses.parameters()}});
}

inline GameReport run_enc_asa_dist(const Watchdog& w, const SubstitutionAttack& asa, const EncryptionScheme& ses,
                                   const RunOptions& opt) {
  std::size_t wins = run_trials(opt.trials, opt.seed, opt.jobs, [&](std::size_t, TrialStreams& s) {
    bool b = s.game.coin();
    BitString ak = asa.generate_key(s.game);
    Rng& ch = s.challenge;
    WatchdogView view(
        ses, asa.message_bits(), asa.output_length(),
        [&](const BitString& am, const BitString& k, const BitString& m, const State& sigma) -> ChallengeAnswer {
          if (!b) return {ses.encrypt(k, m, ch), sigma};
          AsaStep st = asa.encrypt(ak, am, k, m, sigma, ch);
          return {std::move(st.ciphertext), std::move(st.state)};
        },
        s.adversary, s.channel);
    return w.strategy(view) == b;
  });
  return make_report("enc-asa-dist", opt.trials, wins, opt.seed, ReportKind::kDistinguishing,
                     {{"watchdog", w.name}, {"asa", asa.parameters()}, {"scheme", ses.parameters()}});
}

inline GameReport run_ss_cha_dist(const Warden& w, const StegoSystem& steg, const Channel& channel,
                                  const RunOptions& opt) {
  std::size_t wins = run_trials(opt.trials, opt.seed, opt.jobs, [&](std::size_t, TrialStreams& s) {
    bool b = s.game.coin();
    BitString ak = steg.generate_key(s.game);
    Rng& ch = s.challenge;
    Rng& free_samples = s.channel;
    WardenView view(
        channel.descriptor(), steg.message_bits(), steg.output_length(),
        [&](const History& h) { return channel.sample(h, free_samples); },
        [&](const BitString& am, const History& h, const State& sigma) -> ChallengeAnswer {
          if (!b) return {channel.sample(h, ch), sigma};
          StegoStep st = steg.encode(ak, am, h, sigma, channel_oracle(channel, ch), ch);
          return {std::move(st.document), std::move(st.state)};
        },
        s.adversary);
    return w.strategy(view) == b;
  });
  return make_report("ss-cha-dist", opt.trials, wins, opt.seed, ReportKind::kDistinguishing,
                     {{"warden", w.name}, {"stego", steg.parameters()}, {"channel", channel.descriptor()}});
}

inline GameReport run_rasa_dist(const AlgorithmWatchdog& w, const AlgorithmSubstitutionAttack& asa,
                                const RunOptions& opt) {
  const RandomizedAlgorithm& alg = asa.algorithm();
  std::size_t wins = run_trials(opt.trials, opt.seed, opt.jobs, [&](std::size_t, TrialStreams& s) {
    bool b = s.game.coin();
    BitString ak = asa.generate_key(s.game);
    Rng& ch = s.challenge;
    AlgorithmWatchdogView view(
        alg, asa.message_bits(), asa.output_length(),
        [&](const BitString& am, const BitString& secret, const BitString& x, const State& sigma) -> ChallengeAnswer {
          if (!b) return {alg.run(secret, x, ch), sigma};
          AsaStep st = asa.run(ak, am, secret, x, sigma, ch);
          return {std::move(st.ciphertext), std::move(st.state)};
        },
        s.adversary);
    return w.strategy(view) == b;
  });
  return make_report("rasa-dist", opt.trials, wins, opt.seed, ReportKind::kDistinguishing,
                     {{"watchdog", w.name}, {"asa", asa.parameters()}, {"algorithm", alg.id()}});
}

// Success iff the forged message was never signed and the signature verifies.
inline GameReport run_sig_forge(const Forger& f, const TagSignature& sig, const RunOptions& opt) {
  std::size_t wins = run_trials(opt.trials, opt.seed, opt.jobs, [&](std::size_t, TrialStreams& s) {
    KeyPair kp = sig.generate_keypair(s.game);
    Rng& ch = s.challenge;
    ForgerView view(
        sig, [&](const BitString& m) { return sig.sign(kp.sk, m, ch); },
        [&](const BitString& m, const Document& sigma) { return sig.verify(kp.pk, m, sigma); }, s.adversary);
    Forgery out = f.strategy(view);
    return !view.signed_messages().count(out.message) && sig.verify(kp.pk, out.message, out.signature);
  });
  return make_report("sig-forge", opt.trials, wins, opt.seed, ReportKind::kProbability,
                     {{"forger", f.name}, {"signature", sig.parameters()}});
}

// ---------------------------------------------------------------------------
// Unreliability. The maximum over (ak, am, k, m) is approximated by the worst
// point of a grid of hidden-message choices, with everything else random.

struct MessageChoice {
  std::string name;
  std::function<BitString(Rng&, std::size_t)> make;
};

inline std::vector<MessageChoice> random_message_grid() {
  return {{"random", [](Rng& rng, std::size_t ml) { return rng.bits(ml); }}};
}

inline std::vector<MessageChoice> extended_message_grid() {
  return {{"random", [](Rng& rng, std::size_t ml) { return rng.bits(ml); }},
          {"zeros", [](Rng&, std::size_t ml) { return BitString(ml); }},
          {"ones", [](Rng&, std::size_t ml) {
             BitString s(ml);
             for (std::size_t i = 0; i < ml; ++i) s.set(i, true);
             return s;
           }},
          {"alternating", [](Rng&, std::size_t ml) {
             BitString s(ml);
             for (std::size_t i = 0; i < ml; i += 2) s.set(i, true);
             return s;
           }}};
}

// Runs a failure experiment at every grid point and returns the worst one;
// all points are listed under config.grid.
inline GameReport worst_over_grid(const std::string& game, const std::vector<MessageChoice>& grid,
                                  const RunOptions& opt, json config,
                                  const std::function<bool(TrialStreams&, const MessageChoice&)>& failed) {
  require(!grid.empty(), "grid must be nonempty");
  std::optional<GameReport> worst;
  json points = json::array();
  for (const auto& choice : grid) {
    std::size_t fails = run_trials(opt.trials, opt.seed, opt.jobs,
                                   [&](std::size_t, TrialStreams& s) { return failed(s, choice); });
    GameReport r = make_report(game, opt.trials, fails, opt.seed, ReportKind::kProbability);
    points.push_back({{"point", choice.name}, {"p_hat", r.p_hat}, {"failures", fails}});
    if (!worst || r.success_count > worst->success_count) {
      worst = r;
      config["worst_point"] = choice.name;
    }
  }
  config["grid"] = points;
  worst->config = std::move(config);
  return *worst;
}

using HistorySource = std::function<History(Rng&)>;

inline HistorySource empty_history() {
  return [](Rng&) { return History(); };
}

// Draws a history of `length` documents from the channel itself.
inline HistorySource sampled_history(const Channel& channel, std::size_t length) {
  return [&channel, length](Rng& rng) {
    History h;
    for (std::size_t i = 0; i < length; ++i) h.push_back(channel.sample(h, rng));
    return h;
  };
}

// p_hat = fraction of runs where SDec(ak, SEnc^outl(ak, am, h)) != am.
inline GameReport estimate_unrel(const StegoSystem& steg, const Channel& channel, const HistorySource& history,
                                 const std::vector<MessageChoice>& grid, const RunOptions& opt) {
  return worst_over_grid("unrel-stego", grid, opt, {{"stego", steg.parameters()}, {"channel", channel.descriptor()}},
                         [&](TrialStreams& s, const MessageChoice& c) {
                           BitString ak = steg.generate_key(s.game);
                           BitString am = c.make(s.game, steg.message_bits());
                           History h = history(s.game);
                           auto seq = encode_sequence(steg, ak, am, std::move(h), steg.output_length(),
                                                      channel_oracle(channel, s.challenge), s.challenge);
                           auto out = steg.decode(ak, seq.documents);
                           return !out || *out != am;
                         });
}

inline GameReport estimate_unrel(const SubstitutionAttack& asa, const EncryptionScheme& ses,
                                 const std::vector<MessageChoice>& grid, const RunOptions& opt) {
  return worst_over_grid("unrel-asa", grid, opt, {{"asa", asa.parameters()}, {"scheme", ses.parameters()}},
                         [&](TrialStreams& s, const MessageChoice& c) {
                           BitString ak = asa.generate_key(s.game);
                           BitString am = c.make(s.game, asa.message_bits());
                           BitString k = ses.generate_key(s.game);
                           std::vector<BitString> msgs;
                           for (std::size_t i = 0; i < asa.output_length(); ++i) {
                             msgs.push_back(s.game.bits(ses.lengths().message_bits));
                           }
                           auto seq = asa_enc_all(asa, ak, am, k, msgs, s.challenge);
                           auto out = asa.extract(ak, seq.ciphertexts);
                           return !out || *out != am;
                         });
}

inline GameReport estimate_unrel(const AlgorithmSubstitutionAttack& asa, const InputGenerator& inputs,
                                 const std::vector<MessageChoice>& grid, const RunOptions& opt) {
  const RandomizedAlgorithm& alg = asa.algorithm();
  return worst_over_grid("unrel-algorithm-asa", grid, opt, {{"asa", asa.parameters()}, {"algorithm", alg.id()}},
                         [&](TrialStreams& s, const MessageChoice& c) {
                           BitString ak = asa.generate_key(s.game);
                           BitString am = c.make(s.game, asa.message_bits());
                           BitString secret = alg.generate_secret(s.game);
                           std::vector<Document> ys;
                           State sigma;
                           for (std::size_t i = 0; i < asa.output_length(); ++i) {
                             BitString x = inputs.sample(s.game);
                             AsaStep st = asa.run(ak, am, secret, x, sigma, s.challenge);
                             sigma = std::move(st.state);
                             ys.push_back(std::move(st.ciphertext));
                           }
                           auto out = asa.extract(ak, ys);
                           return !out || *out != am;
                         });
}

struct ScheduleChoice {
  std::string name;
  std::function<std::vector<RebootSegment>(Rng&)> make;
};

// Reboot-unreliability: the encoder restarts at every schedule segment with
// that segment's history. Reports the worst schedule.
inline GameReport estimate_unrel_star(const StegoSystem& steg, const Channel& channel,
                                      const std::vector<ScheduleChoice>& schedules, const RunOptions& opt) {
  require(!schedules.empty(), "need at least one schedule");
  std::optional<GameReport> worst;
  json points = json::array();
  std::string worst_name;
  for (const auto& sc : schedules) {
    std::size_t fails = run_trials(opt.trials, opt.seed, opt.jobs, [&](std::size_t, TrialStreams& s) {
      BitString ak = steg.generate_key(s.game);
      BitString am = s.game.bits(steg.message_bits());
      auto schedule = sc.make(s.game);
      auto docs = encode_rebooted(steg, ak, am, schedule, channel_oracle(channel, s.challenge), s.challenge);
      auto out = steg.decode(ak, docs);
      return !out || *out != am;
    });
    GameReport r = make_report("unrel-star", opt.trials, fails, opt.seed, ReportKind::kProbability);
    points.push_back({{"schedule", sc.name}, {"p_hat", r.p_hat}, {"failures", fails}});
    if (!worst || r.success_count > worst->success_count) {
      worst = r;
      worst_name = sc.name;
    }
  }
  worst->config = {{"stego", steg.parameters()}, {"channel", channel.descriptor()}, {"worst_schedule", worst_name},
                   {"grid", points}};
  return *worst;
}

// tau segments of near-equal length, each starting from a fresh history.
inline ScheduleChoice even_schedule(std::size_t outl, std::size_t tau, HistorySource fresh_history) {
  require(tau >= 1 && tau <= outl, "tau must be in [1, outl]");
  return {"tau=" + std::to_string(tau), [outl, tau, fresh_history](Rng& rng) {
            std::vector<RebootSegment> segs;
            for (std::size_t i = 0; i < tau; ++i) {
              std::size_t len = outl / tau + (i < outl % tau ? 1 : 0);
              segs.push_back({fresh_history(rng), len});
            }
            return segs;
          }};
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_GAMES_HPP_
