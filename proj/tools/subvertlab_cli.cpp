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

// subvertlab command-line front end. Every command builds objects from the
// library and calls into it; the only logic here is argument handling and
// report output.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subvertlab/subvertlab.hpp"

namespace sl = subvertlab;
using sl::BitString;
using sl::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Config {
  std::size_t kappa = 128;
  std::size_t ml = 8;
  std::size_t s = 64;
  double beta = std::nan("");
  std::size_t block_bits = 1;
  std::size_t outl = 0;
  std::size_t r = 8;
  std::size_t t = 64;
  std::size_t ell = 0;
  std::size_t host_ml = 8;
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string host = "randpad";
  std::string channel = "uniform:8";
  std::string watchdog = "chi2";
  std::string asa = "rejsam";
  std::string sig = "coin-extractable";
  std::size_t q = 0;
  double query = 0;
  std::size_t count = 16;
  std::vector<std::size_t> tau = {1};
  std::string ak_hex, am_hex, k_hex, m_hex;
  std::string in_path;
  std::string out = "subvertlab_report";
  std::string config_path;
  std::vector<std::string> files;

  // Experiment parameters only; paths and job counts do not change results.
  json to_json() const {
    return {{"kappa", kappa}, {"ml", ml},         {"s", s},
            {"beta", std::isnan(beta) ? json(nullptr) : json(beta)},
            {"block_bits", block_bits}, {"outl", outl}, {"r", r}, {"t", t}, {"ell", ell}, {"host_ml", host_ml},
            {"N", trials},   {"seed", seed ? json(*seed) : json(nullptr)}, {"host", host}, {"channel", channel},
            {"watchdog", watchdog}, {"asa", asa}, {"sig", sig}, {"q", q}, {"query", query}, {"count", count},
            {"tau", tau}};
  }
};

// Options that a config file may also set, by long name.
struct Binding {
  CLI::Option* opt;
  std::function<void(const json&)> from_json;
};

template <class T>
void bind_option(CLI::App* app, std::vector<Binding>& out, const std::string& name, T& target, const std::string& help) {
  CLI::Option* o = app->add_option("--" + name, target, help);
  out.push_back({o, [&target](const json& j) { target = j.get<T>(); }});
}

void add_common(CLI::App* app, Config& c, std::vector<Binding>& b) {
  bind_option(app, b, "kappa", c.kappa, "security parameter (key bits)");
  bind_option(app, b, "ml", c.ml, "hidden message bits (power of two)");
  bind_option(app, b, "s", c.s, "rejection sampling cutoff");
  bind_option(app, b, "beta", c.beta, "coupon collector slack (default ml - ln ml)");
  bind_option(app, b, "block-bits", c.block_bits, "bits embedded per document");
  bind_option(app, b, "outl", c.outl, "documents per hidden message (0 = derived)");
  bind_option(app, b, "r", c.r, "coin bits of the host scheme");
  bind_option(app, b, "t", c.t, "tag bits of the signature fixture");
  bind_option(app, b, "ell", c.ell, "messages per channel cycle (0 = outl)");
  bind_option(app, b, "host-ml", c.host_ml, "message bits of the host scheme");
  bind_option(app, b, "N", c.trials, "number of trials");
  bind_option(app, b, "jobs", c.jobs, "worker threads");
  bind_option(app, b, "host", c.host, "host scheme: randpad[:r] | det");
  bind_option(app, b, "channel", c.channel, "channel: uniform:<bits> | ses | constant:<hex>");
  bind_option(app, b, "watchdog", c.watchdog, "adversary name for games");
  bind_option(app, b, "asa", c.asa, "attack: rejsam | universal | fabricating | generic | forced");
  bind_option(app, b, "sig", c.sig, "signature fixture kind");
  bind_option(app, b, "q", c.q, "adversary query budget (0 = adversary default)");
  bind_option(app, b, "query", c.query, "mean oracle queries per ciphertext (lowerbound phi)");
  bind_option(app, b, "count", c.count, "documents to sample");
  bind_option(app, b, "tau", c.tau, "restart counts for reboot schedules");
  bind_option(app, b, "ak", c.ak_hex, "attacker key, hex");
  bind_option(app, b, "am", c.am_hex, "hidden message, hex");
  bind_option(app, b, "k", c.k_hex, "host key, hex");
  bind_option(app, b, "m", c.m_hex, "host message, hex");
  bind_option(app, b, "in", c.in_path, "input document file");
  CLI::Option* seed = app->add_option("--seed", c.seed, "randomness seed (falls back to SUBVERTLAB_SEED)");
  b.push_back({seed, [&c](const json& j) { c.seed = j.get<std::uint64_t>(); }});
  app->add_option("--out", c.out, "output path prefix");
  app->add_option("--config", c.config_path, "JSON config file; flags override its values");
}

void apply_config_file(Config& c, const std::vector<Binding>& bindings) {
  if (c.config_path.empty()) return;
  std::ifstream in(c.config_path);
  if (!in) throw sl::InvalidParameter("cannot open config file: " + c.config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw sl::InvalidParameter(std::string("config file is not valid JSON: ") + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& b : bindings) {
      if (b.opt->get_name(false, true) != "--" + key && b.opt->get_name() != "--" + key) continue;
      known = true;
      if (b.opt->count() == 0) {
        try {
          b.from_json(value);
        } catch (const json::exception&) {
          throw sl::InvalidParameter("config key '" + key + "' has the wrong type");
        }
      }
    }
    if (!known) throw sl::InvalidParameter("unknown config key: " + key);
  }
}

std::uint64_t require_seed(Config& c) {
  if (!c.seed) {
    if (const char* env = std::getenv("SUBVERTLAB_SEED")) {
      try {
        std::size_t used = 0;
        c.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw sl::InvalidParameter("SUBVERTLAB_SEED is not an unsigned integer");
      }
    }
  }
  if (!c.seed) throw sl::InvalidParameter("a seed is required (--seed or SUBVERTLAB_SEED)");
  return *c.seed;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// ---------------------------------------------------------------------------
// Fixture construction from the config.

sl::StegoParams stego_params(const Config& c) {
  sl::StegoParams p;
  p.kappa = c.kappa;
  p.ml = c.ml;
  p.s = c.s;
  p.beta = c.beta;
  p.block_bits = c.block_bits;
  p.outl = c.outl;
  p.validate();
  return p;
}

std::shared_ptr<sl::RejSam> make_rejsam(const Config& c) { return std::make_shared<sl::RejSam>(stego_params(c)); }

std::shared_ptr<sl::EncryptionScheme> make_host(const Config& c) {
  const std::string& h = c.host;
  if (h == "det") return std::make_shared<sl::DeterministicScheme>(c.kappa, c.host_ml);
  if (h == "randpad") return std::make_shared<sl::RandPadScheme>(c.r, c.kappa, c.host_ml);
  if (h.rfind("randpad:", 0) == 0) {
    std::size_t r = 0;
    try {
      r = std::stoul(h.substr(8));
    } catch (const std::exception&) {
      throw sl::InvalidParameter("bad host: " + h);
    }
    return std::make_shared<sl::RandPadScheme>(r, c.kappa, c.host_ml);
  }
  throw sl::UnsupportedKind("unsupported host: " + h);
}

std::shared_ptr<sl::Channel> make_channel(const Config& c) {
  const std::string& ch = c.channel;
  if (ch.rfind("uniform:", 0) == 0) {
    std::size_t n = 0;
    try {
      n = std::stoul(ch.substr(8));
    } catch (const std::exception&) {
      throw sl::InvalidParameter("bad channel: " + ch);
    }
    return std::make_shared<sl::UniformChannel>(n);
  }
  if (ch.rfind("constant:", 0) == 0) {
    std::string hex = ch.substr(9);
    return std::make_shared<sl::ConstantChannel>(BitString::from_hex(hex, hex.size() * 4));
  }
  if (ch == "ses") return std::make_shared<sl::SesChannel>(make_host(c), c.ell ? c.ell : make_rejsam(c)->output_length());
  throw sl::UnsupportedKind("unsupported channel: " + ch);
}

std::shared_ptr<sl::TagSignature> make_signature(const Config& c, std::size_t message_bits) {
  sl::SignatureKind kind = sl::parse_signature_kind(c.sig);
  if (kind == sl::SignatureKind::kUnique) {
    return std::make_shared<sl::TagSignature>(kind, c.kappa, message_bits, 0, c.t);
  }
  return std::make_shared<sl::TagSignature>(kind, c.kappa, message_bits, 4, c.t);
}

template <class T>
T with_q(const Config& c, std::size_t dflt, const std::function<T(std::size_t)>& make) {
  return make(c.q ? c.q : dflt);
}

sl::CpaAttacker make_cpa_attacker(const Config& c) {
  const std::string& n = c.watchdog;
  if (n == "repeat-query") return sl::cpa_repeat_query();
  if (n == "chi2") return sl::cpa_chi_square(c.q ? c.q : 128);
  if (n == "coin-flip") return sl::coin_flip_adversary<sl::CpaView>(sl::AdversaryKind::kAttacker);
  if (n == "constant") return sl::constant_adversary<sl::CpaView>(sl::AdversaryKind::kAttacker, false);
  throw sl::UnsupportedKind("unknown CPA attacker: " + n);
}

sl::Warden make_warden(const Config& c) {
  const std::string& n = c.watchdog;
  if (n == "chi2") return sl::chi_square_warden(c.q ? c.q : 128);
  if (n == "repeat-frequency") return sl::repeat_frequency_warden(c.q ? c.q : 32);
  if (n == "coin-flip") return sl::coin_flip_adversary<sl::WardenView>(sl::AdversaryKind::kWarden);
  if (n == "constant") return sl::constant_adversary<sl::WardenView>(sl::AdversaryKind::kWarden, false);
  throw sl::UnsupportedKind("unknown warden: " + n);
}

sl::Watchdog make_watchdog(const Config& c) {
  const std::string& n = c.watchdog;
  if (n == "chi2") return sl::chi_square_watchdog(c.q ? c.q : 128);
  if (n == "repeat-frequency") return sl::repeat_frequency_watchdog(c.q ? c.q : 32);
  if (n == "repeat-query") return sl::repeat_query_comparer();
  if (n == "validity") return sl::validity_watchdog(c.q ? c.q : 16);
  if (n == "fixed-input-collision") return sl::fixed_input_collision_watchdog(c.q ? c.q : 64);
  if (n == "coin-flip") return sl::coin_flip_adversary<sl::WatchdogView>(sl::AdversaryKind::kWatchdog);
  if (n == "constant") return sl::constant_adversary<sl::WatchdogView>(sl::AdversaryKind::kWatchdog, false);
  if (n.rfind("wrapped:", 0) == 0) {
    Config inner = c;
    inner.watchdog = n.substr(8);
    return sl::wrapped_warden_to_watchdog(make_warden(inner));
  }
  throw sl::UnsupportedKind("unknown watchdog: " + n);
}

sl::AlgorithmWatchdog make_rasa_watchdog(const Config& c) {
  const std::string& n = c.watchdog;
  if (n == "chi2") return sl::rasa_chi_square_watchdog(c.q ? c.q : 128);
  if (n == "repeat-frequency") return sl::rasa_repeat_frequency_watchdog(c.q ? c.q : 32);
  if (n == "repeat-query") return sl::rasa_repeat_query_comparer();
  if (n == "coin-flip") return sl::coin_flip_adversary<sl::AlgorithmWatchdogView>(sl::AdversaryKind::kWatchdog);
  if (n == "constant") return sl::constant_adversary<sl::AlgorithmWatchdogView>(sl::AdversaryKind::kWatchdog, false);
  throw sl::UnsupportedKind("unknown RASA watchdog: " + n);
}

sl::Forger make_forger(const Config& c) {
  const std::string& n = c.watchdog;
  if (n == "replay") return sl::replay_forger();
  if (n == "brute-force") return sl::brute_force_forger(c.q ? c.q : 256);
  if (n == "random-guess") return sl::random_guess_forger();
  throw sl::UnsupportedKind("unknown forger: " + n);
}

std::shared_ptr<sl::SubstitutionAttack> make_asa(const Config& c, std::shared_ptr<sl::EncryptionScheme> host) {
  if (c.asa == "rejsam") return std::make_shared<sl::AsaFromStego>(make_rejsam(c), host);
  if (c.asa == "universal") {
    return std::make_shared<sl::BoundUniversalAsa>(std::make_shared<sl::UniversalStegoAsa>(make_rejsam(c)), host);
  }
  throw sl::UnsupportedKind("unsupported encryption ASA: " + c.asa);
}

std::shared_ptr<sl::AlgorithmSubstitutionAttack> make_algorithm_asa(const Config& c) {
  auto sig = make_signature(c, c.host_ml);
  auto alg = std::make_shared<sl::SigningAlgorithm>(sig);
  if (c.asa == "rejsam" || c.asa == "generic") {
    return std::make_shared<sl::GenericAlgorithmAsa>(make_rejsam(c), alg, sl::uniform_inputs(c.host_ml));
  }
  if (c.asa == "forced") return std::make_shared<sl::ForcedEmbeddingAsa>(alg, c.ml, make_rejsam(c)->output_length(), c.kappa);
  throw sl::UnsupportedKind("unsupported algorithm ASA: " + c.asa);
}

BitString hex_or_random(const std::string& hex, std::size_t nbits, sl::Rng& rng) {
  if (hex.empty()) return rng.bits(nbits);
  return BitString::from_hex(hex, nbits);
}

std::vector<sl::Document> read_documents(const Config& c) {
  if (c.in_path.empty()) throw sl::InvalidParameter("--in is required");
  std::ifstream in(c.in_path, std::ios::binary);
  if (!in) throw sl::InvalidParameter("cannot open input file: " + c.in_path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sl::deserialize_history(bytes);
}

void write_documents(const std::string& path, const std::vector<sl::Document>& docs) {
  std::ofstream out(path, std::ios::binary);
  auto bytes = sl::serialize_history(docs);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

json documents_json(const std::vector<sl::Document>& docs) {
  json a = json::array();
  for (const auto& d : docs) a.push_back(d.to_hex());
  return a;
}

// Writes <out>.jsonl/.csv/.meta.json and echoes every JSON line.
void emit_reports(const Config& c, const json& run_config, const std::vector<sl::GameReport>& reports,
                  const std::vector<json>& extra = {}) {
  sl::ReportWriter w{c.out, run_config, {}, {}};
  for (const auto& r : reports) w.add(r);
  for (const auto& j : extra) w.add_json(j);
  w.write(utc_timestamp());
  for (const auto& l : w.lines) std::cout << l.dump() << '\n';
}

json run_config(const std::string& command, const Config& c) {
  json j = c.to_json();
  j["command"] = command;
  j["schema"] = sl::kSchemaVersion;
  return j;
}

// ---------------------------------------------------------------------------
// Commands.

void cmd_channel_sample(Config& c) {
  sl::Rng rng(require_seed(c));
  auto ch = make_channel(c);
  sl::History h;
  for (std::size_t i = 0; i < c.count; ++i) h.push_back(ch->sample(h, rng));
  write_documents(c.out + ".bin", h);
  std::cout << json({{"channel", ch->descriptor()}, {"documents", documents_json(h)}}).dump() << '\n';
}

void cmd_channel_entropy(Config& c) {
  sl::Rng rng(require_seed(c));
  auto ch = make_channel(c);
  sl::History h;
  // For the scheme channel, measure at a full history (the ciphertext positions).
  if (c.channel == "ses") {
    auto ses = std::dynamic_pointer_cast<sl::SesChannel>(ch);
    for (std::size_t i = 0; i <= ses->ell(); ++i) h.push_back(ch->sample(h, rng));
  }
  sl::MinEntropyReport r = ch->has_exact_pmf() ? sl::min_entropy_exact(*ch, {h})
                                               : sl::min_entropy_estimate(*ch, h, c.trials, rng);
  json j = r.to_json();
  j["channel"] = ch->descriptor();
  std::cout << j.dump() << '\n';
}

void cmd_stego_embed(Config& c) {
  sl::Rng rng(require_seed(c));
  auto steg = make_rejsam(c);
  auto ch = make_channel(c);
  BitString ak = hex_or_random(c.ak_hex, steg->key_bits(), rng);
  BitString am = hex_or_random(c.am_hex, steg->message_bits(), rng);
  auto seq = sl::encode_sequence(*steg, ak, am, {}, steg->output_length(), sl::channel_oracle(*ch, rng), rng);
  write_documents(c.out + ".bin", seq.documents);
  std::cout << json({{"ak_hex", ak.to_hex()}, {"am_hex", am.to_hex()}, {"outl", steg->output_length()},
                     {"draws", seq.draws}, {"documents_path", c.out + ".bin"}})
                   .dump()
            << '\n';
}

void print_extracted(const std::optional<BitString>& am) {
  std::cout << json({{"am_hex", am ? json(am->to_hex()) : json(nullptr)}}).dump() << '\n';
}

void cmd_stego_extract(Config& c) {
  auto steg = make_rejsam(c);
  if (c.ak_hex.empty()) throw sl::InvalidParameter("--ak is required");
  print_extracted(steg->decode(BitString::from_hex(c.ak_hex, steg->key_bits()), read_documents(c)));
}

void cmd_stego_roundtrip(Config& c) {
  std::uint64_t seed = require_seed(c);
  auto steg = make_rejsam(c);
  auto ch = make_channel(c);
  sl::RunOptions opt{c.trials, seed, c.jobs};
  std::vector<sl::GameReport> reports;
  reports.push_back(sl::estimate_unrel(*steg, *ch, sl::empty_history(), sl::random_message_grid(), opt));
  if (c.tau.size() > 1 || c.tau.front() != 1) {
    std::vector<sl::ScheduleChoice> schedules;
    for (std::size_t tau : c.tau) schedules.push_back(sl::even_schedule(steg->output_length(), tau, sl::empty_history()));
    reports.push_back(sl::estimate_unrel_star(*steg, *ch, schedules, opt));
  }
  emit_reports(c, run_config("stego roundtrip", c), reports);
}

void cmd_asa_build(Config& c) {
  auto asa = make_asa(c, make_host(c));
  json j = asa->parameters();
  j["ml"] = asa->message_bits();
  j["outl"] = asa->output_length();
  j["bits_per_ciphertext"] = static_cast<double>(asa->message_bits()) / static_cast<double>(asa->output_length());
  std::cout << j.dump() << '\n';
}

void cmd_asa_run(Config& c) {
  sl::Rng rng(require_seed(c));
  auto host = make_host(c);
  auto L = host->lengths();
  BitString ak = hex_or_random(c.ak_hex, c.kappa, rng);
  BitString am = hex_or_random(c.am_hex, c.ml, rng);
  BitString k = hex_or_random(c.k_hex, L.key_bits, rng);
  std::vector<BitString> messages;
  std::vector<json> transcript;
  std::vector<sl::Document> cts;
  if (c.asa == "universal") {
    sl::UniversalStegoAsa asa(make_rejsam(c));
    sl::SchemeOracle oracle(*host);
    for (std::size_t i = 0; i < asa.output_length(); ++i) {
      BitString m = hex_or_random(c.m_hex, L.message_bits, rng);
      sl::RecordingOracle rec(oracle);
      sl::AsaStep st = asa.encrypt(ak, am, k, m, sl::State(), rec, rng);
      if (!rec.transcript().contains_output(st.ciphertext)) throw sl::InvariantViolation("emitted ciphertext not in transcript");
      for (auto& line : rec.transcript().to_json_lines(i)) transcript.push_back(std::move(line));
      cts.push_back(st.ciphertext);
    }
    std::ofstream tr(c.out + ".transcript.jsonl");
    for (const auto& line : transcript) tr << line.dump() << '\n';
  } else {
    auto asa = make_asa(c, host);
    for (std::size_t i = 0; i < asa->output_length(); ++i) messages.push_back(hex_or_random(c.m_hex, L.message_bits, rng));
    cts = sl::asa_enc_all(*asa, ak, am, k, messages, rng).ciphertexts;
  }
  write_documents(c.out + ".bin", cts);
  std::cout << json({{"ak_hex", ak.to_hex()}, {"am_hex", am.to_hex()}, {"k_hex", k.to_hex()},
                     {"ciphertexts", cts.size()}, {"documents_path", c.out + ".bin"}})
                   .dump()
            << '\n';
}

void cmd_asa_extract(Config& c) {
  auto asa = make_asa(c, make_host(c));
  if (c.ak_hex.empty()) throw sl::InvalidParameter("--ak is required");
  print_extracted(asa->extract(BitString::from_hex(c.ak_hex, asa->key_bits()), read_documents(c)));
}

void cmd_game(const std::string& game, Config& c) {
  std::uint64_t seed = require_seed(c);
  sl::RunOptions opt{c.trials, seed, c.jobs};
  sl::GameReport r;
  if (game == "cpa") {
    r = sl::run_cpa_dist(make_cpa_attacker(c), *make_host(c), opt);
  } else if (game == "enc-asa") {
    auto host = make_host(c);
    r = sl::run_enc_asa_dist(make_watchdog(c), *make_asa(c, host), *host, opt);
  } else if (game == "ss-cha") {
    if (c.channel == "ses") {
      auto host = make_host(c);
      sl::WrappedStego wrapped(make_asa(c, host), host);
      r = sl::run_ss_cha_dist(make_warden(c), wrapped, wrapped.channel(), opt);
    } else {
      r = sl::run_ss_cha_dist(make_warden(c), *make_rejsam(c), *make_channel(c), opt);
    }
  } else if (game == "rasa") {
    r = sl::run_rasa_dist(make_rasa_watchdog(c), *make_algorithm_asa(c), opt);
  } else {
    r = sl::run_sig_forge(make_forger(c), *make_signature(c, c.host_ml), opt);
  }
  emit_reports(c, run_config("game " + game, c), {r});
}

void cmd_lowerbound_phi(Config& c) {
  std::size_t outl = c.outl ? c.outl : make_rejsam(c)->output_length();
  double query = c.query > 0 ? c.query : 2.0;
  sl::PhiValue p = sl::phi({outl, query, c.ml});
  std::cout << json({{"outl", outl}, {"query", query}, {"ml", c.ml}, {"log2_phi", static_cast<double>(p.log2_phi)},
                     {"exact", p.exact}, {"vacuous", p.vacuous()}})
                   .dump()
            << '\n';
}

// Signed host for the lower-bound experiments: RandPad with --r coins and
// --host-ml message bits, signed with the --sig/--t fixture.
struct LowerboundSetup {
  std::shared_ptr<sl::RandPadScheme> base;
  std::shared_ptr<sl::TagSignature> sig;
  std::shared_ptr<sl::SignedScheme> host;
  std::shared_ptr<sl::UniversalAsa> asa;
};

LowerboundSetup lowerbound_setup(Config& c, sl::Rng& rng) {
  LowerboundSetup s;
  s.base = std::make_shared<sl::RandPadScheme>(c.r, c.kappa, c.host_ml);
  s.sig = make_signature(c, s.base->lengths().ciphertext_bits);
  s.host = sl::make_signed_family(s.base, s.sig, s.sig->generate_keypair(rng));
  if (c.asa == "fabricating") {
    s.asa = std::make_shared<sl::FabricatingAsa>(c.ml, c.query > 0 ? static_cast<std::size_t>(c.query) : 4);
  } else if (c.asa == "rejsam" || c.asa == "universal") {
    s.asa = std::make_shared<sl::UniversalStegoAsa>(make_rejsam(c));
  } else {
    throw sl::UnsupportedKind("unsupported universal ASA: " + c.asa);
  }
  return s;
}

void cmd_lowerbound_forger(Config& c) {
  std::uint64_t seed = require_seed(c);
  sl::Rng rng(sl::derive_seed(seed, 0, 99));
  LowerboundSetup s = lowerbound_setup(c, rng);
  sl::GameReport r = sl::run_sig_forge(sl::forger_from_universal_asa(s.asa, s.base), *s.sig, {c.trials, seed, c.jobs});
  emit_reports(c, run_config("lowerbound forger", c), {r});
}

void cmd_lowerbound_rate(Config& c) {
  std::uint64_t seed = require_seed(c);
  sl::Rng rng(sl::derive_seed(seed, 0, 99));
  LowerboundSetup s = lowerbound_setup(c, rng);
  sl::RunOptions opt{c.trials, seed, c.jobs};
  sl::BoundUniversalAsa bound(s.asa, s.host, s.host->verifier());
  std::vector<sl::GameReport> insec;
  for (const char* w : {"chi2", "validity"}) {
    Config wc = c;
    wc.watchdog = w;
    insec.push_back(sl::run_enc_asa_dist(make_watchdog(wc), bound, *s.host, opt));
  }
  sl::GameReport unrel = sl::estimate_unrel(bound, *s.host, sl::random_message_grid(), opt);
  sl::GameReport forge = sl::run_sig_forge(sl::forger_from_universal_asa(s.asa, s.base), *s.sig, opt);
  sl::SchemeOracle oracle(*s.host, s.host->verifier());
  std::vector<sl::QueryConfig> grid;
  for (int i = 0; i < 4; ++i) {
    grid.push_back({s.asa->generate_key(rng), rng.bits(s.asa->message_bits()), s.host->generate_key(rng),
                    rng.bits(s.host->lengths().message_bits)});
  }
  double query = c.query > 0 ? c.query : sl::query_count(*s.asa, oracle, grid, 200, rng);
  sl::RateReport rate = sl::rate_report(s.asa->message_bits(), s.asa->output_length(), query, insec, unrel, forge);
  json extra = rate.to_json();
  extra["query"] = query;
  extra["game"] = "rate";
  std::vector<sl::GameReport> all = insec;
  all.push_back(unrel);
  all.push_back(forge);
  emit_reports(c, run_config("lowerbound rate", c), all, {extra});
}

void cmd_report_merge(Config& c) {
  std::string merged = sl::report_merge(c.files);
  if (c.out.empty() || c.out == "-") {
    std::cout << merged;
  } else {
    std::ofstream(c.out) << merged;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subvertlab: steganography and algorithm substitution attack experiments"};
  app.require_subcommand(1);
  Config cfg;
  // One binding list per leaf command, so a config file only sees the
  // options of the command that was parsed.
  std::vector<std::unique_ptr<std::vector<Binding>>> binding_sets;
  std::function<void()> action;

  struct Leaf {
    std::string group, name, help;
    std::function<void(Config&)> run;
  };
  std::vector<Leaf> leaves = {
      {"channel", "sample", "sample documents from a channel", cmd_channel_sample},
      {"channel", "entropy", "exact or estimated min-entropy", cmd_channel_entropy},
      {"stego", "embed", "embed a hidden message into channel documents", cmd_stego_embed},
      {"stego", "extract", "decode a document file", cmd_stego_extract},
      {"stego", "roundtrip", "measure decode failure over N trials", cmd_stego_roundtrip},
      {"asa", "build", "describe an attack against a host scheme", cmd_asa_build},
      {"asa", "run", "produce subverted ciphertexts", cmd_asa_run},
      {"asa", "extract", "extract the hidden message from ciphertexts", cmd_asa_extract},
      {"game", "cpa", "CPA-Dist", [](Config& c) { cmd_game("cpa", c); }},
      {"game", "enc-asa", "EncASA-Dist", [](Config& c) { cmd_game("enc-asa", c); }},
      {"game", "ss-cha", "SS-CHA-Dist", [](Config& c) { cmd_game("ss-cha", c); }},
      {"game", "rasa", "RASA-Dist", [](Config& c) { cmd_game("rasa", c); }},
      {"game", "forge", "Sig-Forge", [](Config& c) { cmd_game("forge", c); }},
      {"lowerbound", "phi", "log2 of phi = (outl * query)^outl / 2^ml", cmd_lowerbound_phi},
      {"lowerbound", "forger", "forger extracted from a universal attack", cmd_lowerbound_forger},
      {"lowerbound", "rate", "rate report with the instantiated inequality", cmd_lowerbound_rate},
  };

  std::map<std::string, CLI::App*> groups;
  for (const auto& leaf : leaves) {
    if (!groups.count(leaf.group)) {
      groups[leaf.group] = app.add_subcommand(leaf.group);
      groups[leaf.group]->require_subcommand(1);
    }
    CLI::App* sub = groups[leaf.group]->add_subcommand(leaf.name, leaf.help);
    binding_sets.push_back(std::make_unique<std::vector<Binding>>());
    std::vector<Binding>* bindings = binding_sets.back().get();
    add_common(sub, cfg, *bindings);
    auto run = leaf.run;
    sub->callback([&action, &cfg, bindings, run] {
      action = [&cfg, bindings, run] {
        apply_config_file(cfg, *bindings);
        run(cfg);
      };
    });
  }
  CLI::App* report = app.add_subcommand("report");
  report->require_subcommand(1);
  CLI::App* merge = report->add_subcommand("merge", "concatenate CSV summaries");
  merge->add_option("files", cfg.files, "CSV files")->required();
  cfg.out.clear();
  merge->add_option("--out", cfg.out, "output file (default stdout)");
  merge->callback([&action, &cfg] { action = [&cfg] { cmd_report_merge(cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  if (cfg.out.empty() && !merge->parsed()) cfg.out = "subvertlab_report";

  try {
    action();
  } catch (const sl::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sl::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const sl::SchemaMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
