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

#include <gtest/gtest.h>

#include <memory>
#include <set>
#include <vector>

#include "subvertlab/adversaries.hpp"
#include "subvertlab/asa.hpp"
#include "subvertlab/games.hpp"

namespace subvertlab {
namespace {

std::shared_ptr<RejSam> rejsam(std::size_t ml, std::size_t s, std::size_t outl = 0, std::size_t block_bits = 1) {
  StegoParams p;
  p.ml = ml;
  p.s = s;
  p.outl = outl;
  p.block_bits = block_bits;
  return std::make_shared<RejSam>(p);
}

std::shared_ptr<RandPadScheme> randpad(std::size_t r, std::size_t ml = 8) {
  return std::make_shared<RandPadScheme>(r, 128, ml);
}

TEST(AsaFromStegoTest, SeedCoupledWithStegoOnSesChannel) {
  auto steg = rejsam(8, 64, 64);
  auto ses = randpad(8);
  AsaFromStego asa(steg, ses);
  SesChannel channel(ses, 64);
  Rng setup(1);
  for (int run = 0; run < 100; ++run) {
    BitString ak = asa.generate_key(setup), am = setup.bits(8), k = ses->generate_key(setup), m = setup.bits(8);
    History h = asa.internal_history(k, m);
    ASSERT_TRUE(channel.accepts(h));
    Rng a(1000 + static_cast<std::uint64_t>(run)), b(1000 + static_cast<std::uint64_t>(run));
    AsaStep x = asa.encrypt(ak, am, k, m, State(), a);
    StegoStep y = steg->encode(ak, am, h, State(), channel_oracle(channel, b), b);
    ASSERT_EQ(x.ciphertext, y.document);
    ASSERT_EQ(x.queries, y.draws);
  }
}

TEST(AsaFromStegoTest, ExtractionOnRandPad8) {
  AsaFromStego asa(rejsam(8, 64, 64), randpad(8));
  GameReport r = estimate_unrel(asa, *randpad(8), random_message_grid(), {500, 2, 1});
  EXPECT_LE(r.success_count, 5u);
}

// Every ciphertext is Enc(k, m), so every document marks the same index.
TEST(AsaFromStegoTest, DeterministicHostMostlyFails) {
  auto det = std::make_shared<DeterministicScheme>(128, 16);
  AsaFromStego asa(rejsam(16, 64), det);
  GameReport r = estimate_unrel(asa, *det, random_message_grid(), {500, 3, 1});
  EXPECT_GE(r.p_hat, 0.9);
}

class WrongLengthStego final : public StegoSystem {
 public:
  std::size_t message_bits() const override { return 8; }
  std::size_t output_length() const override { return 4; }
  std::size_t key_bits() const override { return 16; }
  StegoStep encode(const BitString&, const BitString&, const History&, const State& sigma, const ChannelOracle&,
                   Rng&) const override {
    return {BitString(7), sigma, 0, true};
  }
  std::optional<BitString> decode(const BitString&, std::span<const Document>) const override { return std::nullopt; }
  json parameters() const override { return {}; }
};

TEST(AsaFromStegoTest, LengthMismatches) {
  auto ses = randpad(8);
  Rng rng(4);
  AsaFromStego bad(std::make_shared<WrongLengthStego>(), ses);
  EXPECT_THROW(bad.encrypt(rng.bits(16), rng.bits(8), rng.bits(128), rng.bits(8), State(), rng), LengthMismatch);
  AsaFromStego asa(rejsam(8, 64, 64), ses);
  EXPECT_THROW(asa.encrypt(rng.bits(128), rng.bits(8), rng.bits(127), rng.bits(8), State(), rng), LengthMismatch);
  EXPECT_THROW(asa.encrypt(rng.bits(128), rng.bits(8), rng.bits(128), rng.bits(9), State(), rng), LengthMismatch);
  EXPECT_THROW(asa.encrypt(rng.bits(128), rng.bits(4), rng.bits(128), rng.bits(8), State(), rng), LengthMismatch);
}

TEST(AsaEncAllTest, EmptyEqualAndDistinctMessages) {
  auto ses = randpad(8);
  auto steg = rejsam(8, 64, 64);
  AsaFromStego asa(steg, ses);
  Rng rng(5);
  BitString ak = asa.generate_key(rng), am = rng.bits(8), k = ses->generate_key(rng);
  EXPECT_TRUE(asa_enc_all(asa, ak, am, k, {}, rng).ciphertexts.empty());

  // Equal messages: the loop is SEnc on k || m^ell, one fresh history per call.
  BitString m = rng.bits(8);
  std::vector<BitString> same(64, m);
  Rng a(6), b(6);
  AsaSequence seq = asa_enc_all(asa, ak, am, k, same, a);
  SesChannel channel(ses, 64);
  History h = asa.internal_history(k, m);
  for (std::size_t i = 0; i < 64; ++i) {
    ASSERT_EQ(seq.ciphertexts[i], steg->encode(ak, am, h, State(), channel_oracle(channel, b), b).document);
  }

  std::vector<BitString> distinct;
  for (int i = 0; i < 64; ++i) distinct.push_back(rng.bits(8));
  AsaSequence d = asa_enc_all(asa, ak, am, k, distinct, rng);
  for (std::size_t i = 0; i < 64; ++i) ASSERT_EQ(ses->decrypt(k, d.ciphertexts[i]), distinct[i]);
  auto out = asa.extract(ak, d.ciphertexts);
  EXPECT_TRUE(!out || out->size() == 8);
}

// Counts every access to the oracle interface.
class CountingOracle final : public EncryptionOracle {
 public:
  explicit CountingOracle(const EncryptionScheme& s) : inner_(s) {}
  std::size_t message_bits() const override {
    ++reads_ml;
    return inner_.message_bits();
  }
  std::size_t ciphertext_bits() const override {
    ++reads_cl;
    return inner_.ciphertext_bits();
  }
  std::size_t coin_bits() const override {
    ++reads_coins;
    return inner_.coin_bits();
  }
  Document query(const BitString& k, const BitString& m, const BitString& coins) override {
    ++queries;
    return inner_.query(k, m, coins);
  }
  bool has_verifier() const override {
    ++forbidden;
    return false;
  }
  bool verify(const Document&) override {
    ++forbidden;
    return false;
  }
  mutable std::size_t reads_ml = 0, reads_cl = 0, reads_coins = 0, forbidden = 0;
  std::size_t queries = 0;

 private:
  SchemeOracle inner_;
};

TEST(UniversalAsaTest, OutputsAreOracleAnswersAndCountsAreBounded) {
  auto ses = randpad(8);
  UniversalStegoAsa asa(rejsam(8, 64, 64));
  Rng rng(7);
  SchemeOracle base(*ses);
  std::size_t total = 0;
  for (int i = 0; i < 10000; ++i) {
    BitString ak = asa.generate_key(rng), am = rng.bits(8), k = ses->generate_key(rng), m = rng.bits(8);
    RecordingOracle rec(base);
    AsaStep st = asa.encrypt(ak, am, k, m, State(), rec, rng);
    ASSERT_TRUE(rec.transcript().contains_output(st.ciphertext));
    ASSERT_EQ(st.queries, rec.transcript().count());
    ASSERT_LE(st.queries, 65u);
    total += st.queries;
  }
  EXPECT_NEAR(static_cast<double>(total) / 10000.0, 2.0, 0.06);
}

TEST(UniversalAsaTest, ReadsOnlyLengthsAndTheOracle) {
  auto ses = randpad(8);
  UniversalStegoAsa asa(rejsam(8, 64, 64));
  Rng rng(8);
  CountingOracle oracle(*ses);
  for (int i = 0; i < 100; ++i) {
    asa.encrypt(asa.generate_key(rng), rng.bits(8), ses->generate_key(rng), rng.bits(8), State(), oracle, rng);
  }
  EXPECT_EQ(oracle.forbidden, 0u);
  EXPECT_GT(oracle.queries, 0u);
  EXPECT_GT(oracle.reads_coins, 0u);
}

TEST(UniversalAsaTest, BoundAttackMatchesOracleRun) {
  auto ses = randpad(8);
  auto uni = std::make_shared<UniversalStegoAsa>(rejsam(8, 64, 64));
  BoundUniversalAsa bound(uni, ses);
  Rng setup(9);
  for (int i = 0; i < 200; ++i) {
    BitString ak = setup.bits(128), am = setup.bits(8), k = setup.bits(128), m = setup.bits(8);
    Rng a(static_cast<std::uint64_t>(i)), b(static_cast<std::uint64_t>(i));
    SchemeOracle oracle(*ses);
    ASSERT_EQ(bound.encrypt(ak, am, k, m, State(), a).ciphertext,
              uni->encrypt(ak, am, k, m, State(), oracle, b).ciphertext);
  }
}

std::vector<QueryConfig> configs(Rng& rng, std::size_t ml, std::size_t host_ml, std::size_t n) {
  std::vector<QueryConfig> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({rng.bits(128), rng.bits(ml), rng.bits(128), rng.bits(host_ml)});
  return out;
}

TEST(QueryCountTest, CutoffOneAndGeometricMeans) {
  auto ses = randpad(16);
  Rng rng(10);
  SchemeOracle oracle(*ses);
  double one = query_count(UniversalStegoAsa(rejsam(8, 1, 64)), oracle, configs(rng, 8, 8, 4), 2000, rng);
  EXPECT_GE(one, 1.0);
  EXPECT_LE(one, 2.0);
  EXPECT_NEAR(query_count(UniversalStegoAsa(rejsam(8, 64, 64)), oracle, configs(rng, 8, 8, 4), 4000, rng), 2.0,
              0.15);
  EXPECT_NEAR(query_count(UniversalStegoAsa(rejsam(8, 1000, 64, 3)), oracle, configs(rng, 8, 8, 4), 2000, rng), 8.0,
              0.6);
  EXPECT_THROW(query_count(UniversalStegoAsa(rejsam(8, 64, 64)), oracle, {}, 1, rng), InvalidParameter);
}

TEST(TranscriptTest, JsonLines) {
  auto ses = randpad(8);
  SchemeOracle base(*ses);
  RecordingOracle rec(base);
  BitString k = BitString::from_uint(0, 128), m = BitString::from_uint(0xab, 8), r = BitString::from_uint(0x01, 8);
  Document c = rec.query(k, m, r);
  auto lines = rec.transcript().to_json_lines(7);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0]["trial"], 7);
  EXPECT_EQ(lines[0]["query_index"], 0);
  EXPECT_EQ(lines[0]["m_hex"], "ab");
  EXPECT_EQ(lines[0]["coins_hex"], "01");
  EXPECT_EQ(lines[0]["c_hex"], c.to_hex());
  EXPECT_EQ(lines[0]["k_hex"].get<std::string>().size(), 32u);
}

TEST(GenericAlgorithmAsaTest, CoinExtractableSignatureExtraction) {
  auto sig = std::make_shared<TagSignature>(TagSignature::make(SignatureKind::kCoinExtractable, 128, 8));
  ASSERT_EQ(sig->coin_bits(), 4u);
  auto alg = std::make_shared<SigningAlgorithm>(sig);
  GenericAlgorithmAsa asa(rejsam(8, 64, 64), alg, uniform_inputs(8));
  GameReport r = estimate_unrel(asa, uniform_inputs(8), random_message_grid(), {500, 11, 1});
  EXPECT_LE(r.success_count, 5u);
}

// The extractor sees outputs only: decoding gives the same answer whatever
// inputs produced them.
TEST(GenericAlgorithmAsaTest, ExtractionIsInputFree) {
  auto sig = std::make_shared<TagSignature>(TagSignature::make(SignatureKind::kCoinExtractable, 128, 8));
  GenericAlgorithmAsa asa(rejsam(8, 64, 64), std::make_shared<SigningAlgorithm>(sig), uniform_inputs(8));
  Rng rng(12);
  BitString ak = asa.generate_key(rng), am = rng.bits(8), sk = asa.algorithm().generate_secret(rng);
  std::vector<Document> ys;
  for (int i = 0; i < 64; ++i) ys.push_back(asa.run(ak, am, sk, rng.bits(8), State(), rng).ciphertext);
  auto out = asa.extract(ak, ys);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(*out, am);
}

TEST(GenericAlgorithmAsaTest, EncryptionAlgorithmMatchesAsaFromStego) {
  auto ses = randpad(8);
  auto steg = rejsam(8, 64, 64);
  GenericAlgorithmAsa generic(steg, std::make_shared<EncryptionAlgorithm>(ses), uniform_inputs(8));
  AsaFromStego direct(steg, ses);
  Rng setup(13);
  for (int i = 0; i < 200; ++i) {
    BitString ak = setup.bits(128), am = setup.bits(8), k = setup.bits(128), m = setup.bits(8);
    Rng a(static_cast<std::uint64_t>(i)), b(static_cast<std::uint64_t>(i));
    ASSERT_EQ(generic.run(ak, am, k, m, State(), a).ciphertext, direct.encrypt(ak, am, k, m, State(), b).ciphertext);
  }
}

// Deterministic R: either extraction is forced reliable and the repeat-query
// comparer sees it, or the generic attack cannot extract.
TEST(DeterministicAlgorithmTest, ForcedEmbeddingIsDetectedAndGenericFails) {
  auto sig = std::make_shared<TagSignature>(TagSignature::make(SignatureKind::kUnique, 128, 8));
  auto alg = std::make_shared<SigningAlgorithm>(sig);
  ForcedEmbeddingAsa forced(alg, 8, 64);
  GameReport unrel = estimate_unrel(forced, uniform_inputs(8), random_message_grid(), {500, 14, 1});
  EXPECT_LE(unrel.p_hat, 0.02);
  GameReport adv = run_rasa_dist(rasa_repeat_query_comparer(), forced, {1000, 15, 1});
  ASSERT_TRUE(adv.normalized_advantage.has_value());
  EXPECT_GE(*adv.normalized_advantage, 0.99);

  GenericAlgorithmAsa generic(rejsam(8, 64, 64), alg, uniform_inputs(8));
  GameReport g = estimate_unrel(generic, uniform_inputs(8), random_message_grid(), {500, 16, 1});
  EXPECT_GE(g.p_hat, 0.9);
}

TEST(ForcedEmbeddingTest, RejectsBadParameters) {
  auto sig = std::make_shared<TagSignature>(TagSignature::make(SignatureKind::kUnique, 128, 8));
  auto alg = std::make_shared<SigningAlgorithm>(sig);
  EXPECT_THROW(ForcedEmbeddingAsa(alg, 6, 64), InvalidParameter);
  ForcedEmbeddingAsa ok(alg, 8, 64);
  EXPECT_THROW(ok.extract(BitString(128), std::vector<Document>(3, BitString(8))), WrongDocumentCount);
}

}  // namespace
}  // namespace subvertlab
