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

#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <memory>

#include "subvertlab/channel.hpp"
#include "subvertlab/derived_channels.hpp"
#include "subvertlab/encryption.hpp"
#include "subvertlab/signature.hpp"

namespace subvertlab {
namespace {

double chi2_quantile(double df, double q) { return boost::math::quantile(boost::math::chi_squared(df), q); }

// Pearson statistic of samples against an exact pmf (all outcomes enumerated).
template <class Sampler>
double pearson(const Distribution& pmf, std::size_t n, Sampler&& sample, std::size_t* df) {
  auto table = pmf.table();
  std::map<Document, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) {
    Document d = sample();
    EXPECT_GT(pmf.probability(d), 0.0) << "sample outside support";
    ++counts[d];
  }
  double x = 0;
  for (const auto& [d, p] : table) {
    double e = p * static_cast<double>(n);
    double o = static_cast<double>(counts[d]);
    x += (o - e) * (o - e) / e;
  }
  *df = table.size() - 1;
  return x;
}

std::shared_ptr<const EncryptionScheme> randpad(std::size_t r, std::size_t kappa = 128, std::size_t ml = 8) {
  return std::make_shared<RandPadScheme>(r, kappa, ml);
}

TEST(UniformChannelTest, SamplesPassChiSquareAt1e5) {
  UniformChannel ch(8);
  Rng rng(101);
  std::size_t df = 0;
  double x = pearson(ch.exact_pmf({}), 100000, [&] { return ch.sample({}, rng); }, &df);
  EXPECT_EQ(df, 255u);
  EXPECT_LT(x, chi2_quantile(255, 0.999));
}

TEST(SesChannelTest, EmptyHistorySamplesGen) {
  auto s = randpad(8);
  SesChannel ch(s, 3);
  Rng a(5), b(5);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(ch.sample({}, a), s->generate_key(b));
  EXPECT_EQ(ch.exact_pmf({}), Distribution::uniform_bits(128));
}

TEST(SesChannelTest, MessagePositionsAreUniform) {
  auto s = randpad(8);
  SesChannel ch(s, 3);
  Rng rng(6);
  History h = {ch.sample({}, rng)};
  h.push_back(ch.sample(h, rng));
  EXPECT_EQ(ch.exact_pmf(h), Distribution::uniform_bits(8));
  std::size_t df = 0;
  double x = pearson(ch.exact_pmf(h), 50000, [&] { return ch.sample(h, rng); }, &df);
  EXPECT_LT(x, chi2_quantile(static_cast<double>(df), 0.999));
}

TEST(SesChannelTest, GrammarViolationsAreRejected) {
  auto s = randpad(8);
  SesChannel ch(s, 2);
  Rng rng(1);
  BitString k = s->generate_key(rng);
  EXPECT_THROW(ch.sample({k, BitString(16)}, rng), InvalidHistory);  // ciphertext before the messages
  EXPECT_THROW(ch.sample({BitString(8)}, rng), InvalidHistory);      // short key
  EXPECT_NO_THROW(ch.sample({k, BitString(8), BitString(8), BitString(16)}, rng));
}

TEST(SesChannelTest, FullHistoryLawEqualsEncOfIndexedMessage) {
  auto s = randpad(4);
  std::size_t ell = 3;
  SesChannel ch(s, ell);
  Rng rng(2);
  History h = {s->generate_key(rng)};
  for (std::size_t i = 0; i < ell; ++i) h.push_back(rng.bits(8));
  for (std::size_t r = 0; r < 7; ++r) {
    EXPECT_EQ(ch.exact_pmf(h), s->ciphertext_distribution(h[0], h[1 + (r % ell)])) << "r=" << r;
    h.push_back(ch.sample(h, rng));
  }
}

TEST(SesChannelTest, CiphertextDependsOnlyOnKeyAndIndexedMessage) {
  auto s = randpad(8);
  std::size_t ell = 3;
  SesChannel ch(s, ell);
  Rng rng(3);
  BitString k = s->generate_key(rng);
  BitString m1 = rng.bits(8);
  for (int trial = 0; trial < 20; ++trial) {
    History h = {k, m1, rng.bits(8), rng.bits(8)};
    // r = 0 selects m_1 regardless of the other messages.
    Rng a(77), b(77);
    EXPECT_EQ(ch.sample(h, a), s->encrypt(k, m1, b));
  }
}

TEST(SesChannelTest, SamplerUsesTheSchemesOwnEncryption) {
  auto s = randpad(8);
  SesChannel ch(s, 1);
  Rng setup(4);
  BitString k = s->generate_key(setup), m = setup.bits(8);
  History h = {k, m};
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    Document c = ch.sample(h, a);
    ASSERT_EQ(c, s->encrypt(k, m, b));
    h.push_back(c);
  }
}

TEST(SesChannelTest, RandPad8CoinFieldIsUniformOn256Values) {
  auto s = randpad(8);
  SesChannel ch(s, 1);
  Rng rng(8);
  History h = {s->generate_key(rng), rng.bits(8)};
  auto table = ch.exact_pmf(h).table();
  ASSERT_EQ(table.size(), 256u);
  std::set<std::uint64_t> coins;
  for (const auto& [c, p] : table) {
    EXPECT_EQ(p, 1.0 / 256);
    coins.insert(c.read_uint(0, 8));
  }
  EXPECT_EQ(coins.size(), 256u);
}

TEST(SesChannelTest, SamplerMatchesPmfForRandPad4) {
  auto s = randpad(4);
  SesChannel ch(s, 2);
  Rng rng(12);
  History h = {s->generate_key(rng), rng.bits(8), rng.bits(8), BitString(12)};
  std::size_t df = 0;
  double x = pearson(ch.exact_pmf(h), 100000, [&] { return ch.sample(h, rng); }, &df);
  EXPECT_EQ(df, 15u);
  EXPECT_LT(x, chi2_quantile(15, 0.999));
}

TEST(SesChannelTest, GrammarAcceptsEveryPrefixOfSampledHistories) {
  Rng rng(21);
  for (std::size_t ell : {1u, 2u, 5u}) {
    SesChannel ch(randpad(3), ell);
    History h;
    for (int i = 0; i < 20; ++i) {
      ASSERT_TRUE(ch.accepts(h));
      h.push_back(ch.sample(h, rng));
    }
    ASSERT_TRUE(ch.accepts(h));
  }
}

TEST(SesChannelTest, DescriptorFields) {
  SesChannel ch(randpad(8), 4);
  json d = ch.descriptor();
  EXPECT_EQ(d["type"], "ses");
  EXPECT_EQ(d["kappa"], 128);
  EXPECT_EQ(d["ell"], 4);
  EXPECT_EQ(d["scheme_id"], "randpad:8");
  EXPECT_EQ(d["max_doc_len"], 128);
}

TEST(RandAlgChannelTest, SignatureChannelEmitsSignaturesOfHistoryMessages) {
  auto sig = std::make_shared<TagSignature>(TagSignature::make(SignatureKind::kCoinExtractable, 128, 8));
  auto alg = std::make_shared<SigningAlgorithm>(sig);
  RandAlgChannel ch(alg, uniform_inputs(8), 2);
  Rng rng(13);
  History h;
  for (int i = 0; i < 3; ++i) h.push_back(ch.sample(h, rng));
  for (int r = 0; r < 6; ++r) {
    Document y = ch.sample(h, rng);
    EXPECT_TRUE(sig->verify(h[0], h[1 + (r % 2)], y));
    h.push_back(y);
  }
}

TEST(RandAlgChannelTest, DeterministicAlgorithmHasZeroMinEntropy) {
  auto alg = std::make_shared<EncryptionAlgorithm>(std::make_shared<DeterministicScheme>(128, 8));
  RandAlgChannel ch(alg, uniform_inputs(8), 1);
  Rng rng(14);
  std::vector<History> hs;
  for (int i = 0; i < 10; ++i) hs.push_back({rng.bits(128), rng.bits(8)});
  MinEntropyReport rep = min_entropy_exact(ch, hs);
  EXPECT_EQ(rep.bits, 0.0);
  EXPECT_EQ(rep.method, MinEntropyReport::Method::kExact);
}

// Every history of a 2-bit toy: kappa = 2, ml = 2, two coin bits, ell = 2,
// up to three ciphertexts. The two channels must agree exactly everywhere.
TEST(RandAlgChannelTest, EncAlgorithmChannelEqualsSesChannelExhaustively) {
  auto s = std::make_shared<RandPadScheme>(2, 2, 2);
  SesChannel ses(s, 2);
  RandAlgChannel ra(std::make_shared<EncryptionAlgorithm>(s), uniform_inputs(2), 2);
  std::vector<History> frontier = {History()};
  std::size_t compared = 0;
  for (std::size_t depth = 0; depth < 6; ++depth) {
    std::vector<History> next;
    for (const auto& h : frontier) {
      Distribution a = ses.exact_pmf(h), b = ra.exact_pmf(h);
      ASSERT_EQ(a, b) << "history length " << h.size();
      ++compared;
      for (const auto& [d, p] : a.table()) {
        History hd = h;
        hd.push_back(d);
        next.push_back(std::move(hd));
      }
    }
    frontier = std::move(next);
  }
  EXPECT_GT(compared, 1000u);
}

TEST(MinEntropyTest, ExactValues) {
  Rng rng(15);
  auto s = randpad(8);
  SesChannel ch(s, 1);
  std::vector<History> full;
  for (int i = 0; i < 8; ++i) full.push_back({s->generate_key(rng), rng.bits(8)});
  EXPECT_DOUBLE_EQ(min_entropy_exact(ch, full).bits, 8.0);

  SesChannel det(std::make_shared<DeterministicScheme>(128, 8), 1);
  EXPECT_EQ(min_entropy_exact(det, full).bits, 0.0);

  EXPECT_DOUBLE_EQ(min_entropy_exact(UniformChannel(8), {History()}).bits, 8.0);
}

TEST(MinEntropyTest, RandPadMinEntropyEqualsCoinBits) {
  Rng rng(16);
  for (std::size_t r : {0u, 1u, 4u, 6u}) {
    auto s = randpad(r);
    SesChannel ch(s, 1);
    std::vector<History> full;
    for (int i = 0; i < 4; ++i) full.push_back({s->generate_key(rng), rng.bits(8)});
    EXPECT_DOUBLE_EQ(min_entropy_exact(ch, full).bits, static_cast<double>(r));
  }
}

TEST(MinEntropyTest, ExactRequiresPmf) {
  SesChannel wide(randpad(24), 1);
  EXPECT_FALSE(wide.has_exact_pmf());
  EXPECT_THROW(min_entropy_exact(wide, {History()}), NoExactPmf);
}

TEST(MinEntropyTest, CollisionEstimateOnUniformSource) {
  Rng rng(17);
  MinEntropyReport rep = min_entropy_estimate(UniformChannel(8), {}, 100000, rng);
  EXPECT_NEAR(rep.bits, 8.0, 0.2);
  EXPECT_EQ(rep.method, MinEntropyReport::Method::kCollisionEstimate);
  EXPECT_EQ(rep.sample_count, 100000u);
}

TEST(MinEntropyTest, CollisionEstimateOnPointMassIsZero) {
  Rng rng(18);
  EXPECT_EQ(min_entropy_estimate(ConstantChannel(BitString(8)), {}, 1000, rng).bits, 0.0);
}

TEST(MinEntropyTest, CollisionEstimateOnRandPad8FullHistory) {
  Rng rng(19);
  auto s = randpad(8);
  SesChannel ch(s, 1);
  History h = {s->generate_key(rng), rng.bits(8)};
  EXPECT_NEAR(min_entropy_estimate(ch, h, 100000, rng).bits, min_entropy_exact(ch, {h}).bits, 0.3);
}

TEST(HistoryCodecTest, LengthPrefixedFormat) {
  History h = {BitString::from_bit_text("101"), BitString::from_hex("abcd", 16)};
  auto bytes = serialize_history(h);
  std::vector<std::uint8_t> expect = {0, 0, 0, 3, 0xA0, 0, 0, 0, 16, 0xAB, 0xCD};
  EXPECT_EQ(bytes, expect);
  EXPECT_EQ(deserialize_history(bytes), h);
  EXPECT_EQ(history_from_hex(history_to_hex(h)), h);
}

TEST(HistoryCodecTest, RoundTripProperty) {
  Rng rng(20);
  for (int iter = 0; iter < 300; ++iter) {
    History h;
    std::size_t n = rng.below(6);
    for (std::size_t i = 0; i < n; ++i) h.push_back(rng.bits(rng.below(140)));
    ASSERT_EQ(deserialize_history(serialize_history(h)), h);
  }
}

TEST(HistoryCodecTest, MalformedInputIsRejected) {
  EXPECT_THROW(deserialize_history({0, 0, 0}), InvalidHistory);
  EXPECT_THROW(deserialize_history({0, 0, 0, 16, 0xAB}), InvalidHistory);
  EXPECT_THROW(deserialize_history({0, 0, 0, 3, 0xB0}), InvalidHistory);
}

TEST(TableChannelTest, SamplerMatchesPmf) {
  std::map<Document, double> t = {{BitString::from_uint(0, 2), 0.5},
                                  {BitString::from_uint(1, 2), 0.25},
                                  {BitString::from_uint(2, 2), 0.125},
                                  {BitString::from_uint(3, 2), 0.125}};
  TableChannel ch(Distribution::from_table(t));
  Rng rng(22);
  std::size_t df = 0;
  double x = pearson(ch.exact_pmf({}), 100000, [&] { return ch.sample({}, rng); }, &df);
  EXPECT_LT(x, chi2_quantile(3, 0.999));
  EXPECT_DOUBLE_EQ(min_entropy_exact(ch, {History()}).bits, 1.0);
}

}  // namespace
}  // namespace subvertlab
