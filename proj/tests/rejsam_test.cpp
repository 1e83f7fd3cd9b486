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
#include <cmath>
#include <map>
#include <vector>

#include "subvertlab/channel.hpp"
#include "subvertlab/rejsam.hpp"

namespace subvertlab {
namespace {

StegoParams params(std::size_t ml, std::size_t s, std::size_t outl = 0, std::size_t block_bits = 1) {
  StegoParams p;
  p.ml = ml;
  p.s = s;
  p.outl = outl;
  p.block_bits = block_bits;
  return p;
}

double chi_square_uniform(const std::vector<std::size_t>& counts, std::size_t n) {
  double e = static_cast<double>(n) / static_cast<double>(counts.size()), x = 0;
  for (std::size_t c : counts) x += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
  return x;
}

double chi_square_cut(std::size_t cells) {
  return boost::math::quantile(boost::math::chi_squared(static_cast<double>(cells - 1)), 0.999);
}

TEST(RejSamGenTest, KeyLengthFreshnessAndReplay) {
  RejSam steg(params(8, 64, 64));
  Rng a(1), b(1);
  BitString k1 = steg.generate_key(a), k2 = steg.generate_key(a);
  EXPECT_EQ(k1.size(), 128u);
  EXPECT_NE(k1, k2);
  EXPECT_EQ(steg.generate_key(b), k1);
}

TEST(OutlForTest, TabulatedValues) {
  EXPECT_EQ(outl_for(16, 16 - std::log(16.0)), 256u);
  EXPECT_EQ(outl_for(2, std::log(2.0)), 3u);
  EXPECT_EQ(outl_for(64, 2.0, 6), 49u);
  EXPECT_EQ(RejSam(params(16, 64)).output_length(), 256u);
  EXPECT_THROW(outl_for(12, 1.0), InvalidParameter);
  EXPECT_THROW(outl_for(8, 0.0), InvalidParameter);
  EXPECT_THROW(RejSam(params(24, 64)), InvalidParameter);
}

TEST(RejSamEncodeTest, MeanDrawsIsTwoForBitEmbedding) {
  UniformChannel ch(16);
  RejSam steg(params(8, 64, 64));
  Rng rng(2);
  auto oracle = channel_oracle(ch, rng);
  std::size_t draws = 0, n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    BitString ak = steg.generate_key(rng), am = rng.bits(8);
    draws += steg.encode(ak, am, {}, {}, oracle, rng).draws;
  }
  EXPECT_NEAR(static_cast<double>(draws) / static_cast<double>(n), 2.0, 0.05);
}

TEST(RejSamEncodeTest, CutoffBoundsDrawsAndEmitsLastSample) {
  UniformChannel ch(8);
  Rng rng(3);
  for (std::size_t s : {1u, 2u, 5u}) {
    RejSam steg(params(8, s, 64));
    BitString ak = steg.generate_key(rng), am = rng.bits(8);
    for (int i = 0; i < 2000; ++i) {
      std::vector<Document> drawn;
      ChannelOracle oracle = [&](const History& h) {
        drawn.push_back(ch.sample(h, rng));
        return drawn.back();
      };
      StegoStep st = steg.encode(ak, am, {}, {}, oracle, rng);
      ASSERT_LE(st.draws, s + 1);
      ASSERT_EQ(st.draws, drawn.size());
      ASSERT_EQ(st.document, drawn.back());
      if (!st.matched) {
        ASSERT_EQ(st.draws, s + 1);
      }
    }
  }
}

// Exact one-step law for a fixed key against sampled frequencies.
TEST(RejSamEncodeTest, EmpiricalStepLawMatchesExactLaw) {
  std::map<Document, double> t;
  for (std::uint64_t v = 0; v < 16; ++v) t[BitString::from_uint(v, 4)] = v < 8 ? 3.0 / 32 : 1.0 / 32;
  TableChannel ch(Distribution::from_table(t));
  Rng rng(4);
  for (std::size_t s : {1u, 3u}) {
    BitString ak = rng.bits(128), am = rng.bits(8);
    Prf prf(ak);
    Distribution exact = rejsam_step_distribution(prf, am, ch.exact_pmf({}), s);
    EXPECT_NEAR(exact.total_mass(), 1.0, 1e-12);
    RejSam steg(params(8, s, 64));
    auto oracle = channel_oracle(ch, rng);
    std::map<Document, std::size_t> counts;
    std::size_t n = 50000;
    for (std::size_t i = 0; i < n; ++i) ++counts[steg.encode(ak, am, {}, {}, oracle, rng).document];
    double x = 0;
    std::size_t cells = 0;
    for (const auto& [d, p] : exact.table()) {
      if (p == 0) continue;
      ++cells;
      double e = p * static_cast<double>(n), o = static_cast<double>(counts[d]);
      x += (o - e) * (o - e) / e;
    }
    EXPECT_LT(x, chi_square_cut(cells)) << "s=" << s;
  }
}

TEST(RejSamEncodeTest, PointMassChannelReturnsTheOnlyDocument) {
  Document only = BitString::from_uint(0xA5, 8);
  ConstantChannel ch(only);
  Rng rng(5);
  RejSam steg(params(8, 16, 64));
  for (int i = 0; i < 50; ++i) {
    BitString ak = steg.generate_key(rng), am = rng.bits(8);
    auto oracle = channel_oracle(ch, rng);
    StegoStep st = steg.encode(ak, am, {}, {}, oracle, rng);
    EXPECT_EQ(st.document, only);
    BitIndex bj = prf_split_eval(Prf(ak), only, 8);
    bool hit = am[bj.j] == bj.b;
    EXPECT_EQ(st.matched, hit);
    EXPECT_EQ(st.draws, hit ? 1u : 17u);
  }
}

TEST(RejSamEncodeTest, StateIsPassedThroughAndIgnored) {
  UniformChannel ch(8);
  RejSam steg(params(8, 64, 64));
  Rng setup(6);
  for (int i = 0; i < 200; ++i) {
    BitString ak = steg.generate_key(setup), am = setup.bits(8), sigma = setup.bits(1 + i % 40);
    Rng a(100 + static_cast<std::uint64_t>(i)), b(100 + static_cast<std::uint64_t>(i));
    auto oa = channel_oracle(ch, a);
    auto ob = channel_oracle(ch, b);
    StegoStep x = steg.encode(ak, am, {}, sigma, oa, a);
    StegoStep y = steg.encode(ak, am, {}, State(), ob, b);
    ASSERT_EQ(x.state, sigma);
    ASSERT_TRUE(y.state.empty());
    ASSERT_EQ(x.document, y.document);
  }
}

TEST(RejSamEncodeTest, WrongMessageLengthThrows) {
  UniformChannel ch(8);
  RejSam steg(params(8, 64, 64));
  Rng rng(7);
  auto oracle = channel_oracle(ch, rng);
  EXPECT_THROW(steg.encode(rng.bits(128), rng.bits(7), {}, {}, oracle, rng), LengthMismatch);
}

TEST(EncodeSequenceTest, EmptyAndHistoryGrowth) {
  UniformChannel ch(8);
  RejSam steg(params(8, 64, 64));
  Rng rng(8);
  BitString ak = steg.generate_key(rng), am = rng.bits(8);
  auto oracle = channel_oracle(ch, rng);
  EXPECT_TRUE(encode_sequence(steg, ak, am, {}, 0, oracle, rng).documents.empty());

  History start{BitString::from_uint(1, 8), BitString::from_uint(2, 8)};
  std::vector<History> seen;
  ChannelOracle recording = [&](const History& h) {
    seen.push_back(h);
    return ch.sample(h, rng);
  };
  EncodedSequence seq = encode_sequence(steg, ak, am, start, 10, recording, rng);
  ASSERT_EQ(seq.documents.size(), 10u);
  for (const History& h : seen) {
    ASSERT_GE(h.size(), 2u);
    ASSERT_EQ(History(h.begin(), h.begin() + 2), start);
    for (std::size_t i = 2; i < h.size(); ++i) ASSERT_EQ(h[i], seq.documents[i - 2]);
  }
  EXPECT_EQ(seen.back().size(), 11u);
}

// Averaged over fresh keys and messages the emitted documents look uniform.
TEST(EncodeSequenceTest, EmittedDocumentsPassChiSquareUniformity) {
  UniformChannel ch(8);
  RejSam steg(params(8, 64, 64));
  Rng rng(9);
  auto oracle = channel_oracle(ch, rng);
  std::vector<std::size_t> counts(256, 0);
  std::size_t n = 0;
  while (n < 10000) {
    BitString ak = steg.generate_key(rng), am = rng.bits(8);
    for (const auto& d : encode_sequence(steg, ak, am, {}, 8, oracle, rng).documents) {
      ++counts[d.to_uint()];
      ++n;
    }
  }
  EXPECT_LT(chi_square_uniform(counts, n), chi_square_cut(256));
}

TEST(RejSamDecodeTest, RoundtripWithLargeCutoff) {
  UniformChannel ch(8);
  RejSam steg(params(8, std::size_t{1} << 20, 64));
  Rng rng(10);
  auto oracle = channel_oracle(ch, rng);
  int ok = 0;
  for (int t = 0; t < 500; ++t) {
    BitString ak = steg.generate_key(rng), am = rng.bits(8);
    auto seq = encode_sequence(steg, ak, am, {}, 64, oracle, rng);
    auto out = steg.decode(ak, seq.documents);
    ok += out.has_value() && *out == am;
  }
  EXPECT_GE(ok, 495);
}

TEST(RejSamDecodeTest, UncoveredPositionGivesBottom) {
  Rng rng(11);
  BitString ak = rng.bits(128);
  Prf prf(ak);
  std::vector<Document> docs;
  for (std::uint64_t v = 0; docs.size() < 8; ++v) {
    Document d = BitString::from_uint(v, 16);
    if (prf_split_eval(prf, d, 8).j != 3) docs.push_back(d);
  }
  EXPECT_FALSE(rejsam_decode(prf, docs, 8).has_value());
  RejSam steg(params(8, 64, 8));
  EXPECT_FALSE(steg.decode(ak, docs).has_value());
  EXPECT_THROW(steg.decode(ak, std::span<const Document>(docs).first(7)), WrongDocumentCount);
}

TEST(RejSamDecodeTest, LaterDocumentsOverwrite) {
  Rng rng(12);
  Prf prf(rng.bits(128));
  std::vector<Document> docs;
  for (std::uint64_t v = 0; docs.size() < 200; ++v) docs.push_back(BitString::from_uint(v, 16));
  auto full = rejsam_decode(prf, docs, 4);
  ASSERT_TRUE(full.has_value());
  BitString expect(4);
  for (const auto& d : docs) {
    BitIndex bj = prf_split_eval(prf, d, 4);
    expect.set(bj.j, bj.b);
  }
  EXPECT_EQ(*full, expect);
}

// Honest encodings never disagree on a position, so the overwrite order is
// irrelevant and decoding any permutation of the documents gives am.
TEST(RejSamDecodeTest, OverwriteConsistencyAndOrderFreedom) {
  UniformChannel ch(8);
  RejSam steg(params(8, std::size_t{1} << 20, 64));
  Rng rng(13);
  auto oracle = channel_oracle(ch, rng);
  for (int t = 0; t < 200; ++t) {
    BitString ak = steg.generate_key(rng), am = rng.bits(8);
    auto seq = encode_sequence(steg, ak, am, {}, 64, oracle, rng);
    Prf prf(ak);
    for (const auto& d : seq.documents) {
      BitIndex bj = prf_split_eval(prf, d, 8);
      ASSERT_EQ(am[bj.j], bj.b);
    }
    auto a = steg.decode(ak, seq.documents);
    std::vector<Document> rev(seq.documents.rbegin(), seq.documents.rend());
    ASSERT_EQ(a, steg.decode(ak, rev));
  }
}

TEST(RejSamBlockTest, BlockBitsOneIsBitIdentical) {
  UniformChannel ch(8);
  Rng setup(14);
  for (int i = 0; i < 500; ++i) {
    BitString ak = setup.bits(128), am = setup.bits(16);
    Prf prf(ak);
    Rng a(static_cast<std::uint64_t>(i)), b(static_cast<std::uint64_t>(i));
    auto oa = channel_oracle(ch, a);
    auto ob = channel_oracle(ch, b);
    StegoStep x = rejsam_encode_step(prf, am, {}, {}, oa, 3);
    StegoStep y = rejsam_block_encode_step(prf, am, 1, {}, {}, ob, 3);
    ASSERT_EQ(x.document, y.document);
    ASSERT_EQ(x.draws, y.draws);
  }
  std::vector<Document> docs;
  for (std::uint64_t v = 0; v < 64; ++v) docs.push_back(setup.bits(8));
  Prf prf(setup.bits(128));
  EXPECT_EQ(rejsam_decode(prf, docs, 16), rejsam_block_decode(prf, docs, 16, 1));
}

TEST(RejSamBlockTest, MeanDrawsIsEightForThreeBitBlocks) {
  UniformChannel ch(16);
  RejSam steg(params(8, 1000, 64, 3));
  Rng rng(15);
  auto oracle = channel_oracle(ch, rng);
  std::size_t draws = 0, n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    BitString ak = steg.generate_key(rng), am = rng.bits(8);
    draws += steg.encode(ak, am, {}, {}, oracle, rng).draws;
  }
  EXPECT_NEAR(static_cast<double>(draws) / static_cast<double>(n), 8.0, 0.25);
}

TEST(RejSamBlockTest, RoundtripSixteenBitsInFourBitBlocks) {
  UniformChannel ch(8);
  RejSam steg(params(16, 4096, 0, 4));
  EXPECT_EQ(steg.output_length(), outl_for(16, default_beta(16), 4));
  Rng rng(16);
  auto oracle = channel_oracle(ch, rng);
  int ok = 0;
  for (int t = 0; t < 500; ++t) {
    BitString ak = steg.generate_key(rng), am = rng.bits(16);
    auto seq = encode_sequence(steg, ak, am, {}, steg.output_length(), oracle, rng);
    auto out = steg.decode(ak, seq.documents);
    ok += out.has_value() && *out == am;
  }
  EXPECT_GE(ok, 495);
}

// With 8-bit documents a fixed key leaves each (value, block) pair only about
// four good documents, so some block has none in roughly 7% of keys. Wider
// documents remove that effect.
TEST(RejSamBlockTest, RoundtripOnWideDocuments) {
  UniformChannel ch(16);
  RejSam steg(params(16, 4096, 0, 4));
  Rng rng(19);
  auto oracle = channel_oracle(ch, rng);
  int ok = 0;
  for (int t = 0; t < 500; ++t) {
    BitString ak = steg.generate_key(rng), am = rng.bits(16);
    auto seq = encode_sequence(steg, ak, am, {}, steg.output_length(), oracle, rng);
    auto out = steg.decode(ak, seq.documents);
    ok += out.has_value() && *out == am;
  }
  EXPECT_GE(ok, 495);
}

TEST(RejSamBlockTest, PaddingForNonDividingBlocks) {
  StegoParams p = params(64, 64, 0, 6);
  p.beta = 2.0;
  EXPECT_EQ(p.blocks(), 11u);
  EXPECT_EQ(p.padded_bits(), 66u);
  EXPECT_EQ(RejSam(p).output_length(), 49u);
  BitString am = BitString::from_uint(0xFFFF, 16);
  BitString padded = pad_message(am, 18);
  EXPECT_EQ(padded.slice(0, 16), am);
  EXPECT_EQ(padded.read_uint(16, 2), 0u);
}

TEST(RebootTest, ScheduleMustCoverOutl) {
  UniformChannel ch(8);
  RejSam steg(params(8, 64, 64));
  Rng rng(17);
  auto oracle = channel_oracle(ch, rng);
  BitString ak = steg.generate_key(rng), am = rng.bits(8);
  EXPECT_THROW(encode_rebooted(steg, ak, am, {{{}, 63}}, oracle, rng), ScheduleMismatch);
  std::vector<RebootSegment> one_each(64, RebootSegment{{}, 1});
  EXPECT_EQ(encode_rebooted(steg, ak, am, one_each, oracle, rng).size(), 64u);
}

TEST(RebootTest, RestartedEncodingsDecode) {
  UniformChannel ch(8);
  RejSam steg(params(8, std::size_t{1} << 20, 64));
  Rng rng(18);
  auto oracle = channel_oracle(ch, rng);
  for (std::size_t tau : {1u, 4u, 64u}) {
    std::vector<RebootSegment> sched;
    for (std::size_t i = 0; i < tau; ++i) sched.push_back({{rng.bits(8)}, 64 / tau});
    int ok = 0;
    for (int t = 0; t < 200; ++t) {
      BitString ak = steg.generate_key(rng), am = rng.bits(8);
      auto out = steg.decode(ak, encode_rebooted(steg, ak, am, sched, oracle, rng));
      ok += out.has_value() && *out == am;
    }
    EXPECT_GE(ok, 196) << "tau=" << tau;
  }
}

// Independent oracle: enumerate every function {docs} -> {0,1} and run the
// rejection process as an explicit geometric sum.
Distribution brute_force_ideal(const std::vector<double>& p, std::size_t s, std::size_t nbits) {
  std::size_t n = p.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t f = 0; f < (std::size_t{1} << n); ++f) {
    double g = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((f >> i) & 1U) g += p[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      bool good = (f >> i) & 1U;
      double pr = 0, miss = 1;
      for (std::size_t k = 0; k <= s; ++k) {
        if (good) pr += miss * p[i];
        if (k == s && !good) pr += miss * p[i];
        miss *= 1 - g;
      }
      out[i] += pr / static_cast<double>(std::size_t{1} << n);
    }
  }
  std::map<Document, double> t;
  for (std::size_t i = 0; i < n; ++i) t[BitString::from_uint(i, nbits)] = out[i];
  return Distribution::from_table(t);
}

TEST(IdealStepTest, DynamicProgramMatchesBruteForce) {
  std::vector<std::vector<double>> tables = {
      {0.25, 0.25, 0.25, 0.125, 0.125}, {0.5, 0.5}, {1.0}, {0.375, 0.0625, 0.0625, 0.125, 0.25, 0.125}};
  for (const auto& p : tables) {
    std::map<Document, double> t;
    for (std::size_t i = 0; i < p.size(); ++i) t[BitString::from_uint(i, 4)] = p[i];
    Distribution cover = Distribution::from_table(t);
    for (std::size_t s : {1u, 2u, 7u}) {
      Distribution dp = rejsam_ideal_step_distribution(cover, s, 4);
      Distribution bf = brute_force_ideal(p, s, 4);
      EXPECT_LT(total_variation(dp, bf), 1e-12) << "s=" << s;
      EXPECT_NEAR(dp.total_mass(), 1.0, 1e-12);
    }
  }
}

TEST(IdealStepTest, UniformCoverIsPreservedExactly) {
  Distribution cover = Distribution::uniform_bits(4);
  Distribution out = rejsam_ideal_step_distribution(cover, 5, 4);
  EXPECT_LT(total_variation(out, cover), 1e-12);
}

// Theorem-shape check: the exact distance to the cover law stays below
// ml * 2^-h + 2^-s on skewed toy channels.
TEST(IdealStepTest, DistanceBoundedByMinEntropyAndCutoff) {
  struct Case {
    std::size_t heavy, light, heavy_units, light_units, unit_bits;
  };
  // heavy * heavy_units + light * light_units = 2^unit_bits; h = unit_bits - log2(heavy_units).
  std::vector<Case> cases = {{2, 4, 4, 2, 4}, {8, 16, 8, 4, 7}, {64, 128, 4, 2, 9}};
  for (const Case& c : cases) {
    std::map<Document, double> t;
    double unit = std::ldexp(1.0, -static_cast<int>(c.unit_bits));
    for (std::size_t i = 0; i < c.heavy + c.light; ++i) {
      t[BitString::from_uint(i, 16)] = unit * static_cast<double>(i < c.heavy ? c.heavy_units : c.light_units);
    }
    Distribution cover = Distribution::from_table(t);
    ASSERT_NEAR(cover.total_mass(), 1.0, 1e-12);
    double h = cover.min_entropy();
    for (std::size_t s : {1u, 8u, 64u}) {
      double tv = total_variation(rejsam_ideal_step_distribution(cover, s, c.unit_bits), cover);
      for (std::size_t ml : {2u, 8u, 16u}) {
        EXPECT_LE(tv, static_cast<double>(ml) * std::exp2(-h) + std::exp2(-static_cast<double>(s)))
            << "h=" << h << " s=" << s;
      }
    }
  }
}

TEST(IdealStepTest, BlockAcceptanceProbability) {
  Distribution cover = Distribution::uniform_bits(3);
  for (std::size_t bb : {1u, 2u, 3u}) {
    Distribution out = rejsam_ideal_step_distribution(cover, 4, 3, bb);
    EXPECT_LT(total_variation(out, cover), 1e-12);
  }
}

TEST(StegoParamsTest, JsonAndValidation) {
  StegoParams p = params(16, 64);
  json j = p.to_json();
  EXPECT_EQ(j["outl"], 256);
  EXPECT_EQ(j["kappa"], 128);
  EXPECT_NEAR(j["beta"].get<double>(), 16 - std::log(16.0), 1e-12);
  EXPECT_EQ(RejSam(p).parameters()["kind"], "rejsam");
  EXPECT_THROW(RejSam(params(8, 0)), InvalidParameter);
  EXPECT_THROW(RejSam(params(8, 64, 64, 16)), InvalidParameter);
}

}  // namespace
}  // namespace subvertlab
