#include "hvaclab/demostore.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "hvaclab/rng.hpp"
#include "hvaclab/translate.hpp"
#include "test_util.hpp"

using namespace hvaclab;
using hvaclab::testutil::golden_match;
using hvaclab::testutil::make_fixture_dataset;

TEST(Embed, DeterministicUnitNorm) {
  const std::string text = "Room 1 temperature: 21 degrees Celsius.";
  const Embedding a = embed(text);
  const Embedding b = embed(text);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NEAR(a.norm(), 1.0, 1e-9);
}

TEST(Embed, EmptyTextRejected) {
  EXPECT_THROW(embed(""), ValueError);
  EXPECT_THROW(embed("   ...!!!"), ValueError);
}

TEST(Embed, AppendedTokenLowersCosine) {
  // Hashing must move at least one bucket for an extra token; checked over a
  // corpus rather than trusted on a single string.
  const DemoDataset fixture = make_fixture_dataset(100);
  for (const DemoRecord& r : fixture.records) {
    const Embedding base = embed(r.state_text);
    const Embedding extended = embed(r.state_text + " unrelatedtoken");
    EXPECT_LT(base.dot(extended), 1.0 - 1e-12);
  }
}

TEST(Embed, CaseAndPunctuationInsensitiveTokens) {
  EXPECT_EQ(embed("Room 21 Target").values, embed("room, 21: target!").values);
}

TEST(Knn, SelfRetrieval) {
  const DemoDataset ds = make_fixture_dataset(20);
  const std::vector<DemoRecord> hit = knn(ds.records[7].key, ds, 1);
  ASSERT_EQ(hit.size(), 1u);
  EXPECT_EQ(hit[0].state_text, ds.records[7].state_text);
}

TEST(Knn, ZeroKAndOversizedK) {
  const DemoDataset ds = make_fixture_dataset(5);
  EXPECT_TRUE(knn(ds.records[0].key, ds, 0).empty());
  EXPECT_EQ(knn(ds.records[0].key, ds, 50).size(), 5u);
  EXPECT_TRUE(knn(ds.records[0].key, DemoDataset{}, 3).empty());
}

// Independent O(n log n) oracle: sort explicitly by (similarity desc, index).
TEST(Knn, MatchesBruteForceOn50Records) {
  const DemoDataset ds = make_fixture_dataset(50);
  const Embedding query = embed("Room 1 temperature: 20 degrees Celsius. target 22");
  for (std::size_t k : {1u, 3u, 8u, 50u}) {
    std::vector<std::size_t> idx(ds.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> sim(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) sim[i] = query.dot(ds.records[i].key);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (sim[a] != sim[b]) return sim[a] > sim[b];
      return a < b;
    });

    const std::vector<DemoRecord> got = knn(query, ds, k);
    ASSERT_EQ(got.size(), std::min(k, ds.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].state_text, ds.records[idx[i]].state_text) << "k=" << k << " i=" << i;
    }
    // similarities non-increasing
    for (std::size_t i = 1; i < got.size(); ++i) {
      EXPECT_GE(query.dot(got[i - 1].key), query.dot(got[i].key));
    }
  }
}

TEST(Kmeans, EveryRecordItsOwnRepresentativeWhenKEqualsN) {
  const DemoDataset ds = make_fixture_dataset(12);
  const std::vector<DemoRecord> reps = kmeans_representatives(ds, ds.size(), 3);
  ASSERT_EQ(reps.size(), ds.size());
  std::multiset<std::string> expected, got;
  for (const DemoRecord& r : ds.records) expected.insert(r.state_text);
  for (const DemoRecord& r : reps) got.insert(r.state_text);
  EXPECT_EQ(expected, got);
}

// k = 1: brute-force record closest to the global centroid.
TEST(Kmeans, SingleClusterPicksNearestToMean) {
  const DemoDataset ds = make_fixture_dataset(30);
  std::array<double, kEmbeddingDim> mean{};
  for (const DemoRecord& r : ds.records) {
    for (std::size_t d = 0; d < kEmbeddingDim; ++d) mean[d] += r.key.values[d];
  }
  for (double& v : mean) v /= static_cast<double>(ds.size());
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = 0; k < kEmbeddingDim; ++k) {
      const double diff = ds.records[i].key.values[k] - mean[k];
      d += diff * diff;
    }
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }

  const std::vector<DemoRecord> reps = kmeans_representatives(ds, 1, 5);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].state_text, ds.records[best].state_text);
}

TEST(Kmeans, DeterministicInSeed) {
  const DemoDataset ds = make_fixture_dataset(40);
  const auto a = kmeans_representatives(ds, 4, 11);
  const auto b = kmeans_representatives(ds, 4, 11);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].state_text, b[i].state_text);
}

TEST(Kmeans, BadKRejected) {
  const DemoDataset ds = make_fixture_dataset(5);
  EXPECT_THROW(kmeans_representatives(ds, 6, 1), ConfigError);
  EXPECT_THROW(kmeans_representatives(ds, 0, 1), ConfigError);
}

TEST(Buffer, FifoEvictionAndOrder) {
  OnlineBuffer buf(3);
  const DemoDataset ds = make_fixture_dataset(5);
  for (const DemoRecord& r : ds.records) buf.push(r);
  EXPECT_EQ(buf.size(), 3u);
  // first two pushed are gone, order is insertion order
  EXPECT_EQ(buf[0].state_text, ds.records[2].state_text);
  EXPECT_EQ(buf[2].state_text, ds.records[4].state_text);

  const std::vector<DemoRecord> recent = buf.recent(2);
  ASSERT_EQ(recent.size(), 2u);
  EXPECT_EQ(recent[0].state_text, ds.records[3].state_text);  // oldest of selected first
  EXPECT_EQ(recent[1].state_text, ds.records[4].state_text);
}

TEST(SelectDemos, UnderfullBufferYieldsWhatExists) {
  const DemoDataset ds = make_fixture_dataset(10);
  OnlineBuffer buf(64);
  buf.push(ds.records[0]);
  buf.push(ds.records[1]);
  const auto out = select_demos(ds.records[0].key, buf, DemoDataset{}, {4, 0, 0}, 1);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].kind, DemoKind::Historical);
  EXPECT_EQ(out[0].record.state_text, ds.records[0].state_text);
  EXPECT_EQ(out[1].record.state_text, ds.records[1].state_text);
}

TEST(SelectDemos, PureExpertMixDelegatesToKnn) {
  const DemoDataset ds = make_fixture_dataset(25);
  OnlineBuffer buf(64);
  const Embedding query = ds.records[3].key;
  const auto out = select_demos(query, buf, ds, {0, 0, 4}, 1);
  const auto direct = knn(query, ds, 4);
  ASSERT_EQ(out.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(out[i].kind, DemoKind::Expert);
    EXPECT_EQ(out[i].record.state_text, direct[i].state_text);
  }
}

TEST(SelectDemos, ReprWithEmptyExpertRejected) {
  OnlineBuffer buf(64);
  EXPECT_THROW(select_demos(embed("query text"), buf, DemoDataset{}, {0, 2, 0}, 1),
               ConfigError);
}

TEST(SelectDemos, CacheReturnsSameRepresentatives) {
  const DemoDataset ds = make_fixture_dataset(30);
  OnlineBuffer buf(64);
  RepresentativeCache cache;
  const auto a = select_demos(ds.records[0].key, buf, ds, {0, 2, 0}, 7, &cache);
  const auto b = select_demos(ds.records[9].key, buf, ds, {0, 2, 0}, 7, &cache);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(b.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a[i].record.state_text, b[i].record.state_text);
  }
}

// Frozen H2 R2 E4 ordering on the 50-record fixture.
TEST(SelectDemos, GoldenOrdering) {
  const DemoDataset ds = make_fixture_dataset(50);
  OnlineBuffer buf(64);
  buf.push(ds.records[10]);
  buf.push(ds.records[20]);
  buf.push(ds.records[30]);

  const auto out = select_demos(ds.records[5].key, buf, ds, {2, 2, 4}, 42);
  std::ostringstream serialized;
  for (const TaggedDemo& d : out) {
    const char* kind = d.kind == DemoKind::Historical     ? "H"
                       : d.kind == DemoKind::Representative ? "R"
                                                            : "E";
    serialized << kind << " " << to_string(d.record.building) << " "
               << to_string(d.record.weather) << " " << d.record.action_text;
  }
  EXPECT_TRUE(golden_match("select_demos_h2r2e4.txt", serialized.str()))
      << "selection order diverged from tests/golden/select_demos_h2r2e4.txt";

  // H before R before E, counts as requested.
  ASSERT_EQ(out.size(), 8u);
  EXPECT_EQ(out[0].kind, DemoKind::Historical);
  EXPECT_EQ(out[1].kind, DemoKind::Historical);
  EXPECT_EQ(out[2].kind, DemoKind::Representative);
  EXPECT_EQ(out[3].kind, DemoKind::Representative);
  for (std::size_t i = 4; i < 8; ++i) EXPECT_EQ(out[i].kind, DemoKind::Expert);
  // the two historical picks are the most recent, oldest of those first
  EXPECT_EQ(out[0].record.state_text, ds.records[20].state_text);
  EXPECT_EQ(out[1].record.state_text, ds.records[30].state_text);
}

TEST(RandomDemos, SeededAndWithoutReplacement) {
  const DemoDataset ds = make_fixture_dataset(10);
  std::mt19937_64 g1(5), g2(5);
  const auto a = random_demos(ds, 4, g1);
  const auto b = random_demos(ds, 4, g2);
  ASSERT_EQ(a.size(), 4u);
  std::set<std::string> unique;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a[i].record.state_text, b[i].record.state_text);
    unique.insert(a[i].record.state_text);
  }
  EXPECT_EQ(unique.size(), 4u);

  std::mt19937_64 g3(1);
  EXPECT_TRUE(random_demos(ds, 0, g3).empty());
  EXPECT_THROW(random_demos(ds, 11, g3), ConfigError);
}

TEST(RandomDemos, UniformFrequencies) {
  const DemoDataset ds = make_fixture_dataset(10);
  std::map<std::string, int> counts;
  std::mt19937_64 g(123);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    counts[random_demos(ds, 1, g)[0].record.state_text] += 1;
  }
  for (const auto& [text, count] : counts) {
    const double freq = static_cast<double>(count) / draws;
    EXPECT_GE(freq, 0.08);
    EXPECT_LE(freq, 0.12);
  }
}

TEST(Dataset, JsonlRoundTripRegeneratesTextsAndKeys) {
  const DemoDataset ds = make_fixture_dataset(8);
  const std::string path =
      (std::filesystem::temp_directory_path() / "hvaclab_ds_test.jsonl").string();
  save_dataset(ds, path);
  const DemoDataset loaded = load_dataset(path);
  ASSERT_EQ(loaded.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(loaded.records[i].state_text, ds.records[i].state_text);
    EXPECT_EQ(loaded.records[i].action_text, ds.records[i].action_text);
    EXPECT_EQ(loaded.records[i].feedback_text, ds.records[i].feedback_text);
    EXPECT_EQ(loaded.records[i].key.values, ds.records[i].key.values);
    EXPECT_EQ(loaded.records[i].state, ds.records[i].state);
    EXPECT_DOUBLE_EQ(loaded.records[i].reward, ds.records[i].reward);
  }
  std::filesystem::remove(path);
}

TEST(Dataset, SaveIsByteDeterministic) {
  const DemoDataset ds = make_fixture_dataset(8);
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string p1 = (tmp / "hvaclab_ds_a.jsonl").string();
  const std::string p2 = (tmp / "hvaclab_ds_b.jsonl").string();
  save_dataset(ds, p1);
  save_dataset(ds, p2);
  EXPECT_EQ(hvaclab::testutil::read_file(p1), hvaclab::testutil::read_file(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST(Dataset, FilterMatchesPredicateExactly) {
  const DemoDataset ds = make_fixture_dataset(60);
  const auto keep = [](Building b, Weather w) {
    return b != Building::OfficeMedium && w != Weather::CoolDry;
  };
  const DemoDataset out = filter_dataset(ds, keep);
  std::size_t expected = 0;
  for (const DemoRecord& r : ds.records) {
    if (keep(r.building, r.weather)) ++expected;
  }
  EXPECT_EQ(out.size(), expected);
  for (const DemoRecord& r : out.records) EXPECT_TRUE(keep(r.building, r.weather));
}

// Clusters partition the dataset: no record lost, none duplicated.
TEST(Kmeans, ClustersPartitionDataset) {
  const DemoDataset ds = make_fixture_dataset(35);
  for (std::size_t k : {2u, 5u, 9u}) {
    const std::vector<DemoRecord> reps = kmeans_representatives(ds, k, 17);
    EXPECT_EQ(reps.size(), k);
    std::set<std::string> rep_texts;
    for (const DemoRecord& r : reps) rep_texts.insert(r.state_text + r.action_text);
    EXPECT_EQ(rep_texts.size(), k);  // distinct representatives
    for (const DemoRecord& r : reps) {
      const bool in_dataset =
          std::any_of(ds.records.begin(), ds.records.end(), [&](const DemoRecord& o) {
            return o.state_text == r.state_text && o.action_text == r.action_text;
          });
      EXPECT_TRUE(in_dataset);
    }
  }
}
