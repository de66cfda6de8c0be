#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "hoprank/error.hpp"
#include "hoprank/khop.hpp"
#include "hoprank/simulator.hpp"
#include "oracles.hpp"

using namespace hoprank;

namespace {

std::vector<std::uint32_t> histogram(const SourceProfile& p) { return p.hop_histogram; }

}  // namespace

TEST(BfsProfile, ToyTreeFromD) {
  const Graph g = fixtures::toy_tree();
  const SourceProfile p = bfs_profile(g, *g.find("d"), 4);
  EXPECT_EQ(histogram(p), (std::vector<std::uint32_t>{1, 1, 2, 1, 2}));
  EXPECT_EQ(p.dist[*g.find("d")], 0);
  EXPECT_EQ(p.dist[*g.find("e")], 2);
  EXPECT_EQ(p.dist[*g.find("g")], 4);
}

TEST(BfsProfile, PathFromEnd) {
  const Graph g = fixtures::from_text("x y\ny z\n");
  const SourceProfile p = bfs_profile(g, 0, 2);
  EXPECT_EQ(p.dist, (std::vector<HopCount>{0, 1, 2}));
  EXPECT_EQ(histogram(p), (std::vector<std::uint32_t>{1, 1, 1}));
}

TEST(BfsProfile, HistogramPartitionsNodesAndDistancesAreSymmetric) {
  SynthSpec spec;
  spec.kind = GraphKind::ConnectedRandom;
  spec.nodes = 150;
  spec.seed = 5;
  const Graph g = synth_graph(spec);
  const HopCount d = exact_diameter(g);
  std::vector<SourceProfile> profiles;
  for (NodeId s = 0; s < g.node_count(); ++s) profiles.push_back(bfs_profile(g, s, d));
  for (const auto& p : profiles) {
    std::uint32_t total = 0;
    for (auto x : p.hop_histogram) total += x;
    EXPECT_EQ(total, g.node_count());
    EXPECT_EQ(p.hop_histogram[0], 1u);
  }
  for (NodeId i = 0; i < g.node_count(); i += 7) {
    for (NodeId j = 0; j < g.node_count(); j += 5) EXPECT_EQ(profiles[i].dist[j], profiles[j].dist[i]);
  }
}

TEST(BfsProfile, GravNormalizerMatchesDirectSum) {
  const Graph g = fixtures::toy_tree();
  const SourceProfile p = bfs_profile(g, *g.find("d"), 4);
  double sum = 0;
  for (NodeId j = 0; j < g.node_count(); ++j) sum += static_cast<double>(g.degree(j)) / grav_distance_sq(p.dist[j], 4);
  EXPECT_NEAR(p.grav_normalizer, sum, 1e-15);
}

TEST(BfsProfile, DiameterTooSmallIsAnError) {
  EXPECT_THROW(bfs_profile(fixtures::path(5), 0, 2), DataError);
}

TEST(BfsProfile, InvalidSource) {
  EXPECT_THROW(bfs_profile(fixtures::toy_tree(), 9, 4), std::out_of_range);
}

TEST(BfsProfile, UnreachableNodesAreMarked) {
  const Graph g = fixtures::from_text("a b\nc d\n");
  const SourceProfile p = bfs_profile(g, 0, 1);
  EXPECT_EQ(p.dist[2], kUnreachable);
  EXPECT_EQ(p.hop_histogram, (std::vector<std::uint32_t>{1, 1}));
}

TEST(GravDistance, SpecialCases) {
  EXPECT_EQ(grav_distance_sq(3, 4), 9.0);
  EXPECT_EQ(grav_distance_sq(0, 4), 36.0);
  EXPECT_EQ(grav_distance_sq(kUnreachable, 4), 25.0);
}

TEST(MkRowMass, ToyExamples) {
  const Graph g = fixtures::toy_tree();
  const SourceProfile p = bfs_profile(g, *g.find("d"), 4);
  EXPECT_DOUBLE_EQ(mk_row_mass(p, 2, *g.find("e")), 0.5);
  EXPECT_EQ(mk_row_mass(p, 2, *g.find("b")), 0.0);
  EXPECT_DOUBLE_EQ(mk_row_mass(p, 4, *g.find("g")), 0.5);
}

TEST(MkRowMass, OutOfRangeHop) {
  const Graph g = fixtures::toy_tree();
  const SourceProfile p = bfs_profile(g, 0, 4);
  EXPECT_THROW(mk_row_mass(p, 0, 1), std::out_of_range);
  EXPECT_THROW(mk_row_mass(p, 5, 1), std::out_of_range);
}

TEST(MkRowMass, RowsAreStochastic) {
  SynthSpec spec;
  spec.kind = GraphKind::RandomTree;
  spec.nodes = 80;
  spec.seed = 6;
  const Graph g = synth_graph(spec);
  const HopCount d = exact_diameter(g);
  for (NodeId s = 0; s < g.node_count(); s += 3) {
    const SourceProfile p = bfs_profile(g, s, d);
    for (HopCount k = 1; k <= d; ++k) {
      if (p.neighborhood_size(k) == 0) continue;
      double sum = 0;
      for (NodeId j = 0; j < g.node_count(); ++j) sum += mk_row_mass(p, k, j);
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(ProfileSources, AllToyNodes) {
  const Graph g = fixtures::toy_tree();
  const std::vector<NodeId> all{0, 1, 2, 3, 4, 5, 6};
  const ProfileCache cache = profile_sources(g, all, 4);
  EXPECT_EQ(cache.size(), 7u);
  for (NodeId s : all) {
    std::uint32_t total = 0;
    for (auto x : cache.find(s)->hop_histogram) total += x;
    EXPECT_EQ(total, 7u);
  }
}

TEST(ProfileSources, EmptySet) {
  const ProfileCache cache = profile_sources(fixtures::toy_tree(), {}, 4);
  EXPECT_TRUE(cache.empty());
}

TEST(ProfileSources, DuplicatesCollapse) {
  const std::vector<NodeId> s{3, 3, 1, 3};
  EXPECT_EQ(profile_sources(fixtures::toy_tree(), s, 4).size(), 2u);
}

TEST(ProfileSources, RandomTreeMatchesNaiveBfs) {
  SynthSpec spec;
  spec.kind = GraphKind::RandomTree;
  spec.nodes = 1000;
  spec.seed = 21;
  const Graph g = synth_graph(spec);
  const HopCount d = exact_diameter(g);
  std::mt19937_64 rng(4);
  std::vector<NodeId> sources;
  while (sources.size() < 200) {
    const auto s = static_cast<NodeId>(rng() % 1000);
    if (std::find(sources.begin(), sources.end(), s) == sources.end()) sources.push_back(s);
  }
  const ProfileCache cache = profile_sources(g, sources, d);
  ASSERT_EQ(cache.size(), 200u);
  const auto a = oracle::adjacency(g);
  for (NodeId s : sources) {
    const auto want = oracle::bfs(a, static_cast<int>(s));
    const SourceProfile* p = cache.find(s);
    ASSERT_NE(p, nullptr);
    for (std::size_t j = 0; j < want.size(); ++j) ASSERT_EQ(static_cast<int>(p->dist[j]), want[j]);
  }
}

TEST(ProfileCache, DeterministicAndIdenticalToFreshProfiles) {
  SynthSpec spec;
  spec.kind = GraphKind::ConnectedRandom;
  spec.nodes = 300;
  spec.seed = 8;
  const Graph g = synth_graph(spec);
  const HopCount d = exact_diameter(g);
  std::vector<NodeId> sources;
  for (NodeId s = 0; s < 300; s += 2) sources.push_back(s);
  const ProfileCache a = profile_sources(g, sources, d);
  const ProfileCache b = profile_sources(g, sources, d);
  for (NodeId s : sources) {
    EXPECT_EQ(a.find(s)->dist, b.find(s)->dist);
    EXPECT_EQ(a.find(s)->grav_normalizer, b.find(s)->grav_normalizer);
    const SourceProfile fresh = bfs_profile(g, s, d);
    EXPECT_EQ(a.find(s)->dist, fresh.dist);
    EXPECT_EQ(a.find(s)->hop_histogram, fresh.hop_histogram);
    EXPECT_EQ(a.find(s)->grav_normalizer, fresh.grav_normalizer);
  }
}

TEST(ProfileCache, BudgetLimitsStorageButNotValues) {
  const Graph g = fixtures::toy_tree();
  const std::vector<NodeId> all{0, 1, 2, 3, 4, 5, 6};
  const std::size_t one = ProfileCache::profile_bytes(7, 4);
  const ProfileCache cache = profile_sources(g, all, 4, 3 * one);
  EXPECT_EQ(cache.size(), 3u);
  EXPECT_LE(cache.used_bytes(), 3 * one);
  for (NodeId s : all) EXPECT_EQ(cache.get(s)->dist, bfs_profile(g, s, 4).dist);

  const ProfileCache none = profile_sources(g, all, 4, 0);
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(none.get(5)->hop_histogram, bfs_profile(g, 5, 4).hop_histogram);
}

TEST(ProfileCache, SaveLoadRoundTrip) {
  const Graph g = fixtures::toy_tree();
  const std::vector<NodeId> some{0, 3, 6};
  const ProfileCache cache = profile_sources(g, some, 4);
  std::stringstream buf;
  cache.save(buf);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 4), "HRPC");
  std::istringstream in(bytes);
  const ProfileCache back = ProfileCache::load(in, g, 4);
  EXPECT_EQ(back.sources(), cache.sources());
  for (NodeId s : some) {
    EXPECT_EQ(back.find(s)->dist, cache.find(s)->dist);
    EXPECT_EQ(back.find(s)->hop_histogram, cache.find(s)->hop_histogram);
    EXPECT_EQ(back.find(s)->grav_normalizer, cache.find(s)->grav_normalizer);
  }
}

TEST(ProfileCache, HashMismatchInvalidates) {
  const Graph g = fixtures::toy_tree();
  const std::vector<NodeId> some{0};
  std::stringstream buf;
  profile_sources(g, some, 4).save(buf);
  const Graph other = fixtures::from_text("a b\na c\nb d\nb e\nc f\nf g\n");
  std::istringstream in(buf.str());
  EXPECT_TRUE(ProfileCache::load(in, other, exact_diameter(other)).empty());
}

TEST(ProfileCache, CorruptFileIsAnError) {
  const Graph g = fixtures::toy_tree();
  const std::vector<NodeId> some{0, 1};
  std::stringstream buf;
  profile_sources(g, some, 4).save(buf);
  std::string bytes = buf.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(ProfileCache::load(truncated, g, 4), DataError);
  std::istringstream garbage("NOPE and more bytes here");
  EXPECT_THROW(ProfileCache::load(garbage, g, 4), DataError);
}
