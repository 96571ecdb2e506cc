#include <doctest/doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mei/derive.hpp"
#include "mei/errors.hpp"

using namespace mei;

TEST_CASE("rank_clusters orders by count, then first mention, then index") {
  auto doc = meitest::annotated(
      "r", "a b c d e f g h",
      {{{5, 5}, {6, 6}}, {{0, 0}, {1, 1}, {2, 2}}, {{0, 1}, {3, 3}}, {{7, 7}}});
  auto ranked = rank_clusters(doc, 2);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].cluster_index == 1);  // count 3
  CHECK(ranked[1].cluster_index == 2);  // count 2, first mention (0,1)
  CHECK(ranked[2].cluster_index == 0);  // count 2, first mention (5,5)
  CHECK(ranked[0].mention_count == 3);

  CHECK(rank_clusters(doc, 4).empty());
}

TEST_CASE("designative_phrase prefers frequent non-pronoun forms") {
  SUBCASE("pronouns are skipped even when more frequent") {
    auto doc = meitest::annotated("p", "he saw Aladdin and he waved he",
                                  {{{0, 0}, {2, 2}, {4, 4}, {6, 6}}});
    CHECK(designative_phrase(doc, doc.clusters[0]) == "Aladdin");
  }
  SUBCASE("case-insensitive grouping with the most frequent casing") {
    auto doc = meitest::annotated(
        "p", "the king spoke The King waved the king slept The Prince",
        {{{0, 1}, {3, 4}, {6, 7}, {9, 10}}});
    CHECK(designative_phrase(doc, doc.clusters[0]) == "the king");
  }
  SUBCASE("earliest occurrence breaks frequency ties between casings") {
    auto doc = meitest::annotated("p", "The King met the king", {{{0, 1}, {3, 4}}});
    CHECK(designative_phrase(doc, doc.clusters[0]) == "The King");
  }
  SUBCASE("all-pronoun clusters fall back to the same rule over pronouns") {
    auto doc = meitest::annotated("p", "she met her and she left", {{{0, 0}, {2, 2}, {4, 4}}});
    CHECK(designative_phrase(doc, doc.clusters[0]) == "she");
  }
}

TEST_CASE("is_pronoun covers the lexicon case-insensitively") {
  for (const char* w : {"he", "Her", "THEY", "thou", "thyself", "ones", "itself", "this"}) {
    CHECK(is_pronoun(w));
  }
  for (const char* w : {"Aladdin", "mother", "kings", ""}) {
    CHECK_FALSE(is_pronoun(w));
  }
}

TEST_CASE("select_major_entities derives the tracked view") {
  auto doc = meitest::aladdin_annotated();
  auto mei_doc = select_major_entities(doc, 5, 2);

  CHECK(mei_doc.doc_id == "aladdin_mini");
  CHECK(mei_doc.tokens == doc.tokens);
  REQUIRE(mei_doc.entities.size() == 2);

  CHECK(mei_doc.entities[0].entity_id == 1);
  CHECK(mei_doc.entities[0].phrase == "Aladdin");
  CHECK(mei_doc.entities[0].phrase_span == Span{0, 0});
  CHECK(mei_doc.entities[0].mention_count == 4);

  CHECK(mei_doc.entities[1].entity_id == 2);
  CHECK(mei_doc.entities[1].phrase == "his mother");
  CHECK(mei_doc.entities[1].phrase_span == Span{3, 4});
  CHECK(mei_doc.entities[1].mention_count == 2);

  CHECK(mei_doc.gold == std::vector<GoldMention>{{{0, 0}, 1},
                                                 {{3, 3}, 1},
                                                 {{3, 4}, 2},
                                                 {{8, 8}, 1},
                                                 {{8, 9}, 2},
                                                 {{11, 11}, 1}});
  CHECK(mei_doc.other_mentions == std::vector<Span>{{6, 6}});
}

TEST_CASE("k caps the entity count at the top of the ranking") {
  auto doc = meitest::aladdin_annotated();
  auto top1 = select_major_entities(doc, 1, 2);
  REQUIRE(top1.entities.size() == 1);
  CHECK(top1.entities[0].phrase == "Aladdin");
  CHECK(top1.other_mentions == std::vector<Span>{{3, 4}, {6, 6}, {8, 9}});
}

TEST_CASE("no qualifying cluster raises") {
  auto doc = meitest::aladdin_annotated();
  CHECK_THROWS_AS(select_major_entities(doc, 5, 10), NoQualifyingEntities);
}

TEST_CASE("phrase overrides recompute the occurrence span") {
  auto doc = meitest::aladdin();
  apply_phrase_override(doc, 2, "HIS MOTHER");
  CHECK(doc.entities[1].phrase == "HIS MOTHER");
  CHECK(doc.entities[1].phrase_span == Span{3, 4});

  apply_phrase_override(doc, 1, "the lamp");
  CHECK_FALSE(doc.entities[0].phrase_span.has_value());

  CHECK_THROWS_AS(apply_phrase_override(doc, 9, "x"), UnknownEntity);
  CHECK_THROWS_AS(apply_phrase_override(doc, 1, ""), ConfigError);
}

TEST_CASE("derived mentions partition the cluster mentions") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> cluster_count(1, 5);
  std::uniform_int_distribution<int> mention_count(1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 20;
    std::vector<Span> pool;
    for (int s = 0; s < n; ++s) {
      for (int len = 0; len < 3 && s + len < n; ++len) pool.push_back(Span{s, s + len});
    }
    std::shuffle(pool.begin(), pool.end(), rng);

    std::vector<std::vector<Span>> clusters(cluster_count(rng));
    std::size_t used = 0;
    for (auto& c : clusters) {
      int m = mention_count(rng);
      for (int i = 0; i < m && used < pool.size(); ++i) c.push_back(pool[used++]);
      if (c.empty()) c.push_back(pool[used++]);
    }
    std::string text;
    for (int i = 0; i < n; ++i) text += (i ? " w" : "w") + std::to_string(i % 5);
    auto doc = meitest::annotated("t" + std::to_string(trial), text, clusters);

    MeiDocument derived;
    try {
      derived = select_major_entities(doc, 3, 2);
    } catch (const NoQualifyingEntities&) {
      continue;
    }

    std::set<Span> all;
    for (const auto& c : doc.clusters) all.insert(c.mentions.begin(), c.mentions.end());
    std::set<Span> covered;
    for (const auto& g : derived.gold) CHECK(covered.insert(g.span).second);
    for (const auto& s : derived.other_mentions) CHECK(covered.insert(s).second);
    CHECK(covered == all);
  }
}

TEST_CASE("growing k keeps the existing entities and their ids") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    auto base = meitest::random_mei_document(rng);  // only for tokens
    std::vector<std::vector<Span>> clusters;
    std::vector<Span> pool;
    int n = static_cast<int>(base.tokens.size());
    for (int s = 0; s < n; ++s) pool.push_back(Span{s, s});
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t used = 0;
    int c = std::uniform_int_distribution<int>(2, 5)(rng);
    for (int i = 0; i < c && used + 2 < pool.size(); ++i) {
      std::vector<Span> mentions;
      int m = std::uniform_int_distribution<int>(2, 5)(rng);
      for (int j = 0; j < m && used < pool.size(); ++j) mentions.push_back(pool[used++]);
      clusters.push_back(mentions);
    }
    std::string text;
    for (int i = 0; i < n; ++i) text += (i ? " w" : "w") + std::to_string(i % 4);
    auto doc = meitest::annotated("k" + std::to_string(trial), text, clusters);

    for (int k = 1; k + 1 <= static_cast<int>(clusters.size()); ++k) {
      MeiDocument small, big;
      try {
        small = select_major_entities(doc, k, 2);
        big = select_major_entities(doc, k + 1, 2);
      } catch (const NoQualifyingEntities&) {
        break;
      }
      REQUIRE(small.entities.size() <= big.entities.size());
      for (std::size_t i = 0; i < small.entities.size(); ++i) {
        CHECK(small.entities[i] == big.entities[i]);
      }
      for (const auto& g : small.gold) {
        CHECK(std::find(big.gold.begin(), big.gold.end(), g) != big.gold.end());
      }
    }
  }
}

TEST_CASE("corpus statistics on a hand-checked corpus") {
  auto doc = meitest::aladdin_annotated();
  auto stats = corpus_stats(std::vector<AnnotatedDocument>{doc});

  CHECK(stats.document_count == 1);
  CHECK(stats.cluster_count == 3);
  CHECK(stats.mention_count == 7);
  CHECK(stats.nonsingleton_mention_count == 6);
  CHECK(stats.avg_cluster_size == doctest::Approx(7.0 / 3.0));

  // Mention starts: 0 3 3 6 8 8 11. Per non-first mention, starts strictly
  // between it and its predecessor: c0 3<-0: none; c0 8<-3: {6}; c0 11<-8:
  // none (the start-8 twin is not strictly after 8); c1 8<-3: {6}.
  CHECK(stats.mean_antecedent_distance == doctest::Approx(0.5));
}

TEST_CASE("tracked-entity statistics use gold mentions only") {
  auto doc = meitest::aladdin();
  auto stats = corpus_stats(std::vector<MeiDocument>{doc});
  CHECK(stats.document_count == 1);
  CHECK(stats.cluster_count == 2);
  CHECK(stats.mention_count == 6);
  CHECK(stats.nonsingleton_mention_count == 6);
  CHECK(stats.avg_cluster_size == doctest::Approx(3.0));
  // Gold starts 0 3 3 8 8 11: no start falls strictly inside any gap, and
  // the non-gold mention at 6 no longer counts.
  CHECK(stats.mean_antecedent_distance == doctest::Approx(0.0));
}

TEST_CASE("stats formatting is a fixed TSV block") {
  DatasetStats stats;
  stats.document_count = 2;
  stats.cluster_count = 4;
  stats.mention_count = 10;
  stats.nonsingleton_mention_count = 8;
  stats.avg_cluster_size = 2.5;
  stats.mean_antecedent_distance = 1.25;
  std::string block = format_stats("corpus", stats);
  CHECK(block ==
        "corpus\n"
        "documents\t2\n"
        "clusters\t4\n"
        "mentions\t10\n"
        "nonsingleton_mentions\t8\n"
        "avg_cluster_size\t2.50\n"
        "mean_antecedent_distance\t1.25\n");
}
