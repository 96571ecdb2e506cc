#include <doctest/doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mei/errors.hpp"
#include "mei/metrics.hpp"

using namespace mei;

namespace {

struct OracleScore {
  long tp = 0, fp = 0, fn = 0;
  double f1 = 0.0;
};

OracleScore oracle_entity(const MeiDocument& gold, const PredictionSet& pred, int entity_id) {
  std::set<Span> gold_spans;
  for (const auto& g : gold.gold) {
    if (g.entity_id == entity_id) gold_spans.insert(g.span);
  }
  std::set<Span> pred_spans;
  for (const auto& a : pred.assignments) {
    if (a.label && *a.label == entity_id) pred_spans.insert(a.span);
  }
  OracleScore s;
  for (const auto& span : pred_spans) {
    if (gold_spans.count(span)) {
      ++s.tp;
    } else {
      ++s.fp;
    }
  }
  s.fn = static_cast<long>(gold_spans.size()) - s.tp;
  double p = (s.tp + s.fp) ? double(s.tp) / double(s.tp + s.fp) : 0.0;
  double r = (s.tp + s.fn) ? double(s.tp) / double(s.tp + s.fn) : 0.0;
  s.f1 = (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
  return s;
}

PredictionSet random_predictions(const MeiDocument& doc, std::mt19937& rng) {
  PredictionSet preds;
  preds.doc_id = doc.doc_id;
  std::vector<Span> spans;
  for (const auto& g : doc.gold) spans.push_back(g.span);
  spans.insert(spans.end(), doc.other_mentions.begin(), doc.other_mentions.end());
  std::shuffle(spans.begin(), spans.end(), rng);
  std::uniform_int_distribution<int> label(0, static_cast<int>(doc.entities.size()));
  std::uniform_int_distribution<int> keep(0, 3);
  for (const auto& span : spans) {
    if (keep(rng) == 0) continue;
    int l = label(rng);
    preds.assignments.push_back(Assignment{span, l == 0 ? std::nullopt : std::optional<int>(l)});
  }
  canonicalize_assignments(preds);
  return preds;
}

}  // namespace

TEST_CASE("entity scores on a hand-checked document") {
  auto doc = meitest::aladdin();
  PredictionSet preds;
  preds.doc_id = doc.doc_id;
  preds.assignments = {
      {{0, 0}, 1},             // tp for 1
      {{3, 3}, 2},             // fp for 2 (gold says 1), fn for 1
      {{3, 4}, 2},             // tp for 2
      {{6, 6}, std::nullopt},  // ignored
      {{8, 9}, std::nullopt},  // discarded gold mention: fn for 2
      {{11, 11}, 1},           // tp for 1
  };

  auto scores = score_document(doc, preds);
  REQUIRE(scores.entities.size() == 2);

  const auto& e1 = scores.entities[0];
  CHECK(e1.entity_id == 1);
  CHECK(e1.tp == 2);
  CHECK(e1.fp == 0);
  CHECK(e1.fn == 2);
  CHECK(e1.precision == doctest::Approx(1.0));
  CHECK(e1.recall == doctest::Approx(0.5));
  CHECK(e1.f1 == doctest::Approx(2.0 / 3.0));

  const auto& e2 = scores.entities[1];
  CHECK(e2.entity_id == 2);
  CHECK(e2.tp == 1);
  CHECK(e2.fp == 1);
  CHECK(e2.fn == 1);
  CHECK(e2.f1 == doctest::Approx(0.5));
}

TEST_CASE("null labels never count for or against") {
  auto doc = meitest::aladdin();
  auto exact = meitest::gold_as_predictions(doc);
  auto padded = exact;
  padded.assignments.push_back(Assignment{{6, 6}, std::nullopt});
  padded.assignments.push_back(Assignment{{1, 1}, std::nullopt});
  canonicalize_assignments(padded);

  auto a = score_document(doc, exact);
  auto b = score_document(doc, padded);
  REQUIRE(a.entities.size() == b.entities.size());
  for (std::size_t i = 0; i < a.entities.size(); ++i) {
    CHECK(a.entities[i].f1 == b.entities[i].f1);
    CHECK(a.entities[i].f1 == doctest::Approx(1.0));
  }
}

TEST_CASE("unknown prediction labels are rejected") {
  auto doc = meitest::aladdin();
  PredictionSet preds;
  preds.doc_id = doc.doc_id;
  preds.assignments = {{{0, 0}, 9}};
  CHECK_THROWS_AS(score_document(doc, preds), UnknownEntity);
}

TEST_CASE("document pairing is strict") {
  auto doc = meitest::aladdin();
  auto preds = meitest::gold_as_predictions(doc);

  SUBCASE("doc_id mismatch in score_document") {
    auto other = preds;
    other.doc_id = "someone_else";
    CHECK_THROWS_AS(score_document(doc, other), CorpusMismatch);
  }
  SUBCASE("missing prediction line") {
    CHECK_THROWS_AS(score_corpus({doc}, {}), CorpusMismatch);
  }
  SUBCASE("extra prediction line") {
    auto stray = preds;
    stray.doc_id = "stray";
    CHECK_THROWS_AS(score_corpus({doc}, {preds, stray}), CorpusMismatch);
  }
  SUBCASE("duplicate prediction line") {
    CHECK_THROWS_AS(score_corpus({doc}, {preds, preds}), CorpusMismatch);
  }
  SUBCASE("empty corpus") {
    CHECK_THROWS_AS(macro_f1({}), EmptyCorpus);
    CHECK_THROWS_AS(micro_f1({}), EmptyCorpus);
  }
}

TEST_CASE("corpus aggregation matches the definitions") {
  // Doc A: e1 f1 = 1.0 (2 gold), e2 f1 = 0.0 (1 gold).
  // Doc B: e1 f1 = 0.5 (3 gold: tp 1, fn 2, fp 0 -> p 1, r 1/3, f1 0.5).
  MeiDocument a;
  a.doc_id = "a";
  a.tokens = {"x", "y", "z", "w"};
  a.sentences = {Span{0, 4}};
  a.entities = {{1, "x", Span{0, 0}, 2}, {2, "y", Span{1, 1}, 1}};
  a.gold = {{{0, 0}, 1}, {{1, 1}, 2}, {{2, 2}, 1}};

  MeiDocument b;
  b.doc_id = "b";
  b.tokens = {"p", "q", "r"};
  b.sentences = {Span{0, 3}};
  b.entities = {{1, "p", Span{0, 0}, 3}};
  b.gold = {{{0, 0}, 1}, {{1, 1}, 1}, {{2, 2}, 1}};

  PredictionSet pa{"a", {{{0, 0}, 1}, {{2, 2}, 1}}};
  PredictionSet pb{"b", {{{0, 0}, 1}}};

  auto scores = score_corpus({a, b}, {pa, pb});
  CHECK(macro_f1(scores) == doctest::Approx((1.0 + 0.0 + 0.5) / 3.0));
  // Doc A micro: (1.0*2 + 0.0*1)/3 = 2/3; doc B micro: 0.5. Mean = 7/12.
  CHECK(micro_f1(scores) == doctest::Approx(7.0 / 12.0));
}

TEST_CASE("random instances agree with a brute-force oracle") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 300; ++trial) {
    int doc_count = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<MeiDocument> gold;
    std::vector<PredictionSet> preds;
    for (int d = 0; d < doc_count; ++d) {
      auto doc = meitest::random_mei_document(rng);
      doc.doc_id = "doc" + std::to_string(d);
      gold.push_back(doc);
      auto p = random_predictions(doc, rng);
      p.doc_id = doc.doc_id;
      preds.push_back(p);
    }

    auto scores = score_corpus(gold, preds);
    REQUIRE(scores.size() == gold.size());

    double macro_sum = 0.0;
    long macro_n = 0;
    double micro_sum = 0.0;
    for (std::size_t d = 0; d < gold.size(); ++d) {
      REQUIRE(scores[d].entities.size() == gold[d].entities.size());
      double weighted = 0.0;
      long weight = 0;
      for (const auto& es : scores[d].entities) {
        auto oracle = oracle_entity(gold[d], preds[d], es.entity_id);
        CHECK(es.tp == oracle.tp);
        CHECK(es.fp == oracle.fp);
        CHECK(es.fn == oracle.fn);
        CHECK(std::abs(es.f1 - oracle.f1) < 1e-12);
        macro_sum += oracle.f1;
        ++macro_n;
        weighted += oracle.f1 * double(oracle.tp + oracle.fn);
        weight += oracle.tp + oracle.fn;
      }
      micro_sum += weight ? weighted / double(weight) : 0.0;
    }
    CHECK(std::abs(macro_f1(scores) - (macro_n ? macro_sum / macro_n : 0.0)) < 1e-12);
    CHECK(std::abs(micro_f1(scores) - micro_sum / double(gold.size())) < 1e-12);
  }
}

TEST_CASE("reports render four decimal places") {
  auto doc = meitest::aladdin();
  auto preds = meitest::gold_as_predictions(doc);
  preds.assignments[0].label = 2;  // one flipped label
  auto scores = score_corpus({doc}, {preds});

  std::string tsv = report_tsv(scores);
  CHECK(tsv.find("doc_id\tentity_id\ttp\tfp\tfn\tprecision\trecall\tf1\n") == 0);
  CHECK(tsv.find("macro_f1\t") != std::string::npos);
  CHECK(tsv.find("micro_f1\t") != std::string::npos);
  CHECK(tsv.find("0.7500") != std::string::npos);

  std::string json = report_json(scores);
  CHECK(json.find("\"macro_f1\"") != std::string::npos);
  CHECK(json.find("\"documents\"") != std::string::npos);
}
