#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "riskcal/retrieval.hpp"
#include "riskcal/rng.hpp"
#include "riskcal/simloss.hpp"
#include "riskcal/synth.hpp"

using namespace riskcal;

TEST_CASE("degenerate noise pins scores to the grade locations") {
  SynthConfig config;
  config.n_queries = 50;
  config.retrieval = {{0.1, 0.0}, {0.4, 0.0}, {0.7, 0.0}, {0.9, 0.0}};
  config.rank = {{0.2, 0.0}, {0.5, 0.0}, {0.6, 0.0}, {0.8, 0.0}};
  const auto queries = synth_generate(config);
  for (const auto& q : queries) {
    for (const auto& d : q.docs) {
      const auto g = static_cast<std::size_t>(d.relevance);
      CHECK(d.score_retrieval == config.retrieval[g].location);
      CHECK(d.score_rank == config.rank[g].location);
    }
  }
}

TEST_CASE("same seed reproduces the dataset exactly") {
  SynthConfig config;
  config.n_queries = 80;
  config.seed = 1234;
  const auto a = synth_generate(config);
  const auto b = synth_generate(config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].docs.size() == b[i].docs.size());
    for (std::size_t d = 0; d < a[i].docs.size(); ++d) {
      CHECK(a[i].docs[d].doc_id == b[i].docs[d].doc_id);
      CHECK(a[i].docs[d].relevance == b[i].docs[d].relevance);
      CHECK(a[i].docs[d].score_retrieval == b[i].docs[d].score_retrieval);
      CHECK(a[i].docs[d].score_rank == b[i].docs[d].score_rank);
    }
  }
  config.seed = 1235;
  const auto c = synth_generate(config);
  bool any_diff = false;
  for (std::size_t i = 0; i < std::min(a.size(), c.size()) && !any_diff; ++i) {
    if (a[i].docs.size() != c[i].docs.size()) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("generated records pass validation and grades follow the distribution") {
  SynthConfig config;
  config.n_queries = 400;
  config.seed = 5;
  const auto queries = synth_generate(config);
  CHECK_NOTHROW(validate_queries(queries));
  std::vector<std::size_t> counts(config.grade_probs.size(), 0);
  std::size_t total = 0;
  for (const auto& q : queries) {
    CHECK(q.docs.size() >= config.docs_min);
    CHECK(q.docs.size() <= config.docs_max);
    for (const auto& d : q.docs) {
      ++counts[static_cast<std::size_t>(d.relevance)];
      ++total;
    }
  }
  for (std::size_t g = 0; g < counts.size(); ++g) {
    const double frac = static_cast<double>(counts[g]) / static_cast<double>(total);
    const double se = std::sqrt(config.grade_probs[g] * (1 - config.grade_probs[g]) /
                                static_cast<double>(total));
    CHECK(std::fabs(frac - config.grade_probs[g]) <= 5.0 * se + 1e-9);
  }
}

TEST_CASE("empirical score CDF matches the analytic exceedance") {
  // 1e5 draws per grade model; sup distance under 0.01
  const GradeScoreModel models[] = {{0.3, 0.4}, {0.62, 0.35}, {0.9, 0.25}, {0.05, 0.2}};
  Rng rng(2718);
  for (const auto& model : models) {
    const std::size_t draws = 100000;
    std::vector<double> scores(draws);
    for (auto& s : scores) {
      s = std::clamp(model.location + model.width * (uniform01(rng) - 0.5), 0.0, 1.0);
    }
    std::sort(scores.begin(), scores.end());
    double sup = 0.0;
    for (int k = 0; k <= 200; ++k) {
      const double tau = static_cast<double>(k) / 200.0;
      const auto below =
          std::lower_bound(scores.begin(), scores.end(), tau) - scores.begin();
      const double empirical = 1.0 - static_cast<double>(below) / static_cast<double>(draws);
      sup = std::max(sup, std::fabs(empirical - exceed_prob(model, tau)));
    }
    INFO("loc=", model.location, " width=", model.width, " sup=", sup);
    CHECK(sup < 0.01);
  }
}

TEST_CASE("exceed_prob edge cases") {
  CHECK(exceed_prob({0.5, 0.0}, 0.5) == 1.0);
  CHECK(exceed_prob({0.5, 0.0}, 0.51) == 0.0);
  CHECK(exceed_prob({0.5, 0.2}, 0.0) == 1.0);
  CHECK(exceed_prob({0.5, 0.2}, -0.3) == 1.0);
  CHECK(exceed_prob({0.5, 0.2}, 1.5) == 0.0);
  CHECK(exceed_prob({0.5, 0.2}, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("higher grades stochastically dominate in both scores") {
  SynthConfig config;
  config.n_queries = 500;
  config.seed = 77;
  const auto queries = synth_generate(config);
  std::vector<double> mean_ret(config.grade_probs.size(), 0.0);
  std::vector<double> mean_rank(config.grade_probs.size(), 0.0);
  std::vector<std::size_t> counts(config.grade_probs.size(), 0);
  for (const auto& q : queries) {
    for (const auto& d : q.docs) {
      const auto g = static_cast<std::size_t>(d.relevance);
      mean_ret[g] += d.score_retrieval;
      mean_rank[g] += d.score_rank;
      ++counts[g];
    }
  }
  for (std::size_t g = 1; g < counts.size(); ++g) {
    REQUIRE(counts[g] > 0);
    CHECK(mean_ret[g] / counts[g] > mean_ret[g - 1] / counts[g - 1]);
    CHECK(mean_rank[g] / counts[g] > mean_rank[g - 1] / counts[g - 1]);
  }
}

TEST_CASE("synthetic loss models match their analytic risk surfaces") {
  // plain Monte Carlo against the closed forms
  for (const auto kind : {SimLossKind::kThreshold, SimLossKind::kBlend}) {
    SimLossModel model;
    model.kind = kind;
    Rng rng(kind == SimLossKind::kThreshold ? 1 : 2);
    const std::size_t draws = 200000;
    const auto samples = model.sample_many(draws, rng);
    for (const double lambda : {0.0, 0.35, 0.7, 1.0}) {
      double sum1 = 0.0;
      for (const auto& s : samples) sum1 += model.loss1(s, lambda);
      const double se = 0.5 / std::sqrt(static_cast<double>(draws));
      CHECK(std::fabs(sum1 / draws - model.risk1(lambda)) < 5.0 * se + 1e-4);
      for (const double gamma : {0.2, 0.8, 1.0}) {
        double sum2 = 0.0;
        for (const auto& s : samples) sum2 += model.loss2(s, lambda, gamma);
        CHECK(std::fabs(sum2 / draws - model.risk2(lambda, gamma)) < 5.0 * se + 1e-4);
      }
    }
  }
}

TEST_CASE("sim losses satisfy the structural requirements") {
  for (const auto kind : {SimLossKind::kThreshold, SimLossKind::kBlend}) {
    SimLossModel model;
    model.kind = kind;
    Rng rng(9);
    const auto samples = model.sample_many(500, rng);
    for (const auto& s : samples) {
      CHECK(model.loss1(s, 1.0) == 0.0);
      CHECK(model.loss2(s, 1.0, 1.0) == 0.0);
      double prev = 2.0;
      for (const double l : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double v = model.loss1(s, l);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= prev);
        prev = v;
      }
    }
    // the feasibility constant really bounds the per-sample loss
    const double alpha2 = 0.15;
    const double lambda0 = model.valid_lambda0(alpha2);
    for (const auto& s : samples) {
      CHECK(model.loss2(s, lambda0, 1.0) <= alpha2 + 1e-12);
    }
  }
}
