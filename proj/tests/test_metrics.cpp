#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gnb/metrics.hpp"

using namespace gnb;
using Catch::Matchers::WithinAbs;

TEST_CASE("worked confusion examples") {
    // 10 outcomes: tp=2, fp=1, fn=1, tn=6
    std::vector<int> actual = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
    std::vector<int> predicted = {1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
    ConfusionMatrix cm = confusion(actual, predicted, 1);
    CHECK(cm.tp == 2);
    CHECK(cm.fp == 1);
    CHECK(cm.fn == 1);
    CHECK(cm.tn == 6);
    Scores s = scores(cm);
    CHECK_THAT(s.accuracy, WithinAbs(0.8, 1e-15));
    CHECK_THAT(s.precision, WithinAbs(2.0 / 3.0, 1e-15));
    CHECK_THAT(s.recall, WithinAbs(2.0 / 3.0, 1e-15));
    CHECK_THAT(s.f1, WithinAbs(2.0 / 3.0, 1e-15));

    // a matrix where every headline value is a different fraction
    ConfusionMatrix cm2{2, 1, 2, 10};
    Scores s2 = scores(cm2);
    CHECK_THAT(s2.accuracy, WithinAbs(0.8, 1e-15));
    CHECK_THAT(s2.precision, WithinAbs(2.0 / 3.0, 1e-15));
    CHECK_THAT(s2.recall, WithinAbs(0.5, 1e-15));
    CHECK_THAT(s2.f1, WithinAbs(4.0 / 7.0, 1e-15));
}

TEST_CASE("degenerate ratios collapse to zero") {
    // never predicts positive and no positives exist: everything 0/0 except accuracy
    ConfusionMatrix cm;
    cm.tn = 5;
    Scores s = scores(cm);
    CHECK(s.accuracy == 1.0);
    CHECK(s.precision == 0.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f1 == 0.0);
}

TEST_CASE("confusion validates input") {
    CHECK_THROWS_AS(confusion({1}, {1, 0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(confusion({}, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(scores(ConfusionMatrix{}), std::invalid_argument);
}

TEST_CASE("perfect separation gives unit area") {
    std::vector<int> actual = {0, 0, 1, 1};
    std::vector<double> score = {0.1, 0.2, 0.8, 0.9};
    auto auc = roc_auc(actual, score, 1);
    REQUIRE(auc);
    CHECK_THAT(*auc, WithinAbs(1.0, 1e-15));
    auto flipped = roc_auc(actual, score, 0);
    REQUIRE(flipped);
    CHECK_THAT(*flipped, WithinAbs(0.0, 1e-15));
}

TEST_CASE("constant scores give one half") {
    std::vector<int> actual = {0, 1, 0, 1, 1};
    std::vector<double> score(5, 0.7);
    auto auc = roc_auc(actual, score, 1);
    REQUIRE(auc);
    CHECK_THAT(*auc, WithinAbs(0.5, 1e-15));
}

TEST_CASE("hand-computed tied ranking") {
    // scores: pos {0.9, 0.5}, neg {0.5, 0.1}; the tie at 0.5 counts half
    std::vector<int> actual = {1, 1, 0, 0};
    std::vector<double> score = {0.9, 0.5, 0.5, 0.1};
    auto auc = roc_auc(actual, score, 1);
    REQUIRE(auc);
    // pairs: (0.9>0.5)=1, (0.9>0.1)=1, (0.5=0.5)=0.5, (0.5>0.1)=1 -> 3.5/4
    CHECK_THAT(*auc, WithinAbs(0.875, 1e-15));
}

TEST_CASE("area matches the pairwise probability on random data") {
    std::mt19937 rng(81);
    for (int trial = 0; trial < 20; ++trial) {
        size_t n = 5 + rng() % 40;
        std::vector<int> actual(n);
        std::vector<double> score(n);
        for (size_t i = 0; i < n; ++i) {
            actual[i] = static_cast<int>(rng() % 2);
            score[i] = static_cast<double>(rng() % 8) / 7.0;   // frequent ties
        }
        auto auc = roc_auc(actual, score, 1);
        double wins = 0;
        size_t pairs = 0;
        for (size_t i = 0; i < n; ++i) {
            if (actual[i] != 1) continue;
            for (size_t j = 0; j < n; ++j) {
                if (actual[j] == 1) continue;
                ++pairs;
                if (score[i] > score[j]) wins += 1;
                else if (score[i] == score[j]) wins += 0.5;
            }
        }
        if (pairs == 0) {
            CHECK_FALSE(auc);
            continue;
        }
        REQUIRE(auc);
        CHECK_THAT(*auc, WithinAbs(wins / pairs, 1e-12));
    }
}

TEST_CASE("swapping the positive class mirrors the area") {
    std::mt19937 rng(82);
    std::vector<int> actual;
    std::vector<double> score;
    for (int i = 0; i < 30; ++i) {
        actual.push_back(static_cast<int>(rng() % 2));
        score.push_back(static_cast<double>(rng() % 100) / 99.0);
    }
    actual[0] = 1;
    actual[1] = 0;   // both classes present
    auto a = roc_auc(actual, score, 1);
    // scoring the same probabilities against the complement class:
    std::vector<double> comp;
    for (double v : score) comp.push_back(1.0 - v);
    auto b = roc_auc(actual, comp, 0);
    REQUIRE(a);
    REQUIRE(b);
    CHECK_THAT(*a, WithinAbs(*b, 1e-12));
}

TEST_CASE("single-class rankings have no area") {
    CHECK_FALSE(roc_auc({1, 1, 1}, {0.1, 0.5, 0.9}, 1));
    CHECK_FALSE(roc_auc({0, 0}, {0.1, 0.5}, 1));
    CHECK_THROWS_AS(roc_auc({1}, {0.5, 0.5}, 1), std::invalid_argument);
}

TEST_CASE("permutation invariance") {
    std::vector<int> actual = {1, 0, 1, 0, 1, 0, 0};
    std::vector<double> score = {0.9, 0.3, 0.6, 0.6, 0.2, 0.1, 0.6};
    auto a = roc_auc(actual, score, 1);
    std::vector<size_t> perm = {3, 0, 6, 2, 5, 1, 4};
    std::vector<int> pa;
    std::vector<double> ps;
    for (size_t i : perm) {
        pa.push_back(actual[i]);
        ps.push_back(score[i]);
    }
    auto b = roc_auc(pa, ps, 1);
    REQUIRE(a);
    REQUIRE(b);
    CHECK_THAT(*a, WithinAbs(*b, 1e-15));
}
