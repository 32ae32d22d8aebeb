#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "latvit/scoring.hpp"
#include "oracles.hpp"

using namespace latvit;

TEST_CASE("frame rate: counting") {
  std::vector<int> ref{1, 2, 3, 1, 2, 3, 1, 2, 3, 1};
  std::vector<int> hyp{1, 2, 3, 1, 2, 3, 1, 9, 9, 9};
  FrameScore score = frame_correct_rate(hyp, ref);
  CHECK(score.correct_frames == 7);
  CHECK(score.total_frames == 10);
  CHECK(score.rate() == doctest::Approx(0.7));

  CHECK(frame_correct_rate(ref, ref).rate() == 1.0);
  std::vector<int> disjoint(ref.size(), 99);
  CHECK(frame_correct_rate(disjoint, ref).rate() == 0.0);
  CHECK_THROWS(frame_correct_rate(std::vector<int>{1}, ref));
}

TEST_CASE("frame rate: symmetric under joint permutation") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> label(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> ref(20), hyp(20);
    for (int t = 0; t < 20; ++t) {
      ref[t] = label(rng);
      hyp[t] = label(rng);
    }
    std::vector<int> order(20);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> ref2(20), hyp2(20);
    for (int t = 0; t < 20; ++t) {
      ref2[t] = ref[order[t]];
      hyp2[t] = hyp[order[t]];
    }
    CHECK(frame_correct_rate(hyp, ref).correct_frames ==
          frame_correct_rate(hyp2, ref2).correct_frames);
  }
}

TEST_CASE("collapse: run-length merge") {
  CHECK(collapse_to_segments(std::vector<int>{1, 1, 2, 2, 2, 1}) ==
        std::vector<int>{1, 2, 1});
  CHECK(collapse_to_segments(std::vector<int>{5, 5, 5}) == std::vector<int>{5});
  CHECK(collapse_to_segments(std::vector<int>{1, 2, 1, 2}) ==
        std::vector<int>{1, 2, 1, 2});
  CHECK_THROWS(collapse_to_segments(std::vector<int>{}));
}

TEST_CASE("edit alignment: identity") {
  std::vector<int> ref{1, 2, 3, 4};
  EditScore score = align_edit(ref, ref);
  CHECK(score.hits == 4);
  CHECK(score.deletions == 0);
  CHECK(score.substitutions == 0);
  CHECK(score.insertions == 0);
  CHECK(score.accuracy() == 1.0);
  CHECK(score.percent_correct() == 1.0);
}

TEST_CASE("edit alignment: one deletion") {
  std::vector<int> ref{1, 2, 3}, hyp{1, 3};
  EditScore score = align_edit(ref, hyp);
  CHECK(score.hits == 2);
  CHECK(score.deletions == 1);
  CHECK(score.substitutions == 0);
  CHECK(score.insertions == 0);
  CHECK(score.percent_correct() == doctest::Approx(2.0 / 3.0));
  CHECK(score.accuracy() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("edit alignment: one insertion") {
  std::vector<int> ref{1, 2}, hyp{1, 7, 2};
  EditScore score = align_edit(ref, hyp);
  CHECK(score.hits == 2);
  CHECK(score.insertions == 1);
  CHECK(score.percent_correct() == doctest::Approx(1.0));
  CHECK(score.accuracy() == doctest::Approx(0.5));
}

TEST_CASE("edit alignment: empty reference rejected, empty hypothesis scored") {
  CHECK_THROWS(align_edit(std::vector<int>{}, std::vector<int>{1}));
  EditScore score = align_edit(std::vector<int>{1, 2}, std::vector<int>{});
  CHECK(score.deletions == 2);
  CHECK(score.accuracy() == doctest::Approx(0.0));
}

TEST_CASE("edit alignment: cost agrees with the recursive oracle") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> label(0, 2);
  std::uniform_int_distribution<int> length(1, 6);
  const EditCosts costs;
  for (int trial = 0; trial < 120; ++trial) {
    std::vector<int> ref(length(rng)), hyp(length(rng) - 1);
    for (int& v : ref) v = label(rng);
    for (int& v : hyp) v = label(rng);
    EditScore score = align_edit(ref, hyp, costs);
    int dp_cost = score.substitutions * costs.substitution +
                  score.deletions * costs.deletion +
                  score.insertions * costs.insertion;
    CHECK(dp_cost == testing::edit_cost_recursive(ref, hyp, costs));
    CHECK(score.hits + score.deletions + score.substitutions == score.ref_len);
  }
}

TEST_CASE("edit alignment: percent correct minus accuracy equals I/N") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> label(0, 4);
  std::uniform_int_distribution<int> length(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> ref(length(rng)), hyp(length(rng));
    for (int& v : ref) v = label(rng);
    for (int& v : hyp) v = label(rng);
    EditScore score = align_edit(ref, hyp);
    double gap = score.percent_correct() - score.accuracy();
    CHECK(gap == doctest::Approx(static_cast<double>(score.insertions) /
                                 score.ref_len)
                     .epsilon(1e-12));
  }
}
