#include <doctest.h>

#include <cmath>

#include "flowsched/engine.hpp"
#include "flowsched/generators.hpp"
#include "flowsched/metrics.hpp"
#include "helpers.hpp"

using namespace flowsched;
using namespace flowsched::testing;

TEST_CASE("scaled-work construction shape") {
  const auto c = gen_det_lb1(Alpha(), 6);
  CHECK(c.instance.size() == 6);
  CHECK(c.measure_at == q(6));
  for (const auto& job : c.instance.jobs()) {
    CHECK(job.release == q(0));
    CHECK_FALSE(job.committed());
  }
  REQUIRE(c.instance.adversary());
  REQUIRE(c.instance.adversary()->triggers.size() == 1);
  const Trigger& trig = c.instance.adversary()->triggers[0];
  CHECK(trig.fire_at == q(6));
  CHECK(trig.rule.kind == CommitRule::Kind::kScaledWork);
  CHECK(trig.rule.slack == q(1, 6));

  const auto res = run_full(c.instance, PolicyKind::kAlphaClairvoyant);
  for (const auto& job : c.instance.jobs()) {
    const auto s = res.trace.emission(job.id);
    CHECK((!s || *s >= q(6)));
    // Every job holds at least slack after the commit.
    CHECK(remaining(res.trace, job.id, q(6)) >= q(1, 6));
  }
  CHECK_THROWS_AS(gen_det_lb1(Alpha(), 1), Error);
  CHECK_THROWS_AS(gen_det_lb1(Alpha(q(1)), 4), Error);
}

TEST_CASE("unit scale keeps remainders at least one") {
  CHECK(lb1_unit_scale(Alpha()) == q(1));
  CHECK(lb1_unit_scale(Alpha(q(3, 4))) == q(3));
  CHECK(lb1_unit_scale(Alpha(q(7, 8))) == q(7));
  const Alpha a(q(3, 4));
  const auto c = gen_det_lb1(a, 8, lb1_unit_scale(a));
  const auto t = run(c.instance, PolicyKind::kAlphaClairvoyant);
  CHECK(delta(t, c.measure_at, q(1)) == delta(t, c.measure_at));
}

TEST_CASE("two-phase construction shape") {
  const Alpha a;
  const auto lengths = lb2_phase_lengths(a, 3);
  CHECK(lengths == std::vector<Rational>{q(729), q(81), q(9)});
  const auto k2 = gen_det_lb2(a, 2);
  CHECK(k2.instance.size() == 4);
  CHECK(k2.measure_at == q(90));
  std::vector<TimePoint> releases;
  for (const auto& j : k2.instance.jobs()) releases.push_back(j.release);
  CHECK(releases == std::vector<TimePoint>{q(0), q(0), q(81), q(81)});
  REQUIRE(k2.instance.adversary()->triggers.size() == 2);
  CHECK(k2.instance.adversary()->triggers[0].fire_at == q(81, 2));
  CHECK(k2.instance.adversary()->triggers[1].fire_at == q(81) + q(9, 2));
}

TEST_CASE("two-phase construction keeps both jobs of every phase large") {
  const Alpha a;
  const int k = 3;
  const auto c = gen_det_lb2(a, k);
  const auto t = run(c.instance, PolicyKind::kAlphaClairvoyant);
  const auto lengths = lb2_phase_lengths(a, k);
  TimePoint start = 0;
  for (int i = 0; i < k; ++i) {
    const TimePoint end = start + lengths[i];
    for (const auto& job : t.instance().jobs()) {
      if (job.release != start) continue;
      CHECK(remaining(t, job.id, end) >= a.value() * lengths[i] / 4);
    }
    start = end;
  }
  CHECK(delta(t, c.measure_at, q(1)) == 2 * k);
}

TEST_CASE("randomized bound sizes") {
  CHECK(rand_lb_job_count(Alpha(q(3, 4))) == 4);
  CHECK(rand_lb_job_count(Alpha(q(7, 8))) == 16);
  CHECK(rand_lb_job_count(Alpha(q(5, 6))) == 8);
  CHECK(rand_lb_measure_time(4) == 3);
  CHECK(rand_lb_measure_time(16) == 24);
  CHECK(rand_lb_measure_time(81) == 162);
  for (int k : {2, 5, 10, 37, 100, 1000}) {
    CHECK(rand_lb_measure_time(k) == static_cast<int>(std::floor(3 * (k - std::pow(k, 0.75)) + 1e-9)));
  }
}

TEST_CASE("geometric draws have mean two") {
  std::mt19937_64 rng(12345);
  const int draws = 100000;
  long sum = 0;
  int min = 1 << 30;
  for (int i = 0; i < draws; ++i) {
    const int g = draw_geometric(rng);
    sum += g;
    min = std::min(min, g);
  }
  CHECK(min == 1);
  CHECK(std::abs(static_cast<double>(sum) / draws + 1 - 3) < 0.06);
}

TEST_CASE("randomized instance") {
  const auto c = gen_rand_lb(Alpha(q(7, 8)), 3);
  CHECK(c.instance.size() == 16);
  CHECK(c.measure_at == q(24));
  for (const auto& j : c.instance.jobs()) {
    CHECK(j.release == q(0));
    CHECK(j.processing() >= q(2));
  }
  CHECK(gen_rand_lb(Alpha(q(7, 8)), 3).instance == c.instance);
  CHECK_THROWS_AS(gen_rand_lb(Alpha(), 1), Error);
}

TEST_CASE("coin-flip phases are oblivious") {
  const auto c = gen_rand_phases(Alpha(), 3, 9);
  CHECK(c.instance.size() == 6);
  CHECK(c.instance.resolved());
  CHECK(gen_rand_phases(Alpha(), 3, 9).instance == c.instance);
}

TEST_CASE("unit-job tail") {
  const Instance base = jobs_of({{q(0), q(2)}, {q(1), q(3)}});
  const Instance tail = append_dos_tail(base, q(5), 3);
  REQUIRE(tail.size() == 5);
  CHECK(tail.job(3).release == q(6));
  CHECK(tail.job(5).release == q(8));
  CHECK(tail.job(5).processing() == q(1));
}

TEST_CASE("random instances") {
  RandomInstanceParams p;
  p.n = 5;
  p.max_p = 4;
  p.max_release = 7;
  const auto inst = gen_random_instance(p, Alpha(), 42);
  CHECK(inst.size() == 5);
  for (const auto& j : inst.jobs()) {
    CHECK(j.release >= 0);
    CHECK(j.release <= 7);
    CHECK(j.processing() >= 1);
    CHECK(j.processing() <= 4);
    CHECK(j.release.get_den() == 1);
  }
  CHECK(gen_random_instance(p, Alpha(), 42) == inst);
  const auto corpus = random_corpus(40, p, Alpha(), 1);
  CHECK(corpus.size() == 40);
  CHECK(corpus == random_corpus(40, p, Alpha(), 1));
  std::size_t sizes = 0;
  for (const auto& c : corpus) sizes |= std::size_t{1} << c.size();
  CHECK(sizes == 0b111110);  // every n in 1..5 shows up
}
