#include <doctest.h>

#include "flowsched/generators.hpp"
#include "flowsched/metrics.hpp"
#include "flowsched/oracle/brute_force.hpp"
#include "flowsched/oracle/quantum.hpp"
#include "helpers.hpp"

using namespace flowsched;
using namespace flowsched::testing;

TEST_CASE("exhaustive optimum on small examples") {
  CHECK(oracle::brute_force_optimum(jobs_of({{q(0), q(3)}, {q(1), q(1)}})) == q(5));
  CHECK(oracle::brute_force_optimum(jobs_of({{q(0), q(2)}, {q(0), q(2)}})) == q(6));
  CHECK(oracle::brute_force_optimum(jobs_of({{q(0), q(1)}})) == q(1));
  CHECK(oracle::brute_force_optimum(jobs_of({{q(0), q(4)}, {q(0), q(2)}})) == q(8));
  // Idle gap before a late release.
  CHECK(oracle::brute_force_optimum(jobs_of({{q(0), q(1)}, {q(5), q(2)}})) == q(3));
  CHECK_THROWS_AS(oracle::brute_force_optimum(jobs_of({{q(0), q(3, 2)}})), Error);
}

TEST_CASE("exhaustive optimum agrees with SRPT on random instances") {
  RandomInstanceParams p;
  p.n = 5;
  p.max_p = 5;
  p.max_release = 8;
  for (const auto& inst : random_corpus(60, p, Alpha(), 77)) {
    CHECK(oracle::brute_force_optimum(inst) == total_flow_time(run(inst, PolicyKind::kSrpt)));
  }
}

TEST_CASE("quantum simulator converges to the fluid schedule") {
  RandomInstanceParams p;
  p.n = 5;
  p.max_p = 6;
  for (const Rational& a : {q(1, 2), q(3, 4)}) {
    for (const auto& inst : random_corpus(25, p, Alpha(a), 5)) {
      const Rational n = static_cast<unsigned long>(inst.size());
      for (PolicyKind kind : {PolicyKind::kAlphaClairvoyant, PolicyKind::kSrpt, PolicyKind::kSetf}) {
        const Rational exact = total_flow_time(run(inst, kind));
        for (const Rational& h : {q(1, 16), q(1, 64)}) {
          const Rational stepped = total_flow_time(oracle::simulate_quantum(inst, kind, h));
          CHECK(Rational(abs(stepped - exact)) <= h * n * n);
        }
      }
    }
  }
}

TEST_CASE("quantum simulator is exact for SRPT on integer instances") {
  for (const auto& inst : random_corpus(20, RandomInstanceParams{}, Alpha(), 3)) {
    const auto fluid = run(inst, PolicyKind::kSrpt);
    CHECK(oracle::simulate_quantum(inst, PolicyKind::kSrpt, q(1, 4)).completions() == fluid.completions());
  }
}
