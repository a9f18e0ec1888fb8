#include <doctest.h>

#include "flowsched/policy.hpp"
#include "helpers.hpp"

using namespace flowsched;
using namespace flowsched::testing;

namespace {

JobView fresh(JobId id, const Rational& y) { return {id, q(0), y, false, std::nullopt, std::nullopt}; }
JobView known(JobId id, const Rational& y, const Rational& rem, const Rational& s) {
  return {id, q(0), y, true, s, rem};
}

using Rates = std::vector<std::pair<JobId, Rational>>;

}  // namespace

TEST_CASE("alpha policy: empty clairvoyant set forces the SETF branch") {
  PolicyView v{q(0), {fresh(1, q(0))}};
  CHECK(alpha_clairvoyant_decide(v, Alpha()).rates == Rates{{1, q(1)}});
}

TEST_CASE("alpha policy: a fresh arrival preempts clairvoyant work") {
  PolicyView v{q(5), {fresh(1, q(0)), known(2, q(5), q(5), q(4))}};
  CHECK(alpha_clairvoyant_decide(v, Alpha()).rates == Rates{{1, q(1)}});
}

TEST_CASE("alpha policy: threshold equality takes the SRPT branch") {
  // min_C p = 1, min_N y = 1, (1 - alpha)/alpha = 1 at alpha = 1/2.
  PolicyView v{q(2), {fresh(1, q(1)), known(2, q(2), q(1), q(2))}};
  CHECK(alpha_clairvoyant_decide(v, Alpha()).rates == Rates{{2, q(1)}});
  PolicyView w{q(2), {fresh(1, q(1)), known(2, q(2), q(11, 10), q(2))}};
  CHECK(alpha_clairvoyant_decide(w, Alpha()).rates == Rates{{1, q(1)}});
}

TEST_CASE("alpha policy: clairvoyant ties prefer the latest emission, then the smallest id") {
  PolicyView v{q(9), {known(1, q(3), q(1), q(2)), known(2, q(3), q(1), q(5)), known(3, q(3), q(1), q(5))}};
  CHECK(alpha_clairvoyant_decide(v, Alpha()).rates == Rates{{2, q(1)}});
}

TEST_CASE("alpha policy: SETF branch shares among the least-progressed non-clairvoyant jobs") {
  PolicyView v{q(3), {fresh(1, q(1)), fresh(2, q(1)), fresh(3, q(2)), known(4, q(3), q(10), q(2))}};
  CHECK(alpha_clairvoyant_decide(v, Alpha()).rates == Rates{{1, q(1, 2)}, {2, q(1, 2)}});
}

TEST_CASE("alpha policy endpoints delegate") {
  PolicyView omni{q(0), {{1, q(0), q(0), true, q(0), q(3)}, {2, q(0), q(0), true, q(0), q(2)}}};
  CHECK(alpha_clairvoyant_decide(omni, Alpha(q(0))) == srpt_decide(omni));
  PolicyView blind{q(0), {fresh(1, q(2)), fresh(2, q(1))}};
  CHECK(alpha_clairvoyant_decide(blind, Alpha(q(1))) == setf_decide(blind));
}

TEST_CASE("SRPT decisions") {
  PolicyView one{q(0), {{1, q(0), q(0), false, std::nullopt, q(3)}}};
  CHECK(srpt_decide(one).rates == Rates{{1, q(1)}});
  PolicyView tie{q(0), {{1, q(0), q(0), false, std::nullopt, q(2)}, {2, q(0), q(0), false, std::nullopt, q(2)}}};
  CHECK(srpt_decide(tie).rates == Rates{{1, q(1)}});
  PolicyView blind{q(0), {fresh(1, q(0))}};
  CHECK_THROWS_AS(srpt_decide(blind), Error);
  CHECK(srpt_decide(PolicyView{q(0), {}}).rates.empty());
}

TEST_CASE("SETF decisions") {
  PolicyView arrival{q(2), {fresh(1, q(2)), fresh(2, q(0))}};
  CHECK(setf_decide(arrival).rates == Rates{{2, q(1)}});
  PolicyView three{q(2), {fresh(1, q(1)), fresh(2, q(1)), fresh(3, q(4))}};
  CHECK(setf_decide(three).rates == Rates{{1, q(1, 2)}, {2, q(1, 2)}});
  CHECK(setf_decide(PolicyView{q(0), {}}).rates.empty());
}

TEST_CASE("policy names round-trip") {
  for (PolicyKind k : {PolicyKind::kAlphaClairvoyant, PolicyKind::kSrpt, PolicyKind::kSetf}) {
    CHECK(parse_policy(policy_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_policy("mlfq"), Error);
  CHECK(make_policy(PolicyKind::kSrpt, Alpha())->omniscient());
  CHECK_FALSE(make_policy(PolicyKind::kAlphaClairvoyant, Alpha())->omniscient());
  CHECK_FALSE(make_policy(PolicyKind::kSetf, Alpha())->omniscient());
}
