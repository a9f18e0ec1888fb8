#include "flowsched/generators.hpp"

#include <algorithm>

namespace flowsched {

namespace {

void require_open_unit(const Alpha& alpha, const char* what) {
  if (alpha.is_zero() || alpha.is_one()) throw Error(std::string(what) + " needs 0 < alpha < 1");
}

Rational power(const Rational& base, int exp) {
  Rational out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

Integer ipow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

}  // namespace

Rational lb1_unit_scale(const Alpha& alpha) {
  require_open_unit(alpha, "lb1");
  const Rational& a = alpha.value();
  return Rational(ceil_of(Rational(a / (1 - a))));
}

Construction gen_det_lb1(const Alpha& alpha, int k, const Rational& scale) {
  require_open_unit(alpha, "lb1");
  if (k < 2) throw Error("lb1 needs k >= 2");
  if (scale <= 0) throw Error("lb1 needs a positive scale");
  CommitRule rule;
  rule.kind = CommitRule::Kind::kScaledWork;
  rule.slack = scale / k;
  AdversaryScript script{{Trigger{1, scale * k, rule}}};
  std::vector<Job> jobs;
  for (int id = 1; id <= k; ++id) jobs.push_back({id, TimePoint(0), Deferred{1}});
  return {Instance(std::move(jobs), alpha, std::move(script)), scale * k};
}

std::vector<Rational> lb2_phase_lengths(const Alpha& alpha, int k) {
  require_open_unit(alpha, "lb2");
  if (k < 1) throw Error("lb2 needs k >= 1");
  const Rational lambda = (4 + alpha.value()) / alpha.value();
  std::vector<Rational> out;
  for (int i = k; i >= 1; --i) out.push_back(power(lambda, i));
  return out;
}

Construction gen_det_lb2(const Alpha& alpha, int k) {
  const auto lengths = lb2_phase_lengths(alpha, k);
  std::vector<Job> jobs;
  AdversaryScript script;
  TimePoint start = 0;
  JobId next_id = 1;
  for (std::size_t p = 0; p < lengths.size(); ++p) {
    const TriggerId trigger = static_cast<TriggerId>(p + 1);
    CommitRule rule;
    rule.kind = CommitRule::Kind::kPhasePair;
    rule.length = lengths[p];
    script.triggers.push_back({trigger, start + alpha.value() * lengths[p], rule});
    jobs.push_back({next_id++, start, Deferred{trigger}});
    jobs.push_back({next_id++, start, Deferred{trigger}});
    start += lengths[p];
  }
  return {Instance(std::move(jobs), alpha, std::move(script)), start};
}

int rand_lb_job_count(const Alpha& alpha) {
  const Rational& a = alpha.value();
  if (!(a > Rational(1, 2) && a < 1)) throw Error("randomized bound needs 1/2 < alpha < 1");
  // k^a' <= 2^b' where 2 - 2 alpha = a'/b'.
  const Rational gap = 2 - 2 * a;
  const unsigned long num = gap.get_num().get_ui();
  const unsigned long den = gap.get_den().get_ui();
  const Integer bound = ipow(Integer(2), den);
  int k = 1;
  while (ipow(Integer(k + 1), num) <= bound) ++k;
  return k;
}

int rand_lb_measure_time(int k) {
  // floor(3k - 3k^(3/4)) = 3k - ceil(3 k^(3/4)); ceil(x) is the least m with m^4 >= 81 k^3.
  const Integer target = Integer(81) * ipow(Integer(k), 3);
  int m = 0;
  while (ipow(Integer(m), 4) < target) ++m;
  return 3 * k - m;
}

int draw_geometric(std::mt19937_64& rng) {
  int trials = 1;
  while ((rng() & 1U) == 0) ++trials;
  return trials;
}

Construction gen_rand_lb(const Alpha& alpha, std::uint64_t seed) {
  const int k = rand_lb_job_count(alpha);
  std::mt19937_64 rng(seed);
  std::vector<Job> jobs;
  for (int id = 1; id <= k; ++id) jobs.push_back({id, TimePoint(0), Rational(draw_geometric(rng) + 1)});
  return {Instance(std::move(jobs), alpha), TimePoint(rand_lb_measure_time(k))};
}

Construction gen_rand_phases(const Alpha& alpha, int k, std::uint64_t seed) {
  const auto lengths = lb2_phase_lengths(alpha, k);
  std::mt19937_64 rng(seed);
  std::vector<Job> jobs;
  TimePoint start = 0;
  JobId next_id = 1;
  for (const auto& len : lengths) {
    const bool first_long = (rng() & 1U) != 0;
    jobs.push_back({next_id++, start, first_long ? Rational(2 * len) : len});
    jobs.push_back({next_id++, start, first_long ? len : Rational(2 * len)});
    start += len;
  }
  return {Instance(std::move(jobs), alpha), start};
}

Instance append_dos_tail(const Instance& instance, const TimePoint& t, int m) {
  if (t < 0) throw Error("denial-of-service tail needs t >= 0");
  if (m < 1) throw Error("denial-of-service tail needs M >= 1");
  std::vector<Job> jobs = instance.jobs();
  JobId next_id = instance.empty() ? 1 : instance.max_id() + 1;
  for (int i = 1; i <= m; ++i) jobs.push_back({next_id++, t + i, Rational(1)});
  return Instance(std::move(jobs), instance.alpha(), instance.adversary());
}

Instance gen_random_instance(const RandomInstanceParams& params, const Alpha& alpha, std::uint64_t seed) {
  if (params.n < 1) throw Error("random instance needs n >= 1");
  if (params.max_p < 1) throw Error("random instance needs max_p >= 1");
  if (params.density <= 0) throw Error("random instance needs a positive density");
  int window = 0;
  if (params.max_release) {
    window = *params.max_release;
  } else {
    const Rational load = Rational(params.n * (params.max_p + 1), 2) / params.density;
    window = static_cast<int>(floor_of(load).get_si());
  }
  if (window < 0) throw Error("random instance needs a nonnegative release window");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> release(0, window);
  std::uniform_int_distribution<int> proc(1, params.max_p);
  std::vector<Job> jobs;
  for (int id = 1; id <= params.n; ++id) {
    const int r = release(rng);
    const int p = proc(rng);
    jobs.push_back({id, TimePoint(r), Rational(p)});
  }
  return Instance(std::move(jobs), alpha);
}

std::vector<Instance> random_corpus(std::size_t count, const RandomInstanceParams& params, const Alpha& alpha,
                                    std::uint64_t seed) {
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    std::mt19937_64 pick(s ^ 0x5bd1e995ULL);
    RandomInstanceParams p = params;
    p.n = 1 + static_cast<int>(pick() % static_cast<std::uint64_t>(params.n));
    out.push_back(gen_random_instance(p, alpha, s));
  }
  return out;
}

}  // namespace flowsched
