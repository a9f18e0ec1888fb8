#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "flowsched/instance.hpp"

namespace flowsched {

/// An instance together with the time at which its construction is measured.
struct Construction {
  Instance instance;
  TimePoint measure_at;
};

/// k jobs released at 0 with deferred processing times, all committed at
/// time scale * k to p = y / alpha + scale / k. Needs 0 < alpha < 1, k >= 2.
/// With scale = 1 this is the textbook construction; a larger scale keeps
/// every remainder at or above 1 when alpha > 1/2.
Construction gen_det_lb1(const Alpha& alpha, int k, const Rational& scale = Rational(1));

/// Smallest integer scale with scale * (1 - alpha) / alpha >= 1.
Rational lb1_unit_scale(const Alpha& alpha);

/// k phases of lengths lambda^k, ..., lambda^1 with lambda = (4 + alpha) /
/// alpha. Each phase releases two jobs at its start; alpha * lambda^i later
/// the one with more elapsed work gets 2 lambda^i and the other lambda^i.
/// Measured at the end of the last phase. Needs 0 < alpha < 1, k >= 1.
Construction gen_det_lb2(const Alpha& alpha, int k);

/// Phase lengths of gen_det_lb2, starting with the first phase.
std::vector<Rational> lb2_phase_lengths(const Alpha& alpha, int k);

/// Job count for the randomized bound: the largest k with k <= 2^(1/(2-2 alpha)).
int rand_lb_job_count(const Alpha& alpha);

/// floor(3 (k - k^(3/4))), computed exactly.
int rand_lb_measure_time(int k);

/// Oblivious instance: rand_lb_job_count(alpha) jobs at time 0 with
/// p = g + 1, g geometric on {1, 2, ...} with mean 2. Needs 1/2 < alpha < 1.
Construction gen_rand_lb(const Alpha& alpha, std::uint64_t seed);

/// One geometric draw (success probability 1/2, support {1, 2, ...}).
int draw_geometric(std::mt19937_64& rng);

/// The two-phase-job construction with each phase's long job picked by a
/// fair coin instead of by the algorithm's behaviour. Oblivious.
Construction gen_rand_phases(const Alpha& alpha, int k, std::uint64_t seed);

/// Appends M unit jobs released at t+1, ..., t+M with fresh ids.
Instance append_dos_tail(const Instance& instance, const TimePoint& t, int m);

struct RandomInstanceParams {
  int n = 6;
  int max_p = 8;
  Rational density = Rational(1);       // expected load; sets the release window
  std::optional<int> max_release;       // overrides the window when set
};

/// n jobs with integer releases in [0, window] and processing times in
/// [1, max_p]. Deterministic per seed.
Instance gen_random_instance(const RandomInstanceParams& params, const Alpha& alpha, std::uint64_t seed);

/// `count` random instances for seeds seed, seed+1, ...; each draws its job
/// count uniformly from [1, params.n].
std::vector<Instance> random_corpus(std::size_t count, const RandomInstanceParams& params, const Alpha& alpha,
                                    std::uint64_t seed);

}  // namespace flowsched
