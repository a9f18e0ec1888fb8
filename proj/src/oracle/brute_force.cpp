#include "flowsched/oracle/brute_force.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace flowsched::oracle {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<int>& key) const {
    std::size_t h = 1469598103934665603ULL;
    for (int v : key) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

class Search {
 public:
  Search(std::vector<long> release, std::vector<int> proc) : release_(std::move(release)), proc_(std::move(proc)) {
    last_release_ = *std::max_element(release_.begin(), release_.end());
  }

  long run() { return best(0, proc_); }

 private:
  // Least flow accrued from time t on, with `left` work remaining per job.
  long best(long t, std::vector<int> left) {
    std::vector<std::size_t> alive;
    std::optional<long> next_release;
    bool any_left = false;
    for (std::size_t j = 0; j < left.size(); ++j) {
      if (left[j] == 0) continue;
      any_left = true;
      if (release_[j] <= t) {
        alive.push_back(j);
      } else if (!next_release || release_[j] < *next_release) {
        next_release = release_[j];
      }
    }
    if (!any_left) return 0;
    if (alive.empty()) return best(*next_release, std::move(left));

    std::vector<int> key = left;
    key.push_back(static_cast<int>(std::min(t, last_release_)));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    long result = std::numeric_limits<long>::max();
    for (std::size_t j : alive) {
      --left[j];
      long cost = static_cast<long>(alive.size()) + best(t + 1, left);
      ++left[j];
      result = std::min(result, cost);
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  std::vector<long> release_;
  std::vector<int> proc_;
  long last_release_ = 0;
  std::unordered_map<std::vector<int>, long, KeyHash> memo_;
};

}  // namespace

Rational brute_force_optimum(const Instance& instance) {
  if (instance.empty()) return Rational(0);
  std::vector<long> release;
  std::vector<int> proc;
  for (const auto& job : instance.jobs()) {
    const Duration& p = job.processing();
    if (job.release.get_den() != 1 || p.get_den() != 1) {
      throw Error("brute-force optimum needs integer releases and processing times");
    }
    release.push_back(job.release.get_num().get_si());
    proc.push_back(static_cast<int>(p.get_num().get_si()));
  }
  return Rational(Search(std::move(release), std::move(proc)).run());
}

}  // namespace flowsched::oracle
