#include "support/random_models.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

namespace pcause::fixtures {

namespace {

// Splits 1 into `k` random positive rationals.
std::vector<Rat> random_distribution(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<int> part(1, 4);
  std::vector<int> parts(k);
  for (auto& x : parts) x = part(rng);
  const int total = std::accumulate(parts.begin(), parts.end(), 0);
  std::vector<Rat> out;
  for (int x : parts) out.emplace_back(Rat(x, total));
  for (auto& r : out) r.canonicalize();
  return out;
}

}  // namespace

Dtmc random_dtmc(std::mt19937_64& rng, const RandomModelOptions& opts) {
  const std::size_t k = opts.inner_states;
  std::uniform_int_distribution<int> weight(opts.weight_min, opts.weight_max);
  DtmcBuilder b;
  for (std::size_t i = 0; i < k; ++i) b.add_state("s" + std::to_string(i), Rat(weight(rng)));
  const StateId error = b.add_state("error", Rat(weight(rng)), true);
  const StateId safe = b.add_state("safe", Rat(weight(rng)));
  b.set_init(0);

  for (std::size_t i = 0; i < k; ++i) {
    std::vector<StateId> candidates;
    for (std::size_t j = 0; j < k; ++j) {
      if (!opts.acyclic || j > i) candidates.push_back(j);
    }
    candidates.push_back(error);
    candidates.push_back(safe);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::uniform_int_distribution<int> count(1, std::min<int>(opts.max_successors, static_cast<int>(candidates.size())));
    candidates.resize(static_cast<std::size_t>(count(rng)));
    if (i + 1 == k && std::find(candidates.begin(), candidates.end(), error) == candidates.end()) {
      candidates.push_back(error);
    }
    std::sort(candidates.begin(), candidates.end());
    auto probs = random_distribution(rng, candidates.size());
    for (std::size_t j = 0; j < candidates.size(); ++j) b.add_transition(i, candidates[j], probs[j]);
  }
  b.add_transition(error, error, Rat(1));
  b.add_transition(safe, safe, Rat(1));
  return b.build();
}

Dtmc random_gadget_base(std::mt19937_64& rng, std::size_t inner_states, int weight_max) {
  std::uniform_int_distribution<int> weight(0, weight_max);
  DtmcBuilder b;
  std::vector<StateId> ids;
  ids.push_back(b.add_state("s", Rat(weight(rng))));
  for (std::size_t i = 1; i < inner_states; ++i) ids.push_back(b.add_state("m" + std::to_string(i), Rat(weight(rng))));
  const StateId t = b.add_state("t", Rat(weight(rng)));
  b.set_init(ids.front());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<StateId> candidates(ids.begin() + static_cast<std::ptrdiff_t>(i) + 1, ids.end());
    candidates.push_back(t);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::uniform_int_distribution<int> count(1, std::min<int>(3, static_cast<int>(candidates.size())));
    candidates.resize(static_cast<std::size_t>(count(rng)));
    std::sort(candidates.begin(), candidates.end());
    auto probs = random_distribution(rng, candidates.size());
    for (std::size_t j = 0; j < candidates.size(); ++j) b.add_transition(ids[i], candidates[j], probs[j]);
  }
  b.add_transition(t, t, Rat(1));
  return b.build();
}

std::vector<StateId> ids(const PreparedModel& pm, const std::string& names) {
  std::vector<StateId> out;
  std::istringstream in(names);
  for (std::string name; in >> name;) out.push_back(pm.resolve_or_throw(name));
  return out;
}

std::vector<std::vector<StateId>> subsets(const std::vector<StateId>& pool) {
  std::vector<std::vector<StateId>> out;
  const std::size_t n = pool.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<StateId> subset;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) subset.push_back(pool[i]);
    }
    std::sort(subset.begin(), subset.end());
    out.push_back(std::move(subset));
  }
  return out;
}

Dtmc load_model(const std::string& file) { return load_dtmc(std::string(PCAUSE_MODELS_DIR) + "/" + file); }

}  // namespace pcause::fixtures
