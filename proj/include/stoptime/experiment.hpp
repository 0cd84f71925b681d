// Fuzzed property campaign plus Monte Carlo law checks, reported as CSV.
#pragma once

#include "stoptime/conversions.hpp"
#include "stoptime/fixtures.hpp"
#include "stoptime/fuzz.hpp"
#include "stoptime/games.hpp"
#include "stoptime/problems.hpp"
#include "stoptime/rng.hpp"
#include "stoptime/sampling.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace stoptime {

struct ExperimentConfig {
  std::uint64_t seed = 7;
  std::size_t n_samples = 100000;
  std::size_t n_instances = 200;
  Bounds bounds;
  double tv_tolerance = 0.01;
  std::size_t threads = 1;
  bool monte_carlo = true;

  void check() const {
    bounds.check();
    if (n_samples < 1 || n_instances < 1) throw std::invalid_argument("sample and instance counts must be >= 1");
    if (!(tv_tolerance > 0)) throw std::invalid_argument("tv tolerance must be > 0");
  }
};

// Conversions under test. Replaceable so the harness can be checked against
// a deliberately broken implementation.
struct ConversionHooks {
  std::function<RandomizedST(const FilteredSpace&, const DistributionST&)> randomized_of_distribution =
      [](const FilteredSpace& s, const DistributionST& d) { return stoptime::randomized_of_distribution(s, d); };
  std::function<MixedST(const FilteredSpace&, const RandomizedST&)> mixed_of_randomized =
      [](const FilteredSpace& s, const RandomizedST& r) { return stoptime::mixed_of_randomized(s, r); };
};

struct CheckRow {
  std::string instance;
  std::string check;
  bool passed;
  std::string witness;
};

struct ExperimentReport {
  std::vector<CheckRow> rows;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.passed; }));
  }
  bool ok() const { return failures() == 0; }

  // Every row of the named check passed (and there was at least one).
  bool passed(const std::string& check) const {
    bool any = false;
    for (const auto& r : rows)
      if (r.check == check) {
        if (!r.passed) return false;
        any = true;
      }
    return any;
  }

  std::string csv() const {
    std::ostringstream os;
    os << "instance,check,status,witness\n";
    for (const auto& r : rows)
      os << r.instance << ',' << r.check << ',' << (r.passed ? "pass" : "fail") << ',' << quote(r.witness) << '\n';
    return os.str();
  }

  nlohmann::json summary() const {
    nlohmann::json by_check = nlohmann::json::object();
    for (const auto& r : rows) {
      auto& entry = by_check[r.check];
      if (entry.is_null()) entry = {{"pass", 0}, {"fail", 0}};
      entry[r.passed ? "pass" : "fail"] = entry[r.passed ? "pass" : "fail"].get<int>() + 1;
    }
    return {{"rows", rows.size()}, {"failures", failures()}, {"ok", ok()}, {"checks", by_check}};
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c == '\n' ? ' ' : c;
    }
    return out + '"';
  }
};

namespace detail {

inline std::string describe(const MassDifference& d) {
  return "(" + std::to_string(d.outcome) + "," + std::to_string(d.level) + "): " + to_string(d.first) +
         " vs " + to_string(d.second);
}

template <typename T>
std::optional<std::string> table_difference(const Table& a, const Table& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return "shape differs";
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j))
        return "(" + std::to_string(i) + "," + std::to_string(j) + "): " + to_string(a(i, j)) + " vs " +
               to_string(b(i, j));
  return std::nullopt;
}

inline std::vector<std::pair<std::size_t, std::vector<std::size_t>>> violation_sites(const Report& r) {
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> out;
  for (const auto& v : r) out.emplace_back(v.level.value_or(SIZE_MAX), v.outcomes);
  std::sort(out.begin(), out.end());
  return out;
}

// Both mixed validators flag exactly the same (level, block) sites.
inline std::optional<std::string> validators_disagree(const FilteredSpace& space, const MixedST& mu) {
  const auto a = violation_sites(check_mixed_sectionwise(space, mu));
  const auto b = violation_sites(check_mixed_product(space, mu));
  if (a == b) return std::nullopt;
  return "section-wise flags " + std::to_string(a.size()) + " sites, product test flags " +
         std::to_string(b.size());
}

class InstanceChecks {
 public:
  InstanceChecks(std::string id, const Instance& inst, const ConversionHooks& hooks, std::uint64_t mutate_seed)
      : id_(std::move(id)), inst_(inst), hooks_(hooks), mutate_seed_(mutate_seed) {}

  std::vector<CheckRow> run() {
    check("validators", [&] { return validators(); });
    check("mixed_validator_agreement", [&] { return validator_agreement(); });
    check("randomized_to_mixed", [&] { return randomized_to_mixed(); });
    check("distribution_roundtrip", [&] { return distribution_roundtrip(); });
    check("randomized_uniqueness", [&] { return randomized_uniqueness(); });
    check("density_matches_cdf", [&] { return density_matches_cdf(); });
    check("equivalence_relation", [&] { return equivalence_relation(); });
    check("payoff_invariance", [&] { return payoff_invariance(); });
    check("lift_equivalence", [&] { return lift_equivalence(); });
    check("game_symmetric_formula", [&] { return game_symmetric_formula(); });
    check("game_perspective", [&] { return game_perspective(); });
    check("game_strategy_invariance", [&] { return game_strategy_invariance(); });
    check("game_zero_sum", [&] { return game_zero_sum(); });
    return std::move(rows_);
  }

 private:
  using Outcome = std::optional<std::string>;  // witness on failure

  template <typename F>
  void check(const char* name, F&& f) {
    Outcome witness;
    try {
      witness = f();
    } catch (const std::exception& e) {
      witness = std::string("exception: ") + e.what();
    }
    rows_.push_back({id_, name, !witness, witness.value_or("")});
  }

  const FilteredSpace& space() const { return inst_.space; }

  Outcome validators() const {
    const std::pair<const char*, StoppingTime> items[] = {
        {"pure", inst_.pure},           {"distribution", inst_.distribution},
        {"randomized", inst_.randomized}, {"mixed", inst_.mixed},
        {"mixed_canonical", inst_.mixed_canonical}, {"opponent", inst_.opponent},
        {"opponent_mixed", inst_.opponent_mixed}};
    for (const auto& [name, st] : items) {
      const Report r = validate(space(), st);
      if (!r.empty()) return std::string(name) + ": " + r.front().describe();
    }
    return std::nullopt;
  }

  Outcome validator_agreement() const {
    if (auto w = validators_disagree(space(), inst_.mixed)) return "valid: " + *w;
    SplitMix64 rng(mutate_seed_);
    if (const auto bad = mutate_invalid(rng, space(), inst_.mixed, 8)) {
      if (auto w = validators_disagree(space(), *bad)) return "mutated: " + *w;
      if (check_mixed_sectionwise(space(), *bad).empty()) return "mutated: section-wise test missed it";
    }
    return std::nullopt;
  }

  Outcome randomized_to_mixed() const {
    const MixedST mu = hooks_.mixed_of_randomized(space(), inst_.randomized);
    const auto eq = equivalent(space(), inst_.randomized, mu);
    if (!eq) return "not equivalent at " + describe(*eq.witness);
    for (std::size_t i = 0; i < space().num_outcomes(); ++i)
      for (std::size_t j = 0; j < space().num_times(); ++j)
        if (cdf_of_mixed(space(), mu, i, j) != inst_.randomized.paths(i, j))
          return "cdf differs at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    return std::nullopt;
  }

  Outcome distribution_roundtrip() const {
    const RandomizedST rho = hooks_.randomized_of_distribution(space(), inst_.distribution);
    if (auto d = first_difference(delta_of_randomized(space(), rho), inst_.distribution)) return describe(*d);
    return std::nullopt;
  }

  Outcome randomized_uniqueness() const {
    // A second randomized time reached through the rearranged mixed time.
    const RandomizedST other = hooks_.randomized_of_distribution(space(), delta_of_mixed(space(), inst_.mixed));
    const bool same_delta =
        delta_of_randomized(space(), other) == delta_of_randomized(space(), inst_.randomized);
    if (!same_delta) return std::string("induced distributions differ");
    if (auto d = table_difference<Rational>(other.paths, inst_.randomized.paths)) return "paths differ " + *d;
    return std::nullopt;
  }

  Outcome density_matches_cdf() const {
    for (const MixedST* mu : {&inst_.mixed, &inst_.mixed_canonical}) {
      const DistributionST delta = delta_of_mixed(space(), *mu);
      if (const Report r = validate_distribution(space(), delta); !r.empty()) return r.front().describe();
      for (std::size_t j = 0; j < space().num_times(); ++j) {
        const auto density = rn_derivative(space(), delta, j);
        for (std::size_t i = 0; i < space().num_outcomes(); ++i)
          if (density[i] != cdf_of_mixed(space(), *mu, i, j))
            return "density differs at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
    return std::nullopt;
  }

  Outcome equivalence_relation() const {
    const std::vector<StoppingTime> items{inst_.mixed,  inst_.mixed_canonical, inst_.randomized,
                                          inst_.distribution, inst_.pure, inst_.opponent,
                                          inst_.opponent_mixed};
    const std::size_t k = items.size();
    std::vector<std::vector<bool>> eq(k, std::vector<bool>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) eq[a][b] = equivalent(space(), items[a], items[b]).equivalent;
    for (std::size_t a = 0; a < k; ++a) {
      if (!eq[a][a]) return "not reflexive at " + std::to_string(a);
      for (std::size_t b = 0; b < k; ++b) {
        if (eq[a][b] != eq[b][a]) return "not symmetric at " + std::to_string(a) + "," + std::to_string(b);
        for (std::size_t c = 0; c < k; ++c)
          if (eq[a][b] && eq[b][c] && !eq[a][c])
            return "not transitive at " + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
      }
    }
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        if (!eq[a][b]) return "representations of one class differ at " + std::to_string(a) + "," + std::to_string(b);
    if (!eq[5][6]) return std::string("opponent representations differ");
    return std::nullopt;
  }

  Outcome payoff_invariance() const {
    const StoppingProblem problem(space(), inst_.reward);
    const Rational ref = payoff_distribution(problem, inst_.distribution);
    const Rational routes[] = {payoff_mixed(problem, inst_.mixed), payoff_mixed(problem, inst_.mixed_canonical),
                               payoff_randomized(problem, inst_.randomized),
                               payoff_distribution(problem, delta_of_mixed(problem.space, inst_.mixed))};
    for (const auto& v : routes)
      if (v != ref) return "payoff " + to_string(v) + " vs " + to_string(ref);

    const Rational pure = payoff_pure(problem, inst_.pure);
    const MixedST embedded = embed_pure(inst_.pure);
    if (payoff_mixed(problem, embedded) != pure ||
        payoff_distribution(problem, delta_of_mixed(problem.space, embedded)) != pure ||
        payoff_randomized(problem, randomized_of_distribution(problem.space, delta_of_mixed(problem.space, embedded))) !=
            pure)
      return "pure routes disagree, pure payoff " + to_string(pure);
    return std::nullopt;
  }

  Outcome lift_equivalence() const {
    const LiftedProblem lp = lift(inst_.game, inst_.opponent);
    const StoppingTime lifted[] = {lift_mixed(lp, inst_.mixed), lift_mixed(lp, inst_.mixed_canonical),
                                   lift_randomized(lp, inst_.randomized),
                                   lift_distribution(space(), lp, inst_.distribution)};
    for (const auto& st : lifted)
      if (const Report r = validate(lp.space(), st); !r.empty()) return "lifted time invalid: " + r.front().describe();
    for (std::size_t a = 1; a < 4; ++a)
      if (const auto eq = equivalent(lp.space(), lifted[0], lifted[a]); !eq)
        return "lifted pair " + std::to_string(a) + " differs at " + describe(*eq.witness);
    return std::nullopt;
  }

  Outcome game_symmetric_formula() const {
    const Rational via_lift =
        game_payoff_via_lift(inst_.game, inst_.mixed, delta_of_mixed(space(), inst_.opponent_mixed));
    const Rational symmetric = game_payoff_symmetric(inst_.game, inst_.mixed, inst_.opponent_mixed);
    if (via_lift != symmetric) return "lift " + to_string(via_lift) + " vs symmetric " + to_string(symmetric);
    return std::nullopt;
  }

  Outcome game_perspective() const {
    const Rational p2 =
        game_payoff_player2_view(inst_.game, delta_of_mixed(space(), inst_.mixed), inst_.opponent_mixed);
    const Rational symmetric = game_payoff_symmetric(inst_.game, inst_.mixed, inst_.opponent_mixed);
    if (p2 != symmetric) return "player 2 view " + to_string(p2) + " vs symmetric " + to_string(symmetric);
    return std::nullopt;
  }

  Outcome game_strategy_invariance() const {
    const Rational ref = game_payoff_via_lift(inst_.game, inst_.mixed, inst_.opponent);
    const StoppingTime player1[] = {inst_.mixed_canonical, inst_.randomized, inst_.distribution};
    for (const auto& tau : player1)
      if (const Rational v = game_payoff_via_lift(inst_.game, tau, inst_.opponent); v != ref)
        return std::string(kind_name(tau)) + " route " + to_string(v) + " vs " + to_string(ref);
    const DistributionST via_mixed = delta_of_mixed(space(), inst_.opponent_mixed);
    const DistributionST via_randomized =
        delta_of_randomized(space(), randomized_of_distribution(space(), inst_.opponent));
    for (const auto* d : {&via_mixed, &via_randomized})
      if (const Rational v = game_payoff_via_lift(inst_.game, inst_.mixed, *d); v != ref)
        return "opponent representation changes payoff: " + to_string(v) + " vs " + to_string(ref);
    return std::nullopt;
  }

  Outcome game_zero_sum() const {
    const Rational v = game_payoff_symmetric(inst_.game, inst_.mixed, inst_.opponent_mixed);
    const Rational w = game_payoff_symmetric(inst_.game.negated(), inst_.mixed, inst_.opponent_mixed);
    if (w != -v) return "negated game gives " + to_string(w) + ", expected " + to_string(-v);
    return std::nullopt;
  }

  std::string id_;
  const Instance& inst_;
  const ConversionHooks& hooks_;
  std::uint64_t mutate_seed_;
  std::vector<CheckRow> rows_;
};

}  // namespace detail

// Result of sampling one stopping time of the two-outcome example.
struct LawCheck {
  std::string name;
  double tv;
  bool passed;
};

// Samples the split mixed time, the equivalent randomized time, and the
// uniform distribution time on the two-outcome space, and compares each
// empirical law with the uniform distribution.
inline std::vector<LawCheck> two_outcome_law_checks(std::uint64_t seed, std::size_t n, double tolerance) {
  const FilteredSpace space = fixtures::two_outcome_space();
  const DistributionST reference = fixtures::uniform_distribution();
  const std::pair<const char*, StoppingTime> items[] = {{"mixed", fixtures::split_mixed()},
                                                        {"randomized", fixtures::half_randomized()},
                                                        {"distribution", reference}};
  std::vector<LawCheck> out;
  for (std::size_t k = 0; k < std::size(items); ++k) {
    const auto samples = Sampler(space, items[k].second).draw_many(n, SplitMix64::stream(seed, k).next());
    const double tv = total_variation(empirical_delta(space, samples), reference);
    out.push_back({items[k].first, tv, tv <= tolerance});
  }
  return out;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config, const ConversionHooks& hooks = {}) {
  config.check();
  std::vector<std::vector<CheckRow>> per_instance(config.n_instances);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < config.n_instances;) {
      SplitMix64 rng = SplitMix64::stream(config.seed, 2 * k);
      const std::uint64_t mutate_seed = SplitMix64::stream(config.seed, 2 * k + 1).next();
      try {
        const Instance inst = random_instance(rng, config.bounds);
        per_instance[k] = detail::InstanceChecks(std::to_string(k), inst, hooks, mutate_seed).run();
      } catch (const std::exception& e) {
        per_instance[k] = {{std::to_string(k), "generate", false, e.what()}};
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, config.n_instances));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  ExperimentReport report;
  for (auto& rows : per_instance)
    for (auto& r : rows) report.rows.push_back(std::move(r));
  if (config.monte_carlo) {
    for (const auto& c : two_outcome_law_checks(config.seed, config.n_samples, config.tv_tolerance)) {
      std::ostringstream tv;
      tv.precision(6);
      tv << "tv=" << std::fixed << c.tv;
      report.rows.push_back({"mc", "sampling_law_" + c.name, c.passed, tv.str()});
    }
  }
  return report;
}

}  // namespace stoptime
