// The four representations of a (random) stopping time on a FilteredSpace,
// with their validators.
//
// All stopping times take values on the grid and are stored by grid index.
//   PureST          sigma(omega)
//   MixedST         mu(omega, r), a step function of the randomizer r in [0,1]
//   RandomizedST    rho_{t_j}(omega), cumulative stopping probability
//   DistributionST  delta({omega} x {t_j}), a joint mass with marginal P
#pragma once

#include "stoptime/rational.hpp"
#include "stoptime/report.hpp"
#include "stoptime/space.hpp"

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace stoptime {

struct PureST {
  std::vector<std::size_t> stop;  // grid index per outcome

  friend bool operator==(const PureST&, const PureST&) = default;
};

// Piecewise-constant map [0,1] -> grid index. Piece p covers the half-open
// interval [breaks[p], breaks[p+1]); the point r = 1 belongs to the last
// piece. Adjacent pieces always carry different values (canonical form), so
// structural equality implies equality everywhere.
class RStepFunction {
 public:
  static Report check(const std::vector<Rational>& breaks, const std::vector<std::size_t>& values) {
    Report report;
    auto bad = [&](std::string detail) {
      report.push_back({ViolationKind::MalformedSection, {}, {}, std::move(detail)});
    };
    if (values.empty()) bad("no pieces");
    if (breaks.size() != values.size() + 1) bad("need exactly one more break than values");
    if (breaks.empty()) return report;
    if (breaks.front() != 0) bad("first break must be 0");
    if (breaks.back() != 1) bad("last break must be 1");
    for (std::size_t p = 1; p < breaks.size(); ++p)
      if (breaks[p] <= breaks[p - 1]) bad("breaks not strictly increasing");
    return report;
  }

  static RStepFunction make(std::vector<Rational> breaks, std::vector<std::size_t> values) {
    require_valid(check(breaks, values));
    RStepFunction f;
    f.breaks_.push_back(breaks.front());
    for (std::size_t p = 0; p < values.size(); ++p) {
      if (!f.values_.empty() && f.values_.back() == values[p]) {
        f.breaks_.back() = breaks[p + 1];
      } else {
        f.values_.push_back(values[p]);
        f.breaks_.push_back(breaks[p + 1]);
      }
    }
    return f;
  }

  static RStepFunction constant(std::size_t index) { return make({0, 1}, {index}); }

  const std::vector<Rational>& breaks() const noexcept { return breaks_; }
  const std::vector<std::size_t>& values() const noexcept { return values_; }
  std::size_t pieces() const noexcept { return values_.size(); }
  Rational length(std::size_t p) const { return breaks_[p + 1] - breaks_[p]; }
  std::size_t max_value() const { return *std::max_element(values_.begin(), values_.end()); }

  // Value of the piece containing r (r = 1 maps to the last piece).
  std::size_t at(const Rational& r) const {
    const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, r);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
  }
  std::size_t at(double r) const {
    std::size_t p = 0;
    while (p + 1 < values_.size() && to_double(breaks_[p + 1]) <= r) ++p;
    return values_[p];
  }

  // lambda({r : value(r) == j})
  Rational mass_at(std::size_t j) const {
    Rational m = 0;
    for (std::size_t p = 0; p < values_.size(); ++p)
      if (values_[p] == j) m += length(p);
    return m;
  }
  // lambda({r : value(r) <= j})
  Rational mass_up_to(std::size_t j) const {
    Rational m = 0;
    for (std::size_t p = 0; p < values_.size(); ++p)
      if (values_[p] <= j) m += length(p);
    return m;
  }

  friend bool operator==(const RStepFunction&, const RStepFunction&) = default;

 private:
  RStepFunction() = default;

  std::vector<Rational> breaks_;
  std::vector<std::size_t> values_;
};

// lambda of the set of r where pred(f(r), g(r)) holds, computed on the
// common refinement of both break sequences.
template <typename Pred>
Rational measure_where(const RStepFunction& f, const RStepFunction& g, Pred&& pred) {
  Rational total = 0;
  std::size_t a = 0, b = 0;
  Rational left = 0;
  while (a < f.pieces() && b < g.pieces()) {
    const Rational& right = std::min(f.breaks()[a + 1], g.breaks()[b + 1]);
    if (pred(f.values()[a], g.values()[b])) total += right - left;
    left = right;
    if (f.breaks()[a + 1] == right) ++a;
    if (g.breaks()[b + 1] == right) ++b;
  }
  return total;
}

struct MixedST {
  std::vector<RStepFunction> sections;  // one per outcome

  friend bool operator==(const MixedST&, const MixedST&) = default;
};

struct RandomizedST {
  Table paths;  // rho_{t_j}(omega_i)

  friend bool operator==(const RandomizedST&, const RandomizedST&) = default;
};

struct DistributionST {
  Table mass;  // delta({omega_i} x {t_j})

  friend bool operator==(const DistributionST&, const DistributionST&) = default;
};

using StoppingTime = std::variant<PureST, MixedST, RandomizedST, DistributionST>;

inline std::string_view kind_name(const StoppingTime& st) {
  constexpr std::string_view names[] = {"pure", "mixed", "randomized", "distribution"};
  return names[st.index()];
}

// delta^{t_j} restricted to atoms: outcome -> delta({omega} x [0, t_j]).
struct SubMeasure {
  std::vector<Rational> mass;
};

// ---------------------------------------------------------------------------
// Validators

namespace detail {

inline void check_range(const FilteredSpace& space, std::size_t i, std::size_t value, Report& report) {
  if (value >= space.num_times())
    report.push_back({ViolationKind::IndexOutOfRange, {}, {i},
                      "grid index " + std::to_string(value) + " >= " +
                          std::to_string(space.num_times())});
}

// Records (j, block) where the event {stop <= j} splits the non-null atoms of a block.
template <typename StopAt>
void check_stop_events(const FilteredSpace& space, StopAt&& stop_at, ViolationKind kind,
                       Report& report) {
  for (std::size_t j = 0; j < space.num_times(); ++j) {
    for (const auto& block : space.partition(j)) {
      bool any_in = false, any_out = false;
      for (std::size_t i : block) {
        if (space.is_null(i)) continue;
        (stop_at(i) <= j ? any_in : any_out) = true;
      }
      if (any_in && any_out)
        report.push_back({kind, j, block, "event {stop <= t_j} splits the block"});
    }
  }
}

inline bool mixed_shape_ok(const FilteredSpace& space, const MixedST& mu, Report& report) {
  if (mu.sections.size() != space.num_outcomes()) {
    report.push_back({ViolationKind::ShapeMismatch, {}, {}, "one section per outcome required"});
    return false;
  }
  const std::size_t before = report.size();
  for (std::size_t i = 0; i < mu.sections.size(); ++i)
    for (std::size_t v : mu.sections[i].values()) check_range(space, i, v, report);
  return report.size() == before;
}

}  // namespace detail

inline Report validate_pure(const FilteredSpace& space, const PureST& sigma) {
  Report report;
  if (sigma.stop.size() != space.num_outcomes()) {
    report.push_back({ViolationKind::ShapeMismatch, {}, {}, "one stop index per outcome required"});
    return report;
  }
  for (std::size_t i = 0; i < sigma.stop.size(); ++i) detail::check_range(space, i, sigma.stop[i], report);
  if (!report.empty()) return report;
  detail::check_stop_events(space, [&](std::size_t i) { return sigma.stop[i]; },
                            ViolationKind::NotStoppingTime, report);
  return report;
}

// Section-wise test: for lambda-a.e. r, omega -> mu(omega, r) is a pure
// stopping time. Each elementary interval of the common refinement of all
// breaks has one representative (its left endpoint).
inline Report check_mixed_sectionwise(const FilteredSpace& space, const MixedST& mu) {
  Report report;
  if (!detail::mixed_shape_ok(space, mu, report)) return report;
  std::set<Rational> cuts;
  for (const auto& s : mu.sections) cuts.insert(s.breaks().begin(), s.breaks().end());
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> seen;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const Rational& r = *it;
    Report local;
    detail::check_stop_events(space, [&](std::size_t i) { return mu.sections[i].at(r); },
                              ViolationKind::NotMeasurable, local);
    for (auto& v : local) {
      if (!seen.insert({*v.level, v.outcomes}).second) continue;
      v.detail = "section at r = " + to_string(r) + " is not a pure stopping time";
      report.push_back(std::move(v));
    }
  }
  std::sort(report.begin(), report.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.level, a.outcomes) < std::tie(b.level, b.outcomes);
  });
  return report;
}

// Product-measurability test: for every level j and block B, the sets
// {r : mu(omega, r) <= j} agree up to lambda-null sets across omega in B.
inline Report check_mixed_product(const FilteredSpace& space, const MixedST& mu) {
  Report report;
  if (!detail::mixed_shape_ok(space, mu, report)) return report;
  for (std::size_t j = 0; j < space.num_times(); ++j) {
    for (const auto& block : space.partition(j)) {
      std::optional<std::size_t> ref;
      for (std::size_t i : block) {
        if (space.is_null(i)) continue;
        if (!ref) {
          ref = i;
          continue;
        }
        const Rational diff = measure_where(mu.sections[*ref], mu.sections[i],
                                            [j](std::size_t a, std::size_t b) {
                                              return (a <= j) != (b <= j);
                                            });
        if (diff != 0) {
          report.push_back({ViolationKind::NotMeasurable, j, block,
                            "lambda of symmetric difference between outcomes " +
                                std::to_string(*ref) + " and " + std::to_string(i) + " is " +
                                to_string(diff)});
          break;
        }
      }
    }
  }
  return report;
}

// Empty iff both measurability tests pass.
inline Report validate_mixed(const FilteredSpace& space, const MixedST& mu) {
  Report report = check_mixed_product(space, mu);
  if (has(report, ViolationKind::ShapeMismatch) || has(report, ViolationKind::IndexOutOfRange))
    return report;
  for (auto& v : check_mixed_sectionwise(space, mu)) {
    const bool dup = std::any_of(report.begin(), report.end(), [&](const Violation& w) {
      return w.level == v.level && w.outcomes == v.outcomes;
    });
    if (!dup) report.push_back(std::move(v));
  }
  return report;
}

inline Report validate_randomized(const FilteredSpace& space, const RandomizedST& rho) {
  Report report;
  if (!has_shape(space, rho.paths)) {
    report.push_back({ViolationKind::ShapeMismatch, {}, {}, "paths table is not outcomes x grid"});
    return report;
  }
  const std::size_t m = space.last_index();
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      const Rational& v = rho.paths(i, j);
      if (v < 0 || v > 1)
        report.push_back({ViolationKind::ValueOutOfRange, j, {i}, to_string(v) + " not in [0,1]"});
      if (j > 0 && v < rho.paths(i, j - 1))
        report.push_back({ViolationKind::NotMonotone, j, {i},
                          to_string(rho.paths(i, j - 1)) + " > " + to_string(v)});
    }
    if (rho.paths(i, m) != 1)
      report.push_back({ViolationKind::TerminalNotOne, m, {i}, to_string(rho.paths(i, m))});
  }
  detail::check_block_constant(
      space, [&](std::size_t i, std::size_t j) -> const Rational& { return rho.paths(i, j); },
      ViolationKind::NotAdapted, report);
  return report;
}

inline SubMeasure sub_measure(const FilteredSpace& space, const DistributionST& delta, std::size_t j) {
  SubMeasure out{std::vector<Rational>(space.num_outcomes(), 0)};
  for (std::size_t i = 0; i < space.num_outcomes(); ++i)
    for (std::size_t k = 0; k <= j; ++k) out.mass[i] += delta.mass(i, k);
  return out;
}

inline Report validate_distribution(const FilteredSpace& space, const DistributionST& delta) {
  Report report;
  if (!has_shape(space, delta.mass)) {
    report.push_back({ViolationKind::ShapeMismatch, {}, {}, "mass table is not outcomes x grid"});
    return report;
  }
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < space.num_times(); ++j) {
      if (delta.mass(i, j) < 0)
        report.push_back({ViolationKind::NegativeMass, j, {i}, to_string(delta.mass(i, j))});
      row += delta.mass(i, j);
    }
    if (row != space.prob(i))
      report.push_back({ViolationKind::MarginalMismatch, {}, {i},
                        "row sums to " + to_string(row) + ", P = " + to_string(space.prob(i))});
  }
  if (!report.empty()) return report;

  Table density(space.num_outcomes(), space.num_times());
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    if (space.is_null(i)) continue;
    Rational cum = 0;
    for (std::size_t j = 0; j < space.num_times(); ++j) {
      cum += delta.mass(i, j);
      density(i, j) = cum / space.prob(i);
    }
  }
  detail::check_block_constant(
      space, [&](std::size_t i, std::size_t j) -> const Rational& { return density(i, j); },
      ViolationKind::DensityNotAdapted, report);
  return report;
}

inline Report validate(const FilteredSpace& space, const StoppingTime& st) {
  return std::visit(
      [&](const auto& x) -> Report {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PureST>) return validate_pure(space, x);
        else if constexpr (std::is_same_v<T, MixedST>) return validate_mixed(space, x);
        else if constexpr (std::is_same_v<T, RandomizedST>) return validate_randomized(space, x);
        else return validate_distribution(space, x);
      },
      st);
}

// ---------------------------------------------------------------------------

// Constant-in-r embedding of a pure stopping time.
inline MixedST embed_pure(const PureST& sigma) {
  MixedST mu;
  mu.sections.reserve(sigma.stop.size());
  for (std::size_t s : sigma.stop) mu.sections.push_back(RStepFunction::constant(s));
  return mu;
}

// Density of delta^{t_j} with respect to P: delta({omega} x [0, t_j]) / P(omega).
// A null atom (lifted spaces only) has no density of its own; it takes the
// block-level ratio delta^{t_j}(B) / P(B), or 1 when B is null too, which keeps
// the result block-constant, nondecreasing in j, and equal to 1 at j = m.
inline std::vector<Rational> rn_derivative(const FilteredSpace& space, const DistributionST& delta,
                                           std::size_t j) {
  const SubMeasure sub = sub_measure(space, delta, j);
  std::vector<Rational> out(space.num_outcomes());
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    if (!space.is_null(i)) {
      out[i] = sub.mass[i] / space.prob(i);
      continue;
    }
    Rational block_sub = 0, block_p = 0;
    for (std::size_t k : atom_of(space, j, i)) {
      block_sub += sub.mass[k];
      block_p += space.prob(k);
    }
    out[i] = block_p == 0 ? Rational(1) : block_sub / block_p;
  }
  return out;
}

}  // namespace stoptime
