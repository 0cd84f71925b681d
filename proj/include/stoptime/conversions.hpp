// Constructive maps between stopping-time representations, and the
// equivalence relation "induces the same distribution stopping time".
#pragma once

#include "stoptime/rational.hpp"
#include "stoptime/report.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stoptime {

class IncompatibleSpaces : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Push-forward of P x lambda under (omega, r) -> (omega, mu(omega, r)).
inline DistributionST delta_of_mixed(const FilteredSpace& space, const MixedST& mu) {
  require_valid(validate_mixed(space, mu));
  DistributionST delta{Table(space.num_outcomes(), space.num_times())};
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    const auto& section = mu.sections[i];
    for (std::size_t p = 0; p < section.pieces(); ++p)
      delta.mass(i, section.values()[p]) += space.prob(i) * section.length(p);
  }
  return delta;
}

// delta({omega} x {t_j}) = P(omega) (rho_{t_j} - rho_{t_{j-1}}), rho_{t_{-1}} = 0.
inline DistributionST delta_of_randomized(const FilteredSpace& space, const RandomizedST& rho) {
  require_valid(validate_randomized(space, rho));
  DistributionST delta{Table(space.num_outcomes(), space.num_times())};
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    Rational prev = 0;
    for (std::size_t j = 0; j < space.num_times(); ++j) {
      delta.mass(i, j) = space.prob(i) * (rho.paths(i, j) - prev);
      prev = rho.paths(i, j);
    }
  }
  return delta;
}

// rho_{t_j}(omega) = nu_omega([0, t_j]), the conditional c.d.f. of delta given omega.
inline RandomizedST randomized_of_distribution(const FilteredSpace& space, const DistributionST& delta) {
  require_valid(validate_distribution(space, delta));
  RandomizedST rho{Table(space.num_outcomes(), space.num_times())};
  for (std::size_t j = 0; j < space.num_times(); ++j) {
    const auto density = rn_derivative(space, delta, j);
    for (std::size_t i = 0; i < space.num_outcomes(); ++i) rho.paths(i, j) = density[i];
  }
  return rho;
}

// Generalized inverse of a path: min{ j : path[j] >= r }.
inline std::size_t first_index_reaching(std::span<const Rational> path, const Rational& r) {
  for (std::size_t j = 0; j < path.size(); ++j)
    if (path[j] >= r) return j;
  return path.size() - 1;
}
inline std::size_t first_index_reaching(std::span<const Rational> path, double r) {
  for (std::size_t j = 0; j < path.size(); ++j)
    if (to_double(path[j]) >= r) return j;
  return path.size() - 1;
}

// mu(omega, r) = min{ t_j : rho_{t_j}(omega) >= r }. Index j occupies the
// r-interval between rho_{t_{j-1}} and rho_{t_j}; intervals of zero length
// (flat stretches of the path) are dropped.
inline MixedST mixed_of_randomized(const FilteredSpace& space, const RandomizedST& rho) {
  require_valid(validate_randomized(space, rho));
  MixedST mu;
  mu.sections.reserve(space.num_outcomes());
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    std::vector<Rational> breaks{0};
    std::vector<std::size_t> values;
    for (std::size_t j = 0; j < space.num_times(); ++j) {
      if (rho.paths(i, j) > breaks.back()) {
        values.push_back(j);
        breaks.push_back(rho.paths(i, j));
      }
    }
    mu.sections.push_back(RStepFunction::make(std::move(breaks), std::move(values)));
  }
  return mu;
}

inline MixedST mixed_of_distribution(const FilteredSpace& space, const DistributionST& delta) {
  return mixed_of_randomized(space, randomized_of_distribution(space, delta));
}

// f_{t_j}(omega) = lambda({r : mu(omega, r) <= t_j}).
inline Rational cdf_of_mixed(const FilteredSpace& space, const MixedST& mu, std::size_t i, std::size_t j) {
  if (i >= mu.sections.size() || i >= space.num_outcomes() || j >= space.num_times())
    throw IndexOutOfRange("cdf_of_mixed: index out of range");
  return mu.sections[i].mass_up_to(j);
}

inline bool shape_matches(const FilteredSpace& space, const StoppingTime& st) {
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PureST>) return x.stop.size() == space.num_outcomes();
        else if constexpr (std::is_same_v<T, MixedST>) return x.sections.size() == space.num_outcomes();
        else if constexpr (std::is_same_v<T, RandomizedST>) return has_shape(space, x.paths);
        else return has_shape(space, x.mass);
      },
      st);
}

// The distribution stopping time a representation induces. Pure stopping
// times enter through the constant-in-r embedding.
inline DistributionST to_distribution(const FilteredSpace& space, const StoppingTime& st) {
  return std::visit(
      [&](const auto& x) -> DistributionST {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PureST>) {
          require_valid(validate_pure(space, x));
          return delta_of_mixed(space, embed_pure(x));
        } else if constexpr (std::is_same_v<T, MixedST>) {
          return delta_of_mixed(space, x);
        } else if constexpr (std::is_same_v<T, RandomizedST>) {
          return delta_of_randomized(space, x);
        } else {
          require_valid(validate_distribution(space, x));
          return x;
        }
      },
      st);
}

inline RandomizedST to_randomized(const FilteredSpace& space, const StoppingTime& st) {
  if (const auto* rho = std::get_if<RandomizedST>(&st)) {
    require_valid(validate_randomized(space, *rho));
    return *rho;
  }
  return randomized_of_distribution(space, to_distribution(space, st));
}

inline MixedST to_mixed(const FilteredSpace& space, const StoppingTime& st) {
  if (const auto* sigma = std::get_if<PureST>(&st)) {
    require_valid(validate_pure(space, *sigma));
    return embed_pure(*sigma);
  }
  if (const auto* mu = std::get_if<MixedST>(&st)) {
    require_valid(validate_mixed(space, *mu));
    return *mu;
  }
  return mixed_of_randomized(space, to_randomized(space, st));
}

// First atom on which two distribution stopping times differ.
struct MassDifference {
  std::size_t outcome;
  std::size_t level;
  Rational first;
  Rational second;
};

struct Equivalence {
  bool equivalent = false;
  std::optional<MassDifference> witness;

  explicit operator bool() const noexcept { return equivalent; }
};

inline std::optional<MassDifference> first_difference(const DistributionST& a, const DistributionST& b) {
  for (std::size_t i = 0; i < a.mass.rows(); ++i)
    for (std::size_t j = 0; j < a.mass.cols(); ++j)
      if (a.mass(i, j) != b.mass(i, j)) return MassDifference{i, j, a.mass(i, j), b.mass(i, j)};
  return std::nullopt;
}

// rho_{t_j}(omega) == lambda({r : mu(omega, r) <= t_j}) on every non-null atom.
inline bool cdf_criterion(const FilteredSpace& space, const MixedST& mu, const RandomizedST& rho) {
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    if (space.is_null(i)) continue;
    for (std::size_t j = 0; j < space.num_times(); ++j)
      if (rho.paths(i, j) != mu.sections[i].mass_up_to(j)) return false;
  }
  return true;
}

// Equal induced distribution stopping times. For a mixed/randomized pair
// the c.d.f. criterion is evaluated as well, and disagreement between the two
// routes is a logic error.
inline Equivalence equivalent(const FilteredSpace& space, const StoppingTime& a, const StoppingTime& b) {
  if (!shape_matches(space, a) || !shape_matches(space, b))
    throw IncompatibleSpaces("stopping times do not match the space's outcomes x grid shape");
  const DistributionST da = to_distribution(space, a);
  const DistributionST db = to_distribution(space, b);
  Equivalence result;
  result.witness = first_difference(da, db);
  result.equivalent = !result.witness;

  const MixedST* mu = std::get_if<MixedST>(&a);
  const RandomizedST* rho = std::get_if<RandomizedST>(&b);
  if (!mu || !rho) {
    mu = std::get_if<MixedST>(&b);
    rho = std::get_if<RandomizedST>(&a);
  }
  if (mu && rho && cdf_criterion(space, *mu, *rho) != result.equivalent)
    throw std::logic_error("equivalence routes disagree (distribution vs c.d.f. criterion)");
  return result;
}

}  // namespace stoptime
