// Expected payoff of a single-agent stopping problem under each kind of
// stopping time. The reward only has to be bounded; it is not required to be
// adapted.
#pragma once

#include "stoptime/conversions.hpp"
#include "stoptime/rational.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <variant>

namespace stoptime {

struct StoppingProblem {
  FilteredSpace space;
  Process reward;

  StoppingProblem(FilteredSpace s, Process r) : space(std::move(s)), reward(std::move(r)) {
    if (!has_shape(space, reward.values))
      throw ValidationError({{ViolationKind::ShapeMismatch, {}, {}, "reward table is not outcomes x grid"}});
  }
};

// E_P[R_sigma]
inline Rational payoff_pure(const StoppingProblem& problem, const PureST& sigma) {
  require_valid(validate_pure(problem.space, sigma));
  Rational total = 0;
  for (std::size_t i = 0; i < problem.space.num_outcomes(); ++i)
    total += problem.space.prob(i) * problem.reward(i, sigma.stop[i]);
  return total;
}

// E_{P x lambda}[R_{mu(omega, r)}(omega)], summed piece by piece.
inline Rational payoff_mixed(const StoppingProblem& problem, const MixedST& mu) {
  require_valid(validate_mixed(problem.space, mu));
  Rational total = 0;
  for (std::size_t i = 0; i < problem.space.num_outcomes(); ++i) {
    const auto& section = mu.sections[i];
    Rational inner = 0;
    for (std::size_t p = 0; p < section.pieces(); ++p)
      inner += section.length(p) * problem.reward(i, section.values()[p]);
    total += problem.space.prob(i) * inner;
  }
  return total;
}

// E_P[ integral over [0,T] of R_t d rho_t ]. The path starts from 0 just
// before time 0, so the jump rho_0 at t = 0 contributes R_0 rho_0.
inline Rational payoff_randomized(const StoppingProblem& problem, const RandomizedST& rho) {
  require_valid(validate_randomized(problem.space, rho));
  Rational total = 0;
  for (std::size_t i = 0; i < problem.space.num_outcomes(); ++i) {
    Rational prev = 0, inner = 0;
    for (std::size_t j = 0; j < problem.space.num_times(); ++j) {
      inner += problem.reward(i, j) * (rho.paths(i, j) - prev);
      prev = rho.paths(i, j);
    }
    total += problem.space.prob(i) * inner;
  }
  return total;
}

// E_delta[R_t(omega)]
inline Rational payoff_distribution(const StoppingProblem& problem, const DistributionST& delta) {
  require_valid(validate_distribution(problem.space, delta));
  Rational total = 0;
  for (std::size_t i = 0; i < problem.space.num_outcomes(); ++i)
    for (std::size_t j = 0; j < problem.space.num_times(); ++j)
      total += delta.mass(i, j) * problem.reward(i, j);
  return total;
}

inline Rational payoff(const StoppingProblem& problem, const StoppingTime& st) {
  return std::visit(
      [&](const auto& x) -> Rational {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PureST>) return payoff_pure(problem, x);
        else if constexpr (std::is_same_v<T, MixedST>) return payoff_mixed(problem, x);
        else if constexpr (std::is_same_v<T, RandomizedST>) return payoff_randomized(problem, x);
        else return payoff_distribution(problem, x);
      },
      st);
}

}  // namespace stoptime
