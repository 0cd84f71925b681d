// Two-player zero-sum stopping games.
//
// Player 1 maximizes, Player 2 minimizes. If Player 1 stops first the payoff
// is X at Player 1's stopping time, if Player 2 stops first it is Y at Player
// 2's stopping time, and on a tie it is Z at the common time.
//
// Fixing one player's distribution stopping time turns the game into a
// single-agent stopping problem on the lifted space Omega x grid, whose atom
// (omega, s) carries the opponent's mass delta({omega} x {t_s}) and whose
// filtration at level j is {A x grid : A in F_{t_j}}.
#pragma once

#include "stoptime/conversions.hpp"
#include "stoptime/problems.hpp"
#include "stoptime/rational.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stoptime {

struct StoppingGame {
  FilteredSpace space;
  Process x;  // Player 1 stops first
  Process y;  // Player 2 stops first
  Process z;  // simultaneous stop

  StoppingGame(FilteredSpace s, Process x_, Process y_, Process z_)
      : space(std::move(s)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
    for (const Process* p : {&x, &y, &z})
      if (!has_shape(space, p->values))
        throw ValidationError({{ViolationKind::ShapeMismatch, {}, {}, "game process is not outcomes x grid"}});
  }

  StoppingGame negated() const {
    auto neg = [](Process p) {
      for (std::size_t i = 0; i < p.values.rows(); ++i)
        for (std::size_t j = 0; j < p.values.cols(); ++j) p(i, j) = -p(i, j);
      return p;
    };
    return {space, neg(x), neg(y), neg(z)};
  }
};

// Whose stopping time the lifted problem optimizes over.
enum class Perspective { Player1, Player2 };

struct LiftedProblem {
  Perspective perspective;
  std::size_t base_outcomes;
  std::size_t base_times;
  DistributionST opponent;
  StoppingProblem problem;  // lifted space and lifted reward

  std::size_t atom(std::size_t omega, std::size_t s) const { return omega * base_times + s; }
  const FilteredSpace& space() const noexcept { return problem.space; }
};

namespace detail {

// Payoff when the lifted player stops at index t and the opponent at s.
inline const Rational& game_reward(const StoppingGame& g, Perspective who, std::size_t i,
                                   std::size_t t, std::size_t s) {
  if (t == s) return g.z(i, t);
  if (who == Perspective::Player1) return t < s ? g.x(i, t) : g.y(i, s);
  return t < s ? g.y(i, t) : g.x(i, s);
}

inline FilteredSpace lifted_space(const FilteredSpace& base, const DistributionST& opponent) {
  const std::size_t n = base.num_outcomes(), T = base.num_times();
  std::vector<std::string> labels;
  std::vector<Rational> probs;
  labels.reserve(n * T);
  probs.reserve(n * T);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < T; ++s) {
      labels.push_back(base.labels()[i] + "@" + std::to_string(s));
      probs.push_back(opponent.mass(i, s));
    }
  std::vector<Partition> partitions;
  partitions.reserve(T);
  for (std::size_t j = 0; j < T; ++j) {
    Partition p;
    for (const auto& block : base.partition(j)) {
      std::vector<std::size_t> lifted;
      for (std::size_t i : block)
        for (std::size_t s = 0; s < T; ++s) lifted.push_back(i * T + s);
      p.push_back(std::move(lifted));
    }
    partitions.push_back(std::move(p));
  }
  return FilteredSpace::from_trusted(std::move(labels), std::move(probs), base.grid(),
                                     std::move(partitions));
}

}  // namespace detail

inline LiftedProblem lift(const StoppingGame& game, const DistributionST& opponent,
                          Perspective who = Perspective::Player1) {
  require_valid(validate_distribution(game.space, opponent));
  const std::size_t n = game.space.num_outcomes(), T = game.space.num_times();
  FilteredSpace space = detail::lifted_space(game.space, opponent);
  Process reward{Table(n * T, T)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < T; ++s)
      for (std::size_t t = 0; t < T; ++t) reward(i * T + s, t) = detail::game_reward(game, who, i, t, s);
  return {who, n, T, opponent, StoppingProblem(std::move(space), std::move(reward))};
}

// Lifted stopping times ignore the opponent coordinate s.

inline PureST lift_pure(const LiftedProblem& lp, const PureST& sigma) {
  PureST out;
  for (std::size_t i = 0; i < lp.base_outcomes; ++i)
    for (std::size_t s = 0; s < lp.base_times; ++s) out.stop.push_back(sigma.stop.at(i));
  return out;
}

inline MixedST lift_mixed(const LiftedProblem& lp, const MixedST& mu) {
  MixedST out;
  out.sections.reserve(lp.base_outcomes * lp.base_times);
  for (std::size_t i = 0; i < lp.base_outcomes; ++i)
    for (std::size_t s = 0; s < lp.base_times; ++s) out.sections.push_back(mu.sections.at(i));
  return out;
}

inline RandomizedST lift_randomized(const LiftedProblem& lp, const RandomizedST& rho) {
  RandomizedST out{Table(lp.base_outcomes * lp.base_times, lp.base_times)};
  for (std::size_t i = 0; i < lp.base_outcomes; ++i)
    for (std::size_t s = 0; s < lp.base_times; ++s)
      for (std::size_t t = 0; t < lp.base_times; ++t) out.paths(lp.atom(i, s), t) = rho.paths(i, t);
  return out;
}

// Lift of a distribution stopping time: conditionally on omega the two
// players' times are independent, so the lifted mass of ((omega, s), t) is
// opponent(omega, s) * delta(omega, t) / P(omega).
inline DistributionST lift_distribution(const FilteredSpace& base, const LiftedProblem& lp,
                                        const DistributionST& delta) {
  require_valid(validate_distribution(base, delta));
  DistributionST out{Table(lp.base_outcomes * lp.base_times, lp.base_times)};
  for (std::size_t i = 0; i < lp.base_outcomes; ++i)
    for (std::size_t s = 0; s < lp.base_times; ++s)
      for (std::size_t t = 0; t < lp.base_times; ++t)
        out.mass(lp.atom(i, s), t) = lp.opponent.mass(i, s) * delta.mass(i, t) / base.prob(i);
  return out;
}

inline StoppingTime lift_stopping_time(const FilteredSpace& base, const LiftedProblem& lp,
                                       const StoppingTime& tau) {
  if (!shape_matches(base, tau)) throw IncompatibleSpaces("stopping time does not match the base space");
  return std::visit(
      [&](const auto& x) -> StoppingTime {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PureST>) return lift_pure(lp, x);
        else if constexpr (std::is_same_v<T, MixedST>) return lift_mixed(lp, x);
        else if constexpr (std::is_same_v<T, RandomizedST>) return lift_randomized(lp, x);
        else return lift_distribution(base, lp, x);
      },
      tau);
}

// Player 1 plays tau against Player 2's distribution stopping time: the
// single-agent payoff of the lifted tau on the lifted problem.
inline Rational game_payoff_via_lift(const StoppingGame& game, const StoppingTime& tau1,
                                     const DistributionST& delta2) {
  const LiftedProblem lp = lift(game, delta2, Perspective::Player1);
  return payoff(lp.problem, lift_stopping_time(game.space, lp, tau1));
}

// Same game evaluated from Player 2's side: lift over Player 1's delta and
// evaluate Player 2's lifted stopping time.
inline Rational game_payoff_player2_view(const StoppingGame& game, const DistributionST& delta1,
                                         const StoppingTime& tau2) {
  const LiftedProblem lp = lift(game, delta1, Perspective::Player2);
  return payoff(lp.problem, lift_stopping_time(game.space, lp, tau2));
}

// E_{P x lambda x lambda} of the first-stop payoff, with r1 and r2 the two
// players' independent randomizers. Summed over pairs of r-pieces.
inline Rational game_payoff_symmetric(const StoppingGame& game, const MixedST& mu1, const MixedST& mu2) {
  require_valid(validate_mixed(game.space, mu1));
  require_valid(validate_mixed(game.space, mu2));
  Rational total = 0;
  for (std::size_t i = 0; i < game.space.num_outcomes(); ++i) {
    const auto& a = mu1.sections[i];
    const auto& b = mu2.sections[i];
    Rational inner = 0;
    for (std::size_t p = 0; p < a.pieces(); ++p)
      for (std::size_t q = 0; q < b.pieces(); ++q) {
        const std::size_t t1 = a.values()[p], t2 = b.values()[q];
        const Rational& value = t1 < t2 ? game.x(i, t1) : t1 > t2 ? game.y(i, t2) : game.z(i, t1);
        inner += a.length(p) * b.length(q) * value;
      }
    total += game.space.prob(i) * inner;
  }
  return total;
}

}  // namespace stoptime
