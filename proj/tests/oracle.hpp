// Brute-force reference computations for the unit tests.
//
// Every step function involved is constant between consecutive points of
// cuts(), the sorted union of all breaks. Evaluating at the midpoint of each
// cell and weighting by the cell length integrates over r exactly. None of
// this goes through the piece-walking code of the library.
#pragma once

#include "stoptime/games.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using stoptime::MixedST;
using stoptime::Rational;

using Cuts = std::vector<Rational>;

inline Cuts sorted_unique(Cuts c) {
  c.push_back(0);
  c.push_back(1);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

inline Cuts cuts(const std::vector<const MixedST*>& times) {
  Cuts c;
  for (const auto* mu : times)
    for (const auto& s : mu->sections)
      for (const auto& b : s.breaks()) c.push_back(b);
  return sorted_unique(std::move(c));
}

// sum over cells of length * f(mid)
inline Rational integrate(const Cuts& c, const std::function<Rational(const Rational&)>& f) {
  Rational total = 0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) total += (c[k + 1] - c[k]) * f((c[k] + c[k + 1]) / 2);
  return total;
}

// lambda({r : mu(omega, r) <= j})
inline Rational cdf(const MixedST& mu, std::size_t i, std::size_t j) {
  return integrate(cuts({&mu}), [&](const Rational& r) { return Rational(mu.sections[i].at(r) <= j ? 1 : 0); });
}

// Push-forward of P x lambda, by enumeration.
inline stoptime::DistributionST delta_of_mixed(const stoptime::FilteredSpace& space, const MixedST& mu) {
  const Cuts c = cuts({&mu});
  stoptime::DistributionST d{stoptime::Table(space.num_outcomes(), space.num_times())};
  for (std::size_t i = 0; i < space.num_outcomes(); ++i)
    for (std::size_t k = 0; k + 1 < c.size(); ++k)
      d.mass(i, mu.sections[i].at((c[k] + c[k + 1]) / 2)) += space.prob(i) * (c[k + 1] - c[k]);
  return d;
}

inline Rational payoff_mixed(const stoptime::FilteredSpace& space, const stoptime::Process& reward,
                             const MixedST& mu) {
  const Cuts c = cuts({&mu});
  Rational total = 0;
  for (std::size_t i = 0; i < space.num_outcomes(); ++i)
    total += space.prob(i) *
             integrate(c, [&](const Rational& r) { return reward(i, mu.sections[i].at(r)); });
  return total;
}

// E over (omega, r1, r2) of the first-stop payoff, by double enumeration.
inline Rational game_payoff(const stoptime::StoppingGame& g, const MixedST& mu1, const MixedST& mu2) {
  Rational total = 0;
  for (std::size_t i = 0; i < g.space.num_outcomes(); ++i) {
    Cuts c = mu1.sections[i].breaks();
    c.insert(c.end(), mu2.sections[i].breaks().begin(), mu2.sections[i].breaks().end());
    c = sorted_unique(std::move(c));
    total += g.space.prob(i) * integrate(c, [&](const Rational& r1) {
               const std::size_t t1 = mu1.sections[i].at(r1);
               return integrate(c, [&](const Rational& r2) {
                 const std::size_t t2 = mu2.sections[i].at(r2);
                 return t1 < t2 ? g.x(i, t1) : (t2 < t1 ? g.y(i, t2) : g.z(i, t1));
               });
             });
  }
  return total;
}

// lambda({r : min{ j : path[j] >= r } <= j}) evaluated cell by cell.
inline Rational generalized_inverse_cdf(const std::vector<Rational>& path, std::size_t j) {
  return integrate(sorted_unique(path), [&](const Rational& r) {
    std::size_t first = path.size() - 1;
    for (std::size_t k = 0; k < path.size(); ++k)
      if (path[k] >= r) {
        first = k;
        break;
      }
    return Rational(first <= j ? 1 : 0);
  });
}

}  // namespace oracle
