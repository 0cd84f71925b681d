// Monte Carlo realization of random stopping times and empirical checks of
// the induced law on Omega x grid. Sampling is double precision; every exact
// check elsewhere stays rational.
#pragma once

#include "stoptime/conversions.hpp"
#include "stoptime/rng.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace stoptime {

struct SampleRecord {
  std::size_t outcome;
  std::size_t grid_index;
  std::uint64_t replicate;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

class EmptySamples : public std::invalid_argument {
 public:
  EmptySamples() : std::invalid_argument("empty sample set") {}
};

namespace detail {

// Index of the first cumulative weight exceeding u, skipping zero weights.
inline std::size_t draw_index(std::span<const double> cumulative, double u) {
  for (std::size_t k = 0; k < cumulative.size(); ++k)
    if (u < cumulative[k]) return k;
  // u landed past the rounded total: take the last index with positive weight.
  for (std::size_t k = cumulative.size(); k-- > 0;)
    if (k == 0 || cumulative[k] > cumulative[k - 1]) return k;
  return 0;
}

inline std::vector<double> cumulative(std::span<const Rational> weights, const Rational& scale) {
  std::vector<double> out;
  Rational acc = 0;
  for (const auto& w : weights) {
    acc += w;
    out.push_back(to_double(acc / scale));
  }
  return out;
}

}  // namespace detail

// Draws (omega, stop index) pairs. Outcome omega ~ P; then
//   mixed:        r ~ U[0,1), section value at r
//   randomized:   r ~ U[0,1), min{ j : rho_{t_j}(omega) >= r }
//   distribution: j ~ delta(omega, .) / P(omega)
//   pure:         sigma(omega)
// All four procedures target the law of the induced distribution stopping time.
class Sampler {
 public:
  Sampler(const FilteredSpace& space, StoppingTime st) : st_(std::move(st)) {
    require_valid(validate(space, st_));
    outcome_cdf_ = detail::cumulative(space.probs(), Rational(1));
    const std::size_t n = space.num_outcomes();
    if (const auto* rho = std::get_if<RandomizedST>(&st_)) {
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> path;
        for (const auto& v : rho->paths.row(i)) path.push_back(to_double(v));
        rows_.push_back(std::move(path));
      }
    } else if (const auto* delta = std::get_if<DistributionST>(&st_)) {
      for (std::size_t i = 0; i < n; ++i) rows_.push_back(detail::cumulative(delta->mass.row(i), space.prob(i)));
    }
  }

  SampleRecord draw(SplitMix64& rng, std::uint64_t replicate = 0) const {
    const std::size_t omega = detail::draw_index(outcome_cdf_, rng.uniform01());
    return {omega, stop_index(omega, rng.uniform01()), replicate};
  }

  // Stop index for outcome omega and randomizer value r in [0,1).
  std::size_t stop_index(std::size_t omega, double r) const {
    switch (st_.index()) {
      case 0: return std::get<PureST>(st_).stop[omega];
      case 1: return std::get<MixedST>(st_).sections[omega].at(r);
      case 2: return first_reaching(rows_[omega], r);
      default: return detail::draw_index(rows_[omega], r);
    }
  }

  // n draws; replicate k uses stream k of `seed`.
  std::vector<SampleRecord> draw_many(std::size_t n, std::uint64_t seed) const {
    std::vector<SampleRecord> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      SplitMix64 rng = SplitMix64::stream(seed, k);
      out.push_back(draw(rng, k));
    }
    return out;
  }

 private:
  static std::size_t first_reaching(const std::vector<double>& path, double r) {
    for (std::size_t j = 0; j < path.size(); ++j)
      if (path[j] >= r) return j;
    return path.size() - 1;
  }

  StoppingTime st_;
  std::vector<double> outcome_cdf_;
  std::vector<std::vector<double>> rows_;
};

inline SampleRecord sample_stop(const FilteredSpace& space, const StoppingTime& st, SplitMix64& rng) {
  return Sampler(space, st).draw(rng);
}

// Frequency table over (outcome, grid index).
struct EmpiricalDelta {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t n_samples = 0;
  std::vector<double> freq;

  double operator()(std::size_t i, std::size_t j) const { return freq[i * cols + j]; }
};

inline EmpiricalDelta empirical_delta(const FilteredSpace& space, std::span<const SampleRecord> samples) {
  if (samples.empty()) throw EmptySamples();
  EmpiricalDelta e{space.num_outcomes(), space.num_times(), samples.size(),
                   std::vector<double>(space.num_outcomes() * space.num_times(), 0.0)};
  std::vector<std::size_t> counts(e.freq.size(), 0);
  for (const auto& s : samples) {
    if (s.outcome >= e.rows || s.grid_index >= e.cols) throw IndexOutOfRange("sample outside the space");
    ++counts[s.outcome * e.cols + s.grid_index];
  }
  for (std::size_t k = 0; k < counts.size(); ++k)
    e.freq[k] = static_cast<double>(counts[k]) / static_cast<double>(samples.size());
  return e;
}

// (1/2) sum |freq - reference|
inline double total_variation(const EmpiricalDelta& e, const DistributionST& reference) {
  if (reference.mass.rows() != e.rows || reference.mass.cols() != e.cols)
    throw IncompatibleSpaces("reference distribution has a different shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < e.rows; ++i)
    for (std::size_t j = 0; j < e.cols; ++j) sum += std::abs(e(i, j) - to_double(reference.mass(i, j)));
  return 0.5 * sum;
}

}  // namespace stoptime
