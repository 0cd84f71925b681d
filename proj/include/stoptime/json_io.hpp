// JSON file formats for spaces, processes and stopping times. Rationals are
// strings "p/q" or "p"; outcomes are referenced by label.
//
//   space:   {"grid": ["0","1/2","1"], "outcomes": ["w1","w2"], "probs": ["1/2","1/2"],
//             "partitions": [[["w1","w2"]], [["w1"],["w2"]], [["w1"],["w2"]]]}
//   process: {"values": {"w1": ["0","1/2","1"], ...}}
//   pure:         {"kind": "pure", "stop": {"w1": 0, ...}}
//   mixed:        {"kind": "mixed", "sections": {"w1": {"breaks": ["0","1/2","1"], "values": [0,1]}, ...}}
//   randomized:   {"kind": "randomized", "paths": {"w1": ["1/2","1"], ...}}
//   distribution: {"kind": "distribution", "mass": {"w1": ["1/4","1/4"], ...}}
#pragma once

#include "stoptime/rational.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

#include <json.hpp>

#include <cstddef>
#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stoptime::io {

using nlohmann::json;

inline Rational rational_from(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

inline json rational_json(const Rational& q) { return to_string(q); }

inline const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

inline std::size_t outcome_index(const FilteredSpace& space, const std::string& label) {
  const auto i = space.index_of(label);
  if (!i) throw ParseError("unknown outcome '" + label + "'");
  return *i;
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// Throws ParseError on malformed JSON, ValidationError on violated invariants.
inline FilteredSpace space_from_json(const json& j) {
  try {
    std::vector<std::string> labels = field(j, "outcomes").get<std::vector<std::string>>();
    std::vector<Rational> probs, grid;
    for (const auto& p : field(j, "probs")) probs.push_back(rational_from(p));
    for (const auto& t : field(j, "grid")) grid.push_back(rational_from(t));
    std::vector<Partition> partitions;
    for (const auto& level : field(j, "partitions")) {
      Partition p;
      for (const auto& block : level) {
        std::vector<std::size_t> b;
        for (const auto& label : block) {
          const auto it = std::find(labels.begin(), labels.end(), label.get<std::string>());
          if (it == labels.end()) throw ParseError("unknown outcome '" + label.get<std::string>() + "'");
          b.push_back(static_cast<std::size_t>(it - labels.begin()));
        }
        p.push_back(std::move(b));
      }
      partitions.push_back(std::move(p));
    }
    return build_space(std::move(labels), std::move(probs), std::move(grid), std::move(partitions));
  } catch (const json::exception& e) {
    throw ParseError(std::string("space: ") + e.what());
  }
}

inline json space_to_json(const FilteredSpace& space) {
  json j;
  j["grid"] = json::array();
  for (const auto& t : space.grid()) j["grid"].push_back(rational_json(t));
  j["outcomes"] = space.labels();
  j["probs"] = json::array();
  for (const auto& p : space.probs()) j["probs"].push_back(rational_json(p));
  j["partitions"] = json::array();
  for (std::size_t l = 0; l < space.num_times(); ++l) {
    json level = json::array();
    for (const auto& block : space.partition(l)) {
      json b = json::array();
      for (std::size_t i : block) b.push_back(space.labels()[i]);
      level.push_back(std::move(b));
    }
    j["partitions"].push_back(std::move(level));
  }
  return j;
}

namespace detail {

inline Table table_from(const FilteredSpace& space, const json& rows) {
  if (!rows.is_object()) throw ParseError("expected an object keyed by outcome label");
  Table t(space.num_outcomes(), space.num_times());
  std::vector<bool> seen(space.num_outcomes(), false);
  for (const auto& [label, row] : rows.items()) {
    const std::size_t i = outcome_index(space, label);
    if (!row.is_array() || row.size() != space.num_times())
      throw ParseError("row for '" + label + "' must have one entry per grid point");
    for (std::size_t c = 0; c < space.num_times(); ++c) t(i, c) = rational_from(row[c]);
    seen[i] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError("missing row for '" + space.labels()[i] + "'");
  return t;
}

inline json table_json(const FilteredSpace& space, const Table& t) {
  json j = json::object();
  for (std::size_t i = 0; i < space.num_outcomes(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < t.cols(); ++c) row.push_back(rational_json(t(i, c)));
    j[space.labels()[i]] = std::move(row);
  }
  return j;
}

template <typename T, typename Read>
std::vector<T> per_outcome(const FilteredSpace& space, const json& obj, Read&& read) {
  if (!obj.is_object()) throw ParseError("expected an object keyed by outcome label");
  std::vector<std::optional<T>> slots(space.num_outcomes());
  for (const auto& [label, value] : obj.items()) slots[outcome_index(space, label)] = read(value);
  std::vector<T> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) throw ParseError("missing entry for '" + space.labels()[i] + "'");
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace detail

inline Process process_from_json(const FilteredSpace& space, const json& j) {
  return {detail::table_from(space, field(j, "values"))};
}

inline json process_to_json(const FilteredSpace& space, const Process& p) {
  return {{"values", detail::table_json(space, p.values)}};
}

// Parses structure only; validate() checks the stopping-time invariants.
inline StoppingTime stopping_time_from_json(const FilteredSpace& space, const json& j) {
  try {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "pure") {
      return PureST{detail::per_outcome<std::size_t>(space, field(j, "stop"),
                                                     [](const json& v) { return v.get<std::size_t>(); })};
    }
    if (kind == "mixed") {
      return MixedST{detail::per_outcome<RStepFunction>(space, field(j, "sections"), [](const json& v) {
        std::vector<Rational> breaks;
        for (const auto& b : field(v, "breaks")) breaks.push_back(rational_from(b));
        auto values = field(v, "values").get<std::vector<std::size_t>>();
        return RStepFunction::make(std::move(breaks), std::move(values));
      })};
    }
    if (kind == "randomized") return RandomizedST{detail::table_from(space, field(j, "paths"))};
    if (kind == "distribution") return DistributionST{detail::table_from(space, field(j, "mass"))};
    throw ParseError("unknown stopping-time kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("stopping time: ") + e.what());
  }
}

inline json stopping_time_to_json(const FilteredSpace& space, const StoppingTime& st) {
  json j;
  j["kind"] = std::string(kind_name(st));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PureST>) {
          j["stop"] = json::object();
          for (std::size_t i = 0; i < x.stop.size(); ++i) j["stop"][space.labels()[i]] = x.stop[i];
        } else if constexpr (std::is_same_v<T, MixedST>) {
          j["sections"] = json::object();
          for (std::size_t i = 0; i < x.sections.size(); ++i) {
            json breaks = json::array();
            for (const auto& b : x.sections[i].breaks()) breaks.push_back(rational_json(b));
            j["sections"][space.labels()[i]] = {{"breaks", breaks}, {"values", x.sections[i].values()}};
          }
        } else if constexpr (std::is_same_v<T, RandomizedST>) {
          j["paths"] = detail::table_json(space, x.paths);
        } else {
          j["mass"] = detail::table_json(space, x.mass);
        }
      },
      st);
  return j;
}

}  // namespace stoptime::io
