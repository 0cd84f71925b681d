// stoptime: command-line front end.
//
// Exit codes: 0 success, 1 check failure, 2 input error.
#include "stoptime/stoptime.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace stoptime;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string decimal(const Rational& q) {
  std::ostringstream os;
  os << std::setprecision(12) << to_double(q);
  return os.str();
}

void print_rational(const std::string& name, const Rational& q) {
  std::cout << name << " = " << to_string(q) << " (~" << decimal(q) << ")\n";
}

FilteredSpace load_space(const std::string& path) { return io::space_from_json(io::read_file(path)); }

StoppingTime load_stop(const FilteredSpace& space, const std::string& path) {
  StoppingTime st = io::stopping_time_from_json(space, io::read_file(path));
  if (const Report r = validate(space, st); !r.empty()) {
    std::string msg = path + " is not a valid " + std::string(kind_name(st)) + " stopping time";
    for (const auto& v : r) msg += "\n  " + v.describe();
    throw InputError(msg);
  }
  return st;
}

Process load_process(const FilteredSpace& space, const std::string& path) {
  return io::process_from_json(space, io::read_file(path));
}

std::string atom_name(const FilteredSpace& space, std::size_t i, std::size_t j) {
  return "(" + space.labels()[i] + ", t=" + to_string(space.time(j)) + ")";
}

int cmd_validate(const std::string& file, const std::string& space_path) {
  const json j = io::read_file(file);
  Report report;
  if (j.contains("kind") || j.contains("values")) {
    if (space_path.empty()) throw InputError("--space is required to validate " + file);
    const FilteredSpace space = load_space(space_path);
    if (j.contains("kind"))
      report = validate(space, io::stopping_time_from_json(space, j));
    else
      report = validate_adapted(space, io::process_from_json(space, j));
  } else {
    try {
      io::space_from_json(j);
    } catch (const ValidationError& e) {
      report = e.report();
    }
  }
  if (report.empty()) {
    std::cout << file << ": valid\n";
    return kOk;
  }
  std::cout << file << ": " << report.size() << " violation(s)\n";
  for (const auto& v : report) std::cout << "  " << v.describe() << '\n';
  return kCheckFailed;
}

int cmd_convert(const std::string& space_path, const std::string& to, const std::string& in,
                const std::string& out) {
  const FilteredSpace space = load_space(space_path);
  const StoppingTime st = load_stop(space, in);
  StoppingTime result;
  if (to == "mixed") result = to_mixed(space, st);
  else if (to == "randomized") result = to_randomized(space, st);
  else result = to_distribution(space, st);
  const json j = io::stopping_time_to_json(space, result);
  if (out.empty() || out == "-")
    std::cout << j.dump(2) << '\n';
  else
    io::write_file(out, j);
  return kOk;
}

int cmd_equiv(const std::string& space_path, const std::string& a, const std::string& b) {
  const FilteredSpace space = load_space(space_path);
  const auto eq = equivalent(space, load_stop(space, a), load_stop(space, b));
  if (eq) {
    std::cout << "equivalent\n";
    return kOk;
  }
  const auto& w = *eq.witness;
  std::cout << "not equivalent: " << atom_name(space, w.outcome, w.level) << " mass " << to_string(w.first)
            << " vs " << to_string(w.second) << '\n';
  return kCheckFailed;
}

int cmd_payoff(const std::string& space_path, const std::string& reward_path, const std::string& stop_path,
               bool check_kuhn) {
  const FilteredSpace space = load_space(space_path);
  const StoppingProblem problem(space, load_process(space, reward_path));
  const StoppingTime st = load_stop(space, stop_path);
  const Rational value = payoff(problem, st);
  print_rational("payoff", value);
  if (!check_kuhn) return kOk;

  bool all_equal = true;
  auto route = [&](const std::string& name, const Rational& v) {
    const bool same = v == value;
    all_equal = all_equal && same;
    std::cout << "  " << std::left << std::setw(13) << name << to_string(v) << (same ? "" : "  MISMATCH") << '\n';
  };
  if (const auto* sigma = std::get_if<PureST>(&st)) route("pure", payoff_pure(problem, *sigma));
  route("mixed", payoff_mixed(problem, to_mixed(space, st)));
  route("randomized", payoff_randomized(problem, to_randomized(space, st)));
  route("distribution", payoff_distribution(problem, to_distribution(space, st)));
  std::cout << (all_equal ? "all routes agree\n" : "routes disagree\n");
  return all_equal ? kOk : kCheckFailed;
}

int cmd_game(const std::string& space_path, const std::string& x, const std::string& y, const std::string& z,
             const std::string& p1, const std::string& p2, const std::string& route) {
  const FilteredSpace space = load_space(space_path);
  const StoppingGame game(space, load_process(space, x), load_process(space, y), load_process(space, z));
  const StoppingTime tau1 = load_stop(space, p1);
  const StoppingTime tau2 = load_stop(space, p2);

  auto via_lift = [&] { return game_payoff_via_lift(game, tau1, to_distribution(space, tau2)); };
  auto symmetric = [&] { return game_payoff_symmetric(game, to_mixed(space, tau1), to_mixed(space, tau2)); };
  auto p2view = [&] { return game_payoff_player2_view(game, to_distribution(space, tau1), tau2); };

  if (route == "lift") print_rational("payoff (lift)", via_lift());
  else if (route == "symmetric") print_rational("payoff (symmetric)", symmetric());
  else if (route == "p2view") print_rational("payoff (player 2 view)", p2view());
  else {
    const Rational a = via_lift(), b = symmetric(), c = p2view();
    print_rational("payoff (lift)", a);
    print_rational("payoff (symmetric)", b);
    print_rational("payoff (player 2 view)", c);
    if (a != b || b != c) {
      std::cout << "routes disagree\n";
      return kCheckFailed;
    }
    std::cout << "routes agree\n";
  }
  return kOk;
}

int cmd_sample(const std::string& space_path, const std::string& stop_path, const std::string& ref_path,
               std::size_t n, std::uint64_t seed, double tolerance) {
  const FilteredSpace space = load_space(space_path);
  const StoppingTime st = load_stop(space, stop_path);
  const auto samples = Sampler(space, st).draw_many(n, seed);
  const EmpiricalDelta e = empirical_delta(space, samples);
  std::cout << "outcome,grid_index,time,frequency\n";
  for (std::size_t i = 0; i < e.rows; ++i)
    for (std::size_t j = 0; j < e.cols; ++j)
      std::cout << space.labels()[i] << ',' << j << ',' << to_string(space.time(j)) << ',' << std::setprecision(6)
                << std::fixed << e(i, j) << '\n';
  if (ref_path.empty()) return kOk;
  const DistributionST ref = to_distribution(space, load_stop(space, ref_path));
  const double tv = total_variation(e, ref);
  std::cout << "tv = " << std::setprecision(6) << std::fixed << tv << " (tolerance " << tolerance << ")\n";
  return tv <= tolerance ? kOk : kCheckFailed;
}

Bounds parse_bounds(const std::string& text) {
  Bounds b;
  if (text.empty()) return b;
  std::vector<std::size_t> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      parts.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw InputError("--bounds expects comma-separated integers, got '" + text + "'");
    }
  }
  if (parts.empty() || parts.size() > 4) throw InputError("--bounds expects 1 to 4 integers");
  std::size_t* fields[] = {&b.max_outcomes, &b.max_grid_points, &b.max_breaks, &b.max_denominator};
  for (std::size_t k = 0; k < parts.size(); ++k) *fields[k] = parts[k];
  try {
    b.check();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return b;
}

int cmd_fuzz(ExperimentConfig config, const std::string& bounds, const std::string& out,
             const std::string& summary) {
  config.bounds = parse_bounds(bounds);
  try {
    config.check();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const ExperimentReport report = run_experiment(config);
  if (out.empty() || out == "-") {
    std::cout << report.csv();
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("cannot write " + out);
    f << report.csv();
  }
  if (!summary.empty()) io::write_file(summary, report.summary());
  std::cerr << report.rows.size() << " checks, " << report.failures() << " failed\n";
  return report.ok() ? kOk : kCheckFailed;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("STOPTIME_SEED");
  if (!env || !*env) return fallback;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw InputError(std::string("STOPTIME_SEED is not an integer: ") + env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random stopping times on finite filtered spaces: conversions, equivalence, payoffs"};
  app.require_subcommand(1);

  std::string space, file, to = "distribution", in, out, a, b, reward, stop, ref, route = "both", bounds, summary;
  std::string x, y, z, p1, p2;
  bool check_kuhn = false;
  std::size_t n = 100000;
  double tol = 0.01;
  ExperimentConfig fuzz_cfg;

  auto* validate_cmd = app.add_subcommand("validate", "Validate a space, process or stopping-time file");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->add_option("--space", space, "Space file (required for processes and stopping times)");

  auto* convert_cmd = app.add_subcommand("convert", "Convert a stopping time to another representation");
  convert_cmd->add_option("--space", space)->required();
  convert_cmd->add_option("--to", to)->check(CLI::IsMember({"mixed", "randomized", "distribution"}));
  convert_cmd->add_option("in", in)->required();
  convert_cmd->add_option("-o,--output", out);

  auto* equiv_cmd = app.add_subcommand("equiv", "Exit 0 iff two stopping times are equivalent");
  equiv_cmd->add_option("--space", space)->required();
  equiv_cmd->add_option("a", a)->required();
  equiv_cmd->add_option("b", b)->required();

  auto* payoff_cmd = app.add_subcommand("payoff", "Expected payoff of a stopping time");
  payoff_cmd->add_option("--space", space)->required();
  payoff_cmd->add_option("--reward", reward)->required();
  payoff_cmd->add_option("--stop", stop)->required();
  payoff_cmd->add_flag("--check-kuhn", check_kuhn, "Evaluate every representation and require equality");

  auto* game_cmd = app.add_subcommand("game", "Payoff of a two-player zero-sum stopping game");
  game_cmd->add_option("--space", space)->required();
  game_cmd->add_option("--x", x, "Payoff when player 1 stops first")->required();
  game_cmd->add_option("--y", y, "Payoff when player 2 stops first")->required();
  game_cmd->add_option("--z", z, "Payoff on simultaneous stops")->required();
  game_cmd->add_option("--p1", p1)->required();
  game_cmd->add_option("--p2", p2)->required();
  game_cmd->add_option("--route", route)->check(CLI::IsMember({"lift", "symmetric", "both", "p2view"}));

  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo sample a stopping time");
  std::uint64_t sample_seed = 7;
  sample_cmd->add_option("--space", space)->required();
  sample_cmd->add_option("--stop", stop)->required();
  sample_cmd->add_option("--n", n)->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample_seed);
  sample_cmd->add_option("--ref", ref, "Reference stopping time for the total-variation check");
  sample_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Run the randomized property campaign");
  fuzz_cmd->add_option("--instances", fuzz_cfg.n_instances)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--seed", fuzz_cfg.seed);
  fuzz_cmd->add_option("--samples", fuzz_cfg.n_samples)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--tol", fuzz_cfg.tv_tolerance)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--threads", fuzz_cfg.threads)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--bounds", bounds, "max outcomes, max grid points, max r-breaks, max denominator");
  fuzz_cmd->add_option("-o,--output", out, "CSV report path (default stdout)");
  fuzz_cmd->add_option("--summary", summary, "JSON summary path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate_cmd) return cmd_validate(file, space);
    if (*convert_cmd) return cmd_convert(space, to, in, out);
    if (*equiv_cmd) return cmd_equiv(space, a, b);
    if (*payoff_cmd) return cmd_payoff(space, reward, stop, check_kuhn);
    if (*game_cmd) return cmd_game(space, x, y, z, p1, p2, route);
    if (*sample_cmd) return cmd_sample(space, stop, ref, n, seed_from_env(sample_seed), tol);
    if (*fuzz_cmd) {
      fuzz_cfg.seed = seed_from_env(fuzz_cfg.seed);
      return cmd_fuzz(fuzz_cfg, bounds, out, summary);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const IncompatibleSpaces& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kInputError;
}
