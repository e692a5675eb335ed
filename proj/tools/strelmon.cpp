/// @file  strelmon.cpp
/// @brief Command-line front end: monitor, check, gen, info

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strel/strel.hpp"

namespace {

using namespace strel;

constexpr int exit_ok = 0;
constexpr int exit_violated = 1;
constexpr int exit_usage = 2;

/// Spec text from a file when the argument names one, else the argument itself
std::string read_spec(const std::string &arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

parse_options make_parse_options(const std::vector<std::string> &defines) {
  parse_options opts;
  opts.aliases.emplace("obstacle", parse_predicate("dist_to_obstacle <= 0"));
  opts.aliases.emplace("goal", parse_predicate("dist_to_goal <= 0"));
  for (const auto &d : defines) {
    auto eq = d.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::ValidationError("--define", "expected NAME=PREDICATE, got '" + d + "'");
    std::string name = d.substr(0, eq);
    if (detail::is_keyword(name))
      throw CLI::ValidationError("--define", "'" + name + "' is a keyword");
    opts.aliases.insert_or_assign(name, parse_predicate(d.substr(eq + 1)));
  }
  return opts;
}

struct monitor_args {
  std::string spec;
  std::string trace = "-";
  std::string ego = "all";
  std::string semantics = "bool";
  std::string mode = "offline";
  std::string format = "text";
  bool per_step = false;
  std::vector<std::string> defines;
};

class printer {
public:
  explicit printer(bool jsonl) : _jsonl(jsonl) {}

  void step(std::size_t k, const std::string &ego, const std::string &value) const {
    if (_jsonl)
      std::cout << json{{"step", k}, {"ego", ego}, {"value", value}}.dump() << '\n';
    else
      std::cout << "STEP " << k << " EGO " << ego << " VALUE " << value << '\n';
  }
  void verdict(const std::string &ego, const std::string &value) const {
    if (_jsonl)
      std::cout << json{{"ego", ego}, {"verdict", value}}.dump() << '\n';
    else
      std::cout << "EGO " << ego << " VERDICT " << value << '\n';
  }

private:
  bool _jsonl;
};

std::vector<location> resolve_egos(const universe &u, const std::string &ego) {
  std::vector<location> out;
  if (ego == "all") {
    for (location l = 0; l < u.size(); ++l)
      out.push_back(l);
    return out;
  }
  auto l = u.find(ego);
  if (!l)
    throw CLI::ValidationError("--ego", "unknown ego location '" + ego + "'");
  out.push_back(*l);
  return out;
}

template <de_morgan_algebra A>
int monitor_trace(const monitor_args &args, const formula &spltl, trace_reader &reader) {
  const auto &locs = reader.locations();
  automaton<A> aut(spltl, locs);
  std::vector<location> egos = resolve_egos(*locs, args.ego);
  std::vector<monitor<A>> monitors;
  for (location e : egos)
    monitors.emplace_back(aut, e);
  printer out(args.format == "jsonl");
  const bool online = args.mode == "online";

  std::vector<spatial_model> buffered;
  auto consume = [&](const spatial_model &s, std::size_t k) {
    typename automaton<A>::transition_cache cache(aut, s);
    for (auto &m : monitors) {
      m.step(cache);
      if (args.per_step)
        out.step(k, locs->name(m.ego()), A::format(m.current_value()));
    }
    if (args.per_step && online)
      std::cout.flush();
  };

  std::size_t k = 0;
  while (auto s = reader.next()) {
    if (online)
      consume(*s, k);
    else
      buffered.push_back(std::move(*s));
    ++k;
  }
  if (k == 0)
    throw trace_error("trace has no step records");
  for (std::size_t i = 0; i < buffered.size(); ++i)
    consume(buffered[i], i);

  bool all_ok = true;
  for (const auto &m : monitors) {
    auto v = m.current_value();
    all_ok = all_ok && is_satisfied(v);
    out.verdict(locs->name(m.ego()), A::format(v));
  }
  return all_ok ? exit_ok : exit_violated;
}

int cmd_monitor(const monitor_args &args) {
  formula f = parse(read_spec(args.spec), make_parse_options(args.defines));
  formula spltl = eliminate_intervals(desugar(f));
  std::ifstream file;
  std::istream *in = &std::cin;
  if (args.trace != "-") {
    file.open(args.trace);
    if (!file)
      throw trace_error("cannot open trace file '" + args.trace + "'");
    in = &file;
  }
  trace_reader reader(*in);
  if (args.semantics == "robust")
    return monitor_trace<minmax_algebra>(args, spltl, reader);
  return monitor_trace<boolean_algebra>(args, spltl, reader);
}

struct check_args {
  std::size_t random = 0;
  std::uint64_t seed = 0;
  std::size_t max_locations = 4;
  std::size_t max_depth = 3;
  std::size_t max_len = 5;
  std::string spec;
  std::string trace;
  std::string ego = "all";
  std::vector<std::string> defines;
};

int cmd_check(const check_args &args, bool random_mode) {
  if (random_mode) {
    random_options opts;
    opts.max_locations = args.max_locations;
    opts.max_depth = args.max_depth;
    opts.max_len = args.max_len;
    if (opts.max_locations == 0 || opts.max_len == 0)
      throw CLI::ValidationError("--max-locations/--max-len", "must be at least 1");
    check_report r = check_random(args.random, args.seed, opts);
    if (r.failure) {
      std::cout << "FAIL " << r.passed << "/" << r.total << "\n" << r.failure->to_string();
      return exit_violated;
    }
    std::cout << "OK " << r.passed << "/" << r.total << "\n";
    return exit_ok;
  }
  if (args.spec.empty() || args.trace.empty())
    throw CLI::ValidationError("check", "needs --random N, or --spec and --trace");
  formula f = parse(read_spec(args.spec), make_parse_options(args.defines));
  trace_file t = load_trace(args.trace);
  std::size_t passed = 0, total = 0;
  for (location e : resolve_egos(*t.locations, args.ego)) {
    ++total;
    instance c{f, t.snapshots, e};
    auto bad = check_instance<boolean_algebra>(c);
    if (!bad)
      bad = check_instance<minmax_algebra>(c);
    if (bad) {
      std::cout << "FAIL " << passed << "/" << total << "\n" << bad->to_string();
      return exit_violated;
    }
    ++passed;
  }
  std::cout << "OK " << passed << "/" << total << "\n";
  return exit_ok;
}

int cmd_gen(const std::string &config, const std::string &out_path) {
  scenario_config cfg = load_config(config);
  trace_file t = generate(cfg);
  if (out_path == "-") {
    save_trace(t, std::cout);
  } else {
    save_trace(t, out_path);
  }
  std::size_t total = 0, lo = SIZE_MAX, hi = 0;
  for (const auto &s : t.snapshots) {
    total += s.edges().size();
    lo = std::min(lo, s.edges().size());
    hi = std::max(hi, s.edges().size());
  }
  std::ostream &log = out_path == "-" ? std::cerr : std::cout;
  log << "nodes=" << t.locations->size() << " drones=" << cfg.drones << " stations=" << cfg.stations
      << " obstacles=" << cfg.obstacles << " steps=" << t.size() << " edges=" << total
      << " edges_per_step(min/max)=" << lo << "/" << hi << '\n';
  return exit_ok;
}

int cmd_info(const std::string &spec, const std::string &locations, bool prune, bool dot,
             const std::vector<std::string> &defines) {
  formula f = parse(read_spec(spec), make_parse_options(defines));
  formula spltl = eliminate_intervals(desugar(f));
  std::shared_ptr<const universe> locs;
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(locations.data(), locations.data() + locations.size(), n);
  if (ec == std::errc{} && p == locations.data() + locations.size()) {
    if (n == 0)
      throw CLI::ValidationError("--locations", "must be at least 1");
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i)
      ids.push_back("l" + std::to_string(i));
    locs = std::make_shared<const universe>(std::move(ids));
  } else {
    std::ifstream in(locations);
    if (!in)
      throw trace_error("cannot open trace file '" + locations + "'");
    trace_reader reader(in);
    locs = reader.locations();
  }
  automaton<boolean_algebra> aut(spltl, locs);
  const std::size_t size = dag_size(spltl);
  std::cout << "|L|=" << locs->size() << '\n';
  std::cout << "|phi|=" << dag_size(f) << " |phi'|=" << size << '\n';
  std::cout << "|Q|=" << aut.state_count() << " bound=" << 2 * locs->size() * size << '\n';
  std::cout << "|F|=" << aut.accepting_count() << '\n';
  if (prune)
    std::cout << "pruned |Q|=" << aut.pruned_state_count() << " (removed "
              << aut.state_count() - aut.pruned_state_count() << ")\n";
  if (dot)
    std::cout << aut.to_dot();
  return exit_ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Monitor spatio-temporal reach/escape specifications over graph traces"};
  app.require_subcommand(1);

  monitor_args margs;
  auto *mon = app.add_subcommand("monitor", "Monitor a trace against a specification");
  mon->add_option("--spec", margs.spec, "Formula file or formula text")->required();
  mon->add_option("--trace", margs.trace, "Trace file, or - for stdin")->capture_default_str();
  mon->add_option("--ego", margs.ego, "Ego location id, or all")->capture_default_str();
  mon->add_option("--semantics", margs.semantics, "bool or robust")
      ->check(CLI::IsMember({"bool", "robust"}))
      ->capture_default_str();
  mon->add_option("--mode", margs.mode, "offline or online")
      ->check(CLI::IsMember({"offline", "online"}))
      ->capture_default_str();
  mon->add_flag("--per-step", margs.per_step, "Print the current value after every step");
  mon->add_option("--format", margs.format, "text or jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->capture_default_str();
  mon->add_option("--define", margs.defines, "Predicate alias NAME=PREDICATE (repeatable)");

  check_args cargs;
  auto *chk = app.add_subcommand("check", "Cross-check the automaton monitor against direct evaluation");
  auto *random_opt = chk->add_option("--random", cargs.random, "Number of random instances");
  chk->add_option("--seed", cargs.seed, "Random seed")->capture_default_str();
  chk->add_option("--max-locations", cargs.max_locations)->capture_default_str();
  chk->add_option("--max-depth", cargs.max_depth)->capture_default_str();
  chk->add_option("--max-len", cargs.max_len)->capture_default_str();
  chk->add_option("--spec", cargs.spec, "Formula file or text")->excludes(random_opt);
  chk->add_option("--trace", cargs.trace, "Trace file")->excludes(random_opt);
  chk->add_option("--ego", cargs.ego, "Ego location id, or all")->capture_default_str();
  chk->add_option("--define", cargs.defines, "Predicate alias NAME=PREDICATE (repeatable)");

  std::string config, out_path;
  auto *gen = app.add_subcommand("gen", "Generate a drone-swarm scenario trace");
  gen->add_option("--config", config, "Scenario configuration (JSON)")->required();
  gen->add_option("--out", out_path, "Output trace path, or - for stdout")->required();

  std::string ispec, ilocs;
  bool prune = false, dot = false;
  std::vector<std::string> idefines;
  auto *info = app.add_subcommand("info", "Report automaton size for a specification");
  info->add_option("--spec", ispec, "Formula file or text")->required();
  info->add_option("--locations", ilocs, "Number of locations, or a trace file")->required();
  info->add_flag("--prune", prune, "Also report the pruned state count");
  info->add_flag("--dot", dot, "Print the formula-level successor graph");
  info->add_option("--define", idefines, "Predicate alias NAME=PREDICATE (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (mon->parsed())
      return cmd_monitor(margs);
    if (chk->parsed())
      return cmd_check(cargs, random_opt->count() > 0);
    if (gen->parsed())
      return cmd_gen(config, out_path);
    return cmd_info(ispec, ilocs, prune, dot, idefines);
  } catch (const CLI::Error &e) {
    std::cerr << "strelmon: " << e.what() << '\n';
    return exit_usage;
  } catch (const parse_error &e) {
    std::cerr << "strelmon: parse error at " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception &e) {
    std::cerr << "strelmon: " << e.what() << '\n';
    return exit_usage;
  }
}
