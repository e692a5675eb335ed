/// @file  swarm_demo.cpp
/// @brief Generates a drone scenario and monitors it from every drone's view
///
/// Usage: swarm_demo [config.json]
///
/// Each drone runs one Boolean and one robustness monitor per property, all
/// fed from a single pass over the snapshots. The Boolean monitor reports the
/// step at which its verdict became fixed.

#include <iomanip>
#include <iostream>
#include <optional>

#include "strel/strel.hpp"

using namespace strel;

namespace {

struct property {
  std::string name;
  formula spltl;
};

struct drone_view {
  monitor<boolean_algebra> verdict;
  monitor<minmax_algebra> robustness;
  std::optional<std::size_t> decided_at;
};

} // namespace

int main(int argc, char **argv) {
  try {
    scenario_config cfg;
    if (argc > 1) {
      cfg = load_config(argv[1]);
    } else {
      cfg.drones = 4;
      cfg.stations = 3;
      cfg.obstacles = 6;
      cfg.steps = 4000;
    }
    trace_file trace = generate(cfg);
    std::cout << "scenario: " << cfg.drones << " drones, " << cfg.stations << " stations, "
              << cfg.obstacles << " obstacles, " << trace.size() << " steps\n";

    parse_options opts;
    opts.aliases.emplace("obstacle", parse_predicate("dist_to_obstacle <= 0"));
    opts.aliases.emplace("goal", parse_predicate("dist_to_goal <= 0"));
    std::vector<property> props{
        {"connected", eliminate_intervals(desugar(parse(
                          "G (somewhere[hops][1,2] drone or "
                          "F[0,100] somewhere[hops][1,2] (drone or groundstation))",
                          opts)))},
        {"safe-arrival", eliminate_intervals(desugar(parse(
                             "(G not obstacle) and ((drone reach[hops][0,2] groundstation) U goal)",
                             opts)))},
    };

    for (const auto &p : props) {
      automaton<boolean_algebra> bool_aut(p.spltl, trace.locations);
      automaton<minmax_algebra> robust_aut(p.spltl, trace.locations);
      std::vector<drone_view> views;
      for (location d = 0; d < cfg.drones; ++d)
        views.push_back({monitor<boolean_algebra>(bool_aut, d), monitor<minmax_algebra>(robust_aut, d), {}});

      for (std::size_t t = 0; t < trace.size(); ++t) {
        const spatial_model &s = trace.snapshots[t];
        automaton<boolean_algebra>::transition_cache bool_cache(bool_aut, s);
        automaton<minmax_algebra>::transition_cache robust_cache(robust_aut, s);
        for (auto &v : views) {
          v.verdict.step(bool_cache);
          v.robustness.step(robust_cache);
          if (!v.decided_at && v.verdict.conclusive())
            v.decided_at = t;
        }
      }

      std::cout << "\n" << p.name << " (" << bool_aut.state_count() << " automaton states)\n";
      for (const auto &v : views) {
        std::cout << "  " << std::setw(4) << trace.locations->name(v.verdict.ego()) << "  "
                  << boolean_algebra::format(v.verdict.current_value()) << "  robustness "
                  << std::setw(10) << minmax_algebra::format(v.robustness.current_value());
        if (v.decided_at)
          std::cout << "  decided at step " << *v.decided_at;
        std::cout << '\n';
      }
    }
  } catch (const std::exception &e) {
    std::cerr << "swarm_demo: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
