/// @file  acceptance.cpp
/// @brief Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace strel;
using namespace strel::test;

namespace {

using B = boolean_algebra;
using M = minmax_algebra;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

struct outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string &name, const std::function<outcome()> &body) {
  outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass)
    ++failures;
  std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << name << ": " << o.detail << std::endl;
}

std::pair<int, std::string> run_strelmon(const std::string &args) {
  std::string cmd = std::string(STRELMON_PATH) + " " + args + " 2>&1";
  FILE *p = popen(cmd.c_str(), "r");
  if (!p)
    throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p))
    out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

formula compiled(const formula &f) { return eliminate_intervals(desugar(f)); }

/// The instances of criteria 1, 2 and 9
const std::vector<instance> &seed7_instances() {
  static const std::vector<instance> all = [] {
    random_source src(7);
    std::vector<instance> out;
    for (int i = 0; i < 1000; ++i)
      out.push_back(src.random_instance());
    return out;
  }();
  return all;
}

template <class A> outcome equivalence() {
  auto start = clock_type::now();
  std::size_t agree = 0, largest = 0;
  for (const auto &c : seed7_instances()) {
    if (auto bad = check_instance<A>(c))
      return {false, bad->to_string()};
    ++agree;
    largest = std::max(largest, dag_size(c.f));
  }
  double s = seconds_since(start);
  std::ostringstream d;
  d << agree << "/1000 instances agree exactly in " << s << " s (largest formula " << largest
    << " nodes)";
  return {agree == 1000 && s <= 60.0, d.str()};
}

/// Sum over time intervals of hi - lo; unbounded intervals make it infinite
double interval_widths(const formula &f) {
  double s = 0;
  if (f.time())
    s += f.time()->hi ? static_cast<double>(*f.time()->hi - f.time()->lo)
                      : std::numeric_limits<double>::infinity();
  for (const auto &c : f.children())
    s += interval_widths(c);
  return s;
}

bool has_interval(const formula &f) {
  if (f.time())
    return true;
  for (const auto &c : f.children())
    if (has_interval(c))
      return true;
  return false;
}

std::shared_ptr<const universe> n_locations(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i)
    ids.push_back("l" + std::to_string(i));
  return std::make_shared<const universe>(std::move(ids));
}

template <class V> V random_value(std::mt19937_64 &rng) {
  if constexpr (std::is_same_v<V, bool>) {
    return (rng() & 1) != 0;
  } else {
    switch (rng() % 8) {
    case 0:
      return std::numeric_limits<double>::infinity();
    case 1:
      return -std::numeric_limits<double>::infinity();
    default:
      return static_cast<double>(static_cast<int>(rng() % 9) - 4) / 2.0;
    }
  }
}

/// Counts randomized law checks for one algebra; returns the number of failures
template <class A> std::size_t algebra_laws(std::mt19937_64 &rng, std::size_t rounds, std::size_t &checks) {
  using V = typename A::value_type;
  std::size_t bad = 0;
  auto expect = [&](bool ok) {
    ++checks;
    bad += !ok;
  };
  for (std::size_t i = 0; i < rounds; ++i) {
    V a = random_value<V>(rng), b = random_value<V>(rng), c = random_value<V>(rng);
    expect(A::oplus(a, A::oplus(b, c)) == A::oplus(A::oplus(a, b), c));
    expect(A::otimes(a, A::otimes(b, c)) == A::otimes(A::otimes(a, b), c));
    expect(A::oplus(a, b) == A::oplus(b, a));
    expect(A::otimes(a, b) == A::otimes(b, a));
    expect(A::otimes(a, A::oplus(b, c)) == A::oplus(A::otimes(a, b), A::otimes(a, c)));
    expect(A::oplus(a, A::bot()) == a && A::otimes(a, A::top()) == a);
    expect(A::otimes(a, A::bot()) == A::bot());
    expect(A::oplus(a, A::otimes(a, b)) == a && A::otimes(a, A::oplus(a, b)) == a);
    expect(A::ominus(A::oplus(a, b)) == A::otimes(A::ominus(a), A::ominus(b)));
    expect(A::ominus(A::otimes(a, b)) == A::oplus(A::ominus(a), A::ominus(b)));
    expect(A::ominus(A::ominus(a)) == a);
  }
  return bad;
}

/// Polynomial laws checked by evaluation: ring identities, dual, substitution
template <class A> std::size_t polynomial_laws(std::mt19937_64 &rng, std::size_t rounds, std::size_t &checks) {
  using V = typename A::value_type;
  using P = polynomial<A, int>;
  std::size_t bad = 0;
  auto expect = [&](bool ok) {
    ++checks;
    bad += !ok;
  };
  auto random_poly = [&](int vars, int max_terms) {
    std::vector<monomial<A, int>> terms;
    int n = static_cast<int>(rng() % (max_terms + 1));
    for (int i = 0; i < n; ++i) {
      monomial<A, int> m{random_value<V>(rng), {}};
      for (int v = 0; v < vars; ++v)
        if (rng() % 3 == 0)
          m.vars.push_back(v);
      terms.push_back(m);
    }
    return P::from_terms(terms);
  };
  auto flip = [](int x) { return x < 4 ? x + 4 : x - 4; };
  for (std::size_t i = 0; i < rounds; ++i) {
    P a = random_poly(4, 4), b = random_poly(4, 4), c = random_poly(4, 4);
    std::map<int, P> sigma;
    for (int v = 0; v < 8; ++v)
      sigma[v] = random_poly(8, 3);
    std::map<int, V> val;
    for (int v = 0; v < 8; ++v)
      val[v] = random_value<V>(rng);
    auto ev = [&](const P &p) { return p.evaluate(val); };
    expect(a + (b + c) == (a + b) + c && a * (b * c) == (a * b) * c);
    expect(a + b == b + a && a * b == b * a);
    expect(ev(a * (b + c)) == ev(a * b + a * c));
    expect(a + a * b == a);
    expect(a + P::bot() == a && a * P::top() == a && (a * P::bot()).is_bot());
    expect(ev(a + b) == A::oplus(ev(a), ev(b)) && ev(a * b) == A::otimes(ev(a), ev(b)));
    std::map<int, V> dual_val;
    for (int v = 0; v < 8; ++v)
      dual_val[v] = A::ominus(val.at(flip(v)));
    expect(a.dual(flip).evaluate(val) == A::ominus(a.evaluate(dual_val)));
    expect(ev(a.dual(flip).dual(flip)) == ev(a));
    expect((a + b).substitute(sigma) == a.substitute(sigma) + b.substitute(sigma));
    expect(ev((a * b).substitute(sigma)) == ev(a.substitute(sigma) * b.substitute(sigma)));
    std::map<int, V> composed;
    for (int v = 0; v < 8; ++v)
      composed[v] = ev(sigma.at(v));
    expect(ev(a.substitute(sigma)) == a.evaluate(composed));
  }
  return bad;
}

const char *const phi1 =
    "G (somewhere[hops][1,2] drone or F[0,100] somewhere[hops][1,2] (drone or groundstation))";
const char *const phi2 = "(G not obstacle) and ((drone reach[hops][0,2] groundstation) U goal)";

parse_options case_study_aliases() {
  parse_options opts;
  opts.aliases.emplace("obstacle", parse_predicate("dist_to_obstacle <= 0"));
  opts.aliases.emplace("goal", parse_predicate("dist_to_goal <= 0"));
  return opts;
}

struct case_run {
  std::string verdicts;
  std::uint64_t stream_hash = 0;
  double seconds = 0;
  std::size_t monitor_steps = 0;
  std::size_t violated = 0;
};

/// Monitors every drone ego over the trace, hashing the per-step value stream
template <class A> case_run monitor_case(const trace_file &t, const char *spec, std::size_t drones) {
  formula f = compiled(parse(spec, case_study_aliases()));
  auto start = clock_type::now();
  automaton<A> aut(f, t.locations);
  std::vector<monitor<A>> ms;
  for (location l = 0; l < drones; ++l)
    ms.emplace_back(aut, l);
  std::string stream;
  case_run r;
  std::hash<std::string> h;
  for (const auto &s : t.snapshots) {
    typename automaton<A>::transition_cache cache(aut, s);
    stream.clear();
    for (auto &m : ms) {
      m.step(cache);
      stream += A::format(m.current_value());
      stream += ' ';
    }
    r.stream_hash = r.stream_hash * 1099511628211ull ^ h(stream);
  }
  r.seconds = seconds_since(start);
  r.monitor_steps = t.size() * ms.size();
  for (const auto &m : ms) {
    auto v = m.current_value();
    r.violated += !is_satisfied(v);
    r.verdicts += t.locations->name(m.ego()) + "=" + A::format(v) + " ";
  }
  return r;
}

std::string trace_bytes(const trace_file &t) {
  std::ostringstream out;
  save_trace(t, out);
  return out.str();
}

struct case_study {
  std::string trace_text;
  std::vector<case_run> runs;
};

/// Map-1-shaped scenario with both properties in both algebras
case_study run_case_study() {
  scenario_config cfg;
  cfg.seed = 1;
  trace_file t = generate(cfg);
  case_study cs;
  cs.trace_text = trace_bytes(t);
  for (const char *spec : {phi1, phi2}) {
    cs.runs.push_back(monitor_case<B>(t, spec, cfg.drones));
    cs.runs.push_back(monitor_case<M>(t, spec, cfg.drones));
  }
  return cs;
}

} // namespace

int main() {
  std::cout << std::setprecision(4);

  report(1, "oracle equivalence, boolean (check --random 1000 --seed 7)", [] {
    auto start = clock_type::now();
    auto [code, out] = run_strelmon("check --random 1000 --seed 7");
    double cli_seconds = seconds_since(start);
    if (code != 0 || out != "OK 1000/1000\n")
      return outcome{false, "strelmon check printed: " + out};
    outcome o = equivalence<B>();
    std::ostringstream d;
    d << o.detail << "; strelmon check: OK 1000/1000 in " << cli_seconds << " s";
    return outcome{o.pass && cli_seconds <= 60.0, d.str()};
  });

  report(2, "weighted equivalence, min-max", [] { return equivalence<M>(); });

  report(3, "interval elimination soundness and size", [] {
    random_options opts;
    opts.max_time = 4;
    random_source src(3, opts);
    std::size_t timed = 0;
    for (int i = 0; timed < 500; ++i) {
      instance c = src.random_instance();
      if (!has_interval(c.f))
        continue;
      formula g = compiled(c.f);
      if (eval_semantics<B>(c.trace, c.f, c.ego) != eval_semantics<B>(c.trace, g, c.ego) ||
          eval_semantics<M>(c.trace, c.f, c.ego) != eval_semantics<M>(c.trace, g, c.ego))
        return outcome{false, "semantics differ on " + to_string(c.f)};
      ++timed;
    }
    double worst = 0;
    for (const auto &text : corpus()) {
      formula f = parse(text, case_study_aliases());
      double lhs = static_cast<double>(dag_size(compiled(f)));
      double rhs = 4.0 * static_cast<double>(dag_size(f)) * (1.0 + interval_widths(f));
      if (!(lhs <= rhs))
        return outcome{false, "size bound fails on " + text};
      if (std::isfinite(rhs))
        worst = std::max(worst, lhs / rhs);
    }
    std::ostringstream d;
    d << timed << " timed formulas agree in both algebras; size bound holds on " << corpus().size()
      << " corpus formulas (largest |phi'|/bound " << worst << ")";
    return outcome{true, d.str()};
  });

  report(4, "state bound", [] {
    for (const auto &text : corpus()) {
      formula f = compiled(parse(text, case_study_aliases()));
      for (std::size_t n : {1u, 4u, 15u}) {
        automaton<B> aut(f, n_locations(n));
        if (aut.state_count() > 2 * n * dag_size(f))
          return outcome{false, "bound exceeded on " + text};
      }
    }
    auto [code, out] = run_strelmon("info --spec 'p U q' --locations 2");
    if (code != 0 || out.find("|Q|=12 bound=12") == std::string::npos)
      return outcome{false, "strelmon info printed: " + out};
    return outcome{true, "|Q| <= 2|L||phi'| on " + std::to_string(corpus().size()) +
                             " corpus formulas at |L| in {1,4,15}; info reports |Q|=12 bound=12 for p U q"};
  });

  report(5, "online/offline agreement", [] {
    random_source src(5);
    for (int i = 0; i < 200; ++i) {
      instance c = src.random_instance();
      std::span<const spatial_model> tr(c.trace);
      formula g = compiled(c.f);
      automaton<B> ab(g, tr.front().shared_locations());
      automaton<M> am(g, tr.front().shared_locations());
      monitor<B> mb(ab, c.ego);
      monitor<M> mm(am, c.ego);
      bool last_b = false;
      double last_m = 0;
      for (const auto &s : tr) {
        mb.step(s);
        mm.step(s);
        last_b = mb.current_value();
        last_m = mm.current_value();
      }
      if (last_b != run_offline(ab, tr, c.ego) || last_m != run_offline(am, tr, c.ego))
        return outcome{false, "stream and offline differ on " + to_string(c.f)};
    }
    return outcome{true, "200/200 instances, both algebras"};
  });

  report(6, "path enumeration oracle", [] {
    std::mt19937_64 rng(6);
    std::size_t comparisons = 0;
    for (int g = 0; g < 200; ++g) {
      auto m = random_graph(rng, 1 + rng() % 7, 0.5);
      for (const auto &fn : {hops_function(), weight_function()}) {
        for (double lim : {0.0, 1.0, 2.0, distance::infinite}) {
          distance limit = distance::of(fn.domain(), lim);
          for (location o = 0; o < m.size(); ++o) {
            std::set<std::vector<location>> expected, got;
            for (const auto &p : all_simple_paths(m, o)) {
              bool ok = true;
              for (std::size_t k = 1; k <= p.size() && ok; ++k)
                ok = !dist_less(limit, path_distance(m, std::span<const location>(p.data(), k), fn));
              if (ok)
                expected.insert(p);
            }
            auto paths = enumerate_bounded_paths(m, o, fn, limit);
            for (const auto &p : paths)
              got.insert(p.nodes);
            if (got != expected || got.size() != paths.size())
              return outcome{false, "mismatch on graph " + std::to_string(g)};
            ++comparisons;
          }
        }
      }
    }
    return outcome{true, "200 graphs, " + std::to_string(comparisons) +
                             " (origin, distance, bound) comparisons match exhaustive recursion"};
  });

  report(7, "algebra and polynomial laws, term bound", [] {
    std::mt19937_64 rng(7);
    std::size_t checks = 0, bad = 0;
    bad += algebra_laws<B>(rng, 2000, checks);
    bad += algebra_laws<M>(rng, 2000, checks);
    bad += polynomial_laws<B>(rng, 1000, checks);
    bad += polynomial_laws<M>(rng, 1000, checks);
    std::size_t states = 0, largest = 0;
    for (const auto &c : seed7_instances()) {
      std::span<const spatial_model> tr(c.trace);
      automaton<M> aut(compiled(c.f), tr.front().shared_locations());
      monitor<M> m(aut, c.ego);
      for (const auto &s : tr) {
        m.step(s);
        ++states;
        largest = std::max(largest, m.state().size());
        if (m.state().size() > (std::size_t{1} << std::min<std::size_t>(m.state().support().size(), 63)))
          return outcome{false, "term bound exceeded on " + to_string(c.f)};
      }
    }
    std::ostringstream d;
    d << checks - bad << "/" << checks << " law checks pass; term bound holds on " << states
      << " monitor states (largest " << largest << " terms)";
    return outcome{bad == 0 && checks >= 10000, d.str()};
  });

  auto start = clock_type::now();
  case_study first = run_case_study();
  double case_seconds = seconds_since(start);

  report(8, "case-study scale (Map-1 shape: 10 drones, 5 stations, 23 obstacles, 6001 steps)", [&] {
    std::ostringstream d;
    bool ok = case_seconds <= 300.0;
    const char *names[] = {"phi1 bool", "phi1 robust", "phi2 bool", "phi2 robust"};
    for (std::size_t i = 0; i < first.runs.size(); ++i) {
      const auto &r = first.runs[i];
      double per_step_ms = 1000.0 * r.seconds / static_cast<double>(r.monitor_steps);
      ok = ok && per_step_ms <= 10.0;
      d << names[i] << " " << r.seconds << " s (" << per_step_ms << " ms/step/ego, "
        << r.violated << "/10 violated); ";
    }
    d << "total " << case_seconds << " s including generation";
    return outcome{ok, d.str()};
  });

  report(9, "sign coherence", [] {
    std::size_t nonzero = 0;
    for (const auto &c : seed7_instances()) {
      std::span<const spatial_model> tr(c.trace);
      formula g = compiled(c.f);
      const auto &locs = tr.front().shared_locations();
      double r = run_offline(automaton<M>(g, locs), tr, c.ego);
      bool b = run_offline(automaton<B>(g, locs), tr, c.ego);
      if (r != 0.0) {
        ++nonzero;
        if ((r > 0) != b)
          return outcome{false, "sign differs on " + to_string(c.f)};
      }
    }
    return outcome{true, std::to_string(nonzero) + " nonzero robustness values all match the boolean verdict"};
  });

  report(10, "determinism", [&] {
    case_study second = run_case_study();
    if (second.trace_text != first.trace_text)
      return outcome{false, "generated traces differ"};
    for (std::size_t i = 0; i < first.runs.size(); ++i)
      if (second.runs[i].verdicts != first.runs[i].verdicts ||
          second.runs[i].stream_hash != first.runs[i].stream_hash)
        return outcome{false, "monitoring run " + std::to_string(i) + " differs"};
    return outcome{true, "trace (" + std::to_string(first.trace_text.size()) +
                             " bytes) and all four per-step value streams identical across two runs"};
  });

  return failures == 0 ? 0 : 1;
}
