#include <gtest/gtest.h>

#include "support.hpp"

using namespace strel;
using namespace strel::test;

namespace {
using B = boolean_algebra;
using M = minmax_algebra;

formula compiled(const formula &f) { return eliminate_intervals(desugar(f)); }
formula compiled(const std::string &text) { return compiled(parse(text)); }

/// Automaton whose until transitions drop the `ψ` branch
template <de_morgan_algebra A>
struct weak_until_automaton : automaton<A> {
  using automaton<A>::automaton;
  using typename automaton<A>::poly;
  using typename automaton<A>::transition_cache;

  [[nodiscard]] const poly &delta(const state_var &q, transition_cache &c) const {
    const formula &g = this->formulas().formulas[q.formula];
    if (g.kind() == op::until) {
      static thread_local poly pending;
      pending = automaton<A>::delta(this->formulas().at(g.child(0)), q.loc, c) *
                poly::var(this->state(q.formula, q.loc));
      return pending;
    }
    return automaton<A>::delta(q, c);
  }
};

/// Automaton whose terminal weighting accepts every pending state
template <de_morgan_algebra A>
struct lenient_automaton : automaton<A> {
  using automaton<A>::automaton;
  [[nodiscard]] static typename A::value_type terminal(const state_var &) { return A::top(); }
};

template <class A> void equivalence(std::uint64_t seed, int n) {
  random_source src(seed);
  for (int i = 0; i < n; ++i) {
    instance c = src.random_instance();
    auto bad = check_instance<A>(c);
    ASSERT_FALSE(bad) << bad->to_string();
  }
}
} // namespace

TEST(Monitor, Start) {
  auto locs = std::make_shared<const universe>(std::vector<std::string>{"a", "b"});
  automaton<B> aut(compiled("G p"), locs);
  monitor<B> m(aut, 0);
  EXPECT_EQ(m.state(), aut.initial(0));
  EXPECT_EQ(m.steps(), 0u);
  EXPECT_FALSE(m.conclusive());
  EXPECT_EQ(m.current_value(), true);
  EXPECT_THROW(monitor<B>(aut, 5), error);
}

TEST(Monitor, StepExamples) {
  auto tr = single_location_trace({true, false});
  const auto &locs = tr.front().shared_locations();

  automaton<B> x(parse("X p"), locs);
  monitor<B> mx(x, 0);
  mx.step(tr[0]);
  auto p_idx = static_cast<std::uint32_t>(x.formulas().at(atom("p")));
  EXPECT_EQ(mx.state(), automaton<B>::poly::var({p_idx, 0, false}));
  EXPECT_EQ(mx.current_value(), false);
  mx.step(tr[1]);
  EXPECT_TRUE(mx.conclusive());
  EXPECT_EQ(mx.current_value(), false);

  automaton<B> p(parse("p"), locs);
  monitor<B> mp(p, 0);
  mp.step(tr[0]);
  EXPECT_TRUE(mp.conclusive());
  EXPECT_EQ(mp.state(), automaton<B>::poly::top());
  mp.step(tr[1]);
  EXPECT_EQ(mp.state(), automaton<B>::poly::top());
  EXPECT_EQ(mp.steps(), 2u);

  std::vector<spatial_model> two{g1(0), g1(1)};
  automaton<B> gq(compiled("G q"), two.front().shared_locations());
  monitor<B> mg(gq, 0);
  for (const auto &s : two) {
    mg.step(s);
    EXPECT_EQ(mg.state(), gq.initial(0));
  }
  EXPECT_EQ(mg.current_value(), true);
  EXPECT_EQ(mg.current_value(), eval_semantics<B>(two, parse("G q"), 0));

  auto other = validate_model({{"z", "k", {}}}, {});
  EXPECT_THROW(mg.step(other), model_error);
}

TEST(Monitor, CurrentValueUsesTerminalWeights) {
  auto locs = std::make_shared<const universe>(std::vector<std::string>{"a"});
  automaton<B> u(parse("p U q"), locs);
  EXPECT_EQ(monitor<B>(u, 0).current_value(), false);
  automaton<B> g(compiled("G p"), locs);
  EXPECT_EQ(monitor<B>(g, 0).current_value(), true);
  automaton<M> gm(compiled("G p"), locs);
  EXPECT_EQ(monitor<M>(gm, 0).current_value(), M::top());
}

TEST(Monitor, OfflineExamples) {
  std::vector<spatial_model> tr{g1()};
  const auto &locs = tr.front().shared_locations();
  automaton<B> s(compiled("somewhere[hops][0,2] p"), locs);
  EXPECT_EQ(run_offline(s, std::span<const spatial_model>(tr), 0), true);
  automaton<M> b(compiled("somewhere[hops][0,1] (battery >= 4)"), locs);
  EXPECT_EQ(run_offline(b, std::span<const spatial_model>(tr), 0), 1.0);
  std::vector<spatial_model> empty;
  EXPECT_THROW(run_offline(s, std::span<const spatial_model>(empty), 0), error);
}

TEST(Monitor, OracleEquivalenceBoolean) { equivalence<B>(101, 1000); }
TEST(Monitor, OracleEquivalenceMinMax) { equivalence<M>(202, 1000); }

TEST(Monitor, OracleEquivalenceWeightedDistances) {
  random_options opts;
  opts.max_locations = 5;
  opts.max_len = 6;
  opts.max_time = 2;
  random_source src(303, opts);
  for (int i = 0; i < 400; ++i) {
    instance c = src.random_instance();
    auto b = check_instance<B>(c);
    ASSERT_FALSE(b) << b->to_string();
    auto m = check_instance<M>(c);
    ASSERT_FALSE(m) << m->to_string();
  }
}

TEST(Monitor, OracleEquivalenceOnEveryPrefix) {
  random_source src(404);
  for (int i = 0; i < 300; ++i) {
    instance c = src.random_instance();
    std::span<const spatial_model> tr(c.trace);
    automaton<M> aut(compiled(c.f), tr.front().shared_locations());
    monitor<M> m(aut, c.ego);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      m.step(tr[k]);
      EXPECT_EQ(m.current_value(), eval_semantics<M>(tr.first(k + 1), c.f, c.ego)) << to_string(c.f);
    }
  }
}

TEST(Monitor, OnlineReadsDoNotPerturbResult) {
  random_source src(505);
  for (int i = 0; i < 300; ++i) {
    instance c = src.random_instance();
    std::span<const spatial_model> tr(c.trace);
    automaton<M> aut(compiled(c.f), tr.front().shared_locations());
    monitor<M> m(aut, c.ego);
    for (const auto &s : tr) {
      (void)m.current_value();
      m.step(s);
      (void)m.current_value();
    }
    EXPECT_EQ(m.current_value(), run_offline(aut, tr, c.ego));
  }
}

TEST(Monitor, BooleanConclusivenessIsMonotone) {
  random_source src(606);
  int concluded = 0;
  for (int i = 0; i < 500; ++i) {
    instance c = src.random_instance();
    automaton<B> aut(compiled(c.f), c.trace.front().shared_locations());
    monitor<B> m(aut, c.ego);
    std::optional<bool> fixed;
    for (const auto &s : c.trace) {
      m.step(s);
      EXPECT_EQ(m.conclusive(), m.state().is_constant());
      if (fixed) {
        EXPECT_TRUE(m.conclusive());
        EXPECT_EQ(m.current_value(), *fixed);
      } else if (m.conclusive()) {
        fixed = m.current_value();
        ++concluded;
      }
    }
  }
  EXPECT_GT(concluded, 50);
}

TEST(Monitor, SupportHoldsOnlyTemporalObligations) {
  random_source src(707);
  for (int i = 0; i < 500; ++i) {
    instance c = src.random_instance();
    automaton<B> aut(compiled(c.f), c.trace.front().shared_locations());
    const auto &cl = aut.formulas();
    std::vector<bool> allowed(cl.size(), false);
    for (std::size_t k = 0; k < cl.size(); ++k) {
      const formula &g = cl.formulas[k];
      if (g.kind() == op::until) {
        allowed[k] = allowed[cl.negation[k]] = true;
      } else if (g.kind() == op::next) {
        std::size_t s = cl.at(g.child(0));
        allowed[s] = allowed[cl.negation[s]] = true;
      }
    }
    monitor<B> m(aut, c.ego);
    for (const auto &s : c.trace) {
      m.step(s);
      for (const auto &q : m.state().support())
        EXPECT_TRUE(allowed[q.formula]) << to_string(cl.formulas[q.formula]);
    }
  }
}

TEST(Monitor, SnapshotRestore) {
  random_source src(808);
  for (int i = 0; i < 300; ++i) {
    instance c = src.random_instance();
    std::span<const spatial_model> tr(c.trace);
    automaton<M> aut(compiled(c.f), tr.front().shared_locations());
    monitor<M> a(aut, c.ego);
    std::size_t half = tr.size() / 2;
    for (std::size_t k = 0; k < half; ++k)
      a.step(tr[k]);
    monitor<M> b(aut, c.ego);
    b.restore(a.snapshot(), a.steps());
    EXPECT_EQ(b.state(), a.state());
    EXPECT_EQ(b.steps(), half);
    for (std::size_t k = half; k < tr.size(); ++k)
      b.step(tr[k]);
    EXPECT_EQ(b.current_value(), run_offline(aut, tr, c.ego));
  }
  auto locs = std::make_shared<const universe>(std::vector<std::string>{"a"});
  automaton<B> aut(parse("p U q"), locs);
  monitor<B> m(aut, 0);
  EXPECT_THROW(m.restore("⊤*q0.nowhere", 0), error);
}

TEST(Monitor, EgosShareOneCache) {
  random_source src(909);
  for (int i = 0; i < 200; ++i) {
    instance c = src.random_instance();
    std::span<const spatial_model> tr(c.trace);
    automaton<M> aut(compiled(c.f), tr.front().shared_locations());
    std::vector<monitor<M>> ms;
    for (location l = 0; l < tr.front().size(); ++l)
      ms.emplace_back(aut, l);
    for (const auto &s : tr) {
      automaton<M>::transition_cache cache(aut, s);
      for (auto &m : ms)
        m.step(cache);
    }
    for (auto &m : ms)
      EXPECT_EQ(m.current_value(), run_offline(aut, tr, m.ego()));
  }
}

TEST(Monitor, HarnessCatchesMutatedAutomata) {
  auto find = [](auto make) -> std::optional<counterexample> {
    random_source src(1234);
    for (int i = 0; i < 1000; ++i)
      if (auto bad = check_with<B>(src.random_instance(), make))
        return bad;
    return std::nullopt;
  };
  auto weak = find([](formula f, std::shared_ptr<const universe> l) {
    return weak_until_automaton<B>(std::move(f), std::move(l));
  });
  ASSERT_TRUE(weak);
  EXPECT_NE(weak->to_string().find("formula: "), std::string::npos);
  EXPECT_NE(weak->automaton_value, weak->oracle_value);

  auto lenient = find([](formula f, std::shared_ptr<const universe> l) {
    return lenient_automaton<B>(std::move(f), std::move(l));
  });
  ASSERT_TRUE(lenient);
  EXPECT_NE(lenient->trace.find("\"universe\""), std::string::npos);
}
