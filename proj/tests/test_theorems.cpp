#include <map>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include <congrel/corpus.hpp>
#include <congrel/theorems.hpp>

#include "oracle.hpp"

using namespace congrel;

namespace {

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

BinRel rel(std::size_t n, PairList pairs) { return reflexive_closure(BinRel::from_pairs(n, pairs)); }

struct BruteHypothesis {
  std::size_t instances = 0;
  std::size_t failing_subalgebras = 0;
};

// Every 4-tuple of A x A, subalgebra by naive rounds, congruences by filtering
// partitions, hypothesis with std::set relations.
BruteHypothesis brute_hypothesis(const FiniteAlgebra &A) {
  const std::size_t n = A.size();
  const FiniteAlgebra sq = square(A);
  std::set<std::set<Element>> seen;
  BruteHypothesis out;
  for (const auto &t : oracle::tuples(4, n * n)) {
    std::set<Element> seeds;
    for (auto x : t)
      seeds.insert(static_cast<Element>(x));
    const auto elems = oracle::subuniverse(sq, seeds);
    if (!seen.insert(elems).second)
      continue;
    auto sub = generate_subuniverse(sq, std::vector<Element>(elems.begin(), elems.end()));
    const auto congs = oracle::congruences(sub.induced);
    bool failed = false;
    for (const auto &gamma : congs)
      for (const auto &delta : congs) {
        const auto gdg = oracle::compose(oracle::compose(gamma, delta), gamma);
        for (const auto &beta : congs) {
          if (!std::includes(beta.begin(), beta.end(), delta.begin(), delta.end()))
            continue;
          ++out.instances;
          const auto rhs = oracle::transitive_closure(oracle::unite(oracle::meet(beta, gamma), delta));
          const auto lhs = oracle::meet(beta, gdg);
          if (!std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end()))
            failed = true;
        }
      }
    out.failing_subalgebras += failed;
  }
  return out;
}

} // namespace

TEST(Claims, TheoremNames) {
  for (auto t : all_theorems)
    EXPECT_EQ(theorem_from_string(to_string(t)), t);
  EXPECT_THROW(theorem_from_string("nope"), InputError);
}

TEST(VerifySubrel, DiagonalHolds) {
  const auto A = corpus::z4();
  for (const auto &alpha : enumerate_congruences(A)) {
    auto rep = verify_subrel(A, alpha, diagonal(4), diagonal(4));
    EXPECT_TRUE(rep.holds());
    EXPECT_EQ(rep.instances_checked, 1u);
  }
}

TEST(VerifySubrel, FullAlphaOnZ2) {
  const auto A = corpus::z2();
  for (const auto &R : all_reflexive(2))
    for (const auto &S : all_reflexive(2))
      EXPECT_TRUE(verify_subrel(A, Partition::total(2), R, S).holds());
}

TEST(VerifySubrel, PureThreeSetFails) {
  // frozen by direct set computation: left side picks up (0,2) from R;S, the
  // right side collapses to the diagonal without operations
  const auto A = corpus::pure_set(3);
  const auto alpha = Partition::from_blocks(3, {{0, 2}, {1}});
  auto rep = verify_subrel(A, alpha, rel(3, {{0, 1}}), rel(3, {{1, 2}}));
  ASSERT_FALSE(rep.holds());
  EXPECT_EQ(rep.violations[0].missing_pair, (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(rep.violations[0].failed_claim, claims::subrel);
  EXPECT_TRUE(replay(A, rep.violations[0]));
}

TEST(VerifySubrelpiu, Examples) {
  const auto Z4 = corpus::z4();
  EXPECT_TRUE(verify_subrelpiu(Z4, Partition::identity(4), rel(4, {{0, 1}}), rel(4, {{2, 3}})).holds());
  EXPECT_TRUE(verify_subrelpiu(Z4, Partition::total(4), diagonal(4), diagonal(4)).holds());
  const auto half = Partition::from_blocks(4, {{0, 2}, {1, 3}});
  const auto R = rel(4, {{0, 1}});
  EXPECT_TRUE(verify_subrelpiu(Z4, half, R, diagonal(4)).holds());
  EXPECT_EQ(cg(R, Z4, CgStrategy::formula), Partition::total(4));
  EXPECT_EQ(cg(R, Z4, CgStrategy::unionfind), Partition::total(4));
}

TEST(VerifyWtip, Examples) {
  const auto Z4 = corpus::z4();
  const auto half = Partition::from_blocks(4, {{0, 2}, {1, 3}});
  const auto theta = compatible_closure(rel(4, {{0, 1}, {1, 0}}), Z4);
  EXPECT_TRUE(verify_wtip(Z4, half, theta).holds());
  for (const auto &a : enumerate_congruences(Z4))
    for (const auto &t : enumerate_congruences(Z4))
      EXPECT_TRUE(verify_wtip(Z4, a, t.to_relation()).holds());
}

TEST(VerifyRr, Examples) {
  const auto K = corpus::z2xz2();
  const auto R = rel(4, {{0, 1}});
  for (const auto &alpha : enumerate_congruences(K))
    EXPECT_TRUE(verify_rr(K, alpha, R).holds()) << alpha.to_string();
  EXPECT_TRUE(verify_rr(K, Partition::identity(4), R).holds());
}

TEST(Verify, PreconditionsChecked) {
  const auto Z4 = corpus::z4();
  BinRel nonrefl(4);
  nonrefl.set(0, 1);
  const auto bad_alpha = Partition::from_blocks(4, {{0, 1}, {2}, {3}});
  EXPECT_THROW(verify_subrel(Z4, Partition::identity(4), nonrefl, diagonal(4)), SortError);
  EXPECT_THROW(verify_subrelpiu(Z4, Partition::identity(4), diagonal(4), nonrefl), SortError);
  EXPECT_THROW(verify_subrel(Z4, bad_alpha, diagonal(4), diagonal(4)), SortError);
  EXPECT_THROW(verify_wtip(Z4, Partition::identity(4), rel(4, {{0, 1}})), SortError);
  EXPECT_THROW(verify_rr(Z4, Partition::identity(4), nonrefl), SortError);
  EXPECT_THROW(verify_rr(Z4, Partition::identity(3), diagonal(3)), SizeMismatch);
}

TEST(FourGenerated, DedupedAndComplete) {
  const auto A = corpus::z2();
  auto subs = four_generated_subsquares(A);
  std::set<std::vector<Element>> keys;
  for (const auto &g : subs)
    EXPECT_TRUE(keys.insert(g.subsquare.subuniverse().sorted_elements()).second);
  // subgroups of Z2 x Z2: trivial, three of order 2, whole
  EXPECT_EQ(subs.size(), 5u);
  EXPECT_EQ(four_generated_subsquares(A, 1).size(), 1u);
}

TEST(CheckHypothesis, TrivialAlgebra) {
  auto rep = check_hypothesis(corpus::trivial());
  EXPECT_TRUE(rep.holds());
  EXPECT_EQ(rep.instances_checked, 1u);
}

TEST(CheckHypothesis, MatchesBruteForce) {
  for (const auto &name : {"z2", "pureset2", "bool2"}) {
    const auto A = corpus::builtin(name);
    const auto brute = brute_hypothesis(A);
    SubsquareCheckOptions opts;
    opts.max_violations = 1000;
    auto rep = check_hypothesis(A, opts);
    EXPECT_EQ(rep.holds(), brute.failing_subalgebras == 0) << name;
    EXPECT_EQ(rep.violations.size(), brute.failing_subalgebras) << name;
    if (rep.holds())
      EXPECT_EQ(rep.instances_checked, brute.instances) << name;
  }
}

TEST(CheckHypothesis, PureFourSetFails) {
  const auto A = corpus::pure_set(4);
  auto rep = check_hypothesis(A);
  ASSERT_FALSE(rep.holds());
  EXPECT_LE(rep.violations.size(), 10u);
  const auto &v = rep.violations[0];
  EXPECT_EQ(v.generators.size(), 4u);
  EXPECT_TRUE(replay(A, v));
  // the failing B is a bare 4-set, whose partition lattice is not modular
  auto B = generate_subsquare(A, v.generators);
  EXPECT_EQ(B.size(), 4u);
  EXPECT_EQ(oracle::congruences(B.induced()).size(), 15u);
}

TEST(CheckHypothesis, BoundEnforced) {
  SubsquareCheckOptions opts;
  opts.limits.max_size = 3;
  EXPECT_THROW(check_hypothesis(corpus::pure_set(4), opts), BoundExceeded);
  EXPECT_THROW(check_modularity_subsquares(corpus::pure_set(4), opts), BoundExceeded);
}

TEST(CheckHypothesis, JobsDoNotChangeOutput) {
  const auto A = corpus::pure_set(3);
  SubsquareCheckOptions one, four;
  four.jobs = 4;
  one.max_violations = four.max_violations = 3;
  auto a = check_hypothesis(A, one), b = check_hypothesis(A, four);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Modularity, ImpliesHypothesisPerSubalgebra) {
  for (const auto &A : corpus::all()) {
    if (A.size() > 4)
      continue;
    for (const auto &g : four_generated_subsquares(A)) {
      const auto mod = detail::check_subsquare(g, detail::SubsquareLaw::modularity, {});
      const auto hyp = detail::check_subsquare(g, detail::SubsquareLaw::hypothesis, {});
      if (mod.violations.empty())
        EXPECT_TRUE(hyp.violations.empty()) << A.name();
    }
  }
}

TEST(Modularity, AgreesOnCorpus) {
  for (const auto &name : {"trivial", "z2", "z4", "bool2", "pureset2", "pureset3"}) {
    const auto A = corpus::builtin(name);
    EXPECT_EQ(check_modularity_subsquares(A).holds(), check_hypothesis(A).holds()) << name;
  }
}

TEST(WitnessChain, DegenerateIsLengthZero) {
  const auto Z4 = corpus::z4();
  auto out = witness_chain(Z4, Partition::total(4), 2, 2, 2, diagonal(4), diagonal(4));
  ASSERT_TRUE(out.found());
  EXPECT_EQ(out.chain->length(), 0u);
  EXPECT_EQ(validate_chain(Z4, Partition::total(4), diagonal(4), diagonal(4), 2, 2, *out.chain), std::nullopt);
}

TEST(WitnessChain, Z4FullAlpha) {
  const auto Z4 = corpus::z4();
  const auto R = compatible_closure(rel(4, {{0, 1}}), Z4);
  const auto alpha = Partition::total(4);
  auto out = witness_chain(Z4, alpha, 0, 1, 2, R, R);
  ASSERT_TRUE(out.found()) << out.diagnostic;
  const auto &ch = *out.chain;
  EXPECT_EQ(validate_chain(Z4, alpha, R, R, 0, 2, ch), std::nullopt);
  EXPECT_EQ(ch.length() % 2, 0u);
  for (std::size_t i = 0; i < ch.length(); ++i)
    EXPECT_EQ(ch.links[i], i % 2 ? LinkKind::x_step : LinkKind::y_step);
}

TEST(WitnessChain, StaysInsideAlphaClass) {
  const auto Z4 = corpus::z4();
  const auto half = Partition::from_blocks(4, {{0, 2}, {1, 3}});
  const auto R = rel(4, {{0, 2}, {2, 0}});
  auto out = witness_chain(Z4, half, 0, 2, 0, R, R);
  ASSERT_TRUE(out.found()) << out.diagnostic;
  for (std::size_t i = 0; i <= out.chain->length(); ++i) {
    EXPECT_TRUE(half.related(out.chain->x(i), 0));
    EXPECT_TRUE(half.related(out.chain->y(i), 0));
  }
}

TEST(WitnessChain, ValidatesOnRandomInstances) {
  std::mt19937_64 rng(17);
  for (const auto &name : {"z2", "z4", "z2xz2", "bool4", "m3"}) {
    const auto A = corpus::builtin(name);
    const auto congs = enumerate_congruences(A);
    const std::size_t n = A.size();
    int found = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto &alpha = congs[uniform_index(rng, congs.size())];
      const auto R = sample_reflexive(n, rng), S = sample_reflexive(n, rng);
      const Element a = static_cast<Element>(uniform_index(rng, n));
      const Element c = static_cast<Element>(uniform_index(rng, n));
      if (!alpha.related(a, c))
        continue;
      for (Element b = 0; b < n; ++b) {
        if (!R.test(a, b) || !S.test(b, c))
          continue;
        auto out = witness_chain(A, alpha, a, b, c, R, S);
        ASSERT_TRUE(out.found()) << name << ": " << out.diagnostic;
        EXPECT_EQ(validate_chain(A, alpha, R, S, a, c, *out.chain), std::nullopt) << name;
        ++found;
      }
    }
    EXPECT_GT(found, 0) << name;
  }
}

TEST(WitnessChain, ReportsDisconnection) {
  const auto P = corpus::pure_set(3);
  const auto alpha = Partition::from_blocks(3, {{0, 2}, {1}});
  auto out = witness_chain(P, alpha, 0, 1, 2, rel(3, {{0, 1}}), rel(3, {{1, 2}}));
  EXPECT_FALSE(out.found());
  EXPECT_FALSE(out.diagnostic.empty());
}

TEST(WitnessChain, PreconditionsChecked) {
  const auto Z4 = corpus::z4();
  const auto half = Partition::from_blocks(4, {{0, 2}, {1, 3}});
  EXPECT_THROW(witness_chain(Z4, half, 0, 1, 1, full(4), full(4)), SortError);
  EXPECT_THROW(witness_chain(Z4, half, 0, 1, 2, diagonal(4), full(4)), SortError);
}

TEST(ValidateChain, DetectsTampering) {
  const auto Z4 = corpus::z4();
  const auto R = full(4);
  auto out = witness_chain(Z4, Partition::total(4), 0, 1, 2, R, R);
  ASSERT_TRUE(out.found());
  auto broken = *out.chain;
  broken.positions.back() = broken.subsquare.index_of(0, 0);
  EXPECT_NE(validate_chain(Z4, Partition::total(4), R, R, 0, 2, broken), std::nullopt);
  auto relinked = *out.chain;
  if (relinked.length() > 0) {
    relinked.links[0] = LinkKind::x_step;
    EXPECT_NE(validate_chain(Z4, Partition::total(4), R, R, 0, 2, relinked), std::nullopt);
  }
}

TEST(Sweep, TrivialAlgebraOneInstanceEach) {
  SweepOptions opts;
  opts.strategy = Strategy::exhaust;
  for (const auto &rep : sweep(corpus::trivial(), opts)) {
    EXPECT_TRUE(rep.holds()) << rep.theorem;
    EXPECT_EQ(rep.instances_checked, 1u) << rep.theorem;
  }
}

TEST(Sweep, Z2ExhaustCounts) {
  SweepOptions opts;
  opts.strategy = Strategy::exhaust;
  // 2 congruences, 4 reflexive relations, 2 tolerances
  const std::map<std::string, std::size_t> expected{{"subrel", 32}, {"subrelpiu", 32}, {"wtip", 4}, {"rr", 8}};
  auto reps = sweep(corpus::z2(), opts);
  ASSERT_EQ(reps.size(), 4u);
  for (const auto &rep : reps) {
    EXPECT_TRUE(rep.holds()) << rep.theorem;
    EXPECT_EQ(rep.instances_checked, expected.at(rep.theorem));
  }
}

TEST(Sweep, Z4PrincipalAndSample) {
  SweepOptions opts;
  opts.samples = 200;
  for (auto s : {Strategy::principal, Strategy::sample}) {
    opts.strategy = s;
    for (const auto &rep : sweep(corpus::z4(), opts))
      EXPECT_TRUE(rep.holds()) << rep.theorem;
  }
}

TEST(Sweep, PureThreeSetExhaustFindsSubrelFailure) {
  SweepOptions opts;
  opts.strategy = Strategy::exhaust;
  auto rep = sweep_theorem(corpus::pure_set(3), Theorem::subrel, opts);
  ASSERT_FALSE(rep.holds());
  for (const auto &v : rep.violations)
    EXPECT_TRUE(replay(corpus::pure_set(3), v));
}

TEST(Sweep, ExhaustRejectsLargeAlgebra) {
  SweepOptions opts;
  opts.strategy = Strategy::exhaust;
  EXPECT_THROW(sweep(corpus::z4(), opts), BoundExceeded);
}

TEST(Sweep, DeterministicAcrossJobs) {
  SweepOptions a, b;
  a.samples = b.samples = 100;
  b.jobs = 3;
  for (auto t : all_theorems) {
    auto x = sweep_theorem(corpus::pure_set(4), t, a);
    auto y = sweep_theorem(corpus::pure_set(4), t, b);
    EXPECT_EQ(to_json(x).dump(), to_json(y).dump());
  }
}

TEST(Search, NoneOnGoodAlgebras) {
  for (const auto &name : {"trivial", "z2", "z4", "bool4"})
    EXPECT_EQ(search_counterexample(corpus::builtin(name), 400, 7), std::nullopt) << name;
}

TEST(Search, DeterministicUnderSeed) {
  const auto A = corpus::pure_set(4);
  auto a = search_counterexample(A, 2000, 3);
  auto b = search_counterexample(A, 2000, 3);
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) {
    EXPECT_EQ(to_json(*a).dump(), to_json(*b).dump());
    EXPECT_TRUE(replay(A, *a));
  }
}

TEST(Replay, RejectsTamperedBinding) {
  const auto A = corpus::pure_set(3);
  const auto alpha = Partition::from_blocks(3, {{0, 2}, {1}});
  auto rep = verify_subrel(A, alpha, rel(3, {{0, 1}}), rel(3, {{1, 2}}));
  ASSERT_FALSE(rep.holds());
  auto v = rep.violations[0];
  for (auto &[name, r] : v.binding)
    if (name == "S")
      r = diagonal(3);
  EXPECT_FALSE(replay(A, v));
}

TEST(Report, JsonShape) {
  auto rep = verify_subrel(corpus::pure_set(3), Partition::from_blocks(3, {{0, 2}, {1}}), rel(3, {{0, 1}}),
                           rel(3, {{1, 2}}));
  auto j = to_json(rep);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it)
    keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"algebra", "theorem", "result", "instances_checked", "violations",
                                            "elapsed_ms"}));
  EXPECT_EQ(j["result"], "fails");
  EXPECT_EQ(j["elapsed_ms"], 0);
  EXPECT_EQ(j["violations"][0]["missing_pair"], nlohmann::json::array({0, 2}));
}
