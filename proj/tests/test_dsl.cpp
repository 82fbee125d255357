#include <random>
#include <string>

#include <gtest/gtest.h>

#include <congrel/corpus.hpp>
#include <congrel/dsl.hpp>

using namespace congrel;
using dsl::Expr;
using K = dsl::Expr::Kind;

namespace {

std::string parse_error(const std::string &text) {
  try {
    dsl::parse(text);
  } catch (const ParseError &e) {
    return e.what();
  }
  return {};
}

// random well-formed expression over the given variables
Expr random_expr(std::mt19937_64 &rng, int depth) {
  static const char *vars[] = {"R", "S", "a"};
  if (depth == 0 || rng() % 4 == 0) {
    switch (rng() % 5) {
    case 0:
      return Expr{K::diagonal, {}, {}};
    case 1:
      return Expr{K::full, {}, {}};
    default:
      return Expr::var(vars[rng() % 3]);
    }
  }
  static const K binaries[] = {K::join, K::unite, K::compose, K::meet};
  static const K unaries[] = {K::star, K::converse, K::closure, K::cg};
  if (rng() % 2)
    return Expr::binary(binaries[rng() % 4], random_expr(rng, depth - 1), random_expr(rng, depth - 1));
  return Expr::unary(unaries[rng() % 4], random_expr(rng, depth - 1));
}

BinRel rel(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  return reflexive_closure(BinRel::from_pairs(n, pairs));
}

} // namespace

TEST(Parse, WtipStatement) {
  auto s = dsl::parse("forall a:Cong, T:Tol . a & T* = (a & T)*");
  ASSERT_EQ(s.quantifiers.size(), 2u);
  EXPECT_EQ(s.quantifiers[0], (dsl::Quantifier{"a", dsl::Sort::cong}));
  EXPECT_EQ(s.quantifiers[1], (dsl::Quantifier{"T", dsl::Sort::tol}));
  EXPECT_EQ(s.relation, dsl::Relation::equal);
  const Expr a = Expr::var("a"), T = Expr::var("T");
  EXPECT_EQ(s.lhs, Expr::binary(K::meet, a, Expr::unary(K::star, T)));
  EXPECT_EQ(s.rhs, Expr::unary(K::star, Expr::binary(K::meet, a, T)));
}

TEST(Parse, TrivialStatement) {
  auto s = dsl::parse("forall R:Refl . R <= R");
  EXPECT_EQ(s.relation, dsl::Relation::included);
  EXPECT_EQ(s.lhs, Expr::var("R"));
}

TEST(Parse, Precedence) {
  auto s = dsl::parse("forall R:Refl, S:Refl . R + S ; R & S^- | R <= 1");
  const Expr R = Expr::var("R"), S = Expr::var("S");
  // + < | < ; < & < postfix
  const Expr meet = Expr::binary(K::meet, R, Expr::unary(K::converse, S));
  const Expr comp = Expr::binary(K::compose, S, meet);
  EXPECT_EQ(s.lhs, Expr::binary(K::join, R, Expr::binary(K::unite, comp, R)));
  EXPECT_EQ(s.rhs.kind, K::full);
}

TEST(Parse, LeftAssociative) {
  auto s = dsl::parse("forall R:Refl, S:Refl . R ; S ; R <= 0");
  const Expr R = Expr::var("R"), S = Expr::var("S");
  EXPECT_EQ(s.lhs, Expr::binary(K::compose, Expr::binary(K::compose, R, S), R));
}

TEST(Parse, UndeclaredVariable) {
  auto msg = parse_error("forall a:Cong . a & b* <= a");
  EXPECT_NE(msg.find("undeclared"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  EXPECT_EQ(msg.rfind("1:21:", 0), 0u) << msg;
}

TEST(Parse, ErrorsCarryLineAndColumn) {
  auto msg = parse_error("forall R:Refl .\n  R <= (R ;");
  EXPECT_EQ(msg.rfind("2:", 0), 0u) << msg;
  EXPECT_FALSE(parse_error("forall R:Refl, R:Tol . R <= R").empty());
  EXPECT_NE(parse_error("forall R:Refl, R:Tol . R <= R").find("duplicate"), std::string::npos);
  EXPECT_NE(parse_error("forall R:Group . R <= R").find("sort"), std::string::npos);
  EXPECT_FALSE(parse_error("forall R:Refl . R").empty());
  EXPECT_FALSE(parse_error("forall R:Refl . R <= R extra").empty());
  EXPECT_FALSE(parse_error("forall cl:Refl . cl <= cl").empty());
  EXPECT_FALSE(parse_error("forall R:Refl . R <= R $").empty());
  EXPECT_FALSE(parse_error("forall R:Refl . cl R <= R").empty());
}

TEST(Parse, ForallIsOptional) {
  auto s = dsl::parse("0 <= 1");
  EXPECT_TRUE(s.quantifiers.empty());
}

TEST(Print, MinimalParentheses) {
  EXPECT_EQ(dsl::print(dsl::parse("forall a:Cong, T:Tol . (a & (T*)) = ((a & T))*")),
            "forall a:Cong, T:Tol . a & T* = (a & T)*");
  EXPECT_EQ(dsl::print(dsl::parse("forall R:Refl, S:Refl . R ; (S ; R) <= (R ; S) ; R")),
            "forall R:Refl, S:Refl . R ; (S ; R) <= R ; S ; R");
  EXPECT_EQ(dsl::print(dsl::parse("forall R:Refl . (R^-)^- <= cl((R))")), "forall R:Refl . R^-^- <= cl(R)");
}

TEST(Print, RoundTripOnRandomExpressions) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    dsl::Statement s;
    s.quantifiers = {{"a", dsl::Sort::cong}, {"R", dsl::Sort::refl}, {"S", dsl::Sort::refl}};
    s.relation = rng() % 2 ? dsl::Relation::equal : dsl::Relation::included;
    s.lhs = random_expr(rng, 4);
    s.rhs = random_expr(rng, 4);
    const std::string text = dsl::print(s);
    const auto back = dsl::parse(text);
    EXPECT_EQ(back, s) << text;
    EXPECT_EQ(dsl::print(back), text);
  }
}

TEST(Print, BuiltinClaimsAreCanonical) {
  for (auto t : all_theorems)
    for (const auto &text : theorem_statements(t))
      EXPECT_EQ(dsl::print(dsl::parse(text)), text);
}

TEST(Evaluate, Constants) {
  const auto A = corpus::z4();
  EXPECT_EQ(dsl::evaluate(A, {}, Expr{K::diagonal, {}, {}}), diagonal(4));
  EXPECT_EQ(dsl::evaluate(A, {}, Expr{K::full, {}, {}}), full(4));
}

TEST(Evaluate, CgOnZ4) {
  const auto A = corpus::z4();
  const auto s = dsl::parse("forall R:Refl . cg(R) <= 1");
  dsl::Environment env{{"R", rel(4, {{0, 1}})}};
  EXPECT_EQ(dsl::evaluate(A, env, s.lhs), full(4));
  EXPECT_EQ(dsl::evaluate(A, env, s.lhs), cg(env.at("R"), A).to_relation());
}

TEST(Evaluate, MatchesDirectCalls) {
  std::mt19937_64 rng(9);
  const auto A = corpus::m3();
  const auto s = dsl::parse("forall R:Refl, S:Refl . R ; S <= cl(R | S^-) + R^-*");
  for (int i = 0; i < 100; ++i) {
    BinRel R = sample_reflexive(5, rng), S = sample_reflexive(5, rng);
    dsl::Environment env{{"R", R}, {"S", S}};
    EXPECT_EQ(dsl::evaluate(A, env, s.lhs), compose(R, S));
    EXPECT_EQ(dsl::evaluate(A, env, s.rhs),
              rel_plus(compatible_closure(R | converse(S), A), transitive_closure(converse(R))));
  }
}

TEST(Evaluate, JoinNeedsReflexiveOperands) {
  const auto A = corpus::z2();
  const auto s = dsl::parse("forall R:Refl . R + R <= 1");
  BinRel bare(2);
  bare.set(0, 1);
  EXPECT_THROW(dsl::evaluate(A, {{"R", bare}}, s.lhs), SortError);
  EXPECT_THROW(dsl::evaluate(A, {}, s.lhs), SortError);
}

TEST(CheckSorts, RejectsWrongSort) {
  const auto A = corpus::z4();
  const auto s = dsl::parse("forall a:Cong, T:Tol . a <= T");
  EXPECT_NO_THROW(dsl::check_sorts(A, s, {{"a", diagonal(4)}, {"T", full(4)}}));
  EXPECT_THROW(dsl::check_sorts(A, s, {{"a", rel(4, {{0, 1}})}, {"T", full(4)}}), SortError);
  EXPECT_THROW(dsl::check_sorts(A, s, {{"a", diagonal(4)}}), SortError);
}

TEST(CheckStatement, WtipOnZ4Exhaust) {
  const auto A = corpus::z4();
  SweepOptions opts;
  opts.strategy = Strategy::exhaust;
  auto rep = dsl::check_statement(A, dsl::parse("forall a:Cong, T:Tol . a & T* = (a & T)*"), opts);
  EXPECT_TRUE(rep.holds());
  auto direct = sweep_theorem(A, Theorem::wtip, opts);
  EXPECT_EQ(rep.instances_checked, direct.instances_checked);
  EXPECT_EQ(rep.instances_checked, 9u);
}

TEST(CheckStatement, ClosureIsExtensive) {
  SweepOptions opts;
  opts.samples = 50;
  for (const auto &A : corpus::all())
    EXPECT_TRUE(dsl::check_statement(A, dsl::parse("forall R:Refl . R <= R*"), opts).holds()) << A.name();
}

TEST(CheckStatement, CompositionNotCommutative) {
  const auto A = corpus::pure_set(3);
  SweepOptions opts;
  opts.strategy = Strategy::exhaust;
  auto rep = dsl::check_statement(A, dsl::parse("forall R:Refl, S:Refl . R;S = S;R"), opts);
  ASSERT_FALSE(rep.holds());
  EXPECT_EQ(rep.instances_checked, 64u * 64u);
  const auto &v = rep.violations[0];
  EXPECT_EQ(v.binding.size(), 2u);
  EXPECT_TRUE(dsl::replay(A, v));
  EXPECT_NE(compose(*v.find("R"), *v.find("S")), compose(*v.find("S"), *v.find("R")));
}

TEST(CheckStatement, AgreesWithBuiltinVerifiers) {
  SweepOptions opts;
  opts.samples = 40;
  for (const auto &A : corpus::all()) {
    if (A.size() > 4)
      continue;
    opts.strategy = A.size() <= 2 ? Strategy::exhaust : Strategy::principal;
    for (auto t : all_theorems) {
      const auto direct = sweep_theorem(A, t, opts);
      bool dsl_holds = true;
      for (const auto &text : theorem_statements(t)) {
        auto rep = dsl::check_statement(A, dsl::parse(text), opts);
        EXPECT_EQ(rep.instances_checked, direct.instances_checked) << A.name() << " " << text;
        dsl_holds = dsl_holds && rep.holds();
      }
      EXPECT_EQ(dsl_holds, direct.holds()) << A.name() << " " << to_string(t);
    }
  }
}

TEST(CheckStatement, InstanceLevelAgreement) {
  std::mt19937_64 rng(31);
  const auto A = corpus::pure_set(3);
  const auto congs = enumerate_congruences(A);
  std::vector<dsl::Statement> subrel;
  for (const auto &text : theorem_statements(Theorem::subrelpiu))
    subrel.push_back(dsl::parse(text));
  for (int i = 0; i < 300; ++i) {
    const BinRel alpha = congs[uniform_index(rng, congs.size())].to_relation();
    const BinRel R = sample_reflexive(3, rng), S = sample_reflexive(3, rng);
    const bool direct = !subrelpiu_instance(A, alpha, R, S).has_value();
    bool via_dsl = true;
    for (const auto &s : subrel)
      via_dsl = via_dsl && !dsl::check_instance(A, s, {{"a", alpha}, {"R", R}, {"S", S}});
    EXPECT_EQ(direct, via_dsl);
  }
}

TEST(CheckStatement, DeterministicAcrossJobs) {
  const auto A = corpus::pure_set(4);
  const auto s = dsl::parse("forall a:Cong, R:Refl, S:Refl . a & (R ; S) <= a & R ; S");
  SweepOptions one, many;
  one.samples = many.samples = 60;
  many.jobs = 3;
  EXPECT_EQ(to_json(dsl::check_statement(A, s, one)).dump(), to_json(dsl::check_statement(A, s, many)).dump());
}
