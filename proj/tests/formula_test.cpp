#include <gtest/gtest.h>

#include "prenexify/formula.hpp"
#include "prenexify/parser.hpp"
#include "support.hpp"

namespace prenexify {
namespace {

using testing::F;
using testing::Gen;
using testing::de_bruijn;

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_vars(F("P(x) & Q(y)")), (VarSet{"x", "y"}));
  EXPECT_TRUE(free_vars(F("exists x. P(x)")).empty());
  EXPECT_EQ(free_vars(F("(exists x. R(x, y)) | Q(x)")), (VarSet{"x", "y"}));
}

TEST(QuantifierFree, Examples) {
  EXPECT_TRUE(is_quantifier_free(F("P(x) -> false")));
  EXPECT_FALSE(is_quantifier_free(F("exists x. P(x)")));
  EXPECT_TRUE(is_quantifier_free(F("(P(x) & Q(x)) | false")));
}

TEST(Positions, SubformulaAt) {
  Formula f = F("(exists x. P(x)) & Q(y)");
  EXPECT_EQ(subformula_at(f, Position::parse("/l")), F("exists x. P(x)"));
  EXPECT_EQ(subformula_at(f, Position()), f);
  EXPECT_EQ(subformula_at(F("forall x. P(x) -> Q(x)"), Position::parse("/b/r")), F("Q(x)"));
  EXPECT_THROW(subformula_at(f, Position::parse("/b")), InvalidPosition);
  EXPECT_THROW(subformula_at(f, Position::parse("/l/b/l")), InvalidPosition);
}

TEST(Positions, ReplaceAt) {
  EXPECT_EQ(replace_at(F("P(x) & Q(y)"), Position::parse("/r"), Formula::falsum()), F("P(x) & false"));
  EXPECT_EQ(replace_at(F("P(x)"), Position(), F("Q(z)")), F("Q(z)"));
  EXPECT_EQ(replace_at(F("exists x. P(x)"), Position::parse("/b"), F("Q(x)")), F("exists x. Q(x)"));
}

TEST(Positions, TextRoundTrip) {
  for (const char* s : {"/", "/l", "/r/b/l"}) EXPECT_EQ(Position::parse(s).to_string(), s);
  EXPECT_THROW(Position::parse("l/r"), std::invalid_argument);
  EXPECT_THROW(Position::parse("/q"), std::invalid_argument);
}

TEST(Positions, PostorderIsLeftmostInnermost) {
  Formula f = F("(P(x) & Q(x)) | R(x, y)");
  std::vector<Position> ps = positions(f);
  std::sort(ps.begin(), ps.end(), postorder_less);
  std::vector<std::string> got;
  for (const auto& p : ps) got.push_back(p.to_string());
  EXPECT_EQ(got, (std::vector<std::string>{"/l/l", "/l/r", "/l", "/r", "/"}));
}

TEST(FreshVariable, Scheme) {
  EXPECT_EQ(fresh_variable({"x", "y"}), "v0");
  EXPECT_EQ(fresh_variable({"v0"}), "v1");
  EXPECT_EQ(fresh_variable({}), "v0");
  EXPECT_EQ(fresh_variable({"v0", "v1", "v3"}), "v2");
}

TEST(AlphaCanonical, Examples) {
  EXPECT_EQ(alpha_canonical(F("exists x. P(x)")), alpha_canonical(F("exists y. P(y)")));
  EXPECT_EQ(alpha_canonical(F("P(x)")), F("P(x)"));

  // The inner binder captures; the outer one is vacuous.
  Formula c = alpha_canonical(F("forall x. exists x. P(x)"));
  ASSERT_TRUE(c.is_quantifier() && c.body().is_quantifier());
  EXPECT_NE(c.bound_var(), c.body().bound_var());
  EXPECT_EQ(c.body().body().args()[0], c.body().bound_var());
  EXPECT_EQ(de_bruijn(c), de_bruijn(F("forall x. exists x. P(x)")));
}

TEST(AlphaCanonical, AvoidsFreeNames) {
  Formula c = alpha_canonical(F("(exists x. P(x)) & Q(v0)"));
  EXPECT_EQ(free_vars(c), VarSet{"v0"});
  EXPECT_EQ(c.lhs().bound_var(), "v1");
}

TEST(AlphaCanonical, AgreesWithNamelessForm) {
  Gen gen(11);
  for (int i = 0; i < 3000; ++i) {
    Formula f = gen.formula(5);
    Formula c = alpha_canonical(f);
    ASSERT_EQ(de_bruijn(c), de_bruijn(f)) << render(f);
    ASSERT_EQ(free_vars(c), free_vars(f));
    ASSERT_EQ(alpha_canonical(c), c);
    ASSERT_EQ(c.size(), f.size());
    for (const auto& p : positions(f)) ASSERT_TRUE(is_valid_position(c, p));

    Formula g = gen.rename_some_binder(f, "w" + std::to_string(i % 3));
    if (!all_vars(f).contains("w" + std::to_string(i % 3))) {
      ASSERT_EQ(de_bruijn(g), de_bruijn(f));
      ASSERT_EQ(alpha_canonical(g), c) << render(f) << " vs " << render(g);
      ASSERT_TRUE(alpha_equivalent(f, g));
    }
  }
}

TEST(AlphaCanonical, DistinctClassesStayDistinct) {
  Gen gen(12, {"x", "y"});
  std::vector<Formula> fs;
  for (int i = 0; i < 400; ++i) fs.push_back(gen.formula(3));
  for (const auto& a : fs) {
    for (const auto& b : fs) {
      ASSERT_EQ(alpha_canonical(a) == alpha_canonical(b), de_bruijn(a) == de_bruijn(b))
          << render(a) << " / " << render(b);
    }
  }
}

TEST(Positions, ReplaceWithOwnSubformulaIsIdentity) {
  Gen gen(13);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(5);
    for (const auto& p : positions(f)) ASSERT_EQ(replace_at(f, p, subformula_at(f, p)), f);
  }
}

TEST(Measure, CountsConnectivesAboveQuantifiers) {
  EXPECT_EQ(connective_depth_measure(F("exists x. P(x)")), 0U);
  EXPECT_EQ(connective_depth_measure(F("(exists x. P(x)) & Q(y)")), 1U);
  EXPECT_EQ(connective_depth_measure(F("((exists x. P(x)) & Q(y)) | forall z. Q(z)")), 3U);
  EXPECT_EQ(connective_depth_measure(F("P(x) & Q(y)")), 0U);
}

TEST(Formula, StructuralEqualityAndHash) {
  Gen gen(14);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(4);
    Formula g = parse(render(f));
    ASSERT_EQ(f, g);
    ASSERT_EQ(f.hash(), g.hash());
  }
  EXPECT_NE(F("P(x)"), F("P(y)"));
  EXPECT_NE(F("exists x. P(x)"), F("exists y. P(y)"));
}

}  // namespace
}  // namespace prenexify
