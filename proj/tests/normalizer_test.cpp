#include <gtest/gtest.h>

#include "prenexify/hierarchy.hpp"
#include "prenexify/normalizer.hpp"
#include "prenexify/oracle.hpp"
#include "prenexify/semiclassical.hpp"
#include "support.hpp"

namespace prenexify {
namespace {

using testing::F;
using testing::Gen;

void expect_sound(const Formula& f, const Formula& out, const Trace& t, std::size_t n) {
  EXPECT_EQ(t.start, f);
  EXPECT_EQ(t.degree, n);
  EXPECT_EQ(verify_trace(t), out);
  EXPECT_EQ(free_vars(out), free_vars(f));
}

TEST(Normalize, Examples) {
  for (std::size_t n = 0; n <= 2; ++n) {
    auto r = normalize_J(F("P(x)"), 1, n);
    EXPECT_EQ(r.output, F("P(x)"));
    EXPECT_TRUE(r.trace.steps.empty());
  }

  auto r = normalize_J(F("(exists x. P(x)) | forall y. Q(y)"), 2, 0);
  EXPECT_EQ(r.output, F("exists x. forall y. P(x) | Q(y)"));
  EXPECT_EQ(r.trace.steps.size(), 2U);
  expect_sound(r.input, r.output, r.trace, 0);

  r = normalize_J(F("(forall x. P(x)) -> false"), 2, 1);
  EXPECT_EQ(r.output, F("exists x. P(x) -> false"));
  ASSERT_EQ(r.trace.steps.size(), 1U);
  EXPECT_EQ(r.trace.steps[0].rule, RuleId::ForallImpN);
  EXPECT_TRUE(in_sigma(r.output, 1));
}

TEST(Normalize, NotInClass) {
  try {
    normalize_J(F("(forall x. P(x)) -> false"), 2, 0);
    FAIL() << "expected NotInClass";
  } catch (const NotInClass& e) {
    EXPECT_NE(std::string(e.what()).find("implication"), std::string::npos) << e.what();
  }
  EXPECT_THROW(normalize_R(F("exists x. P(x)"), 1, 0), NotInClass);
}

TEST(Normalize, JsonReport) {
  auto r = normalize(F("(exists x. P(x)) | forall y. Q(y)"), Target::Sigma, 2, 0);
  nlohmann::json j = to_json(r);
  EXPECT_EQ(j["schema"], "prenexify.normalization/1");
  EXPECT_EQ(j["output"], "exists x. forall y. P(x) | Q(y)");
  EXPECT_EQ(j["target"], "sigma");
  EXPECT_EQ(trace_from_json(j["trace"]).steps, r.trace.steps);
}

TEST(Merge, And) {
  auto m = merge_and(F("exists x. P(x)"), F("exists y. Q(y)"), 1, Target::Sigma, 0);
  EXPECT_EQ(m.output, F("exists x. exists y. P(x) & Q(y)"));
  expect_sound(F("(exists x. P(x)) & exists y. Q(y)"), m.output, m.trace, 0);

  m = merge_and(F("P(x)"), F("Q(y)"), 0, Target::Sigma, 0);
  EXPECT_EQ(m.output, F("P(x) & Q(y)"));
  EXPECT_TRUE(m.trace.steps.empty());

  m = merge_and(F("forall x. P(x)"), F("forall x. Q(x)"), 1, Target::Pi, 0);
  EXPECT_TRUE(in_pi(m.output, 1));
  EXPECT_EQ(m.output.bound_var(), "x");
  EXPECT_NE(m.output.body().bound_var(), "x");
  expect_sound(F("(forall x. P(x)) & forall x. Q(x)"), m.output, m.trace, 0);
}

TEST(Merge, Or) {
  auto m = merge_or(F("forall x. P(x)"), F("exists y. forall z. R(y, z)"), 1, 0, Target::Sigma, 1);
  EXPECT_TRUE(in_sigma_plus(m.output, 2));
  EXPECT_TRUE(in_sigma(m.output, 2));
  expect_sound(F("(forall x. P(x)) | exists y. forall z. R(y, z)"), m.output, m.trace, 1);

  m = merge_or(F("P(x)"), F("Q(x)"), 0, 0, Target::Sigma, 0);
  EXPECT_EQ(m.output, F("P(x) | Q(x)"));
  EXPECT_TRUE(m.trace.steps.empty());

  m = merge_or(F("exists x. P(x)"), F("exists y. Q(y)"), 0, 0, Target::Sigma, 0);
  EXPECT_EQ(m.output, F("exists x. exists y. P(x) | Q(y)"));
  for (const auto& s : m.trace.steps) {
    EXPECT_TRUE(s.rule == RuleId::ExistsOr || s.rule == RuleId::OrExists) << to_string(s);
  }
}

TEST(Merge, Imp) {
  auto m = merge_imp(F("P(x)"), F("exists y. forall z. R(y, z)"), 0, 1, Target::Sigma, 0);
  EXPECT_EQ(m.output, F("exists y. forall z. P(x) -> R(y, z)"));
  EXPECT_EQ(m.trace.degree, 0U);

  m = merge_imp(F("exists x. P(x)"), F("forall z. Q(z)"), 0, 0, Target::Pi, 0);
  EXPECT_EQ(m.output, F("forall x. forall z. P(x) -> Q(z)"));
  expect_sound(F("(exists x. P(x)) -> forall z. Q(z)"), m.output, m.trace, 0);

  m = merge_imp(F("forall x. P(x)"), F("exists y. Q(y)"), 1, 0, Target::Sigma, 1);
  EXPECT_EQ(m.output, F("exists x. exists y. P(x) -> Q(y)"));
  ASSERT_EQ(m.trace.steps.size(), 2U);
  EXPECT_EQ(m.trace.steps[0].rule, RuleId::ForallImpN);
  EXPECT_EQ(m.trace.steps[1].rule, RuleId::ImpExistsN);
}

TEST(Merge, PreconditionsAreChecked) {
  EXPECT_THROW(merge_and(F("(exists x. P(x)) & Q(x)"), F("P(x)"), 1, Target::Sigma, 0),
               PreconditionViolated);
  EXPECT_THROW(merge_and(F("forall x. P(x)"), F("P(x)"), 1, Target::Sigma, 0), PreconditionViolated);
  EXPECT_THROW(merge_or(F("forall x. P(x)"), F("P(x)"), 2, 0, Target::Sigma, 1), PreconditionViolated);
}

// Random formulas outside the acceptance corpus; every positive verdict
// normalizes soundly and deterministically, and the output is reachable.
TEST(Normalize, SoundOnRandomFormulas) {
  Gen gen(61);
  std::size_t normalized = 0;
  for (int i = 0; i < 800; ++i) {
    Formula f = gen.formula(4);
    for (std::size_t n = 0; n <= 2; ++n) {
      MembershipTable t(f, n, 4);
      for (std::size_t k = 0; k <= 4; ++k) {
        for (Target target : {Target::Sigma, Target::Pi}) {
          const bool member = target == Target::Sigma ? t.J(k) : t.R(k);
          if (!member) {
            ASSERT_THROW(normalize(f, target, k, n), NotInClass);
            continue;
          }
          auto r = normalize(f, target, k, n);
          ASSERT_EQ(verify_trace(r.trace), r.output) << render(f);
          ASSERT_TRUE(in_plus(r.output, target, k)) << render(f) << " -> " << render(r.output);
          ASSERT_EQ(free_vars(r.output), free_vars(f));
          ASSERT_EQ(r.trace.degree, n);
          // The start is in the class of the end.
          ASSERT_TRUE(in_class(r.output, target == Target::Sigma ? ClassKind::J : ClassKind::R, k, n));
          auto again = normalize(f, target, k, n);
          ASSERT_EQ(again.output, r.output);
          ASSERT_EQ(again.trace.steps, r.trace.steps);
          ++normalized;
        }
      }
    }
  }
  EXPECT_GT(normalized, 3000U);
}

}  // namespace
}  // namespace prenexify
