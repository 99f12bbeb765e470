#include <gtest/gtest.h>

#include <thread>

#include "prenexify/hierarchy.hpp"
#include "prenexify/oracle.hpp"
#include "prenexify/semiclassical.hpp"
#include "support.hpp"

namespace prenexify {
namespace {

using testing::F;
using testing::Gen;

// Plain recursive reading of the class definition, no tables.
bool naive(const Formula& f, ClassKind kind, std::size_t k, std::size_t n);

bool naive_d(const Formula& f, std::size_t k, std::size_t n) {
  return naive(f, ClassKind::J, k, n) || naive(f, ClassKind::R, k, n);
}

bool naive(const Formula& f, ClassKind kind, std::size_t k, std::size_t n) {
  if (k == 0) return is_quantifier_free(f);
  const std::size_t c = k - 1;
  if (naive_d(f, c, n)) return true;
  const bool j = kind == ClassKind::J;
  auto J = [&](const Formula& g, std::size_t l) { return naive(g, ClassKind::J, l, n); };
  auto R = [&](const Formula& g, std::size_t l) { return naive(g, ClassKind::R, l, n); };
  auto D = [&](const Formula& g, std::size_t l) { return naive_d(g, l, n); };
  switch (f.kind()) {
    case Connective::And:
      return j ? J(f.lhs(), k) && J(f.rhs(), k) : R(f.lhs(), k) && R(f.rhs(), k);
    case Connective::Or: {
      const Formula &a = f.lhs(), &b = f.rhs();
      if (j) {
        if (c <= n) return J(a, k) && J(b, k);
        return (J(a, k) && J(b, n + 1)) || (J(a, n + 1) && J(b, k));
      }
      if (c < n) return R(a, k) && R(b, k);
      if (c == n) return (R(a, k) && D(b, c)) || (D(a, c) && R(b, k));
      return (R(a, k) && D(b, n)) || (D(a, n) && R(b, k));
    }
    case Connective::Imp: {
      const Formula &a = f.lhs(), &b = f.rhs();
      if (j) {
        if (c < n) return R(a, k) && J(b, k);
        return D(a, std::min(c, n)) && J(b, k);
      }
      if (c <= n) return J(a, k) && R(b, k);
      return J(a, n + 1) && R(b, k);
    }
    case Connective::Exists:
      return j && J(f.body(), k);
    case Connective::Forall:
      return !j && R(f.body(), k);
    default:
      return false;
  }
}

TEST(Membership, Examples) {
  for (std::size_t n = 0; n < 4; ++n) EXPECT_TRUE(in_J(F("P(x)"), 0, n));

  const Formula neg = F("(forall x. P(x)) -> false");
  EXPECT_TRUE(in_J(neg, 2, 1));
  for (std::size_t k = 0; k <= 5; ++k) EXPECT_FALSE(in_J(neg, k, 0)) << k;

  EXPECT_TRUE(in_J(F("(exists x. P(x)) | forall y. Q(y)"), 2, 0));
  EXPECT_FALSE(in_R(F("exists x. P(x)"), 1, 0));
  EXPECT_TRUE(in_R(F("exists x. P(x)"), 2, 0));

  EXPECT_TRUE(in_D(F("P(x) -> false"), 0, 3));
  EXPECT_TRUE(in_D(F("exists x. P(x)"), 1, 0));
  EXPECT_FALSE(in_D(neg, 1, 0));
}

TEST(Membership, MinLevels) {
  MinLevels p = min_levels(F("P(x)"), 3);
  EXPECT_EQ(p.k_J, 0U);
  EXPECT_EQ(p.k_R, 0U);

  MinLevels e = min_levels(F("exists x. P(x)"), 0, 5);
  EXPECT_EQ(e.k_J, 1U);
  EXPECT_EQ(e.k_R, 2U);

  MinLevels none = min_levels(F("(forall x. P(x)) -> false"), 0, 6);
  EXPECT_FALSE(none.k_J);
  EXPECT_FALSE(none.k_R);
  EXPECT_EQ(none.k_max, 6U);

  EXPECT_EQ(min_levels(F("exists x. P(x)"), 0).k_max, 0U + 2U + 1U);
}

TEST(Membership, CumulativeClassicalClasses) {
  EXPECT_TRUE(in_E_plus(F("(exists x. P(x)) | forall y. Q(y)"), 2));
  EXPECT_FALSE(in_E_plus(F("forall x. P(x)"), 1));
  EXPECT_TRUE(in_U_plus(F("forall x. P(x)"), 1));
  EXPECT_TRUE(in_E_plus(F("P(x)"), 0));
}

TEST(Membership, AgreesWithNaiveDefinition) {
  Gen gen(41);
  for (int i = 0; i < 1500; ++i) {
    Formula f = gen.formula(4);
    for (std::size_t n = 0; n <= 3; ++n) {
      MembershipTable t(f, n, 5);
      for (std::size_t k = 0; k <= 5; ++k) {
        ASSERT_EQ(t.J(k), naive(f, ClassKind::J, k, n)) << render(f) << " k=" << k << " n=" << n;
        ASSERT_EQ(t.R(k), naive(f, ClassKind::R, k, n)) << render(f) << " k=" << k << " n=" << n;
      }
      EXPECT_FALSE(t.J(6));  // above k_max
    }
  }
}

TEST(Membership, AlphaInvariant) {
  Gen gen(42);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.formula(5);
    Formula g = gen.rename_some_binder(f, "w");
    if (all_vars(f).contains("w")) continue;
    for (std::size_t n = 0; n <= 2; ++n) {
      for (std::size_t k = 0; k <= 4; ++k) {
        ASSERT_EQ(in_J(f, k, n), in_J(g, k, n));
        ASSERT_EQ(in_R(f, k, n), in_R(g, k, n));
      }
    }
  }
}

TEST(Witness, ReplaysForEveryPositiveVerdict) {
  Gen gen(43);
  std::size_t replayed = 0;
  for (int i = 0; i < 1500; ++i) {
    Formula f = gen.formula(5);
    for (std::size_t n = 0; n <= 2; ++n) {
      MembershipTable t(f, n, 4);
      for (std::size_t k = 0; k <= 4; ++k) {
        for (ClassKind kind : {ClassKind::J, ClassKind::R}) {
          auto w = t.witness(kind, k);
          const bool member = kind == ClassKind::J ? t.J(k) : t.R(k);
          ASSERT_EQ(w.has_value(), member);
          if (!w) continue;
          ASSERT_EQ(w->kind, kind);
          ASSERT_EQ(w->k, k);
          ASSERT_TRUE(replay_witness(f, *w, n)) << render(f) << " k=" << k << " n=" << n;
          ++replayed;
        }
      }
    }
  }
  EXPECT_GT(replayed, 10000U);
}

TEST(Witness, ReplayRejectsTamperedDerivations) {
  const Formula f = F("(exists x. P(x)) | forall y. Q(y)");
  auto w = MembershipTable(f, 0, 3).witness(ClassKind::J, 2);
  ASSERT_TRUE(w);
  EXPECT_TRUE(replay_witness(f, *w, 0));

  Witness wrong_level = *w;
  wrong_level.k = 1;
  EXPECT_FALSE(replay_witness(f, wrong_level, 0));

  Witness wrong_kind = *w;
  wrong_kind.kind = ClassKind::R;
  EXPECT_FALSE(replay_witness(f, wrong_kind, 0));

  EXPECT_FALSE(replay_witness(F("(exists x. P(x)) & forall y. Q(y)"), *w, 0));
}

TEST(Explain, CitesTheFailedClause) {
  const std::string why = explain_non_membership(F("(forall x. P(x)) -> false"), ClassKind::J, 2, 0);
  EXPECT_NE(why.find("implication"), std::string::npos) << why;
  EXPECT_NE(why.find("antecedent"), std::string::npos) << why;
  EXPECT_NE(why.find("fails"), std::string::npos) << why;
}

// The classifier against exhaustive rewriting, on formulas outside the
// acceptance corpus (three variables, binary predicate, up to depth 4).
TEST(Membership, AgreesWithSearchOnRandomFormulas) {
  Gen gen(44);
  for (int i = 0; i < 400; ++i) {
    Formula f = gen.formula(4);
    for (std::size_t n = 0; n <= 2; ++n) {
      ReachableSet rs = reachable_set(f, n);
      ASSERT_TRUE(rs.exhausted);
      for (std::size_t k = 0; k <= 4; ++k) {
        bool sigma = false, pi = false;
        for (const auto& m : rs.members) {
          sigma = sigma || in_sigma_plus(m, k);
          pi = pi || in_pi_plus(m, k);
        }
        ASSERT_EQ(in_J(f, k, n), sigma) << render(f) << " k=" << k << " n=" << n;
        ASSERT_EQ(in_R(f, k, n), pi) << render(f) << " k=" << k << " n=" << n;
      }
    }
  }
}

TEST(Membership, ConcurrentQueriesAgree) {
  Gen gen(45);
  std::vector<Formula> fs;
  for (int i = 0; i < 300; ++i) fs.push_back(gen.formula(5));
  std::vector<std::uint32_t> serial(fs.size()), parallel(fs.size());
  auto bits = [](const Formula& f) {
    std::uint32_t b = 0;
    for (std::size_t k = 0; k <= 4; ++k) b |= (in_J(f, k, 1) << k) | (in_R(f, k, 1) << (k + 8));
    return b;
  };
  for (std::size_t i = 0; i < fs.size(); ++i) serial[i] = bits(fs[i]);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < fs.size(); i += 4) parallel[i] = bits(fs[i]);
    });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(serial, parallel);
}

}  // namespace
}  // namespace prenexify
