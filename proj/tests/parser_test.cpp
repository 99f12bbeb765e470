#include <gtest/gtest.h>

#include "prenexify/parser.hpp"
#include "support.hpp"

namespace prenexify {
namespace {

using testing::Gen;

Formula P(const char* x) { return Formula::prime("P", {x}); }
Formula Q(const char* x) { return Formula::prime("Q", {x}); }

TEST(Parse, Precedence) {
  EXPECT_EQ(parse("exists x. P(x) & Q(y)"), Formula::exists("x", Formula::conj(P("x"), Q("y"))));
  EXPECT_EQ(parse("~P(x)"), Formula::imp(P("x"), Formula::falsum()));
  EXPECT_EQ(parse("P(x) -> Q(x) -> false"),
            Formula::imp(P("x"), Formula::imp(Q("x"), Formula::falsum())));
  EXPECT_EQ(parse("P(x) | Q(x) & P(y)"), Formula::disj(P("x"), Formula::conj(Q("x"), P("y"))));
  EXPECT_EQ(parse("P(x) & Q(x) | P(y) -> Q(y)"),
            Formula::imp(Formula::disj(Formula::conj(P("x"), Q("x")), P("y")), Q("y")));
  EXPECT_EQ(parse("P(x) | Q(x) | P(y)"), Formula::disj(Formula::disj(P("x"), Q("x")), P("y")));
}

TEST(Parse, QuantifierScopeExtendsRight) {
  EXPECT_EQ(parse("forall x. P(x) -> Q(x)"), Formula::forall("x", Formula::imp(P("x"), Q("x"))));
  EXPECT_EQ(parse("(forall x. P(x)) -> Q(x)"), Formula::imp(Formula::forall("x", P("x")), Q("x")));
}

TEST(Parse, Errors) {
  auto err = [](const char* text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.line(), e.column());
    }
    ADD_FAILURE() << "no error for " << text;
    return std::make_pair(std::size_t{0}, std::size_t{0});
  };
  EXPECT_EQ(err("P(x) &"), std::make_pair(std::size_t{1}, std::size_t{7}));
  EXPECT_EQ(err("P(x) Q(y)").second, 6U);
  EXPECT_EQ(err("exists . P(x)").second, 8U);
  EXPECT_EQ(err("P(x) & P(x, y)").second, 8U);  // arity mismatch
  EXPECT_THROW(parse("P(x) $ Q(x)"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Parse, Signature) {
  Arities sig = parse_signature("sig P/1 R/2");
  EXPECT_EQ(sig, (Arities{{"P", 1}, {"R", 2}}));
  EXPECT_NO_THROW(parse("R(x, y) & P(x)", &sig));
  EXPECT_THROW(parse("R(x)", &sig), ParseError);
  EXPECT_THROW(parse("Q(x)", &sig), ParseError);
  EXPECT_THROW(parse_signature("sig P/"), ParseError);
}

TEST(Render, Examples) {
  EXPECT_EQ(render(Formula::conj(P("x"), Q("y"))), "P(x) & Q(y)");
  EXPECT_EQ(render(Formula::imp(Formula::falsum(), Formula::falsum())), "false -> false");
  EXPECT_EQ(render(Formula::forall("x", Formula::disj(P("x"), Q("y")))), "forall x. P(x) | Q(y)");
  EXPECT_EQ(render(Formula::imp(Formula::forall("x", P("x")), Formula::falsum())),
            "(forall x. P(x)) -> false");
  EXPECT_EQ(render(Formula::conj(Formula::exists("x", P("x")), Q("y"))), "(exists x. P(x)) & Q(y)");
  EXPECT_EQ(render(Formula::conj(Q("y"), Formula::exists("x", P("x")))), "Q(y) & exists x. P(x)");
}

TEST(Render, RoundTripOnRandomFormulas) {
  Gen gen(21);
  for (int i = 0; i < 5000; ++i) {
    Formula f = gen.formula(6);
    const std::string text = render(f);
    ASSERT_EQ(parse(text), f) << text;
    ASSERT_EQ(render(parse(text)), text);
  }
}

TEST(Json, RoundTripOnRandomFormulas) {
  Gen gen(22);
  for (int i = 0; i < 2000; ++i) {
    Formula f = gen.formula(6);
    nlohmann::json j = to_json(f);
    ASSERT_EQ(formula_from_json(nlohmann::json::parse(j.dump())), f);
  }
  EXPECT_EQ(to_json(Formula::falsum()), nlohmann::json({{"kind", "falsum"}}));
  EXPECT_THROW(formula_from_json(nlohmann::json({{"kind", "nand"}})), std::exception);
}

TEST(Corpus, CommentsSignatureAndErrors) {
  Corpus c = parse_corpus(
      "# header\n"
      "sig P/1 Q/1\n"
      "\n"
      "P(x) & Q(y)  # trailing comment\n"
      "R(x)\n"
      "exists x. (P(x)\n");
  ASSERT_TRUE(c.signature);
  EXPECT_EQ(c.signature->size(), 2U);
  ASSERT_EQ(c.entries.size(), 3U);
  EXPECT_EQ(c.entries[0].line, 4U);
  ASSERT_TRUE(c.entries[0].formula);
  EXPECT_EQ(*c.entries[0].formula, parse("P(x) & Q(y)"));
  EXPECT_EQ(c.entries[1].line, 5U);
  ASSERT_TRUE(c.entries[1].error);
  EXPECT_EQ(c.entries[1].error->line(), 5U);
  ASSERT_TRUE(c.entries[2].error);
  EXPECT_EQ(c.entries[2].error->line(), 6U);
}

TEST(Corpus, SignatureMustComeFirst) {
  Corpus c = parse_corpus("P(x)\nsig P/1\n");
  ASSERT_EQ(c.entries.size(), 2U);
  EXPECT_TRUE(c.entries[1].error);
}

}  // namespace
}  // namespace prenexify
