#include <gtest/gtest.h>

#include "support.hpp"

using namespace qualisem;
using qtest::temp_property;

namespace {

Vocabulary temp_vocab() {
    Vocabulary v;
    v.add_property(temp_property());
    v.add_cell({"e1", "temp"});
    return v;
}

MetaAlphabet d_temp(const Vocabulary& v) {
    return parse_alphabet("alphabet D_temp over temp { INC: lt; DEC: gt; SAME: eq }", v);
}

}  // namespace

TEST(Parse, PresentAndGoalExamples) {
    auto f = parse_formula("present { holds(e1, temp, cold) }");
    EXPECT_EQ(f.mode, Mode::Present);
    ASSERT_EQ(f.atoms.size(), 1u);
    EXPECT_EQ(f.atoms[0], (Atom{"e1", "temp", "cold"}));

    auto g = parse_formula("goal { holds(e1, temp, warm) }");
    EXPECT_EQ(g.mode, Mode::Goal);
    ASSERT_EQ(g.atoms.size(), 1u);
    EXPECT_EQ(g.atoms[0].value, "warm");
}

TEST(Parse, AlphabetExampleIsJepd) {
    auto v = temp_vocab();
    auto a = d_temp(v);
    EXPECT_EQ(a.name(), "D_temp");
    EXPECT_EQ(a.relations().size(), 3u);
    EXPECT_TRUE(validate_jepd(a).ok());
    for (std::size_t n = 1; n <= 8; ++n) {
        Vocabulary w;
        w.add_property(qtest::ordered_property("p", n));
        auto b = parse_alphabet("alphabet D over p { INC: lt; DEC: gt; SAME: eq }", w);
        auto naive = qtest::naive_jepd(b);
        EXPECT_TRUE(naive.uncovered.empty() && naive.overlapping.empty());
        EXPECT_TRUE(validate_jepd(b).ok());
    }
}

TEST(Parse, CommentsAndWhitespaceAreIgnored) {
    auto f = parse_formula("# leading comment\n  present{holds( e1 ,temp,cold)# trailing\n}\n");
    EXPECT_EQ(print(f), "present { holds(e1, temp, cold) }");
}

TEST(Parse, SyntaxErrorsCarryPositionAndExpectations) {
    try {
        parse_formula("present {\n  holds(e1 temp, cold) }");
        FAIL() << "expected a syntax error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.pos().line, 2u);
        EXPECT_EQ(e.pos().column, 12u);
        EXPECT_EQ(e.expected(), std::vector<std::string>{"','"});
        EXPECT_EQ(e.found(), "identifier 'temp'");
    }
    EXPECT_THROW(parse_formula("future { }"), SyntaxError);
    EXPECT_THROW(parse_formula("present { holds(e1, temp, cold) } extra"), SyntaxError);
    EXPECT_THROW(parse_formula("present { holds(e1, temp, cold) "), SyntaxError);
    EXPECT_THROW(parse_formula("present { holds(e1, temp, $) }"), SyntaxError);
}

TEST(Parse, SemanticErrorsAgainstAVocabulary) {
    auto v = temp_vocab();
    EXPECT_THROW(parse_formula("goal { holds(e1, pressure, high) }", &v), SemanticError);
    EXPECT_THROW(parse_formula("goal { holds(e1, temp, tepid) }", &v), SemanticError);
    EXPECT_THROW(parse_formula("goal { holds(e2, temp, cold) }", &v), SemanticError);
    EXPECT_THROW(parse_formula("present { }", &v), SemanticError);
    EXPECT_THROW(parse_formula("goal { holds(e1, temp, cold) holds(e1, temp, hot) }"), SemanticError);
    EXPECT_THROW(parse_alphabet("alphabet D over temp { INC: lt; DEC: gt }", v), SemanticError);
    EXPECT_THROW(parse_alphabet("alphabet D over temp { A: lt; A: gt; B: eq }", v), SemanticError);
    EXPECT_THROW(parse_alphabet("alphabet D over temp { A: { (cold, icy) } }", v), SemanticError);
    EXPECT_THROW(parse("alphabet D over temp { A: lt }"), SemanticError);
}

TEST(Parse, LogStepsMustBeContiguous) {
    EXPECT_NO_THROW(parse_formula(
        "log { step(3, present { holds(e, p, a) }, go, present { holds(e, p, b) }) "
        "step(4, present { holds(e, p, b) }, go, present { holds(e, p, c) }) }"));
    EXPECT_THROW(parse_formula("log { step(3, present { holds(e, p, a) }, go, present { holds(e, p, b) }) "
                               "step(5, present { holds(e, p, b) }, go, present { holds(e, p, c) }) }"),
                 SemanticError);
    EXPECT_THROW(parse_formula("log { step(0, goal { holds(e, p, a) }, go, present { holds(e, p, b) }) }"),
                 SemanticError);
}

TEST(Print, Examples) {
    EXPECT_EQ(print(parse_formula("present { holds(e1,temp,cold) }")), "present { holds(e1, temp, cold) }");
    EXPECT_EQ(print(parse_formula("present { holds(z, p, a) holds(a, q, b) holds(a, p, c) }")),
              "present { holds(a, p, c) holds(a, q, b) holds(z, p, a) }");
    EXPECT_EQ(print(make_description(Mode::Goal, {})), "goal { }");
    EXPECT_EQ(print(make_log({})), "log { }");
    auto v = temp_vocab();
    EXPECT_EQ(print(d_temp(v)), "alphabet D_temp over temp { INC: lt; DEC: gt; SAME: eq }");
    auto pairs = parse_alphabet("alphabet P over temp { A: { (hot, cold), (cold, cool) } }", v, {false});
    EXPECT_EQ(print(pairs), "alphabet P over temp { A: { (cold, cool), (hot, cold) } }");
}

TEST(Classify, Examples) {
    auto v = temp_vocab();
    auto a = d_temp(v);
    EXPECT_EQ(classify_pair(a, v.value("temp", "cold"), v.value("temp", "warm")).name, "INC");
    EXPECT_EQ(classify_pair(a, v.value("temp", "hot"), v.value("temp", "hot")).name, "SAME");
    EXPECT_EQ(classify_pair(a, v.value("temp", "warm"), v.value("temp", "cool")).name, "DEC");
}

TEST(Classify, MalformedAlphabetsAndMismatchesAreReported) {
    auto v = temp_vocab();
    auto gapped = parse_alphabet("alphabet G over temp { INC: lt; DEC: gt }", v, {false});
    EXPECT_THROW(classify_pair(gapped, v.value("temp", "cool"), v.value("temp", "cool")), PartitionViolation);
    auto doubled = parse_alphabet("alphabet D over temp { INC: lt; ANY: { (cold, hot) }; DEC: gt; SAME: eq }", v,
                                  {false});
    EXPECT_THROW(classify_pair(doubled, v.value("temp", "cold"), v.value("temp", "hot")), PartitionViolation);
    auto other = qtest::ordered_property("pos", 3);
    EXPECT_THROW(classify_pair(d_temp(v), QualValue{other, 0}, QualValue{other, 1}), PropertyMismatch);
}

TEST(Classify, AgreesWithMembershipExhaustively) {
    SplitMix64 rng(5);
    for (std::size_t n = 1; n <= 8; ++n) {
        auto p = qtest::ordered_property("p", n);
        for (int trial = 0; trial < 20; ++trial) {
            auto a = qtest::random_jepd_alphabet(rng, p);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y) {
                    const auto& r = classify_pair(a, {p, x}, {p, y});
                    for (const auto& other : a.relations())
                        EXPECT_EQ(&other == &r, qtest::naive_member(other, x, y));
                }
        }
    }
}

TEST(ValidateJepd, Examples) {
    auto v = temp_vocab();
    auto gapped = parse_alphabet("alphabet G over temp { INC: lt; DEC: gt }", v, {false});
    auto rep = validate_jepd(gapped);
    EXPECT_TRUE(rep.overlapping.empty());
    EXPECT_EQ(rep.uncovered, (std::vector<RankPair>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}));

    auto leq = parse_alphabet(
        "alphabet L over temp { LT: lt; LEQ: { (cold, cold), (cold, cool), (cold, warm), (cold, hot), "
        "(cool, cool), (cool, warm), (cool, hot), (warm, warm), (warm, hot), (hot, hot) } }",
        v, {false});
    auto rep2 = validate_jepd(leq);
    std::vector<RankPair> over;
    for (const auto& o : rep2.overlapping) over.push_back(o.pair);
    EXPECT_EQ(over, (std::vector<RankPair>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
    // Pairs with x > y are in neither.
    EXPECT_EQ(rep2.uncovered.size(), 6u);
}

TEST(ValidateJepd, MatchesNaiveCounter) {
    SplitMix64 rng(17);
    for (int i = 0; i < 300; ++i) {
        auto p = qtest::ordered_property("p", qtest::pick(rng, 1, 8));
        auto a = qtest::random_jepd_alphabet(rng, p);
        if (i % 2) a = qtest::mutate_alphabet(rng, a);
        auto rep = validate_jepd(a);
        auto naive = qtest::naive_jepd(a);
        EXPECT_TRUE(qtest::same_verdict(rep, naive)) << print(a);
        if (i % 2) EXPECT_FALSE(rep.ok()) << print(a);
        else EXPECT_TRUE(rep.ok()) << print(a);
    }
}

TEST(RoundTrip, GeneratedFormulas) {
    SplitMix64 rng(23);
    for (int i = 0; i < 500; ++i) {
        auto f = qtest::random_formula(rng);
        auto text = print(f);
        auto back = parse_formula(text);
        EXPECT_EQ(back, f) << text;
        EXPECT_EQ(print(back), text);
    }
}

TEST(RoundTrip, GeneratedAlphabets) {
    SplitMix64 rng(29);
    for (int i = 0; i < 300; ++i) {
        Vocabulary v;
        auto p = qtest::ordered_property("p", qtest::pick(rng, 1, 8), "w");
        v.add_property(p);
        auto a = qtest::random_jepd_alphabet(rng, p, "N" + std::to_string(i));
        if (qtest::coin(rng)) a = qtest::mutate_alphabet(rng, a);
        auto back = parse_alphabet(print(a), v, {false});
        EXPECT_EQ(back, a) << print(a);
    }
}

TEST(Describe, PresentAndBack) {
    Vocabulary v;
    v.add_property(temp_property());
    v.add_cell({"a", "temp"});
    v.add_cell({"b", "temp"});
    auto r = quantize_reality(v, 4, {{{"a", "temp"}, 25}, {{"b", "temp"}, 3}});
    auto f = describe_present(r);
    EXPECT_EQ(print(f), "present { holds(a, temp, warm) holds(b, temp, cold) }");
    auto back = reality_of(f, v, 4);
    EXPECT_EQ(back.assignments, r.assignments);
    EXPECT_TRUE(holds_in(parse_formula("goal { holds(a, temp, warm) }"), r));
    EXPECT_FALSE(holds_in(parse_formula("goal { holds(b, temp, warm) }"), r));
    EXPECT_TRUE(holds_in(make_description(Mode::Goal, {}), r));
}
