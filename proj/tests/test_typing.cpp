#include <gtest/gtest.h>

#include "hodl/syntax.hpp"
#include "hodl/typing.hpp"

using namespace hodl;

namespace {

TypeReport infer(std::string_view text) { return infer_types(desugar(parse_program(text))); }

std::vector<std::string> codes(const TypeReport& r) {
    std::vector<std::string> out;
    for (const Diagnostic& d : r.violations) out.push_back(d.code);
    return out;
}

}  // namespace

TEST(Infer, Union) {
    TypeReport r = infer("union P Q X :- (P X).\nunion P Q X :- (Q X).");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.signatures.at("union").str(), "(i -> o) -> (i -> o) -> i -> o");
    EXPECT_EQ(r.program_order, 2);
}

TEST(Infer, EqualityClause) {
    TypeReport r = infer("q X Y :- (X = Y).");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.signatures.at("q").str(), "i -> i -> o");
    EXPECT_EQ(r.program_order, 1);
}

TEST(Infer, StrictAndRelaxedExampleAgree) {
    TypeReport strict = infer("p X :- (X = a).\nq X Y :- (X = Y).\nr P Q X :- (X = b), (P X), (Q Y).");
    TypeReport relaxed = infer("p a.\nq X X.\nr P Q b :- (P b), (Q Y).");
    ASSERT_TRUE(strict.ok());
    ASSERT_TRUE(relaxed.ok());
    for (const auto* r : {&strict, &relaxed}) {
        EXPECT_EQ(r->signatures.at("p").str(), "i -> o");
        EXPECT_EQ(r->signatures.at("q").str(), "i -> i -> o");
        EXPECT_EQ(r->signatures.at("r").str(), "(i -> o) -> (i -> o) -> i -> o");
        EXPECT_EQ(r->program_order, 2);
    }
}

TEST(Infer, ClashIndividualAndPredicate) {
    TypeReport r = infer("p X :- (X a), (X = b).");
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.violations[0].code, "E101");
}

TEST(Infer, DeclarationsRespected) {
    TypeReport r = infer("#pred p : (i -> o) -> o.\np R :- (R a).");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.signatures.at("p").str(), "(i -> o) -> o");
    TypeReport bad = infer("#pred p : i -> o.\np R :- (R a).");
    EXPECT_EQ(codes(bad), std::vector<std::string>{"E101"});
}

TEST(Infer, UndefinedPredicateIsLegal) {
    TypeReport r = infer("p X :- (q X).");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.signatures.at("q").str(), "i -> o");
}

TEST(Infer, AnnotatesEveryExpression) {
    TypeReport r = infer("q R :- (R b).");
    ASSERT_TRUE(r.ok());
    const Expr& atom = r.program.clauses[0].body[0];
    ASSERT_TRUE(atom.type());
    EXPECT_TRUE(atom.type()->is_omicron());
    ASSERT_TRUE(atom.fun().type());
    EXPECT_EQ(atom.fun().type()->str(), "i -> o");
    EXPECT_EQ(r.var_types[0].at("R").str(), "i -> o");
}

TEST(Infer, Deterministic) {
    const char* text = "t X Y :- (e X Y).\nt X Y :- (e X Z), (t Z Y).\nh P :- (P a b).";
    TypeReport a = infer(text);
    TypeReport b = infer(text);
    EXPECT_EQ(a.signatures, b.signatures);
    EXPECT_EQ(a.program, b.program);
}

TEST(Validate, PredicateConstantInHead) {
    TypeReport r = infer("q a.\nr q.");
    EXPECT_EQ(codes(r), std::vector<std::string>{"E202"});
}

TEST(Validate, DuplicateFormal) {
    TypeReport r = infer("p Q Q :- (Q a).");
    EXPECT_EQ(codes(r), std::vector<std::string>{"E201"});
}

TEST(Validate, FreePredicateVariable) {
    TypeReport r = infer("p X :- (Q X).");
    EXPECT_EQ(codes(r), std::vector<std::string>{"E203"});
}

TEST(Validate, DiagnosticsPointAtTheCulprit) {
    TypeReport r = infer("q a.\nr q.");
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].pos.line, 2);
    EXPECT_EQ(r.violations[0].pos.column, 3);
}

TEST(Order, Classification) {
    EXPECT_EQ(infer("").program_order, 1);
    EXPECT_EQ(infer("t X Y :- (e X Y).\nt X Y :- (e X Z), (t Z Y).").program_order, 1);
    EXPECT_EQ(infer("q R :- (R b).").program_order, 2);
    EXPECT_EQ(infer("#pred h : ((i -> o) -> o) -> o.\nh F :- (F p).\np X :- (X = a).").program_order, 3);
}

TEST(Load, ThrowsFirstViolation) {
    try {
        load_program("p Q Q :- (Q a).");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.diagnostic().code, "E201");
    }
}
