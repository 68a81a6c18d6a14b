#include <gtest/gtest.h>

#include "hodl/core.hpp"
#include "hodl/syntax.hpp"
#include "hodl/typing.hpp"

using namespace hodl;

namespace {

Type fn(std::initializer_list<Type> args) { return Type::predicate(std::vector<Type>(args)); }

}  // namespace

TEST(TypeOrder, BaseTypesAreZero) {
    EXPECT_EQ(type_order(Type::iota()), 0);
    EXPECT_EQ(type_order(Type::omicron()), 0);
}

TEST(TypeOrder, FirstAndSecondOrder) {
    Type p = fn({Type::iota()});
    EXPECT_EQ(type_order(p), 1);
    EXPECT_EQ(type_order(fn({p, p, Type::iota()})), 2);
}

TEST(TypeOrder, MonotoneUnderNesting) {
    Type t = Type::omicron();
    int prev = 0;
    for (int i = 0; i < 5; ++i) {
        t = Type::arrow(i % 2 ? Type::iota() : fn({Type::iota()}), t);
        EXPECT_GE(type_order(t), prev);
        prev = type_order(t);
    }
}

TEST(TypeShape, FlattenRecurryIsIdentity) {
    Type t = parse_type("(i -> o) -> ((i -> o) -> o) -> i -> o");
    EXPECT_EQ(Type::predicate(t.arguments()), t);
    EXPECT_EQ(t.arity(), 3u);
    EXPECT_EQ(t.str(), "(i -> o) -> ((i -> o) -> o) -> i -> o");
    EXPECT_TRUE(t.is_predicate());
    EXPECT_FALSE(Type::arrow(Type::omicron(), Type::omicron()).is_predicate());
}

TEST(Expk, SmallValues) {
    EXPECT_EQ(expk(0, 5), 5);
    EXPECT_EQ(expk(1, 3), 8);
    EXPECT_EQ(expk(2, 2), 16);
    EXPECT_EQ(expk(3, 2), 65536);
}

TEST(Expk, StrictlyIncreasing) {
    for (unsigned k = 0; k <= 3; ++k) {
        for (unsigned x = 1; x < 8; ++x) {
            if (k == 3 && x >= 4) {
                // Past the bit cap; exp_3 is increasing exactly when exp_2 is.
                EXPECT_LT(expk(2, x), expk(2, x + 1));
                continue;
            }
            EXPECT_LT(expk(k, x), expk(k, x + 1));
            if (k < 2 || (k == 2 && x <= 4)) EXPECT_LT(expk(k, x), expk(k + 1, x));
        }
    }
}

TEST(Expk, CapIsAResourceError) {
    try {
        expk(4, 5);
        FAIL() << "expected a resource error";
    } catch (const ResourceError& e) {
        EXPECT_EQ(e.diagnostic().code, "E301");
    }
}

TEST(IterationBound, Formula) {
    ProgramStats st;
    st.p = 2;
    st.t = 2;
    st.c = 3;
    EXPECT_EQ(iteration_bound(st, 0, 1), 18);
    ProgramStats st2;
    st2.p = 1;
    st2.t = 1;
    st2.c = 2;
    EXPECT_EQ(iteration_bound(st2, 0, 2), 4);
    // k = 3: p * (exp_2(t * (n+c)^t))^t with t = 1, n + c = 2.
    EXPECT_EQ(iteration_bound(st2, 0, 3), 16);
}

TEST(Stats, HandCountedProgram) {
    TypeReport r = load_program("p a.\nq R :- (R b).\n");
    ProgramStats st = compute_stats(r.program);
    EXPECT_EQ(st.l, 2u);
    EXPECT_EQ(st.c, 2u);
    EXPECT_EQ(st.r, 2u);
    EXPECT_EQ(st.p, 2u);
    EXPECT_EQ(st.s, 2u);
    EXPECT_EQ(st.t, 1u);
}

TEST(Stats, EmptyProgram) {
    ProgramStats st = compute_stats(Program{});
    ProgramStats want;
    want.c = 1;
    EXPECT_EQ(st, want);
}

TEST(Stats, InputNumeralsExcluded) {
    TypeReport r = load_program("p 0. p 1. p 7. p end.\n");
    EXPECT_EQ(compute_stats(r.program, 2).c, 2u);
    EXPECT_EQ(compute_stats(r.program, 0).c, 4u);
}

TEST(Diagnostics, Render) {
    Diagnostic d{"E201", {3, 7}, "formal Q is used twice"};
    EXPECT_EQ(d.render("x.hodl"), "x.hodl:3:7: E201 formal Q is used twice");
}

TEST(Constants, FirstOccurrenceOrder) {
    TypeReport r = load_program("q b a :- (p c).\np d.\n");
    EXPECT_EQ(r.program.constants, (std::vector<std::string>{"b", "a", "c", "d"}));
}
