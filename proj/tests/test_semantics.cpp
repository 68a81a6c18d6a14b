#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hodl/encode.hpp"
#include "hodl/semantics.hpp"
#include "hodl/syntax.hpp"
#include "hodl/typing.hpp"
#include "support.hpp"

using namespace hodl;
using namespace hodl::testing;

namespace {

Program typed(std::string_view text) { return load_program(text).program; }

Type pt(std::string_view text) { return parse_type(text); }

}  // namespace

TEST(Universe, Herbrand) {
    EXPECT_EQ(herbrand_universe(typed("p a.\nq R :- (R b).")), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(herbrand_universe(Program{}), std::vector<std::string>{"u0"});
    Program merged = merge(typed("accept :- (input 0 X end)."), encode_input(InputString("ab")));
    EXPECT_EQ(herbrand_universe(merged), (std::vector<std::string>{"0", "end", "a", "1", "b"}));
}

TEST(Value, CanonicalFormAndOrder) {
    Universe u({"a", "b"});
    Type p = pt("i -> o");
    Value x = Value::rel(p, {{u["b"]}, {u["a"]}, {u["b"]}});
    EXPECT_EQ(x.tuples().size(), 2u);
    EXPECT_EQ(x.str(), "{a,b}");
    EXPECT_EQ(x, Value::rel(p, {{u["a"]}, {u["b"]}}));
    EXPECT_LT(Value::rel(p, {{u["b"]}}), x);
    EXPECT_LT(Value::boolean(false), Value::boolean(true));
}

TEST(Value, Leq) {
    Universe u({"a", "b"});
    Type p = pt("i -> o");
    EXPECT_TRUE(value_leq(Value::boolean(false), Value::boolean(true)));
    EXPECT_FALSE(value_leq(Value::boolean(true), Value::boolean(false)));
    EXPECT_TRUE(value_leq(Value::rel(p, {}), Value::rel(p, {{u["a"]}})));
    EXPECT_FALSE(value_leq(u["a"], u["b"]));
    EXPECT_THROW(value_leq(u["a"], Value::boolean(true)), std::invalid_argument);
}

TEST(Value, SubsetOrderIsPointwiseOrder) {
    // (i -> o) -> o over one constant: compare inclusion with f <= g iff f(d) <= g(d) for all d.
    Universe u({"a"});
    Domain inner = enumerate_domain(pt("i -> o"), u);
    Domain outer = enumerate_domain(pt("(i -> o) -> o"), u);
    ASSERT_EQ(outer.size(), 3u);
    for (const Value& f : outer.elements) {
        for (const Value& g : outer.elements) {
            bool pointwise = true;
            for (const Value& d : inner.elements) {
                pointwise = pointwise && value_leq(f.apply(d), g.apply(d));
            }
            EXPECT_EQ(value_leq(f, g), pointwise) << f.str() << " " << g.str();
        }
    }
}

TEST(Domain, Cardinalities) {
    Universe one({"a"});
    Universe two({"a", "b"});
    EXPECT_EQ(enumerate_domain(Type::iota(), two).size(), 2u);
    EXPECT_EQ(enumerate_domain(Type::omicron(), two).size(), 2u);
    EXPECT_EQ(enumerate_domain(pt("i -> o"), two).size(), 4u);
    EXPECT_EQ(enumerate_domain(pt("(i -> o) -> o"), one).size(), count_up_closed(powerset_order(1)));
    EXPECT_EQ(enumerate_domain(pt("(i -> o) -> o"), one).size(), 3u);
    EXPECT_EQ(enumerate_domain(pt("(i -> o) -> o"), two).size(), count_up_closed(powerset_order(2)));
    EXPECT_EQ(enumerate_domain(pt("(i -> o) -> o"), two).size(), 6u);
    EXPECT_EQ(enumerate_domain(pt("i -> i -> o"), two).size(), 16u);
}

TEST(Domain, SerialAndParallelAgree) {
    Universe two({"a", "b"});
    for (const char* t : {"i -> o", "(i -> o) -> o", "(i -> o) -> i -> o", "((i -> o) -> o) -> o", "i -> i -> o"}) {
        Domain s = enumerate_domain(pt(t), two, kDefaultDomainCap, Exec::Serial);
        Domain p = enumerate_domain(pt(t), two, kDefaultDomainCap, Exec::Parallel);
        EXPECT_EQ(s.elements, p.elements) << t;
        EXPECT_EQ(s.leq_table, p.leq_table) << t;
    }
}

TEST(Domain, PartialOrderTable) {
    Universe two({"a", "b"});
    Domain d = enumerate_domain(pt("(i -> o) -> i -> o"), two);
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_TRUE(d.leq(i, i));
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (i != j) EXPECT_FALSE(d.leq(i, j) && d.leq(j, i));
            EXPECT_EQ(d.leq(i, j), value_leq(d.elements[i], d.elements[j]));
            for (std::size_t k = 0; k < d.size(); ++k) {
                if (d.leq(i, j) && d.leq(j, k)) EXPECT_TRUE(d.leq(i, k));
            }
        }
    }
}

TEST(Domain, CapIsE301) {
    Universe three({"a", "b", "c"});
    try {
        enumerate_domain(pt("(i -> i -> o) -> o"), three);
        FAIL();
    } catch (const ResourceError& e) {
        EXPECT_EQ(e.diagnostic().code, "E301");
        EXPECT_NE(e.diagnostic().message.find("2^512"), std::string::npos) << e.diagnostic().message;
    }
}

TEST(Eval, Basics) {
    Universe u({"a", "b"});
    Interpretation I;
    I.emplace("p", Value::rel(pt("i -> o"), {{u["a"]}}));
    I.emplace("q", Value::rel(pt("i -> i -> o"), {{u["a"], u["b"]}}));
    HState s;
    s.emplace("X", u["b"]);
    auto ev = [&](const char* text) {
        Expr e = parse_term(text);
        Program names;
        names.signatures.emplace("p", pt("i -> o"));
        names.signatures.emplace("q", pt("i -> i -> o"));
        return eval_expr(resolve_names(e, names), I, s, u);
    };
    EXPECT_EQ(ev("p a"), Value::boolean(true));
    EXPECT_EQ(ev("p X"), Value::boolean(false));
    Value qa = ev("q a");
    EXPECT_EQ(qa, Value::rel(pt("i -> o"), {{u["b"]}}));
    EXPECT_EQ(eval_expr(Expr::eq(Expr::var("X"), Expr::var("X")), I, s, u), Value::boolean(true));
    EXPECT_THROW(eval_expr(Expr::var("Y"), I, s, u), std::logic_error);
}

TEST(Eval, ResiduationCoherence) {
    Universe u({"a", "b"});
    Domain d = enumerate_domain(pt("(i -> o) -> i -> o"), u);
    Domain args = enumerate_domain(pt("i -> o"), u);
    for (const Value& f : d.elements) {
        for (const Value& g : args.elements) {
            for (std::size_t i = 0; i < u.size(); ++i) {
                Value::Tuple t{g, u.at(i)};
                EXPECT_EQ(f.apply(g).apply(u.at(i)).truth(), f.contains(t));
                EXPECT_EQ(f.apply(t).truth(), f.contains(t));
            }
        }
    }
}

TEST(Tp, SingleStep) {
    Program p = typed("p a.\nq X :- (p X).");
    DomainCache dc(Universe(herbrand_universe(p)));
    Interpretation out = tp_step(p, bottom_interpretation(p), dc);
    EXPECT_EQ(dump_model(out), "p = { a }\nq = { }\n");
}

TEST(Tp, FactsOnly) {
    Program p = typed("e a b.\ne b c.\nflag.");
    DomainCache dc(Universe(herbrand_universe(p)));
    Interpretation out = tp_step(p, bottom_interpretation(p), dc);
    EXPECT_EQ(dump_model(out), "e = { (a,b) ; (b,c) }\nflag = true\n");
}

TEST(Naive, WorkedExample) {
    NaiveResult r = least_model_naive(typed("p a.\nq R :- (R b)."));
    EXPECT_EQ(dump_model(r.model), "p = { a }\nq = { {b} ; {a,b} }\n");
    EXPECT_EQ(r.iterations, 1u);
}

TEST(Naive, EmptyProgram) {
    NaiveResult r = least_model_naive(Program{});
    EXPECT_TRUE(r.model.empty());
    EXPECT_EQ(r.iterations, 0u);
}

TEST(Naive, TransitiveClosure) {
    NaiveResult r = least_model_naive(typed("e a b.\ne b c.\nt X Y :- (e X Y).\nt X Y :- (e X Z), (t Z Y)."));
    EXPECT_EQ(r.model.at("t").str(), "{(a,b),(a,c),(b,c)}");
}

TEST(Naive, SerialAndParallelAgree) {
    const char* texts[] = {
        "p a.\nq R :- (R b).",
        "e a b.\ne b a.\nt X Y :- (e X Y).\nt X Y :- (e X Z), (t Z Y).\nh P X :- (P X a).",
        "union P Q X :- (P X).\nunion P Q X :- (Q X).\np a.\nq b.\nboth X :- (union p q X).",
    };
    for (const char* t : texts) {
        Program p = typed(t);
        EXPECT_EQ(least_model_naive(p, kDefaultDomainCap, Exec::Serial).model,
                  least_model_naive(p, kDefaultDomainCap, Exec::Parallel).model)
            << t;
    }
}

TEST(Naive, FixpointAndLeastness) {
    // Every interpretation over the universe {a} is enumerable here.
    Program p = typed("#pred p : i -> o.\n#pred q : (i -> o) -> o.\nq R :- (R a).\np X :- (q p), (X = a).\np a.");
    NaiveResult m = least_model_naive(p);
    DomainCache dc(Universe(herbrand_universe(p)));
    EXPECT_EQ(tp_step(p, m.model, dc), m.model);
    const Domain& dp = dc.get(p.signatures.at("p"));
    const Domain& dq = dc.get(p.signatures.at("q"));
    std::size_t fixpoints = 0;
    for (const Value& vp : dp.elements) {
        for (const Value& vq : dq.elements) {
            Interpretation I{{"p", vp}, {"q", vq}};
            if (tp_step(p, I, dc) == I) {
                ++fixpoints;
                EXPECT_TRUE(interp_leq(m.model, I));
            }
        }
    }
    EXPECT_GE(fixpoints, 1u);
}

TEST(Domain, WithinSizeBound) {
    for (std::size_t u = 1; u <= 2; ++u) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < u; ++i) names.push_back("c" + std::to_string(i));
        Universe universe(names);
        for (const char* t : {"i -> o", "i -> i -> o", "(i -> o) -> o", "(i -> o) -> i -> o", "((i -> o) -> o) -> o"}) {
            EXPECT_LE(BigInt(enumerate_domain(pt(t), universe).size()), domain_bound(pt(t), u)) << t << " " << u;
        }
    }
}

TEST(Properties, Corpus) {
    std::mt19937 rng(11);
    std::size_t pairs = 0;
    for (const std::string& file : corpus_files()) {
        Program prog = load_program(read_file(file)).program;
        Properties p = tp_properties(prog, 10, rng);
        pairs += p.pairs;
        EXPECT_EQ(p.monotonicity_violations, 0u) << file;
        EXPECT_TRUE(p.fixpoint) << file;
        EXPECT_TRUE(p.within_bound) << file << ": " << p.iterations << " > " << p.bound;
    }
    EXPECT_GE(pairs, 100u);
}
