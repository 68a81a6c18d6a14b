#include "hodl/codegen.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "hodl/syntax.hpp"
#include "hodl/typing.hpp"

namespace hodl {

namespace {

std::vector<Type> iotas(unsigned n) { return std::vector<Type>(n, Type::iota()); }

std::vector<Type> concat(std::vector<Type> a, const std::vector<Type>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Type pred_type(const std::vector<Type>& args) { return Type::predicate(args); }

// "X1 X2 ... Xd"
std::string seq(const std::string& var, unsigned d) {
    std::string out;
    for (unsigned i = 1; i <= d; ++i) {
        if (i > 1) out += ' ';
        out += var + std::to_string(i);
    }
    return out;
}

// "(p X1), (p X2), ..." over positions [from, to]
std::string each(const std::string& pred, const std::string& var, unsigned from, unsigned to) {
    std::string out;
    for (unsigned i = from; i <= to; ++i) {
        if (!out.empty()) out += ", ";
        out += "(" + pred + " " + var + std::to_string(i) + ")";
    }
    return out;
}

std::string join(std::initializer_list<std::string> parts) {
    std::string out;
    for (const std::string& p : parts) {
        if (p.empty()) continue;
        if (!out.empty()) out += ", ";
        out += p;
    }
    return out;
}

// Collects directives and clause text.
class Emitter {
public:
    void declare(const std::string& name, const Type& ty) {
        if (declared_.insert(name).second) directives_ += "#pred " + name + " : " + ty.str() + ".\n";
    }
    void section(const std::string& title) { clauses_ += "\n% " + title + "\n"; }
    void clause(const std::string& text) { clauses_ += text + "\n"; }
    void raw(const std::string& text) { clauses_ += text; }

    std::string text(const std::string& header) const {
        return (header.empty() ? "" : "% " + header + "\n") + directives_ + clauses_;
    }
    const std::string& clauses() const { return clauses_; }

private:
    std::set<std::string> declared_;
    std::string directives_;
    std::string clauses_;
};

void emit_base_arith(Emitter& e, unsigned d) {
    const Type tup = pred_type(iotas(d));
    const Type tup2 = pred_type(iotas(2 * d));
    e.declare("input", pred_type(iotas(3)));
    e.declare("base_zero", pred_type(iotas(1)));
    e.declare("base_last", pred_type(iotas(1)));
    e.declare("base_succ", pred_type(iotas(2)));
    e.declare("base_pred", pred_type(iotas(2)));
    e.declare("tuple_zero", tup);
    e.declare("tuple_last", tup);
    e.declare("tuple_base_last", tup);
    e.declare("tuple_succ", tup2);
    e.declare("tuple_pred", tup2);
    e.declare("less_than", tup2);
    e.declare("tuple_non_zero", tup);

    const std::string X = seq("X", d), Y = seq("Y", d), Z = seq("Z", d);
    e.section("counting over input positions");
    e.clause("base_zero 0.");
    e.clause("base_last I :- (input I X end).");
    e.clause("base_succ I J :- (input I X J), (input J A K).");
    e.clause("base_pred I J :- (base_succ J I).");

    e.section("d-tuples");
    e.clause("tuple_zero " + X + " :- " + each("base_zero", "X", 1, d) + ".");
    e.clause("tuple_last " + X + " :- " + each("base_last", "X", 1, d) + ".");
    e.clause("tuple_base_last " + X + " :- " +
             join({each("base_zero", "X", 1, d - 1), "(base_last X" + std::to_string(d) + ")"}) + ".");
    for (unsigned j = d; j >= 1; --j) {
        std::string eqs;
        for (unsigned i = 1; i < j; ++i) {
            if (!eqs.empty()) eqs += ", ";
            eqs += "(X" + std::to_string(i) + " = Y" + std::to_string(i) + ")";
        }
        const std::string js = std::to_string(j);
        e.clause("tuple_succ " + X + " " + Y + " :- " +
                 join({eqs, "(base_succ X" + js + " Y" + js + ")", each("base_last", "X", j + 1, d),
                       each("base_zero", "Y", j + 1, d)}) +
                 ".");
    }
    e.clause("tuple_pred " + X + " " + Y + " :- (tuple_succ " + Y + " " + X + ").");
    e.clause("less_than " + X + " " + Y + " :- (tuple_succ " + X + " " + Y + ").");
    e.clause("less_than " + X + " " + Y + " :- (tuple_succ " + X + " " + Z + "), (less_than " + Z + " " + Y + ").");
    e.clause("tuple_non_zero " + X + " :- (tuple_zero " + Z + "), (less_than " + Z + " " + X + ").");
}

// Argument types of a bit position of a level-j number.
std::vector<Type> position_types(unsigned level, unsigned d) {
    return level == 1 ? iotas(d) : std::vector<Type>{number_type(level - 1, d)};
}

void emit_level(Emitter& e, unsigned j, unsigned d) {
    const std::string s = "_" + std::to_string(j);
    const Type num = number_type(j, d);
    const std::vector<Type> pos = position_types(j, d);
    e.declare("invert", pred_type(iotas(2)));
    for (const char* p : {"zero", "last"}) e.declare(p + s, num);
    for (const char* p : {"is_zero", "non_zero", "is_last", "non_last"}) e.declare(p + s, pred_type({num}));
    for (const char* p : {"all_to_right", "exists_to_right"}) {
        e.declare(p + s, pred_type(concat({Type::iota(), num}, pos)));
    }
    for (const char* p : {"pred", "succ"}) e.declare(p + s, pred_type(concat({num}, num.arguments())));
    e.declare("equal" + s, pred_type({num, num}));
    e.declare("equal_test" + s, pred_type(concat({num, num}, pos)));
    e.declare("less_than" + s, pred_type({num, num}));

    // Position helpers: level 1 walks d-tuples, higher levels walk level j-1 numbers.
    std::string X, Y;
    const std::string lower = "_" + std::to_string(j - 1);
    if (j == 1) {
        X = seq("X", d);
        Y = seq("Y", d);
    } else {
        X = "X";
    }
    auto is_bottom = [&](const std::string& x) { return j == 1 ? "(tuple_zero " + x + ")" : "(is_zero" + lower + " " + x + ")"; };
    // Guard for stepping from X to the next lower position, and the term for that position.
    auto step_down = [&]() { return j == 1 ? "(tuple_pred " + X + " " + Y + ")" : "(non_zero" + lower + " X)"; };
    const std::string below = j == 1 ? Y : "(pred" + lower + " X)";
    auto top = [&](const std::string& goal) {
        // Applies `goal` at the most significant position.
        if (j == 1) return "(tuple_last " + X + "), (" + goal + " " + X + ")";
        return "(" + goal + " last" + lower + ")";
    };

    e.section("level " + std::to_string(j) + " numbers");
    e.clause("zero" + s + " " + X + " low.");
    e.clause("last" + s + " " + X + " high.");
    e.clause("is_zero" + s + " N :- " + top("all_to_right" + s + " low N") + ".");
    e.clause("all_to_right" + s + " V N " + X + " :- " + is_bottom(X) + ", (N " + X + " V).");
    e.clause("all_to_right" + s + " V N " + X + " :- " + step_down() + ", (N " + X + " V), (all_to_right" + s +
             " V N " + below + ").");
    e.clause("non_zero" + s + " N :- " + top("exists_to_right" + s + " high N") + ".");
    e.clause("exists_to_right" + s + " V N " + X + " :- (N " + X + " V).");
    e.clause("exists_to_right" + s + " V N " + X + " :- " + step_down() + ", (exists_to_right" + s + " V N " +
             below + ").");
    e.clause("is_last" + s + " N :- " + top("all_to_right" + s + " high N") + ".");
    e.clause("non_last" + s + " N :- " + top("exists_to_right" + s + " low N") + ".");

    // pred: flip the lowest bit, keep bits with a high bit below, flip bits with only low bits below.
    // succ is the mirror image with low and high exchanged.
    struct Dir {
        const char* name;
        const char* guard;
        const char* keep_if;
        const char* flip_if;
    };
    for (const Dir& dir : {Dir{"pred", "non_zero", "high", "low"}, Dir{"succ", "non_last", "low", "high"}}) {
        const std::string name = dir.name + s;
        const std::string guard = "(" + std::string(dir.guard) + s + " N)";
        if (j == 1) {
            e.clause(name + " N " + X + " V :- (tuple_zero " + X + "), " + guard + ", (N " + X + " V1), (invert V1 V).");
            e.clause(name + " N " + X + " V :- " + guard + ", (tuple_pred " + X + " " + Y + "), (exists_to_right" + s +
                     " " + dir.keep_if + " N " + Y + "), (N " + X + " V).");
            e.clause(name + " N " + X + " V :- " + guard + ", (tuple_pred " + X + " " + Y + "), (all_to_right" + s +
                     " " + dir.flip_if + " N " + Y + "), (N " + X + " V1), (invert V1 V).");
        } else {
            e.clause(name + " N X V :- (is_zero" + lower + " X), " + guard + ", (N X V1), (invert V1 V).");
            e.clause(name + " N X V :- (non_zero" + lower + " X), (exists_to_right" + s + " " + dir.keep_if +
                     " N (pred" + lower + " X)), (N X V).");
            e.clause(name + " N X V :- (non_zero" + lower + " X), " + guard + ", (all_to_right" + s + " " +
                     dir.flip_if + " N (pred" + lower + " X)), (N X V1), (invert V1 V).");
        }
        if (j == 1 && std::string(dir.name) == "pred") {
            e.clause("invert low high.");
            e.clause("invert high low.");
        }
    }

    e.clause("equal" + s + " N M :- " + top("equal_test" + s + " N M") + ".");
    e.clause("equal_test" + s + " N M " + X + " :- " + is_bottom(X) + ", (N " + X + " V), (M " + X + " V).");
    e.clause("equal_test" + s + " N M " + X + " :- " + step_down() + ", (N " + X + " V), (M " + X +
             " V), (equal_test" + s + " N M " + below + ").");
    e.clause("less_than" + s + " N M :- (is_zero" + s + " N), (non_zero" + s + " M).");
    e.clause("less_than" + s + " N M :- (non_zero" + s + " N), (non_zero" + s + " M), (less_than" + s + " (pred" +
             s + " N) (pred" + s + " M)).");
}

void emit_bignum(Emitter& e, unsigned k, unsigned d) {
    if (k < 2) throw std::invalid_argument("number libraries need k >= 2");
    emit_base_arith(e, d);
    for (unsigned j = 1; j + 1 <= k; ++j) emit_level(e, j, d);
}

void emit_short_strings(Emitter& e, const TuringMachine& m) {
    e.declare("accept", Type::omicron());
    e.section("strings of length 0 and 1");
    e.raw(short_string_text(m));
}

Program typed_program(const std::string& text) { return load_program(text).program; }

std::vector<Clause> clauses_of(const std::string& text) { return desugar(parse_program(text)).clauses; }

std::string header(const TuringMachine& m, unsigned k, unsigned d) {
    return "machine " + m.name + " k=" + std::to_string(k) + " d=" + std::to_string(d) + " generator " +
           kGeneratorVersion;
}

void check_params(unsigned d) {
    if (d < 1) throw std::invalid_argument("d must be at least 1");
}

}  // namespace

Type number_type(unsigned level, unsigned d) {
    if (level < 1) throw std::invalid_argument("number levels start at 1");
    if (level == 1) return pred_type(iotas(d + 1));
    return pred_type({number_type(level - 1, d), Type::iota()});
}

std::string base_arith_text(unsigned d) {
    check_params(d);
    Emitter e;
    emit_base_arith(e, d);
    return e.text("");
}

std::vector<Clause> gen_base_arith(unsigned d) { return clauses_of(base_arith_text(d)); }

std::string bignum_text(unsigned k, unsigned d) {
    check_params(d);
    Emitter e;
    emit_bignum(e, k, d);
    return e.text("number library k=" + std::to_string(k) + " d=" + std::to_string(d) + " generator " +
                  kGeneratorVersion);
}

std::vector<Clause> gen_bignum(unsigned k, unsigned d) { return clauses_of(bignum_text(k, d)); }

Program bignum_library(unsigned k, unsigned d) { return typed_program(bignum_text(k, d)); }

std::string short_string_text(const TuringMachine& m) {
    std::string out;
    const std::pair<const char*, const char*> cases[] = {{"", "empty"}, {"a", "a"}, {"b", "b"}};
    for (const auto& [w, constant] : cases) {
        RunResult r = tm_run(m, InputString(w), kStepHorizon);
        if (r.verdict == Verdict::Accepted) {
            out += std::string("accept :- (input 0 ") + constant + " end).\n";
        } else if (r.verdict != Verdict::Rejected) {
            throw Error(Diagnostic{"E401", {},
                                   "machine " + m.name + " gives " + verdict_text(r.verdict) + " on \"" + w +
                                       "\"; cannot decide the short string"});
        }
    }
    return out;
}

std::uint64_t simulated_steps(unsigned k, unsigned d, std::size_t n) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t size = 1;
    for (unsigned i = 0; i < d; ++i) {
        if (n != 0 && size > kMax / n) return kMax;
        size *= n;
    }
    if (size == 0) return 0;
    for (unsigned i = 1; i < k; ++i) {
        if (size >= 64) return kMax;
        size = std::uint64_t{1} << size;
    }
    return size - 1;
}

std::uint64_t oracle_steps(unsigned k, unsigned d, std::size_t n) {
    if (n <= 1) return kStepHorizon;
    return std::min(simulated_steps(k, d, n), kStepHorizon);
}

std::vector<Clause> short_string_rules(const TuringMachine& m) {
    return clauses_of("#pred input : i -> i -> i -> o.\n" + short_string_text(m));
}

std::string compile_tm_first_order_text(const TuringMachine& m, unsigned d) {
    check_params(d);
    Emitter e;
    emit_base_arith(e, d);
    const Type time = pred_type(iotas(d));
    const Type cell = pred_type(iotas(2 * d));
    for (Symbol s : kTapeSymbols) e.declare("symbol_" + symbol_suffix(s), cell);
    for (const std::string& st : m.states) e.declare("state_" + st, time);
    e.declare("cursor", cell);
    e.declare("accept", Type::omicron());

    const std::string T = seq("T", d), U = seq("U", d), X = seq("X", d), Y = seq("Y", d), Z = seq("Z", d);
    const std::string ds = std::to_string(d);
    e.section("initial configuration");
    for (Symbol s : {Symbol::A, Symbol::B}) {
        e.clause("symbol_" + symbol_suffix(s) + " " + T + " " + X + " :- " +
                 join({"(tuple_zero " + T + ")", each("base_zero", "X", 1, d - 1),
                       "(input X" + ds + " " + symbol_text(s) + " W)"}) +
                 ".");
    }
    e.clause("symbol_blank " + T + " " + X + " :- (tuple_zero " + T + "), (tuple_base_last " + Z + "), (less_than " + Z +
             " " + X + ").");
    e.clause("state_" + m.start + " " + T + " :- (tuple_zero " + T + ").");
    e.clause("cursor " + T + " " + X + " :- (tuple_zero " + T + "), (tuple_zero " + X + ").");

    e.section("transitions");
    for (const auto& [key, act] : m.transitions) {
        const std::string sym = "symbol_" + symbol_suffix(key.second);
        const std::string body = "(tuple_succ " + T + " " + U + "), (state_" + key.first + " " + T + "), (cursor " + T +
                                 " " + X + "), (" + sym + " " + T + " " + X + ")";
        const std::string written = act.kind == Action::Kind::Write ? "symbol_" + symbol_suffix(act.write) : sym;
        e.clause(written + " " + U + " " + X + " :- " + body + ".");
        e.clause("state_" + act.next + " " + U + " :- " + body + ".");
        switch (act.kind) {
            case Action::Kind::Write: e.clause("cursor " + U + " " + X + " :- " + body + "."); break;
            case Action::Kind::Right:
                e.clause("cursor " + U + " " + Y + " :- " + body + ", (tuple_succ " + X + " " + Y + ").");
                break;
            case Action::Kind::Left:
                e.clause("cursor " + U + " " + Y + " :- " + body + ", (tuple_pred " + X + " " + Y + ").");
                break;
        }
    }

    e.section("cells away from the cursor keep their symbol");
    for (Symbol s : kTapeSymbols) {
        const std::string sym = "symbol_" + symbol_suffix(s);
        e.clause(sym + " " + U + " " + Y + " :- (tuple_succ " + T + " " + U + "), (cursor " + T + " " + X +
                 "), (less_than " + X + " " + Y + "), (" + sym + " " + T + " " + Y + ").");
        e.clause(sym + " " + U + " " + Y + " :- (tuple_succ " + T + " " + U + "), (cursor " + T + " " + X +
                 "), (less_than " + Y + " " + X + "), (" + sym + " " + T + " " + Y + ").");
    }

    e.section("acceptance");
    e.clause("accept :- (tuple_last " + T + "), (state_yes " + T + ").");
    emit_short_strings(e, m);
    return e.text(header(m, 1, d));
}

Program compile_tm_first_order(const TuringMachine& m, unsigned d) {
    return typed_program(compile_tm_first_order_text(m, d));
}

std::string compile_tm_higher_order_text(const TuringMachine& m, unsigned k, unsigned d) {
    check_params(d);
    if (k < 2) throw std::invalid_argument("higher-order simulation needs k >= 2");
    Emitter e;
    emit_bignum(e, k, d);

    const unsigned level = k - 1;
    const std::string s = "_" + std::to_string(level);
    const Type num = number_type(level, d);
    e.declare("base_to_higher" + s, pred_type(concat({Type::iota()}, num.arguments())));
    for (Symbol sym : kTapeSymbols) e.declare("symbol_" + symbol_suffix(sym), pred_type({num, num}));
    for (const std::string& st : m.states) e.declare("state_" + st, pred_type({num}));
    e.declare("cursor", pred_type(concat({num}, num.arguments())));
    e.declare("accept", Type::omicron());

    // Bit positions of a time point or cell: a d-tuple at level 1, a number otherwise.
    const std::string I = level == 1 ? seq("I", d) : "I";
    const std::string X = level == 1 ? seq("X", d) : "X";
    const std::string prev = "(pred" + s + " T)";
    const std::string here = "(cursor " + prev + ")";

    e.section("input positions as numbers");
    e.clause("base_to_higher" + s + " 0 " + X + " low.");
    e.clause("base_to_higher" + s + " M " + X + " V :- (input J S M), (succ" + s + " (base_to_higher" + s + " J) " + X +
             " V).");

    e.section("initial configuration");
    for (Symbol sym : {Symbol::A, Symbol::B}) {
        e.clause("symbol_" + symbol_suffix(sym) + " T X :- (is_zero" + s + " T), (input Y " + symbol_text(sym) +
                 " W), (equal" + s + " (base_to_higher" + s + " Y) X).");
    }
    e.clause("symbol_blank T X :- (is_zero" + s + " T), (base_last Y), (less_than" + s + " (base_to_higher" + s +
             " Y) X).");
    e.clause("state_" + m.start + " T :- (is_zero" + s + " T).");
    e.clause("cursor T " + I + " low :- (is_zero" + s + " T).");

    e.section("transitions");
    for (const auto& [key, act] : m.transitions) {
        const std::string sym = "symbol_" + symbol_suffix(key.second);
        const std::string fired = "(state_" + key.first + " " + prev + "), (" + sym + " " + prev + " " + here + ")";
        const std::string written = act.kind == Action::Kind::Write ? "symbol_" + symbol_suffix(act.write) : sym;
        e.clause(written + " T X :- (non_zero" + s + " T), (equal" + s + " X " + here + "), " + fired + ".");
        e.clause("state_" + act.next + " T :- (non_zero" + s + " T), " + fired + ".");
        std::string moved;
        switch (act.kind) {
            case Action::Kind::Write: moved = "(cursor " + prev + " " + I + " V)"; break;
            case Action::Kind::Right: moved = "((succ" + s + " " + here + ") " + I + " V)"; break;
            case Action::Kind::Left: moved = "((pred" + s + " " + here + ") " + I + " V)"; break;
        }
        e.clause("cursor T " + I + " V :- (non_zero" + s + " T), " + fired + ", " + moved + ".");
    }

    e.section("cells away from the cursor keep their symbol");
    for (Symbol sym : kTapeSymbols) {
        const std::string p = "symbol_" + symbol_suffix(sym);
        e.clause(p + " T X :- (less_than" + s + " X " + here + "), (" + p + " " + prev + " X).");
        e.clause(p + " T X :- (less_than" + s + " " + here + " X), (" + p + " " + prev + " X).");
    }

    e.section("acceptance");
    e.clause("accept :- (state_yes last" + s + ").");
    emit_short_strings(e, m);
    return e.text(header(m, k, d));
}

Program compile_tm_higher_order(const TuringMachine& m, unsigned k, unsigned d) {
    return typed_program(compile_tm_higher_order_text(m, k, d));
}

std::string compile_tm_text(const TuringMachine& m, unsigned k, unsigned d) {
    return k <= 1 ? compile_tm_first_order_text(m, d) : compile_tm_higher_order_text(m, k, d);
}

Program compile_tm(const TuringMachine& m, unsigned k, unsigned d) { return typed_program(compile_tm_text(m, k, d)); }

}  // namespace hodl
