#include "hodl/core.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hodl {

std::string Diagnostic::render(const std::string& file) const {
    std::ostringstream out;
    out << file << ':' << pos.line << ':' << pos.column << ": " << code << ' ' << message;
    return out.str();
}

Error::Error(Diagnostic diag)
    : std::runtime_error(diag.code + " " + diag.message), diag_(std::move(diag)) {}

BudgetExhausted::BudgetExhausted(std::uint64_t steps)
    : std::runtime_error("unknown: budget exhausted after " + std::to_string(steps) + " steps"),
      steps_(steps) {}

// ---------------------------------------------------------------------------
// Type

Type Type::iota() {
    static const Type t(std::make_shared<const Node>(Node{Kind::Iota, nullptr, nullptr}));
    return t;
}

Type Type::omicron() {
    static const Type t(std::make_shared<const Node>(Node{Kind::Omicron, nullptr, nullptr}));
    return t;
}

Type Type::arrow(Type argument, Type result) {
    return Type(std::make_shared<const Node>(Node{Kind::Arrow,
                                                  std::make_shared<const Type>(std::move(argument)),
                                                  std::make_shared<const Type>(std::move(result))}));
}

Type Type::predicate(std::span<const Type> args) {
    Type ty = omicron();
    for (auto it = args.rbegin(); it != args.rend(); ++it) ty = arrow(*it, ty);
    return ty;
}

const Type& Type::argument() const {
    if (!is_arrow()) throw std::logic_error("argument() of non-arrow type");
    return *node_->argument;
}

const Type& Type::result() const {
    if (!is_arrow()) throw std::logic_error("result() of non-arrow type");
    return *node_->result;
}

std::vector<Type> Type::arguments() const {
    std::vector<Type> out;
    const Type* cur = this;
    while (cur->is_arrow()) {
        out.push_back(cur->argument());
        cur = &cur->result();
    }
    return out;
}

std::size_t Type::arity() const {
    std::size_t n = 0;
    for (const Type* cur = this; cur->is_arrow(); cur = &cur->result()) ++n;
    return n;
}

bool Type::is_predicate() const {
    const Type* cur = this;
    while (cur->is_arrow()) {
        const Type& a = cur->argument();
        if (a.is_omicron()) return false;
        if (a.is_arrow() && !a.is_predicate()) return false;
        cur = &cur->result();
    }
    return cur->is_omicron();
}

Type Type::drop(std::size_t n) const {
    const Type* cur = this;
    for (std::size_t i = 0; i < n; ++i) cur = &cur->result();
    return *cur;
}

std::string Type::str() const {
    switch (kind()) {
        case Kind::Iota: return "i";
        case Kind::Omicron: return "o";
        case Kind::Arrow: {
            std::string a = argument().str();
            if (argument().is_arrow()) a = "(" + a + ")";
            return a + " -> " + result().str();
        }
    }
    return "?";
}

bool operator==(const Type& a, const Type& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (!a.is_arrow()) return true;
    return a.argument() == b.argument() && a.result() == b.result();
}

bool operator<(const Type& a, const Type& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    if (!a.is_arrow()) return false;
    if (!(a.argument() == b.argument())) return a.argument() < b.argument();
    return a.result() < b.result();
}

int type_order(const Type& ty) {
    if (!ty.is_arrow()) return 0;
    int best = 0;
    for (const Type& a : ty.arguments()) best = std::max(best, type_order(a));
    return 1 + best;
}

// ---------------------------------------------------------------------------
// Expr

Expr Expr::var(std::string name, SourcePos pos) {
    return Expr(std::make_shared<const Node>(Node{Kind::Var, std::move(name), nullptr, nullptr, pos, {}}));
}

Expr Expr::constant(std::string name, SourcePos pos) {
    return Expr(std::make_shared<const Node>(Node{Kind::Const, std::move(name), nullptr, nullptr, pos, {}}));
}

Expr Expr::pred(std::string name, SourcePos pos) {
    return Expr(std::make_shared<const Node>(Node{Kind::Pred, std::move(name), nullptr, nullptr, pos, {}}));
}

Expr Expr::app(Expr fun, Expr arg) {
    SourcePos pos = fun.pos();
    return Expr(std::make_shared<const Node>(Node{Kind::App, {}, std::make_shared<const Expr>(std::move(fun)),
                                                  std::make_shared<const Expr>(std::move(arg)), pos, {}}));
}

Expr Expr::eq(Expr lhs, Expr rhs) {
    SourcePos pos = lhs.pos();
    return Expr(std::make_shared<const Node>(Node{Kind::Eq, {}, std::make_shared<const Expr>(std::move(lhs)),
                                                  std::make_shared<const Expr>(std::move(rhs)), pos, {}}));
}

Expr Expr::apply(Expr head, std::span<const Expr> args) {
    for (const Expr& a : args) head = app(std::move(head), a);
    return head;
}

const Expr& Expr::fun() const {
    if (!node_->left) throw std::logic_error("fun() of leaf expression");
    return *node_->left;
}

const Expr& Expr::arg() const {
    if (!node_->right) throw std::logic_error("arg() of leaf expression");
    return *node_->right;
}

Expr Expr::with_type(Type ty) const {
    Node n = *node_;
    n.type = std::move(ty);
    return Expr(std::make_shared<const Node>(std::move(n)));
}

const Expr& Expr::head() const {
    const Expr* cur = this;
    while (cur->is_app()) cur = &cur->fun();
    return *cur;
}

std::vector<Expr> Expr::spine_args() const {
    std::vector<Expr> out;
    const Expr* cur = this;
    while (cur->is_app()) {
        out.push_back(cur->arg());
        cur = &cur->fun();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string Expr::str() const {
    switch (kind()) {
        case Kind::Var:
        case Kind::Const:
        case Kind::Pred: return name();
        case Kind::Eq: return "(" + lhs().str() + " = " + rhs().str() + ")";
        case Kind::App: {
            std::string out = head().str();
            for (const Expr& a : spine_args()) {
                out += ' ';
                if (a.is_app()) {
                    out += "(" + a.str() + ")";
                } else {
                    out += a.str();
                }
            }
            return out;
        }
    }
    return "?";
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Expr::Kind::Var:
        case Expr::Kind::Const:
        case Expr::Kind::Pred: return a.name() == b.name();
        case Expr::Kind::App:
        case Expr::Kind::Eq: return a.fun() == b.fun() && a.arg() == b.arg();
    }
    return false;
}

bool operator==(const Clause& a, const Clause& b) {
    return a.head == b.head && a.params == b.params && a.body == b.body;
}

bool operator==(const Program& a, const Program& b) {
    return a.signatures == b.signatures && a.clauses == b.clauses && a.constants == b.constants;
}

namespace {

void collect_from(const Expr& e, std::vector<std::string>& out, std::unordered_set<std::string>& seen) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            if (seen.insert(e.name()).second) out.push_back(e.name());
            break;
        case Expr::Kind::App:
        case Expr::Kind::Eq:
            collect_from(e.fun(), out, seen);
            collect_from(e.arg(), out, seen);
            break;
        default: break;
    }
}

}  // namespace

std::vector<std::string> collect_constants(const Program& prog) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const Clause& c : prog.clauses) {
        for (const Expr& p : c.params) collect_from(p, out, seen);
        for (const Expr& b : c.body) collect_from(b, out, seen);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stats and bounds

namespace {

bool is_numeral(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
}

void collect_types(const Type& ty, std::set<Type>& out) {
    if (!ty.is_arrow()) return;
    if (!out.insert(ty).second) return;
    for (const Type& a : ty.arguments()) collect_types(a, out);
}

void collect_expr_types(const Expr& e, std::set<Type>& out) {
    if (e.type()) collect_types(*e.type(), out);
    if (e.is_app() || e.is_eq()) {
        collect_expr_types(e.fun(), out);
        collect_expr_types(e.arg(), out);
    }
}

}  // namespace

ProgramStats compute_stats(const Program& prog, std::size_t input_length) {
    ProgramStats st;
    st.r = prog.clauses.size();
    for (const Clause& c : prog.clauses) st.l = std::max(st.l, c.body.size() + 1);

    std::vector<std::string> consts = prog.constants.empty() ? collect_constants(prog) : prog.constants;
    if (consts.empty()) consts.push_back(kDesignatedConstant);
    std::size_t input_numerals = 0;
    for (const std::string& name : consts) {
        if (is_numeral(name) && name.size() < 20 && std::stoull(name) < input_length) ++input_numerals;
    }
    st.c = consts.size() - input_numerals;

    std::set<Type> types;
    std::set<std::string> preds;
    for (const auto& [name, ty] : prog.signatures) {
        preds.insert(name);
        collect_types(ty, types);
    }
    for (const Clause& c : prog.clauses) {
        preds.insert(c.head);
        for (const Expr& p : c.params) collect_expr_types(p, types);
        for (const Expr& b : c.body) collect_expr_types(b, types);
    }
    st.p = preds.size();
    st.s = types.size();
    for (const Type& ty : types) st.t = std::max(st.t, ty.arity());
    return st;
}

BigInt expk(unsigned k, const BigInt& x, std::size_t bit_cap) {
    BigInt v = x;
    for (unsigned i = 0; i < k; ++i) {
        if (v >= bit_cap) {
            throw ResourceError(Diagnostic{"E301", {}, "exp_" + std::to_string(k) + " exceeds the " +
                                                           std::to_string(bit_cap) + "-bit cap"});
        }
        BigInt next = 1;
        next <<= static_cast<unsigned>(v);
        v = std::move(next);
    }
    return v;
}

namespace {

BigInt checked_pow(const BigInt& base, std::size_t exponent, std::size_t bit_cap) {
    std::size_t bits = base == 0 ? 0 : msb(base) + 1;
    if (bits * exponent > bit_cap) {
        throw ResourceError(Diagnostic{"E301", {}, "bound exceeds the " + std::to_string(bit_cap) + "-bit cap"});
    }
    return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

}  // namespace

BigInt iteration_bound(const ProgramStats& stats, std::size_t n, unsigned k, std::size_t bit_cap) {
    if (k < 1) throw std::invalid_argument("iteration_bound requires k >= 1");
    BigInt universe = BigInt(n) + stats.c;
    BigInt tuples = checked_pow(universe, stats.t, bit_cap);
    if (k == 1) return BigInt(stats.p) * tuples;
    BigInt inner = checked_pow(BigInt(stats.t), k - 2, bit_cap) * tuples;
    BigInt elems = expk(k - 1, inner, bit_cap);
    return BigInt(stats.p) * checked_pow(elems, stats.t, bit_cap);
}

}  // namespace hodl
