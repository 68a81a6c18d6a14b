#include "hodl/semantics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace hodl {

// ---------------------------------------------------------------------------
// Value

namespace {

std::size_t mix(std::size_t seed, std::size_t v) { return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)); }

}  // namespace

Value Value::ind(int index, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Ind;
    n->index = index;
    n->name = std::move(name);
    n->hash = mix(1, static_cast<std::size_t>(index));
    return Value(std::move(n));
}

Value Value::boolean(bool truth) {
    static const Value f = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Bool;
        n->hash = mix(2, 0);
        return Value(std::move(n));
    }();
    static const Value t = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Bool;
        n->truth = true;
        n->hash = mix(2, 1);
        return Value(std::move(n));
    }();
    return truth ? t : f;
}

Value Value::rel(Type type, std::vector<Tuple> tuples) {
    const std::size_t arity = type.arity();
    for (const Tuple& t : tuples) {
        if (t.size() != arity) throw std::invalid_argument("tuple arity does not match " + type.str());
    }
    std::sort(tuples.begin(), tuples.end(),
              [](const Tuple& a, const Tuple& b) { return compare_tuples(a, b) < 0; });
    tuples.erase(std::unique(tuples.begin(), tuples.end(),
                             [](const Tuple& a, const Tuple& b) { return compare_tuples(a, b) == 0; }),
                 tuples.end());
    return rel_sorted(std::move(type), std::move(tuples));
}

Value Value::rel_sorted(Type type, std::vector<Tuple> tuples) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Rel;
    std::size_t h = mix(3, tuples.size());
    for (const Tuple& t : tuples) {
        for (const Value& v : t) h = mix(h, v.hash());
    }
    n->hash = h;
    n->type = std::move(type);
    n->tuples = std::move(tuples);
    return Value(std::move(n));
}

std::size_t Value::arity() const { return is_rel() ? type().arity() : 0; }

int compare_tuples(std::span<const Value> a, std::span<const Value> b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i], b[i])) return c;
    }
    return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

int compare(const Value& a, const Value& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Value::Kind::Ind: return a.index() < b.index() ? -1 : (a.index() > b.index() ? 1 : 0);
        case Value::Kind::Bool: return static_cast<int>(a.truth()) - static_cast<int>(b.truth());
        case Value::Kind::Rel: {
            const auto& ta = a.tuples();
            const auto& tb = b.tuples();
            if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
            for (std::size_t i = 0; i < ta.size(); ++i) {
                if (int c = compare_tuples(ta[i], tb[i])) return c;
            }
            return 0;
        }
    }
    return 0;
}

namespace {

// Range of tuples whose leading components equal `prefix`.
auto prefix_range(const std::vector<Value::Tuple>& tuples, std::span<const Value> prefix) {
    auto cmp_prefix = [&](const Value::Tuple& t) {
        return compare_tuples(std::span<const Value>(t.data(), prefix.size()), prefix);
    };
    auto lo = std::partition_point(tuples.begin(), tuples.end(), [&](const Value::Tuple& t) { return cmp_prefix(t) < 0; });
    auto hi = std::partition_point(lo, tuples.end(), [&](const Value::Tuple& t) { return cmp_prefix(t) == 0; });
    return std::pair(lo, hi);
}

}  // namespace

bool Value::contains(std::span<const Value> tuple) const {
    if (!is_rel() || tuple.size() != arity()) throw std::invalid_argument("contains: arity mismatch");
    auto [lo, hi] = prefix_range(tuples(), tuple);
    return lo != hi;
}

Value Value::apply(std::span<const Value> args) const {
    if (!is_rel() || args.size() > arity()) throw std::invalid_argument("apply: not a relation of enough arity");
    auto [lo, hi] = prefix_range(tuples(), args);
    if (args.size() == arity()) return boolean(lo != hi);
    std::vector<Tuple> rest;
    rest.reserve(static_cast<std::size_t>(hi - lo));
    for (auto it = lo; it != hi; ++it) rest.emplace_back(it->begin() + static_cast<std::ptrdiff_t>(args.size()), it->end());
    return rel_sorted(type().drop(args.size()), std::move(rest));
}

namespace {

std::string tuple_str(const Value::Tuple& t) {
    if (t.size() == 1) return t[0].str();
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ',';
        out += t[i].str();
    }
    return out + ")";
}

}  // namespace

std::string Value::str() const {
    switch (kind()) {
        case Kind::Ind: return name();
        case Kind::Bool: return truth() ? "true" : "false";
        case Kind::Rel: {
            std::string out = "{";
            for (std::size_t i = 0; i < tuples().size(); ++i) {
                if (i) out += ',';
                out += tuple_str(tuples()[i]);
            }
            return out + "}";
        }
    }
    return "?";
}

bool value_leq(const Value& x, const Value& y) {
    if (x.kind() != y.kind()) throw std::invalid_argument("value_leq: values of different kinds");
    switch (x.kind()) {
        case Value::Kind::Ind: return x.index() == y.index();
        case Value::Kind::Bool: return !x.truth() || y.truth();
        case Value::Kind::Rel:
            if (!(x.type() == y.type())) throw std::invalid_argument("value_leq: relations of different types");
            return std::includes(y.tuples().begin(), y.tuples().end(), x.tuples().begin(), x.tuples().end(),
                                 [](const Value::Tuple& a, const Value::Tuple& b) { return compare_tuples(a, b) < 0; });
    }
    return false;
}

Value bottom_value(const Type& ty) {
    if (ty.is_omicron()) return Value::boolean(false);
    if (!ty.is_predicate()) throw std::invalid_argument("bottom_value: not a predicate type: " + ty.str());
    return Value::rel(ty, {});
}

// ---------------------------------------------------------------------------
// Universe and domains

Universe::Universe(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], i).second) throw std::invalid_argument("duplicate constant " + names_[i]);
        values_.push_back(Value::ind(static_cast<int>(i), names_[i]));
    }
}

const Value& Universe::operator[](const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("constant '" + name + "' is not in the universe");
    return values_[it->second];
}

std::vector<std::string> herbrand_universe(const Program& prog) {
    std::vector<std::string> names = prog.constants.empty() ? collect_constants(prog) : prog.constants;
    if (names.empty()) names.push_back(kDesignatedConstant);
    return names;
}

bool Domain::leq(std::size_t i, std::size_t j) const {
    if (!leq_table.empty()) return leq_table[i * size() + j] != 0;
    return value_leq(elements[i], elements[j]);
}

std::ptrdiff_t Domain::index_of(const Value& v) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), v);
    if (it == elements.end() || !(*it == v)) return -1;
    return it - elements.begin();
}

DomainCache::DomainCache(Universe universe, std::size_t cap, Exec exec)
    : universe_(std::move(universe)), cap_(cap), exec_(exec) {}

namespace {

// Bitmasks m over |S| points such that every point above a member is a member.
std::vector<std::uint64_t> upward_closed_masks(const std::vector<std::uint64_t>& up, Exec exec) {
    const std::size_t points = up.size();
    const std::uint64_t total = std::uint64_t{1} << points;
    auto closed = [&](std::uint64_t m) {
        for (std::uint64_t rest = m; rest; rest &= rest - 1) {
            int i = __builtin_ctzll(rest);
            if (up[i] & ~m) return false;
        }
        return true;
    };
    if (exec == Exec::Serial) {
        std::vector<std::uint64_t> out;
        for (std::uint64_t m = 0; m < total; ++m) {
            if (closed(m)) out.push_back(m);
        }
        return out;
    }
    std::vector<std::vector<std::uint64_t>> parts;
#pragma omp parallel
    {
#pragma omp single
        parts.resize(static_cast<std::size_t>(omp_get_num_threads()));
        const auto tid = static_cast<std::uint64_t>(omp_get_thread_num());
        const auto nthreads = static_cast<std::uint64_t>(omp_get_num_threads());
        const std::uint64_t lo = total / nthreads * tid + std::min(tid, total % nthreads);
        const std::uint64_t hi = lo + total / nthreads + (tid < total % nthreads ? 1 : 0);
        std::vector<std::uint64_t> local;
        for (std::uint64_t m = lo; m < hi; ++m) {
            if (closed(m)) local.push_back(m);
        }
        parts[tid] = std::move(local);
    }
    std::vector<std::uint64_t> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

// Mixed-radix decoding with the first position most significant.
void decode_index(std::uint64_t index, const std::vector<std::size_t>& radix, std::vector<std::size_t>& digits) {
    digits.resize(radix.size());
    for (std::size_t k = radix.size(); k-- > 0;) {
        digits[k] = static_cast<std::size_t>(index % radix[k]);
        index /= radix[k];
    }
}

}  // namespace

const Domain& DomainCache::get(const Type& ty) {
    if (auto it = cache_.find(ty); it != cache_.end()) return *it->second;
    auto dom = std::make_unique<Domain>(Domain{ty, {}, {}});

    if (ty.is_iota()) {
        for (std::size_t i = 0; i < universe_.size(); ++i) dom->elements.push_back(universe_.at(i));
        dom->leq_table.assign(universe_.size() * universe_.size(), 0);
        for (std::size_t i = 0; i < universe_.size(); ++i) dom->leq_table[i * universe_.size() + i] = 1;
    } else if (ty.is_omicron()) {
        dom->elements = {Value::boolean(false), Value::boolean(true)};
        dom->leq_table = {1, 1, 0, 1};
    } else {
        if (!ty.is_predicate()) throw std::invalid_argument("enumerate_domain: not a predicate type: " + ty.str());
        std::vector<const Domain*> args;
        std::vector<std::size_t> radix;
        std::uint64_t points = 1;
        bool overflow = false;
        for (const Type& a : ty.arguments()) {
            const Domain& d = get(a);
            args.push_back(&d);
            radix.push_back(d.size());
            if (d.size() != 0 && points > std::numeric_limits<std::uint64_t>::max() / d.size()) overflow = true;
            points *= d.size();
        }
        if (overflow || points > 62 || (std::uint64_t{1} << points) > cap_) {
            throw ResourceError(Diagnostic{
                "E301", {},
                "domain of " + ty.str() + " too large: predicted cardinality 2^" +
                    (overflow ? std::string("(>2^64)") : std::to_string(points)) + " exceeds cap " + std::to_string(cap_)});
        }

        // S in lexicographic order, and for each point the mask of points above it.
        std::vector<Value::Tuple> space(points);
        std::vector<std::vector<std::size_t>> coords(points);
        for (std::size_t i = 0; i < points; ++i) {
            decode_index(i, radix, coords[i]);
            for (std::size_t k = 0; k < args.size(); ++k) space[i].push_back(args[k]->elements[coords[i][k]]);
        }
        std::vector<std::uint64_t> up(points, 0);
        for (std::size_t i = 0; i < points; ++i) {
            for (std::size_t j = 0; j < points; ++j) {
                bool above = true;
                for (std::size_t k = 0; k < args.size() && above; ++k) above = args[k]->leq(coords[i][k], coords[j][k]);
                if (above) up[i] |= std::uint64_t{1} << j;
            }
        }

        std::vector<std::uint64_t> masks = upward_closed_masks(up, exec_);
        std::vector<std::pair<Value, std::uint64_t>> elems;
        elems.reserve(masks.size());
        for (std::uint64_t m : masks) {
            std::vector<Value::Tuple> tuples;
            for (std::size_t i = 0; i < points; ++i) {
                if (m & (std::uint64_t{1} << i)) tuples.push_back(space[i]);
            }
            elems.emplace_back(Value::rel(ty, std::move(tuples)), m);
        }
        std::sort(elems.begin(), elems.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& e : elems) dom->elements.push_back(e.first);
        const std::size_t n = elems.size();
        if (n <= Domain::kLeqTableLimit) {
            dom->leq_table.assign(n * n, 0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    dom->leq_table[i * n + j] = (elems[i].second & ~elems[j].second) == 0;
                }
            }
        }
    }
    const Domain& ref = *dom;
    cache_.emplace(ty, std::move(dom));
    return ref;
}

Domain enumerate_domain(const Type& ty, const Universe& universe, std::size_t cap, Exec exec) {
    DomainCache cache(universe, cap, exec);
    return cache.get(ty);
}

bool is_upward_closed(const Value& rel, DomainCache& domains) {
    if (!rel.is_rel()) return true;
    std::vector<Type> arg_types = rel.type().arguments();
    if (std::all_of(arg_types.begin(), arg_types.end(), [](const Type& t) { return t.is_iota(); })) return true;
    std::vector<const Domain*> args;
    std::vector<std::size_t> radix;
    std::uint64_t points = 1;
    for (const Type& a : arg_types) {
        args.push_back(&domains.get(a));
        radix.push_back(args.back()->size());
        points *= args.back()->size();
    }
    std::vector<std::size_t> member, other;
    Value::Tuple candidate(args.size(), Value::boolean(false));
    for (const Value::Tuple& t : rel.tuples()) {
        member.clear();
        for (std::size_t k = 0; k < args.size(); ++k) {
            std::ptrdiff_t idx = args[k]->index_of(t[k]);
            if (idx < 0) return false;
            member.push_back(static_cast<std::size_t>(idx));
        }
        for (std::uint64_t j = 0; j < points; ++j) {
            decode_index(j, radix, other);
            bool above = true;
            for (std::size_t k = 0; k < args.size() && above; ++k) above = args[k]->leq(member[k], other[k]);
            if (!above) continue;
            for (std::size_t k = 0; k < args.size(); ++k) candidate[k] = args[k]->elements[other[k]];
            if (!rel.contains(candidate)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Interpretations

Interpretation bottom_interpretation(const Program& prog) {
    Interpretation out;
    for (const auto& [name, ty] : prog.signatures) out.emplace(name, bottom_value(ty));
    return out;
}

bool interp_leq(const Interpretation& a, const Interpretation& b) {
    for (const auto& [name, v] : a) {
        auto it = b.find(name);
        if (it == b.end() || !value_leq(v, it->second)) return false;
    }
    return true;
}

namespace {

Value eval_spine(const Value& head, std::span<const Value> args) {
    if (args.empty()) return head;
    if (!head.is_rel()) throw std::logic_error("application of a non-relation " + head.str());
    return head.apply(args);
}

}  // namespace

Value eval_expr(const Expr& e, const Interpretation& interp, const HState& state, const Universe& universe) {
    switch (e.kind()) {
        case Expr::Kind::Var: {
            auto it = state.find(e.name());
            if (it == state.end()) throw std::logic_error("unbound variable " + e.name());
            return it->second;
        }
        case Expr::Kind::Const: return universe[e.name()];
        case Expr::Kind::Pred: {
            auto it = interp.find(e.name());
            if (it != interp.end()) return it->second;
            if (e.type()) return bottom_value(*e.type());
            throw std::logic_error("predicate " + e.name() + " has no value");
        }
        case Expr::Kind::App: {
            Value head = eval_expr(e.head(), interp, state, universe);
            std::vector<Value> args;
            for (const Expr& a : e.spine_args()) args.push_back(eval_expr(a, interp, state, universe));
            return eval_spine(head, args);
        }
        case Expr::Kind::Eq: {
            Value l = eval_expr(e.lhs(), interp, state, universe);
            Value r = eval_expr(e.rhs(), interp, state, universe);
            if (!l.is_ind() || !r.is_ind()) throw std::logic_error("equality between non-individuals");
            return Value::boolean(l.index() == r.index());
        }
    }
    throw std::logic_error("eval_expr: bad expression");
}

// ---------------------------------------------------------------------------
// T_P

namespace {

// Clause body term with variables resolved to slots and names to values.
struct Term {
    enum class Kind { Slot, Val, Pred, App, Eq } kind;
    std::size_t slot = 0;  // Slot: variable slot; Pred: predicate id
    std::optional<Value> value;
    std::vector<Term> parts;  // App: head then args; Eq: lhs, rhs
    int depth = -1;           // highest slot used, -1 if ground
};

struct CompiledClause {
    std::size_t pred = 0;
    std::size_t formals = 0;
    std::vector<const Domain*> slot_domains;  // formals, then extra individual variables
    std::vector<std::vector<Term>> atoms_at;  // atoms_at[d + 1]: atoms whose deepest slot is d
};

using Env = std::vector<Value>;

Value eval_term(const Term& t, const Env& env, const std::vector<Value>& preds) {
    switch (t.kind) {
        case Term::Kind::Slot: return env[t.slot];
        case Term::Kind::Val: return *t.value;
        case Term::Kind::Pred: return preds[t.slot];
        case Term::Kind::App: {
            Value head = eval_term(t.parts[0], env, preds);
            std::vector<Value> args;
            args.reserve(t.parts.size() - 1);
            for (std::size_t i = 1; i < t.parts.size(); ++i) args.push_back(eval_term(t.parts[i], env, preds));
            return eval_spine(head, args);
        }
        case Term::Kind::Eq:
            return Value::boolean(eval_term(t.parts[0], env, preds).index() ==
                                  eval_term(t.parts[1], env, preds).index());
    }
    throw std::logic_error("eval_term");
}

bool atoms_hold(const std::vector<Term>& atoms, const Env& env, const std::vector<Value>& preds) {
    for (const Term& a : atoms) {
        if (!eval_term(a, env, preds).truth()) return false;
    }
    return true;
}

// Backtracking over slots [level, end); true when some extension satisfies all atoms.
bool satisfiable_from(const CompiledClause& c, std::size_t level, Env& env, const std::vector<Value>& preds) {
    if (level == c.slot_domains.size()) return true;
    for (const Value& v : c.slot_domains[level]->elements) {
        env[level] = v;
        if (atoms_hold(c.atoms_at[level + 1], env, preds) && satisfiable_from(c, level + 1, env, preds)) return true;
    }
    return false;
}

// Serial reference: enumerate formals depth-first, collecting satisfiable head tuples.
void collect_serial(const CompiledClause& c, std::size_t level, Env& env, const std::vector<Value>& preds,
                    std::vector<Value::Tuple>& out) {
    if (level == c.formals) {
        if (satisfiable_from(c, level, env, preds)) out.emplace_back(env.begin(), env.begin() + static_cast<std::ptrdiff_t>(c.formals));
        return;
    }
    for (const Value& v : c.slot_domains[level]->elements) {
        env[level] = v;
        if (atoms_hold(c.atoms_at[level + 1], env, preds)) collect_serial(c, level + 1, env, preds, out);
    }
}

// Parallel kernel: flattened index over the formal combinations.
void collect_parallel(const CompiledClause& c, const std::vector<Value>& preds, std::vector<Value::Tuple>& out) {
    std::vector<std::size_t> radix;
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < c.formals; ++k) {
        radix.push_back(c.slot_domains[k]->size());
        total *= radix.back();
    }
    std::vector<std::vector<Value::Tuple>> parts;
#pragma omp parallel
    {
#pragma omp single
        parts.resize(static_cast<std::size_t>(omp_get_num_threads()));
        std::vector<Value::Tuple> local;
        Env env(c.slot_domains.size(), Value::boolean(false));
        std::vector<std::size_t> digits;
#pragma omp for schedule(static)
        for (std::uint64_t i = 0; i < total; ++i) {
            decode_index(i, radix, digits);
            bool ok = true;
            for (std::size_t k = 0; k < c.formals && ok; ++k) {
                env[k] = c.slot_domains[k]->elements[digits[k]];
                ok = atoms_hold(c.atoms_at[k + 1], env, preds);
            }
            if (ok && satisfiable_from(c, c.formals, env, preds)) local.emplace_back(env.begin(), env.begin() + static_cast<std::ptrdiff_t>(c.formals));
        }
        parts[static_cast<std::size_t>(omp_get_thread_num())] = std::move(local);
    }
    for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
}

}  // namespace

struct TpOperator::Impl {
    std::vector<std::string> pred_names;
    std::vector<Type> pred_types;
    std::vector<CompiledClause> clauses;
    DomainCache* domains = nullptr;

    Term compile(const Expr& e, const std::map<std::string, std::size_t>& slots,
                 const std::map<std::string, std::size_t>& pred_ids) {
        Term t;
        t.kind = Term::Kind::Val;
        switch (e.kind()) {
            case Expr::Kind::Var:
                t.kind = Term::Kind::Slot;
                t.slot = slots.at(e.name());
                t.depth = static_cast<int>(t.slot);
                return t;
            case Expr::Kind::Const: t.value = domains->universe()[e.name()]; return t;
            case Expr::Kind::Pred: {
                auto it = pred_ids.find(e.name());
                if (it == pred_ids.end()) throw std::logic_error("predicate " + e.name() + " has no signature");
                t.kind = Term::Kind::Pred;
                t.slot = it->second;
                return t;
            }
            case Expr::Kind::App: {
                t.kind = Term::Kind::App;
                t.parts.push_back(compile(e.head(), slots, pred_ids));
                for (const Expr& a : e.spine_args()) t.parts.push_back(compile(a, slots, pred_ids));
                break;
            }
            case Expr::Kind::Eq:
                t.kind = Term::Kind::Eq;
                t.parts.push_back(compile(e.lhs(), slots, pred_ids));
                t.parts.push_back(compile(e.rhs(), slots, pred_ids));
                break;
        }
        for (const Term& p : t.parts) t.depth = std::max(t.depth, p.depth);
        return t;
    }
};

namespace {

void body_vars(const Expr& e, std::vector<std::string>& out) {
    if (e.is_var()) {
        if (std::find(out.begin(), out.end(), e.name()) == out.end()) out.push_back(e.name());
    } else if (e.is_app() || e.is_eq()) {
        body_vars(e.fun(), out);
        body_vars(e.arg(), out);
    }
}

}  // namespace

TpOperator::TpOperator(const Program& prog, DomainCache& domains) : impl_(std::make_unique<Impl>()) {
    impl_->domains = &domains;
    std::map<std::string, std::size_t> pred_ids;
    for (const auto& [name, ty] : prog.signatures) {
        pred_ids.emplace(name, impl_->pred_names.size());
        impl_->pred_names.push_back(name);
        impl_->pred_types.push_back(ty);
    }
    const Domain& individuals = domains.get(Type::iota());
    for (const Clause& c : prog.clauses) {
        auto pid = pred_ids.find(c.head);
        if (pid == pred_ids.end()) throw std::logic_error("clause head " + c.head + " has no signature");
        CompiledClause cc;
        cc.pred = pid->second;
        cc.formals = c.params.size();
        std::vector<Type> arg_types = impl_->pred_types[cc.pred].arguments();
        if (arg_types.size() != c.params.size()) throw std::logic_error("clause arity mismatch for " + c.head);
        std::map<std::string, std::size_t> slots;
        for (std::size_t i = 0; i < c.params.size(); ++i) {
            if (!c.params[i].is_var() || !slots.emplace(c.params[i].name(), i).second) {
                throw std::logic_error("clause for " + c.head + " is not definitional");
            }
            cc.slot_domains.push_back(&domains.get(arg_types[i]));
        }
        std::vector<std::string> vars;
        for (const Expr& b : c.body) body_vars(b, vars);
        for (const std::string& v : vars) {
            if (slots.contains(v)) continue;
            slots.emplace(v, cc.slot_domains.size());
            cc.slot_domains.push_back(&individuals);
        }
        cc.atoms_at.resize(cc.slot_domains.size() + 1);
        for (const Expr& b : c.body) {
            Term t = impl_->compile(b, slots, pred_ids);
            cc.atoms_at[static_cast<std::size_t>(t.depth + 1)].push_back(std::move(t));
        }
        impl_->clauses.push_back(std::move(cc));
    }
}

TpOperator::~TpOperator() = default;

Interpretation TpOperator::operator()(const Interpretation& interp, Exec exec) const {
    const Impl& im = *impl_;
    std::vector<Value> preds;
    preds.reserve(im.pred_names.size());
    for (std::size_t i = 0; i < im.pred_names.size(); ++i) {
        auto it = interp.find(im.pred_names[i]);
        preds.push_back(it != interp.end() ? it->second : bottom_value(im.pred_types[i]));
    }
    std::vector<std::vector<Value::Tuple>> derived(im.pred_names.size());
    for (const CompiledClause& c : im.clauses) {
        // Ground atoms rule out the clause before any enumeration.
        Env env(c.slot_domains.size(), Value::boolean(false));
        if (!atoms_hold(c.atoms_at[0], env, preds)) continue;
        if (exec == Exec::Serial || c.formals == 0) {
            collect_serial(c, 0, env, preds, derived[c.pred]);
        } else {
            collect_parallel(c, preds, derived[c.pred]);
        }
    }
    Interpretation out;
    for (std::size_t i = 0; i < im.pred_names.size(); ++i) {
        const Type& ty = im.pred_types[i];
        if (ty.is_omicron()) {
            out.emplace(im.pred_names[i], Value::boolean(!derived[i].empty()));
            continue;
        }
        Value v = Value::rel(ty, std::move(derived[i]));
        if (!is_upward_closed(v, *im.domains)) {
            throw std::logic_error("T_P produced a non-monotone relation for " + im.pred_names[i]);
        }
        out.emplace(im.pred_names[i], std::move(v));
    }
    return out;
}

Interpretation tp_step(const Program& prog, const Interpretation& interp, DomainCache& domains, Exec exec) {
    return TpOperator(prog, domains)(interp, exec);
}

NaiveResult least_model_naive(const Program& prog, std::size_t cap, Exec exec) {
    DomainCache domains(Universe(herbrand_universe(prog)), cap, exec);
    TpOperator tp(prog, domains);
    NaiveResult result;
    result.model = bottom_interpretation(prog);
    for (;;) {
        Interpretation next = tp(result.model, exec);
        if (next == result.model) return result;
        result.model = std::move(next);
        if (++result.iterations > kNaiveIterationCap) throw std::logic_error("naive iteration cap exceeded");
    }
}

std::string dump_model(const Interpretation& model) {
    std::string out;
    for (const auto& [name, v] : model) {
        out += name;
        out += " = ";
        if (v.is_bool()) {
            out += v.truth() ? "true" : "false";
        } else if (v.tuples().empty()) {
            out += "{ }";
        } else {
            out += "{ ";
            for (std::size_t i = 0; i < v.tuples().size(); ++i) {
                if (i) out += " ; ";
                out += tuple_str(v.tuples()[i]);
            }
            out += " }";
        }
        out += '\n';
    }
    return out;
}

}  // namespace hodl
