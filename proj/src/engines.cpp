#include "hodl/engines.hpp"

#include <algorithm>
#include <iostream>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

#include "hodl/syntax.hpp"
#include "hodl/typing.hpp"

namespace hodl {

std::string engine_name(EngineKind kind) {
    switch (kind) {
        case EngineKind::Naive: return "naive";
        case EngineKind::Seminaive: return "seminaive";
        case EngineKind::Demand: return "demand";
    }
    return "?";
}

EngineKind parse_engine(const std::string& name) {
    if (name == "naive") return EngineKind::Naive;
    if (name == "seminaive") return EngineKind::Seminaive;
    if (name == "demand") return EngineKind::Demand;
    throw std::invalid_argument("unknown engine '" + name + "'");
}

namespace {

using Key = std::vector<std::uint32_t>;
using KeyHash = boost::hash<Key>;

void collect_vars(const Expr& e, std::vector<std::string>& out) {
    switch (e.kind()) {
        case Expr::Kind::Var:
            if (std::find(out.begin(), out.end(), e.name()) == out.end()) out.push_back(e.name());
            break;
        case Expr::Kind::App:
        case Expr::Kind::Eq:
            collect_vars(e.fun(), out);
            collect_vars(e.arg(), out);
            break;
        default: break;
    }
}

std::map<std::string, std::size_t> predicate_ids(const Program& prog) {
    std::map<std::string, std::size_t> ids;
    for (const auto& [name, ty] : prog.signatures) ids.emplace(name, ids.size());
    return ids;
}

// Formals first, then the remaining body variables.
std::map<std::string, std::size_t> clause_slots(const Clause& c) {
    std::map<std::string, std::size_t> slots;
    for (std::size_t i = 0; i < c.params.size(); ++i) {
        if (!c.params[i].is_var() || !slots.emplace(c.params[i].name(), i).second) {
            throw std::invalid_argument("clause for " + c.head + " is not definitional");
        }
    }
    std::vector<std::string> vars;
    for (const Expr& b : c.body) collect_vars(b, vars);
    for (const std::string& v : vars) slots.emplace(v, slots.size());
    return slots;
}

// ===========================================================================
// Semi-naive evaluation of first-order programs

constexpr int kNoSlot = -1;

struct Operand {
    int slot = kNoSlot;  // variable slot, or
    int constant = 0;    // universe index when slot == kNoSlot
};

struct FoAtom {
    bool is_eq = false;
    std::size_t pred = 0;
    std::vector<Operand> args;  // two operands for an equality
};

struct FoClause {
    std::size_t pred = 0;
    std::size_t arity = 0;
    std::size_t slots = 0;
    std::vector<FoAtom> atoms;
};

struct FoRelation {
    std::size_t arity = 0;
    std::size_t count = 0;
    std::vector<int> flat;  // tuples back to back
    std::unordered_set<std::vector<int>, boost::hash<std::vector<int>>> seen;
    // mask -> (bound values -> tuple ids)
    struct Index {
        std::size_t upto = 0;
        std::unordered_map<std::vector<int>, std::vector<std::uint32_t>, boost::hash<std::vector<int>>> map;
    };
    std::unordered_map<std::uint64_t, Index> indexes;

    std::size_t size() const { return count; }
    const int* tuple(std::size_t id) const { return flat.data() + id * arity; }

    const std::vector<std::uint32_t>* lookup(std::uint64_t mask, const std::vector<int>& key) {
        Index& idx = indexes[mask];
        const std::size_t n = size();
        for (; idx.upto < n; ++idx.upto) {
            std::vector<int> k;
            const int* t = tuple(idx.upto);
            for (std::size_t i = 0; i < arity; ++i) {
                if (mask >> i & 1) k.push_back(t[i]);
            }
            idx.map[std::move(k)].push_back(static_cast<std::uint32_t>(idx.upto));
        }
        auto it = idx.map.find(key);
        return it == idx.map.end() ? nullptr : &it->second;
    }
};

class Seminaive {
public:
    explicit Seminaive(const Program& prog) : universe_(herbrand_universe(prog)) {
        auto ids = predicate_ids(prog);
        for (const auto& [name, ty] : prog.signatures) {
            if (type_order(ty) > 1) {
                throw std::invalid_argument("seminaive engine needs a first-order program; " + name + " has type " +
                                            ty.str());
            }
            names_.push_back(name);
            types_.push_back(ty);
            FoRelation r;
            r.arity = ty.arity();
            relations_.push_back(std::move(r));
        }
        for (const Clause& c : prog.clauses) {
            auto slots = clause_slots(c);
            FoClause fc;
            fc.pred = ids.at(c.head);
            fc.arity = c.params.size();
            fc.slots = slots.size();
            auto operand = [&](const Expr& e) {
                Operand o;
                if (e.is_var()) {
                    o.slot = static_cast<int>(slots.at(e.name()));
                } else if (e.is_const()) {
                    o.constant = universe_[e.name()].index();
                } else {
                    throw std::invalid_argument("unexpected argument " + e.str() + " in a first-order atom");
                }
                return o;
            };
            for (const Expr& b : c.body) {
                FoAtom a;
                if (b.is_eq()) {
                    a.is_eq = true;
                    a.args = {operand(b.lhs()), operand(b.rhs())};
                } else {
                    const Expr& h = b.head();
                    if (!h.is_pred()) throw std::invalid_argument("atom " + b.str() + " has a variable head");
                    a.pred = ids.at(h.name());
                    for (const Expr& x : b.spine_args()) a.args.push_back(operand(x));
                }
                fc.atoms.push_back(std::move(a));
            }
            clauses_.push_back(std::move(fc));
        }
    }

    SeminaiveResult run() {
        std::vector<std::size_t> delta_begin(relations_.size(), 0);
        std::size_t iterations = 0;
        bool first = true;
        for (;;) {
            pending_.assign(relations_.size(), {});
            for (const FoClause& c : clauses_) {
                if (first) {
                    evaluate(c, -1, delta_begin);
                    continue;
                }
                for (std::size_t i = 0; i < c.atoms.size(); ++i) {
                    const FoAtom& a = c.atoms[i];
                    if (a.is_eq || delta_begin[a.pred] == relations_[a.pred].size()) continue;
                    evaluate(c, static_cast<int>(i), delta_begin);
                }
            }
            first = false;
            bool grew = false;
            for (std::size_t p = 0; p < relations_.size(); ++p) {
                delta_begin[p] = relations_[p].size();
                for (auto& t : pending_[p]) {
                    grew = true;
                    relations_[p].flat.insert(relations_[p].flat.end(), t.begin(), t.end());
                    ++relations_[p].count;
                }
            }
            if (!grew) break;
            ++iterations;
        }
        SeminaiveResult out;
        out.iterations = iterations;
        for (std::size_t p = 0; p < relations_.size(); ++p) {
            if (types_[p].is_omicron()) {
                out.model.emplace(names_[p], Value::boolean(!relations_[p].seen.empty()));
                continue;
            }
            std::vector<Value::Tuple> tuples;
            for (const auto& t : relations_[p].seen) {
                Value::Tuple vt;
                for (int x : t) vt.push_back(universe_.at(static_cast<std::size_t>(x)));
                tuples.push_back(std::move(vt));
            }
            out.model.emplace(names_[p], Value::rel(types_[p], std::move(tuples)));
        }
        return out;
    }

private:
    static constexpr int kUnbound = -1;

    void evaluate(const FoClause& c, int delta, const std::vector<std::size_t>& delta_begin) {
        std::vector<int> env(c.slots, kUnbound);
        std::vector<bool> done(c.atoms.size(), false);
        if (delta >= 0) {
            const FoAtom& a = c.atoms[static_cast<std::size_t>(delta)];
            const FoRelation& r = relations_[a.pred];
            done[static_cast<std::size_t>(delta)] = true;
            for (std::size_t id = delta_begin[a.pred]; id < r.size(); ++id) {
                std::vector<int> bound;
                if (!match(a, r.tuple(id), env, bound)) continue;
                join(c, done, env);
                for (int s : bound) env[static_cast<std::size_t>(s)] = kUnbound;
            }
        } else {
            join(c, done, env);
        }
    }

    static int value_of(const Operand& o, const std::vector<int>& env) {
        return o.slot == kNoSlot ? o.constant : env[static_cast<std::size_t>(o.slot)];
    }

    // Binds the unbound operands of `a` to `t`; false on a mismatch (env restored).
    static bool match(const FoAtom& a, const int* t, std::vector<int>& env, std::vector<int>& bound) {
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            const Operand& o = a.args[i];
            int v = value_of(o, env);
            if (v == kUnbound) {
                env[static_cast<std::size_t>(o.slot)] = t[i];
                bound.push_back(o.slot);
            } else if (v != t[i]) {
                for (int s : bound) env[static_cast<std::size_t>(s)] = kUnbound;
                bound.clear();
                return false;
            }
        }
        return true;
    }

    // Picks the remaining atom with the most bound operands.
    static int choose(const FoClause& c, const std::vector<bool>& done, const std::vector<int>& env) {
        int best = -1;
        int best_score = -1;
        for (std::size_t i = 0; i < c.atoms.size(); ++i) {
            if (done[i]) continue;
            const FoAtom& a = c.atoms[i];
            int bound = 0;
            for (const Operand& o : a.args) bound += value_of(o, env) != kUnbound;
            int score;
            if (a.is_eq) {
                score = bound > 0 ? 1000 : 0;
            } else {
                score = bound == static_cast<int>(a.args.size()) ? 900 : 10 + bound;
            }
            if (score > best_score) {
                best = static_cast<int>(i);
                best_score = score;
            }
        }
        return best;
    }

    void join(const FoClause& c, std::vector<bool>& done, std::vector<int>& env) {
        int next = choose(c, done, env);
        if (next < 0) {
            emit(c, env, 0);
            return;
        }
        const FoAtom& a = c.atoms[static_cast<std::size_t>(next)];
        done[static_cast<std::size_t>(next)] = true;
        if (a.is_eq) {
            int l = value_of(a.args[0], env);
            int r = value_of(a.args[1], env);
            if (l != kUnbound && r != kUnbound) {
                if (l == r) join(c, done, env);
            } else if (l != kUnbound || r != kUnbound) {
                const Operand& free = l == kUnbound ? a.args[0] : a.args[1];
                env[static_cast<std::size_t>(free.slot)] = l == kUnbound ? r : l;
                join(c, done, env);
                env[static_cast<std::size_t>(free.slot)] = kUnbound;
            } else {
                for (std::size_t u = 0; u < universe_.size(); ++u) {
                    env[static_cast<std::size_t>(a.args[0].slot)] = static_cast<int>(u);
                    const bool same = a.args[0].slot == a.args[1].slot;
                    if (!same) env[static_cast<std::size_t>(a.args[1].slot)] = static_cast<int>(u);
                    join(c, done, env);
                    env[static_cast<std::size_t>(a.args[0].slot)] = kUnbound;
                    if (!same) env[static_cast<std::size_t>(a.args[1].slot)] = kUnbound;
                }
            }
        } else {
            FoRelation& r = relations_[a.pred];
            std::uint64_t mask = 0;
            std::vector<int> key;
            for (std::size_t i = 0; i < a.args.size(); ++i) {
                int v = value_of(a.args[i], env);
                if (v != kUnbound) {
                    mask |= std::uint64_t{1} << i;
                    key.push_back(v);
                }
            }
            const std::size_t limit = r.size();
            auto visit = [&](std::size_t id) {
                std::vector<int> bound;
                if (!match(a, r.tuple(id), env, bound)) return;
                join(c, done, env);
                for (int s : bound) env[static_cast<std::size_t>(s)] = kUnbound;
            };
            if (a.args.empty()) {
                if (limit > 0) join(c, done, env);
            } else if (mask == 0) {
                for (std::size_t id = 0; id < limit; ++id) visit(id);
            } else if (const auto* ids = r.lookup(mask, key)) {
                // Ids are copied: the index may grow while the join recurses.
                const std::vector<std::uint32_t> copy = *ids;
                for (std::uint32_t id : copy) visit(id);
            }
        }
        done[static_cast<std::size_t>(next)] = false;
    }

    void emit(const FoClause& c, std::vector<int>& env, std::size_t from) {
        for (std::size_t i = from; i < c.arity; ++i) {
            if (env[i] != kUnbound) continue;
            for (std::size_t u = 0; u < universe_.size(); ++u) {
                env[i] = static_cast<int>(u);
                emit(c, env, i + 1);
            }
            env[i] = kUnbound;
            return;
        }
        std::vector<int> t(env.begin(), env.begin() + static_cast<std::ptrdiff_t>(c.arity));
        FoRelation& r = relations_[c.pred];
        if (r.seen.insert(t).second) pending_[c.pred].push_back(std::move(t));
    }

    Universe universe_;
    std::vector<std::string> names_;
    std::vector<Type> types_;
    std::vector<FoRelation> relations_;
    std::vector<FoClause> clauses_;
    std::vector<std::vector<std::vector<int>>> pending_;
};

}  // namespace

SeminaiveResult least_model_seminaive(const Program& prog) { return Seminaive(prog).run(); }

// ===========================================================================
// Demand-driven tabling
//
// Runtime terms are interned: individuals are their universe index, then
// closures (a predicate or relation applied to some leading arguments) and
// extensional relations over individuals. A call is a predicate applied to
// terms, where individual positions may be free; its table holds the
// answers for the free positions. Mutually dependent calls are completed
// together once a pass over them adds nothing that was already consumed.

namespace {

using TermId = std::uint32_t;
constexpr TermId kFree = std::numeric_limits<TermId>::max();
constexpr TermId kUnboundTerm = kFree - 1;

struct TermNode {
    enum class Kind : std::uint8_t { Ind, Closure, Ext } kind = Kind::Ind;
    // Closure: head is a predicate index, or the id of an Ext term.
    bool head_is_ext = false;
    std::uint32_t head = 0;
    std::vector<TermId> args;
    // Ext: sorted tuples of individuals.
    std::vector<std::vector<TermId>> tuples;
    std::optional<Type> type;  // remaining type of closures and relations
};

struct ArgExpr {
    enum class Kind : std::uint8_t { Slot, Term, App } kind = Kind::Term;
    std::size_t slot = 0;
    TermId term = 0;
    std::vector<ArgExpr> parts;  // App: head then arguments
};

struct DAtom {
    bool is_eq = false;
    ArgExpr head;               // Slot or Term (a predicate closure)
    std::vector<ArgExpr> args;  // for an equality, the two sides
    std::vector<std::size_t> nested_slots;  // individual slots inside App arguments
};

struct DClause {
    std::size_t slots = 0;
    std::size_t arity = 0;
    std::vector<DAtom> atoms;
};

struct Table {
    std::uint32_t pred = 0;
    std::vector<TermId> pattern;
    std::vector<std::size_t> free_pos;
    std::vector<std::vector<TermId>> answers;
    std::unordered_set<std::vector<TermId>, boost::hash<std::vector<TermId>>> seen;
    bool complete = false;
    bool active = false;
    bool fresh = false;
    bool read = false;
    bool on_stack = false;
    std::uint32_t dfn = 0;
    std::uint32_t lowlink = 0;
};

}  // namespace

struct DemandEngine::Impl {
    Program prog;
    EngineConfig cfg;
    Universe universe;
    std::vector<std::string> pred_names;
    std::vector<Type> pred_types;
    std::map<std::string, std::size_t> pred_ids;
    std::vector<std::vector<DClause>> clauses;  // per predicate

    std::vector<TermNode> terms;
    std::unordered_map<Key, TermId, KeyHash> term_index;
    std::map<Type, std::uint32_t> type_ids;

    std::vector<std::unique_ptr<Table>> tables;
    std::unordered_map<Key, std::size_t, KeyHash> table_index;
    std::vector<std::size_t> completion_stack;
    std::uint32_t next_dfn = 1;
    std::uint64_t change_epoch = 0;
    std::uint64_t pass = 0;
    std::uint64_t steps = 0;
    std::uint32_t* current_low = nullptr;

    Impl(const Program& p, EngineConfig c) : prog(p), cfg(c), universe(herbrand_universe(p)) {
        for (std::size_t i = 0; i < universe.size(); ++i) {
            TermNode n;
            n.kind = TermNode::Kind::Ind;
            n.type = Type::iota();
            terms.push_back(std::move(n));
        }
        pred_ids = predicate_ids(prog);
        for (const auto& [name, ty] : prog.signatures) {
            pred_names.push_back(name);
            pred_types.push_back(ty);
        }
        clauses.resize(pred_names.size());
        for (const Clause& c : prog.clauses) {
            auto slots = clause_slots(c);
            DClause dc;
            dc.slots = slots.size();
            dc.arity = c.params.size();
            for (const Expr& b : c.body) dc.atoms.push_back(compile_atom(b, slots));
            clauses.at(pred_ids.at(c.head)).push_back(std::move(dc));
        }
    }

    // --- terms -------------------------------------------------------------

    std::uint32_t type_id(const Type& t) { return type_ids.emplace(t, type_ids.size()).first->second; }

    TermId intern(TermNode node) {
        Key key{static_cast<std::uint32_t>(node.kind)};
        if (node.kind == TermNode::Kind::Closure) {
            key.push_back(node.head_is_ext);
            key.push_back(node.head);
            key.insert(key.end(), node.args.begin(), node.args.end());
        } else {
            key.push_back(type_id(*node.type));
            for (const auto& t : node.tuples) key.insert(key.end(), t.begin(), t.end());
        }
        auto [it, inserted] = term_index.emplace(std::move(key), static_cast<TermId>(terms.size()));
        if (inserted) terms.push_back(std::move(node));
        return it->second;
    }

    TermId pred_term(std::size_t p) {
        TermNode n;
        n.kind = TermNode::Kind::Closure;
        n.head = static_cast<std::uint32_t>(p);
        n.type = pred_types[p];
        return intern(std::move(n));
    }

    TermId ext_term(const Type& ty, std::vector<std::vector<TermId>> tuples) {
        std::sort(tuples.begin(), tuples.end());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
        TermNode n;
        n.kind = TermNode::Kind::Ext;
        n.type = ty;
        n.tuples = std::move(tuples);
        return intern(std::move(n));
    }

    TermId ind(const std::string& name) {
        if (!universe.contains(name)) throw std::invalid_argument("constant " + name + " is not in the universe");
        return static_cast<TermId>(universe[name].index());
    }

    TermId from_value(const Value& v) {
        if (v.is_ind()) return ind(v.name());
        if (!v.is_rel()) throw std::invalid_argument("goal arguments must be individuals or relations");
        for (const Type& a : v.type().arguments()) {
            if (!a.is_iota()) throw std::invalid_argument("goal relations must range over individuals");
        }
        std::vector<std::vector<TermId>> tuples;
        for (const Value::Tuple& t : v.tuples()) {
            std::vector<TermId> row;
            for (const Value& x : t) row.push_back(ind(x.name()));
            tuples.push_back(std::move(row));
        }
        return ext_term(v.type(), std::move(tuples));
    }

    std::string render(TermId id) const {
        const TermNode& n = terms[id];
        switch (n.kind) {
            case TermNode::Kind::Ind: return universe.names()[id];
            case TermNode::Kind::Ext: {
                std::string out = "{";
                for (std::size_t i = 0; i < n.tuples.size(); ++i) {
                    if (i) out += ',';
                    const auto& t = n.tuples[i];
                    if (t.size() != 1) out += '(';
                    for (std::size_t j = 0; j < t.size(); ++j) out += (j ? "," : "") + render(t[j]);
                    if (t.size() != 1) out += ')';
                }
                return out + "}";
            }
            case TermNode::Kind::Closure: {
                std::string head = n.head_is_ext ? render(n.head) : pred_names[n.head];
                if (n.args.empty()) return head;
                std::string out = "(" + head;
                for (TermId a : n.args) out += " " + render(a);
                return out + ")";
            }
        }
        return "?";
    }

    // Applies a closure or relation term to more arguments.
    TermId extend(TermId fun, const std::vector<TermId>& more) {
        const TermNode& f = terms[fun];
        TermNode n;
        n.kind = TermNode::Kind::Closure;
        if (f.kind == TermNode::Kind::Ext) {
            n.head_is_ext = true;
            n.head = fun;
        } else {
            n.head_is_ext = f.head_is_ext;
            n.head = f.head;
            n.args = f.args;
        }
        n.args.insert(n.args.end(), more.begin(), more.end());
        n.type = f.type->drop(more.size());
        return maybe_extensionalize(intern(std::move(n)));
    }

    static bool individual_relation(const Type& t) {
        if (!t.is_arrow()) return false;
        for (const Type& a : t.arguments()) {
            if (!a.is_iota()) return false;
        }
        return true;
    }

    TermId maybe_extensionalize(TermId id) {
        if (!cfg.extensionalize) return id;
        const TermNode& n = terms[id];
        if (n.kind != TermNode::Kind::Closure || !individual_relation(*n.type)) return id;
        const Type ty = *n.type;
        const std::size_t rest = ty.arity();
        if (n.head_is_ext) {
            const TermNode& e = terms[n.head];
            std::vector<std::vector<TermId>> tuples;
            for (const auto& t : e.tuples) {
                if (std::equal(n.args.begin(), n.args.end(), t.begin())) {
                    tuples.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(n.args.size()), t.end());
                }
            }
            return ext_term(ty, std::move(tuples));
        }
        std::vector<TermId> pattern = n.args;
        pattern.resize(pattern.size() + rest, kFree);
        const std::size_t tid = table_for(n.head, pattern);
        solve(tid);
        Table& t = *tables[tid];
        if (!t.complete) return id;
        return ext_term(ty, t.answers);
    }

    // --- compilation --------------------------------------------------------

    ArgExpr compile_arg(const Expr& e, const std::map<std::string, std::size_t>& slots) {
        ArgExpr a;
        switch (e.kind()) {
            case Expr::Kind::Var:
                a.kind = ArgExpr::Kind::Slot;
                a.slot = slots.at(e.name());
                break;
            case Expr::Kind::Const: a.term = ind(e.name()); break;
            case Expr::Kind::Pred: a.term = pred_term(pred_ids.at(e.name())); break;
            case Expr::Kind::App:
                a.kind = ArgExpr::Kind::App;
                a.parts.push_back(compile_arg(e.head(), slots));
                for (const Expr& x : e.spine_args()) a.parts.push_back(compile_arg(x, slots));
                break;
            case Expr::Kind::Eq: throw std::invalid_argument("equality used as an argument");
        }
        return a;
    }

    static void nested_slots(const ArgExpr& a, bool inside, std::vector<std::size_t>& out) {
        if (a.kind == ArgExpr::Kind::Slot && inside) {
            if (std::find(out.begin(), out.end(), a.slot) == out.end()) out.push_back(a.slot);
        }
        for (const ArgExpr& p : a.parts) nested_slots(p, true, out);
    }

    DAtom compile_atom(const Expr& b, const std::map<std::string, std::size_t>& slots) {
        DAtom a;
        if (b.is_eq()) {
            a.is_eq = true;
            a.args = {compile_arg(b.lhs(), slots), compile_arg(b.rhs(), slots)};
            return a;
        }
        a.head = compile_arg(b.head(), slots);
        for (const Expr& x : b.spine_args()) a.args.push_back(compile_arg(x, slots));
        for (const ArgExpr& x : a.args) nested_slots(x, false, a.nested_slots);
        return a;
    }

    // --- tables -------------------------------------------------------------

    void step() {
        if (++steps > cfg.step_budget) throw BudgetExhausted(steps);
    }

    std::size_t table_for(std::uint32_t pred, const std::vector<TermId>& pattern) {
        Key key{pred};
        key.insert(key.end(), pattern.begin(), pattern.end());
        auto [it, inserted] = table_index.emplace(std::move(key), tables.size());
        if (inserted) {
            auto t = std::make_unique<Table>();
            t->pred = pred;
            t->pattern = pattern;
            for (std::size_t i = 0; i < pattern.size(); ++i) {
                if (pattern[i] == kFree) t->free_pos.push_back(i);
            }
            tables.push_back(std::move(t));
        }
        return it->second;
    }

    void note_dependency(std::uint32_t low) {
        if (current_low && low < *current_low) *current_low = low;
    }

    void solve(std::size_t id) {
        Table& t = *tables[id];
        if (t.complete) return;
        if (t.active) {
            t.read = true;
            note_dependency(t.dfn);
            return;
        }
        if (t.on_stack && t.fresh) {
            t.read = true;
            note_dependency(t.lowlink);
            return;
        }
        if (!t.on_stack) {
            t.dfn = t.lowlink = next_dfn++;
            t.on_stack = true;
            completion_stack.push_back(id);
        }
        std::uint32_t* saved = current_low;
        current_low = &t.lowlink;
        t.active = true;
        for (;;) {
            const std::uint64_t epoch = change_epoch;
            evaluate(t);
            if (t.lowlink < t.dfn) break;
            // Leader: bring every stale member of the component up to date.
            auto at = std::find(completion_stack.begin(), completion_stack.end(), id);
            for (std::size_t i = static_cast<std::size_t>(at - completion_stack.begin()) + 1;
                 i < completion_stack.size(); ++i) {
                if (!tables[completion_stack[i]]->fresh) solve(completion_stack[i]);
            }
            if (t.lowlink < t.dfn) break;
            at = std::find(completion_stack.begin(), completion_stack.end(), id);
            if (change_epoch == epoch) {
                for (auto it = at; it != completion_stack.end(); ++it) {
                    Table& m = *tables[*it];
                    m.complete = true;
                    m.on_stack = false;
                    m.read = false;
                }
                completion_stack.erase(at, completion_stack.end());
                break;
            }
            ++pass;
            for (auto it = at; it != completion_stack.end(); ++it) {
                Table& m = *tables[*it];
                m.read = false;
                if (*it != id) m.fresh = false;
            }
        }
        t.active = false;
        current_low = saved;
        note_dependency(t.complete ? std::numeric_limits<std::uint32_t>::max() : t.lowlink);
    }

    void add_answer(Table& t, std::vector<TermId> answer) {
        if (!t.seen.insert(answer).second) return;
        if (cfg.trace) {
            std::ostream& out = cfg.trace_out ? *cfg.trace_out : std::cerr;
            out << pred_names[t.pred];
            std::size_t k = 0;
            for (std::size_t i = 0; i < t.pattern.size(); ++i) {
                out << ' ' << render(t.pattern[i] == kFree ? answer[k++] : t.pattern[i]);
            }
            out << " -> true @" << pass << '\n';
        }
        t.answers.push_back(std::move(answer));
        if (t.read) ++change_epoch;
    }

    void evaluate(Table& t) {
        t.fresh = true;
        for (const DClause& c : clauses[t.pred]) {
            std::vector<TermId> env(c.slots, kUnboundTerm);
            for (std::size_t i = 0; i < c.arity; ++i) {
                env[i] = t.pattern[i] == kFree ? kUnboundTerm : t.pattern[i];
            }
            run(c.atoms, 0, env, [&](std::vector<TermId>& e) { emit(t, e, 0); });
        }
    }

    void emit(Table& t, std::vector<TermId>& env, std::size_t k) {
        for (; k < t.free_pos.size(); ++k) {
            const std::size_t slot = t.free_pos[k];
            if (env[slot] != kUnboundTerm) continue;
            for (std::size_t u = 0; u < universe.size(); ++u) {
                env[slot] = static_cast<TermId>(u);
                emit(t, env, k + 1);
            }
            env[slot] = kUnboundTerm;
            return;
        }
        std::vector<TermId> answer;
        for (std::size_t p : t.free_pos) answer.push_back(env[p]);
        add_answer(t, std::move(answer));
    }

    // --- body evaluation ----------------------------------------------------

    // Ground value of an argument; kUnboundTerm for an unbound slot.
    TermId value(const ArgExpr& a, const std::vector<TermId>& env) {
        switch (a.kind) {
            case ArgExpr::Kind::Slot: return env[a.slot];
            case ArgExpr::Kind::Term: return a.term;
            case ArgExpr::Kind::App: {
                TermId head = value(a.parts[0], env);
                std::vector<TermId> args;
                for (std::size_t i = 1; i < a.parts.size(); ++i) args.push_back(value(a.parts[i], env));
                return extend(head, args);
            }
        }
        return kUnboundTerm;
    }

    template <class Sink>
    void run(const std::vector<DAtom>& atoms, std::size_t i, std::vector<TermId>& env, Sink&& sink) {
        step();
        if (i == atoms.size()) {
            sink(env);
            return;
        }
        const DAtom& a = atoms[i];
        for (std::size_t s : a.nested_slots) {
            if (env[s] != kUnboundTerm) continue;
            for (std::size_t u = 0; u < universe.size(); ++u) {
                env[s] = static_cast<TermId>(u);
                run(atoms, i, env, sink);
            }
            env[s] = kUnboundTerm;
            return;
        }
        if (a.is_eq) {
            const TermId l = value(a.args[0], env);
            const TermId r = value(a.args[1], env);
            if (l != kUnboundTerm && r != kUnboundTerm) {
                if (l == r) run(atoms, i + 1, env, sink);
                return;
            }
            if (l != kUnboundTerm || r != kUnboundTerm) {
                const std::size_t slot = l == kUnboundTerm ? a.args[0].slot : a.args[1].slot;
                env[slot] = l == kUnboundTerm ? r : l;
                run(atoms, i + 1, env, sink);
                env[slot] = kUnboundTerm;
                return;
            }
            for (std::size_t u = 0; u < universe.size(); ++u) {
                env[a.args[0].slot] = env[a.args[1].slot] = static_cast<TermId>(u);
                run(atoms, i + 1, env, sink);
            }
            env[a.args[0].slot] = env[a.args[1].slot] = kUnboundTerm;
            return;
        }

        const TermId head = value(a.head, env);
        // Copied: interning below may move the node.
        const TermNode hn = terms[head];
        std::vector<TermId> full;
        if (hn.kind == TermNode::Kind::Closure) full = hn.args;
        std::vector<std::size_t> free_slots;  // slot for each free position, in order
        for (const ArgExpr& x : a.args) {
            TermId v = value(x, env);
            if (v == kUnboundTerm) {
                free_slots.push_back(x.slot);
                v = kFree;
            }
            full.push_back(v);
        }

        // Binds the free slots to `row` (values for the free positions) and continues.
        auto with_row = [&](const std::vector<TermId>& row) {
            std::vector<std::size_t> bound;
            bool ok = true;
            for (std::size_t k = 0; k < free_slots.size() && ok; ++k) {
                TermId& cell = env[free_slots[k]];
                if (cell == kUnboundTerm) {
                    cell = row[k];
                    bound.push_back(free_slots[k]);
                } else {
                    ok = cell == row[k];
                }
            }
            if (ok) run(atoms, i + 1, env, sink);
            for (std::size_t s : bound) env[s] = kUnboundTerm;
        };

        const bool ext_head = hn.kind == TermNode::Kind::Ext || (hn.kind == TermNode::Kind::Closure && hn.head_is_ext);
        if (ext_head) {
            const std::vector<std::vector<TermId>> tuples =
                hn.kind == TermNode::Kind::Ext ? hn.tuples : terms[hn.head].tuples;
            std::vector<TermId> row;
            for (const auto& t : tuples) {
                row.clear();
                bool ok = true;
                for (std::size_t j = 0; j < t.size() && ok; ++j) {
                    if (full[j] == kFree) {
                        row.push_back(t[j]);
                    } else {
                        ok = full[j] == t[j];
                    }
                }
                if (ok) with_row(row);
            }
            return;
        }

        const std::size_t tid = table_for(hn.head, full);
        solve(tid);
        // Answers may be appended while iterating (recursive calls).
        for (std::size_t k = 0; k < tables[tid]->answers.size(); ++k) {
            const std::vector<TermId> row = tables[tid]->answers[k];
            step();
            with_row(row);
        }
    }

    // --- goals --------------------------------------------------------------

    struct CompiledGoal {
        std::vector<DAtom> atoms;
        std::vector<TermId> env;
        std::vector<std::string> free_names;
        std::vector<std::size_t> free_slots;
    };

    CompiledGoal compile_goal(const Goal& goal) {
        std::vector<std::string> vars;
        collect_vars(goal.atom, vars);
        std::map<std::string, std::size_t> slots;
        CompiledGoal g;
        for (const std::string& v : vars) {
            slots.emplace(v, slots.size());
            auto it = goal.bindings.find(v);
            if (it != goal.bindings.end()) {
                g.env.push_back(from_value(it->second));
            } else {
                g.env.push_back(kUnboundTerm);
                g.free_names.push_back(v);
                g.free_slots.push_back(slots.at(v));
            }
        }
        g.atoms.push_back(compile_atom(goal.atom, slots));
        return g;
    }

    std::vector<std::vector<std::string>> answers(const Goal& goal) {
        CompiledGoal g = compile_goal(goal);
        std::set<std::vector<std::string>> out;
        current_low = nullptr;
        auto record = [&](std::vector<TermId>& env) {
            std::vector<std::size_t> unbound;
            for (std::size_t s : g.free_slots) {
                if (env[s] == kUnboundTerm) unbound.push_back(s);
            }
            // Free variables untouched by the atom range over the universe.
            std::vector<std::size_t> counter(unbound.size(), 0);
            for (;;) {
                for (std::size_t k = 0; k < unbound.size(); ++k) env[unbound[k]] = static_cast<TermId>(counter[k]);
                std::vector<std::string> row;
                for (std::size_t s : g.free_slots) row.push_back(universe.names()[env[s]]);
                out.insert(std::move(row));
                std::size_t k = 0;
                while (k < counter.size() && ++counter[k] == universe.size()) counter[k++] = 0;
                if (k == counter.size()) break;
            }
            for (std::size_t s : unbound) env[s] = kUnboundTerm;
        };
        run(g.atoms, 0, g.env, record);
        return {out.begin(), out.end()};
    }
};

DemandEngine::DemandEngine(const Program& prog, EngineConfig cfg) : impl_(std::make_unique<Impl>(prog, cfg)) {}
DemandEngine::~DemandEngine() = default;

bool DemandEngine::holds(const Goal& goal) {
    if (!free_variables(goal).empty()) throw std::invalid_argument("holds needs a ground goal: " + goal.atom.str());
    return !impl_->answers(goal).empty();
}

std::vector<std::vector<std::string>> DemandEngine::answers(const Goal& goal) { return impl_->answers(goal); }

std::vector<std::string> DemandEngine::free_variables(const Goal& goal) {
    std::vector<std::string> vars;
    collect_vars(goal.atom, vars);
    std::erase_if(vars, [&](const std::string& v) { return goal.bindings.contains(v); });
    return vars;
}

const Universe& DemandEngine::universe() const { return impl_->universe; }
std::uint64_t DemandEngine::steps() const { return impl_->steps; }
std::size_t DemandEngine::table_count() const { return impl_->tables.size(); }

Goal make_goal(const Program& prog, const std::string& text, std::map<std::string, Value> bindings) {
    return Goal{resolve_names(parse_term(text), prog), std::move(bindings)};
}

bool solve_demand(const Program& prog, const Goal& goal, const EngineConfig& cfg) {
    return DemandEngine(prog, cfg).holds(goal);
}

// ===========================================================================

Decision decide(const Program& prog, const InputString& w, const EngineConfig& cfg) {
    Program merged = merge(prog, encode_input(w));
    auto sig = merged.signatures.find("accept");
    if (sig == merged.signatures.end()) return {false, 0};
    if (!sig->second.is_omicron()) throw std::invalid_argument("accept must have type o");
    switch (cfg.engine) {
        case EngineKind::Naive: {
            NaiveResult r = least_model_naive(merged, cfg.domain_cap);
            return {r.model.at("accept").truth(), r.iterations};
        }
        case EngineKind::Seminaive: {
            SeminaiveResult r = least_model_seminaive(merged);
            return {r.model.at("accept").truth(), r.iterations};
        }
        case EngineKind::Demand: {
            DemandEngine engine(merged, cfg);
            const bool accept = engine.holds(Goal{Expr::pred("accept"), {}});
            return {accept, engine.steps()};
        }
    }
    return {false, 0};
}

}  // namespace hodl
