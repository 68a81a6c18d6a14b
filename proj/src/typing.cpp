#include "hodl/typing.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <unordered_map>

#include "hodl/syntax.hpp"

namespace hodl {

namespace {

bool is_numeral(const std::string& s) { return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0])); }

// Union-find store of type terms with variables.
class TypeStore {
public:
    using Id = int;

    Id fresh() { return add({NodeKind::Var, -1, -1}); }
    Id iota() { return add({NodeKind::Iota, -1, -1}); }
    Id omicron() { return add({NodeKind::Omicron, -1, -1}); }
    Id arrow(Id a, Id r) { return add({NodeKind::Arrow, a, r}); }

    Id from_type(const Type& t) {
        switch (t.kind()) {
            case Type::Kind::Iota: return iota();
            case Type::Kind::Omicron: return omicron();
            case Type::Kind::Arrow: return arrow(from_type(t.argument()), from_type(t.result()));
        }
        return fresh();
    }

    Id find(Id x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unify(Id x, Id y) {
        x = find(x);
        y = find(y);
        if (x == y) return true;
        const Node& nx = nodes_[x];
        const Node& ny = nodes_[y];
        if (nx.kind == NodeKind::Var) return bind(x, y);
        if (ny.kind == NodeKind::Var) return bind(y, x);
        if (nx.kind != ny.kind) return false;
        if (nx.kind != NodeKind::Arrow) return true;
        Id xa = nx.a, xr = nx.r, ya = ny.a, yr = ny.r;
        return unify(xa, ya) && unify(xr, yr);
    }

    /// Resolved type; unbound variables default to i.
    Type resolve(Id x) {
        x = find(x);
        const Node n = nodes_[x];
        switch (n.kind) {
            case NodeKind::Var:
            case NodeKind::Iota: return Type::iota();
            case NodeKind::Omicron: return Type::omicron();
            case NodeKind::Arrow: return Type::arrow(resolve(n.a), resolve(n.r));
        }
        return Type::iota();
    }

    std::string show(Id x) {
        x = find(x);
        const Node n = nodes_[x];
        switch (n.kind) {
            case NodeKind::Var: return "?" + std::to_string(x);
            case NodeKind::Iota: return "i";
            case NodeKind::Omicron: return "o";
            case NodeKind::Arrow: {
                std::string a = show(n.a);
                if (nodes_[find(n.a)].kind == NodeKind::Arrow) a = "(" + a + ")";
                return a + " -> " + show(n.r);
            }
        }
        return "?";
    }

private:
    enum class NodeKind { Var, Iota, Omicron, Arrow };
    struct Node {
        NodeKind kind;
        Id a, r;
    };

    Id add(Node n) {
        nodes_.push_back(n);
        parent_.push_back(static_cast<Id>(parent_.size()));
        return static_cast<Id>(nodes_.size() - 1);
    }

    bool occurs(Id v, Id t) {
        t = find(t);
        if (t == v) return true;
        const Node& n = nodes_[t];
        if (n.kind != NodeKind::Arrow) return false;
        Id a = n.a, r = n.r;
        return occurs(v, a) || occurs(v, r);
    }

    bool bind(Id var, Id target) {
        if (occurs(var, target)) return false;
        parent_[var] = target;
        return true;
    }

    std::vector<Node> nodes_;
    std::vector<Id> parent_;
};

class Inferer {
public:
    explicit Inferer(const Program& prog) : prog_(prog) {}

    TypeReport run() {
        TypeReport report;
        for (const auto& [name, ty] : prog_.signatures) {
            if (!ty.is_predicate() || ty.is_iota()) {
                report.violations.push_back(
                    {"E101", {}, "declared type of '" + name + "' is not a predicate type: " + ty.str()});
            }
            names_.emplace(name, store_.from_type(ty));
        }

        std::vector<std::unordered_map<std::string, TypeStore::Id>> clause_vars;
        for (const Clause& c : prog_.clauses) {
            vars_.clear();
            clash_.reset();
            std::vector<TypeStore::Id> params;
            for (const Expr& p : c.params) params.push_back(infer(p));
            TypeStore::Id head_ty = store_.omicron();
            for (auto it = params.rbegin(); it != params.rend(); ++it) head_ty = store_.arrow(*it, head_ty);
            expect(name_type(c.head), head_ty, c.pos, "head of '" + c.head + "'");
            for (const Expr& b : c.body) expect(infer(b), store_.omicron(), b.pos(), "body atom " + b.str());
            if (clash_) report.violations.push_back(*clash_);
            clause_vars.push_back(vars_);
        }

        // Resolve and check the argument-type restriction.
        std::set<std::string> bad;
        for (const auto& [name, id] : names_) {
            Type t = store_.resolve(id);
            if (t.is_arrow() && !t.is_predicate() && bad.insert(name).second) {
                report.violations.push_back(
                    {"E101", first_use(name), "'" + name + "' has an argument of type o: " + t.str()});
            }
            if (!t.is_iota() || prog_.signatures.contains(name)) report.signatures.emplace(name, t);
        }

        report.program.signatures = report.signatures;
        for (std::size_t ci = 0; ci < prog_.clauses.size(); ++ci) {
            const Clause& c = prog_.clauses[ci];
            vars_ = clause_vars[ci];
            std::map<std::string, Type> vt;
            for (const auto& [name, id] : vars_) {
                Type t = store_.resolve(id);
                if (t.is_omicron() || (t.is_arrow() && !t.is_predicate())) {
                    report.violations.push_back(
                        {"E101", c.pos, "variable " + name + " in clause for '" + c.head + "' has invalid type " + t.str()});
                }
                vt.emplace(name, t);
            }
            report.var_types.push_back(vt);
            Clause out;
            out.head = c.head;
            out.pos = c.pos;
            for (const Expr& p : c.params) out.params.push_back(annotate(p, report.signatures));
            for (const Expr& b : c.body) out.body.push_back(annotate(b, report.signatures));
            report.program.clauses.push_back(std::move(out));
        }
        report.program.constants = collect_constants(report.program);
        return report;
    }

private:
    TypeStore::Id name_type(const std::string& name) {
        auto [it, inserted] = names_.try_emplace(name, 0);
        if (inserted) it->second = store_.fresh();
        return it->second;
    }

    TypeStore::Id var_type(const std::string& name) {
        auto [it, inserted] = vars_.try_emplace(name, 0);
        if (inserted) it->second = store_.fresh();
        return it->second;
    }

    void expect(TypeStore::Id got, TypeStore::Id want, SourcePos pos, const std::string& what) {
        if (!store_.unify(got, want) && !clash_) {
            clash_ = Diagnostic{"E101", pos,
                                "type clash in " + what + ": " + store_.show(got) + " vs " + store_.show(want)};
        }
    }

    TypeStore::Id infer(const Expr& e) {
        switch (e.kind()) {
            case Expr::Kind::Var: return var_type(e.name());
            case Expr::Kind::Const:
            case Expr::Kind::Pred:
                if (is_numeral(e.name())) return store_.iota();
                if (!first_pos_.contains(e.name())) first_pos_.emplace(e.name(), e.pos());
                return name_type(e.name());
            case Expr::Kind::App: {
                TypeStore::Id f = infer(e.fun());
                TypeStore::Id a = infer(e.arg());
                TypeStore::Id r = store_.fresh();
                expect(f, store_.arrow(a, r), e.pos(), "application " + e.str());
                return r;
            }
            case Expr::Kind::Eq: {
                expect(infer(e.lhs()), store_.iota(), e.pos(), "equality " + e.str());
                expect(infer(e.rhs()), store_.iota(), e.pos(), "equality " + e.str());
                return store_.omicron();
            }
        }
        return store_.fresh();
    }

    Expr annotate(const Expr& e, const std::map<std::string, Type>& sigs) {
        switch (e.kind()) {
            case Expr::Kind::Var: return e.with_type(store_.resolve(vars_.at(e.name())));
            case Expr::Kind::Const:
            case Expr::Kind::Pred: {
                if (is_numeral(e.name())) return Expr::constant(e.name(), e.pos()).with_type(Type::iota());
                auto it = sigs.find(e.name());
                if (it != sigs.end()) return Expr::pred(e.name(), e.pos()).with_type(it->second);
                return Expr::constant(e.name(), e.pos()).with_type(Type::iota());
            }
            case Expr::Kind::App: {
                Expr f = annotate(e.fun(), sigs);
                Expr a = annotate(e.arg(), sigs);
                Type ft = *f.type();
                Type rt = ft.is_arrow() ? ft.result() : Type::omicron();
                return Expr::app(std::move(f), std::move(a)).with_type(rt);
            }
            case Expr::Kind::Eq:
                return Expr::eq(annotate(e.lhs(), sigs), annotate(e.rhs(), sigs)).with_type(Type::omicron());
        }
        return e;
    }

    SourcePos first_use(const std::string& name) const {
        auto it = first_pos_.find(name);
        return it == first_pos_.end() ? SourcePos{} : it->second;
    }

    const Program& prog_;
    TypeStore store_;
    std::map<std::string, TypeStore::Id> names_;
    std::unordered_map<std::string, TypeStore::Id> vars_;
    std::unordered_map<std::string, SourcePos> first_pos_;
    std::optional<Diagnostic> clash_;
};

void collect_vars(const Expr& e, std::vector<Expr>& out) {
    if (e.is_var()) out.push_back(e);
    if (e.is_app() || e.is_eq()) {
        collect_vars(e.fun(), out);
        collect_vars(e.arg(), out);
    }
}

}  // namespace

TypeReport infer_types(const Program& prog) {
    TypeReport report = Inferer(prog).run();
    if (report.violations.empty()) {
        auto more = validate_definitional(report.program, report);
        report.violations.insert(report.violations.end(), more.begin(), more.end());
    }
    report.program_order = classify_order(report);
    return report;
}

std::vector<Diagnostic> validate_definitional(const Program& prog, const TypeReport& report) {
    std::vector<Diagnostic> out;
    for (std::size_t ci = 0; ci < prog.clauses.size(); ++ci) {
        const Clause& c = prog.clauses[ci];
        std::set<std::string> formals;
        for (const Expr& p : c.params) {
            if (!p.is_var()) {
                out.push_back({"E202", p.pos(),
                               "head argument '" + p.str() + "' of '" + c.head + "' is not a variable"});
                continue;
            }
            if (!formals.insert(p.name()).second) {
                out.push_back({"E201", p.pos(), "formal " + p.name() + " of '" + c.head + "' is used twice"});
            }
        }
        std::set<std::string> reported;
        for (const Expr& b : c.body) {
            std::vector<Expr> vars;
            collect_vars(b, vars);
            for (const Expr& v : vars) {
                if (formals.contains(v.name())) continue;
                bool individual = true;
                if (ci < report.var_types.size()) {
                    auto it = report.var_types[ci].find(v.name());
                    if (it != report.var_types[ci].end()) individual = it->second.is_iota();
                } else if (v.type()) {
                    individual = v.type()->is_iota();
                }
                if (!individual && reported.insert(v.name()).second) {
                    out.push_back({"E203", v.pos(),
                                   "predicate variable " + v.name() + " in body of '" + c.head + "' is not a formal"});
                }
            }
        }
    }
    return out;
}

int classify_order(const TypeReport& report) {
    int k = 1;
    for (const auto& [name, ty] : report.signatures) k = std::max(k, type_order(ty));
    for (const auto& vars : report.var_types) {
        for (const auto& [name, ty] : vars) {
            if (ty.is_arrow()) k = std::max(k, type_order(ty) + 1);
        }
    }
    return k;
}

TypeReport check_program(const Program& prog) {
    TypeReport report = infer_types(prog);
    if (!report.violations.empty()) throw Error(report.violations.front());
    return report;
}

TypeReport load_program(std::string_view text) { return check_program(desugar(parse_program(text))); }

}  // namespace hodl
