#pragma once

// Extensional semantics: monotone relations stored as upward-closed sets of
// full-arity argument tuples, enumerated domains, T_P and the naive engine.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hodl/core.hpp"

namespace hodl {

class Value {
public:
    enum class Kind : std::uint8_t { Ind, Bool, Rel };
    using Tuple = std::vector<Value>;

    static Value ind(int index, std::string name);
    static Value boolean(bool truth);
    /// Sorts and deduplicates `tuples`. Every tuple must have the arity of `type`.
    static Value rel(Type type, std::vector<Tuple> tuples);

    Kind kind() const { return node_->kind; }
    bool is_ind() const { return kind() == Kind::Ind; }
    bool is_bool() const { return kind() == Kind::Bool; }
    bool is_rel() const { return kind() == Kind::Rel; }

    /// Universe index of an individual.
    int index() const { return node_->index; }
    const std::string& name() const { return node_->name; }
    bool truth() const { return node_->truth; }
    /// Type of a relation (an arrow type).
    const Type& type() const { return *node_->type; }
    /// The true set, in canonical order.
    const std::vector<Tuple>& tuples() const { return node_->tuples; }
    std::size_t arity() const;

    bool contains(std::span<const Value> tuple) const;
    /// Residuation on the leading arguments. Applying all arguments gives a Bool.
    Value apply(std::span<const Value> args) const;
    Value apply(const Value& arg) const { return apply(std::span<const Value>(&arg, 1)); }

    std::size_t hash() const { return node_->hash; }

    /// `a`, `true`, `{b}`, `{(a,b)}`.
    std::string str() const;

    /// Total canonical order: Ind < Bool < Rel; individuals by universe
    /// index, false < true, relations by size then lexicographic tuple list.
    friend int compare(const Value& a, const Value& b);
    friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
    friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

private:
    struct Node {
        Kind kind;
        int index = 0;
        bool truth = false;
        std::string name;
        std::optional<Type> type;
        std::vector<Tuple> tuples;
        std::size_t hash = 0;
    };
    explicit Value(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Value rel_sorted(Type type, std::vector<Tuple> tuples);

    std::shared_ptr<const Node> node_;
};

int compare_tuples(std::span<const Value> a, std::span<const Value> b);

struct ValueHash {
    std::size_t operator()(const Value& v) const { return v.hash(); }
};

/// The semantic order: equality on individuals, false <= true, inclusion of
/// true sets on relations. Throws std::invalid_argument on a kind mismatch.
bool value_leq(const Value& x, const Value& y);

/// Least element of a predicate type: false or the empty relation.
Value bottom_value(const Type& ty);

// ---------------------------------------------------------------------------
// Universe and domains

class Universe {
public:
    explicit Universe(std::vector<std::string> names);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const Value& at(std::size_t i) const { return values_[i]; }
    /// Throws std::out_of_range for names outside the universe.
    const Value& operator[](const std::string& name) const;
    bool contains(const std::string& name) const { return index_.contains(name); }

private:
    std::vector<std::string> names_;
    std::vector<Value> values_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Individual constants of `prog` in first-occurrence order; `u0` if none.
std::vector<std::string> herbrand_universe(const Program& prog);

inline constexpr std::size_t kDefaultDomainCap = std::size_t{1} << 16;

/// How a kernel with a parallel variant should run.
enum class Exec { Serial, Parallel };

struct Domain {
    Type type;
    std::vector<Value> elements;
    /// Row-major `leq[i * size + j]`; filled for domains of at most
    /// kLeqTableLimit elements, otherwise empty and `leq` falls back to
    /// value_leq.
    std::vector<std::uint8_t> leq_table;

    static constexpr std::size_t kLeqTableLimit = 4096;

    std::size_t size() const { return elements.size(); }
    bool leq(std::size_t i, std::size_t j) const;
    /// Position of `v` in `elements`, or -1.
    std::ptrdiff_t index_of(const Value& v) const;
};

/// Lazily enumerated domains for one universe. Not thread-safe.
class DomainCache {
public:
    DomainCache(Universe universe, std::size_t cap = kDefaultDomainCap, Exec exec = Exec::Parallel);

    const Universe& universe() const { return universe_; }
    std::size_t cap() const { return cap_; }
    /// Throws ResourceError (E301) when the predicted size exceeds the cap.
    const Domain& get(const Type& ty);

private:
    Universe universe_;
    std::size_t cap_;
    Exec exec_;
    std::map<Type, std::unique_ptr<Domain>> cache_;
};

/// i: the universe; o: {false, true}; predicate types: every upward-closed
/// subset of the product of the argument domains.
Domain enumerate_domain(const Type& ty, const Universe& universe, std::size_t cap = kDefaultDomainCap,
                        Exec exec = Exec::Parallel);

/// True when `rel` is closed upwards within the product of its argument
/// domains.
bool is_upward_closed(const Value& rel, DomainCache& domains);

// ---------------------------------------------------------------------------
// Interpretations and T_P

using Interpretation = std::map<std::string, Value>;
using HState = std::map<std::string, Value>;

/// Every signature mapped to its bottom value.
Interpretation bottom_interpretation(const Program& prog);

/// Pointwise value_leq over the predicates of `a`.
bool interp_leq(const Interpretation& a, const Interpretation& b);

/// Meaning of a typed expression. Throws std::logic_error on an unbound
/// variable.
Value eval_expr(const Expr& e, const Interpretation& interp, const HState& state, const Universe& universe);

/// One application of the immediate consequence operator. `prog` must be a
/// typed, valid program.
Interpretation tp_step(const Program& prog, const Interpretation& interp, DomainCache& domains,
                       Exec exec = Exec::Parallel);

/// Reusable T_P with the clauses compiled once.
class TpOperator {
public:
    TpOperator(const Program& prog, DomainCache& domains);
    ~TpOperator();
    TpOperator(const TpOperator&) = delete;
    TpOperator& operator=(const TpOperator&) = delete;

    Interpretation operator()(const Interpretation& interp, Exec exec = Exec::Parallel) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct NaiveResult {
    Interpretation model;
    /// T_P applications that changed the interpretation.
    std::size_t iterations = 0;
};

inline constexpr std::size_t kNaiveIterationCap = 1'000'000;

/// T_P iterated from bottom to its least fixpoint, over the universe of `prog`.
NaiveResult least_model_naive(const Program& prog, std::size_t cap = kDefaultDomainCap, Exec exec = Exec::Parallel);

/// `name = { t1 ; t2 }`, `name = true`; one line per predicate in name order.
std::string dump_model(const Interpretation& model);

}  // namespace hodl
