#pragma once

// Core AST for Higher-Order Datalog: types, expressions, clauses, programs,
// plus diagnostics and the bound formulas shared by the engines and tests.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hodl {

using BigInt = boost::multiprecision::cpp_int;

struct SourcePos {
    int line = 0;
    int column = 0;
};

/// A stable diagnostic: `file:line:col: CODE message`.
struct Diagnostic {
    std::string code;
    SourcePos pos;
    std::string message;

    std::string render(const std::string& file) const;
};

/// Thrown for malformed input (syntax, typing, validation, generation).
class Error : public std::runtime_error {
public:
    explicit Error(Diagnostic diag);
    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

/// A computation would exceed a configured size limit (E301, bigint caps).
class ResourceError : public Error {
public:
    using Error::Error;
};

/// The demand engine ran out of its step budget; the answer is unknown.
class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(std::uint64_t steps);
    std::uint64_t steps() const { return steps_; }

private:
    std::uint64_t steps_;
};

// ---------------------------------------------------------------------------
// Types

/// Simple types over iota (individuals) and omicron (booleans).
///
/// Predicate types are `rho1 -> ... -> rhon -> o`; argument types are iota or
/// predicate types. Arrow arguments are never omicron.
class Type {
public:
    enum class Kind : std::uint8_t { Iota, Omicron, Arrow };

    static Type iota();
    static Type omicron();
    static Type arrow(Type argument, Type result);
    /// Curries `args -> o`.
    static Type predicate(std::span<const Type> args);

    Kind kind() const { return node_->kind; }
    bool is_iota() const { return kind() == Kind::Iota; }
    bool is_omicron() const { return kind() == Kind::Omicron; }
    bool is_arrow() const { return kind() == Kind::Arrow; }

    const Type& argument() const;
    const Type& result() const;

    /// Argument types after peeling every arrow.
    std::vector<Type> arguments() const;
    std::size_t arity() const;
    /// True for o and for arrows whose final result is o with no o arguments.
    bool is_predicate() const;
    /// Type left after applying `n` arguments.
    Type drop(std::size_t n) const;

    std::string str() const;

    friend bool operator==(const Type& a, const Type& b);
    friend bool operator<(const Type& a, const Type& b);

private:
    struct Node {
        Kind kind;
        std::shared_ptr<const Type> argument;
        std::shared_ptr<const Type> result;
    };
    explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// order(iota) = order(o) = 0; order(rho1 -> ... -> o) = 1 + max order(rhoi).
int type_order(const Type& ty);

// ---------------------------------------------------------------------------
// Expressions

class Expr {
public:
    enum class Kind : std::uint8_t { Var, Const, Pred, App, Eq };

    static Expr var(std::string name, SourcePos pos = {});
    static Expr constant(std::string name, SourcePos pos = {});
    static Expr pred(std::string name, SourcePos pos = {});
    static Expr app(Expr fun, Expr arg);
    static Expr eq(Expr lhs, Expr rhs);
    /// Left-associated application of `head` to `args`.
    static Expr apply(Expr head, std::span<const Expr> args);

    Kind kind() const { return node_->kind; }
    bool is_var() const { return kind() == Kind::Var; }
    bool is_const() const { return kind() == Kind::Const; }
    bool is_pred() const { return kind() == Kind::Pred; }
    bool is_app() const { return kind() == Kind::App; }
    bool is_eq() const { return kind() == Kind::Eq; }

    /// Name of a Var, Const or Pred.
    const std::string& name() const { return node_->name; }
    const Expr& fun() const;
    const Expr& arg() const;
    const Expr& lhs() const { return fun(); }
    const Expr& rhs() const { return arg(); }

    SourcePos pos() const { return node_->pos; }
    /// Resolved type, set by the typing pass.
    const std::optional<Type>& type() const { return node_->type; }
    Expr with_type(Type ty) const;

    /// Leftmost non-application of an application spine.
    const Expr& head() const;
    /// Arguments of the application spine, left to right.
    std::vector<Expr> spine_args() const;

    std::string str() const;

    /// Structural equality; ignores positions and type annotations.
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node {
        Kind kind;
        std::string name;
        std::shared_ptr<const Expr> left;
        std::shared_ptr<const Expr> right;
        SourcePos pos;
        std::optional<Type> type;
    };
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Definitional clause `head p1 ... pn <- body1, ..., bodym`.
///
/// After desugaring every parameter is normally a distinct variable; other
/// forms are kept so validation can report them.
struct Clause {
    std::string head;
    std::vector<Expr> params;
    std::vector<Expr> body;
    SourcePos pos;

    friend bool operator==(const Clause& a, const Clause& b);
};

struct Program {
    std::map<std::string, Type> signatures;
    std::vector<Clause> clauses;
    /// Individual constants in first-occurrence order (the Herbrand universe).
    std::vector<std::string> constants;

    friend bool operator==(const Program& a, const Program& b);
};

/// Designated constant used when a program mentions none.
inline constexpr const char* kDesignatedConstant = "u0";

/// Individual constants of `prog`, first-occurrence order, head before body.
std::vector<std::string> collect_constants(const Program& prog);

// ---------------------------------------------------------------------------
// Statistics and bounds

/// Characteristics of a program used in the complexity bounds.
struct ProgramStats {
    std::size_t l = 0;  // max atoms per rule, head included
    std::size_t c = 0;  // constants, input numerals excluded
    std::size_t r = 0;  // rules
    std::size_t p = 0;  // predicate constants
    std::size_t s = 0;  // distinct predicate types involved
    std::size_t t = 0;  // max arity of an involved predicate type

    friend bool operator==(const ProgramStats&, const ProgramStats&) = default;
};

/// `prog` must be typed. Numerals 0..input_length-1 are not counted in c.
ProgramStats compute_stats(const Program& prog, std::size_t input_length = 0);

inline constexpr std::size_t kDefaultBitCap = std::size_t{1} << 20;

/// exp_0(x) = x, exp_{k+1}(x) = 2^exp_k(x). Throws ResourceError past the cap.
BigInt expk(unsigned k, const BigInt& x, std::size_t bit_cap = kDefaultBitCap);

/// Upper bound on the number of productive T_P iterations of a k-order
/// program on an input of length n.
BigInt iteration_bound(const ProgramStats& stats, std::size_t n, unsigned k,
                       std::size_t bit_cap = kDefaultBitCap);

}  // namespace hodl
