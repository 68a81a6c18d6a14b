#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hodl/core.hpp"

namespace hodl {

struct Directive {
    std::string name;
    Type type;
    SourcePos pos;
};

/// A clause as written: head arguments may be constants or repeated
/// variables, and lowercase names are not yet split into individual and
/// predicate constants (the parser emits them all as Const).
struct SurfaceClause {
    std::string head;
    SourcePos head_pos;
    std::vector<Expr> head_args;
    std::vector<Expr> body;
};

struct SourceProgram {
    std::vector<Directive> directives;
    std::vector<SurfaceClause> clauses;
};

/// Parses `.hodl` text. Throws Error (E001) with line/column on bad input.
SourceProgram parse_program(std::string_view text);

/// Parses a single type such as `(i -> o) -> i -> o`.
Type parse_type(std::string_view text);

/// Parses one application term (e.g. a goal `less_than_1 zero_1 last_1`).
/// Names are left as Const; see `resolve_names`.
Expr parse_term(std::string_view text);

/// Rewrites to definitional form: head constants and repeated head
/// individual variables become fresh `_H<n>` variables equated in the body.
Program desugar(const SourceProgram& src);

/// Re-tags lowercase names in `e` as predicate constants when `prog`
/// declares them.
Expr resolve_names(const Expr& e, const Program& prog);

/// Canonical text: directives for every signature, then one clause per line.
std::string print_program(const Program& prog);

std::string print_clause(const Clause& clause);

}  // namespace hodl
