#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hodl/core.hpp"

namespace hodl {

struct TypeReport {
    /// The input program with every expression annotated and lowercase names
    /// split into individual constants (type i) and predicate constants.
    Program program;
    std::map<std::string, Type> signatures;
    /// Per clause: variable name -> resolved type.
    std::vector<std::map<std::string, Type>> var_types;
    int program_order = 1;
    std::vector<Diagnostic> violations;

    bool ok() const { return violations.empty(); }
};

/// Monomorphic inference by unification. Unconstrained positions default to
/// i. Clashes are reported as E101; definitional violations (E201-E203) are
/// appended from `validate_definitional`.
TypeReport infer_types(const Program& prog);

/// E201 duplicate formal, E202 non-variable head argument, E203 body
/// variable that is neither a formal nor of type i.
std::vector<Diagnostic> validate_definitional(const Program& prog, const TypeReport& report);

/// Smallest k >= 1 with every predicate constant of order <= k and every
/// predicate variable of order <= k - 1.
int classify_order(const TypeReport& report);

/// Infers and throws the first violation, if any.
TypeReport check_program(const Program& prog);

/// parse + desugar + check_program.
TypeReport load_program(std::string_view text);

}  // namespace hodl
