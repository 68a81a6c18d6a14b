#pragma once

// Generators for the arithmetic libraries and machine simulations. Every
// generator emits .hodl text with #pred directives; the Program forms are
// that text parsed, desugared and type-checked.

#include <cstdint>
#include <string>
#include <vector>

#include "hodl/core.hpp"
#include "hodl/tm.hpp"

namespace hodl {

inline constexpr const char* kGeneratorVersion = "hodl-codegen 1";

/// Type of a level-j number: level 1 is i^d -> i -> o, level j+1 is
/// N_j -> i -> o.
Type number_type(unsigned level, unsigned d);

/// base_*/tuple_*/less_than over d-tuples.
std::string base_arith_text(unsigned d);
std::vector<Clause> gen_base_arith(unsigned d);

/// Number libraries for levels 1 .. k-1 on top of the base arithmetic.
/// Requires k >= 2.
std::string bignum_text(unsigned k, unsigned d);
std::vector<Clause> gen_bignum(unsigned k, unsigned d);
/// bignum_text as a typed program.
Program bignum_library(unsigned k, unsigned d);

/// accept rules for the members of {"", "a", "b"}, found with tm_run.
/// Throws Error (E401) if the machine neither accepts nor rejects one of
/// them within the step horizon.
std::vector<Clause> short_string_rules(const TuringMachine& m);
std::string short_string_text(const TuringMachine& m);

std::string compile_tm_first_order_text(const TuringMachine& m, unsigned d);
Program compile_tm_first_order(const TuringMachine& m, unsigned d);

/// k >= 2. Time points and tape positions are level k-1 numbers.
std::string compile_tm_higher_order_text(const TuringMachine& m, unsigned k, unsigned d);
Program compile_tm_higher_order(const TuringMachine& m, unsigned k, unsigned d);

/// First order when k == 1, higher order otherwise.
std::string compile_tm_text(const TuringMachine& m, unsigned k, unsigned d);
Program compile_tm(const TuringMachine& m, unsigned k, unsigned d);

/// Steps a simulation of order k with width d can follow on an input of
/// length n: n^d - 1 for k = 1, expk(k-1, n^d) - 1 otherwise. 0 when n^d is
/// 0; saturates at the largest std::uint64_t.
std::uint64_t simulated_steps(unsigned k, unsigned d, std::size_t n);

/// Step limit under which tm_run gives the verdict the compiled program
/// should reproduce: the step horizon for |w| <= 1 (short-string rules),
/// otherwise simulated_steps capped at the horizon.
std::uint64_t oracle_steps(unsigned k, unsigned d, std::size_t n);

}  // namespace hodl
