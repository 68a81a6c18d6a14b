#pragma once

// Shared helpers for the tests and the acceptance binary: file access,
// brute-force oracles, the engine agreement sweep and the T_P property suite.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hodl/codegen.hpp"
#include "hodl/core.hpp"
#include "hodl/engines.hpp"
#include "hodl/semantics.hpp"
#include "hodl/tm.hpp"
#include "hodl/typing.hpp"

namespace hodl::testing {

inline std::string source_path(const std::string& rel) { return std::string(HODL_SOURCE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline TuringMachine load_machine(const std::string& name) {
    return parse_tm(read_file(source_path("machines/" + name + ".tm")), name);
}

inline std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(source_path("tests/corpus"))) {
        if (entry.path().extension() == ".hodl") out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Number of upward-closed subsets of a finite order given as a matrix.
inline std::size_t count_up_closed(const std::vector<std::vector<bool>>& leq) {
    const std::size_t n = leq.size();
    std::size_t count = 0;
    for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (!(m >> i & 1)) continue;
            for (std::size_t j = 0; j < n && ok; ++j) {
                if (leq[i][j] && !(m >> j & 1)) ok = false;
            }
        }
        count += ok;
    }
    return count;
}

/// Inclusion order on the 2^k subsets of a k-set.
inline std::vector<std::vector<bool>> powerset_order(std::size_t k) {
    const std::size_t n = std::size_t{1} << k;
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) leq[a][b] = (a & ~b) == 0;
    }
    return leq;
}

/// Largest arity of a predicate type occurring in `ty`.
inline std::size_t max_arity(const Type& ty) {
    if (!ty.is_arrow()) return 0;
    std::size_t best = ty.arity();
    for (const Type& a : ty.arguments()) best = std::max(best, max_arity(a));
    return best;
}

/// Size bound expk(j, t^(j-1) * u^t) for a type of order j >= 1, t its
/// largest arity and u = |U|.
inline BigInt domain_bound(const Type& ty, std::size_t universe_size) {
    const auto j = static_cast<unsigned>(type_order(ty));
    const auto t = static_cast<unsigned>(max_arity(ty));
    const BigInt x = boost::multiprecision::pow(BigInt(t), j - 1) * boost::multiprecision::pow(BigInt(universe_size), t);
    return expk(j, x);
}

/// Level-1 number m over positions 0..n-1 with d = 1: bit x of m is the
/// pair (x, low|high); position 0 is the least significant bit.
inline Value level1_number(std::size_t m, std::size_t n, const Universe& u) {
    std::vector<Value::Tuple> tuples;
    for (std::size_t x = 0; x < n; ++x) {
        tuples.push_back({u[std::to_string(x)], u[(m >> x & 1) ? "high" : "low"]});
    }
    return Value::rel(number_type(1, 1), tuples);
}

/// Integer read off answer rows (position, bit) restricted to positions
/// 0..n-1; nullopt unless every position has exactly one bit.
inline std::optional<std::size_t> decode_number(const std::vector<std::vector<std::string>>& answers, std::size_t n) {
    std::vector<int> bits(n, -1);
    for (const auto& row : answers) {
        if (row[0].find_first_not_of("0123456789") != std::string::npos) continue;
        const std::size_t x = std::stoul(row[0]);
        if (x >= n) continue;
        const int b = row[1] == "high" ? 1 : row[1] == "low" ? 0 : -2;
        if (bits[x] != -1 || b < 0) return std::nullopt;
        bits[x] = b;
    }
    std::size_t value = 0;
    for (std::size_t x = 0; x < n; ++x) {
        if (bits[x] < 0) return std::nullopt;
        value |= static_cast<std::size_t>(bits[x]) << x;
    }
    return value;
}

/// Number of answer rows whose position is one of 0..n-1.
inline std::size_t position_rows(const std::vector<std::vector<std::string>>& answers, std::size_t n) {
    return static_cast<std::size_t>(std::count_if(answers.begin(), answers.end(), [&](const auto& row) {
        return row[0].find_first_not_of("0123456789") == std::string::npos && std::stoul(row[0]) < n;
    }));
}

struct Agreement {
    std::size_t goals = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
};

/// Compares the naive model with demand answers on every ground goal whose
/// arguments have order at most 1, and with the semi-naive model for
/// first-order programs.
inline Agreement engine_agreement(const Program& prog, bool extensionalize = false) {
    Agreement out;
    const NaiveResult naive = least_model_naive(prog);
    EngineConfig cfg;
    cfg.extensionalize = extensionalize;
    DemandEngine demand(prog, cfg);
    DomainCache domains(Universe(herbrand_universe(prog)));
    auto mismatch = [&](const std::string& what) {
        if (out.mismatches++ == 0) out.first_mismatch = what;
    };
    if (classify_order(check_program(prog)) <= 1) {
        const SeminaiveResult semi = least_model_seminaive(prog);
        ++out.goals;
        if (semi.model != naive.model) mismatch("seminaive model differs");
    }
    for (const auto& [name, ty] : prog.signatures) {
        const std::vector<Type> args = ty.arguments();
        if (std::any_of(args.begin(), args.end(), [](const Type& a) { return type_order(a) > 1; })) continue;
        std::vector<const Domain*> doms;
        for (const Type& a : args) doms.push_back(&domains.get(a));
        std::vector<std::size_t> idx(args.size(), 0);
        if (std::any_of(doms.begin(), doms.end(), [](const Domain* d) { return d->size() == 0; })) continue;
        for (;;) {
            Value::Tuple tuple;
            std::vector<Expr> vars;
            std::map<std::string, Value> bindings;
            for (std::size_t i = 0; i < args.size(); ++i) {
                tuple.push_back(doms[i]->elements[idx[i]]);
                const std::string v = "A" + std::to_string(i);
                vars.push_back(Expr::var(v));
                bindings.emplace(v, tuple.back());
            }
            const Value& m = naive.model.at(name);
            const bool expected = ty.is_omicron() ? m.truth() : m.contains(tuple);
            const bool got = demand.holds(Goal{Expr::apply(Expr::pred(name), vars), bindings});
            ++out.goals;
            if (expected != got) {
                std::string what = name;
                for (const Value& v : tuple) what += " " + v.str();
                mismatch(what + ": naive " + (expected ? "true" : "false") + ", demand " + (got ? "true" : "false"));
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == doms[k]->size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    return out;
}

struct Properties {
    std::size_t pairs = 0;
    std::size_t monotonicity_violations = 0;
    bool fixpoint = true;
    std::size_t iterations = 0;
    BigInt bound = 0;
    bool within_bound = true;
};

/// T_P checks on one program: `pairs` random I <= J with T_P(I) <= T_P(J),
/// T_P(M_P) = M_P, and naive (and semi-naive) iterations within
/// iteration_bound.
inline Properties tp_properties(const Program& prog, std::size_t pairs, std::mt19937& rng) {
    Properties out;
    DomainCache domains(Universe(herbrand_universe(prog)));
    TpOperator tp(prog, domains);
    auto coin = [&] { return std::bernoulli_distribution(0.3)(rng); };
    for (std::size_t round = 0; round < pairs; ++round) {
        Interpretation I, J;
        for (const auto& [name, ty] : prog.signatures) {
            if (ty.is_omicron()) {
                const bool i = coin();
                I.emplace(name, Value::boolean(i));
                J.emplace(name, Value::boolean(i || coin()));
                continue;
            }
            // Upward closures of random generator sets; J's generators contain I's.
            std::vector<const Domain*> doms;
            for (const Type& a : ty.arguments()) doms.push_back(&domains.get(a));
            std::vector<std::vector<std::size_t>> product(1);
            for (const Domain* d : doms) {
                std::vector<std::vector<std::size_t>> next;
                for (const auto& prefix : product) {
                    for (std::size_t k = 0; k < d->size(); ++k) {
                        next.push_back(prefix);
                        next.back().push_back(k);
                    }
                }
                product = std::move(next);
            }
            std::vector<bool> gen_i(product.size()), gen_j(product.size());
            for (std::size_t g = 0; g < product.size(); ++g) {
                gen_i[g] = coin();
                gen_j[g] = gen_i[g] || coin();
            }
            auto closure = [&](const std::vector<bool>& gens) {
                std::vector<Value::Tuple> tuples;
                for (const auto& t : product) {
                    bool in = false;
                    for (std::size_t g = 0; g < product.size() && !in; ++g) {
                        if (!gens[g]) continue;
                        bool below = true;
                        for (std::size_t a = 0; a < t.size() && below; ++a) below = doms[a]->leq(product[g][a], t[a]);
                        in = below;
                    }
                    if (!in) continue;
                    Value::Tuple tuple;
                    for (std::size_t a = 0; a < t.size(); ++a) tuple.push_back(doms[a]->elements[t[a]]);
                    tuples.push_back(std::move(tuple));
                }
                return Value::rel(ty, std::move(tuples));
            };
            I.emplace(name, closure(gen_i));
            J.emplace(name, closure(gen_j));
        }
        ++out.pairs;
        if (!interp_leq(I, J)) throw std::logic_error("random pair not ordered");
        if (!interp_leq(tp(I), tp(J))) ++out.monotonicity_violations;
    }
    const NaiveResult naive = least_model_naive(prog);
    out.fixpoint = tp(naive.model) == naive.model;
    const int order = classify_order(check_program(prog));
    out.iterations = naive.iterations;
    out.bound = iteration_bound(compute_stats(prog), 0, static_cast<unsigned>(order));
    out.within_bound = BigInt(naive.iterations) <= out.bound;
    if (order <= 1) out.within_bound = out.within_bound && BigInt(least_model_seminaive(prog).iterations) <= out.bound;
    return out;
}

}  // namespace hodl::testing
