#include "hodl/encode.hpp"

#include <map>

namespace hodl {

InputString::InputString(std::string_view text) : text_(text) {
    for (std::size_t i = 0; i < text_.size(); ++i) {
        if (text_[i] != 'a' && text_[i] != 'b') {
            throw Error(Diagnostic{"E001", {1, static_cast<int>(i) + 1},
                                   std::string("input character '") + text_[i] + "' is not in {a, b}"});
        }
    }
}

std::vector<InputString> all_strings(std::size_t max_len) {
    std::vector<InputString> out;
    for (std::size_t len = 0; len <= max_len; ++len) {
        for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
            std::string s(len, 'a');
            for (std::size_t i = 0; i < len; ++i) {
                if (bits & (std::size_t{1} << (len - 1 - i))) s[i] = 'b';
            }
            out.emplace_back(s);
        }
    }
    return out;
}

namespace {

// Desugared fact `input I S J :- (I = i), (S = s), (J = j)`.
Clause input_fact(const std::string& from, const std::string& symbol, const std::string& to) {
    Clause c;
    c.head = "input";
    const std::string values[] = {from, symbol, to};
    for (int k = 0; k < 3; ++k) {
        Expr v = Expr::var("_H" + std::to_string(k));
        c.params.push_back(v);
        c.body.push_back(Expr::eq(v, Expr::constant(values[k])));
    }
    return c;
}

}  // namespace

std::vector<Clause> encode_input(const InputString& w) {
    std::vector<Clause> facts;
    if (w.empty()) {
        facts.push_back(input_fact("0", "empty", "end"));
        return facts;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::string next = i + 1 == w.size() ? "end" : std::to_string(i + 1);
        facts.push_back(input_fact(std::to_string(i), std::string(1, w[i]), next));
    }
    return facts;
}

InputString decode_input(const std::vector<Clause>& facts) {
    std::map<std::string, std::pair<std::string, std::string>> edges;
    for (const Clause& f : facts) {
        if (f.head != "input" || f.body.size() != 3) throw std::invalid_argument("not an input fact");
        edges[f.body[0].rhs().name()] = {f.body[1].rhs().name(), f.body[2].rhs().name()};
    }
    std::string out;
    std::string cur = "0";
    for (std::size_t steps = 0; steps <= facts.size(); ++steps) {
        auto it = edges.find(cur);
        if (it == edges.end()) throw std::invalid_argument("broken input chain at " + cur);
        if (it->second.first != "empty") out += it->second.first;
        if (it->second.second == "end") return InputString(out);
        cur = it->second.second;
    }
    throw std::invalid_argument("input chain does not reach end");
}

Program merge(const Program& prog, const std::vector<Clause>& facts) {
    const Type input_type = Type::predicate(std::vector<Type>(3, Type::iota()));
    Program out = prog;
    if (auto it = out.signatures.find("input"); it != out.signatures.end() && !(it->second == input_type)) {
        throw Error(Diagnostic{"E101", {}, "program declares input : " + it->second.str() + ", expected " +
                                               input_type.str()});
    }
    out.signatures.insert_or_assign("input", input_type);
    out.clauses.insert(out.clauses.end(), facts.begin(), facts.end());
    out.constants = collect_constants(out);
    return out;
}

}  // namespace hodl
