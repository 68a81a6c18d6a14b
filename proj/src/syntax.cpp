#include "hodl/syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hodl {

namespace {

enum class Tok { Ident, Numeral, Var, LParen, RParen, Dot, Comma, Neck, Equals, Directive, Colon, Arrow, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

[[noreturn]] void syntax_error(SourcePos pos, const std::string& msg) {
    throw Error(Diagnostic{"E001", pos, msg});
}

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Numeral: return "numeral";
        case Tok::Var: return "variable";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Dot: return "'.'";
        case Tok::Comma: return "','";
        case Tok::Neck: return "':-'";
        case Tok::Equals: return "'='";
        case Tok::Directive: return "'#pred'";
        case Tok::Colon: return "':'";
        case Tok::Arrow: return "'->'";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        auto single = [&](Tok t) {
            out.push_back({t, std::string(1, c), pos});
            advance(1);
        };
        if (c == '(') { single(Tok::LParen); continue; }
        if (c == ')') { single(Tok::RParen); continue; }
        if (c == '.') { single(Tok::Dot); continue; }
        if (c == ',') { single(Tok::Comma); continue; }
        if (c == '=') { single(Tok::Equals); continue; }
        if (c == ':' && i + 1 < text.size() && text[i + 1] == '-') {
            out.push_back({Tok::Neck, ":-", pos});
            advance(2);
            continue;
        }
        if (c == ':') { single(Tok::Colon); continue; }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", pos});
            advance(2);
            continue;
        }
        if (c == '#') {
            std::size_t j = i + 1;
            while (j < text.size() && word_char(text[j])) ++j;
            std::string word(text.substr(i, j - i));
            if (word != "#pred") syntax_error(pos, "unknown directive '" + word + "'");
            out.push_back({Tok::Directive, word, pos});
            advance(j - i);
            continue;
        }
        if (word_char(c)) {
            std::size_t j = i;
            while (j < text.size() && word_char(text[j])) ++j;
            std::string word(text.substr(i, j - i));
            Tok kind;
            if (std::isdigit(static_cast<unsigned char>(c))) {
                for (char d : word) {
                    if (!std::isdigit(static_cast<unsigned char>(d))) syntax_error(pos, "malformed numeral '" + word + "'");
                }
                kind = Tok::Numeral;
            } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
                kind = Tok::Var;
            } else {
                kind = Tok::Ident;
            }
            out.push_back({kind, std::move(word), pos});
            advance(j - i);
            continue;
        }
        syntax_error(pos, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    SourceProgram program() {
        SourceProgram prog;
        std::unordered_map<std::string, SourcePos> declared;
        while (peek().kind != Tok::End) {
            if (peek().kind == Tok::Directive) {
                Directive d = directive();
                if (auto it = declared.find(d.name); it != declared.end()) {
                    syntax_error(d.pos, "duplicate directive for '" + d.name + "'");
                }
                declared.emplace(d.name, d.pos);
                prog.directives.push_back(std::move(d));
            } else {
                prog.clauses.push_back(clause());
            }
        }
        return prog;
    }

    Type whole_type() {
        Type t = type();
        expect(Tok::End);
        return t;
    }

    Expr whole_term() {
        Expr e = appterm();
        if (peek().kind == Tok::Dot) next();
        expect(Tok::End);
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    const Token& expect(Tok kind) {
        if (peek().kind != kind) {
            std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
            syntax_error(peek().pos, std::string("expected ") + tok_name(kind) + ", found " + got);
        }
        return next();
    }

    Directive directive() {
        SourcePos pos = expect(Tok::Directive).pos;
        std::string name = expect(Tok::Ident).text;
        expect(Tok::Colon);
        Type t = type();
        expect(Tok::Dot);
        return Directive{std::move(name), std::move(t), pos};
    }

    Type type() {
        Type left = type_atom();
        if (peek().kind == Tok::Arrow) {
            next();
            return Type::arrow(std::move(left), type());
        }
        return left;
    }

    Type type_atom() {
        if (peek().kind == Tok::LParen) {
            next();
            Type t = type();
            expect(Tok::RParen);
            return t;
        }
        const Token& t = expect(Tok::Ident);
        if (t.text == "i") return Type::iota();
        if (t.text == "o") return Type::omicron();
        syntax_error(t.pos, "unknown type '" + t.text + "' (expected i or o)");
    }

    SurfaceClause clause() {
        SurfaceClause c;
        const Token& h = peek();
        if (h.kind != Tok::Ident) syntax_error(h.pos, "clause head must start with a predicate name");
        Expr head = appterm();
        if (!head.head().is_const()) syntax_error(h.pos, "clause head must start with a predicate name");
        c.head = head.head().name();
        c.head_pos = h.pos;
        c.head_args = head.spine_args();
        if (peek().kind == Tok::Neck) {
            next();
            c.body.push_back(bexpr());
            while (peek().kind == Tok::Comma) {
                next();
                c.body.push_back(bexpr());
            }
        }
        expect(Tok::Dot);
        return c;
    }

    Expr bexpr() {
        if (peek().kind == Tok::LParen) {
            SourcePos pos = next().pos;
            Expr inner = appterm();
            if (peek().kind == Tok::Equals) {
                next();
                Expr rhs = appterm();
                expect(Tok::RParen);
                return Expr::eq(std::move(inner), std::move(rhs));
            }
            expect(Tok::RParen);
            (void)pos;
            return continue_application(std::move(inner));
        }
        Expr lhs = appterm();
        if (peek().kind == Tok::Equals) {
            next();
            return Expr::eq(std::move(lhs), appterm());
        }
        return lhs;
    }

    bool starts_primary() const {
        Tok k = peek().kind;
        return k == Tok::Ident || k == Tok::Numeral || k == Tok::Var || k == Tok::LParen;
    }

    Expr appterm() { return continue_application(primary()); }

    Expr continue_application(Expr head) {
        while (starts_primary()) head = Expr::app(std::move(head), primary());
        return head;
    }

    Expr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Ident:
            case Tok::Numeral: next(); return Expr::constant(t.text, t.pos);
            case Tok::Var: next(); return Expr::var(t.text, t.pos);
            case Tok::LParen: {
                next();
                Expr e = appterm();
                expect(Tok::RParen);
                return e;
            }
            default: {
                std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
                syntax_error(t.pos, "expected a term, found " + got);
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

bool is_numeral(const std::string& s) { return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0])); }

// Names used as predicates anywhere in the program.
void mark_applied(const Expr& e, bool atom_position, std::unordered_set<std::string>& preds) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            if (atom_position && !is_numeral(e.name())) preds.insert(e.name());
            break;
        case Expr::Kind::App: {
            const Expr& h = e.head();
            if (h.is_const() && !is_numeral(h.name())) preds.insert(h.name());
            for (const Expr& a : e.spine_args()) mark_applied(a, false, preds);
            break;
        }
        case Expr::Kind::Eq:
            mark_applied(e.lhs(), false, preds);
            mark_applied(e.rhs(), false, preds);
            break;
        default: break;
    }
}

// Variables of a clause that are applied or used as atoms.
void mark_applied_vars(const Expr& e, bool atom_position, std::unordered_set<std::string>& vars) {
    switch (e.kind()) {
        case Expr::Kind::Var:
            if (atom_position) vars.insert(e.name());
            break;
        case Expr::Kind::App: {
            const Expr& h = e.head();
            if (h.is_var()) vars.insert(h.name());
            for (const Expr& a : e.spine_args()) mark_applied_vars(a, false, vars);
            break;
        }
        case Expr::Kind::Eq:
            mark_applied_vars(e.lhs(), false, vars);
            mark_applied_vars(e.rhs(), false, vars);
            break;
        default: break;
    }
}

void collect_vars(const Expr& e, std::unordered_set<std::string>& vars) {
    if (e.is_var()) vars.insert(e.name());
    if (e.is_app() || e.is_eq()) {
        collect_vars(e.fun(), vars);
        collect_vars(e.arg(), vars);
    }
}

Expr retag(const Expr& e, const std::unordered_set<std::string>& preds) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            if (preds.contains(e.name())) return Expr::pred(e.name(), e.pos());
            return e;
        case Expr::Kind::App: return Expr::app(retag(e.fun(), preds), retag(e.arg(), preds));
        case Expr::Kind::Eq: return Expr::eq(retag(e.lhs(), preds), retag(e.rhs(), preds));
        default: return e;
    }
}

}  // namespace

SourceProgram parse_program(std::string_view text) { return Parser(text).program(); }

Type parse_type(std::string_view text) { return Parser(text).whole_type(); }

Expr parse_term(std::string_view text) { return Parser(text).whole_term(); }

Program desugar(const SourceProgram& src) {
    std::unordered_set<std::string> preds;
    Program prog;
    for (const Directive& d : src.directives) {
        preds.insert(d.name);
        prog.signatures.emplace(d.name, d.type);
    }
    for (const SurfaceClause& c : src.clauses) {
        preds.insert(c.head);
        for (const Expr& a : c.head_args) mark_applied(a, false, preds);
        for (const Expr& b : c.body) mark_applied(b, true, preds);
    }

    for (const SurfaceClause& sc : src.clauses) {
        Clause c;
        c.head = sc.head;
        c.pos = sc.head_pos;

        std::unordered_set<std::string> used;
        std::unordered_set<std::string> applied;
        for (const Expr& a : sc.head_args) collect_vars(a, used);
        for (const Expr& b : sc.body) {
            collect_vars(b, used);
            mark_applied_vars(b, true, applied);
        }
        int counter = 0;
        auto fresh = [&](SourcePos pos) {
            std::string name;
            do {
                name = "_H" + std::to_string(counter++);
            } while (used.contains(name));
            used.insert(name);
            return Expr::var(name, pos);
        };

        std::vector<Expr> equations;
        std::unordered_set<std::string> seen;
        for (const Expr& raw : sc.head_args) {
            Expr a = retag(raw, preds);
            if (a.is_var()) {
                if (seen.insert(a.name()).second || applied.contains(a.name())) {
                    c.params.push_back(a);
                } else {
                    Expr v = fresh(a.pos());
                    equations.push_back(Expr::eq(a, v));
                    c.params.push_back(v);
                }
            } else if (a.is_const()) {
                Expr v = fresh(a.pos());
                equations.push_back(Expr::eq(v, a));
                c.params.push_back(v);
            } else {
                c.params.push_back(a);
            }
        }
        c.body = std::move(equations);
        for (const Expr& b : sc.body) c.body.push_back(retag(b, preds));
        prog.clauses.push_back(std::move(c));
    }
    prog.constants = collect_constants(prog);
    return prog;
}

Expr resolve_names(const Expr& e, const Program& prog) {
    std::unordered_set<std::string> preds;
    for (const auto& [name, ty] : prog.signatures) preds.insert(name);
    return retag(e, preds);
}

namespace {

std::string print_atom(const Expr& e) {
    if (e.is_app()) return "(" + e.str() + ")";
    return e.str();
}

}  // namespace

std::string print_clause(const Clause& clause) {
    std::string out = clause.head;
    for (const Expr& p : clause.params) {
        out += ' ';
        out += p.is_app() ? "(" + p.str() + ")" : p.str();
    }
    if (!clause.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < clause.body.size(); ++i) {
            if (i) out += ", ";
            out += print_atom(clause.body[i]);
        }
    }
    out += '.';
    return out;
}

std::string print_program(const Program& prog) {
    std::ostringstream out;
    for (const auto& [name, ty] : prog.signatures) out << "#pred " << name << " : " << ty.str() << ".\n";
    for (const Clause& c : prog.clauses) out << print_clause(c) << '\n';
    return out.str();
}

}  // namespace hodl
