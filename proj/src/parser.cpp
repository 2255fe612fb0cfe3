#include <cctype>
#include <charconv>
#include <unordered_map>

#include "ltab/errors.hpp"
#include "ltab/program.hpp"
#include "ltab/render.hpp"

namespace ltab {

std::string_view to_string(Strategy s) { return s == Strategy::Eager ? "eager" : "lazy"; }

namespace {

enum class Tok { Atom, Var, Int, LParen, RParen, Comma, End, Neck, Slash, Eof };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_layout();
        Token t{Tok::Eof, {}, line_, column_};
        if (pos_ >= src_.size()) return t;
        char c = src_[pos_];
        auto take = [&](Tok k, std::size_t n) {
            t.kind = k;
            t.text = std::string(src_.substr(pos_, n));
            advance(n);
            return t;
        };
        if (std::islower(static_cast<unsigned char>(c))) return take(Tok::Atom, ident_len());
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_') return take(Tok::Var, ident_len());
        if (std::isdigit(static_cast<unsigned char>(c))) return take(Tok::Int, digits_len(pos_));
        if (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))
            return take(Tok::Int, 1 + digits_len(pos_ + 1));
        switch (c) {
            case '(': return take(Tok::LParen, 1);
            case ')': return take(Tok::RParen, 1);
            case ',': return take(Tok::Comma, 1);
            case '.': return take(Tok::End, 1);
            case '/': return take(Tok::Slash, 1);
            case ':':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') return take(Tok::Neck, 2);
                break;
            default: break;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line_, column_);
    }

private:
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
            ++pos_;
        }
    }

    void skip_layout() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                std::size_t l = line_, col = column_;
                advance(2);
                while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance(1);
                if (pos_ + 1 >= src_.size()) throw SyntaxError("unterminated block comment", l, col);
                advance(2);
            } else {
                break;
            }
        }
    }

    std::size_t ident_len() const {
        std::size_t e = pos_;
        while (e < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[e])) || src_[e] == '_')) ++e;
        return e - pos_;
    }

    std::size_t digits_len(std::size_t from) const {
        std::size_t e = from;
        while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
        return e - from;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { shift(); }

    bool at_eof() const { return tok_.kind == Tok::Eof; }

    ProgramItem item() {
        if (tok_.kind == Tok::Neck) return directive();
        return clause();
    }

    Query query() {
        reset_scope();
        Query q;
        q.goals.push_back(goal());
        while (tok_.kind == Tok::Comma) {
            shift();
            q.goals.push_back(goal());
        }
        if (tok_.kind == Tok::End) shift();
        expect_eof();
        q.var_count = static_cast<VarId>(names_.size());
        q.var_names = names_;
        return q;
    }

    Term single(std::vector<std::string>* names) {
        reset_scope();
        Term t = term();
        if (tok_.kind == Tok::End) shift();
        expect_eof();
        if (names) *names = names_;
        return t;
    }

private:
    void shift() { tok_ = lex_.next(); }

    [[noreturn]] void fail(const std::string& what) const {
        std::string got = tok_.kind == Tok::Eof ? "end of input" : "'" + tok_.text + "'";
        throw SyntaxError(what + ", got " + got, tok_.line, tok_.column);
    }

    void expect(Tok k, const char* what) {
        if (tok_.kind != k) fail(std::string("expected ") + what);
        shift();
    }

    void expect_eof() {
        if (tok_.kind != Tok::Eof) fail("expected end of input");
    }

    void reset_scope() {
        scope_.clear();
        names_.clear();
    }

    Term variable(const std::string& name) {
        if (name == "_") {
            names_.push_back("_");
            return Term::variable(static_cast<VarId>(names_.size() - 1));
        }
        auto [it, inserted] = scope_.try_emplace(name, static_cast<VarId>(names_.size()));
        if (inserted) names_.push_back(name);
        return Term::variable(it->second);
    }

    Term term() {
        Token t = tok_;
        switch (t.kind) {
            case Tok::Var:
                shift();
                return variable(t.text);
            case Tok::Int: {
                std::int64_t v = 0;
                auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (ec != std::errc{}) throw SyntaxError("integer out of range", t.line, t.column);
                shift();
                return Term::integer(v);
            }
            case Tok::Atom: {
                shift();
                if (tok_.kind != Tok::LParen) return Term::atom(t.text);
                shift();
                std::vector<Term> args;
                args.push_back(term());
                while (tok_.kind == Tok::Comma) {
                    shift();
                    args.push_back(term());
                }
                expect(Tok::RParen, "',' or ')'");
                return Term::compound(t.text, std::move(args));
            }
            default:
                fail("expected a term");
        }
    }

    Term goal() {
        Token start = tok_;
        Term g = term();
        if (!g.is_callable()) throw SyntaxError("goal must be an atom or compound term", start.line, start.column);
        return g;
    }

    Clause clause() {
        reset_scope();
        Token start = tok_;
        Clause c;
        c.line = start.line;
        c.head = term();
        if (!c.head.is_callable())
            throw SyntaxError("clause head must be an atom or compound term", start.line, start.column);
        if (tok_.kind == Tok::Neck) {
            shift();
            c.body.push_back(goal());
            while (tok_.kind == Tok::Comma) {
                shift();
                c.body.push_back(goal());
            }
        }
        expect(Tok::End, "'.' at end of clause");
        c.var_count = static_cast<VarId>(names_.size());
        c.var_names = names_;
        return c;
    }

    TableDeclaration spec(std::size_t line) {
        if (tok_.kind != Tok::Atom) fail("expected predicate name");
        Symbol name = intern(tok_.text);
        shift();
        expect(Tok::Slash, "'/'");
        if (tok_.kind != Tok::Int || tok_.text.front() == '-') fail("arity must be a non-negative integer");
        std::uint32_t arity = 0;
        auto [p, ec] = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), arity);
        if (ec != std::errc{}) fail("arity out of range");
        shift();
        return TableDeclaration{PredicateKey{name, arity}, std::nullopt, line};
    }

    ProgramItem directive() {
        std::size_t line = tok_.line;
        shift();
        if (tok_.kind != Tok::Atom || tok_.text != "table") fail("expected 'table' directive");
        shift();
        std::vector<TableDeclaration> decls{spec(line)};
        while (tok_.kind == Tok::Comma) {
            shift();
            decls.push_back(spec(line));
        }
        std::optional<Strategy> mode;
        if (tok_.kind == Tok::Atom && (tok_.text == "eager" || tok_.text == "lazy")) {
            mode = tok_.text == "eager" ? Strategy::Eager : Strategy::Lazy;
            shift();
        }
        expect(Tok::End, "'.' at end of directive");
        for (auto& d : decls) d.strategy = mode;
        // Multi-predicate directives are returned one declaration at a time.
        for (std::size_t i = 1; i < decls.size(); ++i) pending_.push_back(decls[i]);
        return decls.front();
    }

public:
    std::vector<TableDeclaration> pending_;

private:
    Lexer lex_;
    Token tok_{Tok::Eof, {}, 1, 1};
    std::unordered_map<std::string, VarId> scope_;
    std::vector<std::string> names_;
};

}  // namespace

std::vector<ProgramItem> parse_program(std::string_view text) {
    Parser p(text);
    std::vector<ProgramItem> items;
    while (!p.at_eof()) {
        items.push_back(p.item());
        for (auto& d : p.pending_) items.emplace_back(d);
        p.pending_.clear();
    }
    return items;
}

Query parse_query(std::string_view text) { return Parser(text).query(); }

Term parse_term(std::string_view text, std::vector<std::string>* var_names) {
    return Parser(text).single(var_names);
}

std::string render_clause(const Clause& c) {
    Renderer r;
    std::string out = r(c.head);
    if (!c.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) out += ", ";
            r.append(out, c.body[i]);
        }
    }
    out += '.';
    return out;
}

}  // namespace ltab
