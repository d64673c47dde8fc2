#include "gsat/textio.hpp"

#include <cctype>
#include <map>

namespace gsat {

namespace {

enum class tok { ident, lparen, rparen, comma, period, arrow, pipe, qmark, eof };

struct token {
    tok type;
    std::string text;
    int line, col;
};

class lexer {
public:
    explicit lexer(const std::string& s) : src_(s) { advance(); }

    const token& peek() const { return cur_; }

    token next() {
        token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.type = tok::eof;
            cur_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                bump();
            cur_.type = tok::ident;
            cur_.text = src_.substr(start, pos_ - start);
            return;
        }
        switch (c) {
            case '(': bump(); cur_.type = tok::lparen; return;
            case ')': bump(); cur_.type = tok::rparen; return;
            case ',': bump(); cur_.type = tok::comma; return;
            case '.': bump(); cur_.type = tok::period; return;
            case '|': bump(); cur_.type = tok::pipe; return;
            case '?': bump(); cur_.type = tok::qmark; return;
            case '-':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                    bump();
                    bump();
                    cur_.type = tok::arrow;
                    return;
                }
                throw parse_error(line_, col_, "stray '-' (expected '->')");
            default:
                throw parse_error(line_, col_, std::string("unexpected character '") + c + "'");
        }
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    token cur_{};
};

bool is_variable_name(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

class parser {
public:
    parser(const std::string& text, parse_options opts) : lex_(text), opts_(opts) {}

    program run() {
        program p;
        while (lex_.peek().type != tok::eof) {
            if (lex_.peek().type == tok::qmark) {
                p.queries.push_back(parse_query());
                continue;
            }
            parse_fact_or_rule(p);
        }
        return p;
    }

private:
    token expect(tok type, const std::string& what) {
        token t = lex_.next();
        if (t.type != type) throw parse_error(t.line, t.col, "expected " + what);
        return t;
    }

    void check_arity(const std::string& pred, std::size_t arity, int line, int col) {
        auto [it, inserted] = arities_.emplace(pred, arity);
        if (!inserted && it->second != arity)
            throw parse_error(line, col,
                              "arity mismatch for '" + pred + "': declared " +
                                  std::to_string(it->second) + ", used with " +
                                  std::to_string(arity));
    }

    term parse_term(bool inside_func) {
        token t = expect(tok::ident, "a term");
        if (t.text == "exists") throw parse_error(t.line, t.col, "'exists' is a reserved word");
        if (lex_.peek().type == tok::lparen) {
            if (!opts_.allow_skolem)
                throw parse_error(t.line, t.col,
                                  "function terms require --allow-skolem");
            if (inside_func)
                throw parse_error(t.line, t.col, "nested function term '" + t.text + "'");
            if (is_variable_name(t.text))
                throw parse_error(t.line, t.col, "function symbols must be lowercase");
            lex_.next();
            std::vector<term> args;
            args.push_back(parse_term(true));
            while (lex_.peek().type == tok::comma) {
                lex_.next();
                args.push_back(parse_term(true));
            }
            expect(tok::rparen, "')'");
            check_arity("fn:" + t.text, args.size(), t.line, t.col);
            return term::fn(t.text, std::move(args));
        }
        if (is_variable_name(t.text)) return term::var(t.text);
        return term::cst(t.text);
    }

    // Predicate position is unambiguous, so predicate names may use either
    // case; the variable/constant split only applies to term positions.
    atom parse_atom() {
        token t = expect(tok::ident, "a predicate");
        if (t.text == "exists") throw parse_error(t.line, t.col, "'exists' is a reserved word");
        atom a;
        a.pred = t.text;
        if (lex_.peek().type == tok::lparen) {
            lex_.next();
            a.args.push_back(parse_term(false));
            while (lex_.peek().type == tok::comma) {
                lex_.next();
                a.args.push_back(parse_term(false));
            }
            expect(tok::rparen, "')'");
        }
        check_arity(a.pred, a.args.size(), t.line, t.col);
        return a;
    }

    std::vector<atom> parse_atom_list() {
        std::vector<atom> atoms;
        atoms.push_back(parse_atom());
        while (lex_.peek().type == tok::comma) {
            lex_.next();
            atoms.push_back(parse_atom());
        }
        return atoms;
    }

    query parse_query() {
        expect(tok::qmark, "'?'");
        query q;
        q.disjuncts.push_back(parse_atom_list());
        while (lex_.peek().type == tok::pipe) {
            lex_.next();
            q.disjuncts.push_back(parse_atom_list());
        }
        expect(tok::period, "'.'");
        for (auto& d : q.disjuncts) d = sorted_atom_set(std::move(d));
        return q;
    }

    head_conjunct parse_head_conjunct(const std::set<std::string>& bvars) {
        head_conjunct c;
        if (lex_.peek().type == tok::ident && lex_.peek().text == "exists") {
            lex_.next();
            std::set<std::string> seen;
            for (;;) {
                token v = expect(tok::ident, "a variable after 'exists'");
                if (!is_variable_name(v.text))
                    throw parse_error(v.line, v.col, "existential '" + v.text +
                                                       "' must start uppercase");
                if (!seen.insert(v.text).second)
                    throw parse_error(v.line, v.col, "duplicate 'exists' binder " + v.text);
                if (bvars.count(v.text))
                    throw parse_error(v.line, v.col,
                                      "existential variable " + v.text + " used in body");
                c.existentials.push_back(v.text);
                if (lex_.peek().type != tok::comma) break;
                lex_.next();
            }
            expect(tok::period, "'.' after the exists binder");
        }
        token at = lex_.peek();
        c.atoms = parse_atom_list();
        std::set<std::string> allowed = bvars;
        allowed.insert(c.existentials.begin(), c.existentials.end());
        for (const std::string& v : vars_of(c.atoms))
            if (!allowed.count(v))
                throw parse_error(at.line, at.col, "unbound head variable " + v);
        return c;
    }

    void parse_fact_or_rule(program& p) {
        token start = lex_.peek();
        std::vector<atom> atoms = parse_atom_list();
        token t = lex_.next();
        if (t.type == tok::period) {
            if (atoms.size() != 1)
                throw parse_error(t.line, t.col, "expected '->' after an atom list");
            for (const term& arg : atoms[0].args) {
                if (arg.is_var())
                    throw parse_error(start.line, start.col,
                                      "variable " + arg.name + " in a fact");
                if (arg.is_func())
                    throw parse_error(start.line, start.col,
                                      "function term in a fact (facts are function-free)");
            }
            p.database.insert(atoms[0]);
            return;
        }
        if (t.type != tok::arrow) throw parse_error(t.line, t.col, "expected '->' or '.'");
        if (atoms.empty()) throw parse_error(t.line, t.col, "rule with empty body");
        std::set<std::string> bvars = vars_of(atoms);
        std::vector<head_conjunct> head;
        head.push_back(parse_head_conjunct(bvars));
        while (lex_.peek().type == tok::pipe) {
            lex_.next();
            head.push_back(parse_head_conjunct(bvars));
        }
        expect(tok::period, "'.'");
        p.rules.push_back(make_rule(std::move(atoms), std::move(head)));
    }

    lexer lex_;
    parse_options opts_;
    std::map<std::string, std::size_t> arities_;
};

}  // namespace

program parse_program(const std::string& text, parse_options opts) {
    return parser(text, opts).run();
}

}  // namespace gsat
