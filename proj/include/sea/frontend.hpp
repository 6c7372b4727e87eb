#pragma once

// S-expression reader and printer for problems, and verdict rendering.
//
//   (declare-alphabet "abc")  (declare-str s t)  (declare-int n)
//   (assert (= (str.++ "ab" s) (str.++ s "ba")))
//   (assert (str.in_re s (re.++ (re.* (str.to_re "ab")) (str.to_re "a"))))
//   (assert (= (mod (str.len s) 2) 0))

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "sea/problem.hpp"

namespace sea {

namespace sexp {

struct Node {
    enum Kind { List, Symbol, String, Number } kind = List;
    std::string text;  // symbol name, unescaped string, or digits
    std::vector<Node> kids;
    int line = 0, col = 0;
};

inline std::vector<Node> read_all(const std::string& src) {
    std::size_t i = 0;
    int line = 1, col = 1;
    auto adv = [&] {
        if (src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    auto skip = [&] {
        while (i < src.size()) {
            if (std::isspace((unsigned char)src[i])) {
                adv();
            } else if (src[i] == ';') {
                while (i < src.size() && src[i] != '\n') adv();
            } else {
                break;
            }
        }
    };
    std::vector<Node> stack{Node{}};
    std::vector<std::pair<int, int>> open;
    for (skip(); i < src.size(); skip()) {
        int l = line, c = col;
        char ch = src[i];
        if (ch == '(') {
            adv();
            stack.push_back(Node{Node::List, {}, {}, l, c});
            open.push_back({l, c});
        } else if (ch == ')') {
            if (stack.size() == 1) throw SyntaxError("unexpected ')'", l, c);
            adv();
            Node done = std::move(stack.back());
            stack.pop_back();
            open.pop_back();
            stack.back().kids.push_back(std::move(done));
        } else if (ch == '"') {
            adv();
            std::string s;
            for (;;) {
                if (i >= src.size()) throw SyntaxError("unterminated string literal", l, c);
                if (src[i] == '"') {
                    if (i + 1 < src.size() && src[i + 1] == '"') {
                        s += '"';
                        adv();
                        adv();
                        continue;
                    }
                    adv();
                    break;
                }
                if (src[i] < 32 || src[i] > 126) throw SyntaxError("non-printable character in string literal", line, col);
                s += src[i];
                adv();
            }
            stack.back().kids.push_back(Node{Node::String, s, {}, l, c});
        } else {
            std::string s;
            while (i < src.size() && !std::isspace((unsigned char)src[i]) && src[i] != '(' && src[i] != ')' &&
                   src[i] != '"' && src[i] != ';') {
                s += src[i];
                adv();
            }
            bool num = std::all_of(s.begin(), s.end(), [](char x) { return std::isdigit((unsigned char)x); });
            stack.back().kids.push_back(Node{num ? Node::Number : Node::Symbol, s, {}, l, c});
        }
    }
    if (stack.size() > 1) throw SyntaxError("unbalanced '('", open.back().first, open.back().second);
    return std::move(stack[0].kids);
}

}  // namespace sexp

namespace detail {

class Reader {
public:
    Problem run(const std::string& text) {
        for (const auto& top : sexp::read_all(text)) command(top);
        return std::move(p_);
    }

private:
    using Node = sexp::Node;
    enum class Type { Str, Int };
    Problem p_;
    std::map<std::string, Type> vars_;

    [[noreturn]] static void syntax(const Node& n, const std::string& msg) { throw SyntaxError(msg, n.line, n.col); }
    [[noreturn]] static void unsupported(const Node& n, const std::string& msg) {
        throw UnsupportedConstruct(msg, n.line, n.col);
    }

    static const std::string& head(const Node& n) {
        static const std::string none;
        if (n.kind != Node::List || n.kids.empty() || n.kids[0].kind != Node::Symbol) return none;
        return n.kids[0].text;
    }

    static void arity(const Node& n, std::size_t lo, std::size_t hi = ~std::size_t(0)) {
        std::size_t k = n.kids.size() - 1;
        if (k < lo || k > hi) syntax(n, "wrong number of arguments to " + n.kids[0].text);
    }

    void declare(const Node& name, Type t) {
        if (name.kind != Node::Symbol) syntax(name, "expected a variable name");
        if (vars_.count(name.text)) syntax(name, "variable " + name.text + " declared twice");
        vars_[name.text] = t;
        (t == Type::Str ? p_.str_vars : p_.int_vars).push_back(name.text);
    }

    void command(const Node& n) {
        const std::string& h = head(n);
        if (h == "declare-str" || h == "declare-int") {
            arity(n, 1);
            for (std::size_t i = 1; i < n.kids.size(); ++i) declare(n.kids[i], h == "declare-str" ? Type::Str : Type::Int);
        } else if (h == "declare-const" || h == "declare-fun") {
            // SMT-LIB spelling: (declare-const x String) / (declare-fun x () Int)
            const Node& sort = n.kids.back();
            if (n.kids.size() < 3 || sort.kind != Node::Symbol || (sort.text != "String" && sort.text != "Int"))
                syntax(n, "expected String or Int declaration");
            declare(n.kids[1], sort.text == "String" ? Type::Str : Type::Int);
        } else if (h == "declare-alphabet") {
            arity(n, 1, 1);
            if (n.kids[1].kind != Node::String) syntax(n.kids[1], "expected a string of characters");
            p_.extra_chars += n.kids[1].text;
        } else if (h == "assert") {
            arity(n, 1, 1);
            p_.assertions.push_back(formula(n.kids[1]));
        } else if (h == "check-sat" || h == "get-model" || h == "set-logic" || h == "set-info" || h == "exit") {
            // accepted and ignored for SMT-LIB familiarity
        } else {
            syntax(n, "unknown command");
        }
    }

    bool is_string_term(const Node& n) const {
        if (n.kind == Node::String) return true;
        if (n.kind == Node::Symbol) {
            auto it = vars_.find(n.text);
            return it != vars_.end() && it->second == Type::Str;
        }
        return head(n) == "str.++";
    }

    Formula formula(const Node& n) {
        if (n.kind == Node::Symbol) {
            if (n.text == "true") return fm::top();
            if (n.text == "false") return fm::bottom();
        }
        const std::string& h = head(n);
        if (h.empty()) syntax(n, "expected a formula");
        if (h == "and" || h == "or") {
            std::vector<Formula> fs;
            for (std::size_t i = 1; i < n.kids.size(); ++i) fs.push_back(formula(n.kids[i]));
            return h == "and" ? fm::conj(fs) : fm::disj(fs);
        }
        if (h == "not") {
            arity(n, 1, 1);
            return negated(n.kids[1]);
        }
        if (h == "distinct") {
            arity(n, 2, 2);
            if (is_string_term(n.kids[1]) || is_string_term(n.kids[2]))
                unsupported(n, "string disequality is not supported; eliminate it before solving");
            return fm::neg(fm::arith(mk_eq(expr(n.kids[1]), expr(n.kids[2]))));
        }
        if (h == "=") {
            arity(n, 2, 2);
            if (is_string_term(n.kids[1]) || is_string_term(n.kids[2])) return fm::eq(term(n.kids[1]), term(n.kids[2]));
            return fm::arith(mk_eq(expr(n.kids[1]), expr(n.kids[2])));
        }
        if (h == "<=" || h == "<" || h == ">=" || h == ">") {
            arity(n, 2, 2);
            Expr a = expr(n.kids[1]), b = expr(n.kids[2]);
            if (h == "<=") return fm::arith(mk_le(a, b));
            if (h == "<") return fm::arith(mk_lt(a, b));
            if (h == ">=") return fm::arith(mk_le(b, a));
            return fm::arith(mk_lt(b, a));
        }
        if (h == "str.in_re" || h == "str.in.re") {
            arity(n, 2, 2);
            return fm::in(term(n.kids[1]), regex(n.kids[2]));
        }
        syntax(n, "unknown predicate " + h);
    }

    // Negation is pushed through and/or down to arithmetic atoms.
    Formula negated(const Node& n) {
        if (n.kind == Node::Symbol && (n.text == "true" || n.text == "false"))
            return n.text == "true" ? fm::bottom() : fm::top();
        const std::string& h = head(n);
        if (h == "not") {
            arity(n, 1, 1);
            return formula(n.kids[1]);
        }
        if (h == "and" || h == "or") {
            std::vector<Formula> fs;
            for (std::size_t i = 1; i < n.kids.size(); ++i) fs.push_back(negated(n.kids[i]));
            return h == "and" ? fm::disj(fs) : fm::conj(fs);
        }
        Formula f = formula(n);
        if (f->kind == FNode::WordEq) unsupported(n, "string disequality is not supported; eliminate it before solving");
        if (f->kind != FNode::Arith) unsupported(n, "negation is only supported over arithmetic atoms");
        return fm::neg(f);
    }

    Term term(const Node& n) {
        if (n.kind == Node::String) return word(n.text);
        if (n.kind == Node::Symbol) {
            auto it = vars_.find(n.text);
            if (it == vars_.end()) throw UnknownIdentifier("unknown identifier " + n.text, n.line, n.col);
            if (it->second != Type::Str) syntax(n, n.text + " is not a string variable");
            return {Atom::bare(n.text)};
        }
        if (head(n) == "str.++") {
            Term t;
            for (std::size_t i = 1; i < n.kids.size(); ++i) t = cat(std::move(t), term(n.kids[i]));
            return t;
        }
        syntax(n, "expected a string term");
    }

    static bool constant(const Expr& e, i64& k) {
        if (e->kind == ExprNode::Const) {
            k = e->k;
            return true;
        }
        if (e->kind == ExprNode::Neg && e->a->kind == ExprNode::Const) {
            k = -e->a->k;
            return true;
        }
        return false;
    }

    Expr expr(const Node& n) {
        if (n.kind == Node::Number) {
            if (n.text.size() > 18) syntax(n, "integer literal too large");
            return ex::k(std::stoll(n.text));
        }
        if (n.kind == Node::Symbol) {
            auto it = vars_.find(n.text);
            if (it == vars_.end()) throw UnknownIdentifier("unknown identifier " + n.text, n.line, n.col);
            if (it->second != Type::Int) syntax(n, n.text + " is not an integer variable");
            return ex::v(n.text);
        }
        const std::string& h = head(n);
        if (h == "str.len") {
            arity(n, 1, 1);
            Term t = term(n.kids[1]);
            if (t.size() == 1 && t[0].kind == Atom::Var) return ex::len(t[0].var);
            Expr e = ex::k(0);
            for (std::size_t i = 0; i < t.size(); ++i) {
                Expr a = t[i].kind == Atom::Const ? ex::k(1) : ex::len(t[i].var);
                e = i == 0 ? a : ex::add(e, a);
            }
            return e;
        }
        if (h == "+") {
            arity(n, 1);
            Expr e = expr(n.kids[1]);
            for (std::size_t i = 2; i < n.kids.size(); ++i) e = ex::add(e, expr(n.kids[i]));
            return e;
        }
        if (h == "-") {
            arity(n, 1);
            if (n.kids.size() == 2) return ex::neg(expr(n.kids[1]));
            Expr e = expr(n.kids[1]);
            for (std::size_t i = 2; i < n.kids.size(); ++i) e = ex::sub(e, expr(n.kids[i]));
            return e;
        }
        if (h == "*") {
            arity(n, 2, 2);
            Expr a = expr(n.kids[1]), b = expr(n.kids[2]);
            i64 k;
            if (constant(a, k)) return ex::scale(k, b);
            if (constant(b, k)) return ex::scale(k, a);
            unsupported(n, "non-linear multiplication");
        }
        if (h == "mod" || h == "%") {
            arity(n, 2, 2);
            return ex::mod(expr(n.kids[1]), expr(n.kids[2]));
        }
        if (h == "max" || h == "min") {
            arity(n, 2, 2);
            Expr a = expr(n.kids[1]), b = expr(n.kids[2]);
            return h == "max" ? ex::max(a, b) : ex::min(a, b);
        }
        syntax(n, "expected an integer expression");
    }

    Regex regex(const Node& n) {
        if (n.kind == Node::Symbol) {
            if (n.text == "re.none" || n.text == "re.nostr") return re::empty();
            if (n.text == "re.all") return re::comp(re::empty());
            if (n.text == "re.allchar") {
                // words of length exactly one, independent of the final alphabet
                Regex nonempty = re::comp(re::eps());
                return re::inter(nonempty, re::comp(re::cat(nonempty, nonempty)));
            }
            syntax(n, "expected a regular expression");
        }
        const std::string& h = head(n);
        if (h == "str.to_re" || h == "str.to.re") {
            arity(n, 1, 1);
            const Node& a = n.kids[1];
            if (a.kind == Node::Symbol && vars_.count(a.text))
                unsupported(a, "string variables may not occur inside a regular expression");
            if (a.kind != Node::String) syntax(a, "expected a string literal");
            if (a.text.empty()) return re::eps();
            if (a.text.size() == 1) return re::lit(a.text[0]);
            return re::word(a.text);
        }
        if (h == "re.++" || h == "re.union" || h == "re.inter") {
            arity(n, 1);
            Regex r = regex(n.kids[1]);
            for (std::size_t i = 2; i < n.kids.size(); ++i) {
                Regex b = regex(n.kids[i]);
                r = h == "re.++" ? re::cat(r, b) : h == "re.union" ? re::alt(r, b) : re::inter(r, b);
            }
            return r;
        }
        if (h == "re.*" || h == "re.comp" || h == "re.+" || h == "re.opt") {
            arity(n, 1, 1);
            Regex r = regex(n.kids[1]);
            if (h == "re.*") return re::star(r);
            if (h == "re.comp") return re::comp(r);
            if (h == "re.+") return re::cat(r, re::star(r));
            return re::alt(re::eps(), r);
        }
        if (h == "re.range") {
            arity(n, 2, 2);
            const Node &a = n.kids[1], &b = n.kids[2];
            if (a.kind != Node::String || b.kind != Node::String || a.text.size() != 1 || b.text.size() != 1)
                syntax(n, "re.range expects two single-character literals");
            Regex r = re::empty();
            for (char c = a.text[0]; c <= b.text[0]; ++c) r = r->kind == RegexNode::Empty ? re::lit(c) : re::alt(r, re::lit(c));
            return r;
        }
        syntax(n, "expected a regular expression");
    }
};

}  // namespace detail

inline Problem parse_problem(const std::string& text) { return detail::Reader().run(text); }

// ---------------------------------------------------------------- printing

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline std::string print_term(const Term& t) {
    std::vector<std::string> parts;
    std::string lit;
    bool in_lit = false;
    for (const Atom& a : t) {
        if (a.kind == Atom::Const) {
            lit += a.ch;
            in_lit = true;
            continue;
        }
        if (in_lit) parts.push_back(quote(lit));
        lit.clear();
        in_lit = false;
        parts.push_back(a.var);
    }
    if (in_lit) parts.push_back(quote(lit));
    if (parts.empty()) return "\"\"";
    if (parts.size() == 1) return parts[0];
    std::string s = "(str.++";
    for (auto& p : parts) s += " " + p;
    return s + ")";
}

inline std::string print_expr(const Expr& e) {
    switch (e->kind) {
        case ExprNode::Const: return e->k < 0 ? "(- " + std::to_string(-e->k) + ")" : std::to_string(e->k);
        case ExprNode::Var: return e->name;
        case ExprNode::Len: return "(str.len " + e->name + ")";
        case ExprNode::Scale: return "(* " + print_expr(ex::k(e->k)) + " " + print_expr(e->a) + ")";
        case ExprNode::Neg: return "(- " + print_expr(e->a) + ")";
        case ExprNode::Mod: return "(mod " + print_expr(e->a) + " " + print_expr(e->b) + ")";
        case ExprNode::Add: return "(+ " + print_expr(e->a) + " " + print_expr(e->b) + ")";
        case ExprNode::Max: return "(max " + print_expr(e->a) + " " + print_expr(e->b) + ")";
        case ExprNode::Min: return "(min " + print_expr(e->a) + " " + print_expr(e->b) + ")";
    }
    return "?";
}

inline std::string print_regex(const Regex& r) {
    switch (r->kind) {
        case RegexNode::Empty: return "re.none";
        case RegexNode::Eps: return "(str.to_re \"\")";
        case RegexNode::Lit: return "(str.to_re " + quote(std::string(1, r->ch)) + ")";
        case RegexNode::Word: return "(str.to_re " + quote(r->word) + ")";
        case RegexNode::Cat: return "(re.++ " + print_regex(r->a) + " " + print_regex(r->b) + ")";
        case RegexNode::Union: return "(re.union " + print_regex(r->a) + " " + print_regex(r->b) + ")";
        case RegexNode::Inter: return "(re.inter " + print_regex(r->a) + " " + print_regex(r->b) + ")";
        case RegexNode::Comp: return "(re.comp " + print_regex(r->a) + ")";
        case RegexNode::Star: return "(re.* " + print_regex(r->a) + ")";
    }
    return "?";
}

inline std::string print_formula(const Formula& f) {
    switch (f->kind) {
        case FNode::True: return "true";
        case FNode::False: return "false";
        case FNode::WordEq: return "(= " + print_term(f->lhs) + " " + print_term(f->rhs) + ")";
        case FNode::InRe: return "(str.in_re " + print_term(f->lhs) + " " + print_regex(f->re) + ")";
        case FNode::Arith:
            return std::string(f->atom.kind == ArithAtom::Eq ? "(= " : "(<= ") + print_expr(f->atom.lhs) + " " +
                   print_expr(f->atom.rhs) + ")";
        case FNode::Not: return "(not " + print_formula(f->kids[0]) + ")";
        case FNode::And:
        case FNode::Or: {
            std::string s = f->kind == FNode::And ? "(and" : "(or";
            for (auto& k : f->kids) s += " " + print_formula(k);
            return s + ")";
        }
    }
    return "?";
}

inline std::string print_problem(const Problem& p) {
    std::string out;
    if (!p.extra_chars.empty()) out += "(declare-alphabet " + quote(p.extra_chars) + ")\n";
    if (!p.str_vars.empty()) {
        out += "(declare-str";
        for (auto& v : p.str_vars) out += " " + v;
        out += ")\n";
    }
    if (!p.int_vars.empty()) {
        out += "(declare-int";
        for (auto& v : p.int_vars) out += " " + v;
        out += ")\n";
    }
    for (auto& a : p.assertions) out += "(assert " + print_formula(a) + ")\n";
    return out;
}

inline std::string render_answer(const Answer& ans, const Problem& p, bool with_model) {
    switch (ans.verdict) {
        case Verdict::Unsat: return "unsat\n";
        case Verdict::Unknown: return "unknown\n";
        case Verdict::Sat: break;
    }
    std::string out = "sat\n";
    if (!with_model) return out;
    for (auto& v : p.str_vars) {
        auto it = ans.model.words.find(v);
        out += "(define " + v + " " + quote(it == ans.model.words.end() ? "" : it->second) + ")\n";
    }
    for (auto& v : p.int_vars) {
        auto it = ans.model.ints.find(v);
        i64 k = it == ans.model.ints.end() ? 0 : it->second;
        out += "(define " + v + " " + (k < 0 ? "(- " + std::to_string(-k) + ")" : std::to_string(k)) + ")\n";
    }
    return out;
}

}  // namespace sea
