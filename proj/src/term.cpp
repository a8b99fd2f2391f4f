#include "sparse_arith/term.hpp"

#include <cctype>

namespace sparse_arith {

namespace {
TermPtr make(TermKind k, TermPtr a = nullptr, TermPtr b = nullptr) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}
} // namespace

TermPtr Term::constant(Rat v) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Const;
    t->value = std::move(v);
    return t;
}
TermPtr Term::integer(long v) { return constant(Rat(v)); }
TermPtr Term::var(std::string n) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->name = std::move(n);
    return t;
}
TermPtr Term::param(std::string label, Rat v) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Param;
    t->name = std::move(label);
    t->value = std::move(v);
    return t;
}
TermPtr Term::add(TermPtr l, TermPtr r) { return make(TermKind::Add, std::move(l), std::move(r)); }
TermPtr Term::sub(TermPtr l, TermPtr r) { return make(TermKind::Sub, std::move(l), std::move(r)); }
TermPtr Term::neg(TermPtr t) { return make(TermKind::Neg, std::move(t)); }
TermPtr Term::mul(TermPtr l, TermPtr r) { return make(TermKind::Mul, std::move(l), std::move(r)); }
TermPtr Term::inv(TermPtr t) { return make(TermKind::Inv, std::move(t)); }
TermPtr Term::lambda(TermPtr t) { return make(TermKind::Lambda, std::move(t)); }
TermPtr Term::succ(TermPtr t) { return make(TermKind::Succ, std::move(t)); }
TermPtr Term::pred(TermPtr t) { return make(TermKind::Pred, std::move(t)); }
TermPtr Term::pi(TermPtr t) { return make(TermKind::Pi, std::move(t)); }

bool term_equal(const TermPtr& s, const TermPtr& t) {
    if (s == t) return true;
    if (!s || !t) return false;
    if (s->kind != t->kind) return false;
    switch (s->kind) {
    case TermKind::Const: return s->value == t->value;
    case TermKind::Var: return s->name == t->name;
    case TermKind::Param: return s->name == t->name && s->value == t->value;
    default:
        return term_equal(s->a, t->a) && term_equal(s->b, t->b);
    }
}

void term_vars(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == TermKind::Var) out.insert(t->name);
    term_vars(t->a, out);
    term_vars(t->b, out);
}

bool term_has_var(const TermPtr& t) {
    if (!t) return false;
    if (t->kind == TermKind::Var) return true;
    return term_has_var(t->a) || term_has_var(t->b);
}

bool term_is_const(const TermPtr& t, long k) {
    return t && t->kind == TermKind::Const && t->value == k;
}

namespace {

// Precedence levels for rendering: additive 1, multiplicative 2, atoms 3.
int level(const TermPtr& t) {
    switch (t->kind) {
    case TermKind::Add:
    case TermKind::Sub: return 1;
    case TermKind::Mul: return 2;
    case TermKind::Neg: return 2;
    default: return 3;
    }
}

void render(const TermPtr& t, std::string& out, int need) {
    bool wrap = level(t) < need;
    if (wrap) out += "(";
    switch (t->kind) {
    case TermKind::Const:
        if (t->value < 0) {
            out += "(" + t->value.get_str() + ")";
        } else {
            out += t->value.get_str();
        }
        break;
    case TermKind::Var:
    case TermKind::Param:
        out += t->name;
        break;
    case TermKind::Add:
        render(t->a, out, 1);
        out += " + ";
        render(t->b, out, 2);
        break;
    case TermKind::Sub:
        render(t->a, out, 1);
        out += " - ";
        render(t->b, out, 2);
        break;
    case TermKind::Neg:
        out += "-";
        render(t->a, out, 3);
        break;
    case TermKind::Mul:
        render(t->a, out, 2);
        out += "*";
        render(t->b, out, 3);
        break;
    case TermKind::Inv:
        out += "inv(";
        render(t->a, out, 0);
        out += ")";
        break;
    case TermKind::Lambda:
        out += "L(";
        render(t->a, out, 0);
        out += ")";
        break;
    case TermKind::Succ:
        out += "S(";
        render(t->a, out, 0);
        out += ")";
        break;
    case TermKind::Pred:
        out += "Sinv(";
        render(t->a, out, 0);
        out += ")";
        break;
    case TermKind::Pi:
        out += "pi(";
        render(t->a, out, 0);
        out += ")";
        break;
    }
    if (wrap) out += ")";
}

struct Parser {
    const std::string& s;
    Dialect dialect;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        skip();
        if (pos >= s.size() || s[pos] != c)
            throw syntax_error(std::string("expected '") + c + "'", pos);
        ++pos;
    }

    TermPtr parse_expr() {
        TermPtr t = parse_mul();
        while (true) {
            skip();
            if (pos < s.size() && s[pos] == '+') {
                ++pos;
                t = Term::add(t, parse_mul());
            } else if (pos < s.size() && s[pos] == '-') {
                ++pos;
                t = Term::sub(t, parse_mul());
            } else {
                break;
            }
        }
        return t;
    }

    TermPtr parse_mul() {
        TermPtr t = parse_factor();
        while (dialect == Dialect::Padic) {
            skip();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                t = Term::mul(t, parse_factor());
            } else {
                break;
            }
        }
        return t;
    }

    TermPtr parse_factor() {
        skip();
        if (pos >= s.size()) throw syntax_error("unexpected end of input", pos);
        char c = s[pos];
        if (c == '-') {
            ++pos;
            return Term::neg(parse_factor());
        }
        if (c == '(') {
            ++pos;
            TermPtr t = parse_expr();
            expect(')');
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            Int num(s.substr(start, pos - start));
            skip();
            if (pos < s.size() && s[pos] == '/' && dialect == Dialect::Padic) {
                ++pos;
                skip();
                std::size_t d0 = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == d0) throw syntax_error("expected denominator", pos);
                Int den(s.substr(d0, pos - d0));
                if (den == 0) throw syntax_error("zero denominator", d0);
                Rat q(num, den);
                q.canonicalize();
                return Term::constant(q);
            }
            return Term::constant(Rat(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string id = s.substr(start, pos - start);
            auto call = [&](TermPtr (*f)(TermPtr)) {
                expect('(');
                TermPtr inner = parse_expr();
                expect(')');
                return f(std::move(inner));
            };
            if (id == "L") return call(&Term::lambda);
            if (id == "S") return call(&Term::succ);
            if (id == "Sinv") return call(&Term::pred);
            if (dialect == Dialect::Padic && id == "inv") return call(&Term::inv);
            if (dialect == Dialect::Padic && id == "pi") return call(&Term::pi);
            if (id == "inv" || id == "pi")
                throw unknown_identifier("'" + id + "' requires the multiplicative dialect");
            skip();
            if (pos < s.size() && s[pos] == '(')
                throw unknown_identifier("unknown function '" + id + "'");
            return Term::var(std::move(id));
        }
        throw syntax_error("unexpected character", pos);
    }
};

} // namespace

std::string render_term(const TermPtr& t) {
    std::string out;
    render(t, out, 0);
    return out;
}

TermPtr parse_term(const std::string& text, Dialect dialect) {
    Parser p{text, dialect};
    TermPtr t = p.parse_expr();
    p.skip();
    if (p.pos != text.size()) throw syntax_error("trailing input", p.pos);
    return t;
}

} // namespace sparse_arith
