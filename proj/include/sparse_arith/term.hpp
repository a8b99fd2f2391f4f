#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>

#include "sparse_arith/errors.hpp"
#include "sparse_arith/numeric.hpp"

namespace sparse_arith {

// Term language dialects. The additive dialect has {+, -, L, S, Sinv};
// the multiplicative dialect adds {*, inv, pi}.
enum class Dialect { Z, Padic };

enum class TermKind {
    Const,  // exact rational constant (integer literals parse to these)
    Var,    // named free variable, bound by an evaluation environment
    Param,  // harvested parameter: named, with its exact value baked in
    Add, Sub, Neg,
    Mul, Inv,       // multiplicative dialect only
    Lambda, Succ, Pred,
    Pi              // multiplicative dialect only
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    Rat value;         // Const and Param
    std::string name;  // Var and Param
    TermPtr a, b;      // children: a for unary, a/b for binary

    static TermPtr constant(Rat v);
    static TermPtr integer(long v);
    static TermPtr var(std::string n);
    static TermPtr param(std::string label, Rat v);
    static TermPtr add(TermPtr l, TermPtr r);
    static TermPtr sub(TermPtr l, TermPtr r);
    static TermPtr neg(TermPtr t);
    static TermPtr mul(TermPtr l, TermPtr r);
    static TermPtr inv(TermPtr t);
    static TermPtr lambda(TermPtr t);
    static TermPtr succ(TermPtr t);
    static TermPtr pred(TermPtr t);
    static TermPtr pi(TermPtr t);
};

// Structural equality (params compare by name and value).
bool term_equal(const TermPtr& s, const TermPtr& t);

// Collects the free variable names of t into out.
void term_vars(const TermPtr& t, std::set<std::string>& out);
bool term_has_var(const TermPtr& t);

// True iff t is the literal constant k.
bool term_is_const(const TermPtr& t, long k);

// Renders to the concrete syntax accepted by parse_term. Parameters render
// as their labels; rational constants as "num/den" (accepted on re-parse).
std::string render_term(const TermPtr& t);

// Recursive-descent parser for the term grammar:
//   expr   := multerm (("+"|"-") multerm)*
//   multerm:= factor ("*" factor)*                 [Padic only]
//   factor := int | ident | "(" expr ")" | "-" factor
//           | "L(" expr ")" | "S(" expr ")" | "Sinv(" expr ")"
//           | "inv(" expr ")" | "pi(" expr ")"     [Padic only]
// Identifiers other than the reserved function names are variables.
TermPtr parse_term(const std::string& text, Dialect dialect);

} // namespace sparse_arith
