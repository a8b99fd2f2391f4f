#pragma once

// Multivariate polynomials over ℚ in the formal scale points b, S(b), ...,
// S^{d-1}(b), where each point stands for p raised to a deep sequence value.
// The term of strictly smallest valuation — when the gap to every other term
// grows without bound — determines the valuation, the unit projection, and
// the power-coset class of the whole value; an exact instantiation oracle
// substitutes concrete indices to cross-check all three.

#include <map>
#include <vector>

#include "sparse_arith/nonstandard.hpp"
#include "sparse_arith/padic.hpp"

namespace sparse_arith {

// Valuation of a single monomial, kept symbolic in the scale: the rational
// coefficient contributes a fixed offset, each variable X_i contributes its
// exponent times the (huge) value r_{N+i}.
struct FormalValuation {
    long offset = 0;
    std::vector<int> exps; // length d

    Int eval(const SparseSequence& seq, int N) const;
    json to_json() const;
};

struct Monomial {
    std::vector<int> exps;
    Rat coeff;

    std::string to_string() const; // e.g. "7*X0^2*X1"
};

struct SparsePoly {
    Int p;
    Ambient seq;
    int d = 1;
    std::map<std::vector<int>, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    json to_json() const;
    std::string to_string() const;
};

// Validates and normalizes: p prime, d >= 1, exponent vectors of length d
// with nonnegative entries, zero coefficients dropped.
SparsePoly make_poly(Int p, Ambient seq, int d,
                     std::map<std::vector<int>, Rat> terms);

// Parses "X0^2 + 7*X0" style polynomial text (rational coefficients,
// variables X0..X{d-1}, +/-/* and ^ with nonnegative integer exponents).
SparsePoly parse_poly(const std::string& text, Int p, Ambient seq, int d);

SparsePoly poly_from_json(const json& j, Ambient seq);

FormalValuation monomial_val(const Monomial& mono, const Int& p);

// The unique term whose valuation stays below every other term's by an
// unboundedly growing margin. Two distinct exponent vectors inducing
// eventually-equal shift combinations have a bounded gap, so their collision
// at the minimum means no term dominates.
Monomial dominant_term(const SparsePoly& P);

// Derived quantities, each read off the dominant term alone.
FormalValuation poly_vp(const SparsePoly& P);
Monomial poly_pi(const SparsePoly& P); // unit projection, symbolically
// Power-coset class; the exponent pattern only settles at a concrete index.
Int poly_pn_class(const SparsePoly& P, const CosetTable& table, int N);

// Exact value at X_i := p^{r_{N+i}}. Every monomial's total exponent must
// stay within the budget.
Rat instantiate(const SparsePoly& P, int N, long max_exponent = 1 << 16);

// Deepest N with r_{N+d} within the default instantiation budget.
int default_index(const SparsePoly& P);

} // namespace sparse_arith
