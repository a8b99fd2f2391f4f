#pragma once

// Variable separation: rewriting a term t(x, y) evaluated over a cut of
// sample points so that the two variable groups end up in independent
// factors/summands.  The input is a family of sample tuples indexed along a
// strictly increasing "cut sequence" together with one value b sitting at the
// cut; the output expresses t(a_k, b) as u(a_k) + r(b) (additive dialect) or
// u(a_k) * r(b) (multiplicative dialect) for every retained index k, possibly
// after discarding a legal portion of the window and introducing parameters
// whose values are harvested from discarded sample points.

#include <map>
#include <string>
#include <vector>

#include "sparse_arith/padic.hpp"
#include "sparse_arith/term.hpp"
#include "sparse_arith/zline.hpp"

namespace sparse_arith {

// An indexed family of sample tuples split by a distinguished cut position.
// `vars` names the tuple coordinates; every point carries one value per name.
// `left` points precede the cut, `right` points follow it; the separation
// routines may shrink either side but must keep both nonempty and must keep
// the cut itself.
struct CutSequence {
    struct Point {
        long index = 0;
        std::vector<Rat> values;
    };

    std::vector<std::string> vars;
    std::vector<Point> left;
    Point cut;
    std::vector<Point> right;

    // Throws precondition_violated on arity mismatches, empty sides, or
    // non-increasing indices.
    void validate() const;

    json to_json() const;
    static CutSequence from_json(const json& j);
};

// One numerator/denominator pair of a fractional separation: `u` mentions
// only the tuple variables (plus parameters), `r` only the singleton.
struct SepPair {
    TermPtr u;
    TermPtr r;
};

// Result of a separation run.  Exactly one representation is populated:
//   Additive   t(a_k, b) = u(a_k) + r(b)
//   Product    t(a_k, b) = u(a_k) * r(b)
//   Fraction   t(a_k, b) = (sum of num pair products) / (sum of den pair
//              products), each pair already variable-split.
// `retained_left`/`retained_right` list the sample indices still in force;
// `params` records every harvested parameter value by its label; `case_trace`
// records which rewriting cases fired, in order.
struct Separation {
    enum class Form { Additive, Product, Fraction };

    Form form = Form::Additive;
    Dialect dialect = Dialect::Z;
    std::string yvar = "y";

    TermPtr u;
    TermPtr r;
    std::vector<SepPair> num;
    std::vector<SepPair> den;

    std::vector<long> retained_left;
    std::vector<long> retained_right;
    long cut_index = 0;

    std::map<std::string, Rat> params;
    std::vector<std::string> case_trace;

    json to_json() const;
};

// Additive separation over the integer line: t may use +, -, unary minus,
// floor (L), successor (S) and predecessor (Sinv) over integer-valued sample
// data.  Throws not_monotone when a decision family fails to be constant or
// strictly monotone across the retained window, window_exhausted when a
// required shrink would empty one side of the cut.
Separation separate_z(const TermPtr& t, const CutSequence& cs, const Int& b,
                      const SparseSequence& seq, const std::string& yvar = "y");

// Valuation decomposition: given already-split pairs (u_i, r_i), finds a
// single product u(a_k) * r(b) with the same p-adic valuation as
// sum_i u_i(a_k) * r_i(b) at every retained index.  Throws ambiguous_case
// when the window data does not settle which summand dominates.
Separation decompose_valuation(const std::vector<TermPtr>& us,
                               const std::vector<TermPtr>& rs,
                               const CutSequence& cs, const Rat& b,
                               const Int& p, const SparseSequence& seq,
                               const std::string& yvar = "y");

// Multiplicative separation: t may use +, -, *, inv, the projection pi, and
// the scale maps L/S/Sinv transported along p-powers.  Output form is
// Fraction in general; terms built purely from *, inv, pi, L, S, Sinv come
// out as a single Product whose factors are p-power valued.
Separation separate_padic(const TermPtr& t, const CutSequence& cs,
                          const Rat& b, const Int& p,
                          const SparseSequence& seq,
                          const std::string& yvar = "y");

// Re-evaluates both sides of a separation at every retained index plus the
// cut and reports whether they agree everywhere.  Any evaluation error counts
// as disagreement; this never throws.
bool verify_separation(const TermPtr& t, const Separation& sep,
                       const CutSequence& cs, const Rat& b,
                       const SparseSequence& seq, const Int& p = 2);

} // namespace sparse_arith
