#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sparse_arith/sequences.hpp"
#include "sparse_arith/term.hpp"

namespace sparse_arith {

// Exact p-adic valuation of a rational; infinite for zero.
Valuation vp(const Rat& x, const Int& p);

// The projection x -> p^{v_p(x)}; fixed on powers of p, and 1 at zero.
Rat pi_value(const Rat& x, const Int& p);

// Coset table of the subgroup of nonzero n-th powers.
struct CosetTable {
    Int p;
    int n = 0;
    std::vector<Int> reps;       // positive representatives, one per coset
    int threshold = 0;           // least m with every 1 + p^m * t an n-th power
    int enum_precision = 0;      // exponent of the enumeration modulus
    int test_precision = 0;      // exponent of the power-residue test modulus
    std::vector<Int> unit_reps;  // unit-part representatives (valuation 0)
    std::set<Int> power_residues; // n-th power unit residues mod p^test_precision
    json to_json() const;
};

// Brute-force construction of the coset table for n >= 2.
CosetTable pn_cosets(const Int& p, int n);

// The representative of x's coset; x must be nonzero.
Int pn_class(const Rat& x, const CosetTable& table);

// Witness extraction for the valuation of an algebraic value: given the
// valuations of polynomial coefficients (index, v_p(c_i)) and a candidate
// rational valuation v_a of the root, returns the extreme pair of indices
// where min(v(c_i) + i*v_a) is attained, with n = j - i.
struct AlgebraicWitness {
    int n;
    int i, j;
};
AlgebraicWitness algebraic_value_witness(
    const std::vector<std::pair<int, Valuation>>& coeff_valuations,
    const Rat& v_a);

// Lambda / successor / predecessor transported through z -> p^z.
Rat padic_lambda(const Rat& x, const Int& p, const SparseSequence& seq);
Rat padic_succ(const Rat& x, const Int& p, const SparseSequence& seq);
Rat padic_pred(const Rat& x, const Int& p, const SparseSequence& seq);

// Bottom-up exact evaluation of a multiplicative-dialect term.
Rat eval_term_padic(const TermPtr& t, const std::map<std::string, Rat>& env,
                    const Int& p, const SparseSequence& seq);

} // namespace sparse_arith
