#pragma once

// Residue-count series for one-dimensional sets of p-adic integers of the
// form {p^e : e in E} (optionally with the limit point 0 adjoined): exact
// coefficient tables N_0..N_M, a difference identity linking the table to
// the exponent set, and bounded-order linear-recurrence detection that
// separates rational from non-rational coefficient streams.

#include <optional>
#include <string>
#include <vector>

#include "sparse_arith/numeric.hpp"
#include "sparse_arith/sequences.hpp"

namespace sparse_arith {

// Which exponent set E defines the subset {p^e : e in E} of the p-adic
// integers. Exponents must be nonnegative so every element is integral.
enum class ExponentSetKind {
    AllNaturals,  // E = {0, 1, 2, ...}: every nonnegative power of p
    SparseImage,  // E = the value window of an almost sparse sequence
    ExplicitList, // E = a finite, explicitly listed set
};

struct ExponentSetSpec {
    ExponentSetKind kind = ExponentSetKind::AllNaturals;
    std::optional<SparseSequence> seq; // SparseImage only
    std::vector<Int> exponents;        // ExplicitList only; sorted, distinct
    bool include_zero = false;         // adjoin the limit point 0 to the set

    static ExponentSetSpec all_naturals();
    // Sequence values act as exponents; the least value must be nonnegative.
    static ExponentSetSpec sparse_image(SparseSequence s);
    // Sorts and deduplicates; rejects negatives, and rejects an empty list
    // unless include_zero makes the set {0} nonempty.
    static ExponentSetSpec explicit_list(std::vector<Int> es,
                                         bool include_zero = false);

    std::string describe() const; // short printable identifier
    json to_json() const;
};

// Coefficient table of the residue-count series: coeffs[m] is the number of
// distinct residues of the set modulo p^m for m = 0..M. Always starts at 1
// and is nondecreasing, since residues refine as m grows.
struct PoincareSeries {
    Int p;
    ExponentSetSpec spec;
    std::vector<Int> coeffs;
};

// Number of distinct residues of {p^e : e in E} modulo p^m, computed as
// |{e in E : e < m}| plus one when the set reaches valuation >= m (any
// exponent >= m, or the adjoined 0, collapses to the residue 0). For a
// sequence image the tail witness and the completeness of the count both
// require the window to reach m.
Int count_residues(const ExponentSetSpec& spec, const Int& p, long m);

// Coefficient table N_0..N_M.
PoincareSeries series(const ExponentSetSpec& spec, const Int& p, long M);

// Minimal-order linear recurrence with rational coefficients reproducing a
// coefficient stream after an initial transient:
//   a[m] = sum_{i=1..order} coeffs[i-1] * a[m-i]   for all m >= transient + order.
struct RecurrenceCertificate {
    int order = 0;
    std::vector<Rat> coeffs;
    int transient = 0;
    json to_json() const; // {order, coeffs, transient}
};

// Searches orders 1..K with transient <= K, solving exactly for the
// recurrence coefficients from the tail rows and then verifying the
// candidate against every provided coefficient. Returns the least order
// that works, with its least transient, or nullopt when no order <= K
// reproduces the stream. Requires at least 4K coefficients so that a
// verdict rests on substantially more rows than unknowns.
std::optional<RecurrenceCertificate>
detect_recurrence(const std::vector<Int>& coeffs, int K);

// Verifies coefficient-wise, up to the table's degree M, the identity
//   (1 - T) * P(T) = 1 + sum_{e in E} T^{e+1},
// i.e. first differences of the residue counts match the indicator of the
// shifted exponent set. Holds exactly when the set contains the limit
// point 0 (an infinite exponent tail, or include_zero); a perturbed table
// fails at the damaged coefficient.
bool check_difference_identity(const PoincareSeries& ps);

// Builds the table for the given exponent set and checks the identity up
// to degree M.
bool check_difference_identity(const ExponentSetSpec& spec, const Int& p,
                               long M);

// Emitters for coefficient tables.
std::string series_to_csv(const PoincareSeries& ps); // header "m,count"
json series_to_json(const PoincareSeries& ps);       // {schema, p, set, coeffs}

} // namespace sparse_arith
