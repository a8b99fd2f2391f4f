#pragma once

// Strictly increasing integer sequences with a finite verification window,
// finite-support shift operators over them, and the window-based eventual
// comparison machinery: trichotomy verdicts, shift-domination witnesses,
// growth bounds between consecutive shifts, minimal vanishing operators,
// and the shift-rewriting basis they induce.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparse_arith/numeric.hpp"

namespace sparse_arith {

// ---------------------------------------------------------------- sequences

struct ThetaInfo {
    enum class Kind { None, Rational, Algebraic, Infinite };
    Kind kind = Kind::None;
    Rat value;                // Kind::Rational
    std::vector<Int> minpoly; // Kind::Algebraic; coeffs low-to-high degree
};

class SparseSequence {
public:
    enum class Gen { ClosedForm, Recurrence, Table };

    // Closed forms.
    static SparseSequence power(std::string name, Int base, int horizon = 64,
                                int stability = 8);
    // The factorial scale's adjacent-term ratio r_{n+1}/r_n = n + shift + 1
    // grows through any fixed coefficient budget, so operator sign flips
    // persist up to n ~ |coeff|; the default settle point covers the default
    // verification pools (|difference coefficients| <= 8) with margin.
    static SparseSequence factorial(std::string name, long shift = 1,
                                    int horizon = 64, int stability = 12);
    static SparseSequence affine(std::string name, Int a, Int b,
                                 int horizon = 64, int stability = 8);
    // r_{n+d} = sum_j coeffs[j] * r_{n+j} with the given initial terms.
    static SparseSequence recurrence(std::string name, std::vector<Int> coeffs,
                                     std::vector<Int> initial, int horizon = 64,
                                     int stability = 8);
    static SparseSequence table(std::string name, std::vector<Int> values,
                                int stability = 8);

    const std::string& name() const { return name_; }
    int horizon() const { return horizon_; }
    int stability() const { return stability_; }
    Gen generator() const { return gen_; }
    const ThetaInfo& theta() const { return theta_; }
    void set_theta(ThetaInfo t) { theta_ = std::move(t); }
    void set_stability(int n0) { stability_ = n0; }

    // r_n for 0 <= n <= horizon.
    const Int& term(int n) const;
    const std::vector<Int>& window() const { return window_; }

    // Candidate vanishing-operator coefficients from generator metadata
    // (recurrence coefficients, or a rational/algebraic growth ratio),
    // low-to-high as z_0..z_d; empty when no candidate is known.
    std::vector<Int> vanishing_candidate() const;

    // Cache slot for the cheap almost-sparseness gate used by extensions.
    mutable std::optional<bool> quick_almost_sparse;

    std::string form;              // closed-form tag: power | factorial | affine
    Int cf_base = 0;               // power base
    long cf_shift = 0;             // factorial index shift
    Int cf_a = 0, cf_b = 0;        // affine r_n = a*n + b
    std::vector<Int> rec_coeffs;   // recurrence
    std::vector<Int> rec_initial;

private:
    SparseSequence() = default;
    void fill_window_and_check();

    std::string name_;
    Gen gen_ = Gen::Table;
    int horizon_ = 64;
    int stability_ = 8;
    ThetaInfo theta_;
    std::vector<Int> window_;
};

// ---------------------------------------------------------------- operators

// Finite integer combination of shift powers: A = sum_i c_i S^i.
// Only nonzero coefficients are stored.
struct Operator {
    std::map<int, Int> c;

    static Operator zero() { return {}; }
    static Operator shift(int i, Int coeff = 1);

    bool is_zero() const { return c.empty(); }
    int min_support() const; // 0 when zero
    int max_support() const;
    int reach() const;       // max(|min_support|, |max_support|)

    Operator operator+(const Operator& o) const;
    Operator operator-(const Operator& o) const;
    Operator operator-() const;
    Operator scaled(const Int& k) const;
    // A composed with S^z: indices move by z.
    Operator shifted(int z) const;

    bool operator==(const Operator& o) const { return c == o.c; }

    // A(r_n) = sum_i c_i * r_{n+i}; every touched index must lie in the window.
    Int eval(const SparseSequence& seq, int n) const;

    std::string to_string() const;
    json to_json() const;           // sorted [index, coeff] pairs
    static Operator from_json(const json& j);
};

// Operator literals: signed integer combinations of S^i tokens,
// e.g. "S^2 - S^1 - S^0", "S - 2", "3*S^-1 + 2".
Operator parse_operator(const std::string& text);

// ---------------------------------------------------------------- comparison

enum class Cmp { GT, LT, EQ, UNKNOWN };

const char* cmp_name(Cmp c);

struct CompareResult {
    Cmp verdict = Cmp::UNKNOWN;
    // Smallest window index from which every sampled comparison agrees with
    // the verdict; meaningful only when verdict != UNKNOWN.
    int witness_from = 0;
};

// Eventual comparison of A and B along the sequence, decided by the sign of
// A(r_n) - B(r_n) on [stability, horizon] (restricted to evaluable n).
// EQ requires the difference to vanish identically there.
CompareResult op_compare_ae(const Operator& A, const Operator& B,
                            const SparseSequence& seq);

// Least delta <= delta_max with A(S^delta(r_n)) > B(S^delta(r_n)) + r_n on
// the whole verdict window. Requires A >_ae B.
std::optional<int> delta_witness(const Operator& A, const Operator& B,
                                 const SparseSequence& seq, int delta_max = 12);

// Growth bound for A >_ae 0: either A agrees with a single shift eventually,
// or it sits strictly between two consecutive shifts.
struct BoundResult {
    int m = 0;
    bool exact = false; // true: A =_ae S^m; false: S^m <_ae A <_ae S^{m+1}
};

BoundResult op_bound(const Operator& A, const SparseSequence& seq,
                     int m_lo = -32, int m_hi = 32);

// ------------------------------------------------------------------- degree

struct DegreeCertificate {
    int d = 0;
    Operator op; // support [0, d], nonzero ends, vanishes on the window
};

// Minimal order d <= d_max such that some integer-coefficient operator with
// support [0, d] vanishes identically on [stability, horizon - d]. Existence
// at each order is decided by an exact nullspace computation over the window
// matrix, so NoCertificate (nullopt) rules out every integer operator of
// order <= d_max on this window, not merely small-coefficient ones.
std::optional<DegreeCertificate> degree(const SparseSequence& seq,
                                        int d_max = 4);

// m * S^z =_ae sum_{i<d} w_i S^i, obtained by unrolling the vanishing
// operator; m >= 1 and the identity is re-verified on the window.
struct ShiftBasis {
    Int m;
    std::vector<Int> w; // size d
};

ShiftBasis shift_basis(const SparseSequence& seq, int z,
                       const DegreeCertificate& cert);

// ---------------------------------------------------- almost-sparse sweeps

// Sweep verdict for the two defining conditions, over every operator pair
// (A, B) with support in [-reach, reach] and |coefficients| <= coeff_max.
// Verdicts/witnesses depend only on the difference C = A - B, so the sweep
// enumerates difference operators (|coeffs| <= 2*coeff_max) and reports
// failing pairs by splitting C back into halves.
struct AlmostSparseReport {
    enum class Verdict { PASS, FAIL, INCONCLUSIVE };
    Verdict verdict = Verdict::INCONCLUSIVE;

    long long pairs_distinct = 0; // distinct difference operators checked
    long long count_gt = 0, count_lt = 0, count_eq = 0, count_unknown = 0;
    int max_delta_used = 0;
    int delta_max = 0;

    // First definite condition-2 violation: A >_ae B but no shift witness.
    bool has_violation = false;
    Operator violation_A, violation_B;

    // First trichotomy UNKNOWN (sign change inside the verdict window).
    bool has_unknown = false;
    Operator unknown_A, unknown_B;

    json to_json() const;
};

AlmostSparseReport verify_almost_sparse(const SparseSequence& seq,
                                        int reach = 2, int coeff_max = 4,
                                        int delta_max = 12);

} // namespace sparse_arith
