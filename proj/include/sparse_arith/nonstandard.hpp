#pragma once

// One-generator extension of the integers by a formal element b living
// beyond the verification window of a scale sequence: elements are A(b) + a
// for a shift operator A and an integer offset a. The module decides sign,
// order, magnitude class, the floor map and its shifts, and membership in
// the scale, all through eventual comparisons of operators on the window.

#include <memory>
#include <optional>

#include "sparse_arith/errors.hpp"
#include "sparse_arith/sequences.hpp"
#include "sparse_arith/zline.hpp"

namespace sparse_arith {

// Shared handle to the scale a family of extension elements lives over.
using Ambient = std::shared_ptr<const SparseSequence>;

// Wraps a sequence as an extension ambient. Runs (once, cached) a small
// eventual-comparison sweep and rejects sequences that fail it, since the
// extension's order theory is only meaningful over such scales.
Ambient make_ambient(SparseSequence seq);

struct ExtElement {
    Operator A; // applied to the formal generator
    Int a;      // standard offset
    Ambient ambient;

    // Componentwise (syntactic) equality; semantic equality is
    // ext_compare(...) == Cmp::EQ.
    bool operator==(const ExtElement& o) const;

    json to_json() const; // {operator: [[i, z_i]...], offset, seq}
};

// Builds an element over a gated ambient.
ExtElement make_ext(Ambient ambient, Operator A, Int a);

ExtElement ext_add(const ExtElement& e1, const ExtElement& e2);
ExtElement ext_neg(const ExtElement& e);

enum class ExtSign { Positive, Zero, Negative };
const char* ext_sign_name(ExtSign s);

// Sign of A(b) + a: the operator part dominates any standard offset, so the
// sign is that of A's eventual comparison with zero, falling back to the
// integer offset only when A vanishes eventually.
ExtSign ext_sign(const ExtElement& e);

// Order via the sign of the difference (GT / EQ / LT).
Cmp ext_compare(const ExtElement& e1, const ExtElement& e2);

enum class ExtApprox { Approx, LL, GG, IncomparableNonpositive };
const char* ext_approx_name(ExtApprox s);

// Magnitude classes for positive elements: standard elements sit strictly
// below every element with a nonvanishing operator part, and elements on the
// same side of that divide are within finitely many shifts of each other.
ExtApprox ext_approx(const ExtElement& e1, const ExtElement& e2);

// Floor onto the scale: r_0 for nonpositive elements, the window floor of
// the offset for eventually-standard elements, and S^z(b) with
// S^z(b) <= e < S^{z+1}(b) otherwise (z located by the growth bound of A).
ExtElement ext_lambda(const ExtElement& e);
// One shift above / below the floor.
ExtElement ext_succ(const ExtElement& e);
ExtElement ext_pred(const ExtElement& e);

struct InRResult {
    enum class Kind { InBase, IsShift, NotInR };
    Kind kind = Kind::NotInR;
    Int value; // InBase: the scale member the element equals
    int z = 0; // IsShift: the element equals S^z(generator)

    json to_json() const;
};

// Membership of the element in the scale itself.
InRResult ext_in_R(const ExtElement& e);

// Substitutes r_N for the generator and evaluates to an integer; every
// shifted index must stay inside the window. Default N is the deepest index
// that keeps the element's own shifts evaluable.
Int ext_instantiate(const ExtElement& e, std::optional<int> N = std::nullopt);

} // namespace sparse_arith
