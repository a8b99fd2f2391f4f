#include "sparse_arith/nonstandard.hpp"

namespace sparse_arith {

namespace {

// Cheap cached sweep: small reach and coefficients, enough to reject scales
// (like the identity) whose order theory the extension cannot stand on.
void require_gate(const SparseSequence& seq) {
    if (!seq.quick_almost_sparse.has_value()) {
        auto report = verify_almost_sparse(seq, /*reach=*/1, /*coeff_max=*/2);
        seq.quick_almost_sparse =
            report.verdict == AlmostSparseReport::Verdict::PASS;
    }
    if (!*seq.quick_almost_sparse) {
        throw invalid_sequence("sequence '" + seq.name() +
                               "' fails the shift-domination sweep required "
                               "of an extension ambient");
    }
}

void require_same_ambient(const ExtElement& e1, const ExtElement& e2) {
    if (e1.ambient->name() != e2.ambient->name()) {
        throw ambient_mismatch("elements live over '" + e1.ambient->name() +
                               "' and '" + e2.ambient->name() + "'");
    }
}

// Eventual comparison of the operator part with zero; UNKNOWN is fatal.
Cmp operator_class(const ExtElement& e) {
    auto res = op_compare_ae(e.A, Operator::zero(), *e.ambient);
    if (res.verdict == Cmp::UNKNOWN) {
        throw undecidable_on_window(
            "operator part has no stable sign on the window: " +
            e.A.to_string());
    }
    return res.verdict;
}

ExtElement standard(const ExtElement& like, Int value) {
    return ExtElement{Operator::zero(), std::move(value), like.ambient};
}

ExtElement generator_shift(const ExtElement& like, int z) {
    return ExtElement{Operator::shift(z), 0, like.ambient};
}

} // namespace

Ambient make_ambient(SparseSequence seq) {
    auto amb = std::make_shared<const SparseSequence>(std::move(seq));
    require_gate(*amb);
    return amb;
}

bool ExtElement::operator==(const ExtElement& o) const {
    return A == o.A && a == o.a && ambient->name() == o.ambient->name();
}

json ExtElement::to_json() const {
    json j;
    j["operator"] = A.to_json();
    j["offset"] = int_to_json(a);
    j["seq"] = ambient->name();
    return j;
}

ExtElement make_ext(Ambient ambient, Operator A, Int a) {
    if (!ambient) throw precondition_violated("extension element needs an ambient");
    require_gate(*ambient);
    return ExtElement{std::move(A), std::move(a), std::move(ambient)};
}

ExtElement ext_add(const ExtElement& e1, const ExtElement& e2) {
    require_same_ambient(e1, e2);
    return ExtElement{e1.A + e2.A, e1.a + e2.a, e1.ambient};
}

ExtElement ext_neg(const ExtElement& e) {
    return ExtElement{-e.A, -e.a, e.ambient};
}

const char* ext_sign_name(ExtSign s) {
    switch (s) {
    case ExtSign::Positive: return "positive";
    case ExtSign::Zero: return "zero";
    case ExtSign::Negative: return "negative";
    }
    return "?";
}

ExtSign ext_sign(const ExtElement& e) {
    switch (operator_class(e)) {
    case Cmp::GT: return ExtSign::Positive;
    case Cmp::LT: return ExtSign::Negative;
    default: break;
    }
    // Operator part vanishes eventually: the element is the integer offset.
    int s = sign_of(e.a);
    if (s > 0) return ExtSign::Positive;
    if (s < 0) return ExtSign::Negative;
    return ExtSign::Zero;
}

Cmp ext_compare(const ExtElement& e1, const ExtElement& e2) {
    switch (ext_sign(ext_add(e1, ext_neg(e2)))) {
    case ExtSign::Positive: return Cmp::GT;
    case ExtSign::Negative: return Cmp::LT;
    case ExtSign::Zero: return Cmp::EQ;
    }
    return Cmp::UNKNOWN;
}

const char* ext_approx_name(ExtApprox s) {
    switch (s) {
    case ExtApprox::Approx: return "approx";
    case ExtApprox::LL: return "far-below";
    case ExtApprox::GG: return "far-above";
    case ExtApprox::IncomparableNonpositive: return "incomparable-nonpositive";
    }
    return "?";
}

ExtApprox ext_approx(const ExtElement& e1, const ExtElement& e2) {
    require_same_ambient(e1, e2);
    if (ext_sign(e1) != ExtSign::Positive || ext_sign(e2) != ExtSign::Positive) {
        return ExtApprox::IncomparableNonpositive;
    }
    // Positive, so each operator part is eventually positive or vanishes.
    bool std1 = operator_class(e1) == Cmp::EQ;
    bool std2 = operator_class(e2) == Cmp::EQ;
    if (std1 == std2) return ExtApprox::Approx;
    return std1 ? ExtApprox::LL : ExtApprox::GG;
}

ExtElement ext_lambda(const ExtElement& e) {
    ExtSign s = ext_sign(e);
    if (s != ExtSign::Positive) {
        // Everything at or below zero floors to the first scale element.
        return standard(e, e.ambient->term(0));
    }
    if (operator_class(e) == Cmp::EQ) {
        return standard(e, lambda_z(e.a, *e.ambient));
    }
    // Eventually positive operator part: locate the shift band of A. The
    // offset moves the element only within (or just below) that band, since
    // gaps between consecutive shifts of the generator dwarf any integer.
    BoundResult bound = op_bound(e.A, *e.ambient);
    int z = bound.m;
    if (bound.exact && e.a < 0) z = bound.m - 1;
    return generator_shift(e, z);
}

namespace {

// Shifts the floor of e by one step in either direction.
ExtElement floor_neighbor(const ExtElement& e, int step) {
    ExtElement l = ext_lambda(e);
    if (l.A.is_zero()) {
        Int v = step > 0 ? succ_z(l.a, *e.ambient) : pred_z(l.a, *e.ambient);
        return standard(e, v);
    }
    return generator_shift(e, l.A.min_support() + step);
}

} // namespace

ExtElement ext_succ(const ExtElement& e) { return floor_neighbor(e, +1); }
ExtElement ext_pred(const ExtElement& e) { return floor_neighbor(e, -1); }

json InRResult::to_json() const {
    json j;
    switch (kind) {
    case Kind::InBase:
        j["kind"] = "in-base";
        j["value"] = int_to_json(value);
        break;
    case Kind::IsShift:
        j["kind"] = "generator-shift";
        j["z"] = z;
        break;
    case Kind::NotInR:
        j["kind"] = "outside";
        break;
    }
    return j;
}

InRResult ext_in_R(const ExtElement& e) {
    InRResult r;
    switch (operator_class(e)) {
    case Cmp::EQ:
        // A standard integer: in the scale iff it is its own floor.
        if (e.a >= e.ambient->term(0) && lambda_z(e.a, *e.ambient) == e.a) {
            r.kind = InRResult::Kind::InBase;
            r.value = e.a;
        }
        return r;
    case Cmp::GT: {
        BoundResult bound = op_bound(e.A, *e.ambient);
        if (bound.exact && e.a == 0) {
            r.kind = InRResult::Kind::IsShift;
            r.z = bound.m;
        }
        return r;
    }
    default:
        // Eventually negative: below every scale element.
        return r;
    }
}

Int ext_instantiate(const ExtElement& e, std::optional<int> N) {
    int n = N.value_or(e.ambient->horizon() - e.A.reach());
    return e.A.eval(*e.ambient, n) + e.a;
}

} // namespace sparse_arith
