#pragma once

// Exact integer/rational arithmetic used throughout: GMP classes plus a
// handful of helpers (powers, p-adic valuation, JSON-safe encoding).

#include <gmpxx.h>

#include <limits>
#include <optional>
#include <string>

#include "sparse_arith/errors.hpp"

#include <json.hpp>

namespace sparse_arith {

using Int = mpz_class;
using Rat = mpq_class;
using json = nlohmann::ordered_json;

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// p^e for possibly negative e, as an exact rational.
inline Rat pow_rat(const Int& base, long e) {
    if (e >= 0) return Rat(pow_int(base, static_cast<unsigned long>(e)));
    Rat r(1, pow_int(base, static_cast<unsigned long>(-e)));
    r.canonicalize();
    return r;
}

// Multiplicity of p in a nonzero integer.
inline long multiplicity(const Int& x, const Int& p) {
    Int rest;
    return static_cast<long>(
        mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

// p-adic valuation with the conventional +inf for zero.
struct Valuation {
    bool infinite = false;
    long v = 0;

    static Valuation inf() { return {true, 0}; }
    static Valuation of(long value) { return {false, value}; }

    bool operator==(const Valuation& o) const {
        return infinite == o.infinite && (infinite || v == o.v);
    }
    bool operator<(const Valuation& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return v < o.v;
    }
    bool operator<=(const Valuation& o) const { return *this < o || *this == o; }
};

inline Valuation vp_rat(const Rat& x, const Int& p) {
    if (x == 0) return Valuation::inf();
    long vn = multiplicity(x.get_num(), p);
    long vd = multiplicity(x.get_den(), p);
    return Valuation::of(vn - vd);
}

inline bool fits_int64(const Int& x) {
    return mpz_fits_slong_p(x.get_mpz_t()) != 0;
}

// Integers render as JSON numbers when they fit in 64 bits and as decimal
// strings otherwise, so output stays exact and deterministic.
inline json int_to_json(const Int& x) {
    if (fits_int64(x)) {
        return json(static_cast<long long>(mpz_get_si(x.get_mpz_t())));
    }
    return json(x.get_str());
}

inline json rat_to_json(const Rat& q) {
    if (q.get_den() == 1) return int_to_json(q.get_num());
    json j;
    j["num"] = int_to_json(q.get_num());
    j["den"] = int_to_json(q.get_den());
    return j;
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Int(j.get<std::string>());
    throw registry_error("expected integer (number or decimal string)");
}

// Inverse of rat_to_json: accepts a plain integer encoding or {num, den}.
inline Rat rat_from_json(const json& j) {
    if (j.is_object()) {
        Int num = int_from_json(j.at("num"));
        Int den = int_from_json(j.at("den"));
        if (den == 0) throw division_by_zero("zero denominator in rational");
        Rat r(num, den);
        r.canonicalize();
        return r;
    }
    return Rat(int_from_json(j));
}

// Parses "7", "-7", or "3/4" into an exact rational.
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Int whole(s);
            return Rat(whole);
        }
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw division_by_zero("zero denominator in '" + s + "'");
        Rat r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw syntax_error("bad rational literal '" + s + "'", 0);
    }
}

inline int sign_of(const Int& x) { return sgn(x); }

} // namespace sparse_arith
