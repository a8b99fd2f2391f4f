#include "sparse_arith/dominant.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sparse_arith {

namespace {

Operator induced_operator(const std::vector<int>& exps) {
    Operator A;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] != 0) A = A + Operator::shift(static_cast<int>(i), exps[i]);
    }
    return A;
}

// Order of monomial valuations along the scale: LT means the left exponent
// vector's valuation is eventually smaller, with unbounded margin.
Cmp vec_compare(const std::vector<int>& a, const std::vector<int>& b,
                const SparseSequence& seq) {
    return op_compare_ae(induced_operator(a), induced_operator(b), seq).verdict;
}

std::string exps_to_string(const std::vector<int>& exps) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0) continue;
        if (any) os << "*";
        os << "X" << i;
        if (exps[i] != 1) os << "^" << exps[i];
        any = true;
    }
    if (!any) os << "1";
    return os.str();
}

} // namespace

Int FormalValuation::eval(const SparseSequence& seq, int N) const {
    Int v(offset);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] != 0) v += Int(exps[i]) * seq.term(N + static_cast<int>(i));
    }
    return v;
}

json FormalValuation::to_json() const {
    json j;
    j["offset"] = offset;
    j["exps"] = exps;
    return j;
}

std::string Monomial::to_string() const {
    std::ostringstream os;
    bool unit_exps =
        std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
    if (coeff == 1 && !unit_exps) {
        os << exps_to_string(exps);
    } else if (coeff == -1 && !unit_exps) {
        os << "-" << exps_to_string(exps);
    } else {
        os << coeff.get_str();
        if (!unit_exps) os << "*" << exps_to_string(exps);
    }
    return os.str();
}

json SparsePoly::to_json() const {
    json j;
    j["p"] = int_to_json(p);
    j["seq"] = seq->name();
    j["d"] = d;
    j["terms"] = json::array();
    for (const auto& [exps, coeff] : terms) {
        j["terms"].push_back(
            json::array({exps, int_to_json(coeff.get_num()),
                         int_to_json(coeff.get_den())}));
    }
    return j;
}

std::string SparsePoly::to_string() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exps, coeff] : terms) {
        if (!first) os << (coeff >= 0 ? " + " : " - ");
        Rat shown = (!first && coeff < 0) ? Rat(-coeff) : coeff;
        os << Monomial{exps, shown}.to_string();
        first = false;
    }
    return os.str();
}

SparsePoly make_poly(Int p, Ambient seq, int d,
                     std::map<std::vector<int>, Rat> terms) {
    if (!seq) throw precondition_violated("polynomial needs an ambient scale");
    if (d < 1) throw precondition_violated("variable count must be positive");
    if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 32) == 0) {
        throw precondition_violated("modulus " + p.get_str() + " is not prime");
    }
    SparsePoly P;
    P.p = std::move(p);
    P.seq = std::move(seq);
    P.d = d;
    for (auto& [exps, coeff] : terms) {
        if (coeff == 0) continue;
        if (static_cast<int>(exps.size()) != d) {
            throw precondition_violated("exponent vector length " +
                                        std::to_string(exps.size()) +
                                        " does not match d=" + std::to_string(d));
        }
        for (int e : exps) {
            if (e < 0) throw precondition_violated("negative exponent");
        }
        P.terms.emplace(exps, coeff);
    }
    return P;
}

SparsePoly poly_from_json(const json& j, Ambient seq) {
    Int p = int_from_json(j.at("p"));
    int d = j.at("d").get<int>();
    std::map<std::vector<int>, Rat> terms;
    for (const auto& t : j.at("terms")) {
        std::vector<int> exps = t.at(0).get<std::vector<int>>();
        Rat c(int_from_json(t.at(1)), int_from_json(t.at(2)));
        c.canonicalize();
        auto [it, fresh] = terms.emplace(exps, c);
        if (!fresh) it->second += c;
    }
    return make_poly(std::move(p), std::move(seq), d, std::move(terms));
}

// ------------------------------------------------------------- poly parsing

namespace {

struct PolyParser {
    const std::string& s;
    std::size_t pos = 0;
    int d;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    long integer() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start) throw syntax_error("expected integer", pos);
        return std::stol(s.substr(start, pos - start));
    }

    // factor := integer [ "/" integer ] | "X" index [ "^" integer ]
    void factor(Monomial& m) {
        skip();
        if (pos >= s.size()) throw syntax_error("expected factor", pos);
        if (s[pos] == 'X' || s[pos] == 'x') {
            ++pos;
            long idx = integer();
            if (idx < 0 || idx >= d) {
                throw syntax_error("variable index out of range", pos);
            }
            long e = 1;
            if (eat('^')) e = integer();
            if (e < 0) throw syntax_error("negative exponent", pos);
            m.exps[static_cast<std::size_t>(idx)] += static_cast<int>(e);
        } else if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
            Rat c(integer());
            if (eat('/')) {
                long den = integer();
                if (den == 0) throw syntax_error("zero denominator", pos);
                c /= den;
            }
            m.coeff *= c;
        } else {
            throw syntax_error("expected coefficient or variable", pos);
        }
    }

    Monomial term() {
        Monomial m;
        m.exps.assign(static_cast<std::size_t>(d), 0);
        m.coeff = 1;
        factor(m);
        while (eat('*')) factor(m);
        return m;
    }

    std::map<std::vector<int>, Rat> parse() {
        std::map<std::vector<int>, Rat> terms;
        int sign = 1;
        if (eat('-')) sign = -1;
        for (;;) {
            Monomial m = term();
            Rat c = m.coeff * sign;
            auto [it, fresh] = terms.emplace(m.exps, c);
            if (!fresh) it->second += c;
            skip();
            if (eat('+')) {
                sign = 1;
            } else if (eat('-')) {
                sign = -1;
            } else {
                break;
            }
        }
        skip();
        if (pos != s.size()) throw syntax_error("unexpected trailing input", pos);
        return terms;
    }
};

} // namespace

SparsePoly parse_poly(const std::string& text, Int p, Ambient seq, int d) {
    PolyParser parser{text, 0, d};
    return make_poly(std::move(p), std::move(seq), d, parser.parse());
}

// ------------------------------------------------------------ dominant term

FormalValuation monomial_val(const Monomial& mono, const Int& p) {
    if (mono.coeff == 0) {
        throw precondition_violated("zero monomial has no valuation");
    }
    FormalValuation fv;
    fv.offset = vp_rat(mono.coeff, p).v;
    fv.exps = mono.exps;
    return fv;
}

Monomial dominant_term(const SparsePoly& P) {
    if (P.is_zero()) {
        throw precondition_violated("zero polynomial has no dominant term");
    }
    const SparseSequence& seq = *P.seq;
    auto best = P.terms.begin();
    for (auto it = std::next(P.terms.begin()); it != P.terms.end(); ++it) {
        Cmp c = vec_compare(it->first, best->first, seq);
        if (c == Cmp::UNKNOWN) {
            throw undecidable_on_window("monomial comparison unstable: " +
                                        exps_to_string(it->first) + " vs " +
                                        exps_to_string(best->first));
        }
        if (c == Cmp::LT) best = it;
    }
    for (auto it = P.terms.begin(); it != P.terms.end(); ++it) {
        if (it == best) continue;
        Cmp c = vec_compare(it->first, best->first, seq);
        if (c != Cmp::GT) {
            // Bounded gap between distinct exponent vectors: the valuations
            // stay within a constant of each other, so neither term wins by
            // an ever-growing margin.
            throw no_dominant("terms " + exps_to_string(best->first) + " and " +
                              exps_to_string(it->first) +
                              " have eventually equal scale growth");
        }
    }
    return Monomial{best->first, best->second};
}

FormalValuation poly_vp(const SparsePoly& P) {
    return monomial_val(dominant_term(P), P.p);
}

Monomial poly_pi(const SparsePoly& P) {
    Monomial m = dominant_term(P);
    m.coeff = pi_value(m.coeff, P.p);
    return m;
}

Int poly_pn_class(const SparsePoly& P, const CosetTable& table, int N) {
    if (table.p != P.p) {
        throw precondition_violated("coset table prime does not match");
    }
    Monomial m = dominant_term(P);
    FormalValuation fv = monomial_val(m, P.p);
    Int v = fv.eval(*P.seq, N);
    // Only the unit part of the coefficient and the valuation mod n matter.
    Int jmod = v % table.n;
    if (jmod < 0) jmod += table.n;
    Rat unit = m.coeff * pow_rat(P.p, -fv.offset);
    long e;
    if (!fits_int64(jmod)) throw size_budget_exceeded("valuation out of range");
    e = static_cast<long>(jmod.get_si());
    return pn_class(unit * pow_rat(P.p, e), table);
}

Rat instantiate(const SparsePoly& P, int N, long max_exponent) {
    const SparseSequence& seq = *P.seq;
    if (N < 0 || N + P.d > seq.horizon()) {
        throw index_beyond_horizon("instantiation index " + std::to_string(N) +
                                   " leaves the window");
    }
    Rat total(0);
    for (const auto& [exps, coeff] : P.terms) {
        Int e(0);
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] != 0) {
                e += Int(exps[i]) * seq.term(N + static_cast<int>(i));
            }
        }
        if (e > max_exponent) {
            throw size_budget_exceeded("monomial exponent " + e.get_str() +
                                       " exceeds budget " +
                                       std::to_string(max_exponent));
        }
        if (!fits_int64(e)) throw size_budget_exceeded("exponent overflow");
        total += coeff * pow_rat(P.p, static_cast<long>(e.get_si()));
    }
    return total;
}

int default_index(const SparsePoly& P) {
    const SparseSequence& seq = *P.seq;
    const Int budget(1 << 14);
    int best = -1;
    for (int n = 0; n + P.d <= seq.horizon(); ++n) {
        if (seq.term(n + P.d) <= budget) best = n;
    }
    if (best < 0) {
        throw size_budget_exceeded(
            "no instantiation index fits the exponent budget");
    }
    return best;
}

} // namespace sparse_arith
