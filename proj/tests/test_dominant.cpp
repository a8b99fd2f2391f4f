#include <doctest.h>

#include <random>

#include "sparse_arith/dominant.hpp"

using namespace sparse_arith;

namespace {

Ambient pow2_amb() {
    static Ambient amb = make_ambient(SparseSequence::power("pow2", 2));
    return amb;
}

Ambient fib_amb() {
    static Ambient amb = [] {
        auto seq = SparseSequence::recurrence("fibonacci", {1, 1}, {1, 2}, 64, 16);
        ThetaInfo t;
        t.kind = ThetaInfo::Kind::Algebraic;
        t.minpoly = {-1, -1, 1};
        seq.set_theta(t);
        return make_ambient(std::move(seq));
    }();
    return amb;
}

} // namespace

TEST_SUITE("dominant") {

TEST_CASE("monomial valuations") {
    auto v = monomial_val(Monomial{{1}, Rat(7)}, 7);
    CHECK(v.offset == 1);
    CHECK(v.exps == std::vector<int>{1});
    auto one = monomial_val(Monomial{{0, 0}, Rat(1)}, 3);
    CHECK(one.offset == 0);
    CHECK(one.exps == std::vector<int>{0, 0});
    auto m = monomial_val(Monomial{{2, 1}, Rat(1)}, 3);
    CHECK(m.offset == 0);
    CHECK(m.exps == std::vector<int>{2, 1});
    CHECK(monomial_val(Monomial{{1}, Rat(5, 9)}, 3).offset == -2);
    CHECK_THROWS_AS(monomial_val(Monomial{{1}, Rat(0)}, 3),
                    precondition_violated);
}

TEST_CASE("dominant term extraction") {
    auto P = parse_poly("X0^2 + 7*X0", 3, pow2_amb(), 1);
    auto m = dominant_term(P);
    CHECK(m.exps == std::vector<int>{1});
    CHECK(m.coeff == 7);

    auto single = dominant_term(parse_poly("5*X0", 3, pow2_amb(), 1));
    CHECK(single.coeff == 5);

    auto f = dominant_term(parse_poly("X0*X1 + 5*X1", 2, fib_amb(), 2));
    CHECK(f.exps == std::vector<int>{0, 1});
    CHECK(f.coeff == 5);

    CHECK_THROWS_AS(dominant_term(make_poly(3, pow2_amb(), 1, {})),
                    precondition_violated);
}

TEST_CASE("bounded-gap collisions surface instead of guessing") {
    // Over the doubling scale r_{n+1} = 2 r_n, so X1 and X0^2 grow alike.
    auto clash = parse_poly("X1 + X0^2", 3, pow2_amb(), 2);
    CHECK_THROWS_AS(dominant_term(clash), no_dominant);
    // A strictly smaller term still dominates past colliding non-minimal ones.
    auto ok = parse_poly("X0 + X1 + X0^2", 3, pow2_amb(), 2);
    CHECK(dominant_term(ok).exps == std::vector<int>{1, 0});
    // Constant offsets never rescue a bounded gap.
    auto off = parse_poly("9*X1 + X0^2", 3, pow2_amb(), 2);
    CHECK_THROWS_AS(dominant_term(off), no_dominant);
}

TEST_CASE("derived quantities from the dominant term") {
    auto P = parse_poly("X0^2 + 7*X0", 3, pow2_amb(), 1);
    auto pi = poly_pi(P);
    CHECK(pi.coeff == 1); // unit projection of 7 at p=3
    CHECK(pi.exps == std::vector<int>{1});
    auto fv = poly_vp(P);
    CHECK(fv.offset == 0);
    CHECK(fv.exps == std::vector<int>{1});
    CHECK(fv.eval(*pow2_amb(), 12) == 4096);

    auto table = pn_cosets(3, 2);
    // Even exponent r_N: class of p^{r_N} * 7 is the class of 7, a square.
    CHECK(poly_pn_class(P, table, 12) == 1);
    CHECK(poly_pn_class(P, table, 8) == pn_class(instantiate(P, 8), table));
}

TEST_CASE("exact instantiation") {
    CHECK(instantiate(parse_poly("X0 + 1", 2, pow2_amb(), 1), 3) == 257);
    CHECK(instantiate(parse_poly("1", 2, pow2_amb(), 1), 3) == 1);
    CHECK(instantiate(parse_poly("7*X0", 3, pow2_amb(), 1), 12) ==
          Rat(7) * pow_rat(3, 4096));
    CHECK_THROWS_AS(instantiate(parse_poly("X0^3", 3, pow2_amb(), 1), 40),
                    size_budget_exceeded);
    CHECK_THROWS_AS(instantiate(parse_poly("X0", 3, pow2_amb(), 1), 64),
                    index_beyond_horizon);
    CHECK(default_index(parse_poly("X0", 3, pow2_amb(), 1)) == 13);
    CHECK(default_index(parse_poly("X0", 2, fib_amb(), 2)) == 17);
}

TEST_CASE("serialization round-trip") {
    auto P = parse_poly("X0^2*X1 - 3/2*X1 + 5", 2, fib_amb(), 2);
    auto j = P.to_json();
    CHECK(j["seq"] == "fibonacci");
    auto Q = poly_from_json(j, fib_amb());
    CHECK(Q.terms == P.terms);
    CHECK(Q.d == P.d);
    CHECK(Q.p == P.p);
    CHECK_THROWS_AS(parse_poly("X2", 3, pow2_amb(), 2), syntax_error);
    CHECK_THROWS_AS(parse_poly("X0 + ", 3, pow2_amb(), 1), syntax_error);
    CHECK_THROWS_AS(make_poly(4, pow2_amb(), 1, {{{1}, Rat(1)}}),
                    precondition_violated);
}

static void oracle_sweep(Ambient amb, int d, const Int& p,
                         const std::vector<int>& depths, unsigned seed) {
    const SparseSequence& seq = *amb;
    auto t2 = pn_cosets(p, 2);
    auto t3 = pn_cosets(p, 3);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> ncoef(-1000, 1000);
    std::uniform_int_distribution<int> nden(1, 3);
    std::uniform_int_distribution<int> nexp(0, 3);
    std::uniform_int_distribution<int> nterms(1, 3);

    int produced = 0;
    while (produced < 100) {
        std::map<std::vector<int>, Rat> terms;
        int want = nterms(rng);
        for (int t = 0; t < want; ++t) {
            std::vector<int> exps(static_cast<std::size_t>(d));
            int total = 0;
            for (auto& e : exps) {
                e = nexp(rng);
                total += e;
            }
            if (total > 3) continue;
            Rat c(ncoef(rng), nden(rng));
            c.canonicalize();
            terms[exps] += c;
        }
        SparsePoly P = make_poly(p, amb, d, std::move(terms));
        if (P.is_zero()) continue;
        ++produced;

        Monomial dom = dominant_term(P);
        FormalValuation fv = poly_vp(P);
        Monomial pim = poly_pi(P);
        for (int N : depths) {
            Rat inst = instantiate(P, N);
            CHECK(inst != 0); // algebraic-independence proxy
            Int v = fv.eval(seq, N);
            CHECK(vp(inst, p) == Valuation::of(v.get_si()));
            CHECK(pi_value(inst, p) == pow_rat(p, v.get_si()));
            // The symbolic unit projection instantiates to the same value.
            Int esum(0);
            for (std::size_t i = 0; i < pim.exps.size(); ++i) {
                esum += Int(pim.exps[i]) * seq.term(N + static_cast<int>(i));
            }
            CHECK(pim.coeff * pow_rat(p, esum.get_si()) == pi_value(inst, p));
            CHECK(poly_pn_class(P, t2, N) == pn_class(inst, t2));
            CHECK(poly_pn_class(P, t3, N) == pn_class(inst, t3));
        }
        // Dominance margin grows past any fixed bound at the deep index.
        int deep = depths.back();
        Int vdom = fv.eval(seq, deep);
        for (const auto& [exps, coeff] : P.terms) {
            if (exps == dom.exps) continue;
            Int gap = monomial_val(Monomial{exps, coeff}, p).eval(seq, deep) - vdom;
            CHECK(gap > 1);
            CHECK(gap > 10);
            CHECK(gap > 100);
        }
    }
}

TEST_CASE("instantiation oracle agrees on the doubling scale") {
    oracle_sweep(pow2_amb(), 1, 3, {8, 12}, 4242);
}

TEST_CASE("instantiation oracle agrees on the fibonacci scale") {
    oracle_sweep(fib_amb(), 2, 2, {12, 17}, 515151);
}

} // TEST_SUITE
