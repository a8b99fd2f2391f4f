#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "sparse_arith/varsep.hpp"

using namespace sparse_arith;

namespace {

const SparseSequence& pow2x() {
    static SparseSequence s = SparseSequence::power("pow2x", 2, 160, 8);
    return s;
}

const SparseSequence& pow2s() {
    static SparseSequence s = SparseSequence::power("pow2", 2);
    return s;
}

CutSequence cs1(const std::vector<Rat>& vals, size_t cut_pos,
                const std::string& var = "x") {
    CutSequence cs;
    cs.vars = {var};
    for (size_t i = 0; i < vals.size(); ++i) {
        CutSequence::Point pt{static_cast<long>(i), {vals[i]}};
        if (i < cut_pos) cs.left.push_back(pt);
        else if (i == cut_pos) cs.cut = pt;
        else cs.right.push_back(pt);
    }
    return cs;
}

// x_k = 2^(10+k) for k = 0..20, cut at k = 10.
CutSequence doubling_cut() {
    std::vector<Rat> vals;
    for (int k = 0; k <= 20; ++k) vals.emplace_back(pow_int(2, 10 + k));
    return cs1(vals, 10);
}

TermPtr zt(const std::string& s) { return parse_term(s, Dialect::Z); }
TermPtr pt(const std::string& s) { return parse_term(s, Dialect::Padic); }

bool vars_subset(const TermPtr& t, const std::set<std::string>& allowed) {
    std::set<std::string> vs;
    term_vars(t, vs);
    return std::all_of(vs.begin(), vs.end(),
                       [&](const std::string& v) { return allowed.count(v) > 0; });
}

bool trace_has(const Separation& sep, const std::string& entry) {
    return std::find(sep.case_trace.begin(), sep.case_trace.end(), entry) !=
           sep.case_trace.end();
}

// Structural postconditions every successful separation must satisfy.
void check_split_shape(const Separation& sep, const CutSequence& cs) {
    std::set<std::string> tuple(cs.vars.begin(), cs.vars.end());
    std::set<std::string> single{sep.yvar};
    if (sep.form == Separation::Form::Fraction) {
        REQUIRE(!sep.num.empty());
        REQUIRE(!sep.den.empty());
        for (const auto& pr : sep.num) {
            CHECK(vars_subset(pr.u, tuple));
            CHECK(vars_subset(pr.r, single));
        }
        for (const auto& pr : sep.den) {
            CHECK(vars_subset(pr.u, tuple));
            CHECK(vars_subset(pr.r, single));
        }
    } else {
        CHECK(vars_subset(sep.u, tuple));
        CHECK(vars_subset(sep.r, single));
    }
    CHECK(!sep.retained_left.empty());
    CHECK(!sep.retained_right.empty());
    CHECK(sep.cut_index == cs.cut.index);
    std::set<long> orig_left, orig_right;
    for (const auto& p : cs.left) orig_left.insert(p.index);
    for (const auto& p : cs.right) orig_right.insert(p.index);
    for (long i : sep.retained_left) CHECK(orig_left.count(i) == 1);
    for (long i : sep.retained_right) CHECK(orig_right.count(i) == 1);
}

Int zeval(const TermPtr& t, const std::map<std::string, Int>& env,
          const SparseSequence& seq) {
    return eval_term_z(t, env, seq);
}

} // namespace

TEST_SUITE("varsep") {

TEST_CASE("small singleton: the floor lands on the tuple side") {
    auto cs = doubling_cut();
    auto sep = separate_z(zt("L(x + y)"), cs, Int(3), pow2x());

    CHECK(sep.form == Separation::Form::Additive);
    CHECK(sep.dialect == Dialect::Z);
    CHECK(term_is_const(sep.r, 0));
    CHECK(render_term(sep.u) == "S(x - c1)");
    CHECK(sep.params.size() == 1);
    CHECK(sep.params.at("c1") == 1024);

    CHECK(sep.retained_left == std::vector<long>{9});
    CHECK(sep.retained_right.size() == 10);
    CHECK(trace_has(sep, "floor:dominant-tuple:step"));
    CHECK(verify_separation(zt("L(x + y)"), sep, cs, Rat(3), pow2x(), 2));
    check_split_shape(sep, cs);

    // On the surviving window the split agrees with the plain tuple floor.
    for (long k : sep.retained_left) {
        Int a = pow_int(2, 10 + k);
        CHECK(zeval(sep.u, {{"x", a}}, pow2x()) == lambda_z(a + 3, pow2x()));
    }
}

TEST_CASE("huge singleton: the floor lands on the singleton side") {
    auto cs = doubling_cut();
    Int b = pow_int(2, 100);
    auto sep = separate_z(zt("L(x + y)"), cs, b, pow2x());

    CHECK(term_is_const(sep.u, 0));
    CHECK(render_term(sep.r) == "L(c1 + y)");
    CHECK(sep.params.at("c1") == 1024);
    CHECK(sep.retained_left.size() == 9); // one sample harvested from the left
    CHECK(sep.retained_left.front() == 1);
    CHECK(sep.retained_right.size() == 10);
    CHECK(trace_has(sep, "floor:dominant-singleton:z=0"));
    CHECK(verify_separation(zt("L(x + y)"), sep, cs, Rat(b), pow2x(), 2));

    // The singleton side evaluates to the singleton's own floor.
    CHECK(zeval(sep.r, {{"y", b}}, pow2x()) == lambda_z(b, pow2x()));
}

TEST_CASE("floor-free terms separate with full retention") {
    auto cs = doubling_cut();
    auto sep = separate_z(zt("x - y + 2"), cs, Int(7), pow2x());
    CHECK(sep.params.empty());
    CHECK(sep.retained_left.size() == 10);
    CHECK(sep.retained_right.size() == 10);
    CHECK(verify_separation(zt("x - y + 2"), sep, cs, Rat(7), pow2x(), 2));
    check_split_shape(sep, cs);
}

TEST_CASE("step and reverse-step wrap the separated floor") {
    auto cs = doubling_cut();
    for (const char* txt : {"S(x + y)", "Sinv(x + y)", "S(L(x + y))"}) {
        CAPTURE(txt);
        auto sep = separate_z(zt(txt), cs, Int(3), pow2x());
        CHECK(verify_separation(zt(txt), sep, cs, Rat(3), pow2x(), 2));
        check_split_shape(sep, cs);
        CHECK(term_is_const(sep.r, 0)); // tuple side dominates for b = 3
    }
}

TEST_CASE("nonpositive floor arguments clamp to the window base") {
    std::vector<Rat> vals;
    for (int k = 0; k < 9; ++k) vals.emplace_back(-100 + 2 * k);
    auto cs = cs1(vals, 4);
    auto sep = separate_z(zt("L(x + y)"), cs, Int(3), pow2s());
    CHECK(term_is_const(sep.u, 0));
    CHECK(term_is_const(sep.r, 1)); // the window base of pow2
    CHECK(trace_has(sep, "floor:clamped"));
    CHECK(verify_separation(zt("L(x + y)"), sep, cs, Rat(3), pow2s(), 2));

    auto stepped = separate_z(zt("S(x + y)"), cs, Int(3), pow2s());
    CHECK(zeval(stepped.r, {{"y", Int(3)}}, pow2s()) == 2);
}

TEST_CASE("constant tuple family folds into the singleton floor") {
    // x - x + y has an identically zero tuple family that still mentions x,
    // so one left sample is harvested to pin the fold parameter.
    auto cs = doubling_cut();
    auto sep = separate_z(zt("L(x - x + y)"), cs, Int(1000), pow2x());
    CHECK(term_is_const(sep.u, 0));
    CHECK(sep.params.at("c1") == 0);
    CHECK(sep.retained_left.front() == 1);
    CHECK(trace_has(sep, "floor:constant-family"));
    CHECK(verify_separation(zt("L(x - x + y)"), sep, cs, Rat(1000), pow2x(), 2));

    // A tuple-free floor folds without spending any sample.
    auto pure = separate_z(zt("L(y + 3) + x"), cs, Int(1000), pow2x());
    CHECK(pure.params.empty());
    CHECK(pure.retained_left.size() == 10);
    CHECK(verify_separation(zt("L(y + 3) + x"), pure, cs, Rat(1000), pow2x(), 2));
}

TEST_CASE("singleton floors carry a uniform scale offset") {
    // One low sample to harvest, then samples one scale step above the base.
    std::vector<Rat> vals;
    vals.emplace_back(pow_int(2, 40));
    for (int k = 1; k <= 8; ++k) vals.emplace_back(3 * pow_int(2, 40) + k);
    auto cs = cs1(vals, 4);
    Int b = pow_int(2, 40);
    auto sep = separate_z(zt("L(x + y)"), cs, b, pow2x());
    CHECK(term_is_const(sep.u, 0));
    CHECK(render_term(sep.r) == "S(L(c1 + y))");
    CHECK(trace_has(sep, "floor:dominant-singleton:z=1"));
    CHECK(verify_separation(zt("L(x + y)"), sep, cs, Rat(b), pow2x(), 2));
}

TEST_CASE("sign changes across the window are rejected") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 10; ++k) vals.emplace_back(-50 + 10 * k);
    auto cs = cs1(vals, 5);
    CHECK_THROWS_AS(separate_z(zt("L(x + y)"), cs, Int(0), pow2s()),
                    not_monotone);
}

TEST_CASE("non-monotone tuple families are rejected") {
    std::vector<Rat> vals{100, 50, 200, 25, 400, 12, 800, 6, 1600, 3, 3200};
    auto cs = cs1(vals, 5);
    CHECK_THROWS_AS(separate_z(zt("L(x + y)"), cs, Int(3), pow2s()),
                    not_monotone);
}

TEST_CASE("a one-sample side cannot fund a harvest") {
    std::vector<Rat> vals{1024, 2048, 4096, 8192, 16384};
    auto cs = cs1(vals, 1); // single sample left of the cut
    CHECK_THROWS_AS(separate_z(zt("L(x + y)"), cs, Int(3), pow2s()),
                    window_exhausted);
}

TEST_CASE("nested floors drain the window until it exhausts") {
    auto cs = doubling_cut();
    // The inner floor shrinks the left side to one sample; the outer floor
    // then needs a harvest the window can no longer afford.
    CHECK_THROWS_AS(separate_z(zt("L(L(x + y) + y)"), cs, Int(3), pow2x()),
                    window_exhausted);

    // With a dominant singleton the inner result is tuple-free and the outer
    // floor folds without further harvesting.
    Int b = pow_int(2, 100);
    auto sep = separate_z(zt("L(L(x + y) + y)"), cs, b, pow2x());
    CHECK(term_is_const(sep.u, 0));
    CHECK(sep.r->kind == TermKind::Lambda);
    CHECK(verify_separation(zt("L(L(x + y) + y)"), sep, cs, Rat(b), pow2x(), 2));
}

TEST_CASE("values beyond the window horizon surface as errors") {
    auto cs = doubling_cut();
    CHECK_THROWS_AS(separate_z(zt("L(x + y)"), cs, pow_int(2, 100), pow2s()),
                    index_beyond_horizon);
}

TEST_CASE("unknown variables are rejected") {
    auto cs = doubling_cut();
    CHECK_THROWS_AS(separate_z(zt("w + y"), cs, Int(3), pow2x()),
                    unbound_variable);
    CHECK_THROWS_AS(separate_padic(pt("w * y"), cs, Rat(3), Int(2), pow2x()),
                    unbound_variable);
}

TEST_CASE("cut sequences validate and round-trip through JSON") {
    auto cs = doubling_cut();
    cs.cut.values[0] = Rat(1, 3); // rational sample values are legal
    auto j = cs.to_json();
    auto back = CutSequence::from_json(j);
    CHECK(back.vars == cs.vars);
    REQUIRE(back.left.size() == cs.left.size());
    REQUIRE(back.right.size() == cs.right.size());
    CHECK(back.cut.index == cs.cut.index);
    CHECK(back.cut.values[0] == Rat(1, 3));
    for (size_t i = 0; i < cs.left.size(); ++i) {
        CHECK(back.left[i].index == cs.left[i].index);
        CHECK(back.left[i].values == cs.left[i].values);
    }
    CHECK(back.to_json() == j);

    CHECK_THROWS_AS(CutSequence::from_json(json::object()), registry_error);

    CutSequence bad = doubling_cut();
    bad.left[3].values.push_back(Rat(1));
    CHECK_THROWS_AS(bad.validate(), precondition_violated);

    CutSequence reorder = doubling_cut();
    std::swap(reorder.left[0], reorder.left[1]);
    CHECK_THROWS_AS(reorder.validate(), precondition_violated);

    CutSequence empty_side = doubling_cut();
    empty_side.right.clear();
    CHECK_THROWS_AS(empty_side.validate(), precondition_violated);
}

TEST_CASE("separation JSON reports the split") {
    auto cs = doubling_cut();
    auto sep = separate_z(zt("L(x + y)"), cs, Int(3), pow2x());
    auto j = sep.to_json();
    CHECK(j["schema"] == 1);
    CHECK(j["form"] == "additive");
    CHECK(j["dialect"] == "z");
    CHECK(j["u"] == "S(x - c1)");
    CHECK(j["r"] == "0");
    CHECK(j["params"]["c1"] == 1024);
    CHECK(j["cut_index"] == 10);
    CHECK(j["retained_left"].size() == 1);
}

// ---------------------------------------------------------------------------
// Valuation decomposition
// ---------------------------------------------------------------------------

TEST_CASE("a single pair decomposes as itself") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 8; ++k) vals.emplace_back(pow_int(3, k) * (1 + 3 * k));
    auto cs = cs1(vals, 4);
    auto sep = decompose_valuation({pt("x")}, {pt("y")}, cs, Rat(45), Int(3),
                                   pow2x());
    CHECK(sep.form == Separation::Form::Product);
    CHECK(sep.dialect == Dialect::Padic);
    CHECK(term_equal(sep.u, Term::var("x")));
    CHECK(term_equal(sep.r, Term::var("y")));
}

TEST_CASE("the smallest valuation dominates the sum") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 10; ++k) vals.emplace_back(pow_int(2, k + 1));
    auto cs = cs1(vals, 5);
    Rat big(pow_int(2, 50));
    auto sep = decompose_valuation({pt("x"), pt("1")},
                                   {pt("1"), Term::constant(big)}, cs, Rat(9),
                                   Int(2), pow2x());
    CHECK(term_is_const(sep.r, 1)); // the huge fixed summand drops out
    CHECK(trace_has(sep, "valdec:increasing"));
    CHECK(sep.retained_right.size() == 4); // the top sample was harvested

    // The product carries the sum's valuation at every surviving sample.
    for (long k : sep.retained_left) {
        Rat xv(pow_int(2, k + 1));
        Rat total = xv + big;
        Rat uv = eval_term_padic(sep.u, {{"x", xv}}, 2, pow2x());
        CHECK(vp(total, 2) == vp(uv, 2));
    }
}

TEST_CASE("a constant dominance pattern folds into the singleton") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 8; ++k) vals.emplace_back(pow_int(2, k + 2));
    auto cs = cs1(vals, 4);
    auto sep = decompose_valuation({pt("x"), pt("1")}, {pt("1"), pt("1")}, cs,
                                   Rat(5), Int(2), pow2x());
    CHECK(term_is_const(sep.u, 1));
    CHECK(sep.params.at("c1") == 4); // harvested tuple ratio
    CHECK(trace_has(sep, "valdec:constant:0"));
    Rat rv = eval_term_padic(sep.r, {{"y", Rat(5)}}, 2, pow2x());
    CHECK(vp(rv, 2) == Valuation::of(0));
}

TEST_CASE("oscillating valuations refuse to decompose") {
    std::vector<Rat> vals{Rat(1, 3), Rat(9), Rat(1, 27), Rat(3), Rat(1, 243),
                          Rat(81), Rat(1, 2187)};
    auto cs = cs1(vals, 3);
    CHECK_THROWS_AS(decompose_valuation({pt("x"), pt("1")}, {pt("1"), pt("1")},
                                        cs, Rat(1), Int(3), pow2x()),
                    ambiguous_case);
}

TEST_CASE("exact cancellation at a sample is ambiguous") {
    std::vector<Rat> vals{Rat(-1), Rat(3), Rat(9), Rat(27), Rat(81)};
    auto cs = cs1(vals, 2);
    CHECK_THROWS_AS(decompose_valuation({pt("x"), pt("1")}, {pt("1"), pt("1")},
                                        cs, Rat(1), Int(3), pow2x()),
                    ambiguous_case);
}

TEST_CASE("vanishing pairs drop out; partial vanishing is ambiguous") {
    std::vector<Rat> zero_vals{0, 0, 0, 0, 0};
    auto cs = cs1(zero_vals, 2);
    auto sep = decompose_valuation({pt("x"), pt("1")}, {pt("1"), pt("7")}, cs,
                                   Rat(1), Int(2), pow2x());
    CHECK(term_is_const(sep.u, 1));
    CHECK(term_is_const(sep.r, 7));

    std::vector<Rat> partial{Rat(2), Rat(0), Rat(4), Rat(8), Rat(16)};
    auto cs2 = cs1(partial, 2);
    CHECK_THROWS_AS(decompose_valuation({pt("x"), pt("1")}, {pt("1"), pt("7")},
                                        cs2, Rat(1), Int(2), pow2x()),
                    ambiguous_case);
}

TEST_CASE("decomposition exhausts a one-sample right side") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 5; ++k) vals.emplace_back(pow_int(2, k + 1));
    auto cs = cs1(vals, 4); // right side has exactly one sample
    CHECK_THROWS_AS(
        decompose_valuation({pt("x"), pt("1")},
                            {pt("1"), Term::constant(Rat(pow_int(2, 50)))}, cs,
                            Rat(1), Int(2), pow2x()),
        window_exhausted);
}

// ---------------------------------------------------------------------------
// Multiplicative separation
// ---------------------------------------------------------------------------

namespace {

CutSequence padic_cut() {
    std::vector<Rat> vals;
    for (int k = 0; k <= 10; ++k) vals.emplace_back(pow_int(3, k) * (1 + 3 * k));
    return cs1(vals, 5);
}

} // namespace

TEST_CASE("a pure product splits exactly") {
    auto cs = padic_cut();
    auto sep = separate_padic(pt("x * y"), cs, Rat(45), Int(3), pow2x());
    CHECK(sep.form == Separation::Form::Product);
    CHECK(term_equal(sep.u, Term::var("x")));
    CHECK(term_equal(sep.r, Term::var("y")));
    CHECK(sep.params.empty());
    check_split_shape(sep, cs);
}

TEST_CASE("projection distributes over a product") {
    auto cs = padic_cut();
    auto sep = separate_padic(pt("pi(x * y)"), cs, Rat(45), Int(3), pow2x());
    CHECK(sep.form == Separation::Form::Product);
    CHECK(term_equal(sep.u, Term::pi(Term::var("x"))));
    CHECK(term_equal(sep.r, Term::pi(Term::var("y"))));
    CHECK(verify_separation(pt("pi(x * y)"), sep, cs, Rat(45), pow2x(), 3));
}

TEST_CASE("sums become separated fractions") {
    auto cs = padic_cut();
    auto sep = separate_padic(pt("x + y"), cs, Rat(45), Int(3), pow2x());
    CHECK(sep.form == Separation::Form::Fraction);
    REQUIRE(sep.num.size() == 2);
    REQUIRE(sep.den.size() == 1);
    CHECK(term_equal(sep.num[0].u, Term::var("x")));
    CHECK(term_is_const(sep.num[0].r, 1));
    CHECK(term_is_const(sep.num[1].u, 1));
    CHECK(term_equal(sep.num[1].r, Term::var("y")));
    CHECK(verify_separation(pt("x + y"), sep, cs, Rat(45), pow2x(), 3));
    check_split_shape(sep, cs);

    auto inv_sep = separate_padic(pt("inv(x + y)"), cs, Rat(45), Int(3), pow2x());
    CHECK(inv_sep.form == Separation::Form::Fraction);
    CHECK(inv_sep.den.size() == 2);
    CHECK(verify_separation(pt("inv(x + y)"), inv_sep, cs, Rat(45), pow2x(), 3));
}

TEST_CASE("scale maps transport to exponents: singleton dominant") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 10; ++k) vals.emplace_back(pow_int(3, k));
    auto cs = cs1(vals, 5);
    Rat b(pow_int(3, 1000));
    auto sep = separate_padic(pt("L(x * y)"), cs, b, Int(3), pow2x());
    CHECK(sep.form == Separation::Form::Product);
    CHECK(term_is_const(sep.u, 1));
    CHECK(render_term(sep.r) == "L(c1*pi(y))");
    Rat rv = eval_term_padic(sep.r, {{"y", b}}, 3, pow2x());
    CHECK(rv == Rat(pow_int(3, 512))); // floor of exponent 1000 on the 2-power scale
    CHECK(verify_separation(pt("L(x * y)"), sep, cs, b, pow2x(), 3));
}

TEST_CASE("scale maps transport to exponents: tuple dominant") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 13; ++k) vals.emplace_back(pow_int(3, 1L << (4 + k)));
    auto cs = cs1(vals, 10);
    Rat b(9); // exponent 2
    auto sep = separate_padic(pt("L(x * y)"), cs, b, Int(3), pow2x());
    CHECK(sep.form == Separation::Form::Product);
    CHECK(term_is_const(sep.r, 1));
    CHECK(render_term(sep.u) == "S(pi(x)*inv(c1))");
    CHECK(sep.params.at("c1") == Rat(pow_int(3, 16)));
    CHECK(sep.retained_left == std::vector<long>{9});
    CHECK(verify_separation(pt("L(x * y)"), sep, cs, b, pow2x(), 3));

    // Both factors are pure powers of p at every surviving sample.
    for (long k : sep.retained_left) {
        Rat xv(pow_int(3, 1L << (4 + k)));
        Rat uv = eval_term_padic(sep.u, {{"x", xv}}, 3, pow2x());
        CHECK(uv == pi_value(uv, 3));
    }
}

TEST_CASE("step maps wrap the transported floor") {
    std::vector<Rat> vals;
    for (int k = 0; k <= 10; ++k) vals.emplace_back(pow_int(3, k));
    auto cs = cs1(vals, 5);
    Rat b(pow_int(3, 1000));
    for (const char* txt : {"S(x * y)", "Sinv(x * y)"}) {
        CAPTURE(txt);
        auto sep = separate_padic(pt(txt), cs, b, Int(3), pow2x());
        CHECK(sep.form == Separation::Form::Product);
        CHECK(term_is_const(sep.u, 1)); // singleton dominates on this data
        CHECK(verify_separation(pt(txt), sep, cs, b, pow2x(), 3));
    }
}

TEST_CASE("projection of a vanishing argument is the unit") {
    auto cs = padic_cut();
    auto sep = separate_padic(pt("pi(x - x)"), cs, Rat(45), Int(3), pow2x());
    CHECK(sep.form == Separation::Form::Product);
    CHECK(term_is_const(sep.u, 1));
    CHECK(term_is_const(sep.r, 1));
    CHECK(verify_separation(pt("pi(x - x)"), sep, cs, Rat(45), pow2x(), 3));
}

TEST_CASE("vanishing denominators raise division errors") {
    auto cs = padic_cut();
    CHECK_THROWS_AS(
        separate_padic(pt("pi(inv(x - x))"), cs, Rat(45), Int(3), pow2x()),
        division_by_zero);
    CHECK_THROWS_AS(
        separate_padic(pt("inv(x - x)"), cs, Rat(45), Int(3), pow2x()),
        division_by_zero);
}

TEST_CASE("scale maps over vanishing arguments are rejected") {
    auto cs = padic_cut();
    CHECK_THROWS_AS(
        separate_padic(pt("L(x - x)"), cs, Rat(45), Int(3), pow2x()),
        precondition_violated);
}

TEST_CASE("oscillating valuation sums are ambiguous") {
    std::vector<Rat> vals{Rat(1, 3), Rat(9), Rat(1, 27), Rat(3), Rat(1, 243),
                          Rat(81), Rat(1, 2187)};
    auto cs = cs1(vals, 3);
    CHECK_THROWS_AS(
        separate_padic(pt("pi(x + y)"), cs, Rat(1), Int(3), pow2x()),
        ambiguous_case);
}

// ---------------------------------------------------------------------------
// Randomized soundness sweeps
// ---------------------------------------------------------------------------

namespace {

TermPtr random_zterm(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, 9);
    if (depth >= 3) {
        switch (pick(rng) % 4) {
        case 0: return Term::var("x");
        case 1: return Term::var("y");
        case 2: return Term::integer(3);
        default: return Term::integer(-5);
        }
    }
    switch (pick(rng)) {
    case 0:
    case 1:
        return Term::add(random_zterm(rng, depth + 1),
                         random_zterm(rng, depth + 1));
    case 2:
        return Term::sub(random_zterm(rng, depth + 1),
                         random_zterm(rng, depth + 1));
    case 3: return Term::neg(random_zterm(rng, depth + 1));
    case 4:
    case 5: return Term::lambda(random_zterm(rng, depth + 1));
    case 6: return Term::succ(random_zterm(rng, depth + 1));
    case 7: return Term::pred(random_zterm(rng, depth + 1));
    case 8: return Term::var("x");
    default: return Term::var("y");
    }
}

TermPtr random_pterm(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, 11);
    if (depth >= 3) {
        switch (pick(rng) % 5) {
        case 0: return Term::var("x");
        case 1: return Term::var("y");
        case 2: return Term::integer(3);
        case 3: return Term::constant(Rat(1, 3));
        default: return Term::integer(2);
        }
    }
    switch (pick(rng)) {
    case 0: return Term::add(random_pterm(rng, depth + 1),
                             random_pterm(rng, depth + 1));
    case 1: return Term::sub(random_pterm(rng, depth + 1),
                             random_pterm(rng, depth + 1));
    case 2:
    case 3: return Term::mul(random_pterm(rng, depth + 1),
                             random_pterm(rng, depth + 1));
    case 4: return Term::inv(random_pterm(rng, depth + 1));
    case 5:
    case 6: return Term::pi(random_pterm(rng, depth + 1));
    case 7: return Term::lambda(random_pterm(rng, depth + 1));
    case 8: return Term::succ(random_pterm(rng, depth + 1));
    case 9: return Term::pred(random_pterm(rng, depth + 1));
    case 10: return Term::var("x");
    default: return Term::var("y");
    }
}

} // namespace

TEST_CASE("random additive terms separate soundly or refuse honestly") {
    std::mt19937 rng(20260819);
    auto cs = doubling_cut();
    const auto& seq = pow2x();
    std::vector<Int> bs = {Int(3), Int(1024), pow_int(2, 40), pow_int(2, 100)};
    int ok = 0;
    for (int iter = 0; iter < 400; ++iter) {
        TermPtr t = random_zterm(rng, 0);
        const Int& b = bs[iter % bs.size()];
        try {
            Separation sep = separate_z(t, cs, b, seq);
            ++ok;
            CHECK(verify_separation(t, sep, cs, Rat(b), seq, 2));
            check_split_shape(sep, cs);
        } catch (const not_monotone&) {
        } catch (const window_exhausted&) {
        } catch (const index_beyond_horizon&) {
        }
    }
    CHECK(ok > 150); // the sweep must exercise real successes
}

TEST_CASE("random multiplicative terms separate soundly or refuse honestly") {
    std::mt19937 rng(90517);
    auto cs = padic_cut();
    const auto& seq = pow2x();
    std::vector<Rat> bs = {Rat(2187), Rat(1), Rat(1, 3), Rat(pow_int(3, 40))};
    int ok = 0;
    for (int iter = 0; iter < 300; ++iter) {
        TermPtr t = random_pterm(rng, 0);
        const Rat& b = bs[iter % bs.size()];
        try {
            Separation sep = separate_padic(t, cs, b, Int(3), seq);
            ++ok;
            CHECK(verify_separation(t, sep, cs, b, seq, 3));
            check_split_shape(sep, cs);
        } catch (const ambiguous_case&) {
        } catch (const window_exhausted&) {
        } catch (const division_by_zero&) {
        } catch (const precondition_violated&) {
        }
    }
    CHECK(ok > 60);
}

} // TEST_SUITE
