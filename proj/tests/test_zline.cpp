#include <doctest.h>

#include "sparse_arith/zline.hpp"

using namespace sparse_arith;

namespace {
SparseSequence pow2() { return SparseSequence::power("pow2", 2); }
SparseSequence fib() {
    return SparseSequence::recurrence("fibonacci", {1, 1}, {1, 2}, 64, 16);
}
std::map<std::string, Int> env(std::initializer_list<std::pair<const std::string, Int>> kv) {
    return std::map<std::string, Int>(kv);
}
} // namespace

TEST_SUITE("zline") {

TEST_CASE("projection onto the sequence") {
    auto p = pow2();
    CHECK(lambda_z(100, p) == 64);
    CHECK(lambda_z(0, p) == 1);   // below r_0 clamps to r_0
    CHECK(lambda_z(-50, p) == 1); // very negative still clamps
    CHECK(lambda_z(64, p) == 64); // elements are fixed
    CHECK(lambda_z(1, p) == 1);
    CHECK_THROWS_AS(lambda_z(Int("18446744073709551617"), p), index_beyond_horizon);
}

TEST_CASE("successor and predecessor") {
    auto p = pow2();
    CHECK(succ_z(100, p) == 128);
    CHECK(succ_z(64, p) == 128);
    CHECK(pred_z(1, p) == 1);  // predecessor sticks at r_0
    CHECK(pred_z(100, p) == 32);
    CHECK(shift_z(100, 3, p) == 512);
    CHECK(shift_z(100, -100, p) == 1); // deep predecessor clamps
    CHECK_THROWS_AS(succ_z(pow2().term(64), p), index_beyond_horizon);
}

TEST_CASE("term evaluation in the additive dialect") {
    auto p = pow2();
    auto t1 = parse_term("L(x+y)", Dialect::Z);
    CHECK(eval_term_z(t1, env({{"x", Int(60)}, {"y", Int(40)}}), p) == 64);

    auto t2 = parse_term("x - x", Dialect::Z);
    CHECK(eval_term_z(t2, env({{"x", Int(7)}}), p) == 0);

    auto t3 = parse_term("S(L(x))", Dialect::Z);
    CHECK(eval_term_z(t3, env({{"x", Int(100)}}), p) == 128);

    auto t4 = parse_term("Sinv(1) + L(5) - 2", Dialect::Z);
    CHECK(eval_term_z(t4, env({}), p) == 1 + 4 - 2);

    CHECK_THROWS_AS(eval_term_z(parse_term("x", Dialect::Z), env({}), p),
                    unbound_variable);
    CHECK_THROWS_AS(
        eval_term_z(parse_term("pi(x)", Dialect::Padic), env({{"x", Int(3)}}), p),
        precondition_violated);
}

TEST_CASE("lambda is idempotent and sandwiches its argument") {
    auto p = pow2();
    auto f = fib();
    for (const auto* seq : {&p, &f}) {
        for (long x : {0L, 1L, 2L, 3L, 17L, 100L, 1000L, 123456L, -9L}) {
            Int lx = lambda_z(x, *seq);
            CHECK(lambda_z(lx, *seq) == lx);
            if (x >= seq->term(0)) {
                CHECK(lx <= x);
                CHECK(succ_z(x, *seq) > x);
            }
        }
    }
}

TEST_CASE("shifts factor through the projection") {
    auto p = pow2();
    for (long x : {1L, 5L, 64L, 100L, 4096L}) {
        CHECK(succ_z(x, p) == succ_z(lambda_z(x, p), p));
        CHECK(pred_z(x, p) == pred_z(lambda_z(x, p), p));
    }
}

TEST_CASE("term parse errors carry offsets") {
    CHECK_THROWS_AS(parse_term("L(x+", Dialect::Z), syntax_error);
    try {
        parse_term("L(x+", Dialect::Z);
    } catch (const syntax_error& e) {
        CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_term("pi(x)", Dialect::Z), unknown_identifier);
    CHECK_THROWS_AS(parse_term("foo(x)", Dialect::Z), unknown_identifier);
}

TEST_CASE("terms round-trip through rendering") {
    for (const char* src : {"L(x+y)", "S(L(x)) - Sinv(y - 3)", "x - (y + z)",
                            "-x + 2", "L(S(Sinv(x)))"}) {
        TermPtr t = parse_term(src, Dialect::Z);
        CHECK(term_equal(parse_term(render_term(t), Dialect::Z), t));
    }
    for (const char* src : {"pi(x*y)", "inv(x)*y + 3/4", "pi(inv(L(x*y)))"}) {
        TermPtr t = parse_term(src, Dialect::Padic);
        CHECK(term_equal(parse_term(render_term(t), Dialect::Padic), t));
    }
}

} // TEST_SUITE
