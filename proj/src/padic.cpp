#include "sparse_arith/padic.hpp"

#include <algorithm>

#include "sparse_arith/zline.hpp"

namespace sparse_arith {

namespace {

void require_prime(const Int& p) {
    if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
        throw precondition_violated("modulus " + p.get_str() + " is not prime");
}

Int mod_pow(const Int& base, unsigned long e, const Int& mod) {
    Int r;
    mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), e, mod.get_mpz_t());
    return r;
}

Int mod_inv(const Int& x, const Int& mod) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw precondition_violated("residue not invertible");
    return r;
}

} // namespace

Valuation vp(const Rat& x, const Int& p) {
    require_prime(p);
    return vp_rat(x, p);
}

Rat pi_value(const Rat& x, const Int& p) {
    require_prime(p);
    if (x == 0) return Rat(1);
    Valuation v = vp_rat(x, p);
    return pow_rat(p, v.v);
}

json CosetTable::to_json() const {
    json j;
    j["p"] = int_to_json(p);
    j["n"] = n;
    json reps_j = json::array();
    for (const auto& r : reps) reps_j.push_back(int_to_json(r));
    j["reps"] = reps_j;
    j["count"] = reps.size();
    j["threshold"] = threshold;
    return j;
}

CosetTable pn_cosets(const Int& p, int n) {
    require_prime(p);
    if (n < 2) throw precondition_violated("coset tables need n >= 2");
    CosetTable t;
    t.p = p;
    t.n = n;
    long vpn = multiplicity(Int(n), p);
    t.enum_precision = static_cast<int>(2 * vpn + 3);
    t.test_precision = static_cast<int>(2 * vpn + 5);

    Int mod_enum = pow_int(p, static_cast<unsigned long>(t.enum_precision));
    Int mod_test = pow_int(p, static_cast<unsigned long>(t.test_precision));
    if (mod_enum > 10000000)
        throw size_budget_exceeded("enumeration modulus " + mod_enum.get_str() +
                                   " exceeds the 10^7 budget");

    // All n-th powers of units at test precision.
    for (Int u = 1; u < mod_test; ++u) {
        if (u % p == 0) continue;
        t.power_residues.insert(mod_pow(u, static_cast<unsigned long>(n), mod_test));
    }
    auto is_nth_power_unit = [&](const Int& u) {
        return t.power_residues.count(((u % mod_test) + mod_test) % mod_test) > 0;
    };

    // Greedy scan: the smallest positive integer in each unit coset becomes
    // its representative. Same-coset is decided by the power-residue test on
    // the ratio, which is well defined at enumeration precision because the
    // perturbation threshold is smaller.
    for (Int u = 1; u < mod_enum; ++u) {
        if (u % p == 0) continue;
        bool fresh = true;
        for (const auto& w : t.unit_reps) {
            Int ratio = (u * mod_inv(w, mod_test)) % mod_test;
            if (is_nth_power_unit(ratio)) { fresh = false; break; }
        }
        if (fresh) t.unit_reps.push_back(u);
    }

    // Valuations split cosets mod n; p^n itself is an n-th power.
    for (int j = 0; j < n; ++j) {
        Int pj = pow_int(p, static_cast<unsigned long>(j));
        for (const auto& w : t.unit_reps) t.reps.push_back(w * pj);
    }
    std::sort(t.reps.begin(), t.reps.end());

    // Least m such that every unit 1 + p^m * t is an n-th power. Bounded by
    // 2*v_p(n)+1 (the classical lifting bound; it is not always attained).
    int m_bound = static_cast<int>(2 * vpn + 1);
    for (int m = 1; m <= m_bound; ++m) {
        Int pm = pow_int(p, static_cast<unsigned long>(m));
        bool all = true;
        for (Int s = 1; s < mod_test && all; s += pm) {
            // s runs over 1 + p^m * t below the test modulus
            if ((s - 1) % pm != 0) break;
            if (!is_nth_power_unit(s)) all = false;
        }
        if (all) { t.threshold = m; break; }
    }
    if (t.threshold == 0)
        throw precondition_violated("no perturbation threshold within the lifting bound");
    return t;
}

Int pn_class(const Rat& x, const CosetTable& table) {
    if (x == 0) throw zero_has_no_coset("cannot classify zero");
    long v = vp_rat(x, table.p).v;
    long j = ((v % table.n) + table.n) % table.n;

    // Unit part of x as a residue at test precision.
    Rat unit = x / pow_rat(table.p, v);
    Int mod_test = pow_int(table.p, static_cast<unsigned long>(table.test_precision));
    Int num = unit.get_num() % mod_test;
    if (num < 0) num += mod_test;
    Int den = unit.get_den() % mod_test;
    Int residue = (num * mod_inv(den, mod_test)) % mod_test;

    for (const auto& w : table.unit_reps) {
        Int ratio = (residue * mod_inv(w, mod_test)) % mod_test;
        if (table.power_residues.count(ratio) > 0)
            return w * pow_int(table.p, static_cast<unsigned long>(j));
    }
    throw precondition_violated("residue failed to classify (inconsistent table)");
}

AlgebraicWitness algebraic_value_witness(
    const std::vector<std::pair<int, Valuation>>& coeff_valuations,
    const Rat& v_a) {
    // Scan the finite values of v(c_i) + i * v_a for the minimum.
    bool have = false;
    Rat best;
    int lo = 0, hi = 0;
    int attained = 0;
    for (const auto& [i, vc] : coeff_valuations) {
        if (vc.infinite) continue; // zero coefficient never attains the min
        Rat val = Rat(vc.v) + Rat(i) * v_a;
        if (!have || val < best) {
            have = true;
            best = val;
            lo = hi = i;
            attained = 1;
        } else if (val == best) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
            ++attained;
        }
    }
    if (!have) throw precondition_violated("all coefficients are zero");
    if (attained < 2)
        throw unique_minimum("minimum attained only at index " + std::to_string(lo));
    return {hi - lo, lo, hi};
}

namespace {

Rat transport(const Rat& x, const Int& p, const SparseSequence& seq,
              Int (*f)(const Int&, const SparseSequence&)) {
    require_prime(p);
    if (x == 0) throw precondition_violated("zero has no valuation to transport");
    Valuation v = vp_rat(x, p);
    Int z = f(Int(v.v), seq);
    if (!fits_int64(z))
        throw index_beyond_horizon("transported exponent out of range");
    return pow_rat(p, z.get_si());
}

} // namespace

Rat padic_lambda(const Rat& x, const Int& p, const SparseSequence& seq) {
    return transport(x, p, seq, &lambda_z);
}
Rat padic_succ(const Rat& x, const Int& p, const SparseSequence& seq) {
    return transport(x, p, seq, &succ_z);
}
Rat padic_pred(const Rat& x, const Int& p, const SparseSequence& seq) {
    return transport(x, p, seq, &pred_z);
}

Rat eval_term_padic(const TermPtr& t, const std::map<std::string, Rat>& env,
                    const Int& p, const SparseSequence& seq) {
    switch (t->kind) {
    case TermKind::Const:
    case TermKind::Param:
        return t->value;
    case TermKind::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw unbound_variable("variable '" + t->name + "'");
        return it->second;
    }
    case TermKind::Add:
        return eval_term_padic(t->a, env, p, seq) + eval_term_padic(t->b, env, p, seq);
    case TermKind::Sub:
        return eval_term_padic(t->a, env, p, seq) - eval_term_padic(t->b, env, p, seq);
    case TermKind::Neg:
        return -eval_term_padic(t->a, env, p, seq);
    case TermKind::Mul:
        return eval_term_padic(t->a, env, p, seq) * eval_term_padic(t->b, env, p, seq);
    case TermKind::Inv: {
        Rat v = eval_term_padic(t->a, env, p, seq);
        if (v == 0) throw division_by_zero("inv of zero");
        return 1 / v;
    }
    case TermKind::Lambda:
        return padic_lambda(eval_term_padic(t->a, env, p, seq), p, seq);
    case TermKind::Succ:
        return padic_succ(eval_term_padic(t->a, env, p, seq), p, seq);
    case TermKind::Pred:
        return padic_pred(eval_term_padic(t->a, env, p, seq), p, seq);
    case TermKind::Pi:
        return pi_value(eval_term_padic(t->a, env, p, seq), p);
    }
    throw precondition_violated("unreachable term kind");
}

} // namespace sparse_arith
