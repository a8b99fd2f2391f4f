#include "sparse_arith/varsep.hpp"

#include <algorithm>
#include <optional>

namespace sparse_arith {

namespace {

// ---------------------------------------------------------------------------
// Term construction with light constant folding.  Folds are restricted to
// rewrites that are value-preserving on every input (neutral elements and
// constant arithmetic), so a folded term evaluates exactly like the original.
// ---------------------------------------------------------------------------

bool is_const(const TermPtr& t) { return t->kind == TermKind::Const; }

TermPtr mk_const(const Rat& v) { return Term::constant(v); }

TermPtr mk_add(const TermPtr& l, const TermPtr& r) {
    if (term_is_const(l, 0)) return r;
    if (term_is_const(r, 0)) return l;
    if (is_const(l) && is_const(r)) return mk_const(l->value + r->value);
    return Term::add(l, r);
}

TermPtr mk_neg(const TermPtr& t) {
    if (is_const(t)) return mk_const(-t->value);
    if (t->kind == TermKind::Neg) return t->a;
    return Term::neg(t);
}

TermPtr mk_sub(const TermPtr& l, const TermPtr& r) {
    if (term_is_const(r, 0)) return l;
    if (term_is_const(l, 0)) return mk_neg(r);
    if (is_const(l) && is_const(r)) return mk_const(l->value - r->value);
    return Term::sub(l, r);
}

TermPtr mk_mul(const TermPtr& l, const TermPtr& r) {
    if (term_is_const(l, 1)) return r;
    if (term_is_const(r, 1)) return l;
    if (is_const(l) && is_const(r)) return mk_const(l->value * r->value);
    return Term::mul(l, r);
}

TermPtr mk_inv(const TermPtr& t) {
    if (is_const(t)) {
        if (t->value == 0) throw division_by_zero("inv of the zero constant");
        return mk_const(1 / t->value);
    }
    return Term::inv(t);
}

TermPtr mk_pi(const TermPtr& t, const Int& p) {
    if (is_const(t) || t->kind == TermKind::Param)
        return mk_const(pi_value(t->value, p));
    // Scale maps and the projection itself always evaluate to powers of p,
    // which the projection fixes.
    if (t->kind == TermKind::Lambda || t->kind == TermKind::Succ ||
        t->kind == TermKind::Pred || t->kind == TermKind::Pi)
        return t;
    return Term::pi(t);
}

TermPtr wrap_shift(TermPtr t, int z) {
    for (; z > 0; --z) t = Term::succ(t);
    for (; z < 0; ++z) t = Term::pred(t);
    return t;
}

TermPtr zero_term() { return Term::integer(0); }
TermPtr one_term() { return Term::integer(1); }

// ---------------------------------------------------------------------------
// Mutable separation state: the flattened sample window, the live [lo, hi]
// range, harvested parameters, and the case trace.  Both sides of the cut
// must stay nonempty through every harvest and shrink.
// ---------------------------------------------------------------------------

struct Working {
    const CutSequence* cs = nullptr;
    const SparseSequence* seq = nullptr;
    std::string yvar;
    bool padic = false;

    std::vector<const CutSequence::Point*> pts;
    int cut_pos = 0;
    int lo = 0, hi = 0;

    int next_param = 1;
    std::map<std::string, Rat> params;
    std::vector<std::string> trace;

    void init(const CutSequence& c, const SparseSequence& s, std::string y,
              bool pad) {
        cs = &c;
        seq = &s;
        yvar = std::move(y);
        padic = pad;
        c.validate();
        for (const auto& pt : c.left) pts.push_back(&pt);
        cut_pos = static_cast<int>(pts.size());
        pts.push_back(&c.cut);
        for (const auto& pt : c.right) pts.push_back(&pt);
        lo = 0;
        hi = static_cast<int>(pts.size()) - 1;
    }

    [[noreturn]] void proxy_violation(const std::string& what) const {
        if (padic) throw ambiguous_case(what);
        throw not_monotone(what);
    }

    long index_of(int pos) const { return pts[pos]->index; }

    int harvest_left() {
        int h = lo++;
        if (lo > cut_pos - 1)
            throw window_exhausted(
                "left side of the cut has no sample to spare");
        trace.push_back("harvest@" + std::to_string(index_of(h)));
        return h;
    }

    int harvest_right() {
        int h = hi--;
        if (hi < cut_pos + 1)
            throw window_exhausted(
                "right side of the cut has no sample to spare");
        trace.push_back("harvest@" + std::to_string(index_of(h)));
        return h;
    }

    void shrink_lo(int q, const char* why) {
        if (q <= lo) return;
        if (q > cut_pos - 1)
            throw window_exhausted(std::string("keeping only ") + why +
                                   " would empty the left side of the cut");
        trace.push_back("shrink-left-to@" + std::to_string(index_of(q)));
        lo = q;
    }

    void shrink_hi(int q, const char* why) {
        if (q >= hi) return;
        if (q < cut_pos + 1)
            throw window_exhausted(std::string("keeping only ") + why +
                                   " would empty the right side of the cut");
        trace.push_back("shrink-right-to@" + std::to_string(index_of(q)));
        hi = q;
    }
};

TermPtr make_param(Working& w, const Rat& v) {
    std::string label = "c" + std::to_string(w.next_param++);
    w.params.emplace(label, v);
    return Term::param(label, v);
}

bool mentions_tuple(const TermPtr& t, const Working& w) {
    std::set<std::string> vs;
    term_vars(t, vs);
    for (const auto& v : w.cs->vars)
        if (vs.count(v)) return true;
    return false;
}

std::map<std::string, Rat> env_q(const Working& w, int pos, const Rat& b) {
    std::map<std::string, Rat> env;
    const auto& vals = w.pts[pos]->values;
    for (size_t i = 0; i < w.cs->vars.size(); ++i) env[w.cs->vars[i]] = vals[i];
    env[w.yvar] = b;
    return env;
}

std::map<std::string, Int> env_z(const Working& w, int pos, const Int& b) {
    std::map<std::string, Int> env;
    const auto& vals = w.pts[pos]->values;
    for (size_t i = 0; i < w.cs->vars.size(); ++i) {
        if (vals[i].get_den() != 1)
            throw precondition_violated(
                "additive separation needs integer sample values");
        env[w.cs->vars[i]] = Int(vals[i].get_num());
    }
    env[w.yvar] = b;
    return env;
}

// ---------------------------------------------------------------------------
// The floor engine.  Decides how L(u + r) splits across the cut given the
// integer family u_vals over the retained window and the singleton value
// r_val.  Shared by the additive dialect (values on the integer line) and
// the multiplicative dialect (valuation exponents); only the term building
// around the decision differs.
// ---------------------------------------------------------------------------

struct FloorDecision {
    enum class Kind { ConstFloor, Fold, USide, RSide } kind;
    int harvest_pos = -1;  // window position whose tuple supplied a parameter
    bool use_succ = false; // USide: the floor sits one step above the difference
    int z = 0;             // RSide: scale offset applied on top of the base
};

FloorDecision floor_engine(Working& w, const std::vector<Int>& u_vals,
                           const Int& r_val, bool u_mentions_tuple) {
    const SparseSequence& seq = *w.seq;

    bool any_pos = false, any_nonpos = false;
    for (int k = w.lo; k <= w.hi; ++k)
        (u_vals[k] + r_val > 0 ? any_pos : any_nonpos) = true;
    if (any_pos && any_nonpos)
        w.proxy_violation(
            "floor argument changes sign across the retained window");
    if (!any_pos) {
        w.trace.push_back("floor:clamped");
        return {FloorDecision::Kind::ConstFloor, -1, false, 0};
    }

    bool inc = true, dec = true, flat = true;
    for (int k = w.lo; k < w.hi; ++k) {
        if (!(u_vals[k] < u_vals[k + 1])) inc = false;
        if (!(u_vals[k] > u_vals[k + 1])) dec = false;
        if (u_vals[k] != u_vals[k + 1]) flat = false;
    }
    if (flat) {
        FloorDecision d{FloorDecision::Kind::Fold, -1, false, 0};
        w.trace.push_back("floor:constant-family");
        if (u_mentions_tuple) d.harvest_pos = w.harvest_left();
        return d;
    }
    if (!inc && !dec)
        w.proxy_violation(
            "floor argument family is neither constant nor strictly monotone");

    int h = inc ? w.harvest_left() : w.harvest_right();
    const Int& u_h = u_vals[h];
    Int base = u_h + r_val; // positive: position h passed the sign check
    int base_idx = lambda_index(base, seq);
    int probe = std::min(8, seq.horizon() - base_idx);
    Int threshold = seq.term(base_idx + probe);
    w.trace.push_back("floor:probe-shift=" + std::to_string(probe));
    auto big = [&](int pos) { return u_vals[pos] - u_h > threshold; };

    int first_big = w.hi + 1, last_big = w.lo - 1;
    for (int k = w.lo; k <= w.hi; ++k) {
        if (big(k)) {
            first_big = std::min(first_big, k);
            last_big = std::max(last_big, k);
        }
    }
    if (inc) {
        for (int k = std::max(first_big, w.lo); k <= w.hi; ++k)
            if (!big(k))
                w.proxy_violation(
                    "dominance verdicts are not aligned with growth");
    } else {
        for (int k = w.lo; k <= last_big; ++k)
            if (!big(k))
                w.proxy_violation(
                    "dominance verdicts are not aligned with growth");
    }

    bool cut_big = big(w.cut_pos);
    if (cut_big) {
        if (inc) w.shrink_lo(first_big, "the dominant-tuple samples");
        else w.shrink_hi(last_big, "the dominant-tuple samples");
    } else {
        if (inc) w.shrink_hi(first_big - 1, "the dominant-singleton samples");
        else w.shrink_lo(last_big + 1, "the dominant-singleton samples");
    }

    if (cut_big) {
        std::optional<bool> via_succ;
        for (int k = w.lo; k <= w.hi; ++k) {
            Int diff = u_vals[k] - u_h; // positive by strict monotonicity
            bool lam = succ_z(diff, seq) > diff + base;
            if (!via_succ) via_succ = !lam;
            else if (*via_succ == lam)
                w.proxy_violation(
                    "scale step of the dominant part is not uniform");
        }
        w.trace.push_back(std::string("floor:dominant-tuple:") +
                          (*via_succ ? "step" : "floor"));
        return {FloorDecision::Kind::USide, h, *via_succ, 0};
    }

    std::optional<int> zshift;
    for (int k = w.lo; k <= w.hi; ++k) {
        int zk = lambda_index(u_vals[k] + r_val, seq) - base_idx;
        if (!zshift) zshift = zk;
        else if (*zshift != zk)
            w.proxy_violation(
                "scale offset of the singleton part is not uniform");
    }
    w.trace.push_back("floor:dominant-singleton:z=" + std::to_string(*zshift));
    return {FloorDecision::Kind::RSide, h, false, *zshift};
}

// ---------------------------------------------------------------------------
// Additive separation.
// ---------------------------------------------------------------------------

struct ZParts {
    TermPtr u, r; // literal 0 marks an absent side
};

ZParts sep_z_rec(const TermPtr& t, Working& w, const Int& b);

ZParts floor_parts_z(const TermPtr& inner, Working& w, const Int& b) {
    ZParts parts = sep_z_rec(inner, w, b);
    // A one-sided argument needs no case split: the floor applies to that
    // side verbatim, pointwise, with no window cost.
    if (term_is_const(parts.r, 0))
        return {Term::lambda(parts.u), zero_term()};
    if (term_is_const(parts.u, 0))
        return {zero_term(), Term::lambda(parts.r)};
    std::map<std::string, Int> yenv{{w.yvar, b}};
    Int r_val = eval_term_z(parts.r, yenv, *w.seq);
    std::vector<Int> u_vals(w.pts.size());
    for (int k = w.lo; k <= w.hi; ++k)
        u_vals[k] = eval_term_z(parts.u, env_z(w, k, b), *w.seq);

    FloorDecision d =
        floor_engine(w, u_vals, r_val, mentions_tuple(parts.u, w));
    switch (d.kind) {
    case FloorDecision::Kind::ConstFloor:
        return {zero_term(), mk_const(Rat(w.seq->term(0)))};
    case FloorDecision::Kind::Fold: {
        TermPtr carried = parts.u;
        if (d.harvest_pos >= 0)
            carried = make_param(w, Rat(u_vals[d.harvest_pos]));
        return {zero_term(), Term::lambda(mk_add(carried, parts.r))};
    }
    case FloorDecision::Kind::USide: {
        TermPtr c = make_param(w, Rat(u_vals[d.harvest_pos]));
        TermPtr diff = mk_sub(parts.u, c);
        return {d.use_succ ? Term::succ(diff) : Term::lambda(diff),
                zero_term()};
    }
    case FloorDecision::Kind::RSide: {
        TermPtr c = make_param(w, Rat(u_vals[d.harvest_pos]));
        TermPtr core = Term::lambda(mk_add(c, parts.r));
        return {zero_term(), wrap_shift(core, d.z)};
    }
    }
    throw precondition_violated("unreachable floor decision");
}

ZParts sep_z_rec(const TermPtr& t, Working& w, const Int& b) {
    switch (t->kind) {
    case TermKind::Const:
    case TermKind::Param:
        return {t, zero_term()};
    case TermKind::Var: {
        if (t->name == w.yvar) return {zero_term(), t};
        for (const auto& v : w.cs->vars)
            if (v == t->name) return {t, zero_term()};
        throw unbound_variable("variable '" + t->name +
                               "' is neither a tuple variable nor the singleton");
    }
    case TermKind::Add: {
        ZParts l = sep_z_rec(t->a, w, b);
        ZParts r = sep_z_rec(t->b, w, b);
        return {mk_add(l.u, r.u), mk_add(l.r, r.r)};
    }
    case TermKind::Sub: {
        ZParts l = sep_z_rec(t->a, w, b);
        ZParts r = sep_z_rec(t->b, w, b);
        return {mk_sub(l.u, r.u), mk_sub(l.r, r.r)};
    }
    case TermKind::Neg: {
        ZParts l = sep_z_rec(t->a, w, b);
        return {mk_neg(l.u), mk_neg(l.r)};
    }
    case TermKind::Lambda:
        return floor_parts_z(t->a, w, b);
    case TermKind::Succ: {
        ZParts f = floor_parts_z(t->a, w, b);
        if (term_is_const(f.u, 0)) return {f.u, Term::succ(f.r)};
        return {Term::succ(f.u), f.r};
    }
    case TermKind::Pred: {
        ZParts f = floor_parts_z(t->a, w, b);
        if (term_is_const(f.u, 0)) return {f.u, Term::pred(f.r)};
        return {Term::pred(f.u), f.r};
    }
    default:
        throw precondition_violated(
            "multiplicative operation in additive separation");
    }
}

// ---------------------------------------------------------------------------
// Shared result plumbing and the evaluation check.
// ---------------------------------------------------------------------------

void fill_result(Separation& sep, const Working& w) {
    for (int k = w.lo; k <= w.hi; ++k) {
        if (k < w.cut_pos) sep.retained_left.push_back(w.index_of(k));
        else if (k > w.cut_pos) sep.retained_right.push_back(w.index_of(k));
    }
    sep.cut_index = w.index_of(w.cut_pos);
    sep.params = w.params;
    sep.case_trace = w.trace;
}

// Evaluates both sides at every retained index plus the cut.  Returns the
// pointwise equality verdict; evaluation errors propagate to the caller.
bool check_separation_values(const TermPtr& t, const Separation& sep,
                             const CutSequence& cs, const Rat& b,
                             const SparseSequence& seq, const Int& p) {
    std::map<long, const CutSequence::Point*> by_index;
    for (const auto& pt : cs.left) by_index[pt.index] = &pt;
    by_index[cs.cut.index] = &cs.cut;
    for (const auto& pt : cs.right) by_index[pt.index] = &pt;

    std::vector<long> idxs = sep.retained_left;
    idxs.push_back(sep.cut_index);
    idxs.insert(idxs.end(), sep.retained_right.begin(),
                sep.retained_right.end());

    for (long idx : idxs) {
        auto it = by_index.find(idx);
        if (it == by_index.end()) return false;
        const auto& pt = *it->second;
        if (pt.values.size() != cs.vars.size()) return false;

        if (sep.dialect == Dialect::Z) {
            if (sep.form != Separation::Form::Additive) return false;
            if (b.get_den() != 1) return false;
            std::map<std::string, Int> env;
            for (size_t i = 0; i < cs.vars.size(); ++i) {
                if (pt.values[i].get_den() != 1) return false;
                env[cs.vars[i]] = Int(pt.values[i].get_num());
            }
            env[sep.yvar] = Int(b.get_num());
            Int lhs = eval_term_z(t, env, seq);
            Int rhs = eval_term_z(sep.u, env, seq) +
                      eval_term_z(sep.r, env, seq);
            if (lhs != rhs) return false;
        } else {
            std::map<std::string, Rat> env;
            for (size_t i = 0; i < cs.vars.size(); ++i)
                env[cs.vars[i]] = pt.values[i];
            env[sep.yvar] = b;
            Rat lhs = eval_term_padic(t, env, p, seq);
            Rat rhs;
            if (sep.form == Separation::Form::Product) {
                rhs = eval_term_padic(sep.u, env, p, seq) *
                      eval_term_padic(sep.r, env, p, seq);
            } else if (sep.form == Separation::Form::Fraction) {
                Rat numv = 0, denv = 0;
                for (const auto& pr : sep.num)
                    numv += eval_term_padic(pr.u, env, p, seq) *
                            eval_term_padic(pr.r, env, p, seq);
                for (const auto& pr : sep.den)
                    denv += eval_term_padic(pr.u, env, p, seq) *
                            eval_term_padic(pr.r, env, p, seq);
                if (denv == 0) return false;
                rhs = numv / denv;
            } else {
                return false;
            }
            if (lhs != rhs) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Valuation decomposition of sum_i u_i(x) * r_i(y) into one product.
// ---------------------------------------------------------------------------

struct ProductParts {
    TermPtr u, r;
};

long finite_vp(const Rat& x, const Int& p) {
    Valuation v = vp(x, p);
    if (v.infinite)
        throw ambiguous_case("valuation of zero inside a decomposition");
    return v.v;
}

ProductParts decomp_rec(const std::vector<TermPtr>& us_in,
                        const std::vector<TermPtr>& rs_in, Working& w,
                        const Rat& b, const Int& p) {
    std::map<std::string, Rat> yenv{{w.yvar, b}};

    std::vector<TermPtr> us, rs;
    std::vector<Rat> rb;
    std::vector<std::vector<Rat>> uval;
    for (size_t i = 0; i < us_in.size(); ++i) {
        Rat rv = eval_term_padic(rs_in[i], yenv, p, *w.seq);
        if (rv == 0) continue; // the pair contributes nothing anywhere
        std::vector<Rat> vals(w.pts.size());
        int zeros = 0, count = 0;
        for (int k = w.lo; k <= w.hi; ++k) {
            vals[k] = eval_term_padic(us_in[i], env_q(w, k, b), p, *w.seq);
            ++count;
            if (vals[k] == 0) ++zeros;
        }
        if (zeros == count) continue; // identically absent on the window
        if (zeros > 0)
            throw ambiguous_case(
                "a summand vanishes at part of the retained window");
        us.push_back(us_in[i]);
        rs.push_back(rs_in[i]);
        rb.push_back(rv);
        uval.push_back(std::move(vals));
    }
    if (us.empty())
        throw ambiguous_case("every summand vanishes on the retained window");

    size_t m = us.size();
    if (m == 1) {
        w.trace.push_back("valdec:single");
        return {us[0], rs[0]};
    }

    size_t piv = m - 1;
    std::vector<long> wv(w.pts.size(), 0);
    for (int k = w.lo; k <= w.hi; ++k) {
        Rat acc = 1;
        for (size_t i = 0; i < piv; ++i)
            acc += (uval[i][k] / uval[piv][k]) * (rb[i] / rb[piv]);
        if (acc == 0)
            throw ambiguous_case("summands cancel exactly at a retained index");
        wv[k] = finite_vp(acc, p);
    }

    bool inc = true, dec = true, flat = true;
    for (int k = w.lo; k < w.hi; ++k) {
        if (!(wv[k] < wv[k + 1])) inc = false;
        if (!(wv[k] > wv[k + 1])) dec = false;
        if (wv[k] != wv[k + 1]) flat = false;
    }

    if (flat) {
        long c = wv[w.lo];
        w.trace.push_back("valdec:constant:" + std::to_string(c));
        int h = w.harvest_left();
        TermPtr residual = one_term();
        for (size_t i = 0; i < piv; ++i) {
            Rat ci = uval[i][h] / uval[piv][h];
            TermPtr ri = mk_mul(rs[i], mk_inv(rs[piv]));
            residual = mk_add(residual, mk_mul(make_param(w, ci), ri));
        }
        Rat residual_val = eval_term_padic(residual, yenv, p, *w.seq);
        if (residual_val == 0 || finite_vp(residual_val, p) != c)
            throw ambiguous_case(
                "singleton residual misses the constant valuation pattern");
        return {us[piv], mk_mul(rs[piv], residual)};
    }

    if (inc || dec) {
        w.trace.push_back(inc ? "valdec:increasing" : "valdec:decreasing");
        int h = inc ? w.harvest_right() : w.harvest_left();
        std::vector<TermPtr> us2, rs2;
        for (size_t i = 0; i < piv; ++i) {
            Rat ci = uval[i][h] / uval[piv][h];
            us2.push_back(
                mk_sub(mk_mul(us[i], mk_inv(us[piv])), make_param(w, ci)));
            rs2.push_back(mk_mul(rs[i], mk_inv(rs[piv])));
        }
        ProductParts inner = decomp_rec(us2, rs2, w, b, p);
        return {mk_mul(us[piv], inner.u), mk_mul(rs[piv], inner.r)};
    }

    throw ambiguous_case(
        "summand dominance pattern is neither constant nor strictly monotone");
}

// ---------------------------------------------------------------------------
// Multiplicative separation.
// ---------------------------------------------------------------------------

struct PFrac {
    std::vector<SepPair> num, den;
};

PFrac one_frac(TermPtr u, TermPtr r) {
    PFrac f;
    f.num.push_back({std::move(u), std::move(r)});
    f.den.push_back({one_term(), one_term()});
    return f;
}

std::vector<SepPair> pair_products(const std::vector<SepPair>& a,
                                   const std::vector<SepPair>& bs,
                                   bool negate = false) {
    std::vector<SepPair> out;
    for (const auto& x : a) {
        for (const auto& y : bs) {
            TermPtr u = mk_mul(x.u, y.u);
            if (negate) u = mk_neg(u);
            out.push_back({u, mk_mul(x.r, y.r)});
        }
    }
    return out;
}

PFrac sep_p_rec(const TermPtr& t, Working& w, const Rat& b, const Int& p);

// Collapses pi(inner) to one pair (alpha, r) of p-power-valued factors.
SepPair pi_pair(const TermPtr& inner, Working& w, const Rat& b, const Int& p) {
    PFrac f = sep_p_rec(inner, w, b, p);

    auto sum_at = [&](const std::vector<SepPair>& ps, int pos) {
        Rat acc = 0;
        auto env = env_q(w, pos, b);
        for (const auto& pr : ps)
            acc += eval_term_padic(pr.u, env, p, *w.seq) *
                   eval_term_padic(pr.r, env, p, *w.seq);
        return acc;
    };
    int num_zero = 0, den_zero = 0, count = 0;
    for (int k = w.lo; k <= w.hi; ++k) {
        ++count;
        if (sum_at(f.num, k) == 0) ++num_zero;
        if (sum_at(f.den, k) == 0) ++den_zero;
    }
    if (den_zero > 0)
        throw division_by_zero("denominator vanishes at a retained index");
    if (num_zero == count) {
        w.trace.push_back("pi:vanishing-argument");
        return {one_term(), one_term()}; // the projection of zero is the unit
    }
    if (num_zero > 0)
        throw ambiguous_case(
            "projection argument vanishes at part of the retained window");

    std::vector<TermPtr> nus, nrs, dus, drs;
    for (const auto& pr : f.num) {
        nus.push_back(pr.u);
        nrs.push_back(pr.r);
    }
    for (const auto& pr : f.den) {
        dus.push_back(pr.u);
        drs.push_back(pr.r);
    }
    ProductParts np = decomp_rec(nus, nrs, w, b, p);
    ProductParts dp = decomp_rec(dus, drs, w, b, p);
    return {mk_mul(mk_pi(np.u, p), mk_inv(mk_pi(dp.u, p))),
            mk_mul(mk_pi(np.r, p), mk_inv(mk_pi(dp.r, p)))};
}

// Splits a scale-map argument through pi, runs the floor engine on the
// valuation exponents, and rebuilds p-power-valued terms.
SepPair scale_pair(const TermPtr& inner, Working& w, const Rat& b,
                   const Int& p) {
    for (int k = w.lo; k <= w.hi; ++k) {
        if (eval_term_padic(inner, env_q(w, k, b), p, *w.seq) == 0)
            throw precondition_violated(
                "scale map applied to a vanishing argument");
    }
    SepPair pr = pi_pair(inner, w, b, p);
    // A one-sided argument needs no case split: the floor applies to that
    // side verbatim, pointwise, with no window cost.
    if (term_is_const(pr.r, 1)) return {Term::lambda(pr.u), one_term()};
    if (term_is_const(pr.u, 1)) return {one_term(), Term::lambda(pr.r)};

    std::vector<Rat> alpha_vals(w.pts.size());
    std::vector<Int> e_vals(w.pts.size());
    for (int k = w.lo; k <= w.hi; ++k) {
        alpha_vals[k] = eval_term_padic(pr.u, env_q(w, k, b), p, *w.seq);
        e_vals[k] = Int(finite_vp(alpha_vals[k], p));
    }
    std::map<std::string, Rat> yenv{{w.yvar, b}};
    Int g = Int(finite_vp(eval_term_padic(pr.r, yenv, p, *w.seq), p));

    FloorDecision d = floor_engine(w, e_vals, g, mentions_tuple(pr.u, w));
    switch (d.kind) {
    case FloorDecision::Kind::ConstFloor: {
        long r0 = w.seq->term(0).get_si();
        return {one_term(), mk_const(pow_rat(p, r0))};
    }
    case FloorDecision::Kind::Fold: {
        TermPtr carried = pr.u;
        if (d.harvest_pos >= 0)
            carried = make_param(w, alpha_vals[d.harvest_pos]);
        return {one_term(), Term::lambda(mk_mul(carried, pr.r))};
    }
    case FloorDecision::Kind::USide: {
        TermPtr c = make_param(w, alpha_vals[d.harvest_pos]);
        TermPtr diff = mk_mul(pr.u, mk_inv(c));
        return {d.use_succ ? Term::succ(diff) : Term::lambda(diff),
                one_term()};
    }
    case FloorDecision::Kind::RSide: {
        TermPtr c = make_param(w, alpha_vals[d.harvest_pos]);
        TermPtr core = Term::lambda(mk_mul(c, pr.r));
        return {one_term(), wrap_shift(core, d.z)};
    }
    }
    throw precondition_violated("unreachable floor decision");
}

PFrac sep_p_rec(const TermPtr& t, Working& w, const Rat& b, const Int& p) {
    switch (t->kind) {
    case TermKind::Const:
    case TermKind::Param:
        return one_frac(t, one_term());
    case TermKind::Var: {
        if (t->name == w.yvar) return one_frac(one_term(), t);
        for (const auto& v : w.cs->vars)
            if (v == t->name) return one_frac(t, one_term());
        throw unbound_variable("variable '" + t->name +
                               "' is neither a tuple variable nor the singleton");
    }
    case TermKind::Add:
    case TermKind::Sub: {
        PFrac l = sep_p_rec(t->a, w, b, p);
        PFrac r = sep_p_rec(t->b, w, b, p);
        PFrac out;
        out.num = pair_products(l.num, r.den);
        auto rhs = pair_products(r.num, l.den, t->kind == TermKind::Sub);
        out.num.insert(out.num.end(), rhs.begin(), rhs.end());
        out.den = pair_products(l.den, r.den);
        return out;
    }
    case TermKind::Neg: {
        PFrac l = sep_p_rec(t->a, w, b, p);
        for (auto& pr : l.num) pr.u = mk_neg(pr.u);
        return l;
    }
    case TermKind::Mul: {
        PFrac l = sep_p_rec(t->a, w, b, p);
        PFrac r = sep_p_rec(t->b, w, b, p);
        PFrac out;
        out.num = pair_products(l.num, r.num);
        out.den = pair_products(l.den, r.den);
        return out;
    }
    case TermKind::Inv: {
        PFrac l = sep_p_rec(t->a, w, b, p);
        std::swap(l.num, l.den);
        return l;
    }
    case TermKind::Pi: {
        SepPair pr = pi_pair(t->a, w, b, p);
        return one_frac(pr.u, pr.r);
    }
    case TermKind::Lambda: {
        SepPair pr = scale_pair(t->a, w, b, p);
        return one_frac(pr.u, pr.r);
    }
    case TermKind::Succ:
    case TermKind::Pred: {
        SepPair pr = scale_pair(t->a, w, b, p);
        bool on_r = term_is_const(pr.u, 1);
        TermPtr& side = on_r ? pr.r : pr.u;
        side = (t->kind == TermKind::Succ) ? Term::succ(side)
                                           : Term::pred(side);
        return one_frac(pr.u, pr.r);
    }
    }
    throw precondition_violated("unreachable term kind");
}

} // namespace

// ---------------------------------------------------------------------------
// CutSequence
// ---------------------------------------------------------------------------

void CutSequence::validate() const {
    if (vars.empty())
        throw precondition_violated(
            "cut sequence needs at least one tuple variable");
    if (left.empty() || right.empty())
        throw precondition_violated(
            "cut sequence needs samples on both sides of the cut");
    bool first = true;
    long prev = 0;
    auto check = [&](const Point& pt) {
        if (pt.values.size() != vars.size())
            throw precondition_violated(
                "sample arity differs from the variable list");
        if (!first && pt.index <= prev)
            throw precondition_violated(
                "sample indices must be strictly increasing");
        prev = pt.index;
        first = false;
    };
    for (const auto& pt : left) check(pt);
    check(cut);
    for (const auto& pt : right) check(pt);
}

json CutSequence::to_json() const {
    auto pt_json = [](const Point& pt) {
        json o;
        o["index"] = pt.index;
        json vals = json::array();
        for (const auto& v : pt.values) vals.push_back(rat_to_json(v));
        o["values"] = vals;
        return o;
    };
    json j;
    j["schema"] = 1;
    j["vars"] = vars;
    json l = json::array();
    for (const auto& pt : left) l.push_back(pt_json(pt));
    j["left"] = l;
    j["cut"] = pt_json(cut);
    json r = json::array();
    for (const auto& pt : right) r.push_back(pt_json(pt));
    j["right"] = r;
    return j;
}

CutSequence CutSequence::from_json(const json& j) {
    CutSequence cs;
    try {
        cs.vars = j.at("vars").get<std::vector<std::string>>();
        auto pt_from = [](const json& o) {
            Point pt;
            pt.index = o.at("index").get<long>();
            for (const auto& v : o.at("values"))
                pt.values.push_back(rat_from_json(v));
            return pt;
        };
        for (const auto& o : j.at("left")) cs.left.push_back(pt_from(o));
        cs.cut = pt_from(j.at("cut"));
        for (const auto& o : j.at("right")) cs.right.push_back(pt_from(o));
    } catch (const nlohmann::json::exception& e) {
        throw registry_error(std::string("bad cut sequence: ") + e.what());
    }
    cs.validate();
    return cs;
}

// ---------------------------------------------------------------------------
// Separation
// ---------------------------------------------------------------------------

json Separation::to_json() const {
    json j;
    j["schema"] = 1;
    j["dialect"] = dialect == Dialect::Z ? "z" : "padic";
    j["form"] = form == Form::Additive ? "additive"
                : form == Form::Product ? "product"
                                        : "fraction";
    j["yvar"] = yvar;
    if (form == Form::Fraction) {
        auto pairs_json = [](const std::vector<SepPair>& ps) {
            json arr = json::array();
            for (const auto& pr : ps)
                arr.push_back(
                    json::array({render_term(pr.u), render_term(pr.r)}));
            return arr;
        };
        j["num"] = pairs_json(num);
        j["den"] = pairs_json(den);
    } else {
        j["u"] = render_term(u);
        j["r"] = render_term(r);
    }
    j["retained_left"] = retained_left;
    j["cut_index"] = cut_index;
    j["retained_right"] = retained_right;
    json pj = json::object();
    for (const auto& [label, value] : params) pj[label] = rat_to_json(value);
    j["params"] = pj;
    j["case_trace"] = case_trace;
    return j;
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

Separation separate_z(const TermPtr& t, const CutSequence& cs, const Int& b,
                      const SparseSequence& seq, const std::string& yvar) {
    Working w;
    w.init(cs, seq, yvar, false);
    ZParts parts = sep_z_rec(t, w, b);

    Separation sep;
    sep.form = Separation::Form::Additive;
    sep.dialect = Dialect::Z;
    sep.yvar = yvar;
    sep.u = parts.u;
    sep.r = parts.r;
    fill_result(sep, w);
    if (!check_separation_values(t, sep, cs, Rat(b), seq, 2))
        throw error("SeparationUnsound",
                    "internal check failed: the additive split does not "
                    "re-evaluate to the input term");
    return sep;
}

Separation decompose_valuation(const std::vector<TermPtr>& us,
                               const std::vector<TermPtr>& rs,
                               const CutSequence& cs, const Rat& b,
                               const Int& p, const SparseSequence& seq,
                               const std::string& yvar) {
    if (us.empty() || us.size() != rs.size())
        throw precondition_violated(
            "decomposition needs matching nonempty factor lists");
    finite_vp(Rat(1), p); // validates that p is prime before any window work

    Working w;
    w.init(cs, seq, yvar, true);
    ProductParts parts = decomp_rec(us, rs, w, b, p);

    Separation sep;
    sep.form = Separation::Form::Product;
    sep.dialect = Dialect::Padic;
    sep.yvar = yvar;
    sep.u = parts.u;
    sep.r = parts.r;
    fill_result(sep, w);

    // The output contract is valuation equality at every retained index.
    std::map<std::string, Rat> yenv{{yvar, b}};
    long rv = finite_vp(eval_term_padic(sep.r, yenv, p, seq), p);
    for (int k = w.lo; k <= w.hi; ++k) {
        auto env = env_q(w, k, b);
        Rat total = 0;
        for (size_t i = 0; i < us.size(); ++i)
            total += eval_term_padic(us[i], env, p, seq) *
                     eval_term_padic(rs[i], env, p, seq);
        long lhs = finite_vp(total, p);
        long rhs = finite_vp(eval_term_padic(sep.u, env, p, seq), p) + rv;
        if (lhs != rhs)
            throw error("SeparationUnsound",
                        "internal check failed: the decomposition does not "
                        "match the sum's valuation");
    }
    return sep;
}

Separation separate_padic(const TermPtr& t, const CutSequence& cs,
                          const Rat& b, const Int& p,
                          const SparseSequence& seq, const std::string& yvar) {
    finite_vp(Rat(1), p); // validates that p is prime before any window work

    Working w;
    w.init(cs, seq, yvar, true);
    PFrac f = sep_p_rec(t, w, b, p);

    Separation sep;
    sep.dialect = Dialect::Padic;
    sep.yvar = yvar;
    bool unit_den = f.den.size() == 1 && term_is_const(f.den[0].u, 1) &&
                    term_is_const(f.den[0].r, 1);
    if (unit_den && f.num.size() == 1) {
        sep.form = Separation::Form::Product;
        sep.u = f.num[0].u;
        sep.r = f.num[0].r;
    } else {
        sep.form = Separation::Form::Fraction;
        sep.num = f.num;
        sep.den = f.den;
    }
    fill_result(sep, w);
    if (!check_separation_values(t, sep, cs, b, seq, p))
        throw error("SeparationUnsound",
                    "internal check failed: the multiplicative split does "
                    "not re-evaluate to the input term");
    return sep;
}

bool verify_separation(const TermPtr& t, const Separation& sep,
                       const CutSequence& cs, const Rat& b,
                       const SparseSequence& seq, const Int& p) {
    try {
        return check_separation_values(t, sep, cs, b, seq, p);
    } catch (const error&) {
        return false;
    }
}

} // namespace sparse_arith
