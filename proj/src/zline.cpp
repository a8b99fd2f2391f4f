#include "sparse_arith/zline.hpp"

namespace sparse_arith {

int lambda_index(const Int& x, const SparseSequence& seq) {
    if (x > seq.term(seq.horizon()))
        throw index_beyond_horizon("value exceeds the last window element of '" +
                                   seq.name() + "'");
    if (x < seq.term(0)) return 0;
    // Binary search: largest n with r_n <= x.
    int lo = 0, hi = seq.horizon();
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        if (seq.term(mid) <= x) lo = mid; else hi = mid - 1;
    }
    return lo;
}

Int lambda_z(const Int& x, const SparseSequence& seq) {
    return seq.term(lambda_index(x, seq));
}

Int succ_z(const Int& x, const SparseSequence& seq) {
    int n = lambda_index(x, seq);
    if (n + 1 > seq.horizon())
        throw index_beyond_horizon("successor leaves the window of '" +
                                   seq.name() + "'");
    return seq.term(n + 1);
}

Int pred_z(const Int& x, const SparseSequence& seq) {
    int n = lambda_index(x, seq);
    return seq.term(n > 0 ? n - 1 : 0);
}

Int shift_z(const Int& x, int z, const SparseSequence& seq) {
    int n = lambda_index(x, seq) + z;
    if (n < 0) n = 0; // iterated predecessor sticks at r_0
    if (n > seq.horizon())
        throw index_beyond_horizon("shifted index " + std::to_string(n) +
                                   " leaves the window of '" + seq.name() + "'");
    return seq.term(n);
}

Int eval_term_z(const TermPtr& t, const std::map<std::string, Int>& env,
                const SparseSequence& seq) {
    switch (t->kind) {
    case TermKind::Const:
    case TermKind::Param:
        if (t->value.get_den() != 1)
            throw precondition_violated("non-integer constant in additive term");
        return Int(t->value.get_num());
    case TermKind::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw unbound_variable("variable '" + t->name + "'");
        return it->second;
    }
    case TermKind::Add: return eval_term_z(t->a, env, seq) + eval_term_z(t->b, env, seq);
    case TermKind::Sub: return eval_term_z(t->a, env, seq) - eval_term_z(t->b, env, seq);
    case TermKind::Neg: return -eval_term_z(t->a, env, seq);
    case TermKind::Lambda: return lambda_z(eval_term_z(t->a, env, seq), seq);
    case TermKind::Succ: return succ_z(eval_term_z(t->a, env, seq), seq);
    case TermKind::Pred: return pred_z(eval_term_z(t->a, env, seq), seq);
    default:
        throw precondition_violated("multiplicative node in additive term");
    }
}

} // namespace sparse_arith
