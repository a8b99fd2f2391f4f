#pragma once

#include <map>
#include <string>

#include "sparse_arith/sequences.hpp"
#include "sparse_arith/term.hpp"

namespace sparse_arith {

// Index n of the largest window value r_n <= x, or 0 when x < r_0.
// Throws index_beyond_horizon when x exceeds the last window value.
int lambda_index(const Int& x, const SparseSequence& seq);

// max{ r in the window | r <= x }, clamped to r_0 below the window.
Int lambda_z(const Int& x, const SparseSequence& seq);

// The window element after lambda_z(x); errors at the horizon.
Int succ_z(const Int& x, const SparseSequence& seq);

// The window element before lambda_z(x); clamped at r_0.
Int pred_z(const Int& x, const SparseSequence& seq);

// Iterated shift: index of lambda_z(x) moved by z, clamped at 0 below.
Int shift_z(const Int& x, int z, const SparseSequence& seq);

// Bottom-up exact evaluation of an additive-dialect term.
// Multiplicative nodes (Mul/Inv/Pi) are rejected.
Int eval_term_z(const TermPtr& t, const std::map<std::string, Int>& env,
                const SparseSequence& seq);

} // namespace sparse_arith
