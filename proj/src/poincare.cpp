#include "sparse_arith/poincare.hpp"

#include <algorithm>
#include <sstream>

#include "sparse_arith/errors.hpp"
#include "sparse_arith/padic.hpp"

namespace sparse_arith {

// ------------------------------------------------------------------- specs

ExponentSetSpec ExponentSetSpec::all_naturals() {
    ExponentSetSpec s;
    s.kind = ExponentSetKind::AllNaturals;
    return s;
}

ExponentSetSpec ExponentSetSpec::sparse_image(SparseSequence seq) {
    if (seq.term(0) < 0)
        throw precondition_violated(
            "sequence values act as exponents and must be nonnegative; " +
            seq.name() + " starts at " + seq.term(0).get_str());
    ExponentSetSpec s;
    s.kind = ExponentSetKind::SparseImage;
    s.seq = std::move(seq);
    return s;
}

ExponentSetSpec ExponentSetSpec::explicit_list(std::vector<Int> es,
                                               bool include_zero) {
    for (const Int& e : es)
        if (e < 0)
            throw precondition_violated("exponent " + e.get_str() +
                                        " is negative");
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    if (es.empty() && !include_zero)
        throw precondition_violated("exponent set is empty");
    ExponentSetSpec s;
    s.kind = ExponentSetKind::ExplicitList;
    s.exponents = std::move(es);
    s.include_zero = include_zero;
    return s;
}

std::string ExponentSetSpec::describe() const {
    switch (kind) {
    case ExponentSetKind::AllNaturals:
        return "all-naturals";
    case ExponentSetKind::SparseImage:
        return "sparse-image:" + seq->name();
    case ExponentSetKind::ExplicitList: {
        std::ostringstream os;
        os << "explicit-list[";
        for (size_t i = 0; i < exponents.size(); ++i) {
            if (i) os << ",";
            os << exponents[i].get_str();
        }
        os << "]";
        if (include_zero) os << "+0";
        return os.str();
    }
    }
    return "?";
}

json ExponentSetSpec::to_json() const {
    json j;
    switch (kind) {
    case ExponentSetKind::AllNaturals:
        j["kind"] = "all-naturals";
        break;
    case ExponentSetKind::SparseImage:
        j["kind"] = "sparse-image";
        j["sequence"] = seq->name();
        break;
    case ExponentSetKind::ExplicitList:
        j["kind"] = "explicit-list";
        j["exponents"] = json::array();
        for (const Int& e : exponents) j["exponents"].push_back(int_to_json(e));
        break;
    }
    if (include_zero) j["include_zero"] = true;
    return j;
}

// ------------------------------------------------------------------ counts

namespace {

// |{e in E : e < m}| together with whether the set reaches valuation >= m.
// Exactness for a sequence image needs the window to reach m: off-window
// exponents exceed the last window value, so once that value is >= m they
// can neither extend the count nor be needed as the tail witness.
struct ResidueSplit {
    Int below;
    bool tail;
};

ResidueSplit split_at(const ExponentSetSpec& spec, long m) {
    switch (spec.kind) {
    case ExponentSetKind::AllNaturals:
        return {Int(m), true};
    case ExponentSetKind::SparseImage: {
        const std::vector<Int>& w = spec.seq->window();
        if (w.back() < m)
            throw index_beyond_horizon(
                "residue count modulo p^" + std::to_string(m) +
                " needs exponents up to " + std::to_string(m) + ", but " +
                spec.seq->name() + " only reaches " + w.back().get_str() +
                " within its window");
        auto it = std::lower_bound(w.begin(), w.end(), Int(m));
        return {Int(static_cast<long>(it - w.begin())),
                spec.include_zero || it != w.end()};
    }
    case ExponentSetKind::ExplicitList: {
        auto it = std::lower_bound(spec.exponents.begin(),
                                   spec.exponents.end(), Int(m));
        return {Int(static_cast<long>(it - spec.exponents.begin())),
                spec.include_zero || it != spec.exponents.end()};
    }
    }
    throw precondition_violated("unhandled exponent-set kind");
}

// Membership of m in E, exact under the same window condition as split_at.
bool contains_exponent(const ExponentSetSpec& spec, long m) {
    if (m < 0) return false;
    switch (spec.kind) {
    case ExponentSetKind::AllNaturals:
        return true;
    case ExponentSetKind::SparseImage: {
        const std::vector<Int>& w = spec.seq->window();
        if (w.back() < m)
            throw index_beyond_horizon(
                "membership of " + std::to_string(m) + " in the image of " +
                spec.seq->name() + " is not decided by its window");
        return std::binary_search(w.begin(), w.end(), Int(m));
    }
    case ExponentSetKind::ExplicitList:
        return std::binary_search(spec.exponents.begin(),
                                  spec.exponents.end(), Int(m));
    }
    throw precondition_violated("unhandled exponent-set kind");
}

void validate_prime(const Int& p) {
    vp(Rat(1), p); // rejects nonprime moduli
}

} // namespace

Int count_residues(const ExponentSetSpec& spec, const Int& p, long m) {
    validate_prime(p);
    if (m < 0) throw precondition_violated("negative modulus exponent");
    ResidueSplit s = split_at(spec, m);
    // Distinct nonzero residues p^e for e < m, plus the residue 0 shared by
    // every element of valuation >= m.
    return s.below + (s.tail ? 1 : 0);
}

PoincareSeries series(const ExponentSetSpec& spec, const Int& p, long M) {
    validate_prime(p);
    if (M < 0) throw precondition_violated("negative series degree");
    PoincareSeries ps;
    ps.p = p;
    ps.spec = spec;
    ps.coeffs.reserve(static_cast<size_t>(M) + 1);
    for (long m = 0; m <= M; ++m)
        ps.coeffs.push_back(count_residues(spec, p, m));
    return ps;
}

// -------------------------------------------------------------- recurrence

namespace {

// Exact least-constrained solve of a[m] = sum_i c[i-1] * a[m-i] over the
// rows m in [first, n): full reduction; nullopt when inconsistent, free
// coefficients set to zero otherwise.
std::optional<std::vector<Rat>> solve_rows(const std::vector<Int>& a, int L,
                                           long first) {
    const long n = static_cast<long>(a.size());
    std::vector<std::vector<Rat>> rows;
    rows.reserve(static_cast<size_t>(n - first));
    for (long m = first; m < n; ++m) {
        std::vector<Rat> row(static_cast<size_t>(L) + 1);
        for (int i = 1; i <= L; ++i)
            row[static_cast<size_t>(i - 1)] = Rat(a[static_cast<size_t>(m - i)]);
        row[static_cast<size_t>(L)] = Rat(a[static_cast<size_t>(m)]);
        rows.push_back(std::move(row));
    }
    int rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < L && rank < static_cast<int>(rows.size()); ++col) {
        int pr = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(pr)]);
        std::vector<Rat>& prow = rows[static_cast<size_t>(rank)];
        Rat piv = prow[static_cast<size_t>(col)];
        for (int c2 = col; c2 <= L; ++c2) prow[static_cast<size_t>(c2)] /= piv;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank) continue;
            Rat f = rows[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (int c2 = col; c2 <= L; ++c2)
                rows[static_cast<size_t>(r)][static_cast<size_t>(c2)] -=
                    f * prow[static_cast<size_t>(c2)];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (rows[static_cast<size_t>(r)][static_cast<size_t>(L)] != 0)
            return std::nullopt;
    std::vector<Rat> c(static_cast<size_t>(L), Rat(0));
    for (int i = 0; i < rank; ++i)
        c[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] =
            rows[static_cast<size_t>(i)][static_cast<size_t>(L)];
    return c;
}

bool row_holds(const std::vector<Int>& a, const std::vector<Rat>& c, long m) {
    const int L = static_cast<int>(c.size());
    Rat acc(0);
    for (int i = 1; i <= L; ++i)
        acc += c[static_cast<size_t>(i - 1)] * Rat(a[static_cast<size_t>(m - i)]);
    return acc == Rat(a[static_cast<size_t>(m)]);
}

} // namespace

std::optional<RecurrenceCertificate>
detect_recurrence(const std::vector<Int>& coeffs, int K) {
    if (K < 1) throw precondition_violated("order bound must be positive");
    const long n = static_cast<long>(coeffs.size());
    if (n < 4L * K)
        throw insufficient_data(
            "recurrence search up to order " + std::to_string(K) + " needs " +
            std::to_string(4L * K) + " coefficients, got " + std::to_string(n));
    for (int L = 1; L <= K; ++L) {
        // Rows beyond index K + L sit past every admissible transient, so
        // they constrain the coefficients for any transient choice.
        std::optional<std::vector<Rat>> c = solve_rows(coeffs, L, K + L);
        if (!c) continue;
        long m = K + L - 1;
        while (m >= L && row_holds(coeffs, *c, m)) --m;
        const int transient = static_cast<int>(m - L + 1);
        bool ok = true;
        for (long mm = transient + L; mm < n; ++mm)
            if (!row_holds(coeffs, *c, mm)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        RecurrenceCertificate cert;
        cert.order = L;
        cert.coeffs = std::move(*c);
        cert.transient = transient;
        return cert;
    }
    return std::nullopt;
}

json RecurrenceCertificate::to_json() const {
    json j;
    j["order"] = order;
    j["coeffs"] = json::array();
    for (const Rat& c : coeffs) j["coeffs"].push_back(rat_to_json(c));
    j["transient"] = transient;
    return j;
}

// ---------------------------------------------------------------- identity

bool check_difference_identity(const PoincareSeries& ps) {
    if (ps.coeffs.empty())
        throw precondition_violated("empty coefficient table");
    if (ps.coeffs[0] != 1) return false;
    for (size_t m = 1; m < ps.coeffs.size(); ++m) {
        Int diff = ps.coeffs[m] - ps.coeffs[m - 1];
        Int expected =
            contains_exponent(ps.spec, static_cast<long>(m) - 1) ? 1 : 0;
        if (diff != expected) return false;
    }
    return true;
}

bool check_difference_identity(const ExponentSetSpec& spec, const Int& p,
                               long M) {
    return check_difference_identity(series(spec, p, M));
}

// ---------------------------------------------------------------- emitters

std::string series_to_csv(const PoincareSeries& ps) {
    std::ostringstream os;
    os << "m,count\n";
    for (size_t m = 0; m < ps.coeffs.size(); ++m)
        os << m << "," << ps.coeffs[m].get_str() << "\n";
    return os.str();
}

json series_to_json(const PoincareSeries& ps) {
    json j;
    j["schema"] = 1;
    j["p"] = int_to_json(ps.p);
    j["set"] = ps.spec.to_json();
    j["coeffs"] = json::array();
    for (const Int& c : ps.coeffs) j["coeffs"].push_back(int_to_json(c));
    return j;
}

} // namespace sparse_arith
