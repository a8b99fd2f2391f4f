#include "sparse_arith/cli.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "sparse_arith/dominant.hpp"
#include "sparse_arith/errors.hpp"
#include "sparse_arith/poincare.hpp"
#include "sparse_arith/registry.hpp"
#include "sparse_arith/varsep.hpp"

namespace sparse_arith {

namespace {

constexpr std::size_t kMaxInputLen = 65536;

// ------------------------------------------------------------ small parsing

Int parse_int_arg(const std::string& s, const char* what) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    bool ok = i < s.size();
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) ok = false;
    if (!ok)
        throw usage_error(std::string(what) + " expects an integer, got '" +
                          s + "'");
    return Int(s);
}

Rat parse_rat_arg(const std::string& s, const char* what) {
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int_arg(s, what));
    Int num = parse_int_arg(s.substr(0, slash), what);
    Int den = parse_int_arg(s.substr(slash + 1), what);
    if (den == 0)
        throw usage_error(std::string(what) + " has a zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// "x=5, y=12" -> name/value pairs, values parsed by the callback.
template <typename V, typename Parse>
std::map<std::string, V> parse_env(const std::string& text, Parse parse) {
    std::map<std::string, V> env;
    if (trimmed(text).empty()) return env;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw usage_error("--env entries look like name=value; got '" +
                              trimmed(item) + "'");
        std::string name = trimmed(item.substr(0, eq));
        std::string value = trimmed(item.substr(eq + 1));
        if (name.empty())
            throw usage_error("--env entry with an empty name");
        env[name] = parse(value);
    }
    return env;
}

void check_len(const std::string& s, const char* what) {
    if (s.size() > kMaxInputLen)
        throw usage_error(std::string(what) + " exceeds the " +
                          std::to_string(kMaxInputLen) + "-byte input limit");
}

// --------------------------------------------------------------- rendering

json base(const char* verb) {
    json j;
    j["schema"] = 1;
    j["verb"] = verb;
    return j;
}

void emit(std::ostream& out, const json& j) { out << j.dump() << "\n"; }

std::string join_longs(const std::vector<long>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(xs[i]);
    }
    return out;
}

std::string formal_valuation_text(const FormalValuation& fv) {
    std::string out = std::to_string(fv.offset);
    for (std::size_t i = 0; i < fv.exps.size(); ++i) {
        if (fv.exps[i] == 0) continue;
        out += " + " + std::to_string(fv.exps[i]) + "*r[N+" +
               std::to_string(i) + "]";
    }
    return out;
}

std::string rat_text(const Rat& q) { return q.get_str(); }

// ----------------------------------------------------------------- options

struct Opts {
    std::string format = "text";
    std::string registry_path;

    std::string seq = "pow2";
    std::string A, B;
    std::string term, env_text, poly, cut_path;
    std::string set = "pR";
    std::string b = "0", offset = "0", p = "2";
    std::string dialect = "z", yvar = "y";

    long M = 16, K = 8, n = 0;
    int d = 1, dmax = 4, lo = -32, hi = 32;
    int reach = 2, coeff_max = 4, delta_max = 12;
    bool include_zero = false;
};

void require_text_or_json(const Opts& o) {
    if (o.format == "csv")
        throw usage_error("csv output is only available for poincare-series");
}

Registry registry_for(const Opts& o) { return load_registry(o.registry_path); }

ExponentSetSpec parse_set_spec(const Opts& o, const Registry& reg) {
    if (o.set == "pZ") {
        ExponentSetSpec s = ExponentSetSpec::all_naturals();
        s.include_zero = o.include_zero;
        return s;
    }
    if (o.set == "pR") {
        ExponentSetSpec s = ExponentSetSpec::sparse_image(reg.get(o.seq));
        s.include_zero = o.include_zero;
        return s;
    }
    if (o.set.rfind("list:", 0) == 0) {
        std::vector<Int> es;
        std::stringstream ss(o.set.substr(5));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!trimmed(item).empty())
                es.push_back(parse_int_arg(trimmed(item), "--set list entry"));
        return ExponentSetSpec::explicit_list(std::move(es), o.include_zero);
    }
    throw usage_error(
        "--set expects pZ, pR, or list:<comma-separated exponents>; got '" +
        o.set + "'");
}

// -------------------------------------------------------------------- verbs

void cmd_seq_compare(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    check_len(o.A, "--A");
    check_len(o.B, "--B");
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);
    Operator A = parse_operator(o.A);
    Operator B = parse_operator(o.B);
    CompareResult res = op_compare_ae(A, B, seq);
    if (o.format == "json") {
        json j = base("seq-compare");
        j["seq"] = o.seq;
        j["A"] = A.to_string();
        j["B"] = B.to_string();
        j["verdict"] = cmp_name(res.verdict);
        if (res.verdict == Cmp::UNKNOWN)
            j["witness_from"] = nullptr;
        else
            j["witness_from"] = res.witness_from;
        emit(out, j);
        return;
    }
    out << "verdict: " << cmp_name(res.verdict);
    if (res.verdict != Cmp::UNKNOWN)
        out << " (agrees from index " << res.witness_from << ")";
    out << "\n";
}

void cmd_seq_delta(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);
    Operator A = parse_operator(o.A);
    Operator B = parse_operator(o.B);
    std::optional<int> delta = delta_witness(A, B, seq, o.delta_max);
    if (o.format == "json") {
        json j = base("seq-delta");
        j["seq"] = o.seq;
        j["A"] = A.to_string();
        j["B"] = B.to_string();
        j["delta_max"] = o.delta_max;
        if (delta)
            j["delta"] = *delta;
        else
            j["delta"] = nullptr;
        emit(out, j);
        return;
    }
    if (delta)
        out << "delta: " << *delta << "\n";
    else
        out << "delta: none up to " << o.delta_max << "\n";
}

void cmd_seq_bound(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);
    Operator A = parse_operator(o.A);
    BoundResult res = op_bound(A, seq, o.lo, o.hi);
    if (o.format == "json") {
        json j = base("seq-bound");
        j["seq"] = o.seq;
        j["A"] = A.to_string();
        j["m"] = res.m;
        j["exact"] = res.exact;
        emit(out, j);
        return;
    }
    if (res.exact)
        out << "A =ae S^" << res.m << "\n";
    else
        out << "S^" << res.m << " <ae A <ae S^" << res.m + 1 << "\n";
}

void cmd_seq_degree(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);
    std::optional<DegreeCertificate> cert = degree(seq, o.dmax);
    if (o.format == "json") {
        json j = base("seq-degree");
        j["seq"] = o.seq;
        j["d_max"] = o.dmax;
        if (cert) {
            j["degree"] = cert->d;
            j["vanishing"] = cert->op.to_string();
        } else {
            j["degree"] = nullptr;
            j["vanishing"] = nullptr;
        }
        emit(out, j);
        return;
    }
    if (cert)
        out << "degree: " << cert->d << "\nvanishing: " << cert->op.to_string()
            << "\n";
    else
        out << "degree: none up to " << o.dmax << "\n";
}

void cmd_seq_verify(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);
    AlmostSparseReport rep =
        verify_almost_sparse(seq, o.reach, o.coeff_max, o.delta_max);
    if (o.format == "json") {
        json j = base("seq-verify");
        j["seq"] = o.seq;
        j["report"] = rep.to_json();
        emit(out, j);
        return;
    }
    json r = rep.to_json();
    out << "verdict: " << r.at("verdict").get<std::string>() << "\n";
    out << "difference operators: " << rep.pairs_distinct << "\n";
    out << "counts: gt=" << rep.count_gt << " lt=" << rep.count_lt
        << " eq=" << rep.count_eq << " unknown=" << rep.count_unknown << "\n";
    out << "max delta used: " << rep.max_delta_used << "\n";
    if (rep.has_violation)
        out << "violation: A = " << rep.violation_A.to_string()
            << ", B = " << rep.violation_B.to_string() << "\n";
    if (rep.has_unknown)
        out << "unknown pair: A = " << rep.unknown_A.to_string()
            << ", B = " << rep.unknown_B.to_string() << "\n";
}

void cmd_z_eval(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    check_len(o.term, "--term");
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);
    TermPtr t = parse_term(o.term, Dialect::Z);
    auto env = parse_env<Int>(o.env_text, [](const std::string& v) {
        return parse_int_arg(v, "--env value");
    });
    Int value = eval_term_z(t, env, seq);
    if (o.format == "json") {
        json j = base("z-eval");
        j["seq"] = o.seq;
        j["term"] = render_term(t);
        j["value"] = int_to_json(value);
        emit(out, j);
        return;
    }
    out << value.get_str() << "\n";
}

ExtElement ext_from_opts(const Opts& o, const Registry& reg) {
    Ambient amb = make_ambient(reg.get(o.seq));
    Operator A = parse_operator(o.A);
    Int a = parse_int_arg(o.offset, "--offset");
    return make_ext(amb, A, a);
}

void cmd_ext_sign(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Registry reg = registry_for(o);
    ExtElement e = ext_from_opts(o, reg);
    ExtSign s = ext_sign(e);
    if (o.format == "json") {
        json j = base("ext-sign");
        j["element"] = e.to_json();
        j["sign"] = ext_sign_name(s);
        emit(out, j);
        return;
    }
    out << "sign: " << ext_sign_name(s) << "\n";
}

void cmd_ext_lambda(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Registry reg = registry_for(o);
    ExtElement e = ext_from_opts(o, reg);
    ExtElement fl = ext_lambda(e);
    if (o.format == "json") {
        json j = base("ext-lambda");
        j["element"] = e.to_json();
        j["floor"] = fl.to_json();
        emit(out, j);
        return;
    }
    out << "floor operator: " << fl.A.to_string() << "\n"
        << "floor offset: " << fl.a.get_str() << "\n";
}

void cmd_padic_eval(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    check_len(o.term, "--term");
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);
    Int p = parse_int_arg(o.p, "--p");
    TermPtr t = parse_term(o.term, Dialect::Padic);
    auto env = parse_env<Rat>(o.env_text, [](const std::string& v) {
        return parse_rat_arg(v, "--env value");
    });
    Rat value = eval_term_padic(t, env, p, seq);
    Valuation v = vp(value, p);
    Rat unit_part = pi_value(value, p);
    if (o.format == "json") {
        json j = base("padic-eval");
        j["seq"] = o.seq;
        j["p"] = int_to_json(p);
        j["term"] = render_term(t);
        j["value"] = rat_to_json(value);
        if (v.infinite)
            j["vp"] = nullptr;
        else
            j["vp"] = v.v;
        j["pi"] = rat_to_json(unit_part);
        emit(out, j);
        return;
    }
    out << "value: " << rat_text(value) << "\n";
    if (v.infinite)
        out << "vp: infinite\n";
    else
        out << "vp: " << v.v << "\n";
    out << "pi: " << rat_text(unit_part) << "\n";
}

void cmd_padic_cosets(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Int p = parse_int_arg(o.p, "--p");
    CosetTable table = pn_cosets(p, static_cast<int>(o.n));
    if (o.format == "json") {
        json j = base("padic-cosets");
        j["table"] = table.to_json();
        emit(out, j);
        return;
    }
    out << "index: " << table.reps.size() << "\n";
    out << "reps:";
    for (const Int& r : table.reps) out << " " << r.get_str();
    out << "\n";
    out << "threshold: " << table.threshold << "\n";
}

void cmd_dominant(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    check_len(o.poly, "--poly");
    Registry reg = registry_for(o);
    Int p = parse_int_arg(o.p, "--p");
    Ambient amb = make_ambient(reg.get(o.seq));
    SparsePoly P = parse_poly(o.poly, p, amb, o.d);
    Monomial dom = dominant_term(P);
    FormalValuation fv = poly_vp(P);
    Monomial unit = poly_pi(P);
    std::optional<std::pair<int, Int>> coset; // (N, representative)
    if (o.n != 0) {
        CosetTable table = pn_cosets(p, static_cast<int>(o.n));
        int N = default_index(P);
        coset = {N, poly_pn_class(P, table, N)};
    }
    if (o.format == "json") {
        json j = base("dominant");
        j["seq"] = o.seq;
        j["p"] = int_to_json(p);
        j["poly"] = P.to_string();
        j["dominant"] = dom.to_string();
        j["vp"] = fv.to_json();
        j["pi"] = unit.to_string();
        if (coset) {
            j["coset"] = json{{"n", o.n},
                              {"N", coset->first},
                              {"rep", int_to_json(coset->second)}};
        } else {
            j["coset"] = nullptr;
        }
        emit(out, j);
        return;
    }
    out << "dominant: " << dom.to_string() << "\n";
    out << "vp: " << formal_valuation_text(fv) << "\n";
    out << "pi: " << unit.to_string() << "\n";
    if (coset)
        out << "coset rep (n=" << o.n << ", N=" << coset->first
            << "): " << coset->second.get_str() << "\n";
}

void cmd_separate(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    check_len(o.term, "--term");
    Registry reg = registry_for(o);
    const SparseSequence& seq = reg.get(o.seq);

    std::ifstream in(o.cut_path);
    if (!in)
        throw registry_error("cannot read cut file '" + o.cut_path + "'");
    json cut_doc;
    try {
        in >> cut_doc;
    } catch (const json::exception& e) {
        throw registry_error("cut file '" + o.cut_path +
                             "' is not valid JSON: " + e.what());
    }
    CutSequence cs = CutSequence::from_json(cut_doc);

    Separation sep;
    Rat b_value;
    if (o.dialect == "z") {
        Int b = parse_int_arg(o.b, "--b");
        b_value = Rat(b);
        TermPtr t = parse_term(o.term, Dialect::Z);
        sep = separate_z(t, cs, b, seq, o.yvar);
    } else {
        Int p = parse_int_arg(o.p, "--p");
        b_value = parse_rat_arg(o.b, "--b");
        TermPtr t = parse_term(o.term, Dialect::Padic);
        sep = separate_padic(t, cs, b_value, p, seq, o.yvar);
    }

    if (o.format == "json") {
        json j = base("separate");
        json body = sep.to_json();
        for (const auto& [key, val] : body.items())
            if (key != "schema") j[key] = val;
        emit(out, j);
        return;
    }
    json s = sep.to_json();
    out << "form: " << s.at("form").get<std::string>() << "\n";
    if (sep.form == Separation::Form::Fraction) {
        for (std::size_t i = 0; i < sep.num.size(); ++i)
            out << "num[" << i << "]: (" << render_term(sep.num[i].u)
                << ") * (" << render_term(sep.num[i].r) << ")\n";
        for (std::size_t i = 0; i < sep.den.size(); ++i)
            out << "den[" << i << "]: (" << render_term(sep.den[i].u)
                << ") * (" << render_term(sep.den[i].r) << ")\n";
    } else {
        out << "u: " << render_term(sep.u) << "\n";
        out << "r: " << render_term(sep.r) << "\n";
    }
    out << "retained_left: " << join_longs(sep.retained_left) << "\n";
    out << "cut: " << sep.cut_index << "\n";
    out << "retained_right: " << join_longs(sep.retained_right) << "\n";
    out << "params:";
    for (const auto& [label, value] : sep.params)
        out << " " << label << "=" << rat_text(value);
    out << "\n";
    out << "trace:";
    for (const std::string& step : sep.case_trace) out << " " << step;
    out << "\n";
}

void cmd_poincare_series(const Opts& o, std::ostream& out) {
    Registry reg = registry_for(o);
    Int p = parse_int_arg(o.p, "--p");
    ExponentSetSpec spec = parse_set_spec(o, reg);
    PoincareSeries ps = series(spec, p, o.M);
    if (o.format == "json") {
        json j = base("poincare-series");
        j["p"] = int_to_json(p);
        j["set"] = spec.to_json();
        j["M"] = o.M;
        j["coeffs"] = json::array();
        for (const Int& c : ps.coeffs) j["coeffs"].push_back(int_to_json(c));
        emit(out, j);
        return;
    }
    if (o.format == "csv") {
        out << series_to_csv(ps);
        return;
    }
    out << "[";
    for (std::size_t i = 0; i < ps.coeffs.size(); ++i) {
        if (i) out << ",";
        out << ps.coeffs[i].get_str();
    }
    out << "]\n";
}

void cmd_poincare_rational(const Opts& o, std::ostream& out) {
    require_text_or_json(o);
    Registry reg = registry_for(o);
    Int p = parse_int_arg(o.p, "--p");
    ExponentSetSpec spec = parse_set_spec(o, reg);
    PoincareSeries ps = series(spec, p, o.M);
    std::optional<RecurrenceCertificate> cert =
        detect_recurrence(ps.coeffs, static_cast<int>(o.K));
    if (o.format == "json") {
        json j = base("poincare-rational");
        j["p"] = int_to_json(p);
        j["set"] = spec.to_json();
        j["M"] = o.M;
        j["K"] = o.K;
        j["rational"] = cert.has_value();
        if (cert)
            j["certificate"] = cert->to_json();
        else
            j["certificate"] = nullptr;
        emit(out, j);
        return;
    }
    if (!cert) {
        out << "rational: no (searched orders 1.." << o.K << ", transient <= "
            << o.K << ", " << ps.coeffs.size() << " coefficients)\n";
        return;
    }
    out << "rational: yes\n";
    out << "order: " << cert->order << "\n";
    out << "coeffs: [";
    for (std::size_t i = 0; i < cert->coeffs.size(); ++i) {
        if (i) out << ", ";
        out << rat_text(cert->coeffs[i]);
    }
    out << "]\n";
    out << "transient: " << cert->transient << "\n";
}

} // namespace

// ---------------------------------------------------------------- dispatch

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"exact-arithmetic workbench for sparse integer scales and "
                 "p-adic power sets"};
    app.require_subcommand(1);

    Opts o;
    app.add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--registry", o.registry_path,
                   "registry JSON file (default: $SPARSE_ARITH_REGISTRY, "
                   "else builtins)");

    auto add_verb = [&](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        return sub;
    };
    auto seq_opt = [&](CLI::App* sub, bool required) {
        CLI::Option* opt = sub->add_option("--seq", o.seq, "sequence name");
        if (required)
            opt->required();
        else
            opt->capture_default_str();
    };

    CLI::App* c1 = add_verb("seq-compare",
                            "eventual comparison of two shift operators");
    seq_opt(c1, true);
    c1->add_option("--A", o.A, "left operator, e.g. \"S^2 - S^1\"")->required();
    c1->add_option("--B", o.B, "right operator")->required();
    c1->callback([&] { cmd_seq_compare(o, out); });

    CLI::App* c2 = add_verb("seq-delta",
                            "least shift making A dominate B plus the scale");
    seq_opt(c2, true);
    c2->add_option("--A", o.A)->required();
    c2->add_option("--B", o.B)->required();
    c2->add_option("--delta-max", o.delta_max)->capture_default_str();
    c2->callback([&] { cmd_seq_delta(o, out); });

    CLI::App* c3 = add_verb("seq-bound",
                            "bracket a positive operator between shifts");
    seq_opt(c3, true);
    c3->add_option("--A", o.A)->required();
    c3->add_option("--lo", o.lo)->capture_default_str();
    c3->add_option("--hi", o.hi)->capture_default_str();
    c3->callback([&] { cmd_seq_bound(o, out); });

    CLI::App* c4 = add_verb("seq-degree",
                            "least order of a vanishing operator");
    seq_opt(c4, true);
    c4->add_option("--dmax", o.dmax)->capture_default_str();
    c4->callback([&] { cmd_seq_degree(o, out); });

    CLI::App* c5 = add_verb("seq-verify",
                            "sweep operator pairs for the sparseness "
                            "conditions");
    seq_opt(c5, true);
    c5->add_option("--reach", o.reach)->capture_default_str();
    c5->add_option("--coeff-max", o.coeff_max)->capture_default_str();
    c5->add_option("--delta-max", o.delta_max)->capture_default_str();
    c5->callback([&] { cmd_seq_verify(o, out); });

    CLI::App* c6 = add_verb("z-eval",
                            "evaluate an additive term over a sequence");
    seq_opt(c6, true);
    c6->add_option("--term", o.term, "term, e.g. \"S(L(x+y))\"")->required();
    c6->add_option("--env", o.env_text, "bindings, e.g. \"x=5,y=12\"");
    c6->callback([&] { cmd_z_eval(o, out); });

    CLI::App* c7 = add_verb("ext-sign",
                            "sign of an extension element A(b) + a");
    seq_opt(c7, true);
    c7->add_option("--A", o.A, "operator applied to the generator")
        ->required();
    c7->add_option("--offset", o.offset)->capture_default_str();
    c7->callback([&] { cmd_ext_sign(o, out); });

    CLI::App* c8 = add_verb("ext-lambda",
                            "floor of an extension element onto the scale");
    seq_opt(c8, true);
    c8->add_option("--A", o.A)->required();
    c8->add_option("--offset", o.offset)->capture_default_str();
    c8->callback([&] { cmd_ext_lambda(o, out); });

    CLI::App* c9 = add_verb("padic-eval",
                            "evaluate a multiplicative term exactly");
    seq_opt(c9, false);
    c9->add_option("--p", o.p, "prime modulus")->capture_default_str();
    c9->add_option("--term", o.term, "term, e.g. \"pi(x*y)\"")->required();
    c9->add_option("--env", o.env_text, "bindings, e.g. \"x=6,y=1/3\"");
    c9->callback([&] { cmd_padic_eval(o, out); });

    CLI::App* c10 = add_verb("padic-cosets",
                             "coset table of the nonzero n-th powers");
    c10->add_option("--p", o.p, "prime modulus")->required();
    c10->add_option("--n", o.n, "power exponent (>= 2)")->required();
    c10->callback([&] { cmd_padic_cosets(o, out); });

    CLI::App* c11 = add_verb("dominant",
                             "dominant term of a polynomial in scale points");
    seq_opt(c11, true);
    c11->add_option("--p", o.p, "prime modulus")->required();
    c11->add_option("--poly", o.poly, "polynomial, e.g. \"X0^2 + 7*X0\"")
        ->required();
    c11->add_option("--d", o.d, "number of scale points")
        ->capture_default_str();
    c11->add_option("--n", o.n,
                    "also report the n-th power coset class (0 = skip)")
        ->capture_default_str();
    c11->callback([&] { cmd_dominant(o, out); });

    CLI::App* c12 = add_verb("separate",
                             "split a two-group term across a cut");
    seq_opt(c12, true);
    c12->add_option("--term", o.term)->required();
    c12->add_option("--cut", o.cut_path, "cut-sequence JSON file")->required();
    c12->add_option("--b", o.b, "value at the cut")->required();
    c12->add_option("--dialect", o.dialect)
        ->check(CLI::IsMember({"z", "padic"}))
        ->capture_default_str();
    c12->add_option("--p", o.p, "prime modulus (padic dialect)")
        ->capture_default_str();
    c12->add_option("--yvar", o.yvar)->capture_default_str();
    c12->callback([&] { cmd_separate(o, out); });

    CLI::App* c13 = add_verb("poincare-series",
                             "residue-count table of a p-adic power set");
    c13->add_option("--set", o.set,
                    "pZ (all powers), pR (sequence-image exponents), or "
                    "list:e1,e2,...")
        ->capture_default_str();
    seq_opt(c13, false);
    c13->add_option("--p", o.p, "prime modulus")->required();
    c13->add_option("--M", o.M, "table degree")->required();
    c13->add_flag("--include-zero", o.include_zero,
                  "adjoin the limit point 0 to the set");
    c13->callback([&] { cmd_poincare_series(o, out); });

    CLI::App* c14 = add_verb("poincare-rational",
                             "bounded-order recurrence search on the table");
    c14->add_option("--set", o.set)->capture_default_str();
    seq_opt(c14, false);
    c14->add_option("--p", o.p, "prime modulus")->required();
    c14->add_option("--M", o.M, "table degree")->required();
    c14->add_option("--K", o.K, "max recurrence order and transient")
        ->capture_default_str();
    c14->add_flag("--include-zero", o.include_zero);
    c14->callback([&] { cmd_poincare_rational(o, out); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace sparse_arith
