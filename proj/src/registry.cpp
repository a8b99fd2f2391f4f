#include "sparse_arith/registry.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sparse_arith/errors.hpp"

namespace sparse_arith {

Registry Registry::builtins() {
    Registry r;
    r.add(SparseSequence::power("pow2", 2));
    r.add(SparseSequence::power("pow3", 3));
    r.add(SparseSequence::power("pow2x", 2, 160, 8));
    SparseSequence fib = SparseSequence::recurrence("fibonacci", {1, 1}, {1, 2},
                                                    64, 16);
    fib.set_theta({ThetaInfo::Kind::Algebraic, Rat(0), {-1, -1, 1}});
    r.add(std::move(fib));
    r.add(SparseSequence::factorial("factorial"));
    r.add(SparseSequence::affine("identity", 1, 0));
    return r;
}

void Registry::add(SparseSequence seq) {
    std::string name = seq.name();
    seqs_.insert_or_assign(std::move(name), std::move(seq));
}

const SparseSequence& Registry::get(const std::string& name) const {
    auto it = seqs_.find(name);
    if (it == seqs_.end())
        throw unknown_sequence("no sequence named '" + name +
                               "' in the registry");
    return it->second;
}

bool Registry::contains(const std::string& name) const {
    return seqs_.count(name) != 0;
}

std::vector<std::string> Registry::names() const {
    std::vector<std::string> out;
    out.reserve(seqs_.size());
    for (const auto& [name, seq] : seqs_) out.push_back(name);
    return out;
}

// ----------------------------------------------------------------- records

json sequence_to_json(const SparseSequence& seq) {
    json rec;
    rec["name"] = seq.name();
    json params;
    switch (seq.generator()) {
    case SparseSequence::Gen::ClosedForm:
        rec["kind"] = "closed_form";
        params["form"] = seq.form;
        if (seq.form == "power") {
            params["base"] = int_to_json(seq.cf_base);
        } else if (seq.form == "factorial") {
            params["shift"] = seq.cf_shift;
        } else if (seq.form == "affine") {
            params["a"] = int_to_json(seq.cf_a);
            params["b"] = int_to_json(seq.cf_b);
        }
        break;
    case SparseSequence::Gen::Recurrence:
        rec["kind"] = "recurrence";
        params["coeffs"] = json::array();
        for (const Int& c : seq.rec_coeffs)
            params["coeffs"].push_back(int_to_json(c));
        params["initial"] = json::array();
        for (const Int& c : seq.rec_initial)
            params["initial"].push_back(int_to_json(c));
        break;
    case SparseSequence::Gen::Table:
        rec["kind"] = "table";
        params["values"] = json::array();
        for (const Int& v : seq.window())
            params["values"].push_back(int_to_json(v));
        break;
    }
    rec["params"] = std::move(params);
    rec["horizon"] = seq.horizon();
    rec["stability_index"] = seq.stability();
    return rec;
}

namespace {

int int_field(const json& rec, const char* key, int fallback) {
    if (!rec.contains(key)) return fallback;
    const json& f = rec.at(key);
    if (!f.is_number_integer())
        throw registry_error(std::string("field '") + key +
                             "' must be an integer");
    return f.get<int>();
}

std::vector<Int> int_list(const json& arr, const char* what) {
    if (!arr.is_array())
        throw registry_error(std::string(what) + " must be an array");
    std::vector<Int> out;
    for (const json& e : arr) out.push_back(int_from_json(e));
    return out;
}

} // namespace

SparseSequence sequence_from_json(const json& rec) {
    if (!rec.is_object()) throw registry_error("sequence record must be an object");
    if (!rec.contains("name") || !rec.at("name").is_string())
        throw registry_error("sequence record needs a string 'name'");
    const std::string name = rec.at("name").get<std::string>();
    if (!rec.contains("kind") || !rec.at("kind").is_string())
        throw registry_error(name + ": record needs a string 'kind'");
    const std::string kind = rec.at("kind").get<std::string>();
    const json params = rec.contains("params") ? rec.at("params")
                                               : json::object();
    if (!params.is_object())
        throw registry_error(name + ": 'params' must be an object");
    const int horizon = int_field(rec, "horizon", 64);
    // Factorial records fall back to the factory's later settle point.
    const bool has_stability = rec.contains("stability_index");
    const int stability = int_field(rec, "stability_index", 8);

    try {
        if (kind == "closed_form") {
            if (!params.contains("form") || !params.at("form").is_string())
                throw registry_error(name +
                                     ": closed form needs a string 'form'");
            const std::string form = params.at("form").get<std::string>();
            if (form == "power")
                return SparseSequence::power(name,
                                             int_from_json(params.at("base")),
                                             horizon, stability);
            if (form == "factorial")
                return SparseSequence::factorial(
                    name, int_field(params, "shift", 1), horizon,
                    has_stability ? stability : 12);
            if (form == "affine")
                return SparseSequence::affine(name,
                                              int_from_json(params.at("a")),
                                              int_from_json(params.at("b")),
                                              horizon, stability);
            throw registry_error(name + ": unknown closed form '" + form + "'");
        }
        if (kind == "recurrence")
            return SparseSequence::recurrence(
                name, int_list(params.at("coeffs"), "'coeffs'"),
                int_list(params.at("initial"), "'initial'"), horizon,
                stability);
        if (kind == "table") {
            std::vector<Int> values = int_list(params.at("values"), "'values'");
            if (rec.contains("horizon") &&
                horizon != static_cast<int>(values.size()) - 1)
                throw registry_error(
                    name + ": table horizon must be values.size() - 1");
            return SparseSequence::table(name, std::move(values), stability);
        }
    } catch (const json::exception& e) {
        throw registry_error(name + ": malformed record (" +
                             std::string(e.what()) + ")");
    }
    throw registry_error(name + ": unknown kind '" + kind + "'");
}

void Registry::merge_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("schema") ||
        doc.at("schema") != 1)
        throw registry_error("registry document needs \"schema\": 1");
    if (!doc.contains("sequences") || !doc.at("sequences").is_array())
        throw registry_error("registry document needs a \"sequences\" array");
    for (const json& rec : doc.at("sequences")) add(sequence_from_json(rec));
}

json Registry::to_json() const {
    json doc;
    doc["schema"] = 1;
    doc["sequences"] = json::array();
    for (const auto& [name, seq] : seqs_)
        doc["sequences"].push_back(sequence_to_json(seq));
    return doc;
}

// ------------------------------------------------------------------- files

Registry load_registry(const std::string& path) {
    Registry reg = Registry::builtins();
    std::string chosen = path;
    if (chosen.empty()) {
        const char* env = std::getenv("SPARSE_ARITH_REGISTRY");
        if (env != nullptr) chosen = env;
    }
    if (chosen.empty()) return reg;
    std::ifstream in(chosen);
    if (!in)
        throw registry_error("cannot read registry file '" + chosen + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw registry_error("registry file '" + chosen +
                             "' is not valid JSON: " + e.what());
    }
    reg.merge_json(doc);
    return reg;
}

} // namespace sparse_arith
