#pragma once

// Named collection of sequences: compiled-in defaults plus JSON documents
// describing closed forms, recurrences, and literal tables, merged by name.
// A document is {"schema": 1, "sequences": [record...]} where each record is
// {name, kind: "closed_form" | "recurrence" | "table", params, horizon,
//  stability_index}.

#include <map>
#include <string>
#include <vector>

#include "sparse_arith/sequences.hpp"

namespace sparse_arith {

class Registry {
public:
    // Compiled-in defaults: pow2, pow3, pow2x (extended window), fibonacci,
    // factorial, identity.
    static Registry builtins();

    // Inserts or replaces by name.
    void add(SparseSequence seq);

    // Merges every record of a registry document over the current contents.
    void merge_json(const json& doc);

    const SparseSequence& get(const std::string& name) const;
    bool contains(const std::string& name) const;
    std::vector<std::string> names() const; // sorted

    json to_json() const;

private:
    std::map<std::string, SparseSequence> seqs_;
};

// One record / one full document round-trippable with merge_json.
json sequence_to_json(const SparseSequence& seq);
SparseSequence sequence_from_json(const json& record);

// Builtins merged with a registry file: an explicit path wins over the
// SPARSE_ARITH_REGISTRY environment variable; with neither set the builtins
// stand alone. Unreadable files and malformed documents raise RegistryError.
Registry load_registry(const std::string& path = "");

} // namespace sparse_arith
