#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "eqbase/term.hpp"

namespace eqbase {

struct NotAssocTypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An equivalence class of associative-type identities under variable
/// renaming and side swap.
struct AssocClass {
    std::string label;           // A1..A14, keyed to the canonical list
    Identity representative;
    std::vector<Identity> members;
};

/// The canonical 14 representatives A1..A14.
const std::vector<Identity>& assoc_representatives();

/// The 12 meet-only terms over {x, y, z}, each variable once, both
/// bracketings; deterministic order.
std::vector<TermPtr> enumerate_assoc_terms();

/// All 66 unordered pairs of distinct enumerated terms.
std::vector<Identity> enumerate_assoc_identities();

/// Partition of the 66 identities; classes ordered by representative label.
std::vector<AssocClass> classify_all();

/// The class containing i; throws NotAssocTypeError for malformed input.
AssocClass classify_identity(const Identity& i);

/// True iff both sides are meet-only over exactly {x, y, z}, once each, and
/// the sides differ.
bool is_assoc_identity(const Identity& i);

}  // namespace eqbase
