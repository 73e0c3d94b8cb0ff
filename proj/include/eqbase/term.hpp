#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqbase {

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable term over the signature <meet (binary), complement (unary)>
/// with named variables. Sharing of subterms is allowed; equality is
/// structural, never pointer-based.
class Term {
public:
    enum class Kind { Var, Meet, Comp };

    static TermPtr var(std::string name);
    static TermPtr meet(TermPtr left, TermPtr right);
    static TermPtr comp(TermPtr arg);

    Kind kind() const { return kind_; }
    bool is_var() const { return kind_ == Kind::Var; }
    bool is_meet() const { return kind_ == Kind::Meet; }
    bool is_comp() const { return kind_ == Kind::Comp; }

    /// Variable name; only valid for Kind::Var.
    const std::string& name() const { return name_; }
    /// Left child of a meet, or the sole child of a complement.
    const TermPtr& child0() const { return child0_; }
    /// Right child of a meet.
    const TermPtr& child1() const { return child1_; }

    /// Number of nodes in the tree (>= 1).
    int size() const { return size_; }
    std::size_t hash() const { return hash_; }

private:
    Term() = default;

    Kind kind_ = Kind::Var;
    std::string name_;
    TermPtr child0_;
    TermPtr child1_;
    int size_ = 1;
    std::size_t hash_ = 0;
};

bool equal(const TermPtr& a, const TermPtr& b);

/// A named, directed equation lhs ~ rhs. Symmetry is never implicit: rewriting
/// uses an explicit direction.
struct Identity {
    std::string name;
    TermPtr lhs;
    TermPtr rhs;
};

/// Finite mapping variable name -> term; unmapped variables stand for
/// themselves. Application is simultaneous.
using Substitution = std::map<std::string, TermPtr>;

/// Path of child indices from the root; 0 = left/sole child, 1 = right child.
using Position = std::vector<int>;

struct InvalidPositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TermPtr substitute(const TermPtr& t, const Substitution& s);

/// Match `pattern` against `subject`: returns sigma with
/// substitute(pattern, sigma) == subject, or nullopt.
std::optional<Substitution> match_pattern(const TermPtr& pattern, const TermPtr& subject);

/// Subterm lookup; nullptr when the position is invalid.
TermPtr find_subterm(const TermPtr& t, const Position& p);
/// Throwing variant of find_subterm.
TermPtr subterm_at(const TermPtr& t, const Position& p);
/// Replace the subterm at p by r; throws InvalidPositionError.
TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& r);

/// All positions of t in preorder (root first, left before right).
std::vector<Position> all_positions(const TermPtr& t);

/// Variable names in order of first occurrence.
std::vector<std::string> vars(const TermPtr& t);
/// Occurrence counts per variable.
std::map<std::string, int> var_counts(const TermPtr& t);

/// Canonical variable alphabet: x, y, z, u, w, t, then v1, v2, ...
std::string canonical_var_name(int index);

/// Rename variables to the canonical alphabet in order of first occurrence
/// reading lhs then rhs. Idempotent.
Identity alpha_canonical(const Identity& i);

enum class Ordering { Greater, Less, Equal, Incomparable };

/// Knuth-Bendix ordering with all symbol and variable weights 1 and
/// precedence complement > meet. A simplification ordering: irreflexive,
/// transitive, closed under contexts and substitutions, with the subterm
/// property. Equal iff structurally equal.
Ordering compare_kbo(const TermPtr& a, const TermPtr& b);

bool kbo_greater(const TermPtr& a, const TermPtr& b);

/// Stable text key for a term (used for hashing and deterministic ordering;
/// not the user-facing syntax).
std::string term_key(const TermPtr& t);

/// Key of the alpha-canonical form of lhs ~ rhs. Directed: swapping sides
/// generally changes the key.
std::string identity_key(const TermPtr& lhs, const TermPtr& rhs);

/// Direction-insensitive variant: min of the keys of both orientations.
std::string unordered_identity_key(const TermPtr& lhs, const TermPtr& rhs);

}  // namespace eqbase
