#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqbase/term.hpp"

namespace eqbase {

/// Finite algebra over {0..n-1} with full operation tables for meet and
/// complement.
struct FiniteModel {
    int n = 0;
    std::vector<int> meet;  // n*n, row-major: meet[a*n + b]
    std::vector<int> comp;  // n

    int meet_at(int a, int b) const { return meet[a * n + b]; }
    int comp_at(int a) const { return comp[a]; }

    bool operator==(const FiniteModel& other) const = default;

    /// Flattened (meet, comp) tables, the order used for lexicographic
    /// comparisons and canonical forms.
    std::vector<int> flattened() const;
    /// Lexicographically least flattening over all domain permutations.
    std::vector<int> canonical_form() const;

    static FiniteModel ba2();
    /// Direct product of two models.
    static FiniteModel product(const FiniteModel& a, const FiniteModel& b);
};

struct UnboundVariableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bottom-up evaluation; `assignment` maps variable names to elements.
int evaluate(const FiniteModel& m, const TermPtr& t,
             const std::map<std::string, int>& assignment);

/// True iff lhs and rhs evaluate equally under all assignments.
bool satisfies(const FiniteModel& m, const Identity& i);
bool satisfies_all(const FiniteModel& m, const std::vector<Identity>& ids);

/// Some assignment separating the two sides, if any.
std::optional<std::map<std::string, int>> violating_assignment(const FiniteModel& m,
                                                               const Identity& i);

struct SearchOptions {
    int size = 2;
    std::vector<Identity> must_satisfy;
    std::optional<Identity> must_violate;
    std::size_t limit = SIZE_MAX;  // max models returned (after iso filtering)
    bool up_to_iso = false;
    std::uint64_t node_budget = 100'000'000;
};

struct SearchResult {
    std::vector<FiniteModel> models;  // deterministic order: lexicographic by tables
    bool exhausted_budget = false;
    std::uint64_t nodes = 0;
};

/// Backtracking search with cell-watch propagation; complement cells are
/// decided first, then meet rows.
SearchResult search_models(const SearchOptions& opts);

/// Reference oracle: plain enumeration of all n^(n^2+n) structures.
/// Intended for n <= 3.
SearchResult enumerate_models(const SearchOptions& opts);

/// True iff m satisfies the reference base {J1, J2, J4, J5}.
bool is_boolean_algebra(const FiniteModel& m);

/// .eqm text format: `size n`, `meet:` with n rows, `comp:` with one row.
std::string format_model(const FiniteModel& m);
FiniteModel parse_model(const std::string& input);

}  // namespace eqbase
