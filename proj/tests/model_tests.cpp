#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "eqbase/model.hpp"
#include "eqbase/syntax.hpp"

using namespace eqbase;

namespace {

Identity ident(const std::string& name, const std::string& l, const std::string& r) {
    return {name, parse_term(l), parse_term(r)};
}

std::vector<Identity> johnson4() {
    return {ident("J1", "x ^ y", "y ^ x"), ident("J2", "x ^ (y ^ z)", "(x ^ y) ^ z"),
            ident("J4", "x''", "x"), ident("J5", "x'", "(x ^ y)' ^ (x ^ y')'")};
}

}  // namespace

TEST_CASE("ba2 and products") {
    FiniteModel ba2 = FiniteModel::ba2();
    CHECK(ba2.meet_at(1, 1) == 1);
    CHECK(ba2.meet_at(0, 1) == 0);
    CHECK(ba2.comp_at(0) == 1);
    CHECK(is_boolean_algebra(ba2));
    FiniteModel ba4 = FiniteModel::product(ba2, ba2);
    CHECK(ba4.n == 4);
    CHECK(is_boolean_algebra(ba4));
}

TEST_CASE("evaluate and satisfies") {
    FiniteModel ba2 = FiniteModel::ba2();
    CHECK(evaluate(ba2, parse_term("x ^ x'"), {{"x", 1}}) == 0);
    CHECK(evaluate(ba2, parse_term("(x ^ y)'"), {{"x", 1}, {"y", 0}}) == 1);
    CHECK_THROWS_AS((void)evaluate(ba2, parse_term("x ^ y"), {{"x", 0}}),
                    UnboundVariableError);
    CHECK(satisfies(ba2, ident("", "x ^ y", "y ^ x")));
    CHECK(!satisfies(ba2, ident("", "x ^ y", "x")));
    auto witness = violating_assignment(ba2, ident("", "x ^ y", "x"));
    REQUIRE(witness);
    CHECK(evaluate(ba2, parse_term("x ^ y"), *witness) !=
          evaluate(ba2, parse_term("x"), *witness));
}

TEST_CASE("canonical_form identifies isomorphic models") {
    FiniteModel ba2 = FiniteModel::ba2();
    // Relabel 0 <-> 1: meet becomes max, complement still swaps.
    FiniteModel swapped;
    swapped.n = 2;
    swapped.meet = {0, 1, 1, 1};
    swapped.comp = {1, 0};
    CHECK(ba2.canonical_form() == swapped.canonical_form());
    FiniteModel degenerate;
    degenerate.n = 2;
    degenerate.meet = {0, 0, 0, 0};
    degenerate.comp = {0, 0};
    CHECK(ba2.canonical_form() != degenerate.canonical_form());
}

TEST_CASE("model text format round trip") {
    FiniteModel ba4 = FiniteModel::product(FiniteModel::ba2(), FiniteModel::ba2());
    CHECK(parse_model(format_model(ba4)) == ba4);
    CHECK_THROWS_AS((void)parse_model("size 2\nmeet:\n0 0\n0 9\ncomp:\n1 0\n"), ParseError);
    // Comments are ignored.
    CHECK(parse_model("# a comment\nsize 1\nmeet:\n0\ncomp:\n0\n").n == 1);
}

TEST_CASE("search finds the boolean spectrum 1, 1, 0, 1") {
    std::vector<std::uint64_t> counts;
    for (int n = 1; n <= 4; ++n) {
        SearchOptions so;
        so.size = n;
        so.must_satisfy = johnson4();
        so.up_to_iso = true;
        auto res = search_models(so);
        REQUIRE(!res.exhausted_budget);
        counts.push_back(res.models.size());
    }
    CHECK(counts == std::vector<std::uint64_t>{1, 1, 0, 1});
}

TEST_CASE("search reproduces the shipped countermodels") {
    SUBCASE("A9 and J5 admit the all-zero table violating J4") {
        SearchOptions so;
        so.size = 2;
        so.must_satisfy = {ident("A9", "x ^ (y ^ z)", "(z ^ y) ^ x"),
                           ident("J5", "x'", "(x ^ y)' ^ (x ^ y')'")};
        so.must_violate = ident("J4", "x''", "x");
        auto res = search_models(so);
        REQUIRE(!res.models.empty());
        FiniteModel expected = parse_model(read_file("models/all-zero.eqm"));
        CHECK(std::find(res.models.begin(), res.models.end(), expected) != res.models.end());
    }
    SUBCASE("A1 and J5' admit the left-projection table violating J1") {
        SearchOptions so;
        so.size = 2;
        so.must_satisfy = {ident("A1", "x ^ (y ^ z)", "(x ^ y) ^ z"),
                           ident("J5'", "x", "(x' ^ y)' ^ (x' ^ y')'")};
        so.must_violate = ident("J1", "x ^ y", "y ^ x");
        auto res = search_models(so);
        REQUIRE(!res.models.empty());
        FiniteModel expected = parse_model(read_file("models/left-projection.eqm"));
        CHECK(std::find(res.models.begin(), res.models.end(), expected) != res.models.end());
    }
}

TEST_CASE("unsatisfiable constraints give no models") {
    SearchOptions so;
    so.size = 3;
    so.must_satisfy = johnson4();
    auto res = search_models(so);
    CHECK(res.models.empty());
    CHECK(!res.exhausted_budget);
}

// --------------------------------------------------------------------------
// Oracle equivalence: the propagating backtracker agrees with brute-force
// enumeration on randomized inputs at n <= 3.

TEST_CASE("property: search equals enumeration on 20 random identity sets") {
    std::mt19937 rng(1644);
    auto random_term = [&](auto&& self, int depth) -> TermPtr {
        static const char* names[] = {"x", "y", "z"};
        if (depth <= 0 || rng() % 3 == 0) return Term::var(names[rng() % 3]);
        if (rng() % 2) return Term::comp(self(self, depth - 1));
        return Term::meet(self(self, depth - 1), self(self, depth - 1));
    };
    for (int trial = 0; trial < 20; ++trial) {
        SearchOptions so;
        so.size = 2 + static_cast<int>(rng() % 2);
        int axiom_count = 1 + rng() % 3;
        for (int j = 0; j < axiom_count; ++j) {
            so.must_satisfy.push_back(
                {"r" + std::to_string(j), random_term(random_term, 2),
                 random_term(random_term, 2)});
        }
        if (rng() % 2) {
            so.must_violate = Identity{"v", random_term(random_term, 2),
                                       random_term(random_term, 2)};
        }
        so.up_to_iso = trial % 2 == 0;

        auto fast = search_models(so);
        auto slow = enumerate_models(so);
        REQUIRE(!fast.exhausted_budget);
        REQUIRE(fast.models.size() == slow.models.size());
        if (so.up_to_iso) {
            // The searchers may pick different representatives per class;
            // compare the class sets.
            std::vector<std::vector<int>> a, b;
            for (const auto& m : fast.models) a.push_back(m.canonical_form());
            for (const auto& m : slow.models) b.push_back(m.canonical_form());
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            REQUIRE(a == b);
        } else {
            for (std::size_t k = 0; k < fast.models.size(); ++k) {
                REQUIRE(fast.models[k] == slow.models[k]);
            }
        }
    }
}
