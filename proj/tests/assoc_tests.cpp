#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "eqbase/assoc.hpp"
#include "eqbase/syntax.hpp"

using namespace eqbase;

TEST_CASE("twelve terms, sixty-six identities") {
    auto terms = enumerate_assoc_terms();
    CHECK(terms.size() == 12);
    std::set<std::string> keys;
    for (const auto& t : terms) keys.insert(format_term(t));
    CHECK(keys.size() == 12);

    auto ids = enumerate_assoc_identities();
    CHECK(ids.size() == 66);
    for (const auto& i : ids) CHECK(is_assoc_identity(i));
}

TEST_CASE("is_assoc_identity rejects non-candidates") {
    auto id = [](const char* l, const char* r) {
        return Identity{"", parse_term(l), parse_term(r)};
    };
    CHECK(is_assoc_identity(id("x ^ (y ^ z)", "(x ^ y) ^ z")));
    CHECK(!is_assoc_identity(id("x ^ (y ^ z)", "x ^ (y ^ z)")));  // sides equal
    CHECK(!is_assoc_identity(id("x ^ (y ^ y)", "(x ^ y) ^ y")));  // y twice
    CHECK(!is_assoc_identity(id("x ^ (y ^ u)", "(x ^ y) ^ u")));  // wrong alphabet
    CHECK(!is_assoc_identity(id("x ^ (y ^ z)'", "(x ^ y) ^ z")));  // complement
}

TEST_CASE("classification yields 14 classes partitioning the 66 identities") {
    auto classes = classify_all();
    REQUIRE(classes.size() == 14);

    std::size_t total = 0;
    std::set<std::string> seen;
    std::set<std::string> labels;
    for (const auto& c : classes) {
        labels.insert(c.label);
        total += c.members.size();
        for (const auto& m : c.members) {
            // Partition: no identity in two classes. Members are concrete
            // term pairs, so compare them structurally (the alpha-invariant
            // key would merge renaming-variants inside one class).
            std::string ka = format_term(m.lhs), kb = format_term(m.rhs);
            CHECK(seen.insert(ka < kb ? ka + "=" + kb : kb + "=" + ka).second);
        }
    }
    CHECK(total == 66);
    CHECK(labels.size() == 14);

    // Each class contains exactly one canonical representative, up to a side
    // swap, and it is the class's own.
    for (const auto& c : classes) {
        int reps = 0;
        for (const auto& m : c.members) {
            for (const auto& r : assoc_representatives()) {
                if ((equal(m.lhs, r.lhs) && equal(m.rhs, r.rhs)) ||
                    (equal(m.lhs, r.rhs) && equal(m.rhs, r.lhs))) {
                    ++reps;
                    CHECK(r.name == c.label);
                }
            }
        }
        CHECK(reps == 1);
    }
}

TEST_CASE("classify_identity is renaming- and swap-invariant") {
    Identity assoc{"", parse_term("x ^ (y ^ z)"), parse_term("(x ^ y) ^ z")};
    AssocClass c1 = classify_identity(assoc);
    CHECK(c1.label == "A1");
    // Swap sides.
    AssocClass c2 = classify_identity({"", assoc.rhs, assoc.lhs});
    CHECK(c2.label == "A1");
    // Rename variables: z ^ (x ^ y) = (z ^ x) ^ y is still associativity.
    AssocClass c3 =
        classify_identity({"", parse_term("z ^ (x ^ y)"), parse_term("(z ^ x) ^ y")});
    CHECK(c3.label == "A1");
    CHECK_THROWS_AS((void)classify_identity({"", parse_term("x ^ x"), parse_term("x")}),
                    NotAssocTypeError);
}

TEST_CASE("the canonical representatives classify to their own labels") {
    for (const auto& r : assoc_representatives()) {
        CHECK(classify_identity(r).label == r.name);
    }
}
