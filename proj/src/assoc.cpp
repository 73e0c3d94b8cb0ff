#include "eqbase/assoc.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "eqbase/syntax.hpp"

namespace eqbase {

const std::vector<Identity>& assoc_representatives() {
    static const std::vector<Identity> reps = [] {
        auto mk = [](const std::string& name, const char* l, const char* r) {
            return Identity{name, parse_term(l), parse_term(r)};
        };
        return std::vector<Identity>{
            mk("A1", "x ^ (y ^ z)", "(x ^ y) ^ z"),
            mk("A2", "x ^ (y ^ z)", "x ^ (z ^ y)"),
            mk("A3", "x ^ (y ^ z)", "(x ^ z) ^ y"),
            mk("A4", "x ^ (y ^ z)", "y ^ (x ^ z)"),
            mk("A5", "x ^ (y ^ z)", "(y ^ x) ^ z"),
            mk("A6", "x ^ (y ^ z)", "y ^ (z ^ x)"),
            mk("A7", "x ^ (y ^ z)", "(y ^ z) ^ x"),
            mk("A8", "x ^ (y ^ z)", "(z ^ x) ^ y"),
            mk("A9", "x ^ (y ^ z)", "z ^ (y ^ x)"),
            mk("A10", "x ^ (y ^ z)", "(z ^ y) ^ x"),
            mk("A11", "(x ^ y) ^ z", "(x ^ z) ^ y"),
            mk("A12", "(x ^ y) ^ z", "(y ^ x) ^ z"),
            mk("A13", "(x ^ y) ^ z", "(y ^ z) ^ x"),
            mk("A14", "(x ^ y) ^ z", "(z ^ y) ^ x"),
        };
    }();
    return reps;
}

std::vector<TermPtr> enumerate_assoc_terms() {
    std::vector<std::string> names = {"x", "y", "z"};
    std::vector<TermPtr> out;
    std::sort(names.begin(), names.end());
    do {
        TermPtr a = Term::var(names[0]);
        TermPtr b = Term::var(names[1]);
        TermPtr c = Term::var(names[2]);
        out.push_back(Term::meet(a, Term::meet(b, c)));
        out.push_back(Term::meet(Term::meet(a, b), c));
    } while (std::next_permutation(names.begin(), names.end()));
    return out;
}

std::vector<Identity> enumerate_assoc_identities() {
    auto terms = enumerate_assoc_terms();
    std::vector<Identity> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            out.push_back(Identity{"", terms[i], terms[j]});
        }
    }
    return out;
}

bool is_assoc_identity(const Identity& i) {
    auto side_ok = [](const TermPtr& t) {
        if (t->size() != 5) return false;
        std::function<bool(const TermPtr&)> meets_only = [&](const TermPtr& s) {
            if (s->is_var()) return true;
            if (s->is_meet()) return meets_only(s->child0()) && meets_only(s->child1());
            return false;
        };
        if (!meets_only(t)) return false;
        auto counts = var_counts(t);
        return counts.size() == 3 && counts.count("x") && counts.count("y") && counts.count("z");
    };
    return side_ok(i.lhs) && side_ok(i.rhs) && !equal(i.lhs, i.rhs);
}

namespace {

std::string pair_key(const TermPtr& a, const TermPtr& b) {
    return term_key(a) + "=" + term_key(b);
}

// Orbit of an identity under S3 renamings of {x, y, z} and side swap,
// as directed pairs keyed by pair_key.
std::set<std::string> orbit_keys(const Identity& i) {
    std::set<std::string> out;
    std::vector<std::string> names = {"x", "y", "z"};
    std::vector<std::string> image = names;
    std::sort(image.begin(), image.end());
    do {
        Substitution ren;
        for (int k = 0; k < 3; ++k) ren[names[k]] = Term::var(image[k]);
        TermPtr l = substitute(i.lhs, ren);
        TermPtr r = substitute(i.rhs, ren);
        out.insert(pair_key(l, r));
        out.insert(pair_key(r, l));
    } while (std::next_permutation(image.begin(), image.end()));
    return out;
}

}  // namespace

std::vector<AssocClass> classify_all() {
    auto all = enumerate_assoc_identities();
    std::map<std::string, std::size_t> key_to_index;
    for (std::size_t k = 0; k < all.size(); ++k) {
        key_to_index[pair_key(all[k].lhs, all[k].rhs)] = k;
        key_to_index[pair_key(all[k].rhs, all[k].lhs)] = k;
    }

    std::vector<int> class_of(all.size(), -1);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (class_of[k] >= 0) continue;
        int cid = static_cast<int>(groups.size());
        groups.emplace_back();
        for (const auto& key : orbit_keys(all[k])) {
            auto it = key_to_index.find(key);
            if (it != key_to_index.end() && class_of[it->second] < 0) {
                class_of[it->second] = cid;
                groups.back().push_back(it->second);
            }
        }
    }

    std::vector<AssocClass> classes;
    for (const auto& group : groups) {
        AssocClass c;
        for (auto idx : group) c.members.push_back(all[idx]);
        std::sort(c.members.begin(), c.members.end(), [&](const Identity& a, const Identity& b) {
            return pair_key(a.lhs, a.rhs) < pair_key(b.lhs, b.rhs);
        });
        // Representative: the canonical (Ai) when the class contains one,
        // otherwise the lexicographically least member.
        c.representative = c.members.front();
        c.label = "?";
        for (const auto& rep : assoc_representatives()) {
            auto it = std::find_if(c.members.begin(), c.members.end(), [&](const Identity& m) {
                return (equal(m.lhs, rep.lhs) && equal(m.rhs, rep.rhs)) ||
                       (equal(m.lhs, rep.rhs) && equal(m.rhs, rep.lhs));
            });
            if (it != c.members.end()) {
                c.label = rep.name;
                c.representative = rep;
                break;
            }
        }
        classes.push_back(std::move(c));
    }
    std::sort(classes.begin(), classes.end(), [](const AssocClass& a, const AssocClass& b) {
        auto rank = [](const AssocClass& c) {
            if (c.label.size() > 1 && c.label[0] == 'A') return std::stoi(c.label.substr(1));
            return 1000;
        };
        int ra = rank(a), rb = rank(b);
        if (ra != rb) return ra < rb;
        return pair_key(a.representative.lhs, a.representative.rhs) <
               pair_key(b.representative.lhs, b.representative.rhs);
    });
    return classes;
}

AssocClass classify_identity(const Identity& i) {
    if (!is_assoc_identity(i)) {
        throw NotAssocTypeError("not an associative-type identity of length 3: " +
                                format_identity(i));
    }
    static const std::vector<AssocClass> classes = classify_all();
    std::string key = pair_key(i.lhs, i.rhs);
    for (const auto& c : classes) {
        for (const auto& m : c.members) {
            if (pair_key(m.lhs, m.rhs) == key || pair_key(m.rhs, m.lhs) == key) return c;
        }
    }
    throw NotAssocTypeError("identity outside the enumeration: " + format_identity(i));
}

}  // namespace eqbase
