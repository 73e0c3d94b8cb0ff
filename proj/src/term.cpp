#include "eqbase/term.hpp"

#include <algorithm>
#include <functional>

namespace eqbase {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

TermPtr Term::var(std::string name) {
    auto t = std::shared_ptr<Term>(new Term());
    t->kind_ = Kind::Var;
    t->name_ = std::move(name);
    t->size_ = 1;
    t->hash_ = hash_combine(0x1, std::hash<std::string>{}(t->name_));
    return t;
}

TermPtr Term::meet(TermPtr left, TermPtr right) {
    auto t = std::shared_ptr<Term>(new Term());
    t->kind_ = Kind::Meet;
    t->child0_ = std::move(left);
    t->child1_ = std::move(right);
    t->size_ = 1 + t->child0_->size() + t->child1_->size();
    t->hash_ = hash_combine(hash_combine(0x2, t->child0_->hash()), t->child1_->hash());
    return t;
}

TermPtr Term::comp(TermPtr arg) {
    auto t = std::shared_ptr<Term>(new Term());
    t->kind_ = Kind::Comp;
    t->child0_ = std::move(arg);
    t->size_ = 1 + t->child0_->size();
    t->hash_ = hash_combine(0x3, t->child0_->hash());
    return t;
}

bool equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind() != b->kind() || a->hash() != b->hash() || a->size() != b->size()) return false;
    switch (a->kind()) {
        case Term::Kind::Var:
            return a->name() == b->name();
        case Term::Kind::Comp:
            return equal(a->child0(), b->child0());
        case Term::Kind::Meet:
            return equal(a->child0(), b->child0()) && equal(a->child1(), b->child1());
    }
    return false;
}

TermPtr substitute(const TermPtr& t, const Substitution& s) {
    switch (t->kind()) {
        case Term::Kind::Var: {
            auto it = s.find(t->name());
            return it == s.end() ? t : it->second;
        }
        case Term::Kind::Comp: {
            TermPtr c = substitute(t->child0(), s);
            return c.get() == t->child0().get() ? t : Term::comp(std::move(c));
        }
        case Term::Kind::Meet: {
            TermPtr l = substitute(t->child0(), s);
            TermPtr r = substitute(t->child1(), s);
            if (l.get() == t->child0().get() && r.get() == t->child1().get()) return t;
            return Term::meet(std::move(l), std::move(r));
        }
    }
    return t;
}

namespace {

bool match_into(const TermPtr& pattern, const TermPtr& subject, Substitution& s) {
    switch (pattern->kind()) {
        case Term::Kind::Var: {
            auto [it, inserted] = s.emplace(pattern->name(), subject);
            return inserted || equal(it->second, subject);
        }
        case Term::Kind::Comp:
            return subject->is_comp() && match_into(pattern->child0(), subject->child0(), s);
        case Term::Kind::Meet:
            return subject->is_meet() && match_into(pattern->child0(), subject->child0(), s) &&
                   match_into(pattern->child1(), subject->child1(), s);
    }
    return false;
}

}  // namespace

std::optional<Substitution> match_pattern(const TermPtr& pattern, const TermPtr& subject) {
    Substitution s;
    if (match_into(pattern, subject, s)) return s;
    return std::nullopt;
}

TermPtr find_subterm(const TermPtr& t, const Position& p) {
    TermPtr cur = t;
    for (int i : p) {
        if (i == 0 && (cur->is_meet() || cur->is_comp())) {
            cur = cur->child0();
        } else if (i == 1 && cur->is_meet()) {
            cur = cur->child1();
        } else {
            return nullptr;
        }
    }
    return cur;
}

TermPtr subterm_at(const TermPtr& t, const Position& p) {
    TermPtr s = find_subterm(t, p);
    if (!s) throw InvalidPositionError("position addresses no subterm");
    return s;
}

namespace {

TermPtr replace_rec(const TermPtr& t, const Position& p, std::size_t depth, const TermPtr& r) {
    if (depth == p.size()) return r;
    int i = p[depth];
    if (i == 0 && t->is_comp()) {
        return Term::comp(replace_rec(t->child0(), p, depth + 1, r));
    }
    if (t->is_meet() && (i == 0 || i == 1)) {
        if (i == 0) return Term::meet(replace_rec(t->child0(), p, depth + 1, r), t->child1());
        return Term::meet(t->child0(), replace_rec(t->child1(), p, depth + 1, r));
    }
    throw InvalidPositionError("position addresses no subterm");
}

}  // namespace

TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& r) {
    return replace_rec(t, p, 0, r);
}

namespace {

void collect_positions(const TermPtr& t, Position& cur, std::vector<Position>& out) {
    out.push_back(cur);
    if (t->is_comp()) {
        cur.push_back(0);
        collect_positions(t->child0(), cur, out);
        cur.pop_back();
    } else if (t->is_meet()) {
        cur.push_back(0);
        collect_positions(t->child0(), cur, out);
        cur.back() = 1;
        collect_positions(t->child1(), cur, out);
        cur.pop_back();
    }
}

void collect_vars(const TermPtr& t, std::vector<std::string>& order, std::map<std::string, int>& counts) {
    switch (t->kind()) {
        case Term::Kind::Var: {
            auto [it, inserted] = counts.emplace(t->name(), 0);
            if (inserted) order.push_back(t->name());
            ++it->second;
            break;
        }
        case Term::Kind::Comp:
            collect_vars(t->child0(), order, counts);
            break;
        case Term::Kind::Meet:
            collect_vars(t->child0(), order, counts);
            collect_vars(t->child1(), order, counts);
            break;
    }
}

}  // namespace

std::vector<Position> all_positions(const TermPtr& t) {
    std::vector<Position> out;
    Position cur;
    collect_positions(t, cur, out);
    return out;
}

std::vector<std::string> vars(const TermPtr& t) {
    std::vector<std::string> order;
    std::map<std::string, int> counts;
    collect_vars(t, order, counts);
    return order;
}

std::map<std::string, int> var_counts(const TermPtr& t) {
    std::vector<std::string> order;
    std::map<std::string, int> counts;
    collect_vars(t, order, counts);
    return counts;
}

std::string canonical_var_name(int index) {
    static const char* head[] = {"x", "y", "z", "u", "w", "t"};
    if (index < 6) return head[index];
    return "v" + std::to_string(index - 5);
}

Identity alpha_canonical(const Identity& i) {
    std::vector<std::string> order;
    std::map<std::string, int> counts;
    collect_vars(i.lhs, order, counts);
    collect_vars(i.rhs, order, counts);
    Substitution ren;
    for (std::size_t k = 0; k < order.size(); ++k) {
        ren[order[k]] = Term::var(canonical_var_name(static_cast<int>(k)));
    }
    return Identity{i.name, substitute(i.lhs, ren), substitute(i.rhs, ren)};
}

namespace {

// Precedence: complement > meet. Variables are below all function symbols.
int precedence(Term::Kind k) {
    return k == Term::Kind::Comp ? 2 : 1;
}

bool var_condition(const TermPtr& a, const TermPtr& b) {
    auto ca = var_counts(a);
    auto cb = var_counts(b);
    for (const auto& [v, n] : cb) {
        auto it = ca.find(v);
        if (it == ca.end() || it->second < n) return false;
    }
    return true;
}

}  // namespace

bool kbo_greater(const TermPtr& a, const TermPtr& b) {
    if (!var_condition(a, b)) return false;
    // All weights 1, so weight(t) == size(t).
    if (a->size() > b->size()) return true;
    if (a->size() < b->size()) return false;
    if (a->is_var() || b->is_var()) return false;  // equal weight, a var only beats itself
    int pa = precedence(a->kind());
    int pb = precedence(b->kind());
    if (pa != pb) return pa > pb;
    if (a->kind() == Term::Kind::Comp) return kbo_greater(a->child0(), b->child0());
    // Both meets: lexicographic left-to-right.
    if (equal(a->child0(), b->child0())) return kbo_greater(a->child1(), b->child1());
    return kbo_greater(a->child0(), b->child0());
}

Ordering compare_kbo(const TermPtr& a, const TermPtr& b) {
    if (equal(a, b)) return Ordering::Equal;
    if (kbo_greater(a, b)) return Ordering::Greater;
    if (kbo_greater(b, a)) return Ordering::Less;
    return Ordering::Incomparable;
}

namespace {

void key_rec(const TermPtr& t, std::string& out) {
    switch (t->kind()) {
        case Term::Kind::Var:
            out += t->name();
            break;
        case Term::Kind::Comp:
            out += 'C';
            key_rec(t->child0(), out);
            break;
        case Term::Kind::Meet:
            out += 'M';
            key_rec(t->child0(), out);
            out += ',';
            key_rec(t->child1(), out);
            break;
    }
}

}  // namespace

std::string term_key(const TermPtr& t) {
    std::string out;
    key_rec(t, out);
    return out;
}

std::string identity_key(const TermPtr& lhs, const TermPtr& rhs) {
    Identity c = alpha_canonical(Identity{"", lhs, rhs});
    return term_key(c.lhs) + "=" + term_key(c.rhs);
}

std::string unordered_identity_key(const TermPtr& lhs, const TermPtr& rhs) {
    return std::min(identity_key(lhs, rhs), identity_key(rhs, lhs));
}

}  // namespace eqbase
