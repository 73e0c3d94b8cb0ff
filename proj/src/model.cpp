#include "eqbase/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "eqbase/syntax.hpp"

namespace eqbase {

std::vector<int> FiniteModel::flattened() const {
    std::vector<int> out = meet;
    out.insert(out.end(), comp.begin(), comp.end());
    return out;
}

std::vector<int> FiniteModel::canonical_form() const {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    do {
        FiniteModel img;
        img.n = n;
        img.meet.resize(n * n);
        img.comp.resize(n);
        for (int a = 0; a < n; ++a) {
            img.comp[perm[a]] = perm[comp[a]];
            for (int b = 0; b < n; ++b) {
                img.meet[perm[a] * n + perm[b]] = perm[meet[a * n + b]];
            }
        }
        std::vector<int> flat = img.flattened();
        if (best.empty() || flat < best) best = std::move(flat);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

FiniteModel FiniteModel::ba2() {
    FiniteModel m;
    m.n = 2;
    m.meet = {0, 0, 0, 1};
    m.comp = {1, 0};
    return m;
}

FiniteModel FiniteModel::product(const FiniteModel& a, const FiniteModel& b) {
    FiniteModel m;
    m.n = a.n * b.n;
    m.meet.resize(m.n * m.n);
    m.comp.resize(m.n);
    auto idx = [&](int p, int q) { return p * b.n + q; };
    for (int p = 0; p < a.n; ++p) {
        for (int q = 0; q < b.n; ++q) {
            m.comp[idx(p, q)] = idx(a.comp[p], b.comp[q]);
            for (int r = 0; r < a.n; ++r) {
                for (int s = 0; s < b.n; ++s) {
                    m.meet[idx(p, q) * m.n + idx(r, s)] =
                        idx(a.meet[p * a.n + r], b.meet[q * b.n + s]);
                }
            }
        }
    }
    return m;
}

int evaluate(const FiniteModel& m, const TermPtr& t, const std::map<std::string, int>& assignment) {
    switch (t->kind()) {
        case Term::Kind::Var: {
            auto it = assignment.find(t->name());
            if (it == assignment.end()) {
                throw UnboundVariableError("unbound variable '" + t->name() + "'");
            }
            return it->second;
        }
        case Term::Kind::Comp:
            return m.comp_at(evaluate(m, t->child0(), assignment));
        case Term::Kind::Meet:
            return m.meet_at(evaluate(m, t->child0(), assignment),
                             evaluate(m, t->child1(), assignment));
    }
    return 0;
}

namespace {

// Evaluate over a vector assignment indexed by variable slot.
int eval_indexed(const FiniteModel& m, const TermPtr& t, const std::map<std::string, int>& slots,
                 const std::vector<int>& values) {
    switch (t->kind()) {
        case Term::Kind::Var:
            return values[slots.at(t->name())];
        case Term::Kind::Comp:
            return m.comp_at(eval_indexed(m, t->child0(), slots, values));
        case Term::Kind::Meet:
            return m.meet_at(eval_indexed(m, t->child0(), slots, values),
                             eval_indexed(m, t->child1(), slots, values));
    }
    return 0;
}

template <typename Fn>
bool for_each_assignment(int n, int k, Fn&& fn) {
    std::vector<int> values(k, 0);
    while (true) {
        if (!fn(values)) return false;
        int i = 0;
        while (i < k && ++values[i] == n) values[i++] = 0;
        if (i == k) return true;
    }
}

std::map<std::string, int> slot_map(const Identity& i) {
    std::map<std::string, int> slots;
    int next = 0;
    for (const auto& v : vars(i.lhs)) {
        if (!slots.count(v)) slots[v] = next++;
    }
    for (const auto& v : vars(i.rhs)) {
        if (!slots.count(v)) slots[v] = next++;
    }
    return slots;
}

}  // namespace

bool satisfies(const FiniteModel& m, const Identity& i) {
    auto slots = slot_map(i);
    int k = static_cast<int>(slots.size());
    return for_each_assignment(m.n, k, [&](const std::vector<int>& values) {
        return eval_indexed(m, i.lhs, slots, values) == eval_indexed(m, i.rhs, slots, values);
    });
}

bool satisfies_all(const FiniteModel& m, const std::vector<Identity>& ids) {
    return std::all_of(ids.begin(), ids.end(),
                       [&](const Identity& i) { return satisfies(m, i); });
}

std::optional<std::map<std::string, int>> violating_assignment(const FiniteModel& m,
                                                               const Identity& i) {
    auto slots = slot_map(i);
    int k = static_cast<int>(slots.size());
    std::optional<std::map<std::string, int>> found;
    for_each_assignment(m.n, k, [&](const std::vector<int>& values) {
        if (eval_indexed(m, i.lhs, slots, values) != eval_indexed(m, i.rhs, slots, values)) {
            std::map<std::string, int> a;
            for (const auto& [v, s] : slots) a[v] = values[s];
            found = std::move(a);
            return false;
        }
        return true;
    });
    return found;
}

namespace {

// Backtracking search state. Cells are numbered comp[0..n-1] first, then
// meet row-major; assignment follows the layered order built in the
// constructor.
class Search {
public:
    explicit Search(const SearchOptions& opts) : opts_(opts), n_(opts.size) {
        comp_.assign(n_, -1);
        meet_.assign(n_ * n_, -1);
        // Layered assignment order: finish every cell over {0..k} before
        // touching k+1, so instances over small elements propagate early.
        for (int k = 0; k < n_; ++k) {
            order_.push_back(comp_cell(k));
            for (int a = 0; a <= k; ++a) {
                for (int b = 0; b <= k; ++b) {
                    if (std::max(a, b) == k) order_.push_back(meet_cell(a, b));
                }
            }
        }
        build_instances();
    }

    SearchResult run() {
        SearchResult result;
        if (!initially_consistent_) {
            return result;
        }
        descend(0, result);
        result.nodes = nodes_;
        result.exhausted_budget = exhausted_;
        finalize(result);
        return result;
    }

private:
    struct Instance {
        TermPtr lhs;
        TermPtr rhs;  // ground: every leaf is a domain constant via values map
        std::map<std::string, int> values;
    };

    int comp_cell(int a) const { return a; }
    int meet_cell(int a, int b) const { return n_ + a * n_ + b; }
    int total_cells() const { return n_ + n_ * n_; }

    // Partial evaluation: value >= 0, or -1 - cell when blocked on `cell`.
    int peval(const TermPtr& t, const std::map<std::string, int>& values) const {
        switch (t->kind()) {
            case Term::Kind::Var:
                return values.at(t->name());
            case Term::Kind::Comp: {
                int c = peval(t->child0(), values);
                if (c < 0) return c;
                if (comp_[c] < 0) return -1 - comp_cell(c);
                return comp_[c];
            }
            case Term::Kind::Meet: {
                int a = peval(t->child0(), values);
                if (a < 0) return a;
                int b = peval(t->child1(), values);
                if (b < 0) return b;
                if (meet_[a * n_ + b] < 0) return -1 - meet_cell(a, b);
                return meet_[a * n_ + b];
            }
        }
        return 0;
    }

    // Returns: 1 satisfied, 0 violated, or -1 - cell when undecided.
    int check_instance(const Instance& inst) const {
        int a = peval(inst.lhs, inst.values);
        if (a < 0) return a;
        int b = peval(inst.rhs, inst.values);
        if (b < 0) return b;
        return a == b ? 1 : 0;
    }

    // If t is a single table lookup whose operands are fully evaluated but
    // whose cell is unassigned, return that cell; otherwise -1. Such a term
    // is forced to equal whatever the other side of its instance evaluates
    // to, turning one axiom instance into a unit assignment.
    int pending_root(const TermPtr& t, const std::map<std::string, int>& values) const {
        switch (t->kind()) {
            case Term::Kind::Var:
                return -1;
            case Term::Kind::Comp: {
                int c = peval(t->child0(), values);
                if (c < 0) return -1;
                return comp_[c] < 0 ? comp_cell(c) : -1;
            }
            case Term::Kind::Meet: {
                int a = peval(t->child0(), values);
                if (a < 0) return -1;
                int b = peval(t->child1(), values);
                if (b < 0) return -1;
                return meet_[a * n_ + b] < 0 ? meet_cell(a, b) : -1;
            }
        }
        return -1;
    }

    void build_instances() {
        watchers_.assign(total_cells(), {});
        for (const auto& ident : opts_.must_satisfy) {
            auto slots = slot_map(ident);
            int k = static_cast<int>(slots.size());
            for_each_assignment(n_, k, [&](const std::vector<int>& values) {
                Instance inst;
                inst.lhs = ident.lhs;
                inst.rhs = ident.rhs;
                for (const auto& [v, s] : slots) inst.values[v] = values[s];
                int st = check_instance(inst);
                if (st == 0) {
                    initially_consistent_ = false;
                    return false;
                }
                if (st < 0) {
                    int id = static_cast<int>(instances_.size());
                    instances_.push_back(std::move(inst));
                    watchers_[-1 - st].push_back(id);
                }
                return true;  // st == 1 with no table cells involved: drop
            });
            if (!initially_consistent_) return;
        }
    }

    int* cell_slot(int cell) { return cell < n_ ? &comp_[cell] : &meet_[cell - n_]; }

    // Re-check every instance watching an updated cell; move the ones now
    // blocked further along, and unit-assign cells whose value is forced by
    // an instance with one side evaluated. Returns false on a violation.
    bool propagate(int cell) {
        std::vector<int> queue = {cell};
        while (!queue.empty()) {
            int c = queue.back();
            queue.pop_back();
            auto& list = watchers_[c];
            std::size_t i = 0;
            while (i < list.size()) {
                const Instance& inst = instances_[list[i]];
                int a = peval(inst.lhs, inst.values);
                int b = peval(inst.rhs, inst.values);
                if (a >= 0 && b >= 0) {
                    if (a != b) return false;
                    ++i;
                    continue;
                }
                const TermPtr& open = a < 0 ? inst.lhs : inst.rhs;
                int known = a < 0 ? b : a;
                if (known >= 0) {
                    if (int pc = pending_root(open, inst.values); pc >= 0) {
                        *cell_slot(pc) = known;
                        trail_.push_back(pc);
                        queue.push_back(pc);
                        ++i;
                        continue;
                    }
                }
                int blocked = -1 - std::min(a, b);
                if (blocked != c) {
                    watchers_[blocked].push_back(list[i]);
                    list[i] = list.back();
                    list.pop_back();
                } else {
                    ++i;
                }
            }
        }
        return true;
    }

    void descend(int depth, SearchResult& result) {
        if (done_ || exhausted_) return;
        if (depth == total_cells()) {
            record_leaf(result);
            return;
        }
        int cell = order_[depth];
        int* slot = cell_slot(cell);
        if (*slot >= 0) {  // already unit-assigned by propagation
            descend(depth + 1, result);
            return;
        }
        int vmax = n_ - 1;
        if (opts_.up_to_iso) {
            // Least-number heuristic: values above max(mentioned element)+1
            // are interchangeable by relabeling, so trying one representative
            // still reaches every isomorphism class.
            int mx = cell < n_ ? cell : std::max((cell - n_) / n_, (cell - n_) % n_);
            for (int x : comp_) mx = std::max(mx, x);
            for (int x : meet_) mx = std::max(mx, x);
            vmax = std::min(vmax, mx + 1);
        }
        for (int v = 0; v <= vmax && !done_ && !exhausted_; ++v) {
            if (++nodes_ > opts_.node_budget) {
                exhausted_ = true;
                break;
            }
            std::size_t mark = trail_.size();
            *slot = v;
            if (propagate(cell)) descend(depth + 1, result);
            while (trail_.size() > mark) {
                *cell_slot(trail_.back()) = -1;
                trail_.pop_back();
            }
            *slot = -1;
        }
    }

    void record_leaf(SearchResult& result) {
        FiniteModel m;
        m.n = n_;
        m.meet = meet_;
        m.comp = comp_;
        if (opts_.must_violate && satisfies(m, *opts_.must_violate)) return;
        result.models.push_back(std::move(m));
        if (!opts_.up_to_iso && result.models.size() >= opts_.limit) done_ = true;
    }

    void finalize(SearchResult& result) {
        if (opts_.up_to_iso) {
            // One representative per isomorphism class: the lexicographically
            // least table under domain permutations.
            std::map<std::vector<int>, FiniteModel> reps;
            for (auto& m : result.models) {
                auto canon = m.canonical_form();
                auto it = reps.find(canon);
                if (it == reps.end() || m.flattened() < it->second.flattened()) {
                    reps[canon] = std::move(m);
                }
            }
            result.models.clear();
            for (auto& [canon, m] : reps) result.models.push_back(std::move(m));
        }
        std::sort(result.models.begin(), result.models.end(),
                  [](const FiniteModel& a, const FiniteModel& b) {
                      return a.flattened() < b.flattened();
                  });
        if (result.models.size() > opts_.limit) result.models.resize(opts_.limit);
    }

    SearchOptions opts_;
    int n_;
    std::vector<int> comp_;
    std::vector<int> meet_;
    std::vector<Instance> instances_;
    std::vector<std::vector<int>> watchers_;
    bool initially_consistent_ = true;
    bool done_ = false;
    bool exhausted_ = false;
    std::vector<int> order_;
    std::vector<int> trail_;  // cells assigned by unit propagation
    std::uint64_t nodes_ = 0;
};

}  // namespace

SearchResult search_models(const SearchOptions& opts) {
    Search s(opts);
    return s.run();
}

SearchResult enumerate_models(const SearchOptions& opts) {
    SearchResult result;
    int n = opts.size;
    int cells = n + n * n;
    std::vector<int> table(cells, 0);
    while (true) {
        FiniteModel m;
        m.n = n;
        m.comp.assign(table.begin(), table.begin() + n);
        m.meet.assign(table.begin() + n, table.end());
        ++result.nodes;
        if (satisfies_all(m, opts.must_satisfy) &&
            (!opts.must_violate || !satisfies(m, *opts.must_violate))) {
            result.models.push_back(std::move(m));
        }
        int i = 0;
        while (i < cells && ++table[i] == n) table[i++] = 0;
        if (i == cells) break;
    }
    if (opts.up_to_iso) {
        std::map<std::vector<int>, FiniteModel> reps;
        for (auto& m : result.models) {
            auto canon = m.canonical_form();
            auto it = reps.find(canon);
            if (it == reps.end() || m.flattened() < it->second.flattened()) {
                reps[canon] = std::move(m);
            }
        }
        result.models.clear();
        for (auto& [canon, m] : reps) result.models.push_back(std::move(m));
    }
    std::sort(result.models.begin(), result.models.end(),
              [](const FiniteModel& a, const FiniteModel& b) {
                  return a.flattened() < b.flattened();
              });
    if (result.models.size() > opts.limit) result.models.resize(opts.limit);
    return result;
}

bool is_boolean_algebra(const FiniteModel& m) {
    static const std::vector<Identity> base = {
        {"J1", parse_term("x ^ y"), parse_term("y ^ x")},
        {"J2", parse_term("(x ^ y) ^ z"), parse_term("x ^ (y ^ z)")},
        {"J4", parse_term("x''"), parse_term("x")},
        {"J5", parse_term("x'"), parse_term("(x ^ y)' ^ (x ^ y')'")},
    };
    return satisfies_all(m, base);
}

std::string format_model(const FiniteModel& m) {
    std::ostringstream out;
    out << "size " << m.n << "\nmeet:\n";
    for (int a = 0; a < m.n; ++a) {
        for (int b = 0; b < m.n; ++b) {
            out << (b ? " " : "") << m.meet_at(a, b);
        }
        out << "\n";
    }
    out << "comp:\n";
    for (int a = 0; a < m.n; ++a) out << (a ? " " : "") << m.comp_at(a);
    out << "\n";
    return out.str();
}

FiniteModel parse_model(const std::string& input) {
    // Strip comment lines before tokenizing.
    std::string stripped;
    {
        std::istringstream lines(input);
        std::string line;
        while (std::getline(lines, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            stripped += line;
            stripped += '\n';
        }
    }
    std::istringstream in(stripped);
    std::string word;
    FiniteModel m;
    if (!(in >> word) || word != "size" || !(in >> m.n) || m.n < 1) {
        throw ParseError(1, 1, "expected 'size n'");
    }
    if (!(in >> word) || word != "meet:") throw ParseError(2, 1, "expected 'meet:'");
    m.meet.resize(m.n * m.n);
    for (int& v : m.meet) {
        if (!(in >> v) || v < 0 || v >= m.n) throw ParseError(3, 1, "bad meet table entry");
    }
    if (!(in >> word) || word != "comp:") throw ParseError(3, 1, "expected 'comp:'");
    m.comp.resize(m.n);
    for (int& v : m.comp) {
        if (!(in >> v) || v < 0 || v >= m.n) throw ParseError(4, 1, "bad comp table entry");
    }
    return m;
}

}  // namespace eqbase
