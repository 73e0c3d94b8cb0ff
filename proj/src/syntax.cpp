#include "eqbase/syntax.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace eqbase {

const std::string kAbbrevFreshVar = "zero";

namespace {

const std::set<std::string> kReservedWords = {"by", "at", "with", "lemma", "from", "abbrev"};

// Cursor over a single line. Understands the ASCII surface syntax plus the
// Unicode aliases for meet and complement.
class Cursor {
public:
    Cursor(const std::string& text, int line, const std::map<std::string, TermPtr>* abbrevs,
           bool forbid_fresh_var)
        : text_(text), line_(line), abbrevs_(abbrevs), forbid_fresh_var_(forbid_fresh_var) {}

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(line_, static_cast<int>(pos_) + 1, message);
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '#') pos_ = text_.size();
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    bool peek_char(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool try_char(char c) {
        if (!peek_char(c)) return false;
        ++pos_;
        return true;
    }

    void expect_char(char c, const std::string& what) {
        if (!try_char(c)) fail("expected " + what);
    }

    // Multi-byte aware operators: '^' or U+2227; '\'' or U+2032.
    bool try_meet_op() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '^') {
            ++pos_;
            return true;
        }
        if (pos_ + 2 < text_.size() && static_cast<unsigned char>(text_[pos_]) == 0xE2 &&
            static_cast<unsigned char>(text_[pos_ + 1]) == 0x88 &&
            static_cast<unsigned char>(text_[pos_ + 2]) == 0xA7) {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool try_prime_op() {
        // No space skipping: the postfix prime must be adjacent.
        if (pos_ < text_.size() && text_[pos_] == '\'') {
            ++pos_;
            return true;
        }
        if (pos_ + 2 < text_.size() && static_cast<unsigned char>(text_[pos_]) == 0xE2 &&
            static_cast<unsigned char>(text_[pos_ + 1]) == 0x80 &&
            static_cast<unsigned char>(text_[pos_ + 2]) == 0xB2) {
            pos_ += 3;
            return true;
        }
        return false;
    }

    // Lowercase identifier (a variable).
    std::string parse_var_name() {
        skip_space();
        if (pos_ >= text_.size() || !std::islower(static_cast<unsigned char>(text_[pos_]))) {
            fail("expected a variable, '(' or an abbreviation");
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::islower(static_cast<unsigned char>(text_[pos_])) ||
                                       std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
            ++pos_;
        }
        std::string name = text_.substr(start, pos_ - start);
        if (kReservedWords.count(name)) {
            pos_ = start;
            fail("reserved word '" + name + "' cannot be a variable");
        }
        if (forbid_fresh_var_ && name == kAbbrevFreshVar) {
            pos_ = start;
            fail("variable name '" + kAbbrevFreshVar + "' is reserved for abbreviation expansion");
        }
        return name;
    }

    // Rule/lemma/abbrev name: letters, digits, '.', '_', '-' and trailing primes.
    std::string parse_name() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-' ||
                c == '\'') {
                ++pos_;
            } else if (pos_ + 2 < text_.size() && static_cast<unsigned char>(c) == 0xE2 &&
                       static_cast<unsigned char>(text_[pos_ + 1]) == 0x80 &&
                       static_cast<unsigned char>(text_[pos_ + 2]) == 0xB2) {
                pos_ += 3;  // U+2032 prime in a name
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a name");
        std::string raw = text_.substr(start, pos_ - start);
        // Normalize Unicode primes in names to ASCII.
        std::string out;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (i + 2 < raw.size() && static_cast<unsigned char>(raw[i]) == 0xE2 &&
                static_cast<unsigned char>(raw[i + 1]) == 0x80 &&
                static_cast<unsigned char>(raw[i + 2]) == 0xB2) {
                out += '\'';
                i += 2;
            } else {
                out += raw[i];
            }
        }
        return out;
    }

    bool try_word(const std::string& w) {
        skip_space();
        if (text_.compare(pos_, w.size(), w) != 0) return false;
        std::size_t end = pos_ + w.size();
        if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
        pos_ = end;
        return true;
    }

    void expect_word(const std::string& w) {
        if (!try_word(w)) fail("expected '" + w + "'");
    }

    TermPtr parse_term_full() {
        TermPtr t = parse_meet();
        if (!at_end()) fail("unexpected trailing input after term");
        return t;
    }

    // term := factor ('^' factor)?   -- meet is non-associative.
    TermPtr parse_meet() {
        TermPtr left = parse_factor();
        if (try_meet_op()) {
            TermPtr right = parse_factor();
            skip_space();
            if (pos_ < text_.size() && (text_[pos_] == '^' ||
                                        (static_cast<unsigned char>(text_[pos_]) == 0xE2 &&
                                         pos_ + 2 < text_.size() &&
                                         static_cast<unsigned char>(text_[pos_ + 1]) == 0x88))) {
                fail("meet is non-associative; parenthesize nested meets");
            }
            return Term::meet(std::move(left), std::move(right));
        }
        return left;
    }

    TermPtr parse_factor() {
        TermPtr t = parse_primary();
        while (try_prime_op()) t = Term::comp(std::move(t));
        return t;
    }

    TermPtr parse_primary() {
        skip_space();
        if (try_char('(')) {
            TermPtr t = parse_meet();
            expect_char(')', "')'");
            return t;
        }
        if (pos_ < text_.size() && abbrevs_) {
            // An abbreviation reference: currently the single token "0".
            if (text_[pos_] == '0') {
                auto it = abbrevs_->find("0");
                if (it == abbrevs_->end()) fail("abbreviation '0' used before its declaration");
                ++pos_;
                return it->second;
            }
        }
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            fail("expected a variable, '(' or an abbreviation");
        }
        return Term::var(parse_var_name());
    }

    Position parse_position() {
        expect_char('[', "'['");
        Position p;
        if (try_char(']')) return p;
        while (true) {
            skip_space();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == start) fail("expected a child index");
            p.push_back(std::stoi(text_.substr(start, pos_ - start)));
            if (try_char(']')) return p;
            expect_char(',', "',' or ']'");
        }
    }

    Substitution parse_substitution() {
        expect_char('{', "'{'");
        Substitution s;
        if (try_char('}')) return s;
        while (true) {
            std::string v = parse_var_name();
            expect_char(':', "':='");
            expect_char('=', "':='");
            TermPtr t = parse_meet();
            if (!s.emplace(v, std::move(t)).second) fail("duplicate binding for '" + v + "'");
            if (try_char('}')) return s;
            expect_char(',', "',' or '}'");
        }
    }

private:
    const std::string& text_;
    int line_;
    std::size_t pos_ = 0;
    const std::map<std::string, TermPtr>* abbrevs_;
    bool forbid_fresh_var_;
};

std::vector<std::string> split_lines(const std::string& input) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : input) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    lines.push_back(cur);
    return lines;
}

bool blank_or_comment(const std::string& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '#') return true;
        if (line[i] != ' ' && line[i] != '\t') return false;
    }
    return true;
}

}  // namespace

TermPtr parse_term(const std::string& input) {
    // Multi-line input is accepted for plain terms; join before parsing.
    std::string joined;
    for (char c : input) joined += (c == '\n' || c == '\r') ? ' ' : c;
    Cursor cur(joined, 1, nullptr, false);
    return cur.parse_term_full();
}

std::string format_term(const TermPtr& t) {
    switch (t->kind()) {
        case Term::Kind::Var:
            return t->name();
        case Term::Kind::Comp: {
            const TermPtr& a = t->child0();
            if (a->is_meet()) return "(" + format_term(a) + ")'";
            return format_term(a) + "'";
        }
        case Term::Kind::Meet: {
            auto side = [](const TermPtr& s) {
                std::string f = format_term(s);
                return s->is_meet() ? "(" + f + ")" : f;
            };
            return side(t->child0()) + " ^ " + side(t->child1());
        }
    }
    return "";
}

std::string format_identity(const Identity& i) {
    return format_term(i.lhs) + " = " + format_term(i.rhs);
}

std::string format_position(const Position& p) {
    std::string out = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(p[i]);
    }
    return out + "]";
}

std::string format_substitution(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : s) {
        if (!first) out += ", ";
        first = false;
        out += v + " := " + format_term(t);
    }
    return out + "}";
}

Identity LemmaBlock::statement() const {
    return Identity{name, initial, steps.empty() ? initial : steps.back().result};
}

const Identity* AxiomFile::find(const std::string& name) const {
    for (const auto& i : identities) {
        if (i.name == name) return &i;
    }
    return nullptr;
}

std::vector<const LemmaBlock*> ProofScriptFile::lemmas() const {
    std::vector<const LemmaBlock*> out;
    for (const auto& item : items) {
        if (const auto* l = std::get_if<LemmaBlock>(&item)) out.push_back(l);
    }
    return out;
}

AxiomFile parse_axiom_file(const std::string& input) {
    AxiomFile file;
    std::set<std::string> names;
    auto lines = split_lines(input);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        if (blank_or_comment(lines[li])) continue;
        Cursor cur(lines[li], static_cast<int>(li) + 1, nullptr, false);
        std::string name = cur.parse_name();
        cur.expect_char(':', "':' after the identity name");
        TermPtr lhs = cur.parse_meet();
        cur.expect_char('=', "'='");
        TermPtr rhs = cur.parse_meet();
        if (!cur.at_end()) cur.fail("unexpected trailing input");
        if (!names.insert(name).second) {
            throw DuplicateNameError("duplicate identity name '" + name + "'");
        }
        file.identities.push_back(Identity{std::move(name), std::move(lhs), std::move(rhs)});
    }
    return file;
}

ProofScriptFile parse_proof_script(const std::string& input) {
    ProofScriptFile file;
    std::set<std::string> lemma_names;
    std::map<std::string, TermPtr> abbrevs;
    auto lines = split_lines(input);
    std::size_t li = 0;
    auto line_no = [&] { return static_cast<int>(li) + 1; };
    while (li < lines.size()) {
        if (blank_or_comment(lines[li])) {
            ++li;
            continue;
        }
        Cursor head(lines[li], line_no(), nullptr, false);
        if (head.try_word("abbrev")) {
            AbbrevDecl decl;
            decl.name = head.parse_name();
            head.expect_char('=', "'='");
            decl.body = head.parse_meet();
            if (!head.at_end()) head.fail("unexpected trailing input");
            auto vs = vars(decl.body);
            if (vs.size() != 1) head.fail("abbreviation body must have exactly one variable");
            decl.body_var = vs[0];
            decl.expansion =
                substitute(decl.body, Substitution{{decl.body_var, Term::var(kAbbrevFreshVar)}});
            if (abbrevs.count(decl.name)) {
                throw DuplicateNameError("duplicate abbreviation '" + decl.name + "'");
            }
            abbrevs[decl.name] = decl.expansion;
            file.items.push_back(std::move(decl));
            ++li;
            continue;
        }
        Cursor header(lines[li], line_no(), nullptr, false);
        header.expect_word("lemma");
        LemmaBlock block;
        block.name = header.parse_name();
        if (!lemma_names.insert(block.name).second) {
            throw DuplicateNameError("duplicate lemma name '" + block.name + "'");
        }
        if (header.try_word("from")) {
            while (true) {
                block.hypotheses.push_back(header.parse_name());
                if (!header.try_char(',')) break;
            }
        }
        header.expect_char(':', "':' at the end of the lemma header");
        if (!header.at_end()) header.fail("unexpected trailing input");
        ++li;
        while (li < lines.size() && blank_or_comment(lines[li])) ++li;
        if (li >= lines.size()) {
            throw ParseError(line_no(), 1, "missing initial term in lemma '" + block.name + "'");
        }
        {
            Cursor cur(lines[li], line_no(), &abbrevs, true);
            block.initial = cur.parse_meet();
            if (!cur.at_end()) cur.fail("unexpected trailing input after the initial term");
            ++li;
        }
        while (li < lines.size()) {
            if (blank_or_comment(lines[li])) break;
            Cursor cur(lines[li], line_no(), &abbrevs, true);
            if (!cur.try_char('=')) break;
            ScriptStep step;
            step.result = cur.parse_meet();
            cur.expect_word("by");
            step.rule = cur.parse_name();
            if (cur.try_char('-')) {
                cur.expect_char('>', "'->' or '<-'");
                step.direction = StepDirection::LhsToRhs;
            } else if (cur.try_char('<')) {
                cur.expect_char('-', "'->' or '<-'");
                step.direction = StepDirection::RhsToLhs;
            } else {
                cur.fail("expected '->' or '<-'");
            }
            cur.expect_word("at");
            step.position = cur.parse_position();
            if (cur.try_word("with")) {
                step.substitution = cur.parse_substitution();
                step.explicit_subst = true;
            }
            if (!cur.at_end()) cur.fail("unexpected trailing input after step");
            block.steps.push_back(std::move(step));
            ++li;
        }
        if (block.steps.empty()) {
            throw ParseError(line_no(), 1, "lemma '" + block.name + "' has no steps");
        }
        file.items.push_back(std::move(block));
    }
    return file;
}

std::string format_axiom_file(const AxiomFile& f, const std::string& header) {
    std::string out = header;
    for (const auto& i : f.identities) {
        out += i.name + ": " + format_identity(i) + "\n";
    }
    return out;
}

namespace {

// Fold declared abbreviation expansions back into their names so formatted
// scripts never spell out the reserved expansion variable (the parser would
// reject it).
TermPtr fold_abbrevs(const TermPtr& t, const std::vector<const AbbrevDecl*>& decls) {
    for (const AbbrevDecl* d : decls) {
        if (equal(t, d->expansion)) return Term::var(d->name);
    }
    switch (t->kind()) {
        case Term::Kind::Var:
            return t;
        case Term::Kind::Comp:
            return Term::comp(fold_abbrevs(t->child0(), decls));
        case Term::Kind::Meet:
            return Term::meet(fold_abbrevs(t->child0(), decls),
                              fold_abbrevs(t->child1(), decls));
    }
    return t;
}

}  // namespace

std::string format_proof_script(const ProofScriptFile& f, const std::string& header) {
    std::string out = header;
    std::vector<const AbbrevDecl*> decls;
    for (const auto& item : f.items) {
        if (const auto* decl = std::get_if<AbbrevDecl>(&item)) {
            out += "abbrev " + decl->name + " = " + format_term(decl->body) + "\n\n";
            decls.push_back(decl);
            continue;
        }
        const auto& l = std::get<LemmaBlock>(item);
        out += "lemma " + l.name;
        if (!l.hypotheses.empty()) {
            out += " from ";
            for (std::size_t i = 0; i < l.hypotheses.size(); ++i) {
                if (i) out += ", ";
                out += l.hypotheses[i];
            }
        }
        out += ":\n  " + format_term(fold_abbrevs(l.initial, decls)) + "\n";
        for (const auto& s : l.steps) {
            out += "  = " + format_term(fold_abbrevs(s.result, decls)) + " by " + s.rule +
                   (s.direction == StepDirection::LhsToRhs ? " -> at " : " <- at ") +
                   format_position(s.position);
            if (s.explicit_subst) {
                Substitution folded;
                for (const auto& [v, val] : s.substitution) {
                    folded[v] = fold_abbrevs(val, decls);
                }
                out += " with " + format_substitution(folded);
            }
            out += "\n";
        }
        out += "\n";
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace eqbase
