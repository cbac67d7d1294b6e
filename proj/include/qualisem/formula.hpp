#pragma once

// Formula language: metainformation alphabets (JEPD partitions of V_p x V_p
// into named binary relations), present and goal descriptions, and log
// formulas that record what the agent perceived and did.
//
// Surface syntax:
//
//   present { holds(e1, temp, cold) holds(e2, temp, hot) }
//   goal { holds(e1, temp, warm) }
//   log { step(0, present { ... }, heat, present { ... }) ... }
//   alphabet D_temp over temp { INC: lt; DEC: gt; SAME: eq }
//   alphabet D_odd over temp { UP2: { (cold, warm), (cool, hot) }; REST: ... }

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qualisem/error.hpp"
#include "qualisem/lexer.hpp"
#include "qualisem/world.hpp"

namespace qualisem {

// ---------------------------------------------------------------------------
// Relations and alphabets

enum class RelationKind { Lt, Gt, Eq, Pairs };

using RankPair = std::pair<std::size_t, std::size_t>;

struct Relation {
    std::string name;
    RelationKind kind = RelationKind::Eq;
    std::vector<RankPair> pairs;  // sorted, unique; only for Pairs

    bool contains(std::size_t x, std::size_t y) const {
        switch (kind) {
            case RelationKind::Lt: return x < y;
            case RelationKind::Gt: return x > y;
            case RelationKind::Eq: return x == y;
            case RelationKind::Pairs:
                return std::binary_search(pairs.begin(), pairs.end(), RankPair{x, y});
        }
        return false;
    }

    bool operator==(const Relation&) const = default;
};

inline Relation make_relation(std::string name, RelationKind kind,
                              std::vector<RankPair> pairs = {}) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return Relation{std::move(name), kind, std::move(pairs)};
}

class MetaAlphabet {
public:
    MetaAlphabet(std::string name, PropertyPtr property, std::vector<Relation> relations)
        : name_(std::move(name)), property_(std::move(property)), relations_(std::move(relations)) {
        if (relations_.empty()) throw SemanticError("alphabet '" + name_ + "' has no relations");
        for (std::size_t i = 0; i < relations_.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j)
                if (relations_[i].name == relations_[j].name)
                    throw SemanticError("alphabet '" + name_ + "' repeats relation '" +
                                        relations_[i].name + "'");
            for (const auto& [x, y] : relations_[i].pairs)
                if (x >= property_->size() || y >= property_->size())
                    throw SemanticError("relation '" + relations_[i].name +
                                        "' has a pair outside the value space of '" +
                                        property_->name() + "'");
        }
    }

    const std::string& name() const { return name_; }
    const PropertyPtr& property() const { return property_; }
    const std::vector<Relation>& relations() const { return relations_; }

    const Relation* find(const std::string& relation) const {
        for (const auto& r : relations_)
            if (r.name == relation) return &r;
        return nullptr;
    }

    friend bool operator==(const MetaAlphabet& a, const MetaAlphabet& b) {
        return a.name_ == b.name_ && *a.property_ == *b.property_ && a.relations_ == b.relations_;
    }

private:
    std::string name_;
    PropertyPtr property_;
    std::vector<Relation> relations_;
};

struct JepdReport {
    struct Overlap {
        RankPair pair;
        std::vector<std::string> relations;
        bool operator==(const Overlap&) const = default;
    };

    std::vector<RankPair> uncovered;
    std::vector<Overlap> overlapping;

    bool ok() const { return uncovered.empty() && overlapping.empty(); }
};

inline JepdReport validate_jepd(const MetaAlphabet& alphabet) {
    JepdReport report;
    const auto n = alphabet.property()->size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            std::vector<std::string> hits;
            for (const auto& r : alphabet.relations())
                if (r.contains(x, y)) hits.push_back(r.name);
            if (hits.empty()) report.uncovered.push_back({x, y});
            else if (hits.size() > 1) report.overlapping.push_back({{x, y}, std::move(hits)});
        }
    }
    return report;
}

inline std::string describe(const JepdReport& report, const MetaAlphabet& alphabet) {
    const auto& vals = alphabet.property()->values();
    std::ostringstream out;
    if (report.ok()) {
        out << "alphabet " << alphabet.name() << ": JEPD\n";
        return out.str();
    }
    out << "alphabet " << alphabet.name() << ": not JEPD (" << report.uncovered.size()
        << " uncovered, " << report.overlapping.size() << " overlapping)\n";
    for (const auto& [x, y] : report.uncovered)
        out << "  uncovered (" << vals[x] << ", " << vals[y] << ")\n";
    for (const auto& o : report.overlapping) {
        out << "  overlapping (" << vals[o.pair.first] << ", " << vals[o.pair.second] << "):";
        for (const auto& r : o.relations) out << ' ' << r;
        out << '\n';
    }
    return out.str();
}

// The unique relation of `alphabet` that contains (x, y).
inline const Relation& classify_pair(const MetaAlphabet& alphabet, const QualValue& x,
                                     const QualValue& y) {
    const auto& pname = alphabet.property()->name();
    if (x.property_name() != pname || y.property_name() != pname)
        throw PropertyMismatch("alphabet '" + alphabet.name() + "' is over '" + pname +
                               "', not '" + x.property_name() + "'/'" + y.property_name() + "'");
    const Relation* found = nullptr;
    for (const auto& r : alphabet.relations()) {
        if (!r.contains(x.rank, y.rank)) continue;
        if (found)
            throw PartitionViolation("pair (" + x.name() + ", " + y.name() + ") is in both '" +
                                     found->name + "' and '" + r.name + "'");
        found = &r;
    }
    if (!found)
        throw PartitionViolation("pair (" + x.name() + ", " + y.name() + ") is in no relation of '" +
                                 alphabet.name() + "'");
    return *found;
}

// ---------------------------------------------------------------------------
// Formulas

enum class Mode { Present, Goal, Log };

inline const char* mode_keyword(Mode m) {
    switch (m) {
        case Mode::Present: return "present";
        case Mode::Goal: return "goal";
        case Mode::Log: return "log";
    }
    return "?";
}

struct Atom {
    std::string entity;
    std::string property;
    std::string value;

    Cell cell() const { return Cell{entity, property}; }
    auto operator<=>(const Atom&) const = default;
    bool operator==(const Atom&) const = default;
};

struct StepRecord;

struct Formula {
    Mode mode = Mode::Goal;
    std::vector<Atom> atoms;        // Present/Goal, sorted by (entity, property)
    std::vector<StepRecord> steps;  // Log

    friend bool operator==(const Formula& a, const Formula& b);
};

struct StepRecord {
    std::int64_t t = 0;
    Formula before;
    std::string action;
    Formula after;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

inline bool operator==(const Formula& a, const Formula& b) {
    return a.mode == b.mode && a.atoms == b.atoms && a.steps == b.steps;
}

// Sorts atoms and rejects two different values for the same cell.
inline Formula make_description(Mode mode, std::vector<Atom> atoms) {
    if (mode == Mode::Log) throw SemanticError("a log formula has no atoms");
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    for (std::size_t i = 1; i < atoms.size(); ++i)
        if (atoms[i].cell() == atoms[i - 1].cell())
            throw SemanticError("cell " + atoms[i].cell().str() + " is assigned both '" +
                                atoms[i - 1].value + "' and '" + atoms[i].value + "'");
    Formula f;
    f.mode = mode;
    f.atoms = std::move(atoms);
    return f;
}

inline Formula make_log(std::vector<StepRecord> steps) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].before.mode != Mode::Present || steps[i].after.mode != Mode::Present)
            throw SemanticError("log step " + std::to_string(steps[i].t) +
                                " must relate two present descriptions");
        if (i > 0 && steps[i].t != steps[i - 1].t + 1)
            throw SemanticError("log step times must be contiguous and increasing (" +
                                std::to_string(steps[i - 1].t) + " then " +
                                std::to_string(steps[i].t) + ")");
    }
    Formula f;
    f.mode = Mode::Log;
    f.steps = std::move(steps);
    return f;
}

inline std::optional<std::string> lookup(const Formula& f, const Cell& cell) {
    auto it = std::lower_bound(f.atoms.begin(), f.atoms.end(), Atom{cell.entity, cell.property, {}});
    if (it != f.atoms.end() && it->entity == cell.entity && it->property == cell.property)
        return it->value;
    return std::nullopt;
}

// Every atom of `description` is true in `reality`.
inline bool holds_in(const Formula& description, const Reality& reality) {
    for (const auto& a : description.atoms) {
        auto it = reality.assignments.find(a.cell());
        if (it == reality.assignments.end() || it->second.name() != a.value) return false;
    }
    return true;
}

inline Formula describe_present(const Reality& r) {
    std::vector<Atom> atoms;
    atoms.reserve(r.assignments.size());
    for (const auto& [cell, v] : r.assignments) atoms.push_back({cell.entity, cell.property, v.name()});
    return make_description(Mode::Present, std::move(atoms));
}

// Resolves the atoms of a present or goal description against `vocab`.
inline Reality reality_of(const Formula& f, const Vocabulary& vocab, std::uint64_t time = 0) {
    if (f.mode == Mode::Log) throw SemanticError("a log formula does not describe a reality");
    Reality r;
    r.time = time;
    for (const auto& a : f.atoms) {
        if (!vocab.has_property(a.property))
            throw SemanticError("unknown property '" + a.property + "'");
        auto p = vocab.property(a.property);
        auto rank = p->rank(a.value);
        if (!rank)
            throw SemanticError("'" + a.value + "' is not a value of property '" + a.property + "'");
        r.assignments.emplace(a.cell(), QualValue{p, *rank});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Printing

inline void print_atoms(std::ostream& out, const Formula& f) {
    out << mode_keyword(f.mode) << " {";
    for (const auto& a : f.atoms)
        out << " holds(" << a.entity << ", " << a.property << ", " << a.value << ")";
    out << " }";
}

inline void print_formula(std::ostream& out, const Formula& f) {
    if (f.mode != Mode::Log) {
        print_atoms(out, f);
        return;
    }
    out << "log {";
    for (const auto& s : f.steps) {
        out << " step(" << s.t << ", ";
        print_atoms(out, s.before);
        out << ", " << s.action << ", ";
        print_atoms(out, s.after);
        out << ")";
    }
    out << " }";
}

inline std::string print(const Formula& f) {
    std::ostringstream out;
    print_formula(out, f);
    return out.str();
}

inline std::string print(const MetaAlphabet& a) {
    std::ostringstream out;
    const auto& vals = a.property()->values();
    out << "alphabet " << a.name() << " over " << a.property()->name() << " {";
    for (std::size_t i = 0; i < a.relations().size(); ++i) {
        const auto& r = a.relations()[i];
        out << (i == 0 ? " " : "; ") << r.name << ": ";
        switch (r.kind) {
            case RelationKind::Lt: out << "lt"; break;
            case RelationKind::Gt: out << "gt"; break;
            case RelationKind::Eq: out << "eq"; break;
            case RelationKind::Pairs:
                out << "{";
                for (std::size_t k = 0; k < r.pairs.size(); ++k) {
                    out << (k > 0 ? ", " : " ");
                    out << "(" << vals[r.pairs[k].first] << ", " << vals[r.pairs[k].second] << ")";
                }
                out << " }";
                break;
        }
    }
    out << " }";
    return out.str();
}

// ---------------------------------------------------------------------------
// Parsing

struct ParseOptions {
    // Reject alphabets that are not JEPD. Scenario validation turns this off so
    // it can report the failures instead.
    bool require_jepd = true;
};

namespace detail {

class FormulaParser {
public:
    FormulaParser(TokenStream& ts, const Vocabulary* vocab, ParseOptions opts)
        : ts_(ts), vocab_(vocab), opts_(opts) {}

    Formula formula() {
        auto start = ts_.peek().pos;
        auto kw = ts_.expect_keyword({"present", "goal", "log"});
        if (kw == "log") return log_body(start);
        Mode mode = kw == "present" ? Mode::Present : Mode::Goal;
        return description_body(mode, start);
    }

    Formula description(Mode mode) {
        auto start = ts_.peek().pos;
        ts_.expect(mode_keyword(mode));
        return description_body(mode, start);
    }

    MetaAlphabet alphabet() {
        ts_.expect("alphabet");
        auto name = ts_.expect_ident("alphabet name");
        ts_.expect("over");
        auto prop_pos = ts_.peek().pos;
        auto prop_name = ts_.expect_ident("property name");
        if (!vocab_ || !vocab_->has_property(prop_name))
            throw SemanticError(at(prop_pos) + "unknown property '" + prop_name + "'");
        const auto& property = vocab_->property(prop_name);
        ts_.expect("{");
        std::vector<Relation> relations;
        do {
            relations.push_back(relation(*property));
        } while (ts_.accept(";"));
        ts_.expect("}");
        MetaAlphabet alpha(name, property, std::move(relations));
        if (opts_.require_jepd) {
            auto report = validate_jepd(alpha);
            if (!report.ok()) throw SemanticError(describe(report, alpha));
        }
        return alpha;
    }

private:
    static std::string at(SourcePos p) {
        return std::to_string(p.line) + ":" + std::to_string(p.column) + ": ";
    }

    Relation relation(const Property& property) {
        auto name = ts_.expect_ident("relation name");
        ts_.expect(":");
        if (ts_.accept("lt")) return make_relation(name, RelationKind::Lt);
        if (ts_.accept("gt")) return make_relation(name, RelationKind::Gt);
        if (ts_.accept("eq")) return make_relation(name, RelationKind::Eq);
        if (!ts_.is("{")) ts_.fail({"'lt'", "'gt'", "'eq'", "'{'"});
        ts_.next();
        std::vector<RankPair> pairs;
        if (ts_.accept("}")) return make_relation(name, RelationKind::Pairs, std::move(pairs));
        do {
            ts_.expect("(");
            auto x = value_rank(property);
            ts_.expect(",");
            auto y = value_rank(property);
            ts_.expect(")");
            pairs.push_back({x, y});
        } while (ts_.accept(","));
        ts_.expect("}");
        return make_relation(name, RelationKind::Pairs, std::move(pairs));
    }

    std::size_t value_rank(const Property& property) {
        auto pos = ts_.peek().pos;
        auto v = ts_.expect_ident("value");
        auto r = property.rank(v);
        if (!r)
            throw SemanticError(at(pos) + "'" + v + "' is not a value of property '" +
                                property.name() + "'");
        return *r;
    }

    Formula description_body(Mode mode, SourcePos start) {
        ts_.expect("{");
        std::vector<Atom> atoms;
        while (ts_.is("holds")) atoms.push_back(atom());
        if (!ts_.is("}")) ts_.fail({"'holds'", "'}'"});
        ts_.next();
        Formula f;
        try {
            f = make_description(mode, std::move(atoms));
        } catch (const SemanticError& e) {
            throw SemanticError(at(start) + e.what());
        }
        if (vocab_ && mode == Mode::Present && !vocab_->grid().empty()) {
            for (const auto& cell : vocab_->grid())
                if (!lookup(f, cell))
                    throw SemanticError(at(start) + "present description does not cover " +
                                        cell.str());
        }
        return f;
    }

    Atom atom() {
        ts_.expect("holds");
        ts_.expect("(");
        auto pos = ts_.peek().pos;
        Atom a;
        a.entity = ts_.expect_ident("entity");
        ts_.expect(",");
        a.property = ts_.expect_ident("property");
        ts_.expect(",");
        a.value = ts_.expect_ident("value");
        ts_.expect(")");
        if (vocab_) {
            if (!vocab_->has_property(a.property))
                throw SemanticError(at(pos) + "unknown property '" + a.property + "'");
            if (!vocab_->property(a.property)->rank(a.value))
                throw SemanticError(at(pos) + "'" + a.value + "' is not a value of property '" +
                                    a.property + "'");
            if (!vocab_->grid().empty() && !vocab_->in_grid(a.cell()))
                throw SemanticError(at(pos) + "cell " + a.cell().str() + " is not in the grid");
        }
        return a;
    }

    Formula log_body(SourcePos start) {
        ts_.expect("{");
        std::vector<StepRecord> steps;
        while (ts_.is("step")) {
            ts_.next();
            ts_.expect("(");
            StepRecord s;
            s.t = ts_.expect_integer();
            ts_.expect(",");
            s.before = formula();
            ts_.expect(",");
            s.action = ts_.expect_ident("action");
            ts_.expect(",");
            s.after = formula();
            ts_.expect(")");
            steps.push_back(std::move(s));
        }
        if (!ts_.is("}")) ts_.fail({"'step'", "'}'"});
        ts_.next();
        try {
            return make_log(std::move(steps));
        } catch (const SemanticError& e) {
            throw SemanticError(at(start) + e.what());
        }
    }

    TokenStream& ts_;
    const Vocabulary* vocab_;
    ParseOptions opts_;
};

}  // namespace detail

using Parsed = std::variant<Formula, MetaAlphabet>;

// Parses one formula or alphabet. Without a vocabulary only syntax and
// structural invariants are checked, and alphabets cannot be resolved.
inline Parsed parse(std::string_view text, const Vocabulary* vocab = nullptr,
                    ParseOptions opts = {}) {
    TokenStream ts(text);
    detail::FormulaParser p(ts, vocab, opts);
    if (ts.is("alphabet")) {
        auto a = p.alphabet();
        ts.expect_end();
        return a;
    }
    if (!ts.is("present") && !ts.is("goal") && !ts.is("log"))
        ts.fail({"'present'", "'goal'", "'log'", "'alphabet'"});
    auto f = p.formula();
    ts.expect_end();
    return f;
}

inline Parsed parse(std::string_view text, const Vocabulary& vocab, ParseOptions opts = {}) {
    return parse(text, &vocab, opts);
}

inline Formula parse_formula(std::string_view text, const Vocabulary* vocab = nullptr) {
    auto r = parse(text, vocab);
    if (auto* f = std::get_if<Formula>(&r)) return std::move(*f);
    throw SemanticError("expected a formula, got an alphabet");
}

inline MetaAlphabet parse_alphabet(std::string_view text, const Vocabulary& vocab,
                                   ParseOptions opts = {}) {
    auto r = parse(text, &vocab, opts);
    if (auto* a = std::get_if<MetaAlphabet>(&r)) return std::move(*a);
    throw SemanticError("expected an alphabet, got a formula");
}

}  // namespace qualisem
