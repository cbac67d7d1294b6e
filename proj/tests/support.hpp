#pragma once

// Generators and independent oracles shared by the unit suites and the
// acceptance binary. Oracles here deliberately avoid the library's own
// algorithms: membership is recomputed from relation kinds, normalization
// uses named substitution with innermost-first reduction, and grid
// reachability is a plain coordinate BFS.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qualisem/qualisem.hpp"

namespace qtest {

using namespace qualisem;

// ---------------------------------------------------------------------------
// Small helpers

inline std::size_t pick(SplitMix64& rng, std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

inline bool coin(SplitMix64& rng, unsigned percent = 50) { return rng.below(100) < percent; }

inline PropertyPtr ordered_property(const std::string& name, std::size_t n, const std::string& prefix = "v") {
    std::vector<std::string> values;
    std::vector<double> cuts;
    for (std::size_t i = 0; i < n; ++i) {
        values.push_back(prefix + std::to_string(i));
        if (i > 0) cuts.push_back(static_cast<double>(i));
    }
    return std::make_shared<const Property>(name, values, cuts);
}

inline PropertyPtr temp_property() {
    return std::make_shared<const Property>("temp", std::vector<std::string>{"cold", "cool", "warm", "hot"},
                                            std::vector<double>{10, 20, 30}, "celsius");
}

inline MetaAlphabet order_alphabet(const std::string& name, const PropertyPtr& p) {
    return MetaAlphabet(name, p,
                        {make_relation("INC", RelationKind::Lt), make_relation("DEC", RelationKind::Gt),
                         make_relation("SAME", RelationKind::Eq)});
}

// ---------------------------------------------------------------------------
// Alphabets

// Random JEPD alphabet: every pair of V_p x V_p is assigned to one of k
// relations, some written as lt/gt/eq when the assignment allows it.
inline MetaAlphabet random_jepd_alphabet(SplitMix64& rng, const PropertyPtr& p, const std::string& name = "A") {
    const auto n = p->size();
    if (coin(rng, 40))
        return MetaAlphabet(name, p,
                            {make_relation("LT", RelationKind::Lt), make_relation("GT", RelationKind::Gt),
                             make_relation("EQ", RelationKind::Eq)});
    std::size_t k = pick(rng, 1, 4);
    std::vector<std::vector<RankPair>> parts(k);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) parts[rng.below(k)].push_back({x, y});
    std::vector<Relation> rels;
    for (std::size_t i = 0; i < k; ++i) {
        if (parts[i].empty()) continue;
        rels.push_back(make_relation("R" + std::to_string(i), RelationKind::Pairs, parts[i]));
    }
    // Sometimes split off the diagonal as an eq relation.
    if (coin(rng, 50) && n >= 2) {
        std::vector<Relation> out{make_relation("SAME", RelationKind::Eq)};
        std::vector<RankPair> rest;
        for (auto& r : rels)
            for (auto pr : r.pairs)
                if (pr.first != pr.second) rest.push_back(pr);
        out.push_back(make_relation("DIFF", RelationKind::Pairs, rest));
        return MetaAlphabet(name, p, out);
    }
    return MetaAlphabet(name, p, rels);
}

// Breaks exhaustiveness (drops pairs) or disjointness (duplicates pairs).
inline MetaAlphabet mutate_alphabet(SplitMix64& rng, const MetaAlphabet& a) {
    const auto n = a.property()->size();
    std::vector<Relation> rels = a.relations();
    // Materialize everything as explicit sets so pairs can be moved around.
    for (auto& r : rels) {
        if (r.kind == RelationKind::Pairs) continue;
        std::vector<RankPair> pairs;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                if (r.contains(x, y)) pairs.push_back({x, y});
        r = make_relation(r.name, RelationKind::Pairs, pairs);
    }
    RankPair target{rng.below(n), rng.below(n)};
    if (n > 1 && coin(rng)) {
        for (auto& r : rels) std::erase(r.pairs, target);
        std::erase_if(rels, [](const Relation& r) { return r.pairs.empty(); });
        if (rels.empty()) {
            RankPair other = target == RankPair{0, 0} ? RankPair{0, 1} : RankPair{0, 0};
            rels.push_back(make_relation("ONLY", RelationKind::Pairs, {other}));
        }
    } else {
        std::size_t holder = 0;
        for (std::size_t i = 0; i < rels.size(); ++i)
            if (std::find(rels[i].pairs.begin(), rels[i].pairs.end(), target) != rels[i].pairs.end()) holder = i;
        if (rels.size() == 1) {
            rels.push_back(make_relation("EXTRA", RelationKind::Pairs, {target}));
        } else {
            auto other = (holder + 1) % rels.size();
            rels[other].pairs.push_back(target);
            rels[other] = make_relation(rels[other].name, RelationKind::Pairs, rels[other].pairs);
        }
    }
    return MetaAlphabet(a.name(), a.property(), rels);
}

// Membership straight from the relation kind, without Relation::contains.
inline bool naive_member(const Relation& r, std::size_t x, std::size_t y) {
    switch (r.kind) {
        case RelationKind::Lt: return x < y;
        case RelationKind::Gt: return x > y;
        case RelationKind::Eq: return x == y;
        case RelationKind::Pairs:
            for (const auto& p : r.pairs)
                if (p.first == x && p.second == y) return true;
            return false;
    }
    return false;
}

struct NaiveJepd {
    std::vector<RankPair> uncovered;
    std::vector<std::pair<RankPair, std::vector<std::string>>> overlapping;
};

inline NaiveJepd naive_jepd(const MetaAlphabet& a) {
    NaiveJepd out;
    const auto n = a.property()->size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            std::vector<std::string> hits;
            for (const auto& r : a.relations())
                if (naive_member(r, x, y)) hits.push_back(r.name);
            if (hits.empty()) out.uncovered.push_back({x, y});
            if (hits.size() > 1) out.overlapping.push_back({{x, y}, hits});
        }
    }
    return out;
}

inline bool same_verdict(const JepdReport& rep, const NaiveJepd& naive) {
    if (rep.uncovered != naive.uncovered || rep.overlapping.size() != naive.overlapping.size()) return false;
    for (std::size_t i = 0; i < rep.overlapping.size(); ++i) {
        if (rep.overlapping[i].pair != naive.overlapping[i].first) return false;
        auto a = rep.overlapping[i].relations, b = naive.overlapping[i].second;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Formulas

inline std::string ident(SplitMix64& rng, const std::string& prefix, std::size_t range) {
    return prefix + std::to_string(rng.below(range));
}

inline Formula random_description(SplitMix64& rng, Mode mode, std::size_t max_atoms = 5) {
    std::map<Cell, std::string> cells;
    auto n = pick(rng, mode == Mode::Goal ? 0 : 1, max_atoms);
    for (std::size_t i = 0; i < n; ++i)
        cells[{ident(rng, "e", 4), ident(rng, "p", 4)}] = ident(rng, "v", 6);
    std::vector<Atom> atoms;
    for (const auto& [c, v] : cells) atoms.push_back({c.entity, c.property, v});
    std::reverse(atoms.begin(), atoms.end());
    return make_description(mode, atoms);
}

inline Formula random_log(SplitMix64& rng) {
    std::vector<StepRecord> steps;
    auto n = pick(rng, 0, 4);
    std::int64_t t0 = static_cast<std::int64_t>(rng.below(20));
    for (std::size_t i = 0; i < n; ++i)
        steps.push_back({t0 + static_cast<std::int64_t>(i), random_description(rng, Mode::Present),
                         ident(rng, "a", 5), random_description(rng, Mode::Present)});
    return make_log(steps);
}

inline Formula random_formula(SplitMix64& rng) {
    switch (rng.below(3)) {
        case 0: return random_description(rng, Mode::Present);
        case 1: return random_description(rng, Mode::Goal);
        default: return random_log(rng);
    }
}

// ---------------------------------------------------------------------------
// Lambda terms

inline TypePtr random_type(SplitMix64& rng, int depth) {
    if (depth <= 0 || coin(rng, 45)) {
        static const GroundType gs[] = {GroundType::Iu, GroundType::Iu, GroundType::LP, GroundType::LPStar,
                                        GroundType::CL};
        return ground(gs[rng.below(5)]);
    }
    switch (rng.below(3)) {
        case 0: return arrow(random_type(rng, depth - 1), random_type(rng, depth - 1));
        case 1: return product(random_type(rng, depth - 1), random_type(rng, depth - 1));
        default: return seq_of(random_type(rng, depth - 1));
    }
}

inline TypeContext calculus_constants() {
    return {{"heat", ground(GroundType::Iu)},    {"chill", ground(GroundType::Iu)},
            {"wait", ground(GroundType::Iu)},    {"phi", ground(GroundType::LP)},
            {"goal", ground(GroundType::LPStar)}, {"psi", ground(GroundType::CL)}};
}

// Type-directed generator of closed well-typed terms. Eliminations
// (application, projection) are introduced on purpose so terms have redexes.
class TermGen {
public:
    explicit TermGen(SplitMix64& rng) : rng_(rng), consts_(calculus_constants()) {}

    TermPtr gen(const TypePtr& t, int depth) {
        std::vector<std::pair<std::string, TypePtr>> scope;
        return go(t, depth, scope);
    }

private:
    std::string fresh() {
        static const char* names[] = {"x", "y", "z", "f", "g"};
        return names[rng_.below(5)];  // reuse names on purpose to exercise shadowing
    }

    TermPtr go(const TypePtr& t, int depth, std::vector<std::pair<std::string, TypePtr>>& scope) {
        if (depth > 0 && coin(rng_, 35)) {
            if (coin(rng_)) {
                auto a = random_type(rng_, 1);
                auto fn = go(arrow(a, t), depth - 1, scope);
                return app(fn, go(a, depth - 1, scope));
            }
            auto other = random_type(rng_, 1);
            if (coin(rng_)) return proj(1, go(product(t, other), depth - 1, scope));
            return proj(2, go(product(other, t), depth - 1, scope));
        }
        // Variables in scope, innermost binding wins.
        std::vector<std::string> vars;
        std::set<std::string> shadowed;
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
            if (shadowed.count(it->first)) continue;
            shadowed.insert(it->first);
            if (type_equal(it->second, t)) vars.push_back(it->first);
        }
        if (!vars.empty() && coin(rng_, 60)) return var(vars[rng_.below(vars.size())]);
        return std::visit(
            [&](const auto& node) -> TermPtr {
                using N = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<N, Type::Ground>) {
                    std::vector<std::string> cs;
                    for (const auto& [name, ty] : consts_)
                        if (type_equal(ty, t)) cs.push_back(name);
                    return constant(cs[rng_.below(cs.size())], t);
                } else if constexpr (std::is_same_v<N, Type::Arrow>) {
                    auto x = fresh();
                    scope.push_back({x, node.from});
                    auto body = go(node.to, std::max(depth - 1, 0), scope);
                    scope.pop_back();
                    return lam(x, node.from, body);
                } else if constexpr (std::is_same_v<N, Type::Product>) {
                    auto a = go(node.first, std::max(depth - 1, 0), scope);
                    return pair(a, go(node.second, std::max(depth - 1, 0), scope));
                } else {
                    std::vector<TermPtr> items;
                    auto n = pick(rng_, 1, 3);
                    for (std::size_t i = 0; i < n; ++i) items.push_back(go(node.element, std::max(depth - 1, 0), scope));
                    return seq_lit(items);
                }
            },
            t->node);
    }

    SplitMix64& rng_;
    TypeContext consts_;
};

// Named-term normalizer: capture-avoiding substitution with renaming, and
// leftmost-innermost reduction to a fixpoint.
class NaiveNormalizer {
public:
    TermPtr normalize(TermPtr t) {
        for (;;) {
            bool changed = false;
            t = step(t, changed);
            if (!changed) return t;
            if (++steps_ > 5'000'000) throw Error("oracle step limit");
        }
    }

    static std::set<std::string> free_vars(const TermPtr& t) {
        std::set<std::string> out;
        collect(t, {}, out);
        return out;
    }

private:
    static void collect(const TermPtr& t, std::set<std::string> bound, std::set<std::string>& out) {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, Term::Var>) {
                    if (!bound.count(n.name)) out.insert(n.name);
                } else if constexpr (std::is_same_v<N, Term::Abs>) {
                    bound.insert(n.param);
                    collect(n.body, bound, out);
                } else if constexpr (std::is_same_v<N, Term::App>) {
                    collect(n.fn, bound, out);
                    collect(n.arg, bound, out);
                } else if constexpr (std::is_same_v<N, Term::Pair>) {
                    collect(n.first, bound, out);
                    collect(n.second, bound, out);
                } else if constexpr (std::is_same_v<N, Term::Proj>) {
                    collect(n.of, bound, out);
                } else if constexpr (std::is_same_v<N, Term::SeqLit>) {
                    for (const auto& i : n.items) collect(i, bound, out);
                }
            },
            t->node);
    }

    std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
        for (;;) {
            auto candidate = base + "_" + std::to_string(counter_++);
            if (!avoid.count(candidate)) return candidate;
        }
    }

    // t[x := v]
    TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& v, const std::set<std::string>& fv) {
        return std::visit(
            [&](const auto& n) -> TermPtr {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, Term::Var>) {
                    return n.name == x ? v : t;
                } else if constexpr (std::is_same_v<N, Term::Const>) {
                    return t;
                } else if constexpr (std::is_same_v<N, Term::Abs>) {
                    if (n.param == x) return t;
                    if (fv.count(n.param)) {
                        auto avoid = fv;
                        auto inner = free_vars(n.body);
                        avoid.insert(inner.begin(), inner.end());
                        avoid.insert(x);
                        auto y = fresh_name(n.param, avoid);
                        auto renamed = subst(n.body, n.param, var(y), {y});
                        return lam(y, n.type, subst(renamed, x, v, fv));
                    }
                    return lam(n.param, n.type, subst(n.body, x, v, fv));
                } else if constexpr (std::is_same_v<N, Term::App>) {
                    return app(subst(n.fn, x, v, fv), subst(n.arg, x, v, fv));
                } else if constexpr (std::is_same_v<N, Term::Pair>) {
                    return pair(subst(n.first, x, v, fv), subst(n.second, x, v, fv));
                } else if constexpr (std::is_same_v<N, Term::Proj>) {
                    return proj(n.index, subst(n.of, x, v, fv));
                } else {
                    std::vector<TermPtr> items;
                    for (const auto& i : n.items) items.push_back(subst(i, x, v, fv));
                    return seq_lit(items);
                }
            },
            t->node);
    }

    // One innermost step: reduce inside children first; contract here only
    // when the children are already normal.
    TermPtr step(const TermPtr& t, bool& changed) {
        return std::visit(
            [&](const auto& n) -> TermPtr {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, Term::Var> || std::is_same_v<N, Term::Const>) {
                    return t;
                } else if constexpr (std::is_same_v<N, Term::Abs>) {
                    auto b = step(n.body, changed);
                    return changed ? lam(n.param, n.type, b) : t;
                } else if constexpr (std::is_same_v<N, Term::App>) {
                    auto f = step(n.fn, changed);
                    if (changed) return app(f, n.arg);
                    auto a = step(n.arg, changed);
                    if (changed) return app(n.fn, a);
                    if (auto* abs = std::get_if<Term::Abs>(&n.fn->node)) {
                        changed = true;
                        return subst(abs->body, abs->param, n.arg, free_vars(n.arg));
                    }
                    return t;
                } else if constexpr (std::is_same_v<N, Term::Pair>) {
                    auto a = step(n.first, changed);
                    if (changed) return pair(a, n.second);
                    auto b = step(n.second, changed);
                    return changed ? pair(n.first, b) : t;
                } else if constexpr (std::is_same_v<N, Term::Proj>) {
                    auto o = step(n.of, changed);
                    if (changed) return proj(n.index, o);
                    if (auto* p = std::get_if<Term::Pair>(&n.of->node)) {
                        changed = true;
                        return n.index == 1 ? p->first : p->second;
                    }
                    return t;
                } else {
                    std::vector<TermPtr> items = n.items;
                    for (auto& i : items) {
                        i = step(i, changed);
                        if (changed) return seq_lit(items);
                    }
                    return t;
                }
            },
            t->node);
    }

    std::uint64_t counter_ = 0;
    std::uint64_t steps_ = 0;
};

// ---------------------------------------------------------------------------
// Grid BFS over agent coordinates with fixed obstacles.

inline std::optional<std::size_t> grid_shortest_path(int w, int h, std::pair<int, int> from, std::pair<int, int> to,
                                                     const std::set<std::pair<int, int>>& blocked) {
    std::map<std::pair<int, int>, std::size_t> dist{{from, 0}};
    std::deque<std::pair<int, int>> q{from};
    while (!q.empty()) {
        auto c = q.front();
        q.pop_front();
        if (c == to) return dist[c];
        const int d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& s : d) {
            std::pair<int, int> n{c.first + s[0], c.second + s[1]};
            if (n.first < 0 || n.second < 0 || n.first >= w || n.second >= h || blocked.count(n) || dist.count(n))
                continue;
            dist[n] = dist[c] + 1;
            q.push_back(n);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Static corpus: one entity "s" over up to three ordered properties with
// unit-step actions, true dynamics equal to the declared effects.

struct StaticCase {
    Scenario scenario;
    std::string label;
};

inline std::string static_case_text(const std::vector<std::size_t>& sizes,
                                    const std::vector<std::pair<std::size_t, int>>& actions,
                                    const std::vector<std::size_t>& start,
                                    const std::vector<std::optional<std::size_t>>& goal) {
    std::string out = "scenario static {\n  horizon 60\n  seed 0\n  on_blocked stuck\n}\n\n";
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        out += "property q" + std::to_string(i) + " {";
        for (std::size_t v = 0; v < sizes[i]; ++v) out += (v ? ", " : " ") + std::string("l") + std::to_string(v);
        out += " } cuts {";
        for (std::size_t v = 1; v < sizes[i]; ++v) out += (v > 1 ? ", " : " ") + std::to_string(v);
        out += " }\n";
    }
    out += "grid s {";
    for (std::size_t i = 0; i < sizes.size(); ++i) out += (i ? ", " : " ") + std::string("q") + std::to_string(i);
    out += " }\n\nenvironment shift {\n";
    for (std::size_t k = 0; k < actions.size(); ++k)
        out += "  effect a" + std::to_string(k) + " q" + std::to_string(actions[k].first) + " " +
               std::to_string(actions[k].second) + "\n";
    for (std::size_t i = 0; i < sizes.size(); ++i)
        out += "  clamp q" + std::to_string(i) + " 0.5 " + std::to_string(sizes[i]) + ".5\n";
    out += "}\n\n";
    for (std::size_t i = 0; i < sizes.size(); ++i)
        out += "alphabet D" + std::to_string(i) + " over q" + std::to_string(i) + " { INC: lt; DEC: gt; SAME: eq }\n";
    out += "\n";
    for (std::size_t k = 0; k < actions.size(); ++k)
        out += "action a" + std::to_string(k) + " { q" + std::to_string(actions[k].first) + ": " +
               (actions[k].second > 0 ? "INC +1" : "DEC -1") + " }\n";
    out += "\ninitial {";
    for (std::size_t i = 0; i < sizes.size(); ++i)
        out += " s.q" + std::to_string(i) + " = " + std::to_string(start[i]) + ".5";
    out += " }\ngoal {";
    for (std::size_t i = 0; i < sizes.size(); ++i)
        if (goal[i]) out += " holds(s, q" + std::to_string(i) + ", l" + std::to_string(*goal[i]) + ")";
    out += " }\n";
    return out;
}

// Deterministic enumeration of static cases, sampled from the full product
// of sizes, action sets, starts and goals.
inline std::vector<StaticCase> static_corpus(std::size_t count, std::uint64_t seed = 2024) {
    SplitMix64 rng(seed);
    std::vector<StaticCase> out;
    while (out.size() < count) {
        auto k = pick(rng, 1, 3);
        std::vector<std::size_t> sizes;
        for (std::size_t i = 0; i < k; ++i) sizes.push_back(pick(rng, 2, 6));
        std::vector<std::pair<std::size_t, int>> actions;
        for (std::size_t i = 0; i < k; ++i) {
            if (coin(rng, 85)) actions.push_back({i, +1});
            if (coin(rng, 85)) actions.push_back({i, -1});
        }
        while (actions.size() > 6) actions.pop_back();
        if (actions.empty()) continue;
        // Shuffle so table order varies.
        for (std::size_t i = actions.size(); i > 1; --i) std::swap(actions[i - 1], actions[rng.below(i)]);
        std::vector<std::size_t> start;
        std::vector<std::optional<std::size_t>> goal;
        for (std::size_t i = 0; i < k; ++i) {
            start.push_back(rng.below(sizes[i]));
            if (coin(rng, 80)) goal.push_back(rng.below(sizes[i]));
            else goal.push_back(std::nullopt);
        }
        auto text = static_case_text(sizes, actions, start, goal);
        out.push_back({parse_scenario(text), "case " + std::to_string(out.size())});
    }
    return out;
}

// Runs every check that applies to any trace: selection soundness and the
// tick-to-tick recurrence of generated formulas. Returns violation messages.
inline std::vector<std::string> trace_violations(const AgentState& agent, const std::vector<TickRecord>& trace) {
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& rec = trace[i];
        if (rec.decision) {
            const auto& d = *rec.decision;
            auto alpha = agent.alphabets.find(d.goal.cell.property);
            const Relation* r = alpha == agent.alphabets.end() ? nullptr : alpha->second.find(d.relation);
            if (!r || !naive_member(*r, d.goal.from.rank, d.goal.to.rank))
                bad.push_back("tick " + std::to_string(rec.tick) + ": goal pair outside " + d.relation);
            const auto* am = agent.action(d.chosen);
            if (!am || !am->labels.count(d.goal.cell.property) || am->labels.at(d.goal.cell.property) != d.relation)
                bad.push_back("tick " + std::to_string(rec.tick) + ": " + d.chosen + " not labeled " + d.relation);
        }
        std::string consumed, previous;
        for (const auto& f : rec.consumed) consumed += print(f) + "\n";
        if (i > 0)
            for (const auto& f : trace[i - 1].generated) previous += print(f) + "\n";
        if (consumed != previous) bad.push_back("tick " + std::to_string(rec.tick) + ": recurrence broken");
    }
    return bad;
}

}  // namespace qtest
