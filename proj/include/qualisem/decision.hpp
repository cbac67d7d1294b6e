#pragma once

// Action selection by qualitative semantics: a goal pair (x, y) falls into
// exactly one relation R of its property's alphabet, and any action labeled
// with R is a candidate to achieve it. The connection table indexes actions
// by (property, relation), as in means-ends analysis.
//
// Also here: the per-tick agent step, the agreement check between an
// action's label and its observed effect, and label repair from the log.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qualisem/calculus.hpp"
#include "qualisem/error.hpp"
#include "qualisem/formula.hpp"
#include "qualisem/world.hpp"

namespace qualisem {

struct ActionModel {
    std::string name;
    std::map<std::string, std::string> labels;  // property -> relation name
    std::map<std::string, int> effects;         // property -> signed rank step
    std::optional<Formula> guard;               // goal-mode description

    bool operator==(const ActionModel&) const = default;
};

// Rank reached from `x` by a signed step, clamped to the value space.
inline std::size_t step_rank(std::size_t x, int step, std::size_t n) {
    auto r = static_cast<std::int64_t>(x) + step;
    if (r < 0) return 0;
    if (r >= static_cast<std::int64_t>(n)) return n - 1;
    return static_cast<std::size_t>(r);
}

// Ranks x with a defined successor x + step whose pair (x, x + step) escapes
// the relation. Empty means the declared effect is contained in the label.
inline std::vector<std::size_t> effect_violations(int step, const Relation& relation, std::size_t n) {
    std::vector<std::size_t> bad;
    for (std::size_t x = 0; x < n; ++x) {
        auto y = static_cast<std::int64_t>(x) + step;
        if (y < 0 || y >= static_cast<std::int64_t>(n)) continue;
        if (!relation.contains(x, static_cast<std::size_t>(y))) bad.push_back(x);
    }
    return bad;
}

class ConnectionTable {
public:
    using Key = std::pair<std::string, std::string>;  // (property, relation)

    // Rows list actions in declaration order.
    static ConnectionTable build(const std::vector<ActionModel>& actions) {
        ConnectionTable t;
        for (const auto& a : actions)
            for (const auto& [prop, rel] : a.labels) t.rows_[{prop, rel}].push_back(a.name);
        return t;
    }

    const std::vector<std::string>& row(const std::string& property, const std::string& relation) const {
        static const std::vector<std::string> empty;
        auto it = rows_.find({property, relation});
        return it == rows_.end() ? empty : it->second;
    }

    const std::map<Key, std::vector<std::string>>& rows() const { return rows_; }
    bool operator==(const ConnectionTable&) const = default;

private:
    std::map<Key, std::vector<std::string>> rows_;
};

struct Rejection {
    std::string action;
    std::string reason;
    bool operator==(const Rejection&) const = default;
};

struct Decision {
    std::string chosen;
    GoalPair goal;
    std::string relation;
    std::vector<Rejection> rejected;
    QualValue predicted;

    friend bool operator==(const Decision&, const Decision&) = default;
};

enum class BlockedPolicy { Stuck, Wait };

struct PendingStep {
    std::int64_t t = 0;
    Formula before;
    std::string action;
    bool operator==(const PendingStep&) const = default;
};

struct AgentState {
    std::shared_ptr<const Vocabulary> vocab;
    std::vector<ActionModel> actions;
    ConnectionTable table;
    std::map<std::string, MetaAlphabet> alphabets;  // by property
    DistanceTable distances;
    std::optional<std::string> noop;
    BlockedPolicy on_blocked = BlockedPolicy::Stuck;

    // Output tuple of the previous tick.
    std::vector<Formula> generated;
    // Completed step records; the current tick's record is closed by the next percept.
    Formula log = make_log({});
    std::optional<PendingStep> pending;

    const ActionModel* action(const std::string& name) const {
        for (const auto& a : actions)
            if (a.name == name) return &a;
        return nullptr;
    }
};

inline AgentState make_agent(std::shared_ptr<const Vocabulary> vocab, std::vector<ActionModel> actions,
                             std::map<std::string, MetaAlphabet> alphabets, DistanceTable distances = {},
                             std::optional<std::string> noop = std::nullopt,
                             BlockedPolicy on_blocked = BlockedPolicy::Stuck) {
    AgentState s;
    s.vocab = std::move(vocab);
    s.table = ConnectionTable::build(actions);
    s.actions = std::move(actions);
    s.alphabets = std::move(alphabets);
    s.distances = std::move(distances);
    s.noop = std::move(noop);
    s.on_blocked = on_blocked;
    return s;
}

// ---------------------------------------------------------------------------
// Selection

namespace detail {

inline Reality present_reality(const AgentState& state, const Formula& current) {
    if (current.mode != Mode::Present) throw MalformedPercepts("current description must be present-mode");
    auto r = reality_of(current, *state.vocab);
    for (const auto& cell : state.vocab->grid())
        if (!r.assignments.count(cell)) throw MalformedPercepts("present description does not cover " + cell.str());
    return r;
}

}  // namespace detail

// Goal pairs, hardest first: descending distance, then property, then entity.
inline std::vector<GoalPair> ordered_goal_pairs(const AgentState& state, const Reality& current,
                                                const Reality& goal) {
    auto diff = reality_diff(current, goal);
    std::stable_sort(diff.begin(), diff.end(), [&](const GoalPair& a, const GoalPair& b) {
        auto da = state.distances(a.from, a.to);
        auto db = state.distances(b.from, b.to);
        if (da != db) return da > db;
        if (a.cell.property != b.cell.property) return a.cell.property < b.cell.property;
        return a.cell.entity < b.cell.entity;
    });
    return diff;
}

inline Decision select_action(const AgentState& state, const Formula& current, const Formula& goal) {
    if (goal.mode != Mode::Goal) throw MalformedPercepts("goal description must be goal-mode");
    auto now = detail::present_reality(state, current);
    auto target = reality_of(goal, *state.vocab);
    auto pairs = ordered_goal_pairs(state, now, target);
    if (pairs.empty()) throw GoalSatisfied();

    std::vector<Rejection> rejected;
    for (const auto& gp : pairs) {
        auto alpha = state.alphabets.find(gp.cell.property);
        if (alpha == state.alphabets.end())
            throw ModelError("no alphabet for goal property '" + gp.cell.property + "'");
        const auto& relation = classify_pair(alpha->second, gp.from, gp.to);
        const auto& row = state.table.row(gp.cell.property, relation.name);
        const auto n = gp.from.property->size();
        const int now_distance = state.distances(gp.from, gp.to);

        const ActionModel* best = nullptr;
        int best_distance = 0;
        QualValue best_prediction;
        for (const auto& name : row) {
            const auto* am = state.action(name);
            if (!am) throw ModelError("connection table lists unknown action '" + name + "'");
            if (am->guard && !holds_in(*am->guard, now)) {
                rejected.push_back({name, "guard " + print(*am->guard) + " does not hold"});
                continue;
            }
            auto eff = am->effects.find(gp.cell.property);
            int step = eff == am->effects.end() ? 0 : eff->second;
            QualValue predicted{gp.from.property, step_rank(gp.from.rank, step, n)};
            int predicted_distance = state.distances(predicted, gp.to);
            if (state.distances(gp.from, predicted) > now_distance) {
                rejected.push_back({name, "overshoots " + gp.to.name()});
                continue;
            }
            if (predicted_distance >= now_distance) {
                rejected.push_back({name, "predicts no progress toward " + gp.to.name()});
                continue;
            }
            // Strict '<' keeps the earlier table entry on ties.
            if (!best || predicted_distance < best_distance) {
                best = am;
                best_distance = predicted_distance;
                best_prediction = predicted;
            }
        }
        if (best) return Decision{best->name, gp, relation.name, std::move(rejected), best_prediction};
    }
    std::ostringstream msg;
    msg << "no applicable action for " << pairs.front().cell.str() << " (" << pairs.front().from.name() << ", "
        << pairs.front().to.name() << ")";
    for (const auto& r : rejected) msg << "; " << r.action << ": " << r.reason;
    throw NoApplicableAction(msg.str());
}

// F_u for one tick written as a lambda term: applied to the present and goal
// descriptions it yields (action sequence, generated formulas), and its first
// projection normalizes to the chosen constant.
inline TermPtr decision_term(const Decision& d) {
    auto iu = ground(GroundType::Iu);
    auto lp = ground(GroundType::LP);
    auto lps = ground(GroundType::LPStar);
    auto cl = ground(GroundType::CL);
    auto fu = lam("phi", lp, lam("goal", lps, pair(seq_lit({constant(d.chosen, iu)}), constant("psi", cl))));
    return proj(1, app(app(fu, constant("phi_t", lp)), constant("goal_t", lps)));
}

// ---------------------------------------------------------------------------
// Agent loop

struct StepOutcome {
    enum class Status { Acted, Satisfied, Waited };

    Status status = Status::Acted;
    // Empty only when the goal holds and no no-op is declared.
    ActionSequence actions;
    std::optional<Decision> decision;
    std::vector<Formula> consumed;
    std::vector<Formula> generated;
    AgentState state;
};

namespace detail {

inline void close_pending(AgentState& state, const Formula& present, std::int64_t tick) {
    if (!state.pending) return;
    if (state.pending->t + 1 != tick)
        throw MalformedPercepts("tick " + std::to_string(tick) + " does not follow tick " +
                                std::to_string(state.pending->t));
    state.log.steps.push_back(
        StepRecord{state.pending->t, std::move(state.pending->before), std::move(state.pending->action), present});
    state.pending.reset();
}

}  // namespace detail

// Closes the open step record with the percept of `tick` without acting.
inline AgentState agent_observe(AgentState state, const Formula& present, std::int64_t tick) {
    detail::present_reality(state, present);
    detail::close_pending(state, present, tick);
    return state;
}

inline StepOutcome agent_step(AgentState state, const std::vector<Formula>& percepts, std::int64_t tick) {
    const Formula* present = nullptr;
    std::vector<Atom> goal_atoms;
    std::size_t goals = 0;
    for (const auto& p : percepts) {
        if (p.mode == Mode::Present) {
            if (present) throw MalformedPercepts("more than one present description");
            present = &p;
        } else if (p.mode == Mode::Goal) {
            ++goals;
            goal_atoms.insert(goal_atoms.end(), p.atoms.begin(), p.atoms.end());
        } else {
            throw MalformedPercepts("log formulas are not percepts");
        }
    }
    if (!present) throw MalformedPercepts("no present description");
    if (goals == 0) throw MalformedPercepts("no goal description");
    Formula goal;
    try {
        goal = make_description(Mode::Goal, std::move(goal_atoms));
    } catch (const SemanticError& e) {
        throw MalformedPercepts(std::string("conflicting goals: ") + e.what());
    }
    detail::present_reality(state, *present);

    StepOutcome out;
    out.consumed = state.generated;
    detail::close_pending(state, *present, tick);

    auto idle = [&](StepOutcome::Status status) {
        out.status = status;
        out.generated = {goal};
        if (state.noop) {
            out.actions.actions = {*state.noop};
            state.pending = PendingStep{tick, *present, *state.noop};
        }
    };

    try {
        auto d = select_action(state, *present, goal);
        out.actions = extract_actions(decision_term(d));
        if (out.actions.size() != 1) throw Error("decision term must normalize to a single action");
        auto prediction = make_description(
            Mode::Goal, {Atom{d.goal.cell.entity, d.goal.cell.property, d.predicted.name()}});
        out.generated = {goal, prediction};
        state.pending = PendingStep{tick, *present, d.chosen};
        out.decision = std::move(d);
        out.status = StepOutcome::Status::Acted;
    } catch (const GoalSatisfied&) {
        idle(StepOutcome::Status::Satisfied);
    } catch (const NoApplicableAction&) {
        if (state.on_blocked != BlockedPolicy::Wait || !state.noop) throw;
        idle(StepOutcome::Status::Waited);
    }
    state.generated = out.generated;
    out.state = std::move(state);
    return out;
}

// ---------------------------------------------------------------------------
// Agreement and learning

struct AgreementReport {
    std::string label;
    double agreement = 0.0;  // share of observed pairs inside the label
    std::string majority;
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    bool disagree = false;
};

namespace detail {

// Relation with the highest count; ties go to the earlier relation in the alphabet.
inline std::string majority_relation(const MetaAlphabet& alphabet, const std::map<std::string, std::size_t>& counts) {
    std::string best;
    std::size_t best_count = 0;
    for (const auto& r : alphabet.relations()) {
        auto it = counts.find(r.name);
        std::size_t c = it == counts.end() ? 0 : it->second;
        if (best.empty() || c > best_count) {
            best = r.name;
            best_count = c;
        }
    }
    return best;
}

}  // namespace detail

inline AgreementReport check_agreement(const ActionModel& action, const MetaAlphabet& alphabet,
                                       const std::vector<std::pair<QualValue, QualValue>>& observed) {
    if (observed.empty()) throw EmptyObservations("no observations for action '" + action.name + "'");
    const auto& prop = alphabet.property()->name();
    auto label = action.labels.find(prop);
    if (label == action.labels.end())
        throw ModelError("action '" + action.name + "' has no label for property '" + prop + "'");
    AgreementReport rep;
    rep.label = label->second;
    rep.total = observed.size();
    for (const auto& [pre, post] : observed) ++rep.counts[classify_pair(alphabet, pre, post).name];
    auto in_label = rep.counts.count(rep.label) ? rep.counts[rep.label] : 0;
    rep.agreement = static_cast<double>(in_label) / static_cast<double>(rep.total);
    rep.majority = detail::majority_relation(alphabet, rep.counts);
    rep.disagree = rep.majority != rep.label;
    return rep;
}

struct LearnConfig {
    std::size_t min_evidence = 3;
    // Minimum majority share, as a fraction.
    std::size_t share_num = 2;
    std::size_t share_den = 3;
};

struct Relabel {
    std::string action;
    std::string property;
    std::string from;
    std::string to;
    int old_effect = 0;
    int new_effect = 0;
    std::size_t support = 0;
    std::size_t majority_count = 0;
};

struct InsufficientEvidence {
    std::string action;
    std::string property;
    std::size_t support = 0;
};

struct LearnResult {
    AgentState state;
    std::vector<Relabel> relabels;
    std::vector<InsufficientEvidence> insufficient;
    std::vector<std::string> notes;
};

using Observation = std::pair<std::size_t, std::size_t>;  // (pre rank, post rank)

// Observed (pre, post) ranks of every cell of `property` across steps that
// executed `action`.
inline std::vector<Observation> gather_observations(const AgentState& state, const Formula& log,
                                                    const std::string& action, const std::string& property) {
    std::vector<Observation> out;
    const auto& p = state.vocab->property(property);
    for (const auto& s : log.steps) {
        if (s.action != action) continue;
        for (const auto& a : s.before.atoms) {
            if (a.property != property) continue;
            auto post = lookup(s.after, a.cell());
            if (!post) continue;
            auto x = p->rank(a.value);
            auto y = p->rank(*post);
            if (!x || !y) throw SemanticError("log value outside the value space of '" + property + "'");
            out.push_back({*x, *y});
        }
    }
    return out;
}

// Relabels actions whose observed effect contradicts their label, given enough
// evidence and a clear majority. The input state is left untouched.
inline LearnResult learn(const AgentState& state, const Formula& log, const LearnConfig& cfg = {}) {
    if (log.mode != Mode::Log) throw SemanticError("learning needs a log formula");
    LearnResult res;
    res.state = state;
    for (auto& am : res.state.actions) {
        for (auto& [prop, label] : am.labels) {
            auto alpha_it = state.alphabets.find(prop);
            if (alpha_it == state.alphabets.end()) continue;
            const auto& alphabet = alpha_it->second;
            const auto n = alphabet.property()->size();
            auto obs = gather_observations(state, log, am.name, prop);
            if (obs.size() < cfg.min_evidence) {
                res.insufficient.push_back({am.name, prop, obs.size()});
                continue;
            }
            std::map<std::string, std::size_t> counts;
            std::map<std::string, std::map<int, std::size_t>> deltas;
            for (const auto& [x, y] : obs) {
                auto rel = classify_pair(alphabet, QualValue{alphabet.property(), x}, QualValue{alphabet.property(), y})
                               .name;
                ++counts[rel];
                ++deltas[rel][static_cast<int>(y) - static_cast<int>(x)];
            }
            auto majority = detail::majority_relation(alphabet, counts);
            auto mcount = counts[majority];
            if (majority == label || mcount * cfg.share_den < obs.size() * cfg.share_num) continue;

            // Most frequent observed step that keeps the effect inside the new label.
            std::vector<std::pair<int, std::size_t>> steps(deltas[majority].begin(), deltas[majority].end());
            std::sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                if (std::abs(a.first) != std::abs(b.first)) return std::abs(a.first) < std::abs(b.first);
                return a.first > b.first;
            });
            const auto& relation = *alphabet.find(majority);
            std::optional<int> chosen;
            for (const auto& [d, c] : steps) {
                if (effect_violations(d, relation, n).empty()) {
                    chosen = d;
                    break;
                }
            }
            if (!chosen) {
                res.notes.push_back("action '" + am.name + "' on '" + prop + "': no observed step lies inside '" +
                                    majority + "'; label kept");
                continue;
            }
            int old_effect = am.effects.count(prop) ? am.effects[prop] : 0;
            res.relabels.push_back({am.name, prop, label, majority, old_effect, *chosen, obs.size(), mcount});
            label = majority;
            am.effects[prop] = *chosen;
        }
    }
    res.state.table = ConnectionTable::build(res.state.actions);
    return res;
}

}  // namespace qualisem
