#pragma once

// Closed-loop episodes and their line-delimited trace.
//
// Each tick the environment's reality is described as a present formula, the
// agent picks one action, and the environment interprets it. A trace line
// holds one tick; lines parse back into the same record.

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qualisem/decision.hpp"
#include "qualisem/environment.hpp"
#include "qualisem/error.hpp"
#include "qualisem/formula.hpp"
#include "qualisem/world.hpp"

namespace qualisem {

struct Episode {
    enum class Outcome { Reached, HorizonExhausted, Stuck };

    Outcome outcome = Outcome::HorizonExhausted;
    std::int64_t ticks = 0;  // tick of arrival, or ticks elapsed
    std::string error;       // set when stuck
};

inline const char* outcome_name(Episode::Outcome o) {
    switch (o) {
        case Episode::Outcome::Reached: return "reached";
        case Episode::Outcome::HorizonExhausted: return "horizon-exhausted";
        case Episode::Outcome::Stuck: return "stuck";
    }
    return "?";
}

struct TickRecord {
    std::int64_t tick = 0;
    std::vector<Formula> percepts;
    std::optional<Decision> decision;
    Reality reality;
    std::map<Cell, int> distances;  // goal cells only
    std::vector<Formula> generated;
    // In-memory only: the tuple the agent received from the previous tick.
    std::vector<Formula> consumed;
    ActionSequence actions;
};

struct EpisodeResult {
    Episode episode;
    std::vector<TickRecord> trace;
    AgentState agent;
    Reality final_reality;
};

inline std::map<Cell, int> goal_distances(const AgentState& agent, const Reality& now, const Formula& goal) {
    std::map<Cell, int> out;
    for (const auto& a : goal.atoms) {
        auto target = agent.vocab->value(a.property, a.value);
        out[a.cell()] = agent.distances(now.at(a.cell()), target);
    }
    return out;
}

inline EpisodeResult run_episode(const Environment& env, AgentState agent, const Reality& initial,
                                 const Formula& goal, std::int64_t horizon) {
    if (horizon < 1) throw ModelError("horizon must be at least 1");
    EpisodeResult res;
    Reality now = initial;
    for (std::int64_t t = 0;; ++t) {
        auto present = describe_present(now);
        if (t == horizon) {
            agent = agent_observe(std::move(agent), present, t);
            res.episode = {holds_in(goal, now) ? Episode::Outcome::Reached : Episode::Outcome::HorizonExhausted, t,
                           {}};
            break;
        }
        StepOutcome step;
        try {
            step = agent_step(agent, {present, goal}, t);
        } catch (const Error& e) {
            res.episode = {Episode::Outcome::Stuck, t, e.what()};
            break;
        }
        TickRecord rec;
        rec.tick = t;
        rec.percepts = {present, goal};
        rec.decision = step.decision;
        rec.reality = now;
        rec.distances = goal_distances(step.state, now, goal);
        rec.generated = step.generated;
        rec.consumed = std::move(step.consumed);
        rec.actions = step.actions;
        res.trace.push_back(std::move(rec));
        agent = std::move(step.state);

        if (step.status == StepOutcome::Status::Satisfied) {
            res.episode = {Episode::Outcome::Reached, t, {}};
            break;
        }
        try {
            now = interpret(env, now, step.actions.actions.front());
        } catch (const Error& e) {
            res.episode = {Episode::Outcome::Stuck, t, e.what()};
            break;
        }
    }
    res.agent = std::move(agent);
    res.final_reality = std::move(now);
    return res;
}

// ---------------------------------------------------------------------------
// JSONL

using Json = nlohmann::ordered_json;

namespace detail {

inline Cell parse_cell(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size() || s.find('.', dot + 1) != std::string::npos)
        throw SemanticError("malformed cell name '" + s + "'");
    return Cell{s.substr(0, dot), s.substr(dot + 1)};
}

inline Json formulas_json(const std::vector<Formula>& fs) {
    Json out = Json::array();
    for (const auto& f : fs) out.push_back(print(f));
    return out;
}

inline std::vector<Formula> formulas_from(const Json& j, const Vocabulary& vocab) {
    std::vector<Formula> out;
    for (const auto& s : j) out.push_back(parse_formula(s.get<std::string>(), &vocab));
    return out;
}

}  // namespace detail

inline Json to_json(const Decision& d) {
    Json j;
    j["chosen"] = d.chosen;
    j["relation"] = d.relation;
    j["goal"] = {{"cell", d.goal.cell.str()}, {"x", d.goal.from.name()}, {"y", d.goal.to.name()}};
    Json rejected = Json::array();
    for (const auto& r : d.rejected) rejected.push_back({{"action", r.action}, {"reason", r.reason}});
    j["rejected"] = std::move(rejected);
    return j;
}

inline Json to_json(const Reality& r) {
    Json j;
    j["time"] = r.time;
    Json assignments = Json::object();
    for (const auto& [cell, v] : r.assignments) assignments[cell.str()] = v.name();
    j["assignments"] = std::move(assignments);
    if (r.raw) {
        Json raw = Json::object();
        for (const auto& [cell, v] : *r.raw) raw[cell.str()] = v;
        j["raw"] = std::move(raw);
    } else {
        j["raw"] = nullptr;
    }
    if (!r.meta.empty()) {
        Json meta = Json::object();
        for (const auto& [k, v] : r.meta) meta[k] = v;
        j["meta"] = std::move(meta);
    }
    return j;
}

inline Json to_json(const TickRecord& rec) {
    Json j;
    j["tick"] = rec.tick;
    j["percept"] = detail::formulas_json(rec.percepts);
    j["decision"] = rec.decision ? to_json(*rec.decision) : Json(nullptr);
    j["reality"] = to_json(rec.reality);
    Json distances = Json::object();
    for (const auto& [cell, d] : rec.distances) distances[cell.str()] = d;
    j["distances"] = std::move(distances);
    j["generated"] = detail::formulas_json(rec.generated);
    return j;
}

inline std::string trace_line(const TickRecord& rec) { return to_json(rec).dump(); }

inline void write_trace(std::ostream& out, const std::vector<TickRecord>& trace) {
    for (const auto& rec : trace) out << trace_line(rec) << '\n';
}

// Parses one trace line, checking every formula and value against `vocab`.
inline TickRecord parse_tick_record(std::string_view line, const Vocabulary& vocab) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw SemanticError(std::string("trace line is not JSON: ") + e.what());
    }
    try {
        TickRecord rec;
        rec.tick = j.at("tick").get<std::int64_t>();
        rec.percepts = detail::formulas_from(j.at("percept"), vocab);
        const auto& d = j.at("decision");
        if (!d.is_null()) {
            Decision dec;
            dec.chosen = d.at("chosen").get<std::string>();
            dec.relation = d.at("relation").get<std::string>();
            const auto& g = d.at("goal");
            dec.goal.cell = detail::parse_cell(g.at("cell").get<std::string>());
            dec.goal.from = vocab.value(dec.goal.cell.property, g.at("x").get<std::string>());
            dec.goal.to = vocab.value(dec.goal.cell.property, g.at("y").get<std::string>());
            for (const auto& r : d.at("rejected"))
                dec.rejected.push_back({r.at("action").get<std::string>(), r.at("reason").get<std::string>()});
            rec.decision = std::move(dec);
        }
        const auto& r = j.at("reality");
        rec.reality.time = r.at("time").get<std::uint64_t>();
        for (const auto& [k, v] : r.at("assignments").items()) {
            auto cell = detail::parse_cell(k);
            rec.reality.assignments.emplace(cell, vocab.value(cell.property, v.get<std::string>()));
        }
        if (!r.at("raw").is_null()) {
            std::map<Cell, double> raw;
            for (const auto& [k, v] : r.at("raw").items()) raw[detail::parse_cell(k)] = v.get<double>();
            for (const auto& [cell, v] : raw)
                if (!(quantize(vocab.property(cell.property), v) == rec.reality.at(cell)))
                    throw SemanticError("raw magnitude of " + cell.str() + " disagrees with its value");
            rec.reality.raw = std::move(raw);
        }
        if (r.contains("meta"))
            for (const auto& [k, v] : r.at("meta").items()) rec.reality.meta[k] = v.get<std::string>();
        for (const auto& [k, v] : j.at("distances").items()) rec.distances[detail::parse_cell(k)] = v.get<int>();
        rec.generated = detail::formulas_from(j.at("generated"), vocab);
        return rec;
    } catch (const nlohmann::json::exception& e) {
        throw SemanticError(std::string("malformed trace record: ") + e.what());
    }
}

}  // namespace qualisem
