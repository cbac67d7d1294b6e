#pragma once

// Scenario documents: a sectioned text format that embeds the formula syntax.
//
//   scenario thermostat { horizon 10 seed 0 noop wait on_blocked stuck }
//   property temp { cold, cool, warm, hot } cuts { 10, 20, 30 } unit celsius
//   grid room { temp }
//   environment shift { effect heat temp 12 clamp temp 0 40 }
//   alphabet D_temp over temp { INC: lt; DEC: gt; SAME: eq }
//   distance temp { 0, 1, 2, 3; 1, 0, 1, 2; 2, 1, 0, 1; 3, 2, 1, 0 }
//   action heat { temp: INC +1 } when goal { holds(room, temp, cold) }
//   initial { room.temp = 5 }
//   goal { holds(room, temp, warm) }
//   meta { epsilon open }
//
// Names are declared before use. A nav environment supplies its own
// properties and grid, so those are neither declared nor printed.

#include <charconv>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qualisem/decision.hpp"
#include "qualisem/environment.hpp"
#include "qualisem/error.hpp"
#include "qualisem/formula.hpp"
#include "qualisem/lexer.hpp"
#include "qualisem/world.hpp"

namespace qualisem {

enum class EnvKind { Shift, Nav };

struct Scenario {
    std::string name;
    std::int64_t horizon = 10;
    std::uint64_t seed = 0;
    std::optional<std::string> noop;
    BlockedPolicy on_blocked = BlockedPolicy::Stuck;

    std::vector<PropertyPtr> properties;                     // declared in the document
    std::map<std::string, std::vector<std::string>> grids;  // entity -> declared properties
    EnvKind env = EnvKind::Shift;
    ShiftConfig shift;
    NavConfig nav;
    std::vector<MetaAlphabet> alphabets;
    std::map<std::string, DistanceTable::Matrix> distances;
    std::vector<ActionModel> actions;
    std::map<Cell, double> initial;
    Formula goal = make_description(Mode::Goal, {});
    std::map<std::string, std::string> meta;

    std::shared_ptr<const Vocabulary> vocab;

    std::vector<std::string> action_names() const {
        std::vector<std::string> out;
        for (const auto& a : actions) out.push_back(a.name);
        return out;
    }
    const MetaAlphabet* alphabet_for(const std::string& property) const {
        for (const auto& a : alphabets)
            if (a.property()->name() == property) return &a;
        return nullptr;
    }
};

// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw Error("cannot format number");
    return std::string(buf, p);
}

namespace detail {

class ScenarioParser {
public:
    explicit ScenarioParser(std::string_view text) : ts_(text) {}

    Scenario parse() {
        header();
        while (!ts_.at_end()) {
            auto kw = ts_.peek().text;
            if (kw == "property") property();
            else if (kw == "grid") grid();
            else if (kw == "environment") environment();
            else if (kw == "alphabet") alphabet();
            else if (kw == "distance") distance();
            else if (kw == "action") action();
            else if (kw == "initial") initial();
            else if (kw == "goal") goal();
            else if (kw == "meta") meta();
            else
                ts_.fail({"'property'", "'grid'", "'environment'", "'alphabet'", "'distance'", "'action'",
                          "'initial'", "'goal'", "'meta'"});
        }
        if (!seen_.count("goal")) throw SemanticError("scenario has no goal section");
        if (!seen_.count("initial")) throw SemanticError("scenario has no initial section");
        if (!seen_.count("environment")) throw SemanticError("scenario has no environment section");
        if (s_.noop && !find_action(*s_.noop)) throw SemanticError("no-op '" + *s_.noop + "' is not a declared action");
        if (s_.env == EnvKind::Shift) {
            for (const auto& [a, _] : s_.shift.effects)
                if (!find_action(a)) throw SemanticError("environment effect for undeclared action '" + a + "'");
        }
        s_.vocab = std::make_shared<const Vocabulary>(vocab_);
        return std::move(s_);
    }

private:
    static std::string at(SourcePos p) { return std::to_string(p.line) + ":" + std::to_string(p.column) + ": "; }
    [[noreturn]] static void semantic(SourcePos p, const std::string& msg) { throw SemanticError(at(p) + msg); }

    void once(const std::string& section, SourcePos p) {
        if (!seen_.insert(section).second) semantic(p, "duplicate " + section + " section");
    }

    const ActionModel* find_action(const std::string& name) const {
        for (const auto& a : s_.actions)
            if (a.name == name) return &a;
        return nullptr;
    }

    std::string property_ref() {
        auto pos = ts_.peek().pos;
        auto name = ts_.expect_ident("property name");
        if (!vocab_.has_property(name)) semantic(pos, "unknown property '" + name + "'");
        return name;
    }

    void header() {
        ts_.expect("scenario");
        s_.name = ts_.expect_ident("scenario name");
        while (ts_.accept("-")) s_.name += "-" + ts_.expect_ident("scenario name");
        ts_.expect("{");
        std::set<std::string> keys;
        while (!ts_.accept("}")) {
            auto pos = ts_.peek().pos;
            auto key = ts_.expect_keyword({"horizon", "seed", "noop", "on_blocked"});
            if (!keys.insert(key).second) semantic(pos, "duplicate setting '" + key + "'");
            if (key == "horizon") {
                s_.horizon = ts_.expect_integer();
                if (s_.horizon < 1) semantic(pos, "horizon must be at least 1");
            } else if (key == "seed") {
                auto v = ts_.expect_integer();
                if (v < 0) semantic(pos, "seed must be non-negative");
                s_.seed = static_cast<std::uint64_t>(v);
            } else if (key == "noop") {
                s_.noop = ts_.expect_ident("action name");
            } else {
                s_.on_blocked = ts_.expect_keyword({"stuck", "wait"}) == "wait" ? BlockedPolicy::Wait
                                                                                : BlockedPolicy::Stuck;
            }
        }
    }

    void property() {
        ts_.expect("property");
        auto pos = ts_.peek().pos;
        auto name = ts_.expect_ident("property name");
        ts_.expect("{");
        std::vector<std::string> values;
        do {
            values.push_back(ts_.expect_ident("value"));
        } while (ts_.accept(","));
        ts_.expect("}");
        ts_.expect("cuts");
        ts_.expect("{");
        std::vector<double> cuts;
        if (!ts_.is("}")) {
            do {
                cuts.push_back(ts_.expect_number());
            } while (ts_.accept(","));
        }
        ts_.expect("}");
        std::string unit;
        if (ts_.accept("unit")) unit = ts_.expect_ident("unit");
        if (vocab_.has_property(name)) semantic(pos, "duplicate property '" + name + "'");
        try {
            auto p = std::make_shared<const Property>(name, std::move(values), std::move(cuts), unit);
            vocab_.add_property(p);
            s_.properties.push_back(std::move(p));
        } catch (const ModelError& e) {
            semantic(pos, e.what());
        }
    }

    void grid() {
        ts_.expect("grid");
        auto entity = ts_.expect_ident("entity");
        ts_.expect("{");
        do {
            auto p = property_ref();
            vocab_.add_cell({entity, p});
            auto& props = s_.grids[entity];
            if (std::find(props.begin(), props.end(), p) == props.end()) {
                props.push_back(p);
                std::sort(props.begin(), props.end());
            }
        } while (ts_.accept(","));
        ts_.expect("}");
    }

    void environment() {
        auto pos = ts_.peek().pos;
        ts_.expect("environment");
        once("environment", pos);
        auto kind = ts_.expect_keyword({"shift", "nav"});
        ts_.expect("{");
        if (kind == "shift") {
            s_.env = EnvKind::Shift;
            while (!ts_.accept("}")) {
                auto kpos = ts_.peek().pos;
                auto key = ts_.expect_keyword({"effect", "clamp"});
                if (key == "effect") {
                    auto action = ts_.expect_ident("action name");
                    auto prop = property_ref();
                    auto d = ts_.expect_number();
                    if (!s_.shift.effects[action].emplace(prop, d).second)
                        semantic(kpos, "duplicate effect of '" + action + "' on '" + prop + "'");
                } else {
                    auto prop = property_ref();
                    auto lo = ts_.expect_number();
                    auto hi = ts_.expect_number();
                    if (!(lo <= hi)) semantic(kpos, "empty clamp range");
                    if (!s_.shift.clamp.emplace(prop, std::make_pair(lo, hi)).second)
                        semantic(kpos, "duplicate clamp for '" + prop + "'");
                }
            }
            return;
        }
        s_.env = EnvKind::Nav;
        auto& n = s_.nav;
        while (!ts_.accept("}")) {
            auto kpos = ts_.peek().pos;
            auto key = ts_.expect_keyword({"size", "agent", "obstacle", "random_obstacles", "move_period"});
            if (key == "size") {
                n.width = static_cast<int>(ts_.expect_integer());
                n.height = static_cast<int>(ts_.expect_integer());
                if (n.width < 1 || n.height < 1 || n.width > 1000 || n.height > 1000)
                    semantic(kpos, "grid size out of range");
            } else if (key == "agent") {
                n.agent = ts_.expect_ident("entity");
            } else if (key == "obstacle") {
                int x = static_cast<int>(ts_.expect_integer());
                int y = static_cast<int>(ts_.expect_integer());
                n.obstacles.push_back({x, y});
            } else if (key == "random_obstacles") {
                auto v = ts_.expect_integer();
                if (v < 0) semantic(kpos, "obstacle count must be non-negative");
                n.random_obstacles = static_cast<int>(v);
            } else {
                auto v = ts_.expect_integer();
                if (v < 0) semantic(kpos, "move period must be non-negative");
                n.move_period = static_cast<int>(v);
            }
        }
        for (const auto& [x, y] : n.obstacles)
            if (x < 0 || y < 0 || x >= n.width || y >= n.height) semantic(pos, "obstacle outside the grid");
        try {
            nav::declare(vocab_, n);
        } catch (const ModelError& e) {
            semantic(pos, e.what());
        }
    }

    void alphabet() {
        auto pos = ts_.peek().pos;
        FormulaParser fp(ts_, &vocab_, ParseOptions{false});
        auto a = fp.alphabet();
        for (const auto& other : s_.alphabets) {
            if (other.property()->name() == a.property()->name())
                semantic(pos, "property '" + a.property()->name() + "' already has an alphabet");
            if (other.name() == a.name()) semantic(pos, "duplicate alphabet '" + a.name() + "'");
        }
        s_.alphabets.push_back(std::move(a));
    }

    void distance() {
        auto pos = ts_.peek().pos;
        ts_.expect("distance");
        auto prop = property_ref();
        ts_.expect("{");
        DistanceTable::Matrix m(1);
        while (!ts_.accept("}")) {
            if (ts_.accept(";")) {
                m.emplace_back();
                continue;
            }
            if (!m.back().empty()) ts_.expect(",");
            auto v = ts_.expect_integer();
            m.back().push_back(static_cast<int>(v));
        }
        try {
            DistanceTable probe;
            probe.set_custom(*vocab_.property(prop), m);
        } catch (const ModelError& e) {
            semantic(pos, e.what());
        }
        if (!s_.distances.emplace(prop, std::move(m)).second) semantic(pos, "duplicate distance table");
    }

    void action() {
        ts_.expect("action");
        auto pos = ts_.peek().pos;
        ActionModel a;
        a.name = ts_.expect_ident("action name");
        if (find_action(a.name)) semantic(pos, "duplicate action '" + a.name + "'");
        ts_.expect("{");
        if (!ts_.is("}")) {
            do {
                auto ppos = ts_.peek().pos;
                auto prop = property_ref();
                ts_.expect(":");
                auto rel = ts_.expect_ident("relation name");
                auto step = ts_.expect_integer();
                if (!a.labels.emplace(prop, rel).second) semantic(ppos, "duplicate label for '" + prop + "'");
                a.effects[prop] = static_cast<int>(step);
            } while (ts_.accept(","));
        }
        ts_.expect("}");
        if (ts_.accept("when")) {
            FormulaParser fp(ts_, &vocab_, {});
            a.guard = fp.description(Mode::Goal);
        }
        s_.actions.push_back(std::move(a));
    }

    void initial() {
        auto pos = ts_.peek().pos;
        ts_.expect("initial");
        once("initial", pos);
        ts_.expect("{");
        while (!ts_.accept("}")) {
            auto cpos = ts_.peek().pos;
            Cell c;
            c.entity = ts_.expect_ident("entity");
            ts_.expect(".");
            c.property = ts_.expect_ident("property");
            ts_.expect("=");
            auto v = ts_.expect_number();
            if (!vocab_.in_grid(c)) semantic(cpos, "cell " + c.str() + " is not in the grid");
            if (!s_.initial.emplace(c, v).second) semantic(cpos, "duplicate initial value for " + c.str());
            ts_.accept(",");
        }
    }

    void goal() {
        auto pos = ts_.peek().pos;
        once("goal", pos);
        FormulaParser fp(ts_, &vocab_, {});
        s_.goal = fp.description(Mode::Goal);
    }

    void meta() {
        auto pos = ts_.peek().pos;
        ts_.expect("meta");
        once("meta", pos);
        ts_.expect("{");
        while (!ts_.accept("}")) {
            auto key = ts_.expect_ident("key");
            const auto& t = ts_.peek();
            if (t.kind != Token::Kind::Ident && t.kind != Token::Kind::Number) ts_.fail({"identifier", "number"});
            s_.meta[key] = ts_.next().text;
        }
    }

    TokenStream ts_;
    Scenario s_;
    Vocabulary vocab_;
    std::set<std::string> seen_;
};

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) { return detail::ScenarioParser(text).parse(); }

inline std::string print(const Scenario& s) {
    std::ostringstream out;
    out << "scenario " << s.name << " {\n";
    out << "  horizon " << s.horizon << "\n";
    out << "  seed " << s.seed << "\n";
    if (s.noop) out << "  noop " << *s.noop << "\n";
    out << "  on_blocked " << (s.on_blocked == BlockedPolicy::Wait ? "wait" : "stuck") << "\n";
    out << "}\n";

    if (!s.properties.empty()) out << "\n";
    for (const auto& p : s.properties) {
        out << "property " << p->name() << " { ";
        for (std::size_t i = 0; i < p->size(); ++i) out << (i ? ", " : "") << p->values()[i];
        out << " } cuts {";
        for (std::size_t i = 0; i < p->thresholds().size(); ++i)
            out << (i ? ", " : " ") << format_number(p->thresholds()[i]);
        out << " }";
        if (!p->unit().empty()) out << " unit " << p->unit();
        out << "\n";
    }
    for (const auto& [entity, props] : s.grids) {
        out << "grid " << entity << " { ";
        for (std::size_t i = 0; i < props.size(); ++i) out << (i ? ", " : "") << props[i];
        out << " }\n";
    }

    out << "\n";
    if (s.env == EnvKind::Shift) {
        out << "environment shift {\n";
        for (const auto& [a, per] : s.shift.effects)
            for (const auto& [p, d] : per) out << "  effect " << a << " " << p << " " << format_number(d) << "\n";
        for (const auto& [p, r] : s.shift.clamp)
            out << "  clamp " << p << " " << format_number(r.first) << " " << format_number(r.second) << "\n";
        out << "}\n";
    } else {
        const auto& n = s.nav;
        out << "environment nav {\n";
        out << "  size " << n.width << " " << n.height << "\n";
        out << "  agent " << n.agent << "\n";
        for (const auto& [x, y] : n.obstacles) out << "  obstacle " << x << " " << y << "\n";
        if (n.random_obstacles) out << "  random_obstacles " << n.random_obstacles << "\n";
        if (n.move_period) out << "  move_period " << n.move_period << "\n";
        out << "}\n";
    }

    out << "\n";
    for (const auto& a : s.alphabets) out << print(a) << "\n";
    for (const auto& [p, m] : s.distances) {
        out << "distance " << p << " {";
        for (std::size_t i = 0; i < m.size(); ++i) {
            out << (i ? "; " : " ");
            for (std::size_t j = 0; j < m[i].size(); ++j) out << (j ? ", " : "") << m[i][j];
        }
        out << " }\n";
    }

    out << "\n";
    for (const auto& a : s.actions) {
        out << "action " << a.name << " {";
        bool first = true;
        for (const auto& [p, rel] : a.labels) {
            auto it = a.effects.find(p);
            int step = it == a.effects.end() ? 0 : it->second;
            out << (first ? " " : ", ") << p << ": " << rel << " " << (step >= 0 ? "+" : "") << step;
            first = false;
        }
        out << " }";
        if (a.guard) out << " when " << print(*a.guard);
        out << "\n";
    }

    out << "\ninitial {";
    for (const auto& [c, v] : s.initial) out << " " << c.str() << " = " << format_number(v);
    out << " }\n";
    out << print(s.goal) << "\n";
    if (!s.meta.empty()) {
        out << "meta {";
        for (const auto& [k, v] : s.meta) out << " " << k << " " << v;
        out << " }\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
    struct Check {
        std::string subject;
        bool ok = true;
        std::string detail;
    };
    std::vector<Check> checks;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }

    std::string str() const {
        std::ostringstream out;
        for (const auto& c : checks) {
            out << (c.ok ? "ok    " : "FAIL  ") << c.subject;
            if (!c.detail.empty()) out << ": " << c.detail;
            out << "\n";
        }
        return out.str();
    }
};

inline ValidationReport validate(const Scenario& s) {
    ValidationReport rep;
    for (const auto& a : s.alphabets) {
        auto jepd = validate_jepd(a);
        rep.checks.push_back({"alphabet " + a.name() + " over " + a.property()->name() + " is JEPD", jepd.ok(),
                              jepd.ok() ? "" : describe(jepd, a)});
    }
    for (const auto& act : s.actions) {
        for (const auto& [prop, rel] : act.labels) {
            std::string subject = "action " + act.name + " on " + prop + " labeled " + rel;
            const auto* alpha = s.alphabet_for(prop);
            if (!alpha) {
                rep.checks.push_back({subject, false, "property has no alphabet"});
                continue;
            }
            const auto* relation = alpha->find(rel);
            if (!relation) {
                rep.checks.push_back({subject, false, "alphabet " + alpha->name() + " has no relation " + rel});
                continue;
            }
            int step = act.effects.count(prop) ? act.effects.at(prop) : 0;
            auto bad = effect_violations(step, *relation, alpha->property()->size());
            std::string detail;
            for (auto x : bad) {
                const auto& vals = alpha->property()->values();
                detail += (detail.empty() ? "step escapes the label at " : ", ") + std::string("(") + vals[x] + ", " +
                          vals[static_cast<std::size_t>(static_cast<std::int64_t>(x) + step)] + ")";
            }
            rep.checks.push_back({subject + " agrees with its declared effect", bad.empty(), detail});
        }
    }
    std::set<std::string> goal_props;
    for (const auto& a : s.goal.atoms) goal_props.insert(a.property);
    for (const auto& p : goal_props)
        rep.checks.push_back({"goal property " + p + " has an alphabet", s.alphabet_for(p) != nullptr, ""});
    if (s.env == EnvKind::Shift) {
        std::set<Cell> missing;
        for (const auto& c : s.vocab->grid())
            if (!s.initial.count(c)) missing.insert(c);
        std::string detail;
        for (const auto& c : missing) detail += (detail.empty() ? "missing " : ", ") + c.str();
        rep.checks.push_back({"initial state covers the grid", missing.empty(), detail});
    } else {
        bool placed = s.initial.count({s.nav.agent, nav::kX}) && s.initial.count({s.nav.agent, nav::kY});
        rep.checks.push_back({"initial state places the agent", placed, ""});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Instantiation

struct World {
    std::shared_ptr<const Environment> env;
    AgentState agent;
    Reality initial;
    Formula goal;
    std::int64_t horizon = 1;
};

inline DistanceTable distance_table(const Scenario& s) {
    DistanceTable t;
    for (const auto& [p, m] : s.distances) t.set_custom(*s.vocab->property(p), m);
    return t;
}

inline AgentState scenario_agent(const Scenario& s) {
    std::map<std::string, MetaAlphabet> alphabets;
    for (const auto& a : s.alphabets) alphabets.emplace(a.property()->name(), a);
    return make_agent(s.vocab, s.actions, std::move(alphabets), distance_table(s), s.noop, s.on_blocked);
}

inline std::shared_ptr<const Environment> scenario_environment(const Scenario& s, std::uint64_t seed) {
    if (s.env == EnvKind::Shift) return std::make_shared<const ShiftWorld>(s.vocab, s.action_names(), s.shift, seed);
    NavConfig cfg = s.nav;
    auto gx = lookup(s.goal, {cfg.agent, nav::kX});
    auto gy = lookup(s.goal, {cfg.agent, nav::kY});
    if (gx && gy)
        cfg.keep_clear.push_back({static_cast<int>(*s.vocab->property(nav::kX)->rank(*gx)),
                                  static_cast<int>(*s.vocab->property(nav::kY)->rank(*gy))});
    return std::make_shared<const NavWorld>(s.vocab, s.action_names(), std::move(cfg), seed);
}

inline World instantiate(const Scenario& s, std::optional<std::uint64_t> seed = std::nullopt,
                         std::optional<std::int64_t> horizon = std::nullopt) {
    World w;
    auto used_seed = seed.value_or(s.seed);
    w.env = scenario_environment(s, used_seed);
    w.agent = scenario_agent(s);
    RawState raw = s.initial;
    if (const auto* nw = dynamic_cast<const NavWorld*>(w.env.get())) raw = nw->initial_raw(s.initial);
    w.initial = w.env->reality(0, std::move(raw));
    w.initial.meta = s.meta;
    w.goal = s.goal;
    w.horizon = horizon.value_or(s.horizon);
    return w;
}

// The scenario with the repaired action models from `learned`.
inline Scenario with_actions(Scenario s, const std::vector<ActionModel>& learned) {
    s.actions = learned;
    return s;
}

// ---------------------------------------------------------------------------
// Built-in scenarios

inline const std::map<std::string, std::string>& builtin_scenarios() {
    static const std::map<std::string, std::string> table = {
        {"thermostat", R"(scenario thermostat {
  horizon 10
  seed 0
  on_blocked stuck
}

property temp { cold, cool, warm, hot } cuts { 10, 20, 30 } unit celsius
grid room { temp }

environment shift {
  effect chill temp -12
  effect heat temp 12
  clamp temp 0 40
}

alphabet D_temp over temp { INC: lt; DEC: gt; SAME: eq }

action heat { temp: INC +1 }
action chill { temp: DEC -1 }

initial { room.temp = 5 }
goal { holds(room, temp, warm) }
)"},
        {"thermostat-inverted", R"(scenario thermostat-inverted {
  horizon 10
  seed 0
  on_blocked stuck
}

property temp { cold, cool, warm, hot } cuts { 10, 20, 30 } unit celsius
grid room { temp }

environment shift {
  effect chill temp 12
  effect heat temp -12
  clamp temp 0 40
}

alphabet D_temp over temp { INC: lt; DEC: gt; SAME: eq }

action heat { temp: INC +1 }
action chill { temp: DEC -1 }

initial { room.temp = 5 }
goal { holds(room, temp, warm) }
)"},
        {"nav-static", R"(scenario nav-static {
  horizon 100
  seed 0
  on_blocked stuck
}

environment nav {
  size 20 20
  agent agent
  obstacle 5 10
  obstacle 10 5
  obstacle 15 3
  obstacle 3 15
  obstacle 12 16
  obstacle 17 8
  obstacle 8 17
  obstacle 9 12
}

alphabet D_x over x { INC: lt; DEC: gt; SAME: eq }
alphabet D_y over y { INC: lt; DEC: gt; SAME: eq }

action east { x: INC +1 } when goal { holds(agent, east_cell, free) }
action west { x: DEC -1 } when goal { holds(agent, west_cell, free) }
action north { y: INC +1 } when goal { holds(agent, north_cell, free) }
action south { y: DEC -1 } when goal { holds(agent, south_cell, free) }

initial { agent.x = 1 agent.y = 1 }
goal { holds(agent, x, x18) holds(agent, y, y18) }
)"},
        {"nav-dynamic", R"(scenario nav-dynamic {
  horizon 400
  seed 7
  noop wait
  on_blocked wait
}

environment nav {
  size 20 20
  agent agent
  random_obstacles 30
  move_period 2
}

alphabet D_x over x { INC: lt; DEC: gt; SAME: eq }
alphabet D_y over y { INC: lt; DEC: gt; SAME: eq }

action east { x: INC +1 } when goal { holds(agent, east_cell, free) }
action west { x: DEC -1 } when goal { holds(agent, west_cell, free) }
action north { y: INC +1 } when goal { holds(agent, north_cell, free) }
action south { y: DEC -1 } when goal { holds(agent, south_cell, free) }
action wait { }

initial { agent.x = 1 agent.y = 1 }
goal { holds(agent, x, x18) holds(agent, y, y18) }
)"},
    };
    return table;
}

inline Scenario builtin_scenario(const std::string& name) {
    auto it = builtin_scenarios().find(name);
    if (it == builtin_scenarios().end()) throw ModelError("no built-in scenario named '" + name + "'");
    return parse_scenario(it->second);
}

}  // namespace qualisem
