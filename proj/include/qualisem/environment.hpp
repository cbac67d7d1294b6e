#pragma once

// Simulated environments. An environment is the interpretation of action
// constants: it applies the true dynamics of an action to the raw magnitudes
// of a reality, lets exogenous change happen, and re-quantizes. The agent
// only ever sees the quantized result.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qualisem/error.hpp"
#include "qualisem/formula.hpp"
#include "qualisem/rng.hpp"
#include "qualisem/world.hpp"

namespace qualisem {

using RawState = std::map<Cell, double>;

class Environment {
public:
    Environment(std::shared_ptr<const Vocabulary> vocab, std::vector<std::string> actions, std::uint64_t seed)
        : vocab_(std::move(vocab)), actions_(std::move(actions)), seed_(seed) {}
    virtual ~Environment() = default;

    virtual std::string kind() const = 0;
    // No exogenous change: the next state depends only on state and action.
    virtual bool is_static() const = 0;

    const Vocabulary& vocab() const { return *vocab_; }
    const std::shared_ptr<const Vocabulary>& vocab_ptr() const { return vocab_; }
    const std::vector<std::string>& actions() const { return actions_; }
    std::uint64_t seed() const { return seed_; }

    bool has_action(const std::string& a) const {
        return std::find(actions_.begin(), actions_.end(), a) != actions_.end();
    }

    // True effect of `action`; actions without dynamics leave the state alone.
    virtual RawState apply(const RawState& raw, const std::string& action) const = 0;
    // Exogenous change between tick `time` and `time + 1`.
    virtual RawState drift(RawState raw, std::uint64_t /*time*/) const { return raw; }
    // Recomputes derived cells, e.g. sensors.
    virtual void derive(RawState& /*raw*/) const {}

    Reality reality(std::uint64_t time, RawState raw) const {
        derive(raw);
        return quantize_reality(*vocab_, time, std::move(raw));
    }

private:
    std::shared_ptr<const Vocabulary> vocab_;
    std::vector<std::string> actions_;
    std::uint64_t seed_;
};

using EnvironmentPtr = std::shared_ptr<const Environment>;

inline Reality interpret(const Environment& env, const Reality& reality, const std::string& action) {
    if (!env.has_action(action)) throw UnknownAction("environment has no dynamics for '" + action + "'");
    if (!reality.raw) throw ModelError("interpretation needs raw magnitudes");
    auto raw = env.apply(*reality.raw, action);
    raw = env.drift(std::move(raw), reality.time);
    auto next = env.reality(reality.time + 1, std::move(raw));
    next.meta = reality.meta;
    return next;
}

// ---------------------------------------------------------------------------
// Shift world: each action adds a fixed raw delta to every cell of some
// properties, optionally clamped. Thermostats are shift worlds.

struct ShiftConfig {
    // action -> property -> raw delta
    std::map<std::string, std::map<std::string, double>> effects;
    std::map<std::string, std::pair<double, double>> clamp;
};

class ShiftWorld final : public Environment {
public:
    ShiftWorld(std::shared_ptr<const Vocabulary> vocab, std::vector<std::string> actions, ShiftConfig cfg,
               std::uint64_t seed = 0)
        : Environment(std::move(vocab), std::move(actions), seed), cfg_(std::move(cfg)) {
        for (const auto& [a, per_prop] : cfg_.effects) {
            if (!has_action(a)) throw ModelError("effect given for undeclared action '" + a + "'");
            for (const auto& [p, d] : per_prop) {
                if (!this->vocab().has_property(p)) throw ModelError("effect on unknown property '" + p + "'");
                if (!std::isfinite(d)) throw ModelError("non-finite effect for '" + a + "'");
            }
        }
        for (const auto& [p, range] : cfg_.clamp)
            if (!(range.first <= range.second)) throw ModelError("empty clamp range for '" + p + "'");
    }

    std::string kind() const override { return "shift"; }
    bool is_static() const override { return true; }
    const ShiftConfig& config() const { return cfg_; }

    RawState apply(const RawState& raw, const std::string& action) const override {
        RawState out = raw;
        auto it = cfg_.effects.find(action);
        if (it == cfg_.effects.end()) return out;
        for (auto& [cell, v] : out) {
            auto d = it->second.find(cell.property);
            if (d == it->second.end()) continue;
            v += d->second;
            auto c = cfg_.clamp.find(cell.property);
            if (c != cfg_.clamp.end()) v = std::clamp(v, c->second.first, c->second.second);
        }
        return out;
    }

private:
    ShiftConfig cfg_;
};

// ---------------------------------------------------------------------------
// Grid navigation: an agent moves one cell per tick in a width x height open
// space. Obstacles are entities with their own coordinates; with a move period
// k > 0 they take a seeded random step every k ticks. The agent perceives
// only whether each neighbouring cell is free.

struct NavConfig {
    int width = 20;
    int height = 20;
    std::string agent = "agent";
    std::vector<std::pair<int, int>> obstacles;  // fixed initial positions
    int random_obstacles = 0;
    int move_period = 0;                          // 0 = static obstacles
    std::vector<std::pair<int, int>> keep_clear;  // never seeded with an obstacle
};

namespace nav {

inline constexpr const char* kX = "x";
inline constexpr const char* kY = "y";
inline constexpr const char* kObstacleX = "ox";
inline constexpr const char* kObstacleY = "oy";

struct Direction {
    const char* action;
    const char* sensor;
    int dx, dy;
};

inline constexpr Direction kDirections[] = {
    {"east", "east_cell", 1, 0},
    {"west", "west_cell", -1, 0},
    {"north", "north_cell", 0, 1},
    {"south", "south_cell", 0, -1},
};

inline std::string obstacle_name(std::size_t i, std::size_t count) {
    auto digits = std::to_string(count).size();
    auto s = std::to_string(i + 1);
    return "o" + std::string(digits > s.size() ? digits - s.size() : 0, '0') + s;
}

inline std::size_t obstacle_count(const NavConfig& cfg) {
    return cfg.obstacles.size() + static_cast<std::size_t>(cfg.random_obstacles);
}

inline PropertyPtr coordinate(const std::string& name, const std::string& prefix, int n) {
    std::vector<std::string> values;
    std::vector<double> cuts;
    for (int i = 0; i < n; ++i) {
        values.push_back(prefix + std::to_string(i));
        if (i > 0) cuts.push_back(i);
    }
    return std::make_shared<const Property>(name, std::move(values), std::move(cuts), "cell");
}

// Properties and grid cells a navigation world contributes to a vocabulary.
inline void declare(Vocabulary& vocab, const NavConfig& cfg) {
    if (cfg.width < 1 || cfg.height < 1) throw ModelError("navigation world needs a positive size");
    vocab.add_property(coordinate(kX, "x", cfg.width));
    vocab.add_property(coordinate(kY, "y", cfg.height));
    vocab.add_property(coordinate(kObstacleX, "x", cfg.width));
    vocab.add_property(coordinate(kObstacleY, "y", cfg.height));
    for (const auto& d : kDirections)
        vocab.add_property(std::make_shared<const Property>(d.sensor, std::vector<std::string>{"free", "blocked"},
                                                            std::vector<double>{0.5}, "flag"));
    vocab.add_cell({cfg.agent, kX});
    vocab.add_cell({cfg.agent, kY});
    for (const auto& d : kDirections) vocab.add_cell({cfg.agent, d.sensor});
    const auto n = obstacle_count(cfg);
    for (std::size_t i = 0; i < n; ++i) {
        vocab.add_cell({obstacle_name(i, n), kObstacleX});
        vocab.add_cell({obstacle_name(i, n), kObstacleY});
    }
}

}  // namespace nav

class NavWorld final : public Environment {
public:
    NavWorld(std::shared_ptr<const Vocabulary> vocab, std::vector<std::string> actions, NavConfig cfg,
             std::uint64_t seed)
        : Environment(std::move(vocab), std::move(actions), seed), cfg_(std::move(cfg)) {
        const auto n = nav::obstacle_count(cfg_);
        for (std::size_t i = 0; i < n; ++i) names_.push_back(nav::obstacle_name(i, n));
        for (const auto& [x, y] : cfg_.obstacles)
            if (!inside(x, y)) throw ModelError("obstacle outside the grid");
    }

    std::string kind() const override { return "nav"; }
    bool is_static() const override { return cfg_.move_period == 0; }
    const NavConfig& config() const { return cfg_; }
    const std::vector<std::string>& obstacle_names() const { return names_; }

    bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < cfg_.width && y < cfg_.height; }

    std::pair<int, int> agent_position(const RawState& raw) const {
        return {static_cast<int>(raw.at({cfg_.agent, nav::kX})), static_cast<int>(raw.at({cfg_.agent, nav::kY}))};
    }

    std::set<std::pair<int, int>> obstacle_cells(const RawState& raw) const {
        std::set<std::pair<int, int>> out;
        for (const auto& o : names_)
            out.insert({static_cast<int>(raw.at({o, nav::kObstacleX})), static_cast<int>(raw.at({o, nav::kObstacleY}))});
        return out;
    }

    // Agent start from `declared`; obstacles from the fixed list, then seeded
    // placement on free cells away from the start and the keep-clear cells.
    RawState initial_raw(const RawState& declared) const {
        RawState raw;
        auto ax = declared.find({cfg_.agent, nav::kX});
        auto ay = declared.find({cfg_.agent, nav::kY});
        if (ax == declared.end() || ay == declared.end()) throw ModelError("initial state must place the agent");
        int sx = static_cast<int>(ax->second), sy = static_cast<int>(ay->second);
        if (!inside(sx, sy)) throw ModelError("agent starts outside the grid");
        raw[{cfg_.agent, nav::kX}] = sx;
        raw[{cfg_.agent, nav::kY}] = sy;
        std::set<std::pair<int, int>> taken{{sx, sy}};
        std::set<std::pair<int, int>> reserved(cfg_.keep_clear.begin(), cfg_.keep_clear.end());
        reserved.insert({sx, sy});
        std::size_t i = 0;
        for (const auto& p : cfg_.obstacles) {
            if (taken.count(p)) throw ModelError("fixed obstacles overlap each other or the agent");
            taken.insert(p);
            raw[{names_[i], nav::kObstacleX}] = p.first;
            raw[{names_[i], nav::kObstacleY}] = p.second;
            ++i;
        }
        SplitMix64 rng = SplitMix64(seed()).split(0x0B57AC1E);
        const auto cells = static_cast<std::uint64_t>(cfg_.width) * static_cast<std::uint64_t>(cfg_.height);
        if (taken.size() + reserved.size() + static_cast<std::size_t>(cfg_.random_obstacles) > cells)
            throw ModelError("too many obstacles for the grid");
        for (; i < names_.size(); ++i) {
            std::pair<int, int> p;
            do {
                auto k = rng.below(cells);
                p = {static_cast<int>(k % static_cast<std::uint64_t>(cfg_.width)),
                     static_cast<int>(k / static_cast<std::uint64_t>(cfg_.width))};
            } while (taken.count(p) || reserved.count(p));
            taken.insert(p);
            raw[{names_[i], nav::kObstacleX}] = p.first;
            raw[{names_[i], nav::kObstacleY}] = p.second;
        }
        derive(raw);
        return raw;
    }

    RawState apply(const RawState& raw, const std::string& action) const override {
        for (const auto& d : nav::kDirections) {
            if (action != d.action) continue;
            auto [x, y] = agent_position(raw);
            int nx = x + d.dx, ny = y + d.dy;
            if (!inside(nx, ny) || obstacle_cells(raw).count({nx, ny})) return raw;
            RawState out = raw;
            out[{cfg_.agent, nav::kX}] = nx;
            out[{cfg_.agent, nav::kY}] = ny;
            return out;
        }
        return raw;
    }

    RawState drift(RawState raw, std::uint64_t time) const override {
        if (cfg_.move_period <= 0 || (time + 1) % static_cast<std::uint64_t>(cfg_.move_period) != 0) return raw;
        SplitMix64 rng = SplitMix64(seed()).split(time + 1);
        auto agent = agent_position(raw);
        auto occupied = obstacle_cells(raw);
        for (const auto& o : names_) {
            const auto& d = nav::kDirections[rng.below(4)];
            std::pair<int, int> from{static_cast<int>(raw[{o, nav::kObstacleX}]),
                                     static_cast<int>(raw[{o, nav::kObstacleY}])};
            std::pair<int, int> to{from.first + d.dx, from.second + d.dy};
            if (!inside(to.first, to.second) || to == agent || occupied.count(to)) continue;
            occupied.erase(from);
            occupied.insert(to);
            raw[{o, nav::kObstacleX}] = to.first;
            raw[{o, nav::kObstacleY}] = to.second;
        }
        return raw;
    }

    void derive(RawState& raw) const override {
        auto [x, y] = agent_position(raw);
        auto occupied = obstacle_cells(raw);
        for (const auto& d : nav::kDirections) {
            int nx = x + d.dx, ny = y + d.dy;
            bool blocked = !inside(nx, ny) || occupied.count({nx, ny});
            raw[{cfg_.agent, d.sensor}] = blocked ? 1.0 : 0.0;
        }
    }

private:
    NavConfig cfg_;
    std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Ground-truth planner for tests.

inline constexpr std::size_t kOracleStateLimit = 1'000'000;

// Shortest action sequence (over the true dynamics) from `initial` to a
// reality satisfying `goal`, or nullopt if none exists within `bound` steps.
inline std::optional<std::vector<std::string>> oracle_search(const Environment& env, const Reality& initial,
                                                             const Formula& goal, std::size_t bound,
                                                             const std::set<std::string>& skip = {}) {
    if (!env.is_static()) throw ModelError("oracle search needs a static environment");
    if (!initial.raw) throw ModelError("oracle search needs raw magnitudes");
    if (holds_in(goal, initial)) return std::vector<std::string>{};

    struct Node {
        RawState raw;
        std::size_t parent;
        std::string action;
        std::size_t depth;
    };
    std::vector<Node> nodes{{*initial.raw, 0, {}, 0}};
    std::set<RawState> seen{*initial.raw};
    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        auto idx = frontier.front();
        frontier.pop_front();
        if (nodes[idx].depth >= bound) continue;
        for (const auto& a : env.actions()) {
            if (skip.count(a)) continue;
            auto next_raw = env.apply(nodes[idx].raw, a);
            env.derive(next_raw);
            if (!seen.insert(next_raw).second) continue;
            if (seen.size() > kOracleStateLimit)
                throw StateSpaceTooLarge("oracle search visited more than " + std::to_string(kOracleStateLimit) +
                                         " states");
            nodes.push_back({std::move(next_raw), idx, a, nodes[idx].depth + 1});
            auto reached = quantize_reality(env.vocab(), 0, nodes.back().raw);
            if (holds_in(goal, reached)) {
                std::vector<std::string> plan;
                for (auto k = nodes.size() - 1; k != 0; k = nodes[k].parent) plan.push_back(nodes[k].action);
                std::reverse(plan.begin(), plan.end());
                return plan;
            }
            frontier.push_back(nodes.size() - 1);
        }
    }
    return std::nullopt;
}

}  // namespace qualisem
