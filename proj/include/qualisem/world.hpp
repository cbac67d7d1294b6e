#pragma once

// Qualitative world model: properties with finite ordered value spaces,
// quantization of raw magnitudes into those spaces, realities (the state of
// the world at a tick) and distances between qualitative values.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qualisem/error.hpp"

namespace qualisem {

class Property {
public:
    Property(std::string name, std::vector<std::string> values, std::vector<double> thresholds,
             std::string unit = {})
        : name_(std::move(name)),
          values_(std::move(values)),
          thresholds_(std::move(thresholds)),
          unit_(std::move(unit)) {
        if (values_.empty()) throw ModelError("property '" + name_ + "' has no values");
        std::set<std::string> seen;
        for (const auto& v : values_) {
            if (!seen.insert(v).second)
                throw ModelError("property '" + name_ + "' repeats value '" + v + "'");
        }
        if (thresholds_.size() + 1 != values_.size())
            throw ModelError("property '" + name_ + "' needs " +
                             std::to_string(values_.size() - 1) + " thresholds, got " +
                             std::to_string(thresholds_.size()));
        for (std::size_t i = 0; i < thresholds_.size(); ++i) {
            if (!std::isfinite(thresholds_[i]))
                throw ModelError("property '" + name_ + "' has a non-finite threshold");
            if (i > 0 && !(thresholds_[i - 1] < thresholds_[i]))
                throw ModelError("property '" + name_ + "' thresholds are not strictly ascending");
        }
    }

    const std::string& name() const { return name_; }
    const std::vector<std::string>& values() const { return values_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    const std::string& unit() const { return unit_; }
    std::size_t size() const { return values_.size(); }

    std::optional<std::size_t> rank(const std::string& value) const {
        auto it = std::find(values_.begin(), values_.end(), value);
        if (it == values_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - values_.begin());
    }

    bool operator==(const Property&) const = default;

private:
    std::string name_;
    std::vector<std::string> values_;
    std::vector<double> thresholds_;
    std::string unit_;
};

using PropertyPtr = std::shared_ptr<const Property>;

struct QualValue {
    PropertyPtr property;
    std::size_t rank = 0;

    const std::string& name() const { return property->values()[rank]; }
    const std::string& property_name() const { return property->name(); }

    friend bool operator==(const QualValue& a, const QualValue& b) {
        return a.rank == b.rank && a.property->name() == b.property->name();
    }
};

inline QualValue make_value(const PropertyPtr& property, const std::string& value) {
    auto r = property->rank(value);
    if (!r) throw ModelError("'" + value + "' is not a value of property '" + property->name() + "'");
    return QualValue{property, *r};
}

// A magnitude equal to a threshold falls into the higher band.
inline QualValue quantize(const PropertyPtr& property, double magnitude) {
    if (!std::isfinite(magnitude))
        throw InvalidMagnitude("non-finite magnitude for property '" + property->name() + "'");
    const auto& cuts = property->thresholds();
    auto k = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), magnitude) -
                                      cuts.begin());
    return QualValue{property, k};
}

struct Cell {
    std::string entity;
    std::string property;

    auto operator<=>(const Cell&) const = default;
    bool operator==(const Cell&) const = default;

    std::string str() const { return entity + "." + property; }
};

// The properties a scenario talks about, plus the (entity, property) grid its
// present descriptions must cover.
class Vocabulary {
public:
    Vocabulary() = default;

    void add_property(PropertyPtr p) {
        auto name = p->name();
        if (!properties_.emplace(name, std::move(p)).second)
            throw ModelError("duplicate property '" + name + "'");
    }

    void add_cell(Cell cell) {
        if (!has_property(cell.property))
            throw ModelError("grid cell " + cell.str() + " uses unknown property");
        auto it = std::lower_bound(grid_.begin(), grid_.end(), cell);
        if (it != grid_.end() && *it == cell) return;
        grid_.insert(it, std::move(cell));
    }

    bool has_property(const std::string& name) const { return properties_.count(name) != 0; }

    const PropertyPtr& property(const std::string& name) const {
        auto it = properties_.find(name);
        if (it == properties_.end()) throw ModelError("unknown property '" + name + "'");
        return it->second;
    }

    const std::map<std::string, PropertyPtr>& properties() const { return properties_; }
    const std::vector<Cell>& grid() const { return grid_; }

    bool in_grid(const Cell& c) const { return std::binary_search(grid_.begin(), grid_.end(), c); }

    std::vector<std::string> entities() const {
        std::vector<std::string> out;
        for (const auto& c : grid_)
            if (out.empty() || out.back() != c.entity) out.push_back(c.entity);
        return out;
    }

    QualValue value(const std::string& property_name, const std::string& value) const {
        return make_value(property(property_name), value);
    }

private:
    std::map<std::string, PropertyPtr> properties_;
    std::vector<Cell> grid_;
};

struct Reality {
    std::uint64_t time = 0;
    std::map<Cell, QualValue> assignments;
    std::optional<std::map<Cell, double>> raw;
    // Carried verbatim, never interpreted.
    std::map<std::string, std::string> meta;

    const QualValue& at(const Cell& c) const {
        auto it = assignments.find(c);
        if (it == assignments.end()) throw ModelError("reality has no value for " + c.str());
        return it->second;
    }

    friend bool operator==(const Reality& a, const Reality& b) {
        return a.time == b.time && a.assignments == b.assignments && a.raw == b.raw &&
               a.meta == b.meta;
    }
};

inline Reality quantize_reality(const Vocabulary& vocab, std::uint64_t time,
                                std::map<Cell, double> raw) {
    Reality r;
    r.time = time;
    for (const auto& [cell, magnitude] : raw)
        r.assignments.emplace(cell, quantize(vocab.property(cell.property), magnitude));
    for (const auto& cell : vocab.grid())
        if (!r.assignments.count(cell))
            throw ModelError("raw state does not cover grid cell " + cell.str());
    r.raw = std::move(raw);
    return r;
}

class DistanceTable {
public:
    using Matrix = std::vector<std::vector<int>>;

    // Replaces rank difference for one property. The matrix must be a metric
    // on the property's value space.
    void set_custom(const Property& p, Matrix m) {
        const auto n = p.size();
        if (m.size() != n) throw ModelError("distance table for '" + p.name() + "' has wrong size");
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i].size() != n)
                throw ModelError("distance table for '" + p.name() + "' has wrong size");
            for (std::size_t j = 0; j < n; ++j) {
                if (m[i][j] < 0 || (i == j) != (m[i][j] == 0))
                    throw ModelError("distance table for '" + p.name() +
                                     "' violates identity of indiscernibles");
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (m[i][j] != m[j][i])
                    throw ModelError("distance table for '" + p.name() + "' is not symmetric");
        custom_[p.name()] = std::move(m);
    }

    bool has_custom(const std::string& property) const { return custom_.count(property) != 0; }
    const std::map<std::string, Matrix>& custom() const { return custom_; }

    int operator()(const QualValue& x, const QualValue& y) const {
        if (x.property_name() != y.property_name())
            throw PropertyMismatch("cannot measure distance between values of '" +
                                   x.property_name() + "' and '" + y.property_name() + "'");
        return ranks(x.property_name(), x.rank, y.rank);
    }

    int ranks(const std::string& property, std::size_t a, std::size_t b) const {
        auto it = custom_.find(property);
        if (it != custom_.end()) return it->second.at(a).at(b);
        return a > b ? static_cast<int>(a - b) : static_cast<int>(b - a);
    }

    bool operator==(const DistanceTable&) const = default;

private:
    std::map<std::string, Matrix> custom_;
};

inline int distance(const DistanceTable& table, const QualValue& x, const QualValue& y) {
    return table(x, y);
}

struct GoalPair {
    Cell cell;
    QualValue from;
    QualValue to;

    friend bool operator==(const GoalPair&, const GoalPair&) = default;
};

// Cells of `target` whose value differs from `current`; empty iff the target holds.
inline std::vector<GoalPair> reality_diff(const Reality& current, const Reality& target) {
    std::vector<GoalPair> out;
    for (const auto& [cell, want] : target.assignments) {
        const auto& have = current.at(cell);
        if (have.property_name() != want.property_name())
            throw PropertyMismatch("cell " + cell.str() + " compares different properties");
        if (!(have == want)) out.push_back(GoalPair{cell, have, want});
    }
    return out;
}

}  // namespace qualisem
