#pragma once

// Simply typed lambda calculus over the ground types LP, LP*, CL and Iu, with
// products and sequences. Decision terms normalize to sequences of action
// constants of type Iu.
//
// Term syntax:  \x:Iu. x    f a    (a, b)    proj1 t    [a, b, c]
// Type syntax:  Iu  LP  LPStar  CL  A -> B  A * B  [A]

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qualisem/error.hpp"
#include "qualisem/lexer.hpp"

namespace qualisem {

enum class GroundType { LP, LPStar, CL, Iu };

inline const char* ground_name(GroundType g) {
    switch (g) {
        case GroundType::LP: return "LP";
        case GroundType::LPStar: return "LPStar";
        case GroundType::CL: return "CL";
        case GroundType::Iu: return "Iu";
    }
    return "?";
}

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
    struct Ground {
        GroundType ground;
    };
    struct Arrow {
        TypePtr from, to;
    };
    struct Product {
        TypePtr first, second;
    };
    struct Seq {
        TypePtr element;
    };
    std::variant<Ground, Arrow, Product, Seq> node;
};

inline TypePtr ground(GroundType g) { return std::make_shared<const Type>(Type{Type::Ground{g}}); }
inline TypePtr arrow(TypePtr a, TypePtr b) {
    return std::make_shared<const Type>(Type{Type::Arrow{std::move(a), std::move(b)}});
}
inline TypePtr product(TypePtr a, TypePtr b) {
    return std::make_shared<const Type>(Type{Type::Product{std::move(a), std::move(b)}});
}
inline TypePtr seq_of(TypePtr a) { return std::make_shared<const Type>(Type{Type::Seq{std::move(a)}}); }

inline bool type_equal(const TypePtr& a, const TypePtr& b) {
    if (a == b) return true;
    if (a->node.index() != b->node.index()) return false;
    if (auto* g = std::get_if<Type::Ground>(&a->node))
        return g->ground == std::get<Type::Ground>(b->node).ground;
    if (auto* f = std::get_if<Type::Arrow>(&a->node)) {
        const auto& h = std::get<Type::Arrow>(b->node);
        return type_equal(f->from, h.from) && type_equal(f->to, h.to);
    }
    if (auto* p = std::get_if<Type::Product>(&a->node)) {
        const auto& q = std::get<Type::Product>(b->node);
        return type_equal(p->first, q.first) && type_equal(p->second, q.second);
    }
    return type_equal(std::get<Type::Seq>(a->node).element, std::get<Type::Seq>(b->node).element);
}

inline bool is_ground(const TypePtr& t, GroundType g) {
    auto* n = std::get_if<Type::Ground>(&t->node);
    return n && n->ground == g;
}

inline std::string print(const TypePtr& t) {
    return std::visit(
        [](const auto& n) -> std::string {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Type::Ground>) {
                return ground_name(n.ground);
            } else if constexpr (std::is_same_v<N, Type::Arrow>) {
                auto lhs = print(n.from);
                if (std::holds_alternative<Type::Arrow>(n.from->node)) lhs = "(" + lhs + ")";
                return lhs + " -> " + print(n.to);
            } else if constexpr (std::is_same_v<N, Type::Product>) {
                auto lhs = print(n.first);
                auto rhs = print(n.second);
                if (std::holds_alternative<Type::Arrow>(n.first->node)) lhs = "(" + lhs + ")";
                if (!std::holds_alternative<Type::Ground>(n.second->node) &&
                    !std::holds_alternative<Type::Seq>(n.second->node))
                    rhs = "(" + rhs + ")";
                return lhs + " * " + rhs;
            } else {
                return "[" + print(n.element) + "]";
            }
        },
        t->node);
}

// ---------------------------------------------------------------------------
// Terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    struct Var {
        std::string name;
    };
    struct Const {
        std::string name;
        TypePtr type;
    };
    struct Abs {
        std::string param;
        TypePtr type;
        TermPtr body;
    };
    struct App {
        TermPtr fn, arg;
    };
    struct Pair {
        TermPtr first, second;
    };
    struct Proj {
        int index;  // 1 or 2
        TermPtr of;
    };
    struct SeqLit {
        std::vector<TermPtr> items;
    };
    std::variant<Var, Const, Abs, App, Pair, Proj, SeqLit> node;
};

inline TermPtr var(std::string name) { return std::make_shared<const Term>(Term{Term::Var{std::move(name)}}); }
inline TermPtr constant(std::string name, TypePtr type) {
    return std::make_shared<const Term>(Term{Term::Const{std::move(name), std::move(type)}});
}
inline TermPtr lam(std::string param, TypePtr type, TermPtr body) {
    return std::make_shared<const Term>(Term{Term::Abs{std::move(param), std::move(type), std::move(body)}});
}
inline TermPtr app(TermPtr fn, TermPtr arg) {
    return std::make_shared<const Term>(Term{Term::App{std::move(fn), std::move(arg)}});
}
inline TermPtr pair(TermPtr a, TermPtr b) {
    return std::make_shared<const Term>(Term{Term::Pair{std::move(a), std::move(b)}});
}
inline TermPtr proj(int index, TermPtr of) {
    if (index != 1 && index != 2) throw Error("projection index must be 1 or 2");
    return std::make_shared<const Term>(Term{Term::Proj{index, std::move(of)}});
}
inline TermPtr seq_lit(std::vector<TermPtr> items) {
    return std::make_shared<const Term>(Term{Term::SeqLit{std::move(items)}});
}

inline std::size_t term_size(const TermPtr& t) {
    return std::visit(
        [](const auto& n) -> std::size_t {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Term::Var> || std::is_same_v<N, Term::Const>) return 1;
            else if constexpr (std::is_same_v<N, Term::Abs>) return 1 + term_size(n.body);
            else if constexpr (std::is_same_v<N, Term::App>) return 1 + term_size(n.fn) + term_size(n.arg);
            else if constexpr (std::is_same_v<N, Term::Pair>) return 1 + term_size(n.first) + term_size(n.second);
            else if constexpr (std::is_same_v<N, Term::Proj>) return 1 + term_size(n.of);
            else {
                std::size_t s = 1;
                for (const auto& i : n.items) s += term_size(i);
                return s;
            }
        },
        t->node);
}

// Structural equality, binder names included.
inline bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& n) -> bool {
            using N = std::decay_t<decltype(n)>;
            const auto& m = std::get<N>(b->node);
            if constexpr (std::is_same_v<N, Term::Var>) return n.name == m.name;
            else if constexpr (std::is_same_v<N, Term::Const>) return n.name == m.name && type_equal(n.type, m.type);
            else if constexpr (std::is_same_v<N, Term::Abs>)
                return n.param == m.param && type_equal(n.type, m.type) && term_equal(n.body, m.body);
            else if constexpr (std::is_same_v<N, Term::App>) return term_equal(n.fn, m.fn) && term_equal(n.arg, m.arg);
            else if constexpr (std::is_same_v<N, Term::Pair>)
                return term_equal(n.first, m.first) && term_equal(n.second, m.second);
            else if constexpr (std::is_same_v<N, Term::Proj>) return n.index == m.index && term_equal(n.of, m.of);
            else {
                if (n.items.size() != m.items.size()) return false;
                for (std::size_t i = 0; i < n.items.size(); ++i)
                    if (!term_equal(n.items[i], m.items[i])) return false;
                return true;
            }
        },
        a->node);
}

namespace detail {

inline bool alpha_equal(const TermPtr& a, const TermPtr& b, std::vector<std::string>& lhs,
                        std::vector<std::string>& rhs) {
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& n) -> bool {
            using N = std::decay_t<decltype(n)>;
            const auto& m = std::get<N>(b->node);
            if constexpr (std::is_same_v<N, Term::Var>) {
                // Compare binding depth; free names compare by spelling.
                auto depth = [](const std::vector<std::string>& scope, const std::string& name) {
                    for (std::size_t i = scope.size(); i-- > 0;)
                        if (scope[i] == name) return static_cast<std::int64_t>(scope.size() - 1 - i);
                    return std::int64_t{-1};
                };
                auto da = depth(lhs, n.name);
                auto db = depth(rhs, m.name);
                return da == db && (da >= 0 || n.name == m.name);
            } else if constexpr (std::is_same_v<N, Term::Const>) {
                return n.name == m.name && type_equal(n.type, m.type);
            } else if constexpr (std::is_same_v<N, Term::Abs>) {
                if (!type_equal(n.type, m.type)) return false;
                lhs.push_back(n.param);
                rhs.push_back(m.param);
                bool ok = alpha_equal(n.body, m.body, lhs, rhs);
                lhs.pop_back();
                rhs.pop_back();
                return ok;
            } else if constexpr (std::is_same_v<N, Term::App>) {
                return alpha_equal(n.fn, m.fn, lhs, rhs) && alpha_equal(n.arg, m.arg, lhs, rhs);
            } else if constexpr (std::is_same_v<N, Term::Pair>) {
                return alpha_equal(n.first, m.first, lhs, rhs) && alpha_equal(n.second, m.second, lhs, rhs);
            } else if constexpr (std::is_same_v<N, Term::Proj>) {
                return n.index == m.index && alpha_equal(n.of, m.of, lhs, rhs);
            } else {
                if (n.items.size() != m.items.size()) return false;
                for (std::size_t i = 0; i < n.items.size(); ++i)
                    if (!alpha_equal(n.items[i], m.items[i], lhs, rhs)) return false;
                return true;
            }
        },
        a->node);
}

}  // namespace detail

inline bool alpha_equal(const TermPtr& a, const TermPtr& b) {
    std::vector<std::string> lhs, rhs;
    return detail::alpha_equal(a, b, lhs, rhs);
}

// ---------------------------------------------------------------------------
// Typing

using TypeContext = std::map<std::string, TypePtr>;

namespace detail {

inline std::string join_path(const std::string& path, const char* seg) {
    return path.empty() ? std::string(seg) : path + "/" + seg;
}

inline TypePtr typecheck(const TermPtr& t, TypeContext& ctx, const std::string& path) {
    return std::visit(
        [&](const auto& n) -> TypePtr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Term::Var>) {
                auto it = ctx.find(n.name);
                if (it == ctx.end()) throw UnboundVariable(n.name);
                return it->second;
            } else if constexpr (std::is_same_v<N, Term::Const>) {
                return n.type;
            } else if constexpr (std::is_same_v<N, Term::Abs>) {
                auto saved = ctx.find(n.param) == ctx.end() ? nullptr : ctx[n.param];
                ctx[n.param] = n.type;
                TypePtr body;
                try {
                    body = typecheck(n.body, ctx, join_path(path, "body"));
                } catch (...) {
                    if (saved) ctx[n.param] = saved;
                    else ctx.erase(n.param);
                    throw;
                }
                if (saved) ctx[n.param] = saved;
                else ctx.erase(n.param);
                return arrow(n.type, body);
            } else if constexpr (std::is_same_v<N, Term::App>) {
                auto fn = typecheck(n.fn, ctx, join_path(path, "fn"));
                auto arg = typecheck(n.arg, ctx, join_path(path, "arg"));
                auto* a = std::get_if<Type::Arrow>(&fn->node);
                if (!a) throw TypeError(join_path(path, "fn"), "a function type", print(fn));
                if (!type_equal(a->from, arg)) throw TypeError(join_path(path, "arg"), print(a->from), print(arg));
                return a->to;
            } else if constexpr (std::is_same_v<N, Term::Pair>) {
                return product(typecheck(n.first, ctx, join_path(path, "fst")),
                               typecheck(n.second, ctx, join_path(path, "snd")));
            } else if constexpr (std::is_same_v<N, Term::Proj>) {
                auto of = typecheck(n.of, ctx, join_path(path, "proj"));
                auto* p = std::get_if<Type::Product>(&of->node);
                if (!p) throw TypeError(join_path(path, "proj"), "a product type", print(of));
                return n.index == 1 ? p->first : p->second;
            } else {
                if (n.items.empty()) throw TypeError(path, "a non-empty sequence", "[]");
                TypePtr elem;
                for (std::size_t i = 0; i < n.items.size(); ++i) {
                    auto seg = "item" + std::to_string(i);
                    auto ti = typecheck(n.items[i], ctx, join_path(path, seg.c_str()));
                    if (!elem) elem = ti;
                    else if (!type_equal(elem, ti)) throw TypeError(join_path(path, seg.c_str()), print(elem), print(ti));
                }
                return seq_of(elem);
            }
        },
        t->node);
}

}  // namespace detail

// The unique type of `term` under `context`. Errors name the offending
// subterm by a path such as "fn/body/arg".
inline TypePtr typecheck(const TermPtr& term, const TypeContext& context = {}) {
    TypeContext ctx = context;
    return detail::typecheck(term, ctx, "");
}

// ---------------------------------------------------------------------------
// Normalization

inline constexpr std::uint64_t kDefaultStepBudget = 1'000'000;

namespace detail {

// Nameless representation used by the reducer. Binder names are kept only as
// hints for converting back.
struct Db;
using DbPtr = std::shared_ptr<const Db>;
struct Db {
    enum class Kind { Var, Const, Abs, App, Pair, Proj, Seq };
    Kind kind;
    std::size_t index = 0;  // Var: de Bruijn index; Proj: 1 or 2
    std::string name;       // Const name or binder hint
    TypePtr type;           // Const type or binder annotation
    std::vector<DbPtr> kids;
};

inline DbPtr mk(Db::Kind k, std::size_t index, std::string name, TypePtr type, std::vector<DbPtr> kids) {
    return std::make_shared<const Db>(Db{k, index, std::move(name), std::move(type), std::move(kids)});
}

inline DbPtr to_db(const TermPtr& t, std::vector<std::string>& scope) {
    return std::visit(
        [&](const auto& n) -> DbPtr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Term::Var>) {
                for (std::size_t i = scope.size(); i-- > 0;)
                    if (scope[i] == n.name) return mk(Db::Kind::Var, scope.size() - 1 - i, n.name, nullptr, {});
                throw UnboundVariable(n.name);
            } else if constexpr (std::is_same_v<N, Term::Const>) {
                return mk(Db::Kind::Const, 0, n.name, n.type, {});
            } else if constexpr (std::is_same_v<N, Term::Abs>) {
                scope.push_back(n.param);
                auto body = to_db(n.body, scope);
                scope.pop_back();
                return mk(Db::Kind::Abs, 0, n.param, n.type, {body});
            } else if constexpr (std::is_same_v<N, Term::App>) {
                return mk(Db::Kind::App, 0, {}, nullptr, {to_db(n.fn, scope), to_db(n.arg, scope)});
            } else if constexpr (std::is_same_v<N, Term::Pair>) {
                return mk(Db::Kind::Pair, 0, {}, nullptr, {to_db(n.first, scope), to_db(n.second, scope)});
            } else if constexpr (std::is_same_v<N, Term::Proj>) {
                return mk(Db::Kind::Proj, static_cast<std::size_t>(n.index), {}, nullptr, {to_db(n.of, scope)});
            } else {
                std::vector<DbPtr> kids;
                for (const auto& i : n.items) kids.push_back(to_db(i, scope));
                return mk(Db::Kind::Seq, 0, {}, nullptr, std::move(kids));
            }
        },
        t->node);
}

inline TermPtr from_db(const DbPtr& d, std::vector<std::string>& scope) {
    switch (d->kind) {
        case Db::Kind::Var: return var(scope[scope.size() - 1 - d->index]);
        case Db::Kind::Const: return constant(d->name, d->type);
        case Db::Kind::Abs: {
            // A fresh name never shadows an enclosing binder, so every
            // reference resolves to the binder it had.
            std::string name = d->name;
            while (std::find(scope.begin(), scope.end(), name) != scope.end()) name += "'";
            scope.push_back(name);
            auto body = from_db(d->kids[0], scope);
            scope.pop_back();
            return lam(name, d->type, body);
        }
        case Db::Kind::App: return app(from_db(d->kids[0], scope), from_db(d->kids[1], scope));
        case Db::Kind::Pair: return pair(from_db(d->kids[0], scope), from_db(d->kids[1], scope));
        case Db::Kind::Proj: return proj(static_cast<int>(d->index), from_db(d->kids[0], scope));
        case Db::Kind::Seq: {
            std::vector<TermPtr> items;
            for (const auto& k : d->kids) items.push_back(from_db(k, scope));
            return seq_lit(std::move(items));
        }
    }
    throw Error("unreachable");
}

inline DbPtr with_kids(const DbPtr& d, std::vector<DbPtr> kids) {
    return mk(d->kind, d->index, d->name, d->type, std::move(kids));
}

inline DbPtr shift(const DbPtr& d, std::int64_t by, std::size_t cutoff) {
    switch (d->kind) {
        case Db::Kind::Var:
            if (d->index < cutoff) return d;
            return mk(Db::Kind::Var, static_cast<std::size_t>(static_cast<std::int64_t>(d->index) + by), d->name,
                      nullptr, {});
        case Db::Kind::Const: return d;
        case Db::Kind::Abs: return with_kids(d, {shift(d->kids[0], by, cutoff + 1)});
        default: {
            std::vector<DbPtr> kids;
            kids.reserve(d->kids.size());
            for (const auto& k : d->kids) kids.push_back(shift(k, by, cutoff));
            return with_kids(d, std::move(kids));
        }
    }
}

// body[index := value]; `value` is already shifted to the depth of `body`.
inline DbPtr substitute(const DbPtr& body, std::size_t index, const DbPtr& value) {
    switch (body->kind) {
        case Db::Kind::Var:
            if (body->index == index) return value;
            return body;
        case Db::Kind::Const: return body;
        case Db::Kind::Abs: return with_kids(body, {substitute(body->kids[0], index + 1, shift(value, 1, 0))});
        default: {
            std::vector<DbPtr> kids;
            kids.reserve(body->kids.size());
            for (const auto& k : body->kids) kids.push_back(substitute(k, index, value));
            return with_kids(body, std::move(kids));
        }
    }
}

inline DbPtr beta(const DbPtr& abs, const DbPtr& arg) {
    return shift(substitute(abs->kids[0], 0, shift(arg, 1, 0)), -1, 0);
}

class Reducer {
public:
    explicit Reducer(std::uint64_t budget) : budget_(budget) {}

    std::uint64_t steps() const { return steps_; }

    // Leftmost-outermost: reduce the head to weak head normal form, then the
    // remaining subterms left to right.
    DbPtr normal_form(const DbPtr& t) {
        auto w = whnf(t);
        switch (w->kind) {
            case Db::Kind::Var:
            case Db::Kind::Const: return w;
            case Db::Kind::Abs: return with_kids(w, {normal_form(w->kids[0])});
            default: {
                std::vector<DbPtr> kids;
                kids.reserve(w->kids.size());
                for (const auto& k : w->kids) kids.push_back(normal_form(k));
                return with_kids(w, std::move(kids));
            }
        }
    }

private:
    DbPtr whnf(DbPtr t) {
        for (;;) {
            if (t->kind == Db::Kind::App) {
                auto fn = whnf(t->kids[0]);
                if (fn->kind != Db::Kind::Abs) return with_kids(t, {fn, t->kids[1]});
                tick();
                t = beta(fn, t->kids[1]);
            } else if (t->kind == Db::Kind::Proj) {
                auto of = whnf(t->kids[0]);
                if (of->kind != Db::Kind::Pair) return with_kids(t, {of});
                tick();
                t = of->kids[t->index == 1 ? 0 : 1];
            } else {
                return t;
            }
        }
    }

    void tick() {
        if (++steps_ > budget_)
            throw StepBudgetExceeded("normalization exceeded " + std::to_string(budget_) + " reduction steps");
    }

    std::uint64_t budget_;
    std::uint64_t steps_ = 0;
};

}  // namespace detail

struct Normalized {
    TermPtr term;
    std::uint64_t steps = 0;
};

inline Normalized normalize_counted(const TermPtr& term, std::uint64_t budget = kDefaultStepBudget) {
    try {
        typecheck(term);
    } catch (const Error& e) {
        throw NotWellTyped(std::string("cannot normalize an ill-typed term: ") + e.what());
    }
    std::vector<std::string> scope;
    auto db = detail::to_db(term, scope);
    detail::Reducer r(budget);
    auto nf = r.normal_form(db);
    return Normalized{detail::from_db(nf, scope), r.steps()};
}

// The beta-normal form of a closed, well-typed term (normal-order reduction).
inline TermPtr normalize(const TermPtr& term, std::uint64_t budget = kDefaultStepBudget) {
    return normalize_counted(term, budget).term;
}

struct ActionSequence {
    std::vector<std::string> actions;

    std::size_t size() const { return actions.size(); }
    bool operator==(const ActionSequence&) const = default;
};

inline ActionSequence extract_actions(const TermPtr& term, const std::set<std::string>* declared = nullptr) {
    auto nf = normalize(term);
    ActionSequence out;
    auto take = [&](const TermPtr& t) {
        auto* c = std::get_if<Term::Const>(&t->node);
        if (!c || !is_ground(c->type, GroundType::Iu))
            throw NotAnActionSequence("normal form is not a sequence of Iu constants");
        if (declared && !declared->count(c->name))
            throw NotAnActionSequence("'" + c->name + "' is not a declared action");
        out.actions.push_back(c->name);
    };
    if (auto* s = std::get_if<Term::SeqLit>(&nf->node)) {
        for (const auto& i : s->items) take(i);
    } else {
        take(nf);
    }
    if (out.actions.empty()) throw NotAnActionSequence("empty action sequence");
    return out;
}

// ---------------------------------------------------------------------------
// Surface syntax

inline std::string print(const TermPtr& t);

namespace detail {

inline std::string print_operand(const TermPtr& t) {
    // App, Abs and Proj need parentheses when they are an argument.
    if (std::holds_alternative<Term::App>(t->node) || std::holds_alternative<Term::Abs>(t->node) ||
        std::holds_alternative<Term::Proj>(t->node))
        return "(" + print(t) + ")";
    return print(t);
}

}  // namespace detail

inline std::string print(const TermPtr& t) {
    return std::visit(
        [](const auto& n) -> std::string {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Term::Var>) return n.name;
            else if constexpr (std::is_same_v<N, Term::Const>) return n.name;
            else if constexpr (std::is_same_v<N, Term::Abs>)
                return "\\" + n.param + ":" + print(n.type) + ". " + print(n.body);
            else if constexpr (std::is_same_v<N, Term::App>) {
                std::string fn = std::holds_alternative<Term::Abs>(n.fn->node) ? "(" + print(n.fn) + ")" : print(n.fn);
                return fn + " " + detail::print_operand(n.arg);
            } else if constexpr (std::is_same_v<N, Term::Pair>)
                return "(" + print(n.first) + ", " + print(n.second) + ")";
            else if constexpr (std::is_same_v<N, Term::Proj>)
                return "proj" + std::to_string(n.index) + " " + detail::print_operand(n.of);
            else {
                std::string s = "[";
                for (std::size_t i = 0; i < n.items.size(); ++i) s += (i ? ", " : "") + print(n.items[i]);
                return s + "]";
            }
        },
        t->node);
}

namespace detail {

class TermParser {
public:
    TermParser(TokenStream& ts, const TypeContext& constants) : ts_(ts), constants_(constants) {}

    TypePtr type() {
        auto lhs = product_type();
        if (ts_.accept("->")) return arrow(lhs, type());
        return lhs;
    }

    TermPtr term() {
        if (ts_.is("\\")) return lambda();
        auto head = unary();
        while (starts_unary() || ts_.is("\\")) {
            if (ts_.is("\\")) {
                head = app(head, lambda());
                break;
            }
            head = app(head, unary());
        }
        return head;
    }

private:
    TypePtr product_type() {
        auto lhs = type_atom();
        while (ts_.accept("*")) lhs = product(lhs, type_atom());
        return lhs;
    }

    TypePtr type_atom() {
        if (ts_.accept("(")) {
            auto t = type();
            ts_.expect(")");
            return t;
        }
        if (ts_.accept("[")) {
            auto t = type();
            ts_.expect("]");
            return seq_of(t);
        }
        auto kw = ts_.expect_keyword({"Iu", "LP", "LPStar", "CL"});
        if (kw == "Iu") return ground(GroundType::Iu);
        if (kw == "LP") return ground(GroundType::LP);
        if (kw == "LPStar") return ground(GroundType::LPStar);
        return ground(GroundType::CL);
    }

    TermPtr lambda() {
        ts_.expect("\\");
        auto name = ts_.expect_ident("parameter name");
        ts_.expect(":");
        auto ty = type();
        ts_.expect(".");
        scope_.push_back(name);
        auto body = term();
        scope_.pop_back();
        return lam(name, ty, body);
    }

    bool starts_unary() const {
        return ts_.peek().kind == Token::Kind::Ident || ts_.is("(") || ts_.is("[");
    }

    TermPtr unary() {
        if (ts_.is("proj1") || ts_.is("proj2")) {
            int index = ts_.next().text == "proj1" ? 1 : 2;
            return proj(index, unary());
        }
        return atom();
    }

    TermPtr atom() {
        if (ts_.accept("(")) {
            auto first = term();
            if (ts_.accept(",")) {
                auto second = term();
                ts_.expect(")");
                return pair(first, second);
            }
            ts_.expect(")");
            return first;
        }
        if (ts_.accept("[")) {
            std::vector<TermPtr> items;
            if (!ts_.is("]")) {
                do {
                    items.push_back(term());
                } while (ts_.accept(","));
            }
            ts_.expect("]");
            return seq_lit(std::move(items));
        }
        if (ts_.peek().kind != Token::Kind::Ident) ts_.fail({"a term"});
        auto name = ts_.next().text;
        if (std::find(scope_.begin(), scope_.end(), name) != scope_.end()) return var(name);
        auto it = constants_.find(name);
        if (it != constants_.end()) return constant(name, it->second);
        throw UnboundVariable(name);
    }

    TokenStream& ts_;
    const TypeContext& constants_;
    std::vector<std::string> scope_;
};

}  // namespace detail

// Identifiers bound by an enclosing lambda are variables; any other identifier
// must be a declared constant.
inline TermPtr parse_term(std::string_view text, const TypeContext& constants = {}) {
    TokenStream ts(text);
    detail::TermParser p(ts, constants);
    auto t = p.term();
    ts.expect_end();
    return t;
}

inline TypePtr parse_type(std::string_view text) {
    TokenStream ts(text);
    TypeContext none;
    detail::TermParser p(ts, none);
    auto t = p.type();
    ts.expect_end();
    return t;
}

}  // namespace qualisem
