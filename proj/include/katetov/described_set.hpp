#pragma once
// Finitely presented subsets of ω. Nodes are immutable and shared; membership
// is evaluated lazily against the descriptor tree.

#include "katetov/pairing.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace katetov {

class DescribedSet;

namespace ds {
struct Finite { std::vector<Nat> members; };
struct Cofinite { std::vector<Nat> excluded; };
struct AP { Nat base; Nat step; };
struct Intervals { std::vector<std::pair<Nat, Nat>> spans; }; // each [a,b)
struct FSClosure { std::vector<Nat> generator; std::vector<Nat> sums; };
struct DeltaImage { std::vector<Nat> generator; std::vector<Nat> diffs; };
struct Union { std::vector<DescribedSet> parts; };
struct Intersection { std::vector<DescribedSet> parts; };
struct Complement { std::vector<DescribedSet> inner; }; // exactly one element
} // namespace ds

// Largest generator accepted by FSClosure; 2^22 subset sums is already plenty.
inline constexpr std::size_t kMaxFsGenerator = 22;

inline std::vector<Nat> sorted_unique(std::vector<Nat> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

class DescribedSet {
public:
    using Node = std::variant<ds::Finite, ds::Cofinite, ds::AP, ds::Intervals, ds::FSClosure, ds::DeltaImage,
                              ds::Union, ds::Intersection, ds::Complement>;

    static DescribedSet finite(std::vector<Nat> xs) { return make(ds::Finite{sorted_unique(std::move(xs))}); }
    static DescribedSet cofinite(std::vector<Nat> excluded) { return make(ds::Cofinite{sorted_unique(std::move(excluded))}); }
    static DescribedSet omega() { return cofinite({}); }
    static DescribedSet empty() { return finite({}); }
    static DescribedSet ap(Nat base, Nat step) {
        if (step == 0) throw std::invalid_argument("AP step must be positive");
        return make(ds::AP{base, step});
    }
    static DescribedSet intervals(std::vector<std::pair<Nat, Nat>> spans) {
        std::vector<std::pair<Nat, Nat>> keep;
        for (auto [a, b] : spans)
            if (a < b) keep.emplace_back(a, b);
        std::sort(keep.begin(), keep.end());
        return make(ds::Intervals{std::move(keep)});
    }
    static DescribedSet fs_closure(std::vector<Nat> gen);
    static DescribedSet delta_image(std::vector<Nat> gen);
    static DescribedSet union_of(std::vector<DescribedSet> parts) { return make(ds::Union{std::move(parts)}); }
    static DescribedSet intersection_of(std::vector<DescribedSet> parts) {
        if (parts.empty()) throw std::invalid_argument("intersection of nothing");
        return make(ds::Intersection{std::move(parts)});
    }
    static DescribedSet complement_of(DescribedSet s) { return make(ds::Complement{{std::move(s)}}); }

    const Node& node() const { return *node_; }

    bool contains(Nat n) const;
    std::vector<Nat> enumerate_upto(Nat horizon) const;

    // Shape analysis used by the membership decision procedures. Each answer is
    // a proof about the descriptor, never a horizon guess.
    std::optional<Nat> finite_bound() const;                 // every member is < bound
    std::optional<Nat> cofinite_from() const;                // every n >= value is a member
    std::optional<std::pair<Nat, Nat>> contained_ap() const; // AP(base, step) ⊆ this set

    nlohmann::json to_json() const;
    static DescribedSet from_json(const nlohmann::json& j);

private:
    explicit DescribedSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static DescribedSet make(Node n) { return DescribedSet(std::make_shared<const Node>(std::move(n))); }
    std::shared_ptr<const Node> node_;
};

inline std::vector<Nat> fs_sums(const std::vector<Nat>& gen) {
    std::set<Nat> seen;
    for (Nat g : gen)
        if (!seen.insert(g).second) throw std::invalid_argument("finite-sum generator repeats an element");
    if (gen.size() > kMaxFsGenerator) throw std::invalid_argument("finite-sum generator too large");
    std::vector<Nat> sums;
    for (Nat g : gen) {
        std::size_t n = sums.size();
        for (std::size_t i = 0; i < n; ++i) sums.push_back(detail::checked_add(sums[i], g));
        sums.push_back(g);
    }
    return sorted_unique(std::move(sums));
}

inline std::vector<Nat> delta_of(const std::vector<Nat>& gen) {
    std::vector<Nat> g = sorted_unique(gen), out;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) out.push_back(g[i] - g[j]);
    return sorted_unique(std::move(out));
}

inline DescribedSet DescribedSet::fs_closure(std::vector<Nat> gen) {
    auto sums = fs_sums(gen);
    return make(ds::FSClosure{std::move(gen), std::move(sums)});
}

inline DescribedSet DescribedSet::delta_image(std::vector<Nat> gen) {
    auto d = delta_of(gen);
    return make(ds::DeltaImage{sorted_unique(std::move(gen)), std::move(d)});
}

namespace detail {
template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

inline bool in_sorted(const std::vector<Nat>& v, Nat n) { return std::binary_search(v.begin(), v.end(), n); }

inline std::vector<Nat> below(const std::vector<Nat>& v, Nat horizon) {
    return std::vector<Nat>(v.begin(), std::lower_bound(v.begin(), v.end(), horizon));
}
} // namespace detail

inline bool DescribedSet::contains(Nat n) const {
    using namespace ds;
    return std::visit(
        detail::overloaded{
            [&](const Finite& f) { return detail::in_sorted(f.members, n); },
            [&](const Cofinite& c) { return !detail::in_sorted(c.excluded, n); },
            [&](const AP& a) { return n >= a.base && (n - a.base) % a.step == 0; },
            [&](const Intervals& iv) {
                for (auto [a, b] : iv.spans)
                    if (a <= n && n < b) return true;
                return false;
            },
            [&](const FSClosure& f) { return detail::in_sorted(f.sums, n); },
            [&](const DeltaImage& d) { return detail::in_sorted(d.diffs, n); },
            [&](const Union& u) {
                return std::any_of(u.parts.begin(), u.parts.end(), [&](const DescribedSet& p) { return p.contains(n); });
            },
            [&](const Intersection& x) {
                return std::all_of(x.parts.begin(), x.parts.end(), [&](const DescribedSet& p) { return p.contains(n); });
            },
            [&](const Complement& c) { return !c.inner[0].contains(n); },
        },
        node());
}

inline std::vector<Nat> DescribedSet::enumerate_upto(Nat horizon) const {
    using namespace ds;
    return std::visit(
        detail::overloaded{
            [&](const Finite& f) { return detail::below(f.members, horizon); },
            [&](const FSClosure& f) { return detail::below(f.sums, horizon); },
            [&](const DeltaImage& d) { return detail::below(d.diffs, horizon); },
            [&](const AP& a) {
                std::vector<Nat> out;
                for (Nat x = a.base; x < horizon; x += a.step) out.push_back(x);
                return out;
            },
            [&](const auto&) {
                std::vector<Nat> out;
                for (Nat x = 0; x < horizon; ++x)
                    if (contains(x)) out.push_back(x);
                return out;
            },
        },
        node());
}

inline std::optional<Nat> DescribedSet::finite_bound() const {
    using namespace ds;
    auto top = [](const std::vector<Nat>& v) -> std::optional<Nat> { return v.empty() ? 0 : v.back() + 1; };
    return std::visit(
        detail::overloaded{
            [&](const Finite& f) { return top(f.members); },
            [&](const Cofinite&) -> std::optional<Nat> { return std::nullopt; },
            [&](const AP&) -> std::optional<Nat> { return std::nullopt; },
            [&](const Intervals& iv) -> std::optional<Nat> {
                Nat b = 0;
                for (auto [lo, hi] : iv.spans) b = std::max(b, hi);
                return b;
            },
            [&](const FSClosure& f) { return top(f.sums); },
            [&](const DeltaImage& d) { return top(d.diffs); },
            [&](const Union& u) -> std::optional<Nat> {
                Nat b = 0;
                for (const auto& p : u.parts) {
                    auto pb = p.finite_bound();
                    if (!pb) return std::nullopt;
                    b = std::max(b, *pb);
                }
                return b;
            },
            [&](const Intersection& x) -> std::optional<Nat> {
                std::optional<Nat> best;
                for (const auto& p : x.parts)
                    if (auto pb = p.finite_bound()) best = best ? std::min(*best, *pb) : *pb;
                return best;
            },
            [&](const Complement& c) { return c.inner[0].cofinite_from(); },
        },
        node());
}

inline std::optional<Nat> DescribedSet::cofinite_from() const {
    using namespace ds;
    return std::visit(
        detail::overloaded{
            [&](const Cofinite& c) -> std::optional<Nat> { return c.excluded.empty() ? 0 : c.excluded.back() + 1; },
            [&](const AP& a) -> std::optional<Nat> {
                if (a.step == 1) return a.base;
                return std::nullopt;
            },
            [&](const Union& u) -> std::optional<Nat> {
                std::optional<Nat> best;
                for (const auto& p : u.parts)
                    if (auto pb = p.cofinite_from()) best = best ? std::min(*best, *pb) : *pb;
                return best;
            },
            [&](const Intersection& x) -> std::optional<Nat> {
                Nat b = 0;
                for (const auto& p : x.parts) {
                    auto pb = p.cofinite_from();
                    if (!pb) return std::nullopt;
                    b = std::max(b, *pb);
                }
                return b;
            },
            [&](const Complement& c) { return c.inner[0].finite_bound(); },
            [&](const auto&) -> std::optional<Nat> { return std::nullopt; },
        },
        node());
}

namespace detail {
inline Nat gcd(Nat a, Nat b) {
    while (b) {
        Nat t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Common tail of two progressions, if the congruences are compatible.
inline std::optional<std::pair<Nat, Nat>> meet_ap(std::pair<Nat, Nat> x, std::pair<Nat, Nat> y) {
    Nat g = gcd(x.second, y.second);
    Nat l = checked_mul(x.second / g, y.second);
    Nat start = std::max(x.first, y.first);
    for (Nat t = start; t < start + l; ++t) {
        if ((t - x.first) % x.second == 0 && (t - y.first) % y.second == 0) return std::pair<Nat, Nat>{t, l};
    }
    return std::nullopt;
}
} // namespace detail

inline std::optional<std::pair<Nat, Nat>> DescribedSet::contained_ap() const {
    using namespace ds;
    using R = std::optional<std::pair<Nat, Nat>>;
    return std::visit(
        detail::overloaded{
            [&](const AP& a) -> R { return std::pair<Nat, Nat>{a.base, a.step}; },
            [&](const Cofinite& c) -> R { return std::pair<Nat, Nat>{c.excluded.empty() ? 0 : c.excluded.back() + 1, 1}; },
            [&](const Union& u) -> R {
                for (const auto& p : u.parts)
                    if (auto r = p.contained_ap()) return r;
                return std::nullopt;
            },
            [&](const Intersection& x) -> R {
                R acc = std::pair<Nat, Nat>{0, 1};
                for (const auto& p : x.parts) {
                    auto r = p.contained_ap();
                    if (!r) return std::nullopt;
                    acc = detail::meet_ap(*acc, *r);
                    if (!acc) return std::nullopt;
                }
                return acc;
            },
            [&](const Complement& c) -> R {
                const auto& in = c.inner[0];
                if (auto b = in.finite_bound()) return std::pair<Nat, Nat>{*b, 1};
                if (auto* a = std::get_if<AP>(&in.node()); a && a->step >= 2) return std::pair<Nat, Nat>{a->base + 1, a->step};
                return std::nullopt;
            },
            [&](const auto&) -> R { return std::nullopt; },
        },
        node());
}

// Every descriptor is eventually periodic: beyond `threshold`, membership of
// x depends only on x mod `period`. Finite generators (FS, Δ) are finite sets.
struct EventualPeriod {
    Nat threshold = 0;
    Nat period = 1;
};

inline EventualPeriod eventual_period(const DescribedSet& s) {
    using namespace ds;
    auto past = [](const std::vector<Nat>& v) { return v.empty() ? Nat{0} : v.back() + 1; };
    auto combine = [](const std::vector<DescribedSet>& parts) {
        EventualPeriod acc;
        for (const auto& p : parts) {
            auto e = eventual_period(p);
            acc.threshold = std::max(acc.threshold, e.threshold);
            acc.period = detail::checked_mul(acc.period / detail::gcd(acc.period, e.period), e.period);
        }
        return acc;
    };
    return std::visit(
        detail::overloaded{
            [&](const Finite& f) { return EventualPeriod{past(f.members), 1}; },
            [&](const Cofinite& c) { return EventualPeriod{past(c.excluded), 1}; },
            [&](const AP& a) { return EventualPeriod{a.base, std::max<Nat>(a.step, 1)}; },
            [&](const Intervals& iv) {
                Nat top = 0;
                for (const auto& sp : iv.spans) top = std::max(top, sp.second);
                return EventualPeriod{top, 1};
            },
            [&](const FSClosure& f) { return EventualPeriod{past(f.sums), 1}; },
            [&](const DeltaImage& d) { return EventualPeriod{past(d.diffs), 1}; },
            [&](const Union& u) { return combine(u.parts); },
            [&](const Intersection& x) { return combine(x.parts); },
            [&](const Complement& c) { return eventual_period(c.inner[0]); },
        },
        s.node());
}

// Exact finiteness via one period past the threshold.
inline bool is_finite_set(const DescribedSet& s) {
    auto e = eventual_period(s);
    for (Nat x = e.threshold; x < e.threshold + e.period; ++x)
        if (s.contains(x)) return false;
    return true;
}

inline nlohmann::json DescribedSet::to_json() const {
    using namespace ds;
    using nlohmann::json;
    auto list = [](const std::vector<DescribedSet>& ps) {
        json arr = json::array();
        for (const auto& p : ps) arr.push_back(p.to_json());
        return arr;
    };
    return std::visit(
        detail::overloaded{
            [&](const Finite& f) { return json{{"kind", "finite"}, {"members", f.members}}; },
            [&](const Cofinite& c) { return json{{"kind", "cofinite"}, {"excluded", c.excluded}}; },
            [&](const AP& a) { return json{{"kind", "ap"}, {"base", a.base}, {"step", a.step}}; },
            [&](const Intervals& iv) {
                json arr = json::array();
                for (auto [a, b] : iv.spans) arr.push_back(json::array({a, b}));
                return json{{"kind", "intervals"}, {"spans", arr}};
            },
            [&](const FSClosure& f) { return json{{"kind", "fs"}, {"generator", f.generator}}; },
            [&](const DeltaImage& d) { return json{{"kind", "delta"}, {"generator", d.generator}}; },
            [&](const Union& u) { return json{{"kind", "union"}, {"parts", list(u.parts)}}; },
            [&](const Intersection& x) { return json{{"kind", "intersection"}, {"parts", list(x.parts)}}; },
            [&](const Complement& c) { return json{{"kind", "complement"}, {"of", c.inner[0].to_json()}}; },
        },
        node());
}

inline DescribedSet DescribedSet::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("described set: expected an object with a string 'kind'");
    const std::string kind = j["kind"];
    auto nats = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array()) throw std::invalid_argument(std::string("described set: missing array '") + key + "'");
        std::vector<Nat> v;
        for (const auto& x : j[key]) {
            if (!x.is_number_unsigned()) throw std::invalid_argument("described set: expected natural numbers");
            v.push_back(x.get<Nat>());
        }
        return v;
    };
    auto nat = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number_unsigned()) throw std::invalid_argument(std::string("described set: missing natural '") + key + "'");
        return j[key].get<Nat>();
    };
    auto parts = [&]() {
        if (!j.contains("parts") || !j["parts"].is_array()) throw std::invalid_argument("described set: missing 'parts'");
        std::vector<DescribedSet> ps;
        for (const auto& p : j["parts"]) ps.push_back(from_json(p));
        return ps;
    };
    if (kind == "finite") return finite(nats("members"));
    if (kind == "cofinite") return cofinite(nats("excluded"));
    if (kind == "ap") return ap(nat("base"), nat("step"));
    if (kind == "intervals") {
        if (!j.contains("spans") || !j["spans"].is_array()) throw std::invalid_argument("described set: missing 'spans'");
        std::vector<std::pair<Nat, Nat>> spans;
        for (const auto& s : j["spans"]) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned())
                throw std::invalid_argument("described set: span must be [a,b)");
            spans.emplace_back(s[0].get<Nat>(), s[1].get<Nat>());
        }
        return intervals(spans);
    }
    if (kind == "fs") return fs_closure(nats("generator"));
    if (kind == "delta") return delta_image(nats("generator"));
    if (kind == "union") return union_of(parts());
    if (kind == "intersection") return intersection_of(parts());
    if (kind == "complement") {
        if (!j.contains("of")) throw std::invalid_argument("described set: complement needs 'of'");
        return complement_of(from_json(j["of"]));
    }
    throw std::invalid_argument("described set: unknown kind '" + kind + "'");
}

// Common shorthands.
inline DescribedSet evens() { return DescribedSet::ap(0, 2); }
inline DescribedSet odds() { return DescribedSet::ap(1, 2); }
// A_m: naturals not divisible by m.
inline DescribedSet modular_set(Nat m) { return DescribedSet::complement_of(DescribedSet::ap(0, m)); }

} // namespace katetov
