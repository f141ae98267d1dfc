#pragma once
// Finite-horizon checks of reduction witnesses: classical Katětov maps, the
// subset-inclusion reduction between weighted summable ideals, and tree
// certificates for the gamified order (height-1 identity or a bounded search
// over a declared family of successor sets).

#include "katetov/construction.hpp"
#include "katetov/trees.hpp"

#include <variant>

namespace katetov {

struct KatetovMap {
    enum class Kind { Identity, Constant, Table } kind = Kind::Identity;
    Nat constant = 0;
    std::map<Nat, Nat> table; // identity off the table's domain

    static KatetovMap identity() { return {}; }
    static KatetovMap constant_map(Nat c) { return {Kind::Constant, c, {}}; }
    static KatetovMap finite_table(std::map<Nat, Nat> t) { return {Kind::Table, 0, std::move(t)}; }

    Nat operator()(Nat x) const {
        switch (kind) {
        case Kind::Identity: return x;
        case Kind::Constant: return constant;
        case Kind::Table: {
            auto it = table.find(x);
            return it == table.end() ? x : it->second;
        }
        }
        return x;
    }
};

// h⁻¹[a] as a descriptor.
inline DescribedSet preimage(const KatetovMap& h, const DescribedSet& a) {
    switch (h.kind) {
    case KatetovMap::Kind::Identity: return a;
    case KatetovMap::Kind::Constant: return a.contains(h.constant) ? DescribedSet::omega() : DescribedSet::empty();
    case KatetovMap::Kind::Table: {
        std::vector<Nat> dom, hits;
        for (auto [x, y] : h.table) {
            dom.push_back(x);
            if (a.contains(y)) hits.push_back(x);
        }
        return DescribedSet::union_of({DescribedSet::finite(hits), DescribedSet::intersection_of({a, DescribedSet::cofinite(dom)})});
    }
    }
    return a;
}

// Coherent witnesses search trees whose successor sets come from `family`.
struct CoherentWitness {
    CoherentMap map;
    std::vector<DescribedSet> family;
};

struct IdentityHeightOne {};

using Witness = std::variant<KatetovMap, CoherentWitness, IdentityHeightOne>;

struct ReductionClaim {
    IdealDescriptor source; // U: a ranges over the dual of the source
    IdealDescriptor target; // V: branching and preimages are judged in the dual of the target
    Witness witness;
};

// Is h⁻¹[a] in the target dual?
inline Verdict katetov_witness_check(const ReductionClaim& claim, const DescribedSet& a, Nat horizon) {
    const auto* h = std::get_if<KatetovMap>(&claim.witness);
    if (!h) throw std::invalid_argument("katetov_witness_check needs a Katetov map witness");
    Verdict v = in_dual(claim.target, preimage(*h, a), horizon);
    v.detail["preimage"] = preimage(*h, a).to_json();
    return v;
}

struct SubsetReduction {
    Verdict verdict;
    std::optional<Nat> exception_bound; // P ∖ Q ⊆ [0, bound)
};

// P ⊆* Q decided exactly (descriptors are eventually periodic), then the
// block weights w_Q ≤ w_P checked on every block of p past the exception bound.
inline SubsetReduction check_subset_reduction(const DescribedSet& P, const DescribedSet& Q, const PartitionData& p, Nat horizon) {
    using nlohmann::json;
    DescribedSet diff = DescribedSet::intersection_of({P, DescribedSet::complement_of(Q)});
    auto per = eventual_period(diff);
    for (Nat x = per.threshold; x < per.threshold + per.period; ++x)
        if (diff.contains(x)) {
            Nat count = 0;
            for (Nat n = 0; n < horizon; ++n) count += diff.contains(n);
            return {out("exceptions-unbounded", {{"periodic_exception", x}, {"period", per.period}, {"exceptions_below_horizon", count}, {"horizon", horizon}}),
                    std::nullopt};
        }
    std::vector<Nat> exceptions;
    for (Nat n = 0; n < per.threshold; ++n)
        if (diff.contains(n)) exceptions.push_back(n);
    Nat bound = exceptions.empty() ? 0 : exceptions.back() + 1;

    std::size_t last = std::min<std::size_t>(p.depth(), horizon);
    for (std::size_t n = bound; n < last; ++n) {
        const Rational& wP = P.contains(n) ? p.r[n + 1] : p.r[n];
        const Rational& wQ = Q.contains(n) ? p.r[n + 1] : p.r[n];
        if (wQ > wP)
            return {out("weight-order-fails", {{"block", n}, {"wQ", to_string(wQ)}, {"wP", to_string(wP)}}), bound};
    }
    return {in("almost-inclusion", {{"exception_bound", bound}, {"exceptions", exceptions}, {"threshold", per.threshold}, {"period", per.period},
                                    {"blocks_checked", json::array({bound, last})}}),
            bound};
}

// A finite tree standing for a V-branching tree: internal nodes carry their
// successor descriptor, children are enumerated below the horizon.
struct ReductionCertificate {
    FiniteTree tree;
    CoherentMap values;
    std::map<FiniteString, Verdict> branching;
    Nat horizon = 0;

    nlohmann::json to_json() const {
        using nlohmann::json;
        json nodes = json::array();
        for (const auto& s : tree.nodes) {
            json e = {{"node", s.entries}};
            if (auto it = tree.described.find(s); it != tree.described.end()) e["successors"] = it->second.to_json();
            if (auto it = branching.find(s); it != branching.end()) e["branching"] = value_name(it->second.value);
            if (auto it = values.find(s); it != values.end()) e["value"] = it->second;
            nodes.push_back(e);
        }
        return {{"horizon", horizon}, {"nodes", nodes}};
    }
};

// Branching re-check on internal nodes plus value re-enumeration on leaves.
inline bool validate_certificate(const ReductionCertificate& c, const IdealDescriptor& target, const DescribedSet& a) {
    for (const auto& s : c.tree.nodes) {
        if (c.tree.is_leaf(s)) {
            auto v = value_at(c.values, s);
            if (!v || !a.contains(*v)) return false;
            continue;
        }
        if (in_dual(target, c.tree.successor_set(s), c.horizon).value != Value::In) return false;
        auto kids = c.tree.children(s);
        if (kids != c.tree.successor_set(s).enumerate_upto(c.horizon)) return false;
    }
    return true;
}

namespace detail {

inline bool grow(ReductionCertificate& c, const CoherentWitness& w, const IdealDescriptor& target, const DescribedSet& a, const FiniteString& s,
                 std::size_t depth) {
    if (auto v = value_at(w.map, s)) {
        if (!a.contains(*v)) return false;
        c.values[s] = *v;
        return true;
    }
    if (s.size() >= depth) return false;
    for (const auto& F : w.family) {
        Verdict br = in_dual(target, F, c.horizon);
        if (br.value != Value::In) continue;
        ReductionCertificate trial = c;
        bool ok = true;
        for (Nat x : F.enumerate_upto(c.horizon)) {
            trial.tree.add_path(s.child(x));
            if (!(ok = grow(trial, w, target, a, s.child(x), depth))) break;
        }
        if (!ok) continue;
        trial.tree.described.insert_or_assign(s, F);
        trial.branching.insert_or_assign(s, br);
        c = std::move(trial);
        return true;
    }
    return false;
}

} // namespace detail

inline std::optional<ReductionCertificate> check_reduction_witness(const ReductionClaim& claim, const DescribedSet& a, std::size_t depth, Nat horizon) {
    ReductionCertificate c;
    c.horizon = horizon;
    if (std::holds_alternative<IdentityHeightOne>(claim.witness)) {
        Verdict br = in_dual(claim.target, a, horizon);
        if (br.value != Value::In) return std::nullopt;
        c.tree.described.insert_or_assign(FiniteString{}, a);
        c.branching.insert_or_assign(FiniteString{}, br);
        for (Nat x : a.enumerate_upto(horizon)) {
            c.tree.add_path(FiniteString{}.child(x));
            c.values[FiniteString{}.child(x)] = x;
        }
        return c;
    }
    const auto* w = std::get_if<CoherentWitness>(&claim.witness);
    if (!w) throw std::invalid_argument("check_reduction_witness needs a coherent or height-1 identity witness");
    if (!detail::grow(c, *w, claim.target, a, FiniteString{}, depth)) return std::nullopt;
    return c;
}

} // namespace katetov
