#pragma once
// Ideal descriptors, exact weight functionals, three-valued membership and
// the bounded witness searches for the pattern ideals.

#include "katetov/described_set.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace katetov {

class HorizonExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Divergence { None, Harmonic, IntervalBlock };

inline const char* divergence_name(Divergence d) {
    switch (d) {
    case Divergence::Harmonic: return "harmonic";
    case Divergence::IntervalBlock: return "interval-block";
    default: return "none";
    }
}

struct WeightFunction {
    std::function<Rational(Nat)> eval;
    Divergence divergence = Divergence::None;
    std::string name;
    std::optional<Nat> domain_bound; // evaluator defined on [0, bound) only

    Rational operator()(Nat m) const {
        if (domain_bound && m >= *domain_bound)
            throw HorizonExceeded("weight queried at " + std::to_string(m) + " beyond covered prefix " + std::to_string(*domain_bound));
        return eval(m);
    }
};

inline WeightFunction harmonic_weight() {
    return {[](Nat n) { return harmonic_term(n); }, Divergence::Harmonic, "harmonic", std::nullopt};
}

inline Rational weight_of(const WeightFunction& w, const std::vector<Nat>& a) {
    Rational s = 0;
    for (Nat x : sorted_unique(a)) s += w(x);
    return s;
}

enum class IdealKind { Fin, SumF, SumHarmonic, SumS, Den0, Diff, Hindman, Ramsey, PowerSet };

inline const char* ideal_kind_name(IdealKind k) {
    switch (k) {
    case IdealKind::Fin: return "fin";
    case IdealKind::SumF: return "sum-f";
    case IdealKind::SumHarmonic: return "sum-harmonic";
    case IdealKind::SumS: return "sum-s";
    case IdealKind::Den0: return "den0";
    case IdealKind::Diff: return "diff";
    case IdealKind::Hindman: return "hindman";
    case IdealKind::Ramsey: return "ramsey";
    case IdealKind::PowerSet: return "power-set";
    }
    return "?";
}

struct IdealDescriptor {
    IdealKind kind = IdealKind::Fin;
    std::optional<WeightFunction> weight;  // SumF, SumHarmonic, SumS
    std::optional<DescribedSet> index_set; // SumS: the S of w_S
    nlohmann::json spec;                   // serialized form, kept for certificates

    static IdealDescriptor simple(IdealKind k) {
        IdealDescriptor d;
        d.kind = k;
        d.spec = {{"kind", ideal_kind_name(k)}};
        if (k == IdealKind::SumHarmonic) d.weight = harmonic_weight();
        return d;
    }
    static IdealDescriptor sum_f(WeightFunction w) {
        IdealDescriptor d;
        d.kind = IdealKind::SumF;
        d.spec = {{"kind", "sum-f"}, {"weight", w.name}};
        d.weight = std::move(w);
        return d;
    }
};

enum class Value { In, Out, Unknown };

inline const char* value_name(Value v) {
    switch (v) {
    case Value::In: return "in";
    case Value::Out: return "out";
    default: return "unknown";
    }
}

struct Verdict {
    Value value = Value::Unknown;
    std::string evidence;   // decision procedure / certificate kind
    nlohmann::json detail;  // witness data, partial sums, bounds

    nlohmann::json to_json() const { return {{"value", value_name(value)}, {"evidence", evidence}, {"detail", detail}}; }
};

inline Verdict in(std::string ev, nlohmann::json d = nlohmann::json::object()) { return {Value::In, std::move(ev), std::move(d)}; }
inline Verdict out(std::string ev, nlohmann::json d = nlohmann::json::object()) { return {Value::Out, std::move(ev), std::move(d)}; }
inline Verdict unknown(std::string ev, nlohmann::json d = nlohmann::json::object()) { return {Value::Unknown, std::move(ev), std::move(d)}; }

inline Rational density_at(const DescribedSet& a, Nat n) {
    if (n == 0) throw std::invalid_argument("density_at needs n >= 1");
    return make_rational(a.enumerate_upto(n + 1).size(), n);
}

inline std::map<Nat, Nat> diff_multiplicity(const std::vector<Nat>& a) {
    auto s = sorted_unique(a);
    std::map<Nat, Nat> table;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) ++table[s[i] - s[j]];
    return table;
}

namespace detail {

inline bool divides(Nat m, Nat n) { return m != 0 && n % m == 0; }

inline Verdict unknown_at(const IdealDescriptor& id, const DescribedSet& s, Nat horizon) {
    nlohmann::json d = {{"horizon", horizon}};
    if (id.weight) {
        Nat cap = horizon;
        if (id.weight->domain_bound) cap = std::min(cap, *id.weight->domain_bound);
        d["partial_weight"] = to_string(weight_of(*id.weight, s.enumerate_upto(cap)));
        d["partial_weight_below"] = cap;
    }
    if (id.kind == IdealKind::Den0 && horizon >= 1) d["density"] = to_string(density_at(s, horizon));
    return unknown("no-decision-procedure", d);
}

} // namespace detail

// Decision procedures keyed on descriptor shape. In/Out only with a proof.
inline Verdict membership(const IdealDescriptor& id, const DescribedSet& s, Nat horizon) {
    using nlohmann::json;
    if (id.kind == IdealKind::PowerSet) return in("power-set");
    if (auto b = s.finite_bound()) return in("finite-set", {{"bound", *b}});

    if (id.kind == IdealKind::SumS && id.index_set) {
        if (auto from = id.index_set->cofinite_from())
            return in("summable-total-weight", {{"index_set_cofinite_from", *from}, {"tail_bound", "sum 2^-(n+1)"}});
    }

    // Ideal closure: unions of members, subsets of members.
    if (auto* u = std::get_if<ds::Union>(&s.node())) {
        bool all_in = !u->parts.empty();
        json parts = json::array();
        for (const auto& p : u->parts) {
            Verdict v = membership(id, p, horizon);
            if (v.value == Value::Out) return out("superset-of-positive-part", {{"part", v.to_json()}});
            all_in = all_in && v.value == Value::In;
            parts.push_back(v.to_json());
        }
        if (all_in) return in("finite-union-of-members", {{"parts", parts}});
    }
    if (auto* x = std::get_if<ds::Intersection>(&s.node())) {
        for (const auto& p : x->parts) {
            Verdict v = membership(id, p, horizon);
            if (v.value == Value::In) return in("subset-of-member", {{"part", v.to_json()}});
        }
    }

    auto ap = s.contained_ap();
    switch (id.kind) {
    case IdealKind::Fin:
        if (ap) return out("infinite-set", {{"ap_base", ap->first}, {"ap_step", ap->second}});
        break;
    case IdealKind::SumHarmonic:
        if (ap) return out("harmonic-divergence", {{"ap_base", ap->first}, {"ap_step", ap->second}, {"comparison", "sum 1/(base+k*step+1) >= (1/step) * harmonic tail"}});
        break;
    case IdealKind::SumF:
        if (ap && id.weight && id.weight->divergence == Divergence::Harmonic && ap->second == 1)
            return out("harmonic-divergence", {{"cofinite_from", ap->first}});
        break;
    case IdealKind::SumS:
        if (id.index_set && ap) {
            auto gaps = DescribedSet::complement_of(*id.index_set).contained_ap();
            if (gaps)
                return out("interval-block-divergence",
                           {{"ap_base", ap->first}, {"ap_step", ap->second}, {"unweighted_indices_base", gaps->first}, {"unweighted_indices_step", gaps->second}});
        }
        break;
    case IdealKind::Den0:
        if (ap) return out("ap-density", {{"ap_base", ap->first}, {"ap_step", ap->second}, {"lower_density", to_string(make_rational(1, ap->second))}});
        break;
    case IdealKind::Diff:
    case IdealKind::Hindman: {
        // A progression with step ∤ base omits every difference / pair sum:
        // x - y and x + y land in residue 0 resp. 2*base.
        if (auto* a = std::get_if<ds::AP>(&s.node()); a && a->step >= 2 && !detail::divides(a->step, a->base))
            return in("residue-obstruction", {{"base", a->base}, {"step", a->step}});
        // Complement of AP(b, m) with m | b: A_m plus finitely many multiples of m.
        if (auto* c = std::get_if<ds::Complement>(&s.node())) {
            if (auto* a = std::get_if<ds::AP>(&c->inner[0].node()); a && a->step >= 2 && detail::divides(a->step, a->base))
                return in("pigeonhole-mod-m", {{"m", a->step}, {"extra_multiples_below", a->base}});
        }
        if (ap && ap->first % ap->second == 0) {
            Nat g = std::max(ap->first, ap->second);
            const char* ev = id.kind == IdealKind::Diff ? "delta-image-inside" : "fs-image-inside";
            return out(ev, {{"ap_base", ap->first}, {"ap_step", ap->second}, {"witness_family", "B = {j * " + std::to_string(g) + " : j >= 1}"}});
        }
        break;
    }
    case IdealKind::Ramsey:
        if (auto from = s.cofinite_from())
            return out("clique-of-tail", {{"codes_from", *from}, {"clique", "[ [" + std::to_string(*from) + ", inf) ]^2"}});
        break;
    case IdealKind::PowerSet:
        break;
    }
    return detail::unknown_at(id, s, horizon);
}

// Positive for the dual filter iff not in the ideal.
inline Verdict is_positive(const IdealDescriptor& id, const DescribedSet& s, Nat horizon) {
    Verdict m = membership(id, s, horizon);
    if (m.value == Value::In) m.value = Value::Out;
    else if (m.value == Value::Out) m.value = Value::In;
    return m;
}

// Dual filter membership: a ∈ I* iff ω∖a ∈ I.
inline Verdict in_dual(const IdealDescriptor& id, const DescribedSet& a, Nat horizon) {
    return membership(id, DescribedSet::complement_of(a), horizon);
}

inline std::optional<std::vector<Nat>> hindman_witness_search(const DescribedSet& a, Nat size, Nat horizon) {
    if (size == 0) throw std::invalid_argument("hindman_witness_search needs size >= 1");
    std::vector<Nat> members = a.enumerate_upto(horizon);
    std::vector<Nat> chosen, sums;
    std::function<bool(std::size_t)> dfs = [&](std::size_t from) -> bool {
        if (chosen.size() == size) return true;
        for (std::size_t idx = from; idx < members.size(); ++idx) {
            Nat x = members[idx];
            std::vector<Nat> fresh{x};
            bool ok = true;
            for (Nat s : sums) {
                Nat t = s + x;
                if (t >= horizon || !a.contains(t)) {
                    ok = false;
                    break;
                }
                fresh.push_back(t);
            }
            if (!ok) continue;
            std::size_t keep = sums.size();
            chosen.push_back(x);
            sums.insert(sums.end(), fresh.begin(), fresh.end());
            if (dfs(idx + 1)) return true;
            chosen.pop_back();
            sums.resize(keep);
        }
        return false;
    };
    if (dfs(0)) return chosen;
    return std::nullopt;
}

// Vertices below horizon; a holds pair codes.
inline std::optional<std::vector<Nat>> ramsey_witness_search(const DescribedSet& a, Nat size, Nat horizon) {
    if (size < 2) throw std::invalid_argument("ramsey_witness_search needs size >= 2");
    std::vector<Nat> chosen;
    std::function<bool(Nat)> dfs = [&](Nat from) -> bool {
        if (chosen.size() == size) return true;
        for (Nat v = from; v < horizon; ++v) {
            bool ok = std::all_of(chosen.begin(), chosen.end(), [&](Nat u) { return a.contains(code_unordered(u, v)); });
            if (!ok) continue;
            chosen.push_back(v);
            if (dfs(v + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (dfs(0)) return chosen;
    return std::nullopt;
}

} // namespace katetov
