#pragma once
// Coherent presentations of partial continuous functions, finite prefix
// trees, the labelling ν, critical nodes and branching certification.

#include "katetov/finite_string.hpp"
#include "katetov/ideals.hpp"

#include <functional>
#include <map>
#include <set>

namespace katetov {

class CoherenceError : public std::runtime_error {
public:
    FiniteString existing, incoming;
    CoherenceError(FiniteString a, FiniteString b)
        : std::runtime_error("coherence violation between " + a.str() + " and " + b.str()), existing(std::move(a)), incoming(std::move(b)) {}
};

using CoherentMap = std::map<FiniteString, Nat>;

inline CoherentMap extend_coherent(const CoherentMap& m, const FiniteString& s, Nat c) {
    for (const auto& [t, v] : m)
        if (v != c && t.comparable(s)) throw CoherenceError(t, s);
    CoherentMap out = m;
    out[s] = c;
    return out;
}

// Φ(σ): the value of the deepest assigned prefix of σ (all agree by coherence).
inline std::optional<Nat> value_at(const CoherentMap& m, const FiniteString& s) {
    for (std::size_t len = s.size() + 1; len-- > 0;) {
        auto it = m.find(s.prefix(len));
        if (it != m.end()) return it->second;
    }
    return std::nullopt;
}

// σ ∈ T_Φ: σ is a prefix of an assigned string or extends one.
inline bool in_canonical_tree(const CoherentMap& m, const FiniteString& s) {
    if (value_at(m, s)) return true;
    auto it = m.lower_bound(s);
    return it != m.end() && s.is_prefix_of(it->first);
}

struct FiniteTree {
    std::set<FiniteString> nodes;
    std::map<FiniteString, DescribedSet> described; // nodes without an entry use their explicit children

    FiniteTree() { nodes.insert(FiniteString{}); }

    void add_path(const FiniteString& s) {
        for (std::size_t len = 0; len <= s.size(); ++len) nodes.insert(s.prefix(len));
    }
    bool contains(const FiniteString& s) const { return nodes.count(s) > 0; }

    std::vector<Nat> children(const FiniteString& s) const {
        std::vector<Nat> out;
        for (auto it = nodes.upper_bound(s); it != nodes.end() && s.is_prefix_of(*it); ++it)
            if (it->size() == s.size() + 1) out.push_back(it->entries.back());
        return out;
    }
    bool is_leaf(const FiniteString& s) const {
        auto it = nodes.upper_bound(s);
        return it == nodes.end() || !s.is_prefix_of(*it);
    }
    DescribedSet successor_set(const FiniteString& s) const {
        auto it = described.find(s);
        return it != described.end() ? it->second : DescribedSet::finite(children(s));
    }
    void validate() const {
        if (!contains(FiniteString{})) throw std::invalid_argument("tree lacks the root");
        for (const auto& s : nodes)
            if (!s.empty() && !contains(s.parent())) throw std::invalid_argument("tree not prefix-closed at " + s.str());
    }
};

inline FiniteTree canonical_tree(const CoherentMap& m, Nat horizon) {
    FiniteTree t;
    for (const auto& [s, v] : m)
        if (std::all_of(s.entries.begin(), s.entries.end(), [&](Nat x) { return x < horizon; })) t.add_path(s);
    return t;
}

using Label = std::optional<Nat>; // nullopt is ⊥

inline std::string label_str(const Label& l) { return l ? std::to_string(*l) : "bottom"; }

struct OracleAnswer {
    Value value = Value::Unknown;
    std::string tag;      // "assumption" or "derived"
    std::string evidence;
};

struct OracleQuery {
    FiniteString node;
    Label label; // ⊥ means the nullity query on the ⊥-successor set
    OracleAnswer answer;

    nlohmann::json to_json() const {
        return {{"node", node.entries}, {"label", label ? nlohmann::json(*label) : nlohmann::json("bottom")},
                {"value", value_name(answer.value)}, {"tag", answer.tag}, {"evidence", answer.evidence}};
    }
};

// Positivity of {n : ν(σ⌢n) = c} and nullity of {n : ν(σ⌢n) = ⊥}. Scenario
// stipulations take precedence; otherwise the answer is derived from the ideal
// applied to the class as seen in the finite tree.
class PositivityOracle {
public:
    PositivityOracle() = default;
    explicit PositivityOracle(IdealDescriptor ideal) : ideal_(std::move(ideal)) {}

    void stipulate_positive(const FiniteString& s, Nat c, Value v, std::string tag = "assumption", std::string note = "") {
        positive_[{s, c}] = {v, std::move(tag), std::move(note)};
    }
    void stipulate_null_bottom(const FiniteString& s, Value v, std::string tag = "assumption", std::string note = "") {
        null_[s] = {v, std::move(tag), std::move(note)};
    }

    std::vector<Nat> stipulated_labels(const FiniteString& s) const {
        std::vector<Nat> out;
        for (auto it = positive_.lower_bound({s, 0}); it != positive_.end() && it->first.first == s; ++it) out.push_back(it->first.second);
        return out;
    }

    OracleAnswer positive(const FiniteString& s, Nat c, const DescribedSet& cls, Nat horizon) const {
        if (auto it = positive_.find({s, c}); it != positive_.end()) return it->second;
        if (!ideal_) return {Value::Unknown, "derived", "no stipulation and no ideal"};
        Verdict v = is_positive(*ideal_, cls, horizon);
        return {v.value, "derived", v.evidence};
    }
    OracleAnswer null_bottom(const FiniteString& s, const DescribedSet& cls, Nat horizon) const {
        if (auto it = null_.find(s); it != null_.end()) return it->second;
        if (cls.finite_bound() == Nat{0}) return {Value::In, "derived", "empty-set"};
        if (!ideal_) return {Value::Unknown, "derived", "no stipulation and no ideal"};
        Verdict v = membership(*ideal_, cls, horizon);
        return {v.value, "derived", v.evidence};
    }

    const std::optional<IdealDescriptor>& ideal() const { return ideal_; }

    nlohmann::json stipulations_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [k, a] : positive_)
            arr.push_back({{"node", k.first.entries}, {"label", k.second}, {"query", "positive"}, {"value", value_name(a.value)}, {"tag", a.tag}, {"note", a.evidence}});
        for (const auto& [s, a] : null_)
            arr.push_back({{"node", s.entries}, {"label", "bottom"}, {"query", "null"}, {"value", value_name(a.value)}, {"tag", a.tag}, {"note", a.evidence}});
        return arr;
    }

private:
    std::optional<IdealDescriptor> ideal_;
    std::map<std::pair<FiniteString, Nat>, OracleAnswer> positive_;
    std::map<FiniteString, OracleAnswer> null_;
};

class LabellingBlocked : public std::runtime_error {
public:
    FiniteString node;
    Label label;
    LabellingBlocked(FiniteString s, Label l)
        : std::runtime_error("labelling blocked: oracle has no answer at " + s.str() + " for label " + label_str(l)), node(std::move(s)), label(l) {}
};

struct LabelledTree {
    FiniteTree tree;
    CoherentMap map;
    std::map<FiniteString, Label> labels;
    std::map<FiniteString, int> rule; // which labelling rule fired (1..4)
    std::vector<OracleQuery> queries;

    const Label& label(const FiniteString& s) const { return labels.at(s); }
};

inline LabelledTree compute_labels(const FiniteTree& t, const CoherentMap& m, const PositivityOracle& oracle, Nat horizon) {
    t.validate();
    LabelledTree lt{t, m, {}, {}, {}};
    std::vector<FiniteString> order(t.nodes.begin(), t.nodes.end());
    std::stable_sort(order.begin(), order.end(), [](const FiniteString& a, const FiniteString& b) { return a.size() > b.size(); });
    for (const auto& s : order) {
        if (auto v = value_at(m, s)) {
            lt.labels[s] = *v;
            lt.rule[s] = 1;
            continue;
        }
        if (!in_canonical_tree(m, s)) {
            lt.labels[s] = std::nullopt;
            lt.rule[s] = 2;
            continue;
        }
        std::map<Nat, std::vector<Nat>> classes;
        for (Nat x : t.children(s))
            if (const Label& l = lt.labels.at(s.child(x))) classes[*l].push_back(x);
        for (Nat c : oracle.stipulated_labels(s)) classes[c];
        Label chosen;
        for (const auto& [c, xs] : classes) {
            OracleAnswer a = oracle.positive(s, c, DescribedSet::finite(xs), horizon);
            lt.queries.push_back({s, c, a});
            if (a.value == Value::Unknown) throw LabellingBlocked(s, c);
            if (a.value == Value::In) {
                chosen = c;
                break;
            }
        }
        lt.labels[s] = chosen;
        lt.rule[s] = chosen ? 3 : 4;
    }
    return lt;
}

struct CriticalReport {
    std::vector<FiniteString> critical;
    std::vector<FiniteString> undetermined;
    std::vector<OracleQuery> queries;
};

inline CriticalReport find_critical(const LabelledTree& lt, const PositivityOracle& oracle, Nat horizon) {
    CriticalReport rep;
    for (const auto& s : lt.tree.nodes) {
        if (lt.labels.at(s)) continue;
        // Outside T_Φ every successor is outside too, so the ⊥-class is all of ω.
        DescribedSet cls = DescribedSet::omega();
        if (lt.rule.at(s) != 2) {
            std::vector<Nat> xs;
            for (Nat x : lt.tree.children(s))
                if (!lt.labels.at(s.child(x))) xs.push_back(x);
            cls = DescribedSet::finite(xs);
        }
        OracleAnswer a = oracle.null_bottom(s, cls, horizon);
        rep.queries.push_back({s, std::nullopt, a});
        if (a.value == Value::In) rep.critical.push_back(s);
        else if (a.value == Value::Unknown) rep.undetermined.push_back(s);
    }
    return rep;
}

inline std::map<FiniteString, Verdict> check_branching(const FiniteTree& t, const IdealDescriptor& ideal, Nat horizon) {
    std::map<FiniteString, Verdict> out;
    for (const auto& s : t.nodes) out.emplace(s, in_dual(ideal, t.successor_set(s), horizon));
    return out;
}

// Lexicographically first maximal path whose deepest assigned value is c.
inline std::optional<std::vector<FiniteString>> path_value_search(const LabelledTree& lt, Nat c, const FiniteString& from = {}) {
    std::vector<FiniteString> path;
    std::function<bool(const FiniteString&)> dfs = [&](const FiniteString& s) -> bool {
        path.push_back(s);
        if (lt.tree.is_leaf(s)) {
            if (value_at(lt.map, s) == c) return true;
        } else {
            for (Nat x : lt.tree.children(s))
                if (dfs(s.child(x))) return true;
        }
        path.pop_back();
        return false;
    };
    if (!lt.tree.contains(from)) return std::nullopt;
    // the path still starts at the root
    for (std::size_t len = 0; len < from.size(); ++len) path.push_back(from.prefix(len));
    if (dfs(from)) return path;
    return std::nullopt;
}

} // namespace katetov
