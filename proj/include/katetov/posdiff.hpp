#pragma once
// Sum_{1/n} vs the positive-difference ideal: each stage picks a residue class
// of labels mod m_k carrying harmonic weight ≥ 1 and keeps the forbidden
// label set C strongly sparse against the differences L_k seen so far.

#include "katetov/diag_common.hpp"
#include "katetov/ramsey.hpp"

#include <set>

namespace katetov {

enum class PdBase { Identity, HarmonicBlocks, Constant, Bottom };

inline const char* pd_base_name(PdBase b) {
    switch (b) {
    case PdBase::Identity: return "identity";
    case PdBase::HarmonicBlocks: return "harmonic-blocks";
    case PdBase::Constant: return "constant";
    case PdBase::Bottom: return "bottom";
    }
    return "?";
}

// Consecutive intervals starting at 0, each the shortest with Σ 1/(x+1) ≥ 1.
inline std::vector<Nat> harmonic_block_starts(Nat horizon) {
    std::vector<Nat> starts{0};
    Rational w = 0;
    for (Nat x = 0; x < horizon; ++x) {
        w += harmonic_term(x);
        if (w >= 1) {
            starts.push_back(x + 1);
            w = 0;
        }
    }
    return starts;
}

struct PdModel {
    std::string name;
    PdBase base = PdBase::Identity;
    Nat constant = 0;
    std::map<Nat, Label> table;
    std::string assumption;

    bool finitely_many_labels() const { return base == PdBase::Constant || base == PdBase::Bottom; }
};

struct PosdiffScenario {
    std::string name;
    Nat horizon = 5000;
    std::size_t stages = 6;
    std::vector<PdModel> models;
};

// Labels of 0..horizon-1 for one model. Harmonic blocks carry 4^{j+1} on block j.
inline std::vector<Label> posdiff_labels(const PdModel& m, Nat horizon) {
    std::vector<Label> out(horizon);
    std::vector<Nat> starts;
    if (m.base == PdBase::HarmonicBlocks) starts = harmonic_block_starts(horizon);
    std::size_t j = 0;
    for (Nat x = 0; x < horizon; ++x) {
        switch (m.base) {
        case PdBase::Identity: out[x] = x; break;
        case PdBase::Constant: out[x] = m.constant; break;
        case PdBase::Bottom: out[x] = std::nullopt; break;
        case PdBase::HarmonicBlocks: {
            while (j + 1 < starts.size() && starts[j + 1] <= x) ++j;
            Nat l = 4;
            for (std::size_t e = 0; e < j; ++e) l = detail::checked_mul(l, 4);
            out[x] = l;
            break;
        }
        }
    }
    for (const auto& [x, l] : m.table)
        if (x < horizon) out[x] = l;
    return out;
}

inline nlohmann::json run_posdiff(const PosdiffScenario& sc) {
    using nlohmann::json;
    json run = run_shell("posdiff");
    run["scenario"] = sc.name;
    if (sc.models.empty()) throw std::invalid_argument("posdiff scenario has no critical-node models");

    std::vector<std::vector<Label>> labels;
    for (const auto& m : sc.models) {
        labels.push_back(posdiff_labels(m, sc.horizon));
        run["assumptions"].push_back({{"model", m.name}, {"tag", "assumption"}, {"fact", m.assumption}});
        if (!m.finitely_many_labels()) continue;
        // Finitely many labels: the label classes (with ⊥) partition ω, so one
        // of them has divergent harmonic weight; it cannot be null at a critical node.
        std::map<std::string, Rational> w;
        for (Nat x = 0; x < sc.horizon; ++x) w[label_str(labels.back()[x])] += harmonic_term(x);
        json classes = json::array();
        for (const auto& [l, q] : w) classes.push_back({{"label", l}, {"partial_harmonic_weight", to_string(q)}});
        run["contradictions"].push_back({{"model", m.name},
                                         {"reason", "finitely many labels; some label class has divergent harmonic weight"},
                                         {"horizon", sc.horizon}, {"classes", classes}});
    }
    if (!run["contradictions"].empty()) {
        run["status"] = "contradiction";
        return run;
    }

    std::vector<Nat> C_all;     // ⋃ C_j, sorted
    std::vector<Nat> C_after0;  // ⋃_{j≥1} C_j
    std::vector<Nat> L;         // Δ(⋃ C_j)
    std::map<Nat, std::vector<std::pair<Nat, std::vector<Nat>>>> D_by_i;
    std::map<Nat, Rational> harm_by_i;
    for (Nat k = 0; k < sc.stages; ++k) {
        auto [kk, i, b] = stage_index(k);
        const auto& m = sc.models[i % sc.models.size()];
        const auto& lab = labels[i % sc.models.size()];
        Nat n_k = C_all.empty() ? 0 : C_all.back();
        Nat m_k = (L.empty() ? 0 : L.back()) + 1;
        Nat floor = detail::checked_add(n_k, m_k);

        std::map<Nat, Rational> weight; // residue -> partial harmonic weight
        for (Nat x = 0; x < sc.horizon; ++x)
            if (lab[x] && *lab[x] > floor) weight[*lab[x] % m_k] += harmonic_term(x);
        std::optional<Nat> r;
        for (const auto& [res, w] : weight)
            if (!r || w > weight[*r]) r = res;
        if (!r) throw HorizonExhausted("stage " + std::to_string(k) + ": no label exceeds " + std::to_string(floor) + " below horizon " + std::to_string(sc.horizon));

        std::vector<Nat> D, C;
        Rational w = 0;
        for (Nat x = 0; x < sc.horizon && w < 1; ++x)
            if (lab[x] && *lab[x] > floor && *lab[x] % m_k == *r) {
                D.push_back(x);
                C.push_back(*lab[x]);
                w += harmonic_term(x);
            }
        if (w < 1)
            throw HorizonExhausted("stage " + std::to_string(k) + ": best residue class " + std::to_string(*r) + " mod " + std::to_string(m_k) +
                                   " reaches harmonic weight " + to_string(w) + " < 1 below horizon " + std::to_string(sc.horizon));
        C = sorted_unique(C);

        CheckLog log;
        log.add("harmonic D_k >= 1", w >= 1, {{"weight", to_string(w)}});
        log.add("well-labelled", std::all_of(D.begin(), D.end(), [&](Nat x) { return lab[x].has_value(); }));
        log.add("labels exceed n_k + m_k", C.front() > floor, {{"floor", floor}});
        std::set<Nat> Ls(L.begin(), L.end());
        auto with = sorted_unique([&] { auto v = C_all; v.insert(v.end(), C.begin(), C.end()); return v; }());
        std::optional<std::pair<Nat, Nat>> clash;
        for (Nat x : C)
            for (Nat y : with)
                if (x != y && Ls.count(x > y ? x - y : y - x) && !clash) clash = {x, y};
        log.add("strong sparseness against L_k", !clash, clash ? json{{"pair", {clash->first, clash->second}}} : json(nullptr));
        bool fresh = true;
        for (const auto& [kp, prev] : D_by_i[i])
            for (Nat x : D) fresh = fresh && !std::binary_search(prev.begin(), prev.end(), x);
        log.add("D disjoint from earlier D for the same i", fresh);

        harm_by_i[i] += w;
        D_by_i[i].push_back({k, D});
        C_all = with;
        if (k >= 1) C_after0 = sorted_unique([&] { auto v = C_after0; v.insert(v.end(), C.begin(), C.end()); return v; }());
        L = delta_of(C_all);
        run["stages"].push_back({{"k", k}, {"i", i}, {"b", b}, {"model", m.name}, {"n_k", n_k}, {"m_k", m_k}, {"residue", *r},
                                 {"C", C}, {"D", D}, {"L_next_size", L.size()}, {"checks", log.json()}});
    }

    CheckLog log;
    auto sparse = eventually_sparse_check(C_after0, 1);
    Nat max_mult = 0;
    for (auto [d, mult] : diff_multiplicity(C_after0)) max_mult = std::max(max_mult, mult);
    log.add("C beyond stage 0 has every difference at most once", sparse.pass, {{"violators", sparse.violators.size()}});
    Rational harm_C = 0;
    for (Nat c : C_all) harm_C += harmonic_term(c);
    json Di = json::array();
    for (const auto& [i, w] : harm_by_i) {
        log.add("harmonic tally of D[" + std::to_string(i) + "]", w >= D_by_i[i].size(), {{"tally", to_string(w)}});
        Di.push_back({{"i", i}, {"stages", D_by_i[i].size()}, {"harmonic_tally", to_string(w)}, {"certificate", "divergent-weight-tally"}});
    }
    run["assembled"] = {{"C", C_all}, {"harmonic_partial_sum_C", to_string(harm_C)}, {"max_difference_multiplicity_after_stage_0", max_mult},
                        {"D", Di}, {"checks", log.json()}};
    return run;
}

} // namespace katetov
