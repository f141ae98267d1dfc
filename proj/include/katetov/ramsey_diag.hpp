#pragma once
// Sum_{1/n} vs the Ramsey ideal. Successors of a critical node are coded
// pairs {a<b}; each node carries a vertex set T[i] on whose pairs the
// labelling has a declared canonical form. Stages pick vertices t_b and
// pair families D_{<i,b>}.

#include "katetov/diag_common.hpp"
#include "katetov/ramsey.hpp"

namespace katetov {

enum class RmRule { Constant, Min, Max, Code };

inline const char* rm_rule_name(RmRule r) {
    switch (r) {
    case RmRule::Constant: return "constant";
    case RmRule::Min: return "min";
    case RmRule::Max: return "max";
    case RmRule::Code: return "code";
    }
    return "?";
}

struct RmModel {
    std::string name;
    RmRule rule = RmRule::Code;
    Nat constant = 0;
    int declared_case = 4;
    std::vector<Nat> T; // ascending; empty means every vertex below the horizon
    std::map<Edge, Label> table;
    std::string assumption;

    Label label(Edge e) const {
        if (auto it = table.find(e); it != table.end()) return it->second;
        switch (rule) {
        case RmRule::Constant: return constant;
        case RmRule::Min: return e.first;
        case RmRule::Max: return e.second;
        case RmRule::Code: return code_unordered(e.first, e.second);
        }
        return std::nullopt;
    }
};

struct RamseyScenario {
    std::string name;
    Nat vertex_horizon = 1024;
    std::size_t stages = 10;
    std::size_t verify_prefix = 8;
    std::vector<RmModel> models;
};

inline std::vector<Nat> vertex_set(const RmModel& m, Nat horizon) {
    if (!m.T.empty()) return detail::below(sorted_unique(m.T), horizon);
    std::vector<Nat> v(horizon);
    for (Nat x = 0; x < horizon; ++x) v[x] = x;
    return v;
}

inline nlohmann::json run_ramsey(const RamseyScenario& sc) {
    using nlohmann::json;
    json run = run_shell("ramsey");
    run["scenario"] = sc.name;
    if (sc.models.empty()) throw std::invalid_argument("ramsey scenario has no critical-node models");

    std::vector<std::vector<Nat>> verts;
    for (const auto& m : sc.models) {
        verts.push_back(vertex_set(m, sc.vertex_horizon));
        const auto& T = verts.back();
        if (m.declared_case < 1 || m.declared_case > 4) throw std::invalid_argument("model " + m.name + ": declared case out of range");
        if (T.size() < 2) throw std::invalid_argument("model " + m.name + ": T has fewer than two vertices below the horizon");
        std::vector<Nat> prefix(T.begin(), T.begin() + std::min(sc.verify_prefix, T.size()));
        auto nu = [&](Edge e) { return induced_code(m.label(e)); };
        if (!ramsey_case_holds(pairs_of(prefix), nu, m.declared_case))
            throw std::invalid_argument("model " + m.name + ": declared case " + std::to_string(m.declared_case) + " fails on pairs of the first " +
                                        std::to_string(prefix.size()) + " vertices of T");
        run["assumptions"].push_back({{"model", m.name}, {"tag", "assumption"}, {"fact", m.assumption}});
        run["assumptions"].push_back({{"model", m.name}, {"tag", "derived"},
                                      {"fact", "declared case " + std::to_string(m.declared_case) + " verified on pairs of " + std::to_string(prefix.size()) + " vertices"}});
        if (m.declared_case == 1) {
            Label c = m.label({T[0], T[1]});
            run["contradictions"].push_back(
                {{"model", m.name}, {"case", 1}, {"label", label_str(c)},
                 {"reason", c ? "constant label on a clique: that label class is Ramsey-positive, so the node would carry the label, not bottom"
                              : "constant bottom on a clique: the bottom class is Ramsey-positive, so the node is not critical"}});
        }
    }
    if (!run["contradictions"].empty()) {
        run["status"] = "contradiction";
        return run;
    }

    struct PerNode {
        std::vector<Nat> anchors;
        std::size_t next = 0;
        std::vector<std::pair<Nat, std::vector<Edge>>> D;
        std::vector<Nat> stage_of_anchor;
        std::vector<Nat> labels_c2;
    };
    auto edges_json = [](const std::vector<Edge>& es) {
        json a = json::array();
        for (auto [x, y] : es) a.push_back({x, y});
        return a;
    };
    std::map<Nat, PerNode> nodes;
    for (Nat k = 0; k < sc.stages; ++k) {
        auto [kk, i, b] = stage_index(k);
        const auto& m = sc.models[i % sc.models.size()];
        const auto& T = verts[i % sc.models.size()];
        auto& st = nodes[i];
        const int cs = m.declared_case;
        Nat M = cs == 4 ? detail::checked_mul(k, pow2_nat(k)) : pow2_nat(k);

        std::optional<Nat> pick;
        std::vector<Edge> D;
        Label c2;
        for (; st.next < T.size(); ++st.next) {
            Nat t = T[st.next];
            if (cs == 2) {
                // the label of {t, t_r} for r > b is fixed by t; probe it with the next vertex of T
                if (st.next + 1 >= T.size()) break;
                Label l = m.label({t, T[st.next + 1]});
                if (l && *l > M) {
                    pick = t;
                    c2 = l;
                    break;
                }
                continue;
            }
            std::vector<Edge> cand;
            for (Nat a : st.anchors) cand.emplace_back(a, t);
            if (std::all_of(cand.begin(), cand.end(), [&](Edge e) { auto l = m.label(e); return l && *l > M; })) {
                pick = t;
                D = cand;
                break;
            }
        }
        if (!pick)
            throw HorizonExhausted("stage " + std::to_string(k) + " (model " + m.name + "): no vertex below " + std::to_string(sc.vertex_horizon) +
                                   " gives labels above " + std::to_string(M));
        ++st.next;
        st.anchors.push_back(*pick);
        st.stage_of_anchor.push_back(k);

        std::vector<Nat> C;
        if (cs == 2) {
            C = {*c2};
            st.labels_c2.push_back(*c2);
        } else {
            for (Edge e : D) C.push_back(*m.label(e));
            C = sorted_unique(C);
        }
        Rational harm = harmonic_of_labels(C);
        CheckLog log;
        log.add("sum 1/(c+1) over C_k < 2^-k", harm < two_pow_neg(k), {{"sum", to_string(harm)}, {"bound", to_string(two_pow_neg(k))}});
        log.add("labels exceed threshold", C.empty() || C.front() > M, {{"threshold", M}});
        if (cs == 3) log.add("C_k at most a singleton", C.size() <= 1);
        if (cs == 4) log.add("|C_k| = b", C.size() == b);
        json entry = {{"k", k}, {"i", i}, {"b", b}, {"model", m.name}, {"case", cs}, {"threshold", M}, {"vertex", *pick}, {"C", C}, {"checks", log.json()}};
        if (cs != 2) {
            entry["D"] = edges_json(D);
            st.D.push_back({k, D});
        }
        run["stages"].push_back(entry);
    }

    CheckLog log;
    json Di = json::array();
    for (auto& [i, st] : nodes) {
        const auto& m = sc.models[i % sc.models.size()];
        if (m.declared_case == 2) {
            for (std::size_t b = 0; b < st.anchors.size(); ++b) {
                std::vector<Edge> D;
                for (std::size_t r = b + 1; r < st.anchors.size(); ++r) D.emplace_back(st.anchors[b], st.anchors[r]);
                bool same = std::all_of(D.begin(), D.end(), [&](Edge e) { return m.label(e) == Label{st.labels_c2[b]}; });
                log.add("D[" + std::to_string(i) + "," + std::to_string(b) + "] pairs share min and label c", same);
                st.D.push_back({st.stage_of_anchor[b], D});
            }
        }
        bool bottom_free = true;
        std::map<Edge, int> hits;
        for (const auto& [k, D] : st.D)
            for (Edge e : D) {
                bottom_free = bottom_free && m.label(e).has_value();
                ++hits[e];
            }
        auto expect = pairs_of(st.anchors);
        bool exact = hits.size() == expect.size() &&
                     std::all_of(expect.begin(), expect.end(), [&](Edge e) { auto it = hits.find(e); return it != hits.end() && it->second == 1; });
        log.add("D[" + std::to_string(i) + "] bottom-free", bottom_free);
        log.add("D[" + std::to_string(i) + ",b] pairwise disjoint", std::all_of(hits.begin(), hits.end(), [](const auto& e) { return e.second == 1; }));
        log.add("union of D[" + std::to_string(i) + ",b] = pairs of anchors, each once", exact, {{"anchors", st.anchors.size()}, {"pairs", expect.size()}});
        json ds = json::array();
        for (const auto& [k, D] : st.D) ds.push_back({{"k", k}, {"D", edges_json(D)}});
        Di.push_back({{"i", i}, {"anchors", st.anchors}, {"families", ds}, {"certificate", "clique-structure"}});
    }
    std::vector<Nat> C_all;
    Rational stage_sum = 0;
    for (const auto& s : run["stages"]) {
        auto c = s["C"].get<std::vector<Nat>>();
        C_all.insert(C_all.end(), c.begin(), c.end());
        stage_sum += harmonic_of_labels(c);
    }
    C_all = sorted_unique(C_all);
    Rational harm_C = harmonic_of_labels(C_all), tail = geometric_tail(sc.stages);
    log.add("harmonic sum of C <= stage sums", harm_C <= stage_sum);
    log.add("stage sum + tail <= 2", stage_sum + tail <= 2);
    run["assembled"] = {{"C", C_all}, {"harmonic_partial_sum_C", to_string(harm_C)}, {"tail_bound", to_string(tail)},
                        {"total_bound", to_string(stage_sum + tail)}, {"D", Di}, {"checks", log.json()}};
    return run;
}

} // namespace katetov
