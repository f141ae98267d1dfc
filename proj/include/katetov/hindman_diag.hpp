#pragma once
// Sum_{1/n} vs the Hindman ideal. Each critical node carries a block-disjoint
// sequence H[i] on whose finite sums the labelling has a declared canonical
// form; stages pick anchors h_{n_b} and the finite-sum families D_{<i,b>}.

#include "katetov/diag_common.hpp"
#include "katetov/ramsey.hpp"

namespace katetov {

enum class HmRule { Constant, MinSupport, MaxSupport, MinMax, Identity };

inline const char* hm_rule_name(HmRule r) {
    switch (r) {
    case HmRule::Constant: return "constant";
    case HmRule::MinSupport: return "min-support";
    case HmRule::MaxSupport: return "max-support";
    case HmRule::MinMax: return "min-max";
    case HmRule::Identity: return "identity";
    }
    return "?";
}

inline Nat exponent_of(Nat pow) { return static_cast<Nat>(std::countr_zero(pow)); }

// (2^{jmax} - 1)·64 + jmin: injective on (jmin, jmax), increasing in jmax.
inline Nat min_max_label(Nat x) {
    Nat jmax = exponent_of(max_support(x)), jmin = exponent_of(min_support(x));
    if (jmax >= 57) throw std::overflow_error("min-max label overflows 64 bits");
    return detail::checked_add(detail::checked_mul((Nat{1} << jmax) - 1, 64), jmin);
}

struct HmModel {
    std::string name;
    HmRule rule = HmRule::Identity;
    Nat constant = 0;
    int declared_case = 5;
    std::vector<Nat> H; // block-disjoint, ascending
    std::map<Nat, Label> table;
    std::string assumption;

    Label label(Nat x) const {
        if (auto it = table.find(x); it != table.end()) return it->second;
        switch (rule) {
        case HmRule::Constant: return constant;
        case HmRule::MinSupport: return min_support(x);
        case HmRule::MaxSupport: return max_support(x);
        case HmRule::MinMax: return min_max_label(x);
        case HmRule::Identity: return x;
        }
        return std::nullopt;
    }
};

// The powers 2^from, 2^{from+1}, ... that fit below 2^63.
inline std::vector<Nat> powers_from(Nat from) {
    std::vector<Nat> h;
    for (Nat e = from; e < 63; ++e) h.push_back(Nat{1} << e);
    return h;
}

struct HindmanScenario {
    std::string name;
    Nat horizon = Nat{1} << 21;
    std::size_t stages = 10;
    std::size_t verify_prefix = 8; // canonical form re-checked on FS of this many H-terms
    std::vector<HmModel> models;
};

namespace detail {

// Sums with the given largest summand h, over previous anchors.
inline std::vector<Nat> max_anchored(const std::vector<Nat>& prev, Nat h) {
    std::vector<Nat> out{h};
    for (Nat s : fs(prev)) out.push_back(detail::checked_add(s, h));
    return sorted_unique(out);
}

// Sums with the given smallest summand anchors[b], over later anchors.
inline std::vector<Nat> min_anchored(const std::vector<Nat>& anchors, std::size_t b) {
    std::vector<Nat> later(anchors.begin() + b + 1, anchors.end());
    return max_anchored(later, anchors[b]);
}

} // namespace detail

inline nlohmann::json run_hindman(const HindmanScenario& sc) {
    using nlohmann::json;
    json run = run_shell("hindman");
    run["scenario"] = sc.name;
    if (sc.models.empty()) throw std::invalid_argument("hindman scenario has no critical-node models");

    for (const auto& m : sc.models) {
        if (m.H.empty() || !block_disjoint(m.H)) throw std::invalid_argument("model " + m.name + ": H is empty or not block-disjoint");
        if (m.declared_case < 1 || m.declared_case > 5) throw std::invalid_argument("model " + m.name + ": declared case out of range");
        std::vector<Nat> prefix(m.H.begin(), m.H.begin() + std::min(sc.verify_prefix, m.H.size()));
        auto dom = fs(prefix);
        auto nu = [&](Nat x) { return induced_code(m.label(x)); };
        if (!hindman_case_holds(dom, nu, m.declared_case))
            throw std::invalid_argument("model " + m.name + ": declared case " + std::to_string(m.declared_case) + " fails on FS of the first " +
                                        std::to_string(prefix.size()) + " terms of H");
        run["assumptions"].push_back({{"model", m.name}, {"tag", "assumption"}, {"fact", m.assumption}});
        run["assumptions"].push_back({{"model", m.name}, {"tag", "derived"},
                                      {"fact", "declared case " + std::to_string(m.declared_case) + " verified on FS of " + std::to_string(prefix.size()) + " terms"}});
        if (m.declared_case == 1) {
            Label c = m.label(m.H.front());
            run["contradictions"].push_back(
                {{"model", m.name}, {"case", 1}, {"label", label_str(c)},
                 {"reason", c ? "constant label on an FS-set: that label class is H-positive, so the node would carry the label, not bottom"
                              : "constant bottom on an FS-set: the bottom class is H-positive, so the node is not critical"}});
        }
    }
    if (!run["contradictions"].empty()) {
        run["status"] = "contradiction";
        return run;
    }

    struct PerNode {
        std::vector<Nat> anchors;
        std::size_t next = 0; // index into H
        std::vector<std::pair<Nat, std::vector<Nat>>> D; // (k, D_k); case 2 filled at assembly
        std::vector<Nat> stage_of_anchor;
        std::vector<Nat> labels_c2;
    };
    std::map<Nat, PerNode> nodes;
    for (Nat k = 0; k < sc.stages; ++k) {
        auto [kk, i, b] = stage_index(k);
        const auto& m = sc.models[i % sc.models.size()];
        auto& st = nodes[i];
        const int cs = m.declared_case;
        Nat M = cs == 2 || cs == 3 ? pow2_nat(k) : cs == 4 ? detail::checked_mul(k + 1, pow2_nat(k)) : pow2_nat(detail::checked_mul(2, k));
        Nat prev_sum = 0;
        for (Nat a : st.anchors) prev_sum = detail::checked_add(prev_sum, a);

        std::optional<Nat> pick;
        std::vector<Nat> D;
        Label c2;
        for (; st.next < m.H.size(); ++st.next) {
            Nat h = m.H[st.next];
            if (h > sc.horizon || prev_sum >= sc.horizon - h) break;
            if (cs == 2) {
                Label l = m.label(h);
                if (l && *l > M) {
                    pick = h;
                    c2 = l;
                    break;
                }
                continue;
            }
            auto cand = detail::max_anchored(st.anchors, h);
            if (std::all_of(cand.begin(), cand.end(), [&](Nat x) { auto l = m.label(x); return l && *l > M; })) {
                pick = h;
                D = cand;
                break;
            }
        }
        if (!pick)
            throw HorizonExhausted("stage " + std::to_string(k) + " (model " + m.name + "): no anchor with labels above " + std::to_string(M) +
                                   " keeps FS below horizon " + std::to_string(sc.horizon));
        ++st.next;
        st.anchors.push_back(*pick);
        st.stage_of_anchor.push_back(k);

        std::vector<Nat> C;
        if (cs == 2) {
            C = {*c2};
            st.labels_c2.push_back(*c2);
        } else {
            for (Nat x : D) C.push_back(*m.label(x));
            C = sorted_unique(C);
        }
        Rational harm = harmonic_of_labels(C);
        CheckLog log;
        log.add("sum 1/(c+1) over C_k < 2^-k", harm < two_pow_neg(k), {{"sum", to_string(harm)}, {"bound", to_string(two_pow_neg(k))}});
        log.add("labels exceed threshold", C.empty() || C.front() > M, {{"threshold", M}});
        if (cs == 3) log.add("C_k singleton", C.size() == 1);
        if (cs == 4) log.add("|C_k| = b+1", C.size() == b + 1);
        if (cs == 5) log.add("|D_k| = 2^b", D.size() == pow2_nat(b));
        json entry = {{"k", k}, {"i", i}, {"b", b}, {"model", m.name}, {"case", cs}, {"threshold", M}, {"anchor", *pick}, {"C", C}, {"checks", log.json()}};
        if (cs != 2) {
            entry["D"] = D;
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
                auto D = detail::min_anchored(st.anchors, b);
                bool same = std::all_of(D.begin(), D.end(), [&](Nat x) { return m.label(x) == Label{st.labels_c2[b]}; });
                log.add("min-anchored D[" + std::to_string(i) + "," + std::to_string(b) + "] carries label c", same);
                st.D.push_back({st.stage_of_anchor[b], D});
            }
        }
        bool bottom_free = true;
        std::map<Nat, int> hits;
        for (const auto& [k, D] : st.D)
            for (Nat x : D) {
                bottom_free = bottom_free && m.label(x).has_value();
                ++hits[x];
            }
        auto expect = fs(st.anchors);
        bool exact = hits.size() == expect.size() &&
                     std::all_of(expect.begin(), expect.end(), [&](Nat x) { auto it = hits.find(x); return it != hits.end() && it->second == 1; });
        log.add("D[" + std::to_string(i) + "] bottom-free", bottom_free);
        log.add("D[" + std::to_string(i) + ",b] pairwise disjoint", std::all_of(hits.begin(), hits.end(), [](const auto& e) { return e.second == 1; }));
        log.add("union of D[" + std::to_string(i) + ",b] = FS(anchors), each once", exact, {{"anchors", st.anchors.size()}, {"sums", expect.size()}});
        json ds = json::array();
        for (const auto& [k, D] : st.D) ds.push_back({{"k", k}, {"D", D}});
        Di.push_back({{"i", i}, {"anchors", st.anchors}, {"families", ds}, {"certificate", "fs-structure"}});
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
