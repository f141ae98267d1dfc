#pragma once
// The Sum_P vs Sum_Q diagonalization (P ⊄* Q): coarse three-colouring of each
// block I_n under a critical node, extraction of F_n / G_n / E_n, and the
// stage loop building C_k, D_k, V_k with exact weight checks.

#include "katetov/diag_common.hpp"
#include "katetov/spans.hpp"

#include <set>

namespace katetov {

using BigLabel = std::optional<BigNat>; // nullopt is ⊥

enum class PwBase { Identity, PrevBlockMax, Bottom, Constant };

inline const char* pw_base_name(PwBase b) {
    switch (b) {
    case PwBase::Identity: return "identity";
    case PwBase::PrevBlockMax: return "prev-block-max";
    case PwBase::Bottom: return "bottom";
    case PwBase::Constant: return "constant";
    }
    return "?";
}

// Successor labels ν(τ⌢x) of one critical node: a base rule plus explicit
// overrides. prev-block-max labels every x ∈ I_n by max I_{n-1} (⊥ on I_0).
struct PwModel {
    std::string name;
    PwBase base = PwBase::Identity;
    BigNat constant = 0;
    std::map<BigNat, BigLabel> table;
    std::string assumption;

    bool finitely_many_labels() const { return base == PwBase::Bottom || base == PwBase::Constant; }

    BigLabel base_label(const PartitionData& p, std::size_t n, const BigNat& x) const {
        switch (base) {
        case PwBase::Identity: return x;
        case PwBase::PrevBlockMax: return n == 0 ? BigLabel{} : BigLabel{p.start[n] - 1};
        case PwBase::Bottom: return std::nullopt;
        case PwBase::Constant: return constant;
        }
        return std::nullopt;
    }

    BigLabel label(const PartitionData& p, const BigNat& x) const {
        if (auto it = table.find(x); it != table.end()) return it->second;
        auto n = p.block_of(x);
        if (!n) throw HorizonExceeded("successor beyond the partition");
        return base_label(p, *n, x);
    }
};

// 0 for ⊥, 1 for a label in I_{<n}, 2 for a label in I_{≥n}.
inline int colour_of(const PartitionData& p, std::size_t n, const BigLabel& l) {
    if (!l) return 0;
    return *l < p.start[n] ? 1 : 2;
}

inline int coarse_colour(const PwModel& m, const PartitionData& p, std::size_t n, const BigNat& x) {
    if (p.block_of(x) != n) throw std::invalid_argument("coarse_colour: x is not in I_n");
    return colour_of(p, n, m.label(p, x));
}

struct LabelClass {
    SpanSet xs;
    BigLabel label;        // unused when identity
    bool identity = false; // label(x) = x on xs
    int colour = 0;
};

inline std::vector<LabelClass> block_classes(const PwModel& m, const PartitionData& p, std::size_t n) {
    std::vector<LabelClass> out;
    SpanSet rest;
    BigNat at = p.start[n];
    const BigNat top = p.end(n);
    for (auto it = m.table.lower_bound(p.start[n]); it != m.table.end() && it->first < top; ++it) {
        rest.append(at, it->first);
        out.push_back({SpanSet::point(it->first), it->second, false, colour_of(p, n, it->second)});
        at = it->first + 1;
    }
    rest.append(at, top);
    if (!rest.empty()) {
        if (m.base == PwBase::Identity) out.push_back({rest, std::nullopt, true, 2});
        else {
            BigLabel l = m.base_label(p, n, p.start[n]);
            out.push_back({rest, l, false, colour_of(p, n, l)});
        }
    }
    return out;
}

struct Extraction {
    std::size_t n = 0;
    int colour = 0; // t_n
    SpanSet F;
    std::vector<LabelClass> classes; // the classes making up F
    BigNat block_size;

    // E_n: the labels carried by F_n.
    SpanSet labels() const {
        SpanSet e;
        for (const auto& c : classes) {
            if (c.identity) e = SpanSet::unite(e, c.xs);
            else if (c.label) e = SpanSet::unite(e, SpanSet::point(*c.label));
        }
        return e;
    }

    // G_n: the largest single-label class inside F_n (least label on ties).
    std::pair<SpanSet, BigLabel> largest_label_class() const {
        std::map<BigNat, SpanSet> by_label;
        for (const auto& c : classes) {
            if (c.identity || !c.label) continue;
            by_label[*c.label] = SpanSet::unite(by_label[*c.label], c.xs);
        }
        std::pair<SpanSet, BigLabel> best;
        BigNat best_size = -1;
        for (auto& [l, xs] : by_label) {
            BigNat s = xs.size();
            if (s > best_size) {
                best_size = s;
                best = {xs, l};
            }
        }
        return best;
    }
};

// Largest colour class of I_n; least colour on ties.
inline Extraction extract_Fn(const PwModel& m, const PartitionData& p, std::size_t n) {
    if (n >= p.depth()) throw HorizonExceeded("extract_Fn: block beyond partition depth");
    auto classes = block_classes(m, p, n);
    BigNat count[3] = {0, 0, 0};
    for (const auto& c : classes) count[c.colour] += c.xs.size();
    int t = 0;
    for (int c = 1; c < 3; ++c)
        if (count[c] > count[t]) t = c;
    Extraction e;
    e.n = n;
    e.colour = t;
    e.block_size = p.length[n];
    for (auto& c : classes)
        if (c.colour == t) {
            e.F = SpanSet::unite(e.F, c.xs);
            e.classes.push_back(std::move(c));
        }
    return e;
}

enum class PwCase { A, B, C }; // t = 0, 1, 2

inline const char* pw_case_name(PwCase c) { return c == PwCase::A ? "2a" : c == PwCase::B ? "2b" : "2c"; }

struct PwfinScenario {
    std::string name;
    DescribedSet P = DescribedSet::omega();
    DescribedSet Q = DescribedSet::empty();
    std::size_t depth = 12;
    std::size_t stages = 6;
    std::vector<PwModel> models;
};

namespace detail {

struct PwModelCase {
    PwCase kase = PwCase::A;
    std::vector<std::size_t> H; // indices in P∖Q with t_n = t
    std::vector<std::size_t> colour_counts;
};

inline PwModelCase pw_model_case(const PwModel& m, const PwfinScenario& sc, const PartitionData& p) {
    std::vector<std::size_t> by[3];
    for (std::size_t n = 0; n < p.depth(); ++n)
        if (sc.P.contains(n) && !sc.Q.contains(n)) by[extract_Fn(m, p, n).colour].push_back(n);
    int t = 0;
    for (int c = 1; c < 3; ++c)
        if (by[c].size() > by[t].size()) t = c;
    if (by[t].empty()) throw StageStarvation("P \\ Q has no index below the partition depth");
    return {static_cast<PwCase>(t), by[t], {by[0].size(), by[1].size(), by[2].size()}};
}

} // namespace detail

inline nlohmann::json run_pwfin(const PwfinScenario& sc, const PartitionData& p) {
    using nlohmann::json;
    json run = run_shell("pwfin");
    run["scenario"] = sc.name;
    if (sc.models.empty()) throw std::invalid_argument("pwfin scenario has no critical-node models");
    if (p.depth() != sc.depth) throw std::invalid_argument("partition depth differs from the scenario");

    std::vector<detail::PwModelCase> cases;
    json models = json::array();
    for (std::size_t j = 0; j < sc.models.size(); ++j) {
        const auto& m = sc.models[j];
        cases.push_back(detail::pw_model_case(m, sc, p));
        const auto& mc = cases.back();
        models.push_back({{"model", m.name}, {"rule", pw_base_name(m.base)}, {"case", pw_case_name(mc.kase)},
                          {"H", mc.H}, {"colour_counts", mc.colour_counts}, {"finitely_many_labels", m.finitely_many_labels()}});
        run["assumptions"].push_back({{"model", m.name}, {"tag", "assumption"}, {"fact", m.assumption}});

        if (mc.kase == PwCase::A) {
            // The ⊥-successors of a critical node form a Sum_Q-null set, yet
            // each F_n (n ∈ H) inside it carries w_Q-weight at least 1/3.
            Rational total = 0;
            for (std::size_t n : mc.H) total += span_weight(extract_Fn(m, p, n).F, sc.Q, p);
            run["contradictions"].push_back({{"model", m.name}, {"case", "2a"},
                                             {"reason", "declared-null bottom class has w_Q weight growing without bound"},
                                             {"blocks", mc.H.size()}, {"wQ_tally", to_string(total)},
                                             {"lower_bound", to_string(make_rational(mc.H.size(), 3))},
                                             {"bound_holds", total >= make_rational(mc.H.size(), 3)}});
        } else if (mc.kase == PwCase::B && m.finitely_many_labels()) {
            // Finitely many labels c_n: some G[c] carries unbounded w_Q weight
            // while being a null label class of a critical node.
            std::map<BigNat, Rational> tally;
            for (std::size_t n : mc.H) {
                auto [g, c] = extract_Fn(m, p, n).largest_label_class();
                tally[*c] += span_weight(g, sc.Q, p);
            }
            auto heavy = std::max_element(tally.begin(), tally.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
            run["contradictions"].push_back({{"model", m.name}, {"case", "2b"},
                                             {"reason", "finitely many labels c_n; one label class carries unbounded w_Q weight"},
                                             {"labels", tally.size()}, {"heaviest_label", to_string(heavy->first)},
                                             {"wQ_tally", to_string(heavy->second)}});
        }
    }
    run["models"] = models;
    if (!run["contradictions"].empty()) {
        run["status"] = "contradiction";
        return run;
    }

    std::set<std::pair<Nat, std::size_t>> V;
    std::map<Nat, std::vector<std::pair<Nat, SpanSet>>> D_by_i; // i -> (k, D_k)
    SpanSet C_all;
    Rational stage_sum = 0;
    std::map<Nat, Rational> wQ_by_i;
    for (Nat k = 0; k < sc.stages; ++k) {
        auto [kk, i, b] = stage_index(k);
        const auto& m = sc.models[i % sc.models.size()];
        const auto& mc = cases[i % sc.models.size()];
        if (k >= p.depth()) throw StageStarvation("stage " + std::to_string(k) + " needs I_{<k} beyond the partition");
        std::optional<std::size_t> pick;
        SpanSet C, D;
        for (std::size_t n : mc.H) {
            if (V.count({i, n})) continue;
            if (mc.kase == PwCase::C) {
                if (n <= k) continue;
                auto e = extract_Fn(m, p, n);
                C = e.labels();
                D = e.F;
                pick = n;
                break;
            }
            auto [g, c] = extract_Fn(m, p, n).largest_label_class();
            if (*c < p.start[k]) continue; // freshness: label beyond max I_{<k}
            C = SpanSet::point(*c);
            D = g;
            pick = n;
            break;
        }
        if (!pick) throw StageStarvation("stage " + std::to_string(k) + ": no fresh index in H for model " + m.name + " below depth " + std::to_string(p.depth()));
        V.insert({i, *pick});
        Rational wP = span_weight(C, sc.P, p), wQ = span_weight(D, sc.Q, p);
        CheckLog log;
        log.add("wP(C_k) <= 2^-k", wP <= two_pow_neg(k), {{"wP_C", to_string(wP)}, {"bound", to_string(two_pow_neg(k))}});
        log.add("wQ(D_k) >= 1/3", wQ >= make_rational(1, 3), {{"wQ_D", to_string(wQ)}});
        if (mc.kase == PwCase::B) log.add("label fresh beyond I_<k", C.spans[0].first >= p.start[k]);
        else log.add("n > k", *pick > k);
        log.add("extraction |F_n| >= |I_n|/3", 3 * extract_Fn(m, p, *pick).F.size() >= p.length[*pick]);
        stage_sum += wP;
        wQ_by_i[i] += wQ;
        D_by_i[i].push_back({k, D});
        C_all = SpanSet::unite(C_all, C);
        run["stages"].push_back({{"k", k}, {"i", i}, {"b", b}, {"model", m.name}, {"case", pw_case_name(mc.kase)}, {"n", *pick},
                                 {"C", C.to_json()}, {"D", D.to_json()}, {"checks", log.json()}});
    }

    CheckLog log;
    for (const auto& [i, ds] : D_by_i)
        for (std::size_t a = 0; a < ds.size(); ++a)
            for (std::size_t c = a + 1; c < ds.size(); ++c)
                log.add("D disjoint for i=" + std::to_string(i), ds[a].second.disjoint(ds[c].second), {{"stages", {ds[a].first, ds[c].first}}});
    Rational wP_C = span_weight(C_all, sc.P, p), tail = geometric_tail(sc.stages);
    log.add("wP(C) <= sum of stage bounds", wP_C <= stage_sum);
    log.add("stage sum + tail <= 2", stage_sum + tail <= 2);
    json Di = json::array();
    for (const auto& [i, w] : wQ_by_i) {
        Rational floor = make_rational(D_by_i[i].size(), 3);
        log.add("wQ(D[" + std::to_string(i) + "]) tally", w >= floor);
        Di.push_back({{"i", i}, {"stages", D_by_i[i].size()}, {"wQ_tally", to_string(w)}, {"lower_bound", to_string(floor)},
                      {"certificate", "divergent-weight-tally"}});
    }
    run["assembled"] = {{"C", C_all.to_json()}, {"wP_C", to_string(wP_C)}, {"stage_sum", to_string(stage_sum)},
                        {"tail_bound", to_string(tail)}, {"total_bound", to_string(stage_sum + tail)}, {"D", Di}, {"checks", log.json()}};
    return run;
}

} // namespace katetov
