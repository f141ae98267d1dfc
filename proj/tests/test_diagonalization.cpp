#include "katetov/scenario.hpp"

#include <gtest/gtest.h>

using namespace katetov;
using nlohmann::json;

namespace {
const PartitionData& greedy6() {
    static const PartitionData p = build_partition(6);
    return p;
}

json run_named(const std::string& name, std::optional<std::size_t> stages = std::nullopt) { return run_scenario(load_scenario(name), stages); }

bool stage_checks_pass(const json& stage) {
    for (const auto& c : stage["checks"])
        if (!c["pass"].get<bool>()) return false;
    return true;
}

bool harmonic_sum_is(const std::vector<Nat>& xs, Rational expect) {
    Rational s = 0;
    for (Nat x : xs) s += harmonic_term(x);
    return s == expect;
}
} // namespace

TEST(StageIndex, FirstTen) {
    const std::pair<Nat, Nat> expect[] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
    for (Nat k = 0; k < 10; ++k) {
        auto s = stage_index(k);
        EXPECT_EQ(s.k, k);
        EXPECT_EQ(std::make_pair(s.i, s.b), expect[k]) << k;
    }
}

TEST(Pwfin, CoarseColour) {
    const auto& p = greedy6();
    ASSERT_EQ(p.start[2], 3);
    ASSERT_EQ(p.length[2], 24);
    PwModel m;
    m.table[BigNat(5)] = std::nullopt;   // x ∈ I_2, ⊥
    m.table[BigNat(6)] = BigNat(1);      // x ∈ I_2, label in I_1
    m.table[BigNat(2)] = BigNat(20);     // x ∈ I_1, label in I_2
    EXPECT_EQ(coarse_colour(m, p, 2, BigNat(5)), 0);
    EXPECT_EQ(coarse_colour(m, p, 2, BigNat(6)), 1);
    EXPECT_EQ(coarse_colour(m, p, 1, BigNat(2)), 2);
    EXPECT_THROW(coarse_colour(m, p, 1, BigNat(5)), std::invalid_argument);
}

TEST(Pwfin, ExtractAllBottom) {
    const auto& p = greedy6();
    PwModel m;
    m.base = PwBase::Bottom;
    auto e = extract_Fn(m, p, 3);
    EXPECT_EQ(e.colour, 0);
    EXPECT_EQ(e.F.size(), p.length[3]);
}

TEST(Pwfin, ExtractBalancedOnI2) {
    const auto& p = greedy6();
    PwModel m; // identity beyond the table, so colour 2 where untouched
    for (Nat j = 0; j < 24; ++j) {
        if (j % 3 == 0) m.table[BigNat(3 + j)] = std::nullopt;
        if (j % 3 == 1) m.table[BigNat(3 + j)] = BigNat(0);
    }
    auto e = extract_Fn(m, p, 2);
    EXPECT_EQ(e.F.size(), 8);
    EXPECT_EQ(e.colour, 0); // three-way tie goes to the least colour
    // block 2 outside Q = odds: w_Q(F) = 8 r_2 = 1
    auto Q = DescribedSet::ap(1, 2);
    EXPECT_EQ(p.r[2], make_rational(1, 8));
    EXPECT_EQ(span_weight(e.F, Q, p), 1);
}

TEST(Pwfin, Case2bFirstStageIsSingleton) {
    auto run = run_named("pw-2b", 2);
    ASSERT_EQ(run["status"], "ok");
    const auto& s0 = run["stages"][0];
    EXPECT_EQ(s0["case"], "2b");
    ASSERT_EQ(s0["C"].size(), 1u);
    EXPECT_EQ(parse_bignat(s0["C"][0][1]) - parse_bignat(s0["C"][0][0]), 1); // one label
    EXPECT_LE(parse_rational(s0["checks"][0]["detail"]["wP_C"]), 1);
    EXPECT_TRUE(stage_checks_pass(s0));
}

TEST(Pwfin, Case2cStagesUseLaterBlocks) {
    auto run = run_named("pwfin-case2c");
    ASSERT_EQ(run["status"], "ok");
    for (const auto& s : run["stages"]) {
        EXPECT_EQ(s["case"], "2c");
        EXPECT_GT(s["n"].get<Nat>(), s["k"].get<Nat>());
        Rational w = parse_rational(s["checks"][0]["detail"]["wP_C"]);
        EXPECT_LE(w, pow2_inv(s["n"].get<Nat>() + 1));
        EXPECT_LE(w, pow2_inv(s["k"].get<Nat>()));
    }
    EXPECT_TRUE(run_passes(run));
}

TEST(Pwfin, DisjointDForEachCriticalNode) {
    auto run = run_named("pw-2b");
    std::map<Nat, std::vector<SpanSet>> by_i;
    for (const auto& s : run["stages"]) {
        SpanSet d;
        for (const auto& iv : s["D"]) d.append(parse_bignat(iv[0]), parse_bignat(iv[1]));
        for (const auto& prev : by_i[s["i"].get<Nat>()]) EXPECT_TRUE(prev.disjoint(d));
        by_i[s["i"].get<Nat>()].push_back(d);
    }
}

TEST(Pwfin, AssembledBoundIsGeometric) {
    auto run = run_named("pw-2b");
    const auto& a = run["assembled"];
    EXPECT_LE(parse_rational(a["total_bound"]), 2);
    EXPECT_LE(parse_rational(a["wP_C"]), parse_rational(a["stage_sum"]));
}

TEST(Pwfin, FinitelyManyLabelsContradicts) {
    EXPECT_EQ(run_named("pwfin-case2a")["status"], "contradiction");
    EXPECT_EQ(run_named("pwfin-case2b-finite")["status"], "contradiction");
}

TEST(Posdiff, IdentityFirstStage) {
    PosdiffScenario sc;
    sc.horizon = 100;
    sc.stages = 1;
    sc.models.push_back({"id", PdBase::Identity, 0, {}, "labels are the successors themselves"});
    auto run = run_posdiff(sc);
    const auto& s0 = run["stages"][0];
    EXPECT_EQ(s0["n_k"], 0);
    EXPECT_EQ(s0["m_k"], 1);
    EXPECT_EQ(s0["residue"], 0);
    EXPECT_EQ(s0["D"].get<std::vector<Nat>>(), (std::vector<Nat>{2, 3, 4, 5, 6}));
    EXPECT_TRUE(harmonic_sum_is({2, 3, 4, 5}, make_rational(19, 20)));
    EXPECT_TRUE(harmonic_sum_is({2, 3, 4, 5, 6}, make_rational(153, 140)));
    EXPECT_EQ(s0["checks"][0]["detail"]["weight"], "153/140");
}

TEST(Posdiff, IdentityStarvesAtHorizon) {
    EXPECT_THROW(run_named("posdiff-identity"), HorizonExhausted);
}

TEST(Posdiff, StrongSparsenessAcrossStages) {
    auto run = run_named("posdiff-blocks");
    ASSERT_GE(run["stages"].size(), 2u);
    std::vector<Nat> C;
    for (int k = 0; k < 2; ++k)
        for (Nat c : run["stages"][k]["C"].get<std::vector<Nat>>()) C.push_back(c);
    for (auto [d, mult] : diff_multiplicity(sorted_unique(C))) EXPECT_EQ(mult, 1u) << d;
    EXPECT_TRUE(run_passes(run));
    EXPECT_LT(parse_rational(run["assembled"]["harmonic_partial_sum_C"]), 2);
}

TEST(Posdiff, FinitelyManyLabelsContradicts) {
    auto run = run_named("posdiff-finite");
    EXPECT_EQ(run["status"], "contradiction");
    EXPECT_FALSE(run["contradictions"][0]["classes"].empty());
}

TEST(Hindman, Case4Arithmetic) {
    // (b+1)/((k+1) 2^k) <= 2^-k whenever b <= k
    for (Nat k = 0; k < 12; ++k)
        for (Nat b = 0; b <= k; ++b) EXPECT_LE(make_rational(b + 1, (k + 1) << k), pow2_inv(k));
    EXPECT_EQ(make_rational(3, 4 * 8), make_rational(3, 32));
    EXPECT_LT(make_rational(3, 32), make_rational(1, 8));
}

TEST(Hindman, Case2SingletonAboveThreshold) {
    auto run = run_named("hindman-case2");
    ASSERT_EQ(run["status"], "ok");
    for (const auto& s : run["stages"]) {
        ASSERT_EQ(s["C"].size(), 1u);
        EXPECT_GT(s["C"][0].get<Nat>(), Nat{1} << s["k"].get<Nat>());
    }
    EXPECT_TRUE(run_passes(run));
}

TEST(Hindman, Case5ThreeAnchorsGiveEightSums) {
    auto run = run_named("hindman-case5");
    bool seen = false;
    for (const auto& s : run["stages"])
        if (s["b"] == 3) {
            EXPECT_EQ(s["D"].size(), 8u);
            seen = true;
        }
    EXPECT_TRUE(seen);
}

TEST(Hindman, Case3UnionIsFS) {
    auto run = run_named("hindman-case3");
    for (const auto& d : run["assembled"]["D"]) {
        std::vector<Nat> all;
        for (const auto& f : d["families"])
            for (Nat x : f["D"].get<std::vector<Nat>>()) all.push_back(x);
        std::sort(all.begin(), all.end());
        EXPECT_EQ(all, fs(d["anchors"].get<std::vector<Nat>>()));
    }
}

TEST(Hindman, ConstantLabelContradicts) {
    auto run = run_named("hindman-case1");
    EXPECT_EQ(run["status"], "contradiction");
    EXPECT_TRUE(run["stages"].empty());
}

TEST(Hindman, UndeclaredCaseRejected) {
    HindmanScenario sc;
    sc.stages = 2;
    sc.models.push_back({"m", HmRule::Identity, 0, 3, powers_from(0), {}, "wrongly declared"});
    EXPECT_THROW(run_hindman(sc), std::invalid_argument);
}

TEST(Ramsey, Case2PairsShareMinAndLabel) {
    auto run = run_named("ramsey-case2");
    ASSERT_EQ(run["status"], "ok");
    for (const auto& s : run["stages"]) EXPECT_EQ(s["C"].size(), 1u);
    for (const auto& d : run["assembled"]["D"])
        for (const auto& f : d["families"]) {
            std::set<Nat> mins;
            for (const auto& e : f["D"]) mins.insert(e[0].get<Nat>());
            EXPECT_LE(mins.size(), 1u);
        }
    EXPECT_TRUE(run_passes(run));
}

TEST(Ramsey, Case4Arithmetic) { EXPECT_EQ(make_rational(3, 24), make_rational(1, 8)); }

TEST(Ramsey, FourAnchorsSixPairsOnce) {
    auto run = run_named("ramsey-case3");
    bool seen = false;
    for (const auto& d : run["assembled"]["D"]) {
        auto t = d["anchors"].get<std::vector<Nat>>();
        if (t.size() != 4) continue;
        seen = true;
        std::map<Edge, int> hits;
        for (const auto& f : d["families"])
            for (const auto& e : f["D"]) ++hits[{e[0].get<Nat>(), e[1].get<Nat>()}];
        EXPECT_EQ(hits.size(), 6u);
        for (auto [e, h] : hits) EXPECT_EQ(h, 1);
    }
    EXPECT_TRUE(seen);
}

TEST(Ramsey, ConstantLabelContradicts) { EXPECT_EQ(run_named("ramsey-case1")["status"], "contradiction"); }

TEST(Collision, BundledScenarioCollides) {
    auto run = run_named("collision-posdiff");
    const auto& rep = run["report"];
    ASSERT_EQ(rep["status"], "collision");
    EXPECT_TRUE(rep["label_in_C"].get<bool>());
    EXPECT_FALSE(rep["path"].empty());
}

namespace {
LabelledTree fan_tree(const DescribedSet& succ, Nat below) {
    FiniteTree t;
    CoherentMap m;
    for (Nat x : succ.enumerate_upto(below)) {
        t.add_path(FiniteString{}.child(x));
        m = extend_coherent(m, FiniteString{}.child(x), 7);
    }
    t.described.insert_or_assign(FiniteString{}, succ);
    return compute_labels(t, m, PositivityOracle(IdealDescriptor::simple(IdealKind::SumHarmonic)), below);
}
} // namespace

TEST(Collision, TreeAvoidingDIsInconclusive) {
    auto lt = fan_tree(DescribedSet::cofinite({}), 20);
    auto rep = collision_check(lt, IdealDescriptor::simple(IdealKind::SumHarmonic), 20, FiniteString{}, {7}, {25, 30});
    EXPECT_EQ(rep["status"], "inconclusive");
}

TEST(Collision, FiniteSuccessorSetRejected) {
    auto lt = fan_tree(DescribedSet::finite({1, 2, 3}), 20);
    auto rep = collision_check(lt, IdealDescriptor::simple(IdealKind::SumHarmonic), 20, FiniteString{}, {7}, {1});
    EXPECT_EQ(rep["status"], "rejected");
}
