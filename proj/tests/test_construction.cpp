#include "katetov/construction.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace katetov;

namespace {
// Independent hand-rolled greedy rule on plain rationals, for small depths.
struct Small {
    std::vector<std::pair<Nat, Nat>> blocks; // [a, b)
    std::vector<Rational> r;
};
Small reference_greedy(std::size_t depth) {
    Small s;
    s.blocks.push_back({0, 1});
    s.r.push_back(1);
    for (std::size_t n = 0;; ++n) {
        Nat len = s.blocks[n].second - s.blocks[n].first;
        Rational a = s.r[n] / 2, b = Rational(1, len) / Rational(Nat{1} << (n + 1));
        s.r.push_back(a < b ? a : b);
        if (n + 1 == depth) break;
        Rational need = Rational(s.blocks[n].second) / s.r.back();
        BigNat ceil = (need.get_num() + need.get_den() - 1) / need.get_den();
        s.blocks.push_back({s.blocks[n].second, s.blocks[n].second + to_nat(ceil)});
    }
    return s;
}

std::shared_ptr<const PartitionData> greedy(std::size_t depth) { return std::make_shared<const PartitionData>(build_partition(depth)); }
} // namespace

TEST(BuildPartition, SmallValues) {
    auto p = build_partition(3);
    ASSERT_EQ(p.depth(), 3u);
    EXPECT_EQ(p.start[0], 0);
    EXPECT_EQ(p.length[0], 1);
    EXPECT_EQ(p.start[1], 1);
    EXPECT_EQ(p.end(1), 3);
    EXPECT_EQ(p.start[2], 3);
    EXPECT_EQ(p.end(2), 27);
    EXPECT_EQ(p.r[0], 1);
    EXPECT_EQ(p.r[1], make_rational(1, 2));
    EXPECT_EQ(p.r[2], make_rational(1, 8));
    EXPECT_EQ(p.r[3], make_rational(1, 192));
    EXPECT_EQ(Rational(p.length[2]) * p.r[3], make_rational(1, 8));
}

TEST(BuildPartition, AgreesWithReferenceRule) {
    for (std::size_t depth = 1; depth <= 6; ++depth) {
        auto p = build_partition(depth);
        auto s = reference_greedy(depth);
        ASSERT_EQ(p.depth(), s.blocks.size());
        for (std::size_t n = 0; n < depth; ++n) {
            EXPECT_EQ(p.start[n], s.blocks[n].first);
            EXPECT_EQ(p.end(n), s.blocks[n].second);
        }
        for (std::size_t n = 0; n <= depth; ++n) EXPECT_EQ(p.r[n], s.r[n]);
    }
}

TEST(VerifyPartition, GreedyPasses) {
    for (std::size_t depth : {1u, 2u, 5u, 12u}) {
        auto rep = verify_partition(build_partition(depth));
        EXPECT_TRUE(rep.pass) << depth;
        for (const auto& c : rep.checks)
            if (c.slack) EXPECT_GE(*c.slack, 0);
    }
}

TEST(VerifyPartition, DepthOneIsVacuous) {
    PartitionData p;
    p.start = {0};
    p.length = {1};
    p.r = {1, make_rational(1, 2)};
    EXPECT_TRUE(verify_partition(p).pass);
}

TEST(VerifyPartition, TamperedRationalFails) {
    auto p = build_partition(3);
    p.r[2] = 1;
    auto rep = verify_partition(p);
    EXPECT_FALSE(rep.pass);
    bool cond2_at_1 = false, desc_fail = false;
    for (const auto& c : rep.checks) {
        if (c.condition == "2" && c.index == 1) {
            cond2_at_1 = !c.pass;
            EXPECT_EQ(*c.slack, make_rational(1, 4) - 2);
        }
        if (c.condition == "descending" && !c.pass) desc_fail = true;
    }
    EXPECT_TRUE(cond2_at_1);
    EXPECT_TRUE(desc_fail);
}

TEST(VerifyPartition, StructuralErrors) {
    auto p = build_partition(3);
    p.start[2] += 1;
    EXPECT_THROW(verify_partition(p), StructuralError);
    auto q = build_partition(3);
    q.r.pop_back();
    EXPECT_THROW(verify_partition(q), StructuralError);
}

TEST(PartitionJson, RoundTrip) {
    auto p = build_partition(6);
    auto j = p.to_json();
    EXPECT_EQ(j["intervals"][2]["end"], "27");
    EXPECT_EQ(j["rationals"][3], "1/192");
    auto q = PartitionData::from_json(j);
    EXPECT_EQ(q.start, p.start);
    EXPECT_EQ(q.length, p.length);
    EXPECT_EQ(q.r, p.r);
    j["rationals"][1] = "2/4";
    EXPECT_THROW(PartitionData::from_json(j), std::invalid_argument);
}

TEST(WeightFn, Examples) {
    auto p = greedy(4);
    auto w0 = weight_fn(DescribedSet::empty(), p);
    EXPECT_EQ(w0(0), 1);
    EXPECT_EQ(w0(1), make_rational(1, 2));
    EXPECT_EQ(w0(3), make_rational(1, 8));
    auto w1 = weight_fn(DescribedSet::finite({1}), p);
    EXPECT_EQ(w1(1), make_rational(1, 8));
    EXPECT_EQ(w1(0), 1);
    EXPECT_THROW(w0(to_nat(p->end(3))), HorizonExceeded);
    EXPECT_EQ(w0.divergence, Divergence::IntervalBlock);
    EXPECT_EQ(weight_fn(DescribedSet::omega(), p).divergence, Divergence::None);
}

TEST(WeightFn, FullIndexSetStaysBelowOne) {
    auto p = build_partition(12);
    auto s = DescribedSet::omega();
    for (std::size_t n = 1; n < p.depth(); ++n) EXPECT_LT(weight_below(s, p, p.end(n)), 1);
    // direct summation agrees on a short prefix
    auto w = weight_fn(s, std::make_shared<const PartitionData>(p));
    Rational direct = 0;
    for (Nat m = 0; m < 200; ++m) direct += w(m);
    EXPECT_EQ(direct, weight_below(s, p, 200));
}

TEST(WeightFn, CoInfiniteIndexSetGrows) {
    auto p = build_partition(10);
    auto s = evens(); // odd blocks unweighted
    for (std::size_t n = 2; n < p.depth(); ++n) {
        Nat outside = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (!s.contains(j)) ++outside;
        // each block j outside S with j >= 1 contributes r_j |I_j| >= |I_<j| >= 1
        EXPECT_GE(weight_below(s, p, p.start[n]), Rational(outside));
    }
}

TEST(WeightFn, NestedSetsGiveOrderedWeights) {
    auto p = greedy(6);
    std::mt19937_64 rng(19);
    for (int t = 0; t < 30; ++t) {
        std::vector<Nat> pv, qv;
        for (Nat n = 0; n < 6; ++n) {
            bool inp = rng() % 2;
            if (inp) pv.push_back(n);
            if (inp || rng() % 2) qv.push_back(n);
        }
        auto wp = weight_fn(DescribedSet::finite(pv), p), wq = weight_fn(DescribedSet::finite(qv), p);
        for (Nat m = 0; m < 400; ++m) EXPECT_LE(wq(m), wp(m));
    }
}

TEST(SumIdeal, Descriptors) {
    auto p = greedy(5);
    auto empty = sum_ideal_of(DescribedSet::empty(), p);
    EXPECT_EQ(empty.weight->divergence, Divergence::IntervalBlock);
    EXPECT_EQ(membership(empty, DescribedSet::omega(), 50).value, Value::Out);
    auto full = sum_ideal_of(DescribedSet::omega(), p);
    for (auto s : {DescribedSet::omega(), evens(), DescribedSet::fs_closure({1, 2, 4})})
        EXPECT_EQ(membership(full, s, 50).value, Value::In);
    EXPECT_EQ(membership(sum_ideal_of(evens(), p), DescribedSet::finite({4, 9}), 50).value, Value::In);
    EXPECT_EQ(empty.spec["kind"], "sum-s");
}
