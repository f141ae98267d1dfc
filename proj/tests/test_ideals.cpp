#include "katetov/construction.hpp"
#include "katetov/ideals.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace katetov;

namespace {
IdealDescriptor ideal(IdealKind k) { return IdealDescriptor::simple(k); }

// Independent subset-sum enumeration via bitmasks.
std::vector<Nat> subset_sums(const std::vector<Nat>& b) {
    std::vector<Nat> out;
    for (Nat mask = 1; mask < (Nat{1} << b.size()); ++mask) {
        Nat s = 0;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (mask >> i & 1) s += b[i];
        out.push_back(s);
    }
    return sorted_unique(out);
}
} // namespace

TEST(Weights, Examples) {
    auto h = harmonic_weight();
    EXPECT_EQ(weight_of(h, {0, 1, 3}), make_rational(7, 4));
    EXPECT_EQ(weight_of(h, {}), 0);
    auto p = std::make_shared<const PartitionData>(build_partition(3));
    EXPECT_EQ(weight_of(weight_fn(DescribedSet::empty(), p), {1, 2}), 1);
}

TEST(Weights, FinitelyAdditive) {
    std::mt19937_64 rng(11);
    auto h = harmonic_weight();
    for (int t = 0; t < 200; ++t) {
        std::vector<Nat> left, right, all;
        for (Nat x = 0; x < 60; ++x) {
            if (rng() % 3 == 0) continue;
            all.push_back(x);
            (rng() % 2 ? left : right).push_back(x);
        }
        EXPECT_EQ(weight_of(h, left) + weight_of(h, right), weight_of(h, all));
    }
}

TEST(Membership, Examples) {
    EXPECT_EQ(membership(ideal(IdealKind::SumHarmonic), DescribedSet::finite({5, 7}), 100).value, Value::In);
    auto co = membership(ideal(IdealKind::SumHarmonic), DescribedSet::cofinite({0, 1}), 100);
    EXPECT_EQ(co.value, Value::Out);
    EXPECT_EQ(co.evidence, "harmonic-divergence");
    auto am = membership(ideal(IdealKind::Diff), modular_set(3), 100);
    EXPECT_EQ(am.value, Value::In);
    EXPECT_EQ(am.evidence, "pigeonhole-mod-m");
}

TEST(Membership, EveryKindContainsFinite) {
    for (auto k : {IdealKind::Fin, IdealKind::SumHarmonic, IdealKind::Den0, IdealKind::Diff, IdealKind::Hindman, IdealKind::Ramsey, IdealKind::PowerSet}) {
        auto v = membership(ideal(k), DescribedSet::finite({1, 4, 9}), 50);
        EXPECT_EQ(v.value, Value::In);
        EXPECT_FALSE(v.evidence.empty());
    }
}

TEST(Membership, ShapeDecisions) {
    EXPECT_EQ(membership(ideal(IdealKind::Den0), evens(), 10).value, Value::Out);
    EXPECT_EQ(membership(ideal(IdealKind::Fin), odds(), 10).value, Value::Out);
    EXPECT_EQ(membership(ideal(IdealKind::Hindman), odds(), 10).value, Value::In);
    EXPECT_EQ(membership(ideal(IdealKind::Hindman), evens(), 10).value, Value::Out);
    EXPECT_EQ(membership(ideal(IdealKind::Diff), DescribedSet::ap(2, 4), 10).value, Value::In);
    EXPECT_EQ(membership(ideal(IdealKind::Diff), DescribedSet::ap(8, 4), 10).value, Value::Out);
    EXPECT_EQ(membership(ideal(IdealKind::Ramsey), DescribedSet::cofinite({}), 10).value, Value::Out);
    EXPECT_EQ(membership(ideal(IdealKind::PowerSet), DescribedSet::cofinite({}), 10).value, Value::In);
    // union of two 𝒟-sets stays in 𝒟
    EXPECT_EQ(membership(ideal(IdealKind::Diff), DescribedSet::union_of({modular_set(3), DescribedSet::finite({3})}), 10).value, Value::In);
}

TEST(Membership, UnknownCarriesHorizonData) {
    auto s = DescribedSet::intersection_of({modular_set(2), DescribedSet::complement_of(DescribedSet::ap(1, 4))});
    auto v = membership(ideal(IdealKind::SumHarmonic), s, 12);
    EXPECT_EQ(v.value, Value::Unknown);
    // s ∩ [0,12) = {3, 7, 11}: 1/4 + 1/8 + 1/12
    EXPECT_EQ(v.detail["partial_weight"], to_string(make_rational(11, 24)));
    auto d = membership(ideal(IdealKind::Den0), s, 12);
    EXPECT_EQ(d.detail["density"], to_string(make_rational(3, 12)));
}

TEST(Membership, VerdictsStableAcrossHorizons) {
    std::vector<DescribedSet> sets = {DescribedSet::finite({3}), evens(), odds(), modular_set(5), DescribedSet::cofinite({2}),
                                      DescribedSet::intersection_of({modular_set(2), DescribedSet::complement_of(DescribedSet::ap(1, 4))})};
    for (auto k : {IdealKind::Fin, IdealKind::SumHarmonic, IdealKind::Den0, IdealKind::Diff, IdealKind::Hindman, IdealKind::Ramsey})
        for (const auto& s : sets) {
            auto first = membership(ideal(k), s, 4).value;
            for (Nat h : {8u, 64u, 300u}) {
                auto later = membership(ideal(k), s, h).value;
                if (first != Value::Unknown) EXPECT_EQ(later, first);
            }
        }
}

TEST(Positivity, Examples) {
    EXPECT_EQ(is_positive(ideal(IdealKind::SumHarmonic), evens(), 100).value, Value::In);
    EXPECT_EQ(is_positive(ideal(IdealKind::Den0), DescribedSet::finite({1, 2}), 100).value, Value::Out);
    EXPECT_EQ(is_positive(ideal(IdealKind::Diff), DescribedSet::fs_closure({1, 2, 4}), 100).value, Value::Out);
}

TEST(WitnessSearch, Hindman) {
    // FS({1,2,3}) = [1,6] already fits inside [1,7], and {1,2,3} precedes {1,2,4}.
    EXPECT_EQ(hindman_witness_search(DescribedSet::intervals({{1, 8}}), 3, 8), (std::vector<Nat>{1, 2, 3}));
    EXPECT_EQ(subset_sums({1, 2, 3}), (std::vector<Nat>{1, 2, 3, 4, 5, 6}));
    EXPECT_FALSE(hindman_witness_search(odds(), 2, 200));
    EXPECT_FALSE(hindman_witness_search(DescribedSet::empty(), 1, 50));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        std::vector<Nat> xs;
        for (Nat x = 1; x < 40; ++x)
            if (rng() % 4) xs.push_back(x);
        auto a = DescribedSet::finite(xs);
        if (auto b = hindman_witness_search(a, 3, 40)) {
            for (Nat s : subset_sums(*b)) EXPECT_TRUE(a.contains(s));
        }
    }
}

TEST(WitnessSearch, Ramsey) {
    EXPECT_EQ(ramsey_witness_search(DescribedSet::omega(), 4, 4), (std::vector<Nat>{0, 1, 2, 3}));
    std::vector<Nat> mixed, even_pairs;
    for (Nat a = 0; a < 12; ++a)
        for (Nat b = a + 1; b < 12; ++b) {
            if ((a + b) % 2) mixed.push_back(code_unordered(a, b));
            if (a % 2 == 0 && b % 2 == 0 && b < 10) even_pairs.push_back(code_unordered(a, b));
        }
    EXPECT_FALSE(ramsey_witness_search(DescribedSet::finite(mixed), 3, 12));
    EXPECT_EQ(ramsey_witness_search(DescribedSet::finite(even_pairs), 3, 12), (std::vector<Nat>{0, 2, 4}));
}

TEST(Multiplicity, Tables) {
    EXPECT_EQ(diff_multiplicity({0, 1, 3}), (std::map<Nat, Nat>{{1, 1}, {2, 1}, {3, 1}}));
    EXPECT_EQ(diff_multiplicity({0, 1, 2, 3}), (std::map<Nat, Nat>{{1, 3}, {2, 2}, {3, 1}}));
    EXPECT_TRUE(diff_multiplicity({}).empty());
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        std::vector<Nat> a;
        for (Nat x = 0; x < 30; ++x)
            if (rng() % 2) a.push_back(x);
        Nat total = 0;
        for (auto [d, c] : diff_multiplicity(a)) total += c;
        EXPECT_EQ(total, a.size() * (a.size() - (a.empty() ? 0 : 1)) / 2);
    }
}

TEST(Density, Examples) {
    EXPECT_EQ(density_at(evens(), 10), make_rational(3, 5));
    EXPECT_EQ(density_at(DescribedSet::finite({0}), 100), make_rational(1, 100));
    for (Nat n : {1u, 7u, 40u}) EXPECT_EQ(density_at(DescribedSet::omega(), n), make_rational(n + 1, n));
}

TEST(Pigeonhole, EveryLargeSubsetHasCongruentPair) {
    // Exhaustive over (m+1)-subsets of [0,40): a prefix that already has a
    // congruent pair covers all its completions, so only collision-free
    // prefixes are extended.
    for (Nat m = 2; m <= 8; ++m) {
        Nat escapes = 0;
        std::vector<Nat> pick;
        std::function<void(Nat, unsigned)> walk = [&](Nat from, unsigned residues) {
            if (pick.size() == m + 1) {
                ++escapes;
                return;
            }
            for (Nat x = from; x < 40; ++x) {
                unsigned bit = 1u << (x % m);
                if (residues & bit) continue; // collides: every completion collides
                pick.push_back(x);
                walk(x + 1, residues | bit);
                pick.pop_back();
            }
        };
        walk(0, 0);
        EXPECT_EQ(escapes, 0u) << "m=" << m;
    }
}
