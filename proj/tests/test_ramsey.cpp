#include "katetov/ramsey.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace katetov;

TEST(Fs, Examples) {
    EXPECT_EQ(fs({1, 2}), (std::vector<Nat>{1, 2, 3}));
    EXPECT_EQ(fs({1, 2, 4}), (std::vector<Nat>{1, 2, 3, 4, 5, 6, 7}));
    EXPECT_THROW(fs({2, 2}), std::invalid_argument);
}

TEST(Fs, BoundsAndSize) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 200; ++t) {
        std::set<Nat> a;
        std::size_t k = 1 + rng() % 8;
        while (a.size() < k) a.insert(1 + rng() % 100);
        std::vector<Nat> v(a.begin(), a.end());
        auto s = fs(v);
        Nat total = 0;
        for (Nat x : v) total += x;
        EXPECT_EQ(s.front(), v.front());
        EXPECT_EQ(s.back(), total);
        EXPECT_LE(s.size(), (std::size_t{1} << v.size()) - 1);
    }
}

TEST(Support, Examples) {
    EXPECT_EQ(support(13), (std::vector<Nat>{1, 4, 8}));
    EXPECT_EQ(support(16), (std::vector<Nat>{16}));
    EXPECT_THROW(support(0), std::invalid_argument);
    for (Nat x = 1; x <= 10000; ++x) {
        Nat s = 0;
        for (Nat p : support(x)) s += p;
        ASSERT_EQ(s, x);
        EXPECT_EQ(min_support(x), support(x).front());
        EXPECT_EQ(max_support(x), support(x).back());
    }
}

TEST(Delta, Examples) {
    EXPECT_EQ(delta({1, 3, 6}), (std::vector<Nat>{2, 3, 5}));
    EXPECT_TRUE(delta({9}).empty());
    EXPECT_EQ(delta({0, 1, 2}), (std::vector<Nat>{1, 2}));
}

TEST(BlockDisjoint, Examples) {
    EXPECT_TRUE(block_disjoint({1, 6}));
    EXPECT_TRUE(block_disjoint({3, 4}));
    EXPECT_FALSE(block_disjoint({2, 3}));
}

TEST(Classify, Examples) {
    auto dom = pairs_of({0, 1, 2, 3, 4});
    EXPECT_EQ(classify_ramsey(dom, [](Edge) { return Nat{7}; }), (CanonicalForm{Family::Ramsey, 1}));
    EXPECT_EQ(classify_ramsey(dom, [](Edge e) { return e.first; }), (CanonicalForm{Family::Ramsey, 2}));
    EXPECT_EQ(classify_ramsey(dom, [](Edge e) { return e.second; }), (CanonicalForm{Family::Ramsey, 3}));
    EXPECT_EQ(classify_ramsey(dom, [](Edge e) { return code_unordered(e.first, e.second); }), (CanonicalForm{Family::Ramsey, 4}));
    EXPECT_FALSE(classify_ramsey(dom, [](Edge e) { return (e.first + e.second) % 2; }));
    auto sums = fs({1, 2, 4, 8});
    EXPECT_EQ(classify_hindman(sums, [](Nat) { return Nat{0}; }), (CanonicalForm{Family::Hindman, 1}));
    EXPECT_EQ(classify_hindman(sums, [](Nat x) { return min_support(x); }), (CanonicalForm{Family::Hindman, 2}));
    EXPECT_EQ(classify_hindman(sums, [](Nat x) { return max_support(x); }), (CanonicalForm{Family::Hindman, 3}));
    EXPECT_EQ(classify_hindman(sums, [](Nat x) { return min_support(x) * 1000 + max_support(x); }), (CanonicalForm{Family::Hindman, 4}));
    EXPECT_EQ(classify_hindman(sums, [](Nat x) { return x; }), (CanonicalForm{Family::Hindman, 5}));
}

TEST(Classify, SubdomainsKeepCaseOrDegenerate) {
    // A case-k colouring restricted to a smaller witness still classifies as k
    // or as a smaller case that the restriction happens to satisfy.
    std::vector<std::function<Nat(Edge)>> forms = {
        [](Edge) { return Nat{0}; }, [](Edge e) { return e.first; }, [](Edge e) { return e.second; },
        [](Edge e) { return code_unordered(e.first, e.second); }};
    std::mt19937_64 rng(29);
    for (int k = 1; k <= 4; ++k)
        for (int t = 0; t < 50; ++t) {
            std::set<Nat> vs;
            std::size_t size = 2 + rng() % 4;
            while (vs.size() < size) vs.insert(rng() % 30);
            auto c = classify_ramsey(pairs_of({vs.begin(), vs.end()}), forms[k - 1]);
            ASSERT_TRUE(c);
            EXPECT_LE(c->case_no, k);
            EXPECT_TRUE(ramsey_case_holds(pairs_of({vs.begin(), vs.end()}), forms[k - 1], k));
        }
    std::vector<std::function<Nat(Nat)>> hforms = {
        [](Nat) { return Nat{0}; }, [](Nat x) { return min_support(x); }, [](Nat x) { return max_support(x); },
        [](Nat x) { return min_support(x) * 4096 + max_support(x); }, [](Nat x) { return x; }};
    for (int k = 1; k <= 5; ++k)
        for (int t = 0; t < 50; ++t) {
            std::vector<Nat> h;
            Nat bit = rng() % 3;
            std::size_t len = 1 + rng() % 4;
            for (std::size_t i = 0; i < len; ++i) {
                Nat x = Nat{1} << bit;
                if (rng() % 2) x |= Nat{1} << (bit + 1);
                h.push_back(x);
                bit += 2 + rng() % 2;
            }
            ASSERT_TRUE(block_disjoint(h));
            auto c = classify_hindman(fs(h), hforms[k - 1]);
            ASSERT_TRUE(c);
            EXPECT_LE(c->case_no, k);
            EXPECT_TRUE(hindman_case_holds(fs(h), hforms[k - 1], k));
        }
}

TEST(CanonicalRamseySearch, Examples) {
    auto hit = canonical_ramsey_search([](Edge) { return Nat{1}; }, 5, 3);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->vertices, (std::vector<Nat>{0, 1, 2}));
    EXPECT_EQ(hit->form.case_no, 1);
    auto inj = canonical_ramsey_search([](Edge e) { return code_unordered(e.first, e.second); }, 5, 3);
    ASSERT_TRUE(inj);
    EXPECT_EQ(inj->vertices, (std::vector<Nat>{0, 1, 2}));
    EXPECT_EQ(inj->form.case_no, 4);
    EXPECT_THROW(canonical_ramsey_search([](Edge) { return Nat{0}; }, 2, 3), std::invalid_argument);
}

TEST(CanonicalHindmanSearch, Examples) {
    auto c = canonical_hindman_search([](Nat) { return Nat{0}; }, 8, 2);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->sequence, (std::vector<Nat>{1, 2}));
    EXPECT_EQ(c->form.case_no, 1);
    auto id = canonical_hindman_search([](Nat x) { return x; }, 8, 2);
    ASSERT_TRUE(id);
    EXPECT_EQ(id->sequence, (std::vector<Nat>{1, 2}));
    // On FS(1,2) = {1,2,3} the identity also meets the min&max biconditional;
    // the smallest matching case wins.
    EXPECT_EQ(id->form.case_no, 4);
    EXPECT_TRUE(hindman_case_holds(fs(id->sequence), [](Nat x) { return x; }, 5));
    EXPECT_FALSE(canonical_hindman_search([](Nat x) { return x; }, 8, 4));
}

TEST(Sparse, Examples) {
    EXPECT_TRUE(eventually_sparse_check({0, 1, 3}, 1).pass);
    auto r = eventually_sparse_check({0, 1, 2, 3}, 2);
    EXPECT_FALSE(r.pass);
    ASSERT_EQ(r.violators.size(), 1u);
    EXPECT_EQ(r.violators[0], (std::pair<Nat, Nat>{1, 3}));
}

TEST(Sparse, SharedDifferenceGenerator) {
    // For b < c the two least elements of E, the pairs (d-b, d-c) over d ∈ E
    // above c lie in Δ(E) and all differ by c-b, so that difference occurs
    // at least |E|-2 times inside Δ(E).
    std::vector<Nat> e = {0, 3, 7, 12, 20};
    auto de = delta(e);
    Nat b = e[0], c = e[1], hits = 0;
    for (std::size_t i = 2; i < e.size(); ++i) {
        Nat x = e[i] - b, y = e[i] - c;
        EXPECT_TRUE(std::binary_search(de.begin(), de.end(), x));
        EXPECT_TRUE(std::binary_search(de.begin(), de.end(), y));
        EXPECT_EQ(x - y, c - b);
        ++hits;
    }
    EXPECT_EQ(hits, e.size() - 2);
    EXPECT_GE(diff_multiplicity(de).at(c - b), e.size() - 2);
    EXPECT_FALSE(eventually_sparse_check(de, e.size() - 3).pass);
}
