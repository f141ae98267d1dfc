#include "katetov/trees.hpp"

#include <gtest/gtest.h>

using namespace katetov;

namespace {
FiniteString fs_of(std::initializer_list<Nat> xs) { return FiniteString{std::vector<Nat>(xs)}; }

// Root with successors 0..9; even successors carry `even`, odd ones `odd` (if any).
struct Fan {
    FiniteTree tree;
    CoherentMap map;
};
Fan fan(std::optional<Nat> even, std::optional<Nat> odd) {
    Fan f;
    for (Nat x = 0; x < 10; ++x) {
        f.tree.add_path(fs_of({x}));
        auto v = x % 2 == 0 ? even : odd;
        if (v) f.map = extend_coherent(f.map, fs_of({x}), *v);
    }
    return f;
}
} // namespace

TEST(Coherent, Extend) {
    auto m = extend_coherent({}, fs_of({3}), 5);
    EXPECT_EQ(m.size(), 1u);
    auto m2 = extend_coherent(m, fs_of({3, 1}), 5);
    EXPECT_EQ(m2.size(), 2u);
    try {
        extend_coherent(m, fs_of({3, 1}), 7);
        FAIL();
    } catch (const CoherenceError& e) {
        EXPECT_EQ(e.existing, fs_of({3}));
        EXPECT_EQ(e.incoming, fs_of({3, 1}));
    }
    // incomparable strings may disagree
    EXPECT_NO_THROW(extend_coherent(m, fs_of({4}), 7));
}

TEST(Coherent, ValueAtDeepestPrefix) {
    auto m = extend_coherent({}, fs_of({3}), 5);
    EXPECT_EQ(value_at(m, fs_of({3, 9, 9})), 5u);
    EXPECT_FALSE(value_at(m, fs_of({2})));
    EXPECT_TRUE(in_canonical_tree(m, fs_of({})));
    EXPECT_FALSE(in_canonical_tree(m, fs_of({4})));
}

TEST(CanonicalTree, Examples) {
    auto t = canonical_tree(extend_coherent({}, fs_of({3, 1}), 5), 10);
    EXPECT_EQ(t.nodes, (std::set<FiniteString>{fs_of({}), fs_of({3}), fs_of({3, 1})}));
    EXPECT_EQ(canonical_tree({}, 10).nodes, (std::set<FiniteString>{fs_of({})}));
    auto m = extend_coherent(extend_coherent({}, fs_of({2, 0}), 1), fs_of({2, 5}), 1);
    EXPECT_EQ(canonical_tree(m, 10).nodes.size(), 4u);
    // entries at or beyond the horizon are dropped
    EXPECT_EQ(canonical_tree(extend_coherent({}, fs_of({12}), 1), 10).nodes.size(), 1u);
}

TEST(Labels, EvensPositive) {
    auto f = fan(5, std::nullopt);
    PositivityOracle o;
    o.stipulate_positive({}, 5, Value::In);
    auto lt = compute_labels(f.tree, f.map, o, 10);
    EXPECT_EQ(lt.label({}), 5u);
    EXPECT_EQ(lt.rule.at({}), 3);
    EXPECT_FALSE(lt.label(fs_of({1})));
    EXPECT_EQ(lt.rule.at(fs_of({1})), 2);
    EXPECT_EQ(lt.label(fs_of({4})), 5u);
    auto path = path_value_search(lt, 5);
    ASSERT_TRUE(path);
    EXPECT_EQ(*path, (std::vector<FiniteString>{fs_of({}), fs_of({0})}));
    EXPECT_FALSE(path_value_search(lt, 6));
}

TEST(Labels, LeastPositiveLabelWins) {
    auto f = fan(7, 5);
    PositivityOracle o;
    o.stipulate_positive({}, 5, Value::In);
    o.stipulate_positive({}, 7, Value::In);
    EXPECT_EQ(compute_labels(f.tree, f.map, o, 10).label({}), 5u);
}

TEST(Labels, AssignedNodesKeepTheirValue) {
    auto f = fan(5, std::nullopt);
    f.map = extend_coherent(f.map, fs_of({}), 5);
    PositivityOracle o;
    o.stipulate_positive({}, 5, Value::Out);
    auto lt = compute_labels(f.tree, f.map, o, 10);
    EXPECT_EQ(lt.label({}), 5u);
    EXPECT_EQ(lt.rule.at({}), 1);
    EXPECT_TRUE(lt.queries.empty());
}

TEST(Labels, UnknownBlocks) {
    auto f = fan(5, std::nullopt);
    PositivityOracle o; // no stipulation, no ideal
    EXPECT_THROW(compute_labels(f.tree, f.map, o, 10), LabellingBlocked);
}

TEST(Labels, DerivedFromIdeal) {
    // ideal of finite sets: any finite class is null, so the root is ⊥ by rule 4
    auto f = fan(5, 6);
    PositivityOracle o(IdealDescriptor::simple(IdealKind::Fin));
    auto lt = compute_labels(f.tree, f.map, o, 10);
    EXPECT_FALSE(lt.label({}));
    EXPECT_EQ(lt.rule.at({}), 4);
    for (const auto& q : lt.queries) EXPECT_EQ(q.answer.tag, "derived");
}

TEST(Labels, DeterministicAndIdempotent) {
    auto f = fan(5, 7);
    FiniteTree reversed;
    for (Nat x = 10; x-- > 0;) reversed.add_path(fs_of({x}));
    PositivityOracle o;
    o.stipulate_positive({}, 7, Value::In);
    o.stipulate_positive({}, 5, Value::Out);
    auto a = compute_labels(f.tree, f.map, o, 10), b = compute_labels(reversed, f.map, o, 10), c = compute_labels(f.tree, f.map, o, 10);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.labels, c.labels);
    EXPECT_EQ(a.label({}), 7u);
}

TEST(Critical, EmptyBottomSetIsNull) {
    auto f = fan(5, 6);
    PositivityOracle o(IdealDescriptor::simple(IdealKind::Fin));
    auto lt = compute_labels(f.tree, f.map, o, 10);
    auto rep = find_critical(lt, o, 10);
    EXPECT_EQ(rep.critical, (std::vector<FiniteString>{fs_of({})}));
}

TEST(Critical, DeclaredNonNullIsNotCritical) {
    auto f = fan(5, std::nullopt);
    PositivityOracle o;
    o.stipulate_positive({}, 5, Value::Out);
    o.stipulate_null_bottom({}, Value::Out);
    auto lt = compute_labels(f.tree, f.map, o, 10);
    ASSERT_FALSE(lt.label({}));
    auto rep = find_critical(lt, o, 10);
    EXPECT_TRUE(std::find(rep.critical.begin(), rep.critical.end(), fs_of({})) == rep.critical.end());
    // the odd leaves lie outside the canonical tree; with no ideal their nullity is undetermined
    EXPECT_EQ(rep.undetermined.size(), 5u);
}

TEST(Branching, Examples) {
    auto h = IdealDescriptor::simple(IdealKind::SumHarmonic);
    FiniteTree t;
    t.add_path(fs_of({0}));
    t.add_path(fs_of({1}));
    t.described.insert_or_assign(fs_of({}), DescribedSet::cofinite({2, 3}));
    auto v = check_branching(t, h, 100);
    EXPECT_EQ(v.at({}).value, Value::In);
    // explicit finite successor set of the leaf (empty) is never in a dual filter
    EXPECT_EQ(v.at(fs_of({0})).value, Value::Out);
    t.described.insert_or_assign(fs_of({1}), DescribedSet::intersection_of({modular_set(2), DescribedSet::complement_of(DescribedSet::ap(1, 4))}));
    EXPECT_EQ(check_branching(t, h, 100).at(fs_of({1})).value, Value::Unknown);
}

TEST(PathSearch, DeepLeaf) {
    FiniteTree t;
    t.add_path(fs_of({0, 0}));
    t.add_path(fs_of({1, 4}));
    auto m = extend_coherent(extend_coherent({}, fs_of({0, 0}), 2), fs_of({1, 4}), 9);
    PositivityOracle o(IdealDescriptor::simple(IdealKind::PowerSet));
    auto lt = compute_labels(t, m, o, 10);
    auto p = path_value_search(lt, 9);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->back(), fs_of({1, 4}));
    EXPECT_EQ(p->size(), 3u);
}
