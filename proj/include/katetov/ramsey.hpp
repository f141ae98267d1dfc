#pragma once
// FS / support / Δ algebra, block-disjointness, canonical-form matching and
// the exhaustive canonical Ramsey and Hindman searches.

#include "katetov/ideals.hpp"

#include <bit>
#include <functional>

namespace katetov {

inline std::vector<Nat> fs(const std::vector<Nat>& a) { return fs_sums(a); }

inline std::vector<Nat> delta(const std::vector<Nat>& b) { return delta_of(b); }

inline std::vector<Nat> support(Nat x) {
    if (x == 0) throw std::invalid_argument("support of 0 is excluded");
    std::vector<Nat> out;
    for (Nat bit = 0; bit < 64; ++bit)
        if (x >> bit & 1) out.push_back(Nat{1} << bit);
    return out;
}

inline Nat min_support(Nat x) { return x & (~x + 1); }
inline Nat max_support(Nat x) { return Nat{1} << (63 - std::countl_zero(x)); }

inline bool block_disjoint(const std::vector<Nat>& h) {
    for (Nat x : h)
        if (x == 0) throw std::invalid_argument("block_disjoint: entries must be >= 1");
    for (std::size_t i = 0; i + 1 < h.size(); ++i)
        if (!(max_support(h[i]) < min_support(h[i + 1]))) return false;
    return true;
}

enum class Family { Ramsey, Hindman };

struct CanonicalForm {
    Family family;
    int case_no;
    bool operator==(const CanonicalForm&) const = default;
};

inline int case_count(Family f) { return f == Family::Ramsey ? 4 : 5; }

using Edge = std::pair<Nat, Nat>; // a < b

namespace detail {
template <class Key, class F, class Same>
bool kernel_is(const std::vector<Key>& dom, const F& f, const Same& same) {
    std::vector<Nat> vals;
    vals.reserve(dom.size());
    for (const auto& x : dom) vals.push_back(f(x));
    for (std::size_t i = 0; i < dom.size(); ++i)
        for (std::size_t j = i + 1; j < dom.size(); ++j)
            if ((vals[i] == vals[j]) != same(dom[i], dom[j])) return false;
    return true;
}
} // namespace detail

// Does f(x)=f(y) ⟺ (case relation) hold on all of the domain?
inline bool ramsey_case_holds(const std::vector<Edge>& dom, const std::function<Nat(Edge)>& f, int k) {
    switch (k) {
    case 1: return detail::kernel_is(dom, f, [](const Edge&, const Edge&) { return true; });
    case 2: return detail::kernel_is(dom, f, [](const Edge& x, const Edge& y) { return x.first == y.first; });
    case 3: return detail::kernel_is(dom, f, [](const Edge& x, const Edge& y) { return x.second == y.second; });
    case 4: return detail::kernel_is(dom, f, [](const Edge& x, const Edge& y) { return x == y; });
    }
    throw std::invalid_argument("Ramsey case out of range");
}

inline bool hindman_case_holds(const std::vector<Nat>& dom, const std::function<Nat(Nat)>& f, int k) {
    switch (k) {
    case 1: return detail::kernel_is(dom, f, [](Nat, Nat) { return true; });
    case 2: return detail::kernel_is(dom, f, [](Nat x, Nat y) { return min_support(x) == min_support(y); });
    case 3: return detail::kernel_is(dom, f, [](Nat x, Nat y) { return max_support(x) == max_support(y); });
    case 4:
        return detail::kernel_is(dom, f, [](Nat x, Nat y) { return min_support(x) == min_support(y) && max_support(x) == max_support(y); });
    case 5: return detail::kernel_is(dom, f, [](Nat x, Nat y) { return x == y; });
    }
    throw std::invalid_argument("Hindman case out of range");
}

// Smallest matching case number; several can hold at finite scale.
inline std::optional<CanonicalForm> classify_ramsey(const std::vector<Edge>& dom, const std::function<Nat(Edge)>& f) {
    for (int k = 1; k <= 4; ++k)
        if (ramsey_case_holds(dom, f, k)) return CanonicalForm{Family::Ramsey, k};
    return std::nullopt;
}

inline std::optional<CanonicalForm> classify_hindman(const std::vector<Nat>& dom, const std::function<Nat(Nat)>& f) {
    for (int k = 1; k <= 5; ++k)
        if (hindman_case_holds(dom, f, k)) return CanonicalForm{Family::Hindman, k};
    return std::nullopt;
}

inline std::vector<Edge> pairs_of(const std::vector<Nat>& t) {
    auto s = sorted_unique(t);
    std::vector<Edge> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) out.emplace_back(s[i], s[j]);
    return out;
}

struct RamseyHit {
    std::vector<Nat> vertices;
    CanonicalForm form;
};

// Lexicographically least m-subset T of [0,n) on whose pairs f is canonical.
inline std::optional<RamseyHit> canonical_ramsey_search(const std::function<Nat(Edge)>& f, Nat n, Nat m) {
    if (m > n) throw std::invalid_argument("canonical_ramsey_search needs m <= n");
    std::vector<Nat> t;
    std::optional<RamseyHit> hit;
    std::function<bool(Nat)> dfs = [&](Nat from) -> bool {
        if (t.size() == m) {
            if (auto form = classify_ramsey(pairs_of(t), f)) {
                hit = RamseyHit{t, *form};
                return true;
            }
            return false;
        }
        for (Nat v = from; v + (m - t.size()) <= n; ++v) {
            t.push_back(v);
            if (dfs(v + 1)) return true;
            t.pop_back();
        }
        return false;
    };
    dfs(0);
    return hit;
}

struct HindmanHit {
    std::vector<Nat> sequence;
    CanonicalForm form;
};

// Least block-disjoint H = (h_0 < ... < h_{m-1}) with FS(H) ⊆ [1, N) and a canonical case on FS(H).
inline std::optional<HindmanHit> canonical_hindman_search(const std::function<Nat(Nat)>& f, Nat N, Nat m) {
    if (m == 0) throw std::invalid_argument("canonical_hindman_search needs m >= 1");
    std::vector<Nat> h;
    std::optional<HindmanHit> hit;
    std::function<bool(Nat, Nat)> dfs = [&](Nat from, Nat sum) -> bool {
        if (h.size() == m) {
            if (auto form = classify_hindman(fs(h), f)) {
                hit = HindmanHit{h, *form};
                return true;
            }
            return false;
        }
        for (Nat x = from; sum + x < N; ++x) {
            if (!h.empty() && !(max_support(h.back()) < min_support(x))) continue;
            h.push_back(x);
            if (dfs(x + 1, sum + x)) return true;
            h.pop_back();
        }
        return false;
    };
    dfs(1, 0);
    return hit;
}

struct SparseReport {
    bool pass = true;
    std::vector<std::pair<Nat, Nat>> violators; // (difference, multiplicity)
};

inline SparseReport eventually_sparse_check(const std::vector<Nat>& a, Nat bound) {
    SparseReport rep;
    for (auto [d, mult] : diff_multiplicity(a))
        if (mult > bound) rep.violators.emplace_back(d, mult);
    rep.pass = rep.violators.empty();
    return rep;
}

} // namespace katetov
