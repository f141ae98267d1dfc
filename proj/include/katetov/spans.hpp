#pragma once
// Finite unions of big-integer intervals. Blocks of the greedy partition are
// far beyond 64 bits after a dozen steps, so the pwfin engine keeps its
// successor and label sets in this form and weighs them block by block.

#include "katetov/construction.hpp"

namespace katetov {

struct SpanSet {
    std::vector<std::pair<BigNat, BigNat>> spans; // disjoint, ascending, each [lo, hi) non-empty

    static SpanSet interval(BigNat lo, BigNat hi) {
        SpanSet s;
        s.append(std::move(lo), std::move(hi));
        return s;
    }
    static SpanSet point(BigNat x) {
        BigNat y = x + 1;
        return interval(std::move(x), std::move(y));
    }

    // Appends [lo, hi) at the top end, merging with an adjacent last span.
    void append(BigNat lo, BigNat hi) {
        if (hi <= lo) return;
        if (!spans.empty()) {
            if (lo < spans.back().second) throw std::invalid_argument("SpanSet::append out of order");
            if (lo == spans.back().second) {
                spans.back().second = std::move(hi);
                return;
            }
        }
        spans.emplace_back(std::move(lo), std::move(hi));
    }

    bool empty() const { return spans.empty(); }

    BigNat size() const {
        BigNat n = 0;
        for (const auto& [lo, hi] : spans) n += hi - lo;
        return n;
    }

    bool contains(const BigNat& x) const {
        for (const auto& [lo, hi] : spans)
            if (lo <= x && x < hi) return true;
        return false;
    }

    bool disjoint(const SpanSet& o) const {
        std::size_t i = 0, j = 0;
        while (i < spans.size() && j < o.spans.size()) {
            const auto& a = spans[i];
            const auto& b = o.spans[j];
            if (a.first < b.second && b.first < a.second) return false;
            if (a.second <= b.second) ++i;
            else ++j;
        }
        return true;
    }

    static SpanSet unite(const SpanSet& a, const SpanSet& b) {
        std::vector<std::pair<BigNat, BigNat>> all = a.spans;
        all.insert(all.end(), b.spans.begin(), b.spans.end());
        std::sort(all.begin(), all.end());
        SpanSet out;
        for (auto& [lo, hi] : all) {
            if (!out.spans.empty() && lo <= out.spans.back().second) {
                if (hi > out.spans.back().second) out.spans.back().second = hi;
            } else {
                out.spans.emplace_back(lo, hi);
            }
        }
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [lo, hi] : spans) arr.push_back({to_string(lo), to_string(hi)});
        return arr;
    }
};

// Σ_{x ∈ s} w_S(x), using that w_S is constant on each block.
inline Rational span_weight(const SpanSet& s, const DescribedSet& index_set, const PartitionData& p) {
    Rational total = 0;
    for (const auto& [lo, hi] : s.spans) {
        auto n = p.block_of(lo);
        if (!n || hi > p.end(p.depth() - 1)) throw HorizonExceeded("span beyond the partition");
        BigNat at = lo;
        for (std::size_t b = *n; at < hi; ++b) {
            BigNat top = hi < p.end(b) ? hi : p.end(b);
            const Rational& w = index_set.contains(b) ? p.r[b + 1] : p.r[b];
            total += Rational(BigNat(top - at)) * w;
            at = top;
        }
    }
    return total;
}

} // namespace katetov
