#pragma once
// The interval partition {I_n} with rationals {r_n}, its verifier, and the
// weight functions w_S / ideals Sum_S built on top of it.

#include "katetov/ideals.hpp"

#include <algorithm>
#include <limits>
#include <memory>

namespace katetov {

class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PartitionData {
    std::vector<BigNat> start;  // I_n = [start[n], start[n] + length[n])
    std::vector<BigNat> length;
    std::vector<Rational> r;    // r_0 .. r_N

    std::size_t depth() const { return start.size(); }
    BigNat end(std::size_t n) const { return start[n] + length[n]; }
    // |I_{<n}| == start of I_n for contiguous data
    const BigNat& below(std::size_t n) const { return start[n]; }

    // Block containing m, if covered.
    std::optional<std::size_t> block_of(const BigNat& m) const {
        if (depth() == 0 || m >= end(depth() - 1)) return std::nullopt;
        auto it = std::upper_bound(start.begin(), start.end(), m);
        return static_cast<std::size_t>(it - start.begin()) - 1;
    }

    nlohmann::json to_json() const;
    static PartitionData from_json(const nlohmann::json& j);
};

inline void check_structure(const PartitionData& p) {
    if (p.depth() == 0) throw StructuralError("partition has no intervals");
    if (p.length.size() != p.depth()) throw StructuralError("interval starts and lengths disagree in count");
    if (p.r.size() != p.depth() + 1) throw StructuralError("expected r_0..r_N for N intervals");
    if (sgn(p.start[0]) != 0) throw StructuralError("I_0 must start at 0");
    for (std::size_t n = 0; n < p.depth(); ++n) {
        if (sgn(p.length[n]) <= 0) throw StructuralError("interval " + std::to_string(n) + " is empty");
        if (n + 1 < p.depth() && p.start[n + 1] != p.end(n))
            throw StructuralError("intervals " + std::to_string(n) + " and " + std::to_string(n + 1) + " are not contiguous");
    }
    for (std::size_t n = 0; n < p.r.size(); ++n)
        if (sgn(p.r[n]) <= 0) throw StructuralError("r_" + std::to_string(n) + " is not positive");
}

// Greedy rule: L_n = ceil(|I_<n| / r_n), r_{n+1} = min(r_n / 2, 2^-(n+1) / L_n).
inline PartitionData build_partition(std::size_t depth) {
    if (depth < 1) throw std::invalid_argument("build_partition needs depth >= 1");
    PartitionData p;
    p.start.reserve(depth);
    p.length.reserve(depth);
    p.r.reserve(depth + 1);
    p.start.emplace_back(0);
    p.length.emplace_back(1);
    p.r.emplace_back(1);
    for (std::size_t n = 0;; ++n) {
        const Rational& rn = p.r[n];
        Rational halve = rn / 2;
        BigNat den = p.length[n] << static_cast<mp_bitcnt_t>(n + 1);
        Rational cap = make_rational(BigNat(1), den);
        p.r.push_back(cmp(halve, cap) <= 0 ? halve : cap);
        if (n + 1 == depth) break;
        const Rational& next = p.r.back();
        BigNat below = p.end(n);
        BigNat len;
        BigNat scaled = below * next.get_den();
        mpz_cdiv_q(len.get_mpz_t(), scaled.get_mpz_t(), next.get_num().get_mpz_t());
        p.start.push_back(std::move(below));
        p.length.push_back(std::move(len));
    }
    return p;
}

struct ConditionCheck {
    std::string condition; // "1", "2", "3", "descending"
    std::size_t index = 0;
    bool pass = false;
    std::optional<Rational> slack; // exact, >= 0 iff pass (conditions 1 and 2)
};

struct PartitionReport {
    std::vector<ConditionCheck> checks;
    bool pass = true;

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks) {
            nlohmann::json e = {{"condition", c.condition}, {"index", c.index}, {"pass", c.pass}};
            if (c.slack) e["slack"] = to_string(*c.slack);
            arr.push_back(e);
        }
        return {{"pass", pass}, {"checks", arr}};
    }
};

// Conditions are checked by integer cross-multiplication; the slack is then
// formed as one fraction so that the zero-slack greedy case normalizes cheaply.
inline PartitionReport verify_partition(const PartitionData& p) {
    check_structure(p);
    PartitionReport rep;
    auto add = [&](ConditionCheck c) {
        rep.pass = rep.pass && c.pass;
        rep.checks.push_back(std::move(c));
    };
    bool base = p.length[0] == 1 && p.r[0] == 1;
    add({"3", 0, base, std::nullopt});
    const std::size_t N = p.depth();
    for (std::size_t n = 1; n < N; ++n) {
        // r_n |I_n| - |I_<n|
        const Rational& rn = p.r[n];
        BigNat num = rn.get_num() * p.length[n] - rn.get_den() * p.below(n);
        bool ok = sgn(num) >= 0;
        add({"1", n, ok, make_rational(num, rn.get_den())});
    }
    for (std::size_t n = 0; n < N; ++n) {
        // 2^-(n+1) - |I_n| r_{n+1}
        const Rational& rn1 = p.r[n + 1];
        BigNat scaled = (p.length[n] * rn1.get_num()) << static_cast<mp_bitcnt_t>(n + 1);
        BigNat num = rn1.get_den() - scaled;
        BigNat den = rn1.get_den() << static_cast<mp_bitcnt_t>(n + 1);
        bool ok = sgn(num) >= 0;
        add({"2", n, ok, make_rational(num, den)});
    }
    for (std::size_t n = 0; n < N; ++n) add({"descending", n, cmp(p.r[n], p.r[n + 1]) > 0, std::nullopt});
    return rep;
}

inline nlohmann::json PartitionData::to_json() const {
    nlohmann::json iv = nlohmann::json::array(), rs = nlohmann::json::array();
    for (std::size_t n = 0; n < depth(); ++n) iv.push_back({{"start", to_string(start[n])}, {"end", to_string(end(n))}});
    for (const auto& q : r) rs.push_back(to_string(q));
    return {{"schema", "katetov-partition/1"}, {"intervals", iv}, {"rationals", rs}};
}

inline PartitionData PartitionData::from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("schema", "") != "katetov-partition/1") throw std::invalid_argument("partition: schema must be katetov-partition/1");
    if (!j.contains("intervals") || !j["intervals"].is_array() || !j.contains("rationals") || !j["rationals"].is_array())
        throw std::invalid_argument("partition: needs 'intervals' and 'rationals' arrays");
    PartitionData p;
    for (const auto& e : j["intervals"]) {
        if (!e.is_object() || !e.contains("start") || !e.contains("end") || !e["start"].is_string() || !e["end"].is_string())
            throw std::invalid_argument("partition: interval needs string 'start' and 'end'");
        BigNat a = parse_bignat(e["start"]), b = parse_bignat(e["end"]);
        if (b < a) throw StructuralError("partition: interval end precedes start");
        p.start.push_back(a);
        p.length.push_back(b - a);
    }
    for (const auto& q : j["rationals"]) {
        if (!q.is_string()) throw std::invalid_argument("partition: rationals are 'p/q' strings");
        p.r.push_back(parse_rational(q));
    }
    return p;
}

// w_S(m) = r_n if m ∈ I_n, n ∉ S; r_{n+1} if n ∈ S.
inline WeightFunction weight_fn(const DescribedSet& s, std::shared_ptr<const PartitionData> p) {
    check_structure(*p);
    BigNat top = p->end(p->depth() - 1);
    Nat bound = fits_nat(top) ? to_nat(top) : std::numeric_limits<Nat>::max();
    Divergence div = DescribedSet::complement_of(s).contained_ap() ? Divergence::IntervalBlock : Divergence::None;
    auto eval = [s, p](Nat m) -> Rational {
        auto n = p->block_of(big(m));
        if (!n) throw HorizonExceeded("m beyond partition");
        return s.contains(*n) ? p->r[*n + 1] : p->r[*n];
    };
    return {eval, div, "w_S", bound};
}

// Σ_{m < bound} w_S(m), summed block by block (w_S is constant on each I_n).
inline Rational weight_below(const DescribedSet& s, const PartitionData& p, const BigNat& bound) {
    Rational total = 0;
    for (std::size_t n = 0; n < p.depth(); ++n) {
        if (p.start[n] >= bound) return total;
        BigNat count = bound < p.end(n) ? BigNat(bound - p.start[n]) : p.length[n];
        const Rational& w = s.contains(n) ? p.r[n + 1] : p.r[n];
        total += Rational(count) * w;
        if (bound <= p.end(n)) return total;
    }
    throw HorizonExceeded("weight_below: bound beyond partition");
}

inline IdealDescriptor sum_ideal_of(const DescribedSet& s, std::shared_ptr<const PartitionData> p) {
    IdealDescriptor d;
    d.kind = IdealKind::SumS;
    d.weight = weight_fn(s, p);
    d.index_set = s;
    d.spec = {{"kind", "sum-s"}, {"set", s.to_json()}, {"partition", "greedy"}, {"depth", p->depth()}};
    return d;
}

} // namespace katetov
