#pragma once
// Certificates: {schema, kind, seed, inputs, results, assumptions}. Results
// are a pure function of (kind, inputs, seed); `certify` recomputes them and
// names the first JSON path where the file disagrees.

#include "katetov/game.hpp"
#include "katetov/scenario.hpp"

#include <random>

namespace katetov {

inline constexpr const char* kCertificateSchema = "katetov-certificate/1";

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string inputs_digest(const nlohmann::json& inputs, std::uint64_t seed) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(nlohmann::json{{"inputs", inputs}, {"seed", seed}}.dump())));
    return buf;
}

// Exact value when short; sign and bit lengths when the digits would run to megabytes.
inline nlohmann::json encode_rational(const Rational& q, std::size_t max_digits = 4096) {
    if (mpz_sizeinbase(q.get_num_mpz_t(), 10) + mpz_sizeinbase(q.get_den_mpz_t(), 10) <= max_digits) return to_string(q);
    return {{"sign", sgn(q)}, {"num_bits", mpz_sizeinbase(q.get_num_mpz_t(), 2)}, {"den_bits", mpz_sizeinbase(q.get_den_mpz_t(), 2)}};
}

// Memoizes recomputation by (kind, inputs, seed) and shares partitions by depth.
class CertifyContext {
public:
    const PartitionData& partition(std::size_t depth) {
        auto it = partitions_.find(depth);
        if (it == partitions_.end()) it = partitions_.emplace(depth, std::make_shared<const PartitionData>(build_partition(depth))).first;
        return *it->second;
    }
    std::shared_ptr<const PartitionData> partition_ptr(std::size_t depth) {
        partition(depth);
        return partitions_.at(depth);
    }
    void release_partitions() { partitions_.clear(); }

    std::map<std::string, std::pair<nlohmann::json, nlohmann::json>> memo;

private:
    std::map<std::size_t, std::shared_ptr<const PartitionData>> partitions_;
};

// ---- brute-force canonical Ramsey oracle ----

namespace oracle {

// Restricted-growth strings of length n enumerate the set partitions of [n].
inline bool next_partition(std::vector<Nat>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = n; i-- > 1;) {
        Nat mx = 0;
        for (std::size_t j = 0; j < i; ++j) mx = std::max(mx, a[j]);
        if (a[i] <= mx) {
            ++a[i];
            for (std::size_t j = i + 1; j < n; ++j) a[j] = 0;
            return true;
        }
    }
    return false;
}

inline std::vector<Nat> canonical_blocks(const std::vector<Nat>& a) {
    std::map<Nat, Nat> relabel;
    std::vector<Nat> out;
    for (Nat x : a) out.push_back(relabel.emplace(x, relabel.size()).first->second);
    return out;
}

// Canonical shapes as set partitions of the pairs of T (listed lexicographically).
inline std::vector<std::vector<Nat>> shapes(const std::vector<Nat>& T) {
    std::vector<std::array<Nat, 2>> pairs;
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) pairs.push_back({i, j});
    std::vector<std::vector<Nat>> out(4);
    for (const auto& pr : pairs) {
        out[0].push_back(0);
        out[1].push_back(pr[0]);
        out[2].push_back(pr[1]);
        out[3].push_back(pr[0] * T.size() + pr[1]);
    }
    for (auto& s : out) s = canonical_blocks(s);
    return out;
}

struct Hit {
    std::vector<Nat> T;
    int form = 0;
};

// Least m-subset of [0, n) on whose pairs the colouring is one of the four shapes.
inline std::optional<Hit> canonical_subset(const std::vector<Nat>& colour_of_code, Nat n, Nat m) {
    std::vector<Nat> T(m);
    for (Nat i = 0; i < m; ++i) T[i] = i;
    if (m > n) return std::nullopt;
    while (true) {
        std::vector<Nat> restricted;
        for (std::size_t i = 0; i < T.size(); ++i)
            for (std::size_t j = i + 1; j < T.size(); ++j) restricted.push_back(colour_of_code[T[j] * (T[j] - 1) / 2 + T[i]]);
        restricted = canonical_blocks(restricted);
        auto sh = shapes(T);
        for (int f = 0; f < 4; ++f)
            if (restricted == sh[f]) return Hit{T, f + 1};
        // next m-subset in lexicographic order
        std::size_t i = m;
        while (i-- > 0 && T[i] == n - m + i) {}
        if (i == static_cast<std::size_t>(-1)) return std::nullopt;
        ++T[i];
        for (std::size_t j = i + 1; j < m; ++j) T[j] = T[j - 1] + 1;
    }
}

} // namespace oracle

// ---- per-kind computations ----

struct Computed {
    nlohmann::json results;
    nlohmann::json assumptions = nlohmann::json::array();
};

namespace detail {

inline Computed compute_construction(const nlohmann::json& in, CertifyContext& ctx) {
    const auto& p = ctx.partition(in.at("depth").get<std::size_t>());
    auto rep = verify_partition(p);
    nlohmann::json checks = nlohmann::json::array(), len_bits = nlohmann::json::array(), den_bits = nlohmann::json::array();
    for (const auto& c : rep.checks) {
        nlohmann::json e = {{"condition", c.condition}, {"index", c.index}, {"pass", c.pass}};
        if (c.slack) e["slack"] = encode_rational(*c.slack);
        checks.push_back(e);
    }
    for (const auto& l : p.length) len_bits.push_back(mpz_sizeinbase(l.get_mpz_t(), 2));
    for (const auto& r : p.r) den_bits.push_back(mpz_sizeinbase(r.get_den_mpz_t(), 2));
    return {{{"depth", p.depth()}, {"pass", rep.pass}, {"checks", checks}, {"length_bits", len_bits}, {"r_den_bits", den_bits}}};
}

inline Computed compute_weight_bound(const nlohmann::json& in, CertifyContext& ctx) {
    const auto& p = ctx.partition(in.at("depth").get<std::size_t>());
    auto S = DescribedSet::from_json(in.at("set"));
    std::size_t blk = in.at("block").get<std::size_t>();
    if (blk >= p.depth()) throw std::invalid_argument("weight-bound block beyond the partition");
    BigNat bound = p.end(blk) - 1; // max I_blk
    Rational w = weight_below(S, p, bound);
    return {{{"block", blk}, {"bound_bits", mpz_sizeinbase(bound.get_mpz_t(), 2)}, {"weight", encode_rational(w)}, {"below_one", w < 1},
             {"slack", encode_rational(1 - w)}}};
}

inline Computed compute_subset_reduction(const nlohmann::json& in, CertifyContext& ctx) {
    const std::size_t depth = in.at("depth");
    const Nat horizon = in.at("horizon");
    auto pp = ctx.partition_ptr(depth);
    nlohmann::json rows = nlohmann::json::array();
    bool all = true;
    for (const auto& pr : in.at("pairs")) {
        auto P = DescribedSet::from_json(pr.at("P")), Q = DescribedSet::from_json(pr.at("Q")), a = DescribedSet::from_json(pr.at("a"));
        auto red = check_subset_reduction(P, Q, *pp, horizon);
        ReductionClaim claim{sum_ideal_of(P, pp), sum_ideal_of(Q, pp), IdentityHeightOne{}};
        auto cert = check_reduction_witness(claim, a, 1, horizon);
        bool valid = cert && validate_certificate(*cert, claim.target, a);
        bool ok = red.verdict.value == Value::In && valid;
        all = all && ok;
        rows.push_back({{"verdict", value_name(red.verdict.value)}, {"evidence", red.verdict.evidence}, {"detail", red.verdict.detail},
                        {"height_one_certificate", valid}, {"leaves", cert ? cert->values.size() : 0}});
    }
    return {{{"pairs", rows}, {"all_pass", all}}};
}

inline Computed compute_extraction(const nlohmann::json& in, CertifyContext& ctx) {
    const auto& p = ctx.partition(in.at("depth").get<std::size_t>());
    const std::size_t n = in.at("block");
    auto Q = DescribedSet::from_json(in.at("Q"));
    if (n >= p.depth() || !fits_nat(p.end(n))) throw std::invalid_argument("extraction block out of range");
    const Nat lo = to_nat(p.start[n]), len = to_nat(p.length[n]);
    nlohmann::json rows = nlohmann::json::array();
    bool all = true;
    Nat min_size = len;
    for (const auto& s : in.at("colourings")) {
        const std::string col = s.get<std::string>();
        if (col.size() != len) throw std::invalid_argument("colouring length differs from the block size");
        PwModel m;
        m.base = PwBase::Identity;
        for (Nat j = 0; j < len; ++j) {
            if (col[j] == '0') m.table[big(lo + j)] = std::nullopt;
            else if (col[j] == '1') m.table[big(lo + j)] = BigNat(0);
            else if (col[j] != '2') throw std::invalid_argument("colouring digits must be 0, 1 or 2");
        }
        auto e = extract_Fn(m, p, n);
        BigNat size = e.F.size();
        Rational wQ = span_weight(e.F, Q, p);
        bool ok = 3 * size >= p.length[n] && (Q.contains(n) || wQ >= make_rational(1, 3));
        all = all && ok;
        min_size = std::min(min_size, to_nat(size));
        rows.push_back({{"colour", e.colour}, {"size", to_nat(size)}, {"wQ", to_string(wQ)}, {"pass", ok}});
    }
    return {{{"block_size", len}, {"samples", rows}, {"min_size", min_size}, {"all_pass", all}}};
}

inline Computed compute_diagonalization(const nlohmann::json& in) {
    std::optional<std::size_t> stages;
    if (in.contains("stages") && !in["stages"].is_null()) stages = in["stages"].get<std::size_t>();
    nlohmann::json run = run_scenario(in.at("scenario"), stages);
    Computed c;
    c.assumptions = run.value("assumptions", nlohmann::json::array());
    run.erase("assumptions");
    run["pass"] = run_passes(run);
    c.results = run;
    return c;
}

inline Computed compute_canonical_ramsey(const nlohmann::json& in, std::uint64_t seed) {
    const Nat m = in.at("m"), ex_n = in.at("exhaustive_n"), sa_n = in.at("sample_n"), samples = in.at("samples"), max_n = in.at("minimal_n_search_max");
    auto agree = [&](const std::vector<Nat>& blocks, Nat n) {
        auto f = [&](Edge e) { return blocks[code_unordered(e.first, e.second)]; };
        auto lib = canonical_ramsey_search(f, n, m);
        auto orc = oracle::canonical_subset(blocks, n, m);
        if (lib.has_value() != orc.has_value()) return false;
        return !lib || (lib->vertices == orc->T && lib->form.case_no == orc->form);
    };
    nlohmann::json res;
    {
        Nat edges = ex_n * (ex_n - 1) / 2, count = 0, ok = 0;
        std::vector<Nat> a(edges, 0);
        do {
            ++count;
            ok += agree(a, ex_n);
        } while (oracle::next_partition(a));
        res["exhaustive"] = {{"n", ex_n}, {"partitions", count}, {"agree", ok}};
    }
    {
        std::mt19937_64 rng(seed);
        Nat edges = sa_n * (sa_n - 1) / 2, ok = 0;
        for (Nat s = 0; s < samples; ++s) {
            std::vector<Nat> a(edges, 0);
            Nat mx = 0;
            for (Nat j = 1; j < edges; ++j) {
                a[j] = rng() % (mx + 2);
                mx = std::max(mx, a[j]);
            }
            ok += agree(a, sa_n);
        }
        res["sample"] = {{"n", sa_n}, {"partitions", samples}, {"agree", ok}};
    }
    // least n for which every edge-partition of [n]^2 has a canonical m-set
    nlohmann::json tried = nlohmann::json::array();
    std::optional<Nat> minimal;
    for (Nat n = m; n <= max_n && !minimal; ++n) {
        Nat edges = n * (n - 1) / 2, count = 0, failures = 0;
        std::vector<Nat> a(edges, 0);
        do {
            ++count;
            failures += !oracle::canonical_subset(a, n, m).has_value();
        } while (oracle::next_partition(a));
        tried.push_back({{"n", n}, {"partitions", count}, {"without_canonical_set", failures}});
        if (failures == 0) minimal = n;
    }
    res["minimal_n_search"] = tried;
    res["minimal_n"] = minimal ? nlohmann::json(*minimal) : nlohmann::json("not found");
    res["all_agree"] = res["exhaustive"]["agree"] == res["exhaustive"]["partitions"] && res["sample"]["agree"] == res["sample"]["partitions"];
    return {res};
}

// For E with least elements b < c, the pairs (d-b, d-c), d ∈ E above c, all
// realize the difference c-b inside Δ(E): at least |E|-2 times.
inline Computed compute_sparseness(const nlohmann::json& in) {
    const Nat U = in.at("universe");
    nlohmann::json per = nlohmann::json::array();
    bool all = true;
    for (Nat size : in.at("sizes").get<std::vector<Nat>>()) {
        Nat sets = 0, predicted = 0, min_margin = std::numeric_limits<Nat>::max();
        std::vector<Nat> E(size);
        for (Nat i = 0; i < size; ++i) E[i] = i;
        while (true) {
            ++sets;
            auto dE = delta(E);
            auto mult = diff_multiplicity(dE);
            Nat shared = E[1] - E[0];
            auto it = mult.find(shared);
            Nat got = it == mult.end() ? 0 : it->second;
            auto rep = eventually_sparse_check(dE, size - 3);
            bool listed = std::any_of(rep.violators.begin(), rep.violators.end(), [&](auto v) { return v.first == shared; });
            if (!rep.pass && listed && got >= size - 2) ++predicted;
            min_margin = std::min(min_margin, got - std::min(got, size - 2));
            std::size_t i = size;
            while (i-- > 0 && E[i] == U - size + i) {}
            if (i == static_cast<std::size_t>(-1)) break;
            ++E[i];
            for (std::size_t j = i + 1; j < size; ++j) E[j] = E[j - 1] + 1;
        }
        all = all && predicted == sets;
        per.push_back({{"size", size}, {"sets", sets}, {"failing_as_predicted", predicted}, {"min_excess_multiplicity", min_margin}});
    }
    return {{{"universe", U}, {"by_size", per}, {"all_as_predicted", all}}};
}

inline Computed compute_separation(const nlohmann::json& in) {
    Computed c;
    nlohmann::json runs = nlohmann::json::array();
    bool all = true;
    for (const auto& sj : in.at("scenarios")) {
        auto run = run_tree(tree_from_json(sj));
        for (auto& a : run["assumptions"]) {
            a["scenario"] = run["scenario"];
            c.assumptions.push_back(a);
        }
        run.erase("assumptions");
        run["pass"] = run_passes(run);
        all = all && run["pass"].get<bool>() && run["all_in_branching"].get<bool>();
        runs.push_back(run);
    }
    c.results = {{"runs", runs}, {"all_pass", all}};
    return c;
}

} // namespace detail

inline const std::vector<std::string>& certificate_kinds() {
    static const std::vector<std::string> k = {"construction", "weight-bound", "subset-reduction", "extraction",
                                               "diagonalization", "canonical-ramsey", "sparseness", "separation"};
    return k;
}

inline Computed compute_certificate_results(const std::string& kind, const nlohmann::json& inputs, std::uint64_t seed, CertifyContext& ctx) {
    const std::string key = kind + "\n" + std::to_string(seed) + "\n" + inputs.dump();
    if (auto it = ctx.memo.find(key); it != ctx.memo.end()) return {it->second.first, it->second.second};
    Computed c;
    if (kind == "construction") c = detail::compute_construction(inputs, ctx);
    else if (kind == "weight-bound") c = detail::compute_weight_bound(inputs, ctx);
    else if (kind == "subset-reduction") c = detail::compute_subset_reduction(inputs, ctx);
    else if (kind == "extraction") c = detail::compute_extraction(inputs, ctx);
    else if (kind == "diagonalization") c = detail::compute_diagonalization(inputs);
    else if (kind == "canonical-ramsey") c = detail::compute_canonical_ramsey(inputs, seed);
    else if (kind == "sparseness") c = detail::compute_sparseness(inputs);
    else if (kind == "separation") c = detail::compute_separation(inputs);
    else throw std::invalid_argument("unknown certificate kind: " + kind);
    c.results["inputs_digest"] = inputs_digest(inputs, seed);
    ctx.memo[key] = {c.results, c.assumptions};
    return c;
}

inline nlohmann::json make_certificate(const std::string& kind, const nlohmann::json& inputs, std::uint64_t seed, CertifyContext& ctx) {
    auto c = compute_certificate_results(kind, inputs, seed, ctx);
    return {{"schema", kCertificateSchema}, {"kind", kind}, {"seed", seed}, {"inputs", inputs}, {"results", c.results}, {"assumptions", c.assumptions}};
}

// ---- checking ----

struct CertifyOutcome {
    int exit_code = 0; // 0 pass, 1 mismatch, 2 schema
    std::string field;
    std::string message;
};

// First JSON pointer at which the two documents differ; empty if equal.
inline std::optional<std::string> first_difference(const nlohmann::json& a, const nlohmann::json& b, const std::string& at = "") {
    // signed and unsigned integers of equal value are the same after a file round trip
    const bool both_integers = a.is_number_integer() && b.is_number_integer();
    if (a.type() != b.type() && !both_integers) return at.empty() ? "/" : at;
    if (a.is_object()) {
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key())) return at + "/" + it.key();
            if (auto d = first_difference(it.value(), b[it.key()], at + "/" + it.key())) return d;
        }
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!a.contains(it.key())) return at + "/" + it.key();
        return std::nullopt;
    }
    if (a.is_array()) {
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            if (auto d = first_difference(a[i], b[i], at + "/" + std::to_string(i))) return d;
        if (a.size() != b.size()) return at + "/" + std::to_string(std::min(a.size(), b.size()));
        return std::nullopt;
    }
    if (a != b) return at.empty() ? "/" : at;
    return std::nullopt;
}

inline CertifyOutcome certify(const nlohmann::json& cert, CertifyContext& ctx) {
    auto schema_fail = [](std::string field, std::string msg) { return CertifyOutcome{2, std::move(field), std::move(msg)}; };
    if (!cert.is_object()) return schema_fail("/", "certificate is not a JSON object");
    for (const char* f : {"schema", "kind", "seed", "inputs", "results", "assumptions"})
        if (!cert.contains(f)) return schema_fail(std::string("/") + f, "missing field");
    if (cert.size() != 6) return schema_fail("/", "unexpected top-level fields");
    if (cert["schema"] != kCertificateSchema) return schema_fail("/schema", "unsupported schema");
    if (!cert["kind"].is_string() ||
        std::find(certificate_kinds().begin(), certificate_kinds().end(), cert["kind"].get<std::string>()) == certificate_kinds().end())
        return schema_fail("/kind", "unknown certificate kind");
    if (!cert["seed"].is_number_unsigned()) return schema_fail("/seed", "seed must be a non-negative integer");
    if (!cert["inputs"].is_object() || !cert["results"].is_object()) return schema_fail("/inputs", "inputs and results must be objects");
    if (!cert["assumptions"].is_array()) return schema_fail("/assumptions", "assumptions must be an array");
    for (std::size_t i = 0; i < cert["assumptions"].size(); ++i) {
        const auto& a = cert["assumptions"][i];
        if (!a.is_object() || !a.contains("tag") || !a["tag"].is_string() || (a["tag"] != "assumption" && a["tag"] != "derived"))
            return schema_fail("/assumptions/" + std::to_string(i) + "/tag", "assumption without a valid tag (assumption or derived)");
    }
    const auto seed = cert["seed"].get<std::uint64_t>();
    if (!cert["results"].contains("inputs_digest") || cert["results"]["inputs_digest"] != inputs_digest(cert["inputs"], seed))
        return {1, "/results/inputs_digest", "inputs digest does not match the recorded inputs and seed"};
    Computed c;
    try {
        c = compute_certificate_results(cert["kind"], cert["inputs"], seed, ctx);
    } catch (const std::exception& e) {
        return {1, "/inputs", std::string("recomputation failed: ") + e.what()};
    }
    if (auto d = first_difference(cert["results"], c.results, "/results")) return {1, *d, "recorded value differs from recomputation"};
    if (auto d = first_difference(cert["assumptions"], c.assumptions, "/assumptions")) return {1, *d, "recorded assumption differs from recomputation"};
    return {0, "", "pass"};
}

// ---- mutation ----

namespace detail {
inline void leaf_paths(const nlohmann::json& j, const nlohmann::json::json_pointer& at, std::vector<nlohmann::json::json_pointer>& out) {
    if (j.is_object() && !j.empty()) {
        for (auto it = j.begin(); it != j.end(); ++it) leaf_paths(it.value(), at / it.key(), out);
    } else if (j.is_array() && !j.empty()) {
        for (std::size_t i = 0; i < j.size(); ++i) leaf_paths(j[i], at / i, out);
    } else {
        out.push_back(at);
    }
}

inline nlohmann::json mutate_leaf(const nlohmann::json& v) {
    if (v.is_boolean()) return !v.get<bool>();
    if (v.is_number_unsigned()) return v.get<std::uint64_t>() + 1;
    if (v.is_number_integer()) return v.get<std::int64_t>() + 1;
    if (v.is_number_float()) return v.get<double>() + 1;
    if (v.is_string()) {
        std::string s = v;
        for (char& ch : s)
            if (ch >= '0' && ch <= '9') {
                ch = ch == '9' ? '8' : static_cast<char>(ch + 1);
                return s;
            }
        return s + "x";
    }
    if (v.is_array()) return nlohmann::json::array({0});
    if (v.is_object()) return nlohmann::json{{"x", 0}};
    return 0;
}
} // namespace detail

// Single-leaf mutations, evenly spread over the leaves, at most `cap` of them.
inline std::vector<std::pair<std::string, nlohmann::json>> single_field_mutations(const nlohmann::json& cert, std::size_t cap = 200) {
    std::vector<nlohmann::json::json_pointer> leaves;
    detail::leaf_paths(cert, nlohmann::json::json_pointer{}, leaves);
    std::vector<std::pair<std::string, nlohmann::json>> out;
    const std::size_t n = leaves.size(), take = std::min(cap, n);
    for (std::size_t t = 0; t < take; ++t) {
        const auto& ptr = leaves[t * n / take];
        nlohmann::json m = cert;
        m[ptr] = detail::mutate_leaf(cert[ptr]);
        out.emplace_back(ptr.to_string(), std::move(m));
    }
    return out;
}

} // namespace katetov
