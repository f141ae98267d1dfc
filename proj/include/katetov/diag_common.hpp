#pragma once
// Shared plumbing for the four diagonalization engines: stage indexing,
// failure kinds, and the invariant log each stage writes into.

#include "katetov/pairing.hpp"
#include "katetov/rational.hpp"
#include "katetov/trees.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace katetov {

// The run needs a fresh index or anchor the scenario cannot supply.
class StageStarvation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A selection threshold is not met anywhere below the scenario horizon.
class HorizonExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StageIndex {
    Nat k, i, b;
};

inline StageIndex stage_index(Nat k) {
    auto [i, b] = unpair_diag(k);
    return {k, i, b};
}

// Collects named pass/fail checks; a run passes iff every check does.
class CheckLog {
public:
    void add(const std::string& name, bool pass, nlohmann::json detail = nullptr) {
        nlohmann::json e = {{"check", name}, {"pass", pass}};
        if (!detail.is_null()) e["detail"] = std::move(detail);
        pass_ = pass_ && pass;
        entries_.push_back(std::move(e));
    }
    bool pass() const { return pass_; }
    nlohmann::json json() const { return entries_; }

private:
    bool pass_ = true;
    nlohmann::json entries_ = nlohmann::json::array();
};

inline Rational two_pow_neg(Nat k) { return pow2_inv(k); }

inline Nat pow2_nat(Nat e) {
    if (e >= 64) throw std::overflow_error("2^" + std::to_string(e) + " overflows 64 bits");
    return Nat{1} << e;
}

// Σ_{k ≥ K} 2^-k
inline Rational geometric_tail(Nat from) { return pow2_inv(from) * 2; }

// ν_i: ⊥ ↦ <0,0>, c ↦ <1,c>; a total ω-valued map for the canonical-form test.
inline Nat induced_code(const Label& l) { return l ? pair_diag(1, *l) : pair_diag(0, 0); }

inline Rational harmonic_of_labels(const std::vector<Nat>& c) {
    Rational s = 0;
    for (Nat x : c) s += harmonic_term(x);
    return s;
}

inline nlohmann::json run_shell(const std::string& engine) {
    return {{"engine", engine},
            {"status", "ok"},
            {"stages", nlohmann::json::array()},
            {"contradictions", nlohmann::json::array()},
            {"assumptions", nlohmann::json::array()}};
}

// Final pass flag: every stage, assembly and run-level check passed.
inline bool run_passes(const nlohmann::json& run) {
    if (run.contains("checks"))
        for (const auto& c : run["checks"])
            if (!c["pass"].get<bool>()) return false;
    for (const auto& s : run["stages"])
        for (const auto& c : s["checks"])
            if (!c["pass"].get<bool>()) return false;
    if (run.contains("assembled") && run["assembled"].contains("checks"))
        for (const auto& c : run["assembled"]["checks"])
            if (!c["pass"].get<bool>()) return false;
    return true;
}

} // namespace katetov
