#pragma once
// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or schema error, 3 horizon exhausted / stage starvation.

#include "katetov/acceptance.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace katetov::cli {

inline constexpr int kOk = 0, kFail = 1, kUsage = 2, kHorizon = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON text, or a path to a JSON file.
inline nlohmann::json json_arg(const std::string& s, const char* what) {
    auto j = nlohmann::json::parse(s, nullptr, false);
    if (!j.is_discarded()) return j;
    std::ifstream in(s);
    if (!in) throw UsageError(std::string(what) + ": neither JSON nor a readable file: " + s);
    j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw UsageError(std::string(what) + ": " + s + " is not valid JSON");
    return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw UsageError(path + " is not valid JSON");
    return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline std::function<Nat(Edge)> ramsey_colouring(const std::string& name) {
    if (name == "constant") return [](Edge) { return Nat{0}; };
    if (name == "min") return [](Edge e) { return e.first; };
    if (name == "max") return [](Edge e) { return e.second; };
    if (name == "code") return [](Edge e) { return code_unordered(e.first, e.second); };
    if (name == "sum-parity") return [](Edge e) { return (e.first + e.second) % 2; };
    throw UsageError("unknown Ramsey colouring: " + name + " (constant, min, max, code, sum-parity)");
}

inline std::function<Nat(Nat)> hindman_colouring(const std::string& name) {
    if (name == "constant") return [](Nat) { return Nat{0}; };
    if (name == "min-support") return [](Nat x) { return min_support(x); };
    if (name == "max-support") return [](Nat x) { return max_support(x); };
    if (name == "min-max") return [](Nat x) { return min_max_label(x); };
    if (name == "identity") return [](Nat x) { return x; };
    if (name == "popcount-parity") return [](Nat x) { return Nat(std::popcount(x) % 2); };
    throw UsageError("unknown Hindman colouring: " + name + " (constant, min-support, max-support, min-max, identity, popcount-parity)");
}

inline const char* family_name(Family f) { return f == Family::Ramsey ? "ramsey" : "hindman"; }

// Assumption-tagged facts go into every report summary.
inline nlohmann::json summarize_assumptions(const nlohmann::json& assumptions) {
    nlohmann::json list = nlohmann::json::array();
    Nat tagged = 0;
    for (const auto& a : assumptions) {
        if (a.value("tag", std::string{}) == "assumption") ++tagged;
        list.push_back(a);
    }
    return {{"assumption_count", tagged}, {"total", list.size()}, {"list", list}};
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Katetov-order toolkit: exact constructions, ideal membership, canonical Ramsey search, diagonalization engines and certificates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "katetov 1.0");

    std::uint64_t seed = 1;
    std::size_t depth = 0, stages_n = 0;
    Nat horizon = 0, upto = 0, n = 0, m = 3;
    std::string out_path, cert_path, in_path, set_s, ideal_s, colouring, scenario, P_s, Q_s, a_s, only_s;
    std::vector<std::string> in_paths;

    auto* construct = app.add_subcommand("construct", "build the greedy interval partition to a depth");
    construct->add_option("--depth", depth, "number of blocks")->required()->check(CLI::PositiveNumber);
    construct->add_option("--out", out_path, "write PartitionData here instead of stdout");
    construct->add_option("--cert", cert_path, "also write a construction certificate");
    construct->add_option("--seed", seed, "seed recorded in the certificate");

    auto* verify = app.add_subcommand("verify-construction", "check conditions (1)-(3) on a PartitionData file");
    verify->add_option("--in", in_path, "PartitionData JSON")->required();

    auto* weights = app.add_subcommand("weights", "w_S on each block and the weight below max of the last block");
    weights->add_option("--set", set_s, "set descriptor (JSON text or file)")->required();
    weights->add_option("--depth", depth, "partition depth")->required()->check(CLI::PositiveNumber);
    weights->add_option("--upto", upto, "also list w_S(m) for m below this");

    auto* member = app.add_subcommand("membership", "three-valued membership of a described set in an ideal");
    member->add_option("--ideal", ideal_s, "ideal descriptor (JSON text or file)")->required();
    member->add_option("--set", set_s, "set descriptor (JSON text or file)")->required();
    member->add_option("--horizon", horizon, "finite horizon")->required()->check(CLI::PositiveNumber);

    auto* rsearch = app.add_subcommand("ramsey-search", "least m-subset of [0,n) on whose pairs a named colouring is canonical");
    rsearch->add_option("--colouring", colouring, "constant, min, max, code, sum-parity")->required();
    rsearch->add_option("--n", n, "vertex bound")->required()->check(CLI::PositiveNumber);
    rsearch->add_option("--m", m, "subset size")->check(CLI::PositiveNumber);

    auto* hsearch = app.add_subcommand("hindman-search", "least block-disjoint m-sequence with canonical colouring on FS below a horizon");
    hsearch->add_option("--colouring", colouring, "constant, min-support, max-support, min-max, identity, popcount-parity")->required();
    hsearch->add_option("--horizon", horizon, "bound on finite sums")->required()->check(CLI::PositiveNumber);
    hsearch->add_option("--m", m, "sequence length")->check(CLI::PositiveNumber);

    auto* diag = app.add_subcommand("diagonalize", "run a diagonalization scenario");
    diag->add_option("--scenario", scenario, "bundled scenario name or path")->required();
    diag->add_option("--stages", stages_n, "override the number of stages")->check(CLI::PositiveNumber);
    diag->add_option("--cert", cert_path, "write a certificate");
    diag->add_option("--seed", seed, "seed recorded in the certificate");

    auto* reduce = app.add_subcommand("check-reduction", "P subset* Q gives the weighted summable ideal reduction");
    reduce->add_option("--P", P_s, "set descriptor")->required();
    reduce->add_option("--Q", Q_s, "set descriptor")->required();
    reduce->add_option("--depth", depth, "partition depth")->required()->check(CLI::PositiveNumber);
    reduce->add_option("--horizon", horizon, "finite horizon")->required()->check(CLI::PositiveNumber);
    reduce->add_option("--a", a_s, "dual set for the height-1 identity certificate");

    auto* cert = app.add_subcommand("certify", "recompute certificates and compare");
    cert->add_option("--in", in_paths, "certificate files")->required();

    auto* suite = app.add_subcommand("suite", "acceptance criteria 1-11");
    suite->add_option("--seed", seed, "seed for the randomized criteria");
    suite->add_option("--only", only_s, "comma-separated criterion numbers");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    using nlohmann::json;
    try {
        if (*construct) {
            auto p = build_partition(depth);
            if (out_path.empty()) out << p.to_json().dump(2) << '\n';
            else write_json_file(out_path, p.to_json());
            if (!cert_path.empty()) {
                CertifyContext ctx;
                write_json_file(cert_path, make_certificate("construction", {{"depth", depth}}, seed, ctx));
            }
            return kOk;
        }
        if (*verify) {
            auto j = read_json_file(in_path);
            PartitionData p;
            try {
                p = PartitionData::from_json(j);
            } catch (const std::exception& e) {
                throw UsageError(std::string("PartitionData schema: ") + e.what());
            }
            PartitionReport rep;
            try {
                rep = verify_partition(p);
            } catch (const StructuralError& e) {
                out << json{{"pass", false}, {"structural_error", e.what()}}.dump(2) << '\n';
                return kFail;
            }
            json failed = json::array();
            for (const auto& c : rep.checks)
                if (!c.pass) failed.push_back({{"condition", c.condition}, {"index", c.index}});
            auto report = rep.to_json();
            report["failed"] = failed;
            out << report.dump(2) << '\n';
            return rep.pass ? kOk : kFail;
        }
        if (*weights) {
            auto S = DescribedSet::from_json(json_arg(set_s, "--set"));
            auto p = std::make_shared<const PartitionData>(build_partition(depth));
            json blocks = json::array();
            for (std::size_t b = 0; b < p->depth(); ++b)
                blocks.push_back({{"block", b}, {"start", to_string(p->start[b])}, {"length", to_string(p->length[b])}, {"in_S", S.contains(b)},
                                  {"w", to_string(S.contains(b) ? p->r[b + 1] : p->r[b])}});
            json report = {{"set", S.to_json()}, {"depth", depth}, {"blocks", blocks}};
            const std::size_t last = p->depth() - 1;
            report["weight_below_max_last_block"] = encode_rational(weight_below(S, *p, p->end(last) - 1));
            if (upto > 0) {
                auto w = weight_fn(S, p);
                json vals = json::array();
                for (Nat x = 0; x < upto; ++x) vals.push_back(to_string(w(x)));
                report["values"] = vals;
            }
            out << report.dump(2) << '\n';
            return kOk;
        }
        if (*member) {
            IdealDescriptor id;
            try {
                id = ideal_from_json(json_arg(ideal_s, "--ideal"));
            } catch (const ScenarioError& e) {
                throw UsageError(e.what());
            }
            auto S = DescribedSet::from_json(json_arg(set_s, "--set"));
            out << membership(id, S, horizon).to_json().dump(2) << '\n';
            return kOk;
        }
        if (*rsearch) {
            if (m > n) throw UsageError("--m must not exceed --n");
            auto hit = canonical_ramsey_search(ramsey_colouring(colouring), n, m);
            json r = {{"colouring", colouring}, {"n", n}, {"m", m}, {"found", hit.has_value()}};
            if (hit) r["vertices"] = hit->vertices, r["case"] = hit->form.case_no, r["family"] = family_name(hit->form.family);
            out << r.dump(2) << '\n';
            return kOk;
        }
        if (*hsearch) {
            auto hit = canonical_hindman_search(hindman_colouring(colouring), horizon, m);
            json r = {{"colouring", colouring}, {"horizon", horizon}, {"m", m}, {"found", hit.has_value()}};
            if (hit) r["sequence"] = hit->sequence, r["case"] = hit->form.case_no, r["family"] = family_name(hit->form.family);
            out << r.dump(2) << '\n';
            return kOk;
        }
        if (*diag) {
            json sj;
            try {
                sj = load_scenario(scenario);
            } catch (const ScenarioError& e) {
                throw UsageError(e.what());
            }
            std::optional<std::size_t> st;
            if (stages_n > 0) st = stages_n;
            CertifyContext ctx;
            json c = make_certificate("diagonalization", {{"scenario", sj}, {"stages", st ? json(*st) : json(nullptr)}}, seed, ctx);
            json report = c["results"];
            report["summary"] = {{"status", report["status"]}, {"pass", report["pass"]}, {"stages", report["stages"].size()},
                                 {"contradictions", report["contradictions"].size()}, {"assumptions", summarize_assumptions(c["assumptions"])}};
            out << report.dump(2) << '\n';
            if (!cert_path.empty()) write_json_file(cert_path, c);
            return report["pass"].get<bool>() ? kOk : kFail;
        }
        if (*reduce) {
            auto P = DescribedSet::from_json(json_arg(P_s, "--P")), Q = DescribedSet::from_json(json_arg(Q_s, "--Q"));
            auto pp = std::make_shared<const PartitionData>(build_partition(depth));
            auto red = check_subset_reduction(P, Q, *pp, horizon);
            json report = {{"verdict", red.verdict.to_json()}};
            bool ok = red.verdict.value == Value::In;
            if (!a_s.empty()) {
                auto a = DescribedSet::from_json(json_arg(a_s, "--a"));
                ReductionClaim claim{sum_ideal_of(P, pp), sum_ideal_of(Q, pp), IdentityHeightOne{}};
                auto rc = check_reduction_witness(claim, a, 1, horizon);
                bool valid = rc && validate_certificate(*rc, claim.target, a);
                report["height_one_certificate"] = rc ? rc->to_json() : json(nullptr);
                report["certificate_valid"] = valid;
                ok = ok && valid;
            }
            out << report.dump(2) << '\n';
            return ok ? kOk : kFail;
        }
        if (*cert) {
            CertifyContext ctx;
            json rows = json::array();
            int worst = kOk;
            for (const auto& path : in_paths) {
                json c;
                CertifyOutcome o;
                try {
                    c = read_json_file(path);
                    o = certify(c, ctx);
                } catch (const UsageError& e) {
                    o = {kUsage, "", e.what()};
                }
                json row = {{"file", path}, {"exit", o.exit_code}, {"pass", o.exit_code == 0}, {"message", o.message}};
                if (!o.field.empty()) row["field"] = o.field;
                if (c.is_object() && c.contains("assumptions")) row["assumptions"] = summarize_assumptions(c["assumptions"]);
                rows.push_back(row);
                worst = std::max(worst, o.exit_code);
            }
            out << json{{"certificates", rows}}.dump(2) << '\n';
            return worst;
        }
        if (*suite) {
            std::set<int> only;
            std::stringstream ss(only_s);
            for (std::string tok; std::getline(ss, tok, ',');) {
                if (tok.empty()) continue;
                int id = 0;
                try {
                    id = std::stoi(tok);
                } catch (const std::exception&) {
                    throw UsageError("--only takes criterion numbers 1-11");
                }
                if (id < 1 || id > 11) throw UsageError("--only takes criterion numbers 1-11");
                only.insert(id);
            }
            auto results = run_acceptance(seed, only, out);
            bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass(); });
            out << (all ? "ALL PASS" : "SOME FAIL") << " (" << results.size() << " criteria, seed " << seed << ")\n";
            return all ? kOk : kFail;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed input: " << e.what() << '\n';
        return kUsage;
    } catch (const HorizonExhausted& e) {
        err << "horizon exhausted: " << e.what() << '\n';
        return kHorizon;
    } catch (const StageStarvation& e) {
        err << "stage starvation: " << e.what() << '\n';
        return kHorizon;
    } catch (const HorizonExceeded& e) {
        err << "horizon exceeded: " << e.what() << '\n';
        return kHorizon;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace katetov::cli
