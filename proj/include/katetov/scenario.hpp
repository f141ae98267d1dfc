#pragma once
// Scenario files: JSON documents tagged by "engine" that declare critical-node
// label models for the four diagonalization engines, labelled trees for the
// separation checks, and tree/run pairs for the collision check.

#include "katetov/hindman_diag.hpp"
#include "katetov/posdiff.hpp"
#include "katetov/pwfin.hpp"
#include "katetov/ramsey_diag.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace katetov {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline IdealDescriptor ideal_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sum-s") {
        auto p = std::make_shared<const PartitionData>(build_partition(j.at("depth").get<std::size_t>()));
        return sum_ideal_of(DescribedSet::from_json(j.at("set")), p);
    }
    for (IdealKind k : {IdealKind::Fin, IdealKind::SumHarmonic, IdealKind::Den0, IdealKind::Diff, IdealKind::Hindman, IdealKind::Ramsey,
                        IdealKind::PowerSet})
        if (kind == ideal_kind_name(k)) return IdealDescriptor::simple(k);
    throw ScenarioError("unsupported ideal kind in scenario: " + kind);
}

namespace detail {

inline Label label_from_json(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "bottom") return std::nullopt;
    return j.get<Nat>();
}

inline std::optional<BigNat> big_label_from_json(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "bottom") return std::nullopt;
    return j.is_string() ? parse_bignat(j.get<std::string>()) : big(j.get<Nat>());
}

inline BigNat big_from_json(const nlohmann::json& j) { return j.is_string() ? parse_bignat(j.get<std::string>()) : big(j.get<Nat>()); }

template <class E>
E enum_by_name(const std::string& s, std::initializer_list<E> all, const char* (*name)(E), const char* what) {
    for (E e : all)
        if (s == name(e)) return e;
    throw ScenarioError(std::string("unknown ") + what + ": " + s);
}

inline std::string assumption_of(const nlohmann::json& m) {
    if (!m.contains("assumption")) throw ScenarioError("model " + m.value("name", std::string("?")) + " lacks its tagged assumption");
    return m["assumption"].get<std::string>();
}

} // namespace detail

inline PwfinScenario pwfin_from_json(const nlohmann::json& j) {
    PwfinScenario sc;
    sc.name = j.at("name");
    sc.depth = j.value("depth", std::size_t{12});
    sc.stages = j.value("stages", std::size_t{6});
    if (j.contains("P")) sc.P = DescribedSet::from_json(j["P"]);
    if (j.contains("Q")) sc.Q = DescribedSet::from_json(j["Q"]);
    for (const auto& m : j.at("models")) {
        PwModel pm;
        pm.name = m.at("name");
        pm.base = detail::enum_by_name<PwBase>(m.at("rule"), {PwBase::Identity, PwBase::PrevBlockMax, PwBase::Bottom, PwBase::Constant}, pw_base_name, "pwfin rule");
        if (m.contains("constant")) pm.constant = detail::big_from_json(m["constant"]);
        for (const auto& e : m.value("table", nlohmann::json::array())) pm.table[detail::big_from_json(e.at("x"))] = detail::big_label_from_json(e.at("label"));
        pm.assumption = detail::assumption_of(m);
        sc.models.push_back(std::move(pm));
    }
    return sc;
}

inline PosdiffScenario posdiff_from_json(const nlohmann::json& j) {
    PosdiffScenario sc;
    sc.name = j.at("name");
    sc.horizon = j.value("horizon", Nat{5000});
    sc.stages = j.value("stages", std::size_t{6});
    for (const auto& m : j.at("models")) {
        PdModel pm;
        pm.name = m.at("name");
        pm.base = detail::enum_by_name<PdBase>(m.at("rule"), {PdBase::Identity, PdBase::HarmonicBlocks, PdBase::Constant, PdBase::Bottom}, pd_base_name,
                                               "posdiff rule");
        pm.constant = m.value("constant", Nat{0});
        for (const auto& e : m.value("table", nlohmann::json::array())) pm.table[e.at("x").get<Nat>()] = detail::label_from_json(e.at("label"));
        pm.assumption = detail::assumption_of(m);
        sc.models.push_back(std::move(pm));
    }
    return sc;
}

inline HindmanScenario hindman_from_json(const nlohmann::json& j) {
    HindmanScenario sc;
    sc.name = j.at("name");
    sc.horizon = j.value("horizon", Nat{1} << 21);
    sc.stages = j.value("stages", std::size_t{10});
    sc.verify_prefix = j.value("verify_prefix", std::size_t{8});
    for (const auto& m : j.at("models")) {
        HmModel hm;
        hm.name = m.at("name");
        hm.rule = detail::enum_by_name<HmRule>(m.at("rule"), {HmRule::Constant, HmRule::MinSupport, HmRule::MaxSupport, HmRule::MinMax, HmRule::Identity},
                                               hm_rule_name, "hindman rule");
        hm.constant = m.value("constant", Nat{0});
        hm.declared_case = m.at("case").get<int>();
        const auto& H = m.at("H");
        hm.H = H.is_array() ? H.get<std::vector<Nat>>() : powers_from(H.at("powers_from").get<Nat>());
        for (const auto& e : m.value("table", nlohmann::json::array())) hm.table[e.at("x").get<Nat>()] = detail::label_from_json(e.at("label"));
        hm.assumption = detail::assumption_of(m);
        sc.models.push_back(std::move(hm));
    }
    return sc;
}

inline RamseyScenario ramsey_from_json(const nlohmann::json& j) {
    RamseyScenario sc;
    sc.name = j.at("name");
    sc.vertex_horizon = j.value("vertex_horizon", Nat{1024});
    sc.stages = j.value("stages", std::size_t{10});
    sc.verify_prefix = j.value("verify_prefix", std::size_t{8});
    for (const auto& m : j.at("models")) {
        RmModel rm;
        rm.name = m.at("name");
        rm.rule = detail::enum_by_name<RmRule>(m.at("rule"), {RmRule::Constant, RmRule::Min, RmRule::Max, RmRule::Code}, rm_rule_name, "ramsey rule");
        rm.constant = m.value("constant", Nat{0});
        rm.declared_case = m.at("case").get<int>();
        if (m.contains("T")) rm.T = m["T"].get<std::vector<Nat>>();
        for (const auto& e : m.value("table", nlohmann::json::array())) {
            auto pr = e.at("pair").get<std::vector<Nat>>();
            if (pr.size() != 2 || pr[0] >= pr[1]) throw ScenarioError("ramsey table pair must be [a, b] with a < b");
            rm.table[{pr[0], pr[1]}] = detail::label_from_json(e.at("label"));
        }
        rm.assumption = detail::assumption_of(m);
        sc.models.push_back(std::move(rm));
    }
    return sc;
}

// ---- labelled-tree scenarios ----

struct TreeScenario {
    std::string name;
    IdealDescriptor ideal = IdealDescriptor::simple(IdealKind::Fin);
    Nat horizon = 64;
    FiniteTree tree;
    CoherentMap map;
    PositivityOracle oracle;
    nlohmann::json expect;
};

inline FiniteString string_from_json(const nlohmann::json& j) { return FiniteString{j.get<std::vector<Nat>>()}; }

inline TreeScenario tree_from_json(const nlohmann::json& j) {
    TreeScenario sc;
    sc.name = j.at("name");
    sc.ideal = ideal_from_json(j.at("ideal"));
    sc.horizon = j.value("horizon", Nat{64});
    sc.oracle = PositivityOracle(sc.ideal);
    for (const auto& p : j.value("paths", nlohmann::json::array())) sc.tree.add_path(string_from_json(p));
    for (const auto& a : j.value("assignments", nlohmann::json::array())) {
        auto s = string_from_json(a.at("node"));
        sc.tree.add_path(s);
        sc.map = extend_coherent(sc.map, s, a.at("value").get<Nat>());
    }
    for (const auto& s : j.value("successors", nlohmann::json::array()))
        sc.tree.described.insert_or_assign(string_from_json(s.at("node")), DescribedSet::from_json(s.at("set")));
    for (const auto& st : j.value("stipulations", nlohmann::json::array())) {
        auto node = string_from_json(st.at("node"));
        Value v = st.at("value") == "in" ? Value::In : st.at("value") == "out" ? Value::Out : Value::Unknown;
        std::string tag = st.at("tag"), note = st.value("note", std::string{});
        if (tag != "assumption" && tag != "derived") throw ScenarioError("stipulation tag must be assumption or derived");
        if (st.at("query") == "positive") sc.oracle.stipulate_positive(node, st.at("label").get<Nat>(), v, tag, note);
        else if (st.at("query") == "null") sc.oracle.stipulate_null_bottom(node, v, tag, note);
        else throw ScenarioError("stipulation query must be positive or null");
    }
    sc.expect = j.value("expect", nlohmann::json::object());
    return sc;
}

// Branching verdicts on internal nodes; leaves are where the horizon cut the tree.
inline std::map<FiniteString, Verdict> internal_branching(const FiniteTree& t, const IdealDescriptor& ideal, Nat horizon) {
    std::map<FiniteString, Verdict> out;
    for (const auto& s : t.nodes)
        if (!t.is_leaf(s)) out.emplace(s, in_dual(ideal, t.successor_set(s), horizon));
    return out;
}

inline bool all_in(const std::map<FiniteString, Verdict>& br) {
    return std::all_of(br.begin(), br.end(), [](const auto& e) { return e.second.value == Value::In; });
}

inline std::vector<FiniteString> maximal_paths(const FiniteTree& t) {
    std::vector<FiniteString> out;
    for (const auto& s : t.nodes)
        if (t.is_leaf(s)) out.push_back(s);
    return out;
}

inline nlohmann::json run_tree(const TreeScenario& sc) {
    using nlohmann::json;
    json run = {{"engine", "tree"}, {"scenario", sc.name}};
    auto br = internal_branching(sc.tree, sc.ideal, sc.horizon);
    json bj = json::array();
    for (const auto& [s, v] : br) bj.push_back({{"node", s.entries}, {"verdict", value_name(v.value)}, {"evidence", v.evidence}});
    run["branching"] = bj;
    run["all_in_branching"] = all_in(br);

    LabelledTree lt = compute_labels(sc.tree, sc.map, sc.oracle, sc.horizon);
    auto crit = find_critical(lt, sc.oracle, sc.horizon);
    json labels = json::array();
    for (const auto& [s, l] : lt.labels) labels.push_back({{"node", s.entries}, {"label", label_str(l)}, {"rule", lt.rule.at(s)}});
    run["labels"] = labels;
    json cj = json::array(), uj = json::array();
    for (const auto& s : crit.critical) cj.push_back(s.entries);
    for (const auto& s : crit.undetermined) uj.push_back(s.entries);
    run["critical"] = cj;
    run["undetermined"] = uj;
    json assumptions = json::array();
    for (const auto& q : lt.queries)
        if (q.answer.tag == "assumption") assumptions.push_back(q.to_json());
    for (const auto& q : crit.queries)
        if (q.answer.tag == "assumption") assumptions.push_back(q.to_json());
    run["assumptions"] = assumptions;

    const Label& root = lt.label(FiniteString{});
    run["root"] = label_str(root);
    CheckLog log;
    if (root) {
        auto path = path_value_search(lt, *root);
        json pj = json::array();
        if (path)
            for (const auto& s : *path) pj.push_back(s.entries);
        log.add("root labelled c has a path realizing c", path.has_value(), {{"path", pj}});
    } else {
        auto leaves = maximal_paths(sc.tree);
        bool assigned = std::all_of(leaves.begin(), leaves.end(), [&](const FiniteString& s) { return value_at(sc.map, s).has_value(); });
        run["maximal_paths_assigned"] = assigned;
        if (assigned) log.add("root bottom with assigned maximal paths has a critical node", !crit.critical.empty(), {{"critical", cj.size()}});
    }
    if (sc.expect.contains("root")) log.add("root label matches expectation", sc.expect["root"].get<std::string>() == label_str(root));
    if (sc.expect.contains("critical")) log.add("critical nodes match expectation", sc.expect["critical"] == cj);
    run["checks"] = log.json();
    run["stages"] = json::array();
    return run;
}

// ---- collision ----

// Looks for x ∈ D[i] with τ_i⌢x in an all-In-branching tree and reports the
// forbidden label ν(τ_i⌢x) ∈ C with the path that realizes it.
inline nlohmann::json collision_check(const LabelledTree& lt, const IdealDescriptor& ideal, Nat horizon, const FiniteString& tau,
                                      const std::vector<Nat>& C, const std::vector<Nat>& D_i) {
    using nlohmann::json;
    auto br = internal_branching(lt.tree, ideal, horizon);
    json rep = {{"tau", tau.entries}};
    for (const auto& [s, v] : br)
        if (v.value != Value::In) {
            rep["status"] = "rejected";
            rep["reason"] = "branching verdict " + std::string(value_name(v.value)) + " at " + s.str();
            return rep;
        }
    auto Ds = sorted_unique(D_i);
    for (Nat x : Ds) {
        FiniteString node = tau.child(x);
        if (!lt.tree.contains(node)) continue;
        const Label& c = lt.label(node);
        rep["x"] = x;
        rep["label"] = label_str(c);
        bool forbidden = c && std::binary_search(C.begin(), C.end(), *c);
        rep["label_in_C"] = forbidden;
        if (c)
            if (auto path = path_value_search(lt, *c, node)) {
                json pj = json::array();
                for (const auto& s : *path) pj.push_back(s.entries);
                rep["path"] = pj;
            }
        rep["status"] = forbidden && rep.contains("path") ? "collision" : "inconclusive";
        return rep;
    }
    rep["status"] = "inconclusive";
    rep["reason"] = "no element of D[i] is a successor of tau in the tree below the horizon";
    return rep;
}

struct CollisionScenario {
    std::string name;
    PosdiffScenario source;
    IdealDescriptor ideal = IdealDescriptor::simple(IdealKind::SumHarmonic);
    Nat horizon = 5000;
    Nat leaves_below = 40;
    std::size_t model = 0;
    DescribedSet root_successors = DescribedSet::omega();
};

inline nlohmann::json run_collision(const CollisionScenario& sc) {
    using nlohmann::json;
    json src = run_posdiff(sc.source);
    json run = {{"engine", "collision"}, {"scenario", sc.name}, {"stages", json::array()}, {"assumptions", src["assumptions"]}};
    if (src["status"] != "ok") throw ScenarioError("collision source run did not complete");
    // depth-1 tree under the critical root: leaf x carries the model's label of x
    auto labels = posdiff_labels(sc.source.models.at(sc.model), sc.leaves_below);
    FiniteTree t;
    CoherentMap m;
    for (Nat x = 0; x < sc.leaves_below; ++x) {
        FiniteString leaf = FiniteString{}.child(x);
        t.add_path(leaf);
        if (labels[x]) m = extend_coherent(m, leaf, *labels[x]);
    }
    t.described.insert_or_assign(FiniteString{}, sc.root_successors);
    PositivityOracle oracle(sc.ideal);
    LabelledTree lt = compute_labels(t, m, oracle, sc.horizon);
    auto crit = find_critical(lt, oracle, sc.horizon);
    run["root"] = label_str(lt.label(FiniteString{}));
    run["root_critical"] = std::find(crit.critical.begin(), crit.critical.end(), FiniteString{}) != crit.critical.end();
    std::vector<Nat> D_i;
    for (const auto& s : src["stages"])
        if (s["i"].get<std::size_t>() % sc.source.models.size() == sc.model)
            for (Nat x : s["D"].get<std::vector<Nat>>()) D_i.push_back(x);
    auto C = src["assembled"]["C"].get<std::vector<Nat>>();
    run["report"] = collision_check(lt, sc.ideal, sc.horizon, FiniteString{}, C, D_i);
    CheckLog log;
    log.add("source run invariants hold", run_passes(src));
    log.add("root is a critical node", run["root_critical"].get<bool>());
    log.add("collision found with label in C", run["report"]["status"] == "collision");
    run["checks"] = log.json();
    return run;
}

// ---- files ----

inline std::filesystem::path scenario_dir() {
    if (const char* d = std::getenv("KATETOV_SCENARIO_DIR")) return d;
#ifdef KATETOV_SCENARIO_SOURCE
    return KATETOV_SCENARIO_SOURCE;
#else
    return "scenarios";
#endif
}

// A bare name resolves to <scenario dir>/<name>.json; anything else is a path.
inline nlohmann::json load_scenario(const std::string& ref) {
    std::filesystem::path p = ref;
    if (!std::filesystem::exists(p)) p = scenario_dir() / (ref + ".json");
    std::ifstream in(p);
    if (!in) throw ScenarioError("scenario not found: " + ref);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError("scenario " + p.string() + " is not valid JSON: " + e.what());
    }
}

inline CollisionScenario collision_from_json(const nlohmann::json& j) {
    CollisionScenario sc;
    sc.name = j.at("name");
    const auto& src = j.at("source");
    sc.source = posdiff_from_json(src.is_string() ? load_scenario(src.get<std::string>()) : src);
    if (j.contains("ideal")) sc.ideal = ideal_from_json(j["ideal"]);
    sc.horizon = j.value("horizon", Nat{5000});
    sc.leaves_below = j.value("leaves_below", Nat{40});
    sc.model = j.value("model", std::size_t{0});
    if (j.contains("root_successors")) sc.root_successors = DescribedSet::from_json(j["root_successors"]);
    return sc;
}

// Runs any scenario document; the stage count override applies to the diagonalization engines.
inline nlohmann::json run_scenario(const nlohmann::json& j, std::optional<std::size_t> stages = std::nullopt) {
    const std::string engine = j.at("engine");
    if (engine == "pwfin") {
        auto sc = pwfin_from_json(j);
        if (stages) sc.stages = *stages;
        return run_pwfin(sc, build_partition(sc.depth));
    }
    if (engine == "posdiff") {
        auto sc = posdiff_from_json(j);
        if (stages) sc.stages = *stages;
        return run_posdiff(sc);
    }
    if (engine == "hindman") {
        auto sc = hindman_from_json(j);
        if (stages) sc.stages = *stages;
        return run_hindman(sc);
    }
    if (engine == "ramsey") {
        auto sc = ramsey_from_json(j);
        if (stages) sc.stages = *stages;
        return run_ramsey(sc);
    }
    if (engine == "tree") return run_tree(tree_from_json(j));
    if (engine == "collision") return run_collision(collision_from_json(j));
    throw ScenarioError("unknown scenario engine: " + engine);
}

} // namespace katetov
