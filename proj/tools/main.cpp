// Command-line front end: generate/ingest -> scenarios -> build -> solve ->
// verify -> compare -> report. Exit codes: 0 success, 1 usage, 2
// validation/verification failure, 3 reference-engine limit.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tnepfacts/analysis.hpp"
#include "tnepfacts/formulations.hpp"
#include "tnepfacts/grid.hpp"
#include "tnepfacts/milp.hpp"
#include "tnepfacts/polyhedra.hpp"
#include "tnepfacts/refsolver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tnepfacts;

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string manifest_hash(const json& manifest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(manifest.dump())));
    return buf;
}

// TNEP_FACTS_OUT overrides --out when set.
std::string resolve_out(const std::string& flag_out) {
    const char* env = std::getenv("TNEP_FACTS_OUT");
    if (env != nullptr && *env != '\0') return env;
    return flag_out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string prepare_out_dir(const std::string& flag_out, json manifest) {
    const std::string dir = resolve_out(flag_out);
    fs::create_directories(dir);
    manifest["manifest_hash"] = manifest_hash(manifest);
    write_text(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
    return dir;
}

struct CostFlags {
    CostConfig costs;
    void attach(CLI::App* cmd) {
        cmd->add_option("--imbalance-penalty", costs.imbalance_penalty_per_mwh,
                        "imbalance penalty, $/MWh")
            ->capture_default_str();
        cmd->add_option("--capacity-cost", costs.capacity_cost_per_mw_km,
                        "capacity upgrade cost, $/MW-km")
            ->capture_default_str();
        cmd->add_option("--tcsc-cost", costs.tcsc_cost_per_mva, "device cost, $/MVA")
            ->capture_default_str();
    }
};

std::vector<Scenario> obtain_scenarios(const Network& net, const std::string& series_path,
                                       const std::string& scenarios_path) {
    if (!scenarios_path.empty()) return load_scenarios(scenarios_path, net);
    if (!series_path.empty()) {
        const HourlyTimeSeries ts = load_series(series_path, net);
        return select_scenarios(net, ts);
    }
    throw CLI::ValidationError("--series or --scenarios is required");
}

json stats_json(const ModelIR& model, const std::string& hash) {
    const ModelStats st = model_stats(model);
    return json{{"formulation", model.meta.formulation},
                {"n_vars", st.n_vars},
                {"n_binary", st.n_binary},
                {"n_integer", st.n_integer},
                {"n_constraints", st.n_constraints},
                {"manifest_hash", hash}};
}

json validation_json(const ValidationReport& r) {
    return json{{"max_violation",
                 {{"balance", r.balance},
                  {"flow", r.flow},
                  {"thermal", r.thermal},
                  {"angle", r.angle},
                  {"disjunction", r.disjunction},
                  {"facet_rows", r.facet_rows}}},
                {"integrality", r.integrality},
                {"tol", r.tol},
                {"pass", r.pass},
                {"notes", r.notes}};
}

json summary_json(const PlanSummary& s) {
    return json{{"total_cost", s.total_cost},
                {"capacity_upgrade_cost", s.capacity_upgrade_cost},
                {"tcsc_cost", s.tcsc_cost},
                {"nonrenewable_generation_cost", s.nonrenewable_generation_cost},
                {"imbalance_penalty_cost", s.imbalance_penalty_cost},
                {"unserved_energy_mwh", s.unserved_energy_mwh},
                {"unserved_energy_mean_mwh", s.unserved_energy_mean_mwh},
                {"overserved_energy_mwh", s.overserved_energy_mwh},
                {"curtailed_energy_mwh", s.curtailed_energy_mwh},
                {"curtailed_energy_mean_mwh", s.curtailed_energy_mean_mwh},
                {"upgrades_by_level", s.upgrades_by_level},
                {"tcsc_count", s.tcsc_count}};
}

json facet_report_json(const FacetReport& rep) {
    json checks = json::array();
    for (const FacetCheck& c : rep.checks)
        checks.push_back(json{{"name", c.name},
                              {"applicable", c.applicable},
                              {"valid", c.valid},
                              {"tight_points", c.tight_points},
                              {"affine_rank", c.affine_rank},
                              {"is_facet", c.is_facet}});
    return json{{"params",
                 {{"theta_min", rep.params.theta_min},
                  {"theta_max", rep.params.theta_max},
                  {"db_min", rep.params.db_min},
                  {"db_max", rep.params.db_max},
                  {"flow_cap", rep.params.flow_cap}}},
                {"degenerate", rep.degenerate},
                {"all_facets", rep.all_facets()},
                {"checks", checks}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission expansion planning with series-compensation devices"};
    app.require_subcommand(1);
    int rc = 0;

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "write a synthetic network + hourly series");
    struct {
        std::uint64_t seed = 0;
        int buses = 4, branches = 4, gens = 4, hours = 336;
        double renewable_frac = 0.5;
        std::string out = ".";
    } g;
    gen->add_option("--seed", g.seed, "RNG seed")->capture_default_str();
    gen->add_option("--buses", g.buses)->capture_default_str();
    gen->add_option("--branches", g.branches)->capture_default_str();
    gen->add_option("--gens", g.gens)->capture_default_str();
    gen->add_option("--renewable-frac", g.renewable_frac)->capture_default_str();
    gen->add_option("--hours", g.hours)->capture_default_str();
    gen->add_option("--out", g.out, "output directory")->capture_default_str();
    gen->callback([&] {
        const auto [net, ts] = synth_network(g.seed, g.buses, g.branches, g.gens,
                                             g.renewable_frac, g.hours);
        const std::string dir = prepare_out_dir(
            g.out, json{{"command", "generate"},
                        {"seed", g.seed},
                        {"dims", {g.buses, g.branches, g.gens}},
                        {"renewable_frac", g.renewable_frac},
                        {"hours", g.hours}});
        save_network(net, (fs::path(dir) / "network.json").string());
        save_series(ts, net, (fs::path(dir) / "series.csv").string());
        std::cout << "wrote " << dir << "/network.json (" << net.buses.size() << " buses, "
                  << net.branches.size() << " branches, " << net.generators.size()
                  << " generators) and series.csv (" << ts.n_hours() << " hours)\n";
    });

    // ---- scenarios ----
    auto* scn = app.add_subcommand("scenarios", "select the 10 extreme-hour scenarios");
    struct {
        std::string net, series, out = ".";
    } sc;
    scn->add_option("--net", sc.net, "network JSON")->required();
    scn->add_option("--series", sc.series, "time-series CSV")->required();
    scn->add_option("--out", sc.out)->capture_default_str();
    scn->callback([&] {
        const Network net = load_network(sc.net);
        const HourlyTimeSeries ts = load_series(sc.series, net);
        const std::vector<Scenario> scenarios = select_scenarios(net, ts);
        const std::string dir = prepare_out_dir(
            sc.out,
            json{{"command", "scenarios"}, {"net", sc.net}, {"series", sc.series}});
        save_scenarios(scenarios, (fs::path(dir) / "scenarios.json").string());
        for (const Scenario& s : scenarios)
            std::cout << s.id << " " << s.season << " " << s.criterion << " "
                      << s.source_hour << "\n";
    });

    // ---- build ----
    auto* bld = app.add_subcommand("build", "emit one formulation as MPS + stats JSON");
    struct {
        std::string net, series, scenarios, formulation = "tnep", bigm = "global";
        bool tighten = false, emit_eq22 = true;
        std::string out = ".";
        CostFlags cf;
    } b;
    bld->add_option("--net", b.net)->required();
    bld->add_option("--series", b.series);
    bld->add_option("--scenarios", b.scenarios);
    bld->add_option("--formulation", b.formulation, "tnep|fbsm|fbsmi|facets")
        ->check(CLI::IsMember({"tnep", "fbsm", "fbsmi", "facets"}))
        ->capture_default_str();
    bld->add_option("--bigm", b.bigm, "global|per-branch")
        ->check(CLI::IsMember({"global", "per-branch"}))
        ->capture_default_str();
    bld->add_flag("--tighten-bounds,!--no-tighten-bounds", b.tighten,
                  "pre-shrink angle boxes from flow caps");
    bld->add_flag("--emit-eq22,!--no-emit-eq22", b.emit_eq22,
                  "emit the redundant device-capacity rows");
    bld->add_option("--out", b.out)->capture_default_str();
    b.cf.attach(bld);
    auto do_build = [](const std::string& kind_name, const std::string& bigm,
                       const Network& net, const std::vector<Scenario>& scenarios,
                       const CostConfig& costs, bool tighten, bool emit_eq22) {
        FormulationKind kind = formulation_from_string(kind_name);
        if (kind == FormulationKind::Fbsm && bigm == "per-branch")
            kind = FormulationKind::Fbsmi;
        else if (bigm != "global" && bigm != "per-branch")
            throw ValidationError("--bigm must be global or per-branch");
        return build_formulation(kind, net, scenarios, costs, tighten, emit_eq22);
    };
    bld->callback([&] {
        const Network net = load_network(b.net);
        const std::vector<Scenario> scenarios = obtain_scenarios(net, b.series, b.scenarios);
        validate_costs(b.cf.costs);
        const ModelIR model = do_build(b.formulation, b.bigm, net, scenarios, b.cf.costs,
                                       b.tighten, b.emit_eq22);
        const json manifest{{"command", "build"},
                            {"net", b.net},
                            {"series", b.series},
                            {"scenarios", b.scenarios},
                            {"formulation", b.formulation},
                            {"bigm", b.bigm},
                            {"tighten_bounds", b.tighten},
                            {"emit_eq22", b.emit_eq22}};
        const std::string dir = prepare_out_dir(b.out, manifest);
        const std::string kind = model.meta.formulation;
        write_mps(model, (fs::path(dir) / ("model_" + kind + ".mps")).string());
        const json st = stats_json(model, manifest_hash(manifest));
        write_text(fs::path(dir) / ("stats_" + kind + ".json"), st.dump(2) + "\n");
        std::cout << st.dump() << "\n";
    });

    // ---- solve ----
    auto* slv = app.add_subcommand("solve", "build and solve one formulation");
    struct {
        std::string net, series, scenarios, formulation = "tnep", bigm = "global";
        bool tighten = false, emit_eq22 = true;
        std::string engine = "ref", solution;
        double gap = 1e-3;
        long node_limit = 0;
        std::string out = ".";
        CostFlags cf;
    } so;
    slv->add_option("--net", so.net)->required();
    slv->add_option("--series", so.series);
    slv->add_option("--scenarios", so.scenarios);
    slv->add_option("--formulation", so.formulation)
        ->check(CLI::IsMember({"tnep", "fbsm", "fbsmi", "facets"}))
        ->capture_default_str();
    slv->add_option("--bigm", so.bigm)
        ->check(CLI::IsMember({"global", "per-branch"}))
        ->capture_default_str();
    slv->add_flag("--tighten-bounds,!--no-tighten-bounds", so.tighten, "");
    slv->add_flag("--emit-eq22,!--no-emit-eq22", so.emit_eq22, "");
    slv->add_option("--engine", so.engine, "ref|external")
        ->check(CLI::IsMember({"ref", "external"}))
        ->capture_default_str();
    slv->add_option("--solution", so.solution, "externally produced solution file");
    slv->add_option("--gap", so.gap, "relative optimality gap")->capture_default_str();
    slv->add_option("--node-limit", so.node_limit)->capture_default_str();
    slv->add_option("--out", so.out)->capture_default_str();
    so.cf.attach(slv);
    slv->callback([&] {
        const Network net = load_network(so.net);
        const std::vector<Scenario> scenarios = obtain_scenarios(net, so.series, so.scenarios);
        validate_costs(so.cf.costs);
        const ModelIR model = do_build(so.formulation, so.bigm, net, scenarios, so.cf.costs,
                                       so.tighten, so.emit_eq22);
        const FormulationKind kind = formulation_from_string(model.meta.formulation);
        const json manifest{{"command", "solve"},      {"net", so.net},
                            {"series", so.series},     {"scenarios", so.scenarios},
                            {"formulation", so.formulation}, {"bigm", so.bigm},
                            {"tighten_bounds", so.tighten},  {"emit_eq22", so.emit_eq22},
                            {"engine", so.engine},     {"gap", so.gap}};
        const std::string dir = prepare_out_dir(so.out, manifest);
        const std::string hash = manifest_hash(manifest);
        const std::string kname = model.meta.formulation;

        SolutionRecord sol;
        if (so.engine == "ref") {
            BnBConfig cfg;
            cfg.rel_gap = so.gap;
            cfg.node_limit = so.node_limit;
            auto [record, stats] = solve_milp(model, cfg);
            sol = std::move(record);
            std::cout << "status " << to_string(sol.status) << " objective "
                      << format_double(sol.objective_value) << " bound "
                      << format_double(stats.bound) << " nodes " << stats.nodes << "\n";
        } else if (so.engine == "external") {
            const fs::path mps = fs::path(dir) / ("model_" + kname + ".mps");
            write_mps(model, mps.string());
            if (so.solution.empty()) {
                std::cout << "wrote " << mps.string()
                          << "; solve it externally and re-run with --solution <file>\n";
                return;
            }
            sol = read_solution(so.solution, model);
            for (const std::string& w : sol.warnings) std::cerr << "warning: " << w << "\n";
        } else {
            throw CLI::ValidationError("--engine must be ref or external");
        }

        const bool usable = sol.status == SolStatus::Optimal ||
                            sol.status == SolStatus::Feasible ||
                            (sol.status == SolStatus::Limit && !sol.values.empty());
        if (!usable) {
            std::cout << "no solution to report (status " << to_string(sol.status) << ")\n";
            rc = sol.status == SolStatus::Limit ? 3 : 2;
            return;
        }
        if (sol.status == SolStatus::Limit) rc = 3;  // incumbent written below
        write_solution(sol, (fs::path(dir) / ("solution_" + kname + ".sol")).string());
        const ValidationReport rep = validate_solution(net, scenarios, kind, sol);
        json vr = validation_json(rep);
        vr["manifest_hash"] = hash;
        write_text(fs::path(dir) / ("validation_" + kname + ".json"), vr.dump(2) + "\n");
        const PlanSummary summary = summarize_plan(net, scenarios, so.cf.costs, sol);
        json sj = summary_json(summary);
        sj["manifest_hash"] = hash;
        write_text(fs::path(dir) / ("summary_" + kname + ".json"), sj.dump(2) + "\n");
        if (!rep.pass) {
            std::cerr << "solution failed validation";
            for (const std::string& n : rep.notes) std::cerr << "; " << n;
            std::cerr << "\n";
            rc = 2;
        }
    });

    // ---- verify ----
    auto* ver = app.add_subcommand("verify",
                                   "facet oracle report, or validation of a solution file");
    struct {
        double theta_min = -0.6, theta_max = 0.6, db_min = -2.0, db_max = 3.0,
               flow_cap = 1000.0;
        long samples = 0;
        std::uint64_t seed = 0;
        std::string net, series, scenarios, formulation = "facets", solution;
    } v;
    ver->add_option("--theta-min", v.theta_min)->capture_default_str();
    ver->add_option("--theta-max", v.theta_max)->capture_default_str();
    ver->add_option("--db-min", v.db_min)->capture_default_str();
    ver->add_option("--db-max", v.db_max)->capture_default_str();
    ver->add_option("--flow-cap", v.flow_cap)->capture_default_str();
    ver->add_option("--samples", v.samples, "also Monte Carlo the relaxation containment")
        ->capture_default_str();
    ver->add_option("--seed", v.seed)->capture_default_str();
    ver->add_option("--net", v.net);
    ver->add_option("--series", v.series);
    ver->add_option("--scenarios", v.scenarios);
    ver->add_option("--formulation", v.formulation)
        ->check(CLI::IsMember({"tnep", "fbsm", "fbsmi", "facets"}))
        ->capture_default_str();
    ver->add_option("--solution", v.solution, "solution file to validate");
    ver->callback([&] {
        if (!v.solution.empty()) {
            const Network net = load_network(v.net);
            const std::vector<Scenario> scenarios =
                obtain_scenarios(net, v.series, v.scenarios);
            const FormulationKind kind = formulation_from_string(v.formulation);
            CostConfig costs;
            const ModelIR model = build_formulation(kind, net, scenarios, costs);
            const SolutionRecord sol = read_solution(v.solution, model);
            const ValidationReport rep = validate_solution(net, scenarios, kind, sol);
            std::cout << validation_json(rep).dump(2) << "\n";
            if (!rep.pass) {
                std::cerr << "validation failed";
                for (const std::string& n : rep.notes) std::cerr << "; " << n;
                std::cerr << "\n";
                rc = 2;
            }
            return;
        }
        DisjunctBlockParams params{v.theta_min, v.theta_max, v.db_min, v.db_max, v.flow_cap};
        const FacetReport rep = verify_facets(params);
        json out = facet_report_json(rep);
        if (v.samples > 0) {
            const ContainmentSample cs =
                relaxation_containment_sample(params, v.samples, v.seed);
            out["containment"] = json{{"n_samples", cs.n_samples},
                                      {"big_m_feasible", cs.big_m_feasible},
                                      {"hull_feasible", cs.hull_feasible},
                                      {"containment_violations", cs.containment_violations},
                                      {"strictness_fraction", cs.strictness_fraction}};
            if (cs.containment_violations > 0) rc = 2;
        }
        std::cout << out.dump(2) << "\n";
        if (rep.degenerate)
            std::cerr << "warning: degenerate parameters, facet checks not applicable\n";
        else if (!rep.all_facets())
            rc = 2;
    });

    // ---- compare ----
    auto* cmp = app.add_subcommand("compare", "all four formulations side by side");
    struct {
        std::string net, series, scenarios, engine = "ref", solutions;
        bool tighten = false, emit_eq22 = true;
        double gap = 1e-3;
        std::string out = ".";
        CostFlags cf;
    } c;
    cmp->add_option("--net", c.net)->required();
    cmp->add_option("--series", c.series);
    cmp->add_option("--scenarios", c.scenarios);
    cmp->add_option("--engine", c.engine, "ref|external")
        ->check(CLI::IsMember({"ref", "external"}))
        ->capture_default_str();
    cmp->add_option("--solutions", c.solutions,
                    "directory with <formulation>.sol files (external engine)");
    cmp->add_flag("--tighten-bounds,!--no-tighten-bounds", c.tighten, "");
    cmp->add_flag("--emit-eq22,!--no-emit-eq22", c.emit_eq22, "");
    cmp->add_option("--gap", c.gap)->capture_default_str();
    cmp->add_option("--out", c.out)->capture_default_str();
    c.cf.attach(cmp);
    cmp->callback([&] {
        const Network net = load_network(c.net);
        const std::vector<Scenario> scenarios = obtain_scenarios(net, c.series, c.scenarios);
        validate_costs(c.cf.costs);
        const json manifest{{"command", "compare"}, {"net", c.net},
                            {"series", c.series},   {"scenarios", c.scenarios},
                            {"engine", c.engine},   {"gap", c.gap},
                            {"tighten_bounds", c.tighten}, {"emit_eq22", c.emit_eq22}};
        const std::string dir = prepare_out_dir(c.out, manifest);

        struct Row {
            std::string kind, status = "-";
            ModelStats stats;
            double objective = 0.0, bound = 0.0, gap = 0.0;
            long nodes = 0;
            bool solved = false;
            std::string note;
        };
        std::vector<Row> rows;
        bool any_limit = false;

        for (const FormulationKind kind :
             {FormulationKind::Tnep, FormulationKind::Fbsm, FormulationKind::Fbsmi,
              FormulationKind::Facets}) {
            Row row;
            row.kind = to_string(kind);
            const ModelIR model =
                build_formulation(kind, net, scenarios, c.cf.costs, c.tighten, c.emit_eq22);
            row.stats = model_stats(model);
            if (c.engine == "ref") {
                try {
                    BnBConfig cfg;
                    cfg.rel_gap = c.gap;
                    auto [sol, stats] = solve_milp(model, cfg);
                    row.status = to_string(sol.status);
                    row.solved =
                        sol.status == SolStatus::Optimal || sol.status == SolStatus::Limit;
                    row.objective = sol.objective_value;
                    row.bound = stats.bound;
                    row.gap = stats.gap;
                    row.nodes = stats.nodes;
                } catch (const EngineLimitError& e) {
                    row.status = "limit";
                    row.note = e.what();
                    any_limit = true;
                }
            } else {
                const fs::path sol_path = fs::path(c.solutions) / (row.kind + ".sol");
                if (c.solutions.empty() || !fs::exists(sol_path)) {
                    row.status = "missing";
                    row.note = "no solution file " + sol_path.string();
                } else {
                    const SolutionRecord sol = read_solution(sol_path.string(), model);
                    row.status = to_string(sol.status);
                    row.solved = sol.status == SolStatus::Optimal ||
                                 sol.status == SolStatus::Feasible;
                    row.objective = sol.objective_value;
                    row.bound = sol.bound == -kInf ? sol.objective_value : sol.bound;
                }
            }
            rows.push_back(std::move(row));
        }

        std::printf("%-8s %8s %8s %10s %16s %16s %10s %8s\n", "model", "vars", "constrs",
                    "status", "objective", "bound", "gap", "nodes");
        for (const Row& r : rows) {
            std::printf("%-8s %8d %8d %10s %16.6g %16.6g %10.3g %8ld\n", r.kind.c_str(),
                        r.stats.n_vars, r.stats.n_constraints, r.status.c_str(), r.objective,
                        r.bound, r.gap, r.nodes);
            if (!r.note.empty()) std::printf("  note: %s\n", r.note.c_str());
        }

        json jrows = json::array();
        for (const Row& r : rows)
            jrows.push_back(json{{"formulation", r.kind},
                                 {"n_vars", r.stats.n_vars},
                                 {"n_binary", r.stats.n_binary},
                                 {"n_integer", r.stats.n_integer},
                                 {"n_constraints", r.stats.n_constraints},
                                 {"status", r.status},
                                 {"objective", r.objective},
                                 {"bound", r.bound},
                                 {"gap", r.gap},
                                 {"nodes", r.nodes},
                                 {"note", r.note}});
        json out{{"rows", jrows}, {"manifest_hash", manifest_hash(manifest)}};

        // The three device formulations describe the same feasible set; their
        // optima must agree within the solver gaps.
        const Row* fb = nullptr;
        bool agree = true;
        for (const Row& r : rows) {
            if (r.kind == "tnep" || !r.solved) continue;
            if (fb == nullptr) {
                fb = &r;
                continue;
            }
            const double scale = std::max({1.0, std::abs(fb->objective), std::abs(r.objective)});
            if (std::abs(fb->objective - r.objective) > (2.0 * c.gap + 1e-9) * scale)
                agree = false;
        }
        out["facts_objectives_agree"] = agree;
        write_text(fs::path(dir) / "comparison.json", out.dump(2) + "\n");
        if (any_limit) {
            std::cerr << "reference engine refused at least one formulation; "
                         "use --engine external with solution files\n";
            rc = 3;
        } else if (!agree) {
            std::cerr << "device formulation objectives disagree beyond the gap\n";
            rc = 2;
        }
    });

    // ---- report ----
    auto* rep = app.add_subcommand("report", "summary + geo CSVs from a solution file");
    struct {
        std::string net, series, scenarios, formulation = "tnep", solution;
        std::string out = ".";
        CostFlags cf;
    } r;
    rep->add_option("--net", r.net)->required();
    rep->add_option("--series", r.series);
    rep->add_option("--scenarios", r.scenarios);
    rep->add_option("--formulation", r.formulation)
        ->check(CLI::IsMember({"tnep", "fbsm", "fbsmi", "facets"}))
        ->capture_default_str();
    rep->add_option("--solution", r.solution)->required();
    rep->add_option("--out", r.out)->capture_default_str();
    r.cf.attach(rep);
    rep->callback([&] {
        const Network net = load_network(r.net);
        const std::vector<Scenario> scenarios = obtain_scenarios(net, r.series, r.scenarios);
        validate_costs(r.cf.costs);
        const FormulationKind kind = formulation_from_string(r.formulation);
        const ModelIR model = build_formulation(kind, net, scenarios, r.cf.costs);
        const SolutionRecord sol = read_solution(r.solution, model);
        const json manifest{{"command", "report"},
                            {"net", r.net},
                            {"formulation", r.formulation},
                            {"solution", r.solution}};
        const std::string dir = prepare_out_dir(r.out, manifest);
        const std::string hash = manifest_hash(manifest);

        const ValidationReport vrep = validate_solution(net, scenarios, kind, sol);
        json vr = validation_json(vrep);
        vr["manifest_hash"] = hash;
        write_text(fs::path(dir) / ("validation_" + r.formulation + ".json"),
                   vr.dump(2) + "\n");
        if (!vrep.pass) {
            std::cerr << "solution failed validation";
            for (const std::string& n : vrep.notes) std::cerr << "; " << n;
            std::cerr << "\n";
            rc = 2;
            return;
        }
        const PlanSummary summary = summarize_plan(net, scenarios, r.cf.costs, sol);
        json sj = summary_json(summary);
        sj["manifest_hash"] = hash;
        write_text(fs::path(dir) / ("summary_" + r.formulation + ".json"), sj.dump(2) + "\n");
        for (const auto& [metric, name] :
             {std::pair{GeoMetric::Unserved, "unserved"},
              std::pair{GeoMetric::Curtailed, "curtailed"},
              std::pair{GeoMetric::Investment, "investment"}})
            emit_geo_csv(net, scenarios, sol, metric,
                         (fs::path(dir) / ("geo_" + std::string(name) + ".csv")).string());
        std::cout << sj.dump(2) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const EngineLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
