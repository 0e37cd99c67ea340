// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 3-7 share a single sweep over the random instance set so
// each model is built and solved once.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/instance_gen.hpp"
#include "tnepfacts/analysis.hpp"
#include "tnepfacts/formulations.hpp"
#include "tnepfacts/milp.hpp"
#include "tnepfacts/polyhedra.hpp"
#include "tnepfacts/refsolver.hpp"

using namespace tnepfacts;
using namespace tnepfacts::testsupport;

namespace {

int g_failed = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    if (!pass) ++g_failed;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double relgap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// ---- criterion 1: exact model sizes at the reference dimensions ----
void criterion_1() {
    const auto [net, ts] = synth_network(7, 123, 255, 292, 154.0 / 292.0, 8);
    const std::vector<Scenario> scenarios = select_scenarios(net, ts);
    const CostConfig costs;

    struct Want {
        FormulationKind kind;
        int vars, cons;
    };
    const Want wants[4] = {{FormulationKind::Tnep, 9415, 13980},
                           {FormulationKind::Fbsm, 14770, 29280},
                           {FormulationKind::Fbsmi, 14770, 29280},
                           {FormulationKind::Facets, 17320, 36930}};
    bool pass = true;
    std::string detail;
    for (const Want& w : wants) {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelIR m = build_formulation(w.kind, net, scenarios, costs,
                                            /*tighten*/ false, /*emit_cap_rows*/ false);
        const double dt = seconds_since(t0);
        const ModelStats st = model_stats(m);
        const bool ok = st.n_vars == w.vars && st.n_constraints == w.cons && dt < 5.0;
        pass = pass && ok;
        detail += to_string(w.kind) + " " + std::to_string(st.n_vars) + "/" +
                  std::to_string(st.n_constraints) + " in " + std::to_string(dt) + "s; ";
    }
    report(1, "model sizes at (123, 255, 292, 10)", pass, detail);
}

// ---- criterion 2: facet property over 1000 random draws ----
void criterion_2() {
    Rng rng(2024);
    const auto t0 = std::chrono::steady_clock::now();
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        DisjunctBlockParams p;
        p.theta_max = rng.uniform(0.01, 1.5);
        p.theta_min = -rng.uniform(0.01, 1.5);
        p.db_max = rng.uniform(0.01, 2000.0);
        p.db_min = -rng.uniform(0.01, 2000.0);
        p.flow_cap = 1.0;  // not used by the facet checks
        const FacetReport rep = verify_facets(p);
        if (rep.degenerate || !rep.all_facets()) ++bad;
    }
    const double dt = seconds_since(t0);
    report(2, "facet-defining property on 1000 draws", bad == 0 && dt < 10.0,
           std::to_string(1000 - bad) + "/1000 confirmed in " + std::to_string(dt) + "s");
}

// ---- criteria 3-7 share one sweep over the instance set ----
struct SweepOutcome {
    int instances = 0;
    int equivalence_bad = 0;
    int tnep_order_bad = 0;
    int dominance_bad = 0;
    int tighten_bad = 0;
    int loosened_bad = 0;
    int crosscheck_bad = 0;
    int nondeterministic = 0;
    int validation_bad = 0;
    double worst_equiv = 0.0;
};

void sweep_instances(SweepOutcome& out) {
    BnBConfig tight_cfg;
    tight_cfg.rel_gap = 1e-9;

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const SmallInstance inst = random_small_instance(seed);
        if (facets_integer_count(inst) > 12) {
            std::printf("  instance %llu exceeds the integer budget\n",
                        static_cast<unsigned long long>(seed));
            ++out.equivalence_bad;
            continue;
        }
        ++out.instances;

        const FormulationKind kinds[4] = {FormulationKind::Tnep, FormulationKind::Fbsm,
                                          FormulationKind::Fbsmi, FormulationKind::Facets};
        double brute[4], lp[4];
        for (int k = 0; k < 4; ++k) {
            const ModelIR m = build_formulation(kinds[k], inst.net, inst.scenarios, inst.costs);
            const SolutionRecord bf = brute_force_milp(m);
            if (bf.status != SolStatus::Optimal) {
                ++out.equivalence_bad;
                continue;
            }
            brute[k] = bf.objective_value;
            const LpResult rel = solve_lp(m);
            lp[k] = rel.status == LpStatus::Optimal ? rel.objective : -kInf;

            // criterion 6: branch and bound agrees, deterministically
            const auto [sol, stats] = solve_milp(m, tight_cfg);
            if (sol.status != SolStatus::Optimal ||
                relgap(sol.objective_value, bf.objective_value) > 1e-6)
                ++out.crosscheck_bad;
            if (seed % 20 == 0) {
                const auto [sol2, stats2] = solve_milp(m, tight_cfg);
                if (stats.nodes != stats2.nodes ||
                    sol.objective_value != sol2.objective_value)
                    ++out.nondeterministic;
            }

            // criterion 7 (first half): the oracle optimum validates
            const ValidationReport rep =
                validate_solution(inst.net, inst.scenarios, kinds[k], bf, 1e-6);
            if (!rep.pass) {
                ++out.validation_bad;
                std::printf("  instance %llu %s fails validation (worst %g)\n",
                            static_cast<unsigned long long>(seed),
                            to_string(kinds[k]).c_str(), rep.worst());
            }
        }

        // criterion 3: equivalence of the device formulations, ordering vs tnep
        const double e1 = relgap(brute[1], brute[2]);
        const double e2 = relgap(brute[1], brute[3]);
        out.worst_equiv = std::max({out.worst_equiv, e1, e2});
        if (e1 > 1e-6 || e2 > 1e-6) ++out.equivalence_bad;
        if (brute[0] < brute[1] - 1e-6 * std::max(1.0, std::abs(brute[0])))
            ++out.tnep_order_bad;

        // criterion 4: LP relaxation ordering
        const double s4 = 1e-9 * std::max({1.0, std::abs(lp[1]), std::abs(lp[3])});
        if (lp[3] < lp[2] - s4 || lp[2] < lp[1] - s4) ++out.dominance_bad;

        // criterion 5: bound tightening preserves the optimum, never loosens
        const ModelIR plain =
            build_facets(inst.net, inst.scenarios, inst.costs, /*tighten*/ false);
        const ModelIR tightened =
            build_facets(inst.net, inst.scenarios, inst.costs, /*tighten*/ true);
        for (std::size_t r = 0; r < plain.constraints().size(); ++r) {
            const LinearConstraintDef& a = plain.constraints()[r];
            const LinearConstraintDef& b = tightened.constraints()[r];
            if (a.name.rfind("ang_hi", 0) == 0 && b.rhs > a.rhs + 1e-12) ++out.loosened_bad;
            if (a.name.rfind("ang_lo", 0) == 0 && b.rhs < a.rhs - 1e-12) ++out.loosened_bad;
        }
        const auto [tsol, tstats] = solve_milp(tightened, tight_cfg);
        if (tsol.status != SolStatus::Optimal ||
            relgap(tsol.objective_value, brute[3]) > 1e-6)
            ++out.tighten_bad;
    }
}

// criterion 4 strictness witness on the catalogued fixture
bool strict_dominance_witness(std::string& detail) {
    const Fixture f = triangle_loose_m();
    const double lp_fbsm = solve_lp(build_fbsm(f.net, f.scenarios, f.costs)).objective;
    const double lp_fbsmi = solve_lp(build_fbsmi(f.net, f.scenarios, f.costs)).objective;
    const double lp_facets = solve_lp(build_facets(f.net, f.scenarios, f.costs)).objective;
    detail = "fixture LP bounds " + std::to_string(lp_fbsm) + " <= " +
             std::to_string(lp_fbsmi) + " <= " + std::to_string(lp_facets);
    return lp_facets > lp_fbsm + 1e-6 * std::max(1.0, std::abs(lp_fbsm)) &&
           lp_facets >= lp_fbsmi - 1e-9 && lp_fbsmi >= lp_fbsm - 1e-9;
}

// ---- criterion 7 (second half): perturbations of active constraints ----

// Every coordinate of every active row, pushed 10*tol past the boundary,
// must fail the validator.
int perturb_active_rows(const Fixture& f, FormulationKind kind) {
    const double tol = 1e-6;
    const ModelIR m = build_formulation(kind, f.net, f.scenarios, f.costs);
    const SolutionRecord sol = brute_force_milp(m);
    if (sol.status != SolStatus::Optimal) return 1;

    int failures = 0;
    for (const LinearConstraintDef& row : m.constraints()) {
        double lhs = 0.0, scale = std::max(1.0, std::abs(row.rhs));
        for (const auto& [v, coef] : row.terms) {
            const double xv = sol.values.at(m.variables()[static_cast<std::size_t>(v)].name);
            lhs += coef * xv;
            scale = std::max(scale, std::abs(coef * xv));
        }
        if (std::abs(lhs - row.rhs) > tol * scale) continue;  // not active

        for (const auto& [v, coef] : row.terms) {
            if (std::abs(coef) < 1e-12) continue;
            // push into the infeasible side by 10*tol in the larger of the
            // row's scale and the coordinate's own scale
            double dir = 0.0;
            switch (row.sense) {
                case RowSense::LessEq: dir = coef > 0 ? 1.0 : -1.0; break;
                case RowSense::GreaterEq: dir = coef > 0 ? -1.0 : 1.0; break;
                case RowSense::Equal: dir = 1.0; break;
            }
            const std::string& name = m.variables()[static_cast<std::size_t>(v)].name;
            SolutionRecord bent = sol;
            const double own = 1.0 + std::abs(sol.values.at(name));
            bent.values.at(name) += dir * 10.0 * tol * std::max(own, scale / std::abs(coef));
            const ValidationReport rep = validate_solution(f.net, f.scenarios, kind, bent, tol);
            if (rep.pass) {
                ++failures;
                std::printf("  perturbation of %s in row %s went undetected\n", name.c_str(),
                            row.name.c_str());
            }
        }
    }
    return failures;
}

// ---- criterion 8: directional congestion-relief property ----
void criterion_8() {
    const Fixture f = triangle_congested();
    const SolutionRecord base = brute_force_milp(build_tnep(f.net, f.scenarios, f.costs));
    const SolutionRecord dev = brute_force_milp(build_facets(f.net, f.scenarios, f.costs));
    const PlanSummary sb = summarize_plan(f.net, f.scenarios, f.costs, base);
    const PlanSummary sd = summarize_plan(f.net, f.scenarios, f.costs, dev);
    const double slack_b = sb.unserved_energy_mwh + sb.curtailed_energy_mwh;
    const double slack_d = sd.unserved_energy_mwh + sd.curtailed_energy_mwh;

    const Fixture g = triangle_loose_m();
    const SolutionRecord base2 = brute_force_milp(build_tnep(g.net, g.scenarios, g.costs));
    const SolutionRecord dev2 = brute_force_milp(build_facets(g.net, g.scenarios, g.costs));
    const PlanSummary sb2 = summarize_plan(g.net, g.scenarios, g.costs, base2);
    const PlanSummary sd2 = summarize_plan(g.net, g.scenarios, g.costs, dev2);

    const bool strict = slack_d < slack_b - 1.0;
    const bool weak = sd2.unserved_energy_mwh + sd2.curtailed_energy_mwh <=
                      sb2.unserved_energy_mwh + sb2.curtailed_energy_mwh + 1e-6;
    report(8, "device plan reduces unserved + curtailed energy", strict && weak,
           "re-routing fixture " + std::to_string(slack_b) + " -> " +
               std::to_string(slack_d) + " MWh (strict); loose-M fixture " +
               std::to_string(sb2.unserved_energy_mwh + sb2.curtailed_energy_mwh) + " -> " +
               std::to_string(sd2.unserved_energy_mwh + sd2.curtailed_energy_mwh) + " MWh");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();

    SweepOutcome sweep;
    sweep_instances(sweep);

    report(3, "device formulation optima agree over the instance set",
           sweep.instances == 200 && sweep.equivalence_bad == 0 && sweep.tnep_order_bad == 0,
           std::to_string(sweep.instances) + " instances, worst gap " +
               std::to_string(sweep.worst_equiv) + ", ordering violations " +
               std::to_string(sweep.tnep_order_bad));

    std::string witness;
    const bool strict = strict_dominance_witness(witness);
    report(4, "relaxation bound ordering with a strict witness",
           sweep.dominance_bad == 0 && strict,
           std::to_string(sweep.dominance_bad) + " ordering violations; " + witness);

    report(5, "bound tightening is safe",
           sweep.tighten_bad == 0 && sweep.loosened_bad == 0,
           std::to_string(sweep.tighten_bad) + " objective changes, " +
               std::to_string(sweep.loosened_bad) + " loosened rows");

    report(6, "branch and bound matches the enumeration oracle",
           sweep.crosscheck_bad == 0 && sweep.nondeterministic == 0,
           std::to_string(sweep.crosscheck_bad) + " mismatches, " +
               std::to_string(sweep.nondeterministic) + " nondeterministic runs");

    int perturb_failures = perturb_active_rows(two_bus(), FormulationKind::Tnep);
    perturb_failures += perturb_active_rows(two_bus_angle_limited(), FormulationKind::Tnep);
    perturb_failures += perturb_active_rows(triangle_congested(), FormulationKind::Facets);
    perturb_failures += perturb_active_rows(triangle_congested(), FormulationKind::Fbsmi);
    report(7, "oracle optima validate; boundary perturbations are caught",
           sweep.validation_bad == 0 && perturb_failures == 0,
           std::to_string(sweep.validation_bad) + " validation failures, " +
               std::to_string(perturb_failures) + " undetected perturbations");

    criterion_8();

    std::printf("acceptance finished in %.1fs: %s\n", seconds_since(t0),
                g_failed == 0 ? "all criteria satisfied" : "FAILURES present");
    return g_failed == 0 ? 0 : 1;
}
