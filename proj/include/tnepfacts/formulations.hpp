#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tnepfacts/grid.hpp"
#include "tnepfacts/milp.hpp"

namespace tnepfacts {

enum class FormulationKind { Tnep, Fbsm, Fbsmi, Facets };

std::string to_string(FormulationKind k);
FormulationKind formulation_from_string(const std::string& name);

// Structural variable names shared by the builders, the solution validator
// and the plan summarizer. <kind>_<branch-or-bus-or-generator>[_<scenario>].
namespace varname {
inline std::string gamma(int e) { return "gamma_" + std::to_string(e); }
inline std::string pg(int g, int s) { return "pg_" + std::to_string(g) + "_" + std::to_string(s); }
inline std::string theta(int n, int s) { return "theta_" + std::to_string(n) + "_" + std::to_string(s); }
inline std::string pf(int e, int s) { return "pf_" + std::to_string(e) + "_" + std::to_string(s); }
inline std::string xip(int n, int s) { return "xip_" + std::to_string(n) + "_" + std::to_string(s); }
inline std::string xim(int n, int s) { return "xim_" + std::to_string(n) + "_" + std::to_string(s); }
inline std::string psi(int e) { return "psi_" + std::to_string(e); }
inline std::string z(int e, int s) { return "z_" + std::to_string(e) + "_" + std::to_string(s); }
inline std::string zp(int e, int s) { return "zp_" + std::to_string(e) + "_" + std::to_string(s); }
inline std::string zm(int e, int s) { return "zm_" + std::to_string(e) + "_" + std::to_string(s); }
inline std::string dpf(int e, int s) { return "dpf_" + std::to_string(e) + "_" + std::to_string(s); }
}  // namespace varname

// Susceptance-change range per branch, MW/rad (base-scaled). Zero range for
// branches where no device may be installed.
struct FactsParams {
    Eigen::VectorXd db_min_mw_rad;  // <= 0
    Eigen::VectorXd db_max_mw_rad;  // >= 0
};

// Range of the susceptance change 'dB = -dX / (X (X + dX))' over a reactance
// change dX in [X*dx_min_frac, X*dx_max_frac]. dB is strictly decreasing in dX,
// so the maximum sits at dx_min_frac and the minimum at dx_max_frac. Returned
// in MW/rad. Requires dx_min_frac > -1 so that X + dX stays positive.
std::pair<double, double> compute_susceptance_deltas(double reactance_pu,
                                                     double dx_min_frac,
                                                     double dx_max_frac,
                                                     double base_mva);

FactsParams compute_facts_params(const Network& net);

enum class BigMMode { Global, PerBranch };

struct BigMPolicy {
    BigMMode mode = BigMMode::Global;
    static BigMPolicy global() { return {BigMMode::Global}; }
    static BigMPolicy per_branch() { return {BigMMode::PerBranch}; }
};

// Per-branch big-M values: M_e = p̄f_e + m_e*Δc_e, or their maximum for every
// branch under the global policy.
Eigen::VectorXd resolve_big_m(const Network& net, const BigMPolicy& policy);

// Angle-difference box shrunk via flow_cap >= (B + dB_min) * theta, guarded
// against B + dB_min <= 0 (bounds returned unchanged in that case). Never
// loosens either bound.
std::pair<double, double> tighten_angle_bounds(double theta_min, double theta_max,
                                               double susceptance_mw_rad,
                                               double db_min_mw_rad, double flow_cap_mw);

// Per-(branch,scenario) data defining the 3-piece device disjunction.
struct DisjunctBlockParams {
    double theta_min = -0.6;  // < 0
    double theta_max = 0.6;   // > 0
    double db_min = 0.0;      // <= db_max
    double db_max = 0.0;
    double flow_cap = 0.0;    // p̄f + m*Δc
};

DisjunctBlockParams disjunct_params_for_branch(const Network& net, const Branch& br,
                                               const FactsParams& facts,
                                               bool tighten);

struct DisjunctVarIndices {
    int psi, z_plus, z_minus, theta_from, theta_to, dpf;
};

// The extended-formulation rows for one (branch, scenario): the z+ + z- = psi
// link, the eight facet inequalities, and (flag-controlled) the two redundant
// device-capacity rows. The composite angle difference is expanded onto the
// two bus-angle variables. Row names get the given suffix appended.
std::vector<LinearConstraintDef> facet_block(const DisjunctBlockParams& params,
                                             const DisjunctVarIndices& v,
                                             const std::string& suffix,
                                             bool include_cap_rows);

// --- the four formulations ---

// Capacity-upgrade-only planning: power balance, Ohm rows, thermal and
// angle-difference limits, imbalance penalty. Generation limits and the
// reference-bus pin are variable bounds.
ModelIR build_tnep(const Network& net, const std::vector<Scenario>& scenarios,
                   const CostConfig& costs);

// Device placement with the four sign-selection big-M rows plus the two
// installation big-M rows per (branch, scenario).
ModelIR build_fbsm(const Network& net, const std::vector<Scenario>& scenarios,
                   const CostConfig& costs, const BigMPolicy& policy = BigMPolicy::global());

// build_fbsm with a per-branch big-M bound.
ModelIR build_fbsmi(const Network& net, const std::vector<Scenario>& scenarios,
                    const CostConfig& costs);

// The extended formulation: one facet_block per (branch, scenario).
ModelIR build_facets(const Network& net, const std::vector<Scenario>& scenarios,
                     const CostConfig& costs, bool apply_bound_tightening = false,
                     bool emit_cap_rows = true);

ModelIR build_formulation(FormulationKind kind, const Network& net,
                          const std::vector<Scenario>& scenarios, const CostConfig& costs,
                          bool apply_bound_tightening = false, bool emit_cap_rows = true);

}  // namespace tnepfacts
