#pragma once

#include <string>
#include <vector>

#include "tnepfacts/formulations.hpp"
#include "tnepfacts/polyhedra.hpp"

namespace tnepfacts {

// Max violation per constraint family, recomputed from raw network data
// rather than from model rows, so builder bugs cannot hide. The family fields
// carry raw magnitudes (MW, rad, ...); pass is decided on scale-relative
// violations so large-flow instances are not judged by absolute noise.
struct ValidationReport {
    double balance = 0.0;
    double flow = 0.0;
    double thermal = 0.0;
    double angle = 0.0;
    double disjunction = 0.0;
    double facet_rows = 0.0;
    double integrality = 0.0;
    double worst_relative = 0.0;
    double tol = 1e-6;
    bool pass = false;
    std::vector<std::string> notes;  // names the worst offender per failing family

    double worst() const;
};

ValidationReport validate_solution(const Network& net, const std::vector<Scenario>& scenarios,
                                   FormulationKind kind, const SolutionRecord& sol,
                                   double tol = 1e-6);

struct PlanSummary {
    double total_cost = 0.0;
    double capacity_upgrade_cost = 0.0;
    double tcsc_cost = 0.0;
    double nonrenewable_generation_cost = 0.0;  // scenario-weighted
    double imbalance_penalty_cost = 0.0;        // scenario-weighted
    double unserved_energy_mwh = 0.0;           // sum over scenario hours
    double unserved_energy_mean_mwh = 0.0;
    double overserved_energy_mwh = 0.0;
    double curtailed_energy_mwh = 0.0;
    double curtailed_energy_mean_mwh = 0.0;
    std::vector<int> upgrades_by_level;  // [k-1] = branches upgraded k times
    int tcsc_count = 0;
};

// Cost and energy decomposition of a solution. total_cost reconstructs the
// model objective: capacity + tcsc + scenario-weighted generation + penalty.
PlanSummary summarize_plan(const Network& net, const std::vector<Scenario>& scenarios,
                           const CostConfig& costs, const SolutionRecord& sol);

enum class GeoMetric { Unserved, Curtailed, Investment };

GeoMetric geo_metric_from_string(const std::string& name);

// CSV "entity_id,x,y,value" with scenario-mean values: per bus for unserved
// and curtailed energy, per branch midpoint for investments (plus one
// tcsc_<id> row per branch when the solution carries device variables).
// Requires bus coordinates; the error lists the buses missing them.
std::string geo_csv_string(const Network& net, const std::vector<Scenario>& scenarios,
                           const SolutionRecord& sol, GeoMetric metric);
void emit_geo_csv(const Network& net, const std::vector<Scenario>& scenarios,
                  const SolutionRecord& sol, GeoMetric metric, const std::string& path);

}  // namespace tnepfacts
