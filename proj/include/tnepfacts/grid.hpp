#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tnepfacts/common.hpp"

namespace tnepfacts {

struct Bus {
    int id = 0;  // 0-based, dense
    std::string name;
    std::optional<double> x_coord;  // planar km, used by the geo CSV emitters
    std::optional<double> y_coord;
};

struct Branch {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double reactance_pu = 0.0;      // X > 0, per-unit on base_mva
    double thermal_limit_mw = 0.0;  // p̄f > 0
    double length_km = 0.0;
    double angle_min_rad = -0.6;    // θ̲ < 0
    double angle_max_rad = 0.6;     // θ̄ > 0
    double upgrade_increment_mw = 300.0;  // Δc per upgrade level
    int max_upgrades = 0;                 // m
    bool tcsc_allowed = false;
    double tcsc_dx_min_frac = -0.4;  // δX range as fractions of X; min > -1
    double tcsc_dx_max_frac = 0.2;

    // Susceptance in MW/rad so that flow_mw = B * angle_difference directly.
    double susceptance_mw_per_rad(double base_mva) const {
        return base_mva / reactance_pu;
    }
    // Thermal limit at the maximum upgrade level, p̄f + m*Δc.
    double flow_cap_mw() const {
        return thermal_limit_mw + max_upgrades * upgrade_increment_mw;
    }
};

enum class GeneratorKind { Renewable, Nonrenewable };

struct Generator {
    int id = 0;
    int bus = 0;
    GeneratorKind kind = GeneratorKind::Nonrenewable;
    double pmin_mw = 0.0;
    double pmax_mw = 0.0;
    double cost_per_mwh = 0.0;
    std::string tag;  // "wind" or "solar" for renewables; free-form otherwise
};

struct Network {
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Generator> generators;
};

// Throws ValidationError naming the first offending entity.
void validate_network(const Network& net);

// One row per hour; load columns follow bus order, availability columns
// follow avail_gen_ids order (renewable generators only).
struct HourlyTimeSeries {
    std::vector<std::string> timestamps;  // ISO-8601
    std::vector<std::string> seasons;     // lowercase labels; "summer"/"winter" drive selection
    Eigen::MatrixXd load_mw;              // n_hours x n_buses
    std::vector<int> avail_gen_ids;
    std::vector<std::string> avail_tags;  // wind|solar, aligned with avail_gen_ids
    Eigen::MatrixXd renewable_avail_mw;   // n_hours x avail_gen_ids.size()

    Eigen::Index n_hours() const { return load_mw.rows(); }
};

void validate_series(const HourlyTimeSeries& ts, const Network& net);

// One operating hour used as a second-stage case.
struct Scenario {
    int id = 0;
    std::string season;
    std::string criterion;    // which selection rule picked this hour
    std::string source_hour;  // timestamp of the originating row
    Eigen::VectorXd load_mw;      // per bus
    Eigen::VectorXd gen_pmin_mw;  // per generator, effective limits
    Eigen::VectorXd gen_pmax_mw;
};

struct CostConfig {
    double imbalance_penalty_per_mwh = 50000.0;  // λ
    double capacity_cost_per_mw_km = 124.0;
    double tcsc_cost_per_mva = 2200.0;
};

void validate_costs(const CostConfig& costs);

// --- file ingestion / emission (JSON grid schema, CSV time series) ---

Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);
std::string network_to_json_string(const Network& net);
Network network_from_json_string(const std::string& text);

HourlyTimeSeries load_series(const std::string& path, const Network& net);
void save_series(const HourlyTimeSeries& ts, const Network& net, const std::string& path);

std::vector<Scenario> load_scenarios(const std::string& path, const Network& net);
void save_scenarios(const std::vector<Scenario>& scenarios, const std::string& path);

// --- operations ---

// Multiplies loads by load_factor and renewable availability by the factor
// matching each column's wind/solar tag. Factors must be >= 0.
HourlyTimeSeries scale_series(const HourlyTimeSeries& ts, double load_factor,
                              double wind_factor, double solar_factor);

// Snapshot of one hour as a Scenario: renewable limits come from the
// availability columns, non-renewable limits from the base network.
Scenario make_scenario(const Network& net, const HourlyTimeSeries& ts,
                       Eigen::Index hour, int id);

// For each of summer and winter, the hours with highest load, highest net
// load, highest wind, highest solar and lowest wind (ties -> earliest hour).
// Always returns exactly 10 scenarios, summer block first.
std::vector<Scenario> select_scenarios(const Network& net, const HourlyTimeSeries& ts);

// Deterministic synthetic instance: random spanning tree plus extra edges,
// parameters drawn from documented ranges, and a matching hourly series
// (first half winter, second half summer).
std::pair<Network, HourlyTimeSeries> synth_network(std::uint64_t seed, int n_buses,
                                                   int n_branches, int n_gens,
                                                   double renewable_fraction,
                                                   int n_hours = 336);

}  // namespace tnepfacts
