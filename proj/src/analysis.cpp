#include "tnepfacts/analysis.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tnepfacts {

double ValidationReport::worst() const {
    return std::max({balance, flow, thermal, angle, disjunction, facet_rows, integrality});
}

namespace {

double get(const SolutionRecord& sol, const std::string& name) {
    auto it = sol.values.find(name);
    if (it == sol.values.end())
        throw ValidationError("solution is missing variable " + name);
    return it->second;
}

// Tracks the largest raw violation (reported) and the largest scale-relative
// violation (which decides pass/fail) independently.
struct FamilyMax {
    double abs = 0.0;
    double rel = 0.0;
    std::string where;
    void update(double abs_v, double rel_v, const std::string& name) {
        abs = std::max(abs, abs_v);
        if (rel_v > rel) {
            rel = rel_v;
            where = name;
        }
    }
    void update_scaled(double abs_v, double scale, const std::string& name) {
        update(abs_v, abs_v / scale, name);
    }
};

}  // namespace

ValidationReport validate_solution(const Network& net, const std::vector<Scenario>& scenarios,
                                   FormulationKind kind, const SolutionRecord& sol,
                                   double tol) {
    validate_network(net);
    const bool facts = kind != FormulationKind::Tnep;
    const int n_b = static_cast<int>(net.buses.size());
    const int n_s = static_cast<int>(scenarios.size());
    const FactsParams fp = facts ? compute_facts_params(net) : FactsParams{};
    const Eigen::VectorXd big_m =
        facts ? resolve_big_m(net, kind == FormulationKind::Fbsm ? BigMPolicy::global()
                                                                 : BigMPolicy::per_branch())
              : Eigen::VectorXd();

    FamilyMax balance, flow, thermal, angle, disjunction, facet_rows, integrality;

    std::vector<std::vector<int>> gens_at(static_cast<std::size_t>(n_b));
    for (const Generator& g : net.generators)
        gens_at[static_cast<std::size_t>(g.bus)].push_back(g.id);

    for (int s = 0; s < n_s; ++s) {
        const Scenario& sc = scenarios[static_cast<std::size_t>(s)];

        // nodal balance: generation + inflow - outflow + imbalance slack = load
        Eigen::VectorXd net_injection = Eigen::VectorXd::Zero(n_b);
        Eigen::VectorXd scale = Eigen::VectorXd::Ones(n_b);
        for (int n = 0; n < n_b; ++n) {
            for (int g : gens_at[static_cast<std::size_t>(n)]) {
                const double v = get(sol, varname::pg(g, s));
                net_injection[n] += v;
                scale[n] = std::max(scale[n], std::abs(v));
            }
            const double xp = get(sol, varname::xip(n, s));
            const double xm = get(sol, varname::xim(n, s));
            net_injection[n] += xp - xm;
            scale[n] = std::max({scale[n], xp, xm, std::abs(sc.load_mw[n])});
        }
        for (const Branch& br : net.branches) {
            const double f = get(sol, varname::pf(br.id, s));
            net_injection[br.to_bus] += f;
            net_injection[br.from_bus] -= f;
            scale[br.to_bus] = std::max(scale[br.to_bus], std::abs(f));
            scale[br.from_bus] = std::max(scale[br.from_bus], std::abs(f));
        }
        for (int n = 0; n < n_b; ++n)
            balance.update_scaled(std::abs(net_injection[n] - sc.load_mw[n]), scale[n],
                                  "balance bus " + std::to_string(n) + " scenario " +
                                      std::to_string(s));

        for (const Branch& br : net.branches) {
            const int e = br.id;
            const std::string where =
                "branch " + std::to_string(e) + " scenario " + std::to_string(s);
            const double b = br.susceptance_mw_per_rad(net.base_mva);
            const double f = get(sol, varname::pf(e, s));
            const double td =
                get(sol, varname::theta(br.to_bus, s)) - get(sol, varname::theta(br.from_bus, s));
            const double dpf = facts ? get(sol, varname::dpf(e, s)) : 0.0;
            const double gamma = get(sol, varname::gamma(e));

            const double fscale = std::max({1.0, std::abs(f), std::abs(b * td), std::abs(dpf)});
            flow.update_scaled(std::abs(f - b * td - dpf), fscale, "flow " + where);

            const double cap = br.thermal_limit_mw + gamma * br.upgrade_increment_mw;
            thermal.update_scaled(std::max(0.0, std::abs(f) - cap), std::max(1.0, cap),
                                  "thermal " + where);

            const double tscale =
                std::max({1.0, std::abs(br.angle_min_rad), std::abs(br.angle_max_rad)});
            angle.update_scaled(std::max({0.0, td - br.angle_max_rad, br.angle_min_rad - td}),
                                tscale, "angle " + where);

            if (!facts) continue;

            const double psi = get(sol, varname::psi(e));
            integrality.update_scaled(std::abs(psi - std::round(psi)), 1.0, varname::psi(e));
            const double bl = fp.db_min_mw_rad[e];
            const double bh = fp.db_max_mw_rad[e];
            const double dscale =
                std::max({1.0, std::abs(bl * td), std::abs(bh * td), std::abs(dpf)});

            if (kind == FormulationKind::Facets) {
                const double zpv = get(sol, varname::zp(e, s));
                const double zmv = get(sol, varname::zm(e, s));
                integrality.update_scaled(std::abs(zpv - std::round(zpv)), 1.0, varname::zp(e, s));
                integrality.update_scaled(std::abs(zmv - std::round(zmv)), 1.0, varname::zm(e, s));

                DisjunctBlockParams params;
                params.theta_min = br.angle_min_rad;
                params.theta_max = br.angle_max_rad;
                params.db_min = bl;
                params.db_max = bh;
                params.flow_cap = br.flow_cap_mw();

                DisjunctPoint raw{psi, zpv, zmv, td, dpf};
                const double block_rel = block_violation(params, raw);
                facet_rows.update(block_rel * dscale, block_rel, "facet rows " + where);

                DisjunctPoint rounded{std::round(psi), std::round(zpv), std::round(zmv), td, dpf};
                double v_ang = 0.0, v_dpf = 0.0, v_gross = 0.0;
                const int rp = static_cast<int>(rounded.psi);
                const int rzp = static_cast<int>(rounded.z_plus);
                const int rzm = static_cast<int>(rounded.z_minus);
                if (rp == 0 && rzp == 0 && rzm == 0) {
                    v_dpf = std::abs(dpf);
                } else if (rp == 1 && rzp == 1 && rzm == 0) {
                    v_ang = std::max({0.0, -td, td - br.angle_max_rad});
                    v_dpf = std::max({0.0, bl * td - dpf, dpf - bh * td});
                } else if (rp == 1 && rzp == 0 && rzm == 1) {
                    v_ang = std::max({0.0, br.angle_min_rad - td, td});
                    v_dpf = std::max({0.0, bh * td - dpf, dpf - bl * td});
                } else {
                    v_gross = 1.0;  // no disjunction piece matches the binary pattern
                }
                const double tsc =
                    std::max({1.0, std::abs(br.angle_min_rad), std::abs(br.angle_max_rad)});
                double rel = std::max({v_ang / tsc, v_dpf / dscale, v_gross});
                if (check_point_in_disjunction(rounded, params, tol) ==
                        DisjunctMembership::None &&
                    rel <= tol)
                    rel = 2.0 * tol;
                disjunction.update(std::max({v_ang, v_dpf, v_gross * dscale}), rel,
                                   "disjunction " + where);
            } else {
                const double zv = get(sol, varname::z(e, s));
                integrality.update_scaled(std::abs(zv - std::round(zv)), 1.0, varname::z(e, s));
                const int rz = static_cast<int>(std::round(zv));
                const double v_inst = std::max(0.0, std::abs(dpf) - big_m[e] * psi);
                const double v_env =
                    rz == 1 ? std::max({0.0, bl * td - dpf, dpf - bh * td})
                            : std::max({0.0, bh * td - dpf, dpf - bl * td});
                disjunction.update(std::max(v_inst, v_env),
                                   std::max(v_inst / std::max(1.0, big_m[e]), v_env / dscale),
                                   "disjunction " + where);
            }
        }
    }

    for (const Branch& br : net.branches) {
        const double gamma = get(sol, varname::gamma(br.id));
        integrality.update_scaled(std::abs(gamma - std::round(gamma)), 1.0, varname::gamma(br.id));
        const double rounded = std::round(gamma);
        if (rounded < -0.5 || rounded > br.max_upgrades + 0.5)
            integrality.update_scaled(1.0, 1.0, varname::gamma(br.id) + " out of range");
    }

    ValidationReport report;
    report.tol = tol;
    report.balance = balance.abs;
    report.flow = flow.abs;
    report.thermal = thermal.abs;
    report.angle = angle.abs;
    report.disjunction = disjunction.abs;
    report.facet_rows = facet_rows.abs;
    report.integrality = integrality.abs;
    double worst_rel = 0.0;
    for (const FamilyMax* f :
         {&balance, &flow, &thermal, &angle, &disjunction, &facet_rows, &integrality})
        worst_rel = std::max(worst_rel, f->rel);
    report.worst_relative = worst_rel;
    report.pass = worst_rel <= tol;
    for (const FamilyMax* f : {&balance, &flow, &thermal, &angle, &disjunction, &facet_rows})
        if (f->rel > tol) report.notes.push_back(f->where);
    if (integrality.rel > tol) report.notes.push_back("integrality " + integrality.where);
    return report;
}

PlanSummary summarize_plan(const Network& net, const std::vector<Scenario>& scenarios,
                           const CostConfig& costs, const SolutionRecord& sol) {
    const int n_s = static_cast<int>(scenarios.size());
    const double w = 1.0 / n_s;
    const bool has_devices =
        !net.branches.empty() && sol.values.count(varname::psi(net.branches[0].id)) > 0;

    PlanSummary out;
    int max_level = 0;
    for (const Branch& br : net.branches) max_level = std::max(max_level, br.max_upgrades);
    out.upgrades_by_level.assign(static_cast<std::size_t>(max_level), 0);

    for (const Branch& br : net.branches) {
        const double gamma = get(sol, varname::gamma(br.id));
        out.capacity_upgrade_cost +=
            costs.capacity_cost_per_mw_km * br.length_km * br.upgrade_increment_mw * gamma;
        const int level = static_cast<int>(std::lround(gamma));
        if (level >= 1 && level <= max_level)
            ++out.upgrades_by_level[static_cast<std::size_t>(level - 1)];
        if (has_devices) {
            const double psi = get(sol, varname::psi(br.id));
            out.tcsc_cost += costs.tcsc_cost_per_mva * br.thermal_limit_mw * psi;
            out.tcsc_count += static_cast<int>(std::lround(psi));
        }
    }

    for (int s = 0; s < n_s; ++s) {
        const Scenario& sc = scenarios[static_cast<std::size_t>(s)];
        for (const Generator& g : net.generators) {
            const double pg = get(sol, varname::pg(g.id, s));
            if (g.kind == GeneratorKind::Nonrenewable) {
                out.nonrenewable_generation_cost += w * g.cost_per_mwh * pg;
            } else {
                out.curtailed_energy_mwh += std::max(0.0, sc.gen_pmax_mw[g.id] - pg);
            }
        }
        for (const Bus& bus : net.buses) {
            const double xp = get(sol, varname::xip(bus.id, s));
            const double xm = get(sol, varname::xim(bus.id, s));
            out.unserved_energy_mwh += xp;
            out.overserved_energy_mwh += xm;
            out.imbalance_penalty_cost += w * costs.imbalance_penalty_per_mwh * (xp + xm);
        }
    }
    out.unserved_energy_mean_mwh = out.unserved_energy_mwh * w;
    out.curtailed_energy_mean_mwh = out.curtailed_energy_mwh * w;
    out.total_cost = out.capacity_upgrade_cost + out.tcsc_cost +
                     out.nonrenewable_generation_cost + out.imbalance_penalty_cost;
    return out;
}

GeoMetric geo_metric_from_string(const std::string& name) {
    if (name == "unserved") return GeoMetric::Unserved;
    if (name == "curtailed") return GeoMetric::Curtailed;
    if (name == "investment") return GeoMetric::Investment;
    throw ValidationError("unknown geo metric '" + name + "'");
}

std::string geo_csv_string(const Network& net, const std::vector<Scenario>& scenarios,
                           const SolutionRecord& sol, GeoMetric metric) {
    std::vector<int> missing;
    for (const Bus& b : net.buses)
        if (!b.x_coord || !b.y_coord) missing.push_back(b.id);
    if (!missing.empty()) {
        std::string list;
        for (int id : missing) list += (list.empty() ? "" : ", ") + std::to_string(id);
        throw ValidationError("buses without coordinates: " + list);
    }

    const int n_s = static_cast<int>(scenarios.size());
    const double w = 1.0 / n_s;
    std::ostringstream out;
    out << "entity_id,x,y,value\n";

    if (metric == GeoMetric::Unserved || metric == GeoMetric::Curtailed) {
        Eigen::VectorXd value = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.buses.size()));
        for (int s = 0; s < n_s; ++s) {
            if (metric == GeoMetric::Unserved) {
                for (const Bus& b : net.buses)
                    value[b.id] += w * get(sol, varname::xip(b.id, s));
            } else {
                const Scenario& sc = scenarios[static_cast<std::size_t>(s)];
                for (const Generator& g : net.generators)
                    if (g.kind == GeneratorKind::Renewable)
                        value[g.bus] += w * std::max(0.0, sc.gen_pmax_mw[g.id] -
                                                              get(sol, varname::pg(g.id, s)));
            }
        }
        for (const Bus& b : net.buses)
            out << "bus_" << b.id << "," << format_double(*b.x_coord) << ","
                << format_double(*b.y_coord) << "," << format_double(value[b.id]) << "\n";
        return out.str();
    }

    const bool has_devices =
        !net.branches.empty() && sol.values.count(varname::psi(net.branches[0].id)) > 0;
    for (const Branch& br : net.branches) {
        const Bus& fb = net.buses[static_cast<std::size_t>(br.from_bus)];
        const Bus& tb = net.buses[static_cast<std::size_t>(br.to_bus)];
        const double mx = 0.5 * (*fb.x_coord + *tb.x_coord);
        const double my = 0.5 * (*fb.y_coord + *tb.y_coord);
        out << "branch_" << br.id << "," << format_double(mx) << "," << format_double(my)
            << "," << format_double(get(sol, varname::gamma(br.id))) << "\n";
    }
    if (has_devices) {
        for (const Branch& br : net.branches) {
            const Bus& fb = net.buses[static_cast<std::size_t>(br.from_bus)];
            const Bus& tb = net.buses[static_cast<std::size_t>(br.to_bus)];
            const double mx = 0.5 * (*fb.x_coord + *tb.x_coord);
            const double my = 0.5 * (*fb.y_coord + *tb.y_coord);
            out << "tcsc_" << br.id << "," << format_double(mx) << "," << format_double(my)
                << "," << format_double(get(sol, varname::psi(br.id))) << "\n";
        }
    }
    return out.str();
}

void emit_geo_csv(const Network& net, const std::vector<Scenario>& scenarios,
                  const SolutionRecord& sol, GeoMetric metric, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << geo_csv_string(net, scenarios, sol, metric);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tnepfacts
