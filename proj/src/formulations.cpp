#include "tnepfacts/formulations.hpp"

#include <algorithm>
#include <cmath>

namespace tnepfacts {

std::string to_string(FormulationKind k) {
    switch (k) {
        case FormulationKind::Tnep: return "tnep";
        case FormulationKind::Fbsm: return "fbsm";
        case FormulationKind::Fbsmi: return "fbsmi";
        case FormulationKind::Facets: return "facets";
    }
    return "tnep";
}

FormulationKind formulation_from_string(const std::string& name) {
    if (name == "tnep") return FormulationKind::Tnep;
    if (name == "fbsm") return FormulationKind::Fbsm;
    if (name == "fbsmi") return FormulationKind::Fbsmi;
    if (name == "facets") return FormulationKind::Facets;
    throw ValidationError("unknown formulation '" + name + "'");
}

std::pair<double, double> compute_susceptance_deltas(double reactance_pu,
                                                     double dx_min_frac,
                                                     double dx_max_frac,
                                                     double base_mva) {
    if (!(reactance_pu > 0.0))
        throw ValidationError("compute_susceptance_deltas: reactance must be positive");
    if (!(dx_min_frac > -1.0))
        throw ValidationError("compute_susceptance_deltas: dx_min_frac must exceed -1");
    if (!(dx_min_frac <= dx_max_frac))
        throw ValidationError("compute_susceptance_deltas: dx_min_frac > dx_max_frac");

    const auto delta_b = [&](double frac) {
        const double dx = reactance_pu * frac;
        return -dx / (reactance_pu * (reactance_pu + dx)) * base_mva;
    };
    // dB is strictly decreasing in dX over (-X, inf).
    const double db_max = delta_b(dx_min_frac);
    const double db_min = delta_b(dx_max_frac);
    return {db_min, db_max};
}

FactsParams compute_facts_params(const Network& net) {
    const auto e_count = static_cast<Eigen::Index>(net.branches.size());
    FactsParams fp;
    fp.db_min_mw_rad = Eigen::VectorXd::Zero(e_count);
    fp.db_max_mw_rad = Eigen::VectorXd::Zero(e_count);
    for (const Branch& br : net.branches) {
        if (!br.tcsc_allowed) continue;
        const auto [lo, hi] = compute_susceptance_deltas(
            br.reactance_pu, br.tcsc_dx_min_frac, br.tcsc_dx_max_frac, net.base_mva);
        fp.db_min_mw_rad[br.id] = lo;
        fp.db_max_mw_rad[br.id] = hi;
    }
    return fp;
}

Eigen::VectorXd resolve_big_m(const Network& net, const BigMPolicy& policy) {
    const auto e_count = static_cast<Eigen::Index>(net.branches.size());
    Eigen::VectorXd m(e_count);
    for (const Branch& br : net.branches) m[br.id] = br.flow_cap_mw();
    if (policy.mode == BigMMode::Global && e_count > 0) m.setConstant(m.maxCoeff());
    return m;
}

std::pair<double, double> tighten_angle_bounds(double theta_min, double theta_max,
                                               double susceptance_mw_rad,
                                               double db_min_mw_rad, double flow_cap_mw) {
    const double b_eff = susceptance_mw_rad + db_min_mw_rad;
    if (!(b_eff > 0.0)) return {theta_min, theta_max};
    const double reach = flow_cap_mw / b_eff;
    return {std::max(theta_min, -reach), std::min(theta_max, reach)};
}

DisjunctBlockParams disjunct_params_for_branch(const Network& net, const Branch& br,
                                               const FactsParams& facts, bool tighten) {
    DisjunctBlockParams p;
    p.db_min = facts.db_min_mw_rad[br.id];
    p.db_max = facts.db_max_mw_rad[br.id];
    p.flow_cap = br.flow_cap_mw();
    p.theta_min = br.angle_min_rad;
    p.theta_max = br.angle_max_rad;
    if (tighten) {
        std::tie(p.theta_min, p.theta_max) = tighten_angle_bounds(
            p.theta_min, p.theta_max, br.susceptance_mw_per_rad(net.base_mva), p.db_min,
            p.flow_cap);
    }
    return p;
}

namespace {

// Builds a term list, dropping exact-zero coefficients.
std::vector<std::pair<int, double>> terms(std::initializer_list<std::pair<int, double>> list) {
    std::vector<std::pair<int, double>> out;
    for (const auto& t : list)
        if (t.second != 0.0) out.push_back(t);
    return out;
}

}  // namespace

std::vector<LinearConstraintDef> facet_block(const DisjunctBlockParams& p,
                                             const DisjunctVarIndices& v,
                                             const std::string& suffix,
                                             bool include_cap_rows) {
    if (!(p.theta_min < 0.0 && 0.0 < p.theta_max))
        throw ValidationError("facet_block: angle bounds must straddle zero");
    if (!(p.db_min <= p.db_max))
        throw ValidationError("facet_block: db_min exceeds db_max");

    const double tl = p.theta_min, th = p.theta_max;
    const double bl = p.db_min, bh = p.db_max;

    std::vector<LinearConstraintDef> rows;
    rows.reserve(include_cap_rows ? 11 : 9);
    auto add = [&](const char* base, std::vector<std::pair<int, double>> t, RowSense s,
                   double rhs) {
        rows.push_back(LinearConstraintDef{std::string(base) + suffix, std::move(t), s, rhs});
    };

    add("link", terms({{v.z_plus, 1.0}, {v.z_minus, 1.0}, {v.psi, -1.0}}), RowSense::Equal, 0.0);

    // Angle-difference envelopes conditioned on the sign binaries.
    add("th_lo", terms({{v.z_plus, tl}, {v.theta_to, 1.0}, {v.theta_from, -1.0}}),
        RowSense::GreaterEq, tl);
    add("th_hi", terms({{v.z_minus, th}, {v.theta_to, 1.0}, {v.theta_from, -1.0}}),
        RowSense::LessEq, th);

    // Flow-change bounds through the origin.
    add("sec_lo", terms({{v.z_plus, -th * bl}, {v.z_minus, -tl * bh}, {v.dpf, 1.0}}),
        RowSense::GreaterEq, 0.0);
    add("sec_hi", terms({{v.z_plus, -th * bh}, {v.z_minus, -tl * bl}, {v.dpf, 1.0}}),
        RowSense::LessEq, 0.0);

    // Flow-change cuts anchored at the positive (p) and negative (n) angle
    // extremes, with the max/min susceptance-change slopes.
    add("cut_pmax",
        terms({{v.z_plus, th * bl},
               {v.z_minus, th * bh},
               {v.theta_to, bh},
               {v.theta_from, -bh},
               {v.dpf, -1.0}}),
        RowSense::LessEq, th * bh);
    add("cut_pmin",
        terms({{v.z_plus, th * bh},
               {v.z_minus, th * bl},
               {v.theta_to, bl},
               {v.theta_from, -bl},
               {v.dpf, -1.0}}),
        RowSense::GreaterEq, th * bl);
    add("cut_nmax",
        terms({{v.z_plus, tl * bh},
               {v.z_minus, tl * bl},
               {v.theta_to, bh},
               {v.theta_from, -bh},
               {v.dpf, -1.0}}),
        RowSense::GreaterEq, tl * bh);
    add("cut_nmin",
        terms({{v.z_plus, tl * bl},
               {v.z_minus, tl * bh},
               {v.theta_to, bl},
               {v.theta_from, -bl},
               {v.dpf, -1.0}}),
        RowSense::LessEq, tl * bl);

    if (include_cap_rows) {
        // Redundant with the rows above plus the thermal limits, but tightens
        // the device/flow coupling for branch-and-bound.
        add("cap_lo", terms({{v.dpf, 1.0}, {v.psi, p.flow_cap}}), RowSense::GreaterEq, 0.0);
        add("cap_hi", terms({{v.dpf, 1.0}, {v.psi, -p.flow_cap}}), RowSense::LessEq, 0.0);
    }
    return rows;
}

namespace {

struct Indices {
    std::vector<int> gamma;                // E
    std::vector<std::vector<int>> pg;      // G x S
    std::vector<std::vector<int>> theta;   // N x S
    std::vector<std::vector<int>> pf;      // E x S
    std::vector<std::vector<int>> xip;     // N x S
    std::vector<std::vector<int>> xim;     // N x S
    std::vector<int> psi;                  // E (device formulations)
    std::vector<std::vector<int>> dpf;     // E x S (device formulations)
};

void check_inputs(const Network& net, const std::vector<Scenario>& scenarios,
                  const CostConfig& costs) {
    validate_network(net);
    validate_costs(costs);
    if (scenarios.empty()) throw ValidationError("at least one scenario is required");
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const Scenario& sc = scenarios[s];
        if (sc.load_mw.size() != static_cast<Eigen::Index>(net.buses.size()) ||
            sc.gen_pmin_mw.size() != static_cast<Eigen::Index>(net.generators.size()) ||
            sc.gen_pmax_mw.size() != static_cast<Eigen::Index>(net.generators.size()))
            throw ValidationError("scenario " + std::to_string(s) +
                                  ": dimensions do not match the network");
    }
}

// Shared variables and objective of all four formulations, declared in a
// fixed order: gamma, pg, theta, pf, xip, xim.
Indices add_core_variables(ModelIR& m, const Network& net,
                           const std::vector<Scenario>& scenarios, const CostConfig& costs) {
    const int n_b = static_cast<int>(net.buses.size());
    const int n_e = static_cast<int>(net.branches.size());
    const int n_g = static_cast<int>(net.generators.size());
    const int n_s = static_cast<int>(scenarios.size());

    Indices ix;
    ix.gamma.resize(static_cast<std::size_t>(n_e));
    for (const Branch& br : net.branches) {
        ix.gamma[static_cast<std::size_t>(br.id)] = m.add_variable(
            varname::gamma(br.id), 0.0, static_cast<double>(br.max_upgrades), VarType::Integer);
        m.add_objective_term(ix.gamma[static_cast<std::size_t>(br.id)],
                             costs.capacity_cost_per_mw_km * br.length_km *
                                 br.upgrade_increment_mw);
    }

    const double scen_w = 1.0 / n_s;
    ix.pg.assign(static_cast<std::size_t>(n_g), std::vector<int>(static_cast<std::size_t>(n_s)));
    for (int g = 0; g < n_g; ++g) {
        for (int s = 0; s < n_s; ++s) {
            const int idx = m.add_variable(varname::pg(g, s), scenarios[static_cast<std::size_t>(s)].gen_pmin_mw[g],
                                           scenarios[static_cast<std::size_t>(s)].gen_pmax_mw[g],
                                           VarType::Continuous);
            ix.pg[static_cast<std::size_t>(g)][static_cast<std::size_t>(s)] = idx;
            const double c = net.generators[static_cast<std::size_t>(g)].cost_per_mwh;
            if (c != 0.0) m.add_objective_term(idx, c * scen_w);
        }
    }

    // Reference bus (lowest index) pinned to zero via bounds.
    ix.theta.assign(static_cast<std::size_t>(n_b), std::vector<int>(static_cast<std::size_t>(n_s)));
    for (int n = 0; n < n_b; ++n)
        for (int s = 0; s < n_s; ++s)
            ix.theta[static_cast<std::size_t>(n)][static_cast<std::size_t>(s)] =
                m.add_variable(varname::theta(n, s), n == 0 ? 0.0 : -kInf,
                               n == 0 ? 0.0 : kInf, VarType::Continuous);

    ix.pf.assign(static_cast<std::size_t>(n_e), std::vector<int>(static_cast<std::size_t>(n_s)));
    for (int e = 0; e < n_e; ++e)
        for (int s = 0; s < n_s; ++s)
            ix.pf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)] =
                m.add_variable(varname::pf(e, s), -kInf, kInf, VarType::Continuous);

    ix.xip.assign(static_cast<std::size_t>(n_b), std::vector<int>(static_cast<std::size_t>(n_s)));
    for (int n = 0; n < n_b; ++n)
        for (int s = 0; s < n_s; ++s) {
            const int idx = m.add_variable(varname::xip(n, s), 0.0, kInf, VarType::Continuous);
            ix.xip[static_cast<std::size_t>(n)][static_cast<std::size_t>(s)] = idx;
            m.add_objective_term(idx, costs.imbalance_penalty_per_mwh * scen_w);
        }
    ix.xim.assign(static_cast<std::size_t>(n_b), std::vector<int>(static_cast<std::size_t>(n_s)));
    for (int n = 0; n < n_b; ++n)
        for (int s = 0; s < n_s; ++s) {
            const int idx = m.add_variable(varname::xim(n, s), 0.0, kInf, VarType::Continuous);
            ix.xim[static_cast<std::size_t>(n)][static_cast<std::size_t>(s)] = idx;
            m.add_objective_term(idx, costs.imbalance_penalty_per_mwh * scen_w);
        }
    return ix;
}

// psi and dpf variables plus the device installation cost.
void add_device_variables(ModelIR& m, Indices& ix, const Network& net,
                          const std::vector<Scenario>& scenarios, const CostConfig& costs) {
    const int n_s = static_cast<int>(scenarios.size());
    ix.psi.resize(net.branches.size());
    for (const Branch& br : net.branches) {
        const int idx = m.add_variable(varname::psi(br.id), 0.0, br.tcsc_allowed ? 1.0 : 0.0,
                                       VarType::Binary);
        ix.psi[static_cast<std::size_t>(br.id)] = idx;
        m.add_objective_term(idx, costs.tcsc_cost_per_mva * br.thermal_limit_mw);
    }
    ix.dpf.assign(net.branches.size(), std::vector<int>(static_cast<std::size_t>(n_s)));
    for (const Branch& br : net.branches)
        for (int s = 0; s < n_s; ++s)
            ix.dpf[static_cast<std::size_t>(br.id)][static_cast<std::size_t>(s)] =
                m.add_variable(varname::dpf(br.id, s), -kInf, kInf, VarType::Continuous);
}

// Power balance, flow representation, thermal limits and angle-difference
// limits. with_dpf switches the flow rows between pf = B*dtheta and
// pf = B*dtheta + dpf. theta_lo/theta_hi carry the per-branch box used for
// the angle rows (tightened or not).
void add_core_rows(ModelIR& m, const Indices& ix, const Network& net,
                   const std::vector<Scenario>& scenarios, bool with_dpf,
                   const Eigen::VectorXd& theta_lo, const Eigen::VectorXd& theta_hi) {
    const int n_b = static_cast<int>(net.buses.size());
    const int n_e = static_cast<int>(net.branches.size());
    const int n_s = static_cast<int>(scenarios.size());

    std::vector<std::vector<int>> gens_at(static_cast<std::size_t>(n_b));
    for (const Generator& g : net.generators)
        gens_at[static_cast<std::size_t>(g.bus)].push_back(g.id);
    std::vector<std::vector<int>> in_at(static_cast<std::size_t>(n_b)),
        out_at(static_cast<std::size_t>(n_b));
    for (const Branch& br : net.branches) {
        out_at[static_cast<std::size_t>(br.from_bus)].push_back(br.id);
        in_at[static_cast<std::size_t>(br.to_bus)].push_back(br.id);
    }

    for (int n = 0; n < n_b; ++n) {
        for (int s = 0; s < n_s; ++s) {
            std::vector<std::pair<int, double>> t;
            for (int g : gens_at[static_cast<std::size_t>(n)])
                t.emplace_back(ix.pg[static_cast<std::size_t>(g)][static_cast<std::size_t>(s)], 1.0);
            for (int e : in_at[static_cast<std::size_t>(n)])
                t.emplace_back(ix.pf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)], 1.0);
            for (int e : out_at[static_cast<std::size_t>(n)])
                t.emplace_back(ix.pf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)], -1.0);
            t.emplace_back(ix.xip[static_cast<std::size_t>(n)][static_cast<std::size_t>(s)], 1.0);
            t.emplace_back(ix.xim[static_cast<std::size_t>(n)][static_cast<std::size_t>(s)], -1.0);
            m.add_constraint("balance_" + std::to_string(n) + "_" + std::to_string(s),
                             std::move(t), RowSense::Equal,
                             scenarios[static_cast<std::size_t>(s)].load_mw[n]);
        }
    }

    for (int e = 0; e < n_e; ++e) {
        const Branch& br = net.branches[static_cast<std::size_t>(e)];
        const double b = br.susceptance_mw_per_rad(net.base_mva);
        for (int s = 0; s < n_s; ++s) {
            const int v_pf = ix.pf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)];
            const int v_tf = ix.theta[static_cast<std::size_t>(br.from_bus)][static_cast<std::size_t>(s)];
            const int v_tt = ix.theta[static_cast<std::size_t>(br.to_bus)][static_cast<std::size_t>(s)];
            std::vector<std::pair<int, double>> t{{v_pf, 1.0}, {v_tt, -b}, {v_tf, b}};
            if (with_dpf)
                t.emplace_back(ix.dpf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)], -1.0);
            m.add_constraint("flow_" + std::to_string(e) + "_" + std::to_string(s),
                             std::move(t), RowSense::Equal, 0.0);
        }
    }

    for (int e = 0; e < n_e; ++e) {
        const Branch& br = net.branches[static_cast<std::size_t>(e)];
        for (int s = 0; s < n_s; ++s) {
            const int v_pf = ix.pf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)];
            const int v_g = ix.gamma[static_cast<std::size_t>(e)];
            m.add_constraint("thermal_hi_" + std::to_string(e) + "_" + std::to_string(s),
                             {{v_pf, 1.0}, {v_g, -br.upgrade_increment_mw}}, RowSense::LessEq,
                             br.thermal_limit_mw);
            m.add_constraint("thermal_lo_" + std::to_string(e) + "_" + std::to_string(s),
                             {{v_pf, 1.0}, {v_g, br.upgrade_increment_mw}}, RowSense::GreaterEq,
                             -br.thermal_limit_mw);
        }
    }

    for (int e = 0; e < n_e; ++e) {
        const Branch& br = net.branches[static_cast<std::size_t>(e)];
        for (int s = 0; s < n_s; ++s) {
            const int v_tf = ix.theta[static_cast<std::size_t>(br.from_bus)][static_cast<std::size_t>(s)];
            const int v_tt = ix.theta[static_cast<std::size_t>(br.to_bus)][static_cast<std::size_t>(s)];
            m.add_constraint("ang_hi_" + std::to_string(e) + "_" + std::to_string(s),
                             {{v_tt, 1.0}, {v_tf, -1.0}}, RowSense::LessEq, theta_hi[e]);
            m.add_constraint("ang_lo_" + std::to_string(e) + "_" + std::to_string(s),
                             {{v_tt, 1.0}, {v_tf, -1.0}}, RowSense::GreaterEq, theta_lo[e]);
        }
    }
}

void fill_meta(ModelIR& m, FormulationKind kind, const Network& net,
               const std::vector<Scenario>& scenarios) {
    m.meta.formulation = to_string(kind);
    m.meta.n_buses = static_cast<int>(net.buses.size());
    m.meta.n_branches = static_cast<int>(net.branches.size());
    m.meta.n_generators = static_cast<int>(net.generators.size());
    m.meta.n_scenarios = static_cast<int>(scenarios.size());
}

Eigen::VectorXd branch_theta_lo(const Network& net) {
    Eigen::VectorXd lo(static_cast<Eigen::Index>(net.branches.size()));
    for (const Branch& br : net.branches) lo[br.id] = br.angle_min_rad;
    return lo;
}

Eigen::VectorXd branch_theta_hi(const Network& net) {
    Eigen::VectorXd hi(static_cast<Eigen::Index>(net.branches.size()));
    for (const Branch& br : net.branches) hi[br.id] = br.angle_max_rad;
    return hi;
}

}  // namespace

ModelIR build_tnep(const Network& net, const std::vector<Scenario>& scenarios,
                   const CostConfig& costs) {
    check_inputs(net, scenarios, costs);
    ModelIR m;
    fill_meta(m, FormulationKind::Tnep, net, scenarios);
    const Indices ix = add_core_variables(m, net, scenarios, costs);
    add_core_rows(m, ix, net, scenarios, /*with_dpf=*/false, branch_theta_lo(net),
                  branch_theta_hi(net));
    return m;
}

namespace {

ModelIR build_big_m(FormulationKind kind, const Network& net,
                    const std::vector<Scenario>& scenarios, const CostConfig& costs,
                    const BigMPolicy& policy) {
    check_inputs(net, scenarios, costs);
    ModelIR m;
    fill_meta(m, kind, net, scenarios);
    Indices ix = add_core_variables(m, net, scenarios, costs);
    add_device_variables(m, ix, net, scenarios, costs);

    const int n_s = static_cast<int>(scenarios.size());
    std::vector<std::vector<int>> z(net.branches.size(),
                                    std::vector<int>(static_cast<std::size_t>(n_s)));
    for (const Branch& br : net.branches)
        for (int s = 0; s < n_s; ++s)
            z[static_cast<std::size_t>(br.id)][static_cast<std::size_t>(s)] =
                m.add_variable(varname::z(br.id, s), 0.0, 1.0, VarType::Binary);

    add_core_rows(m, ix, net, scenarios, /*with_dpf=*/true, branch_theta_lo(net),
                  branch_theta_hi(net));

    const FactsParams facts = compute_facts_params(net);
    const Eigen::VectorXd big_m = resolve_big_m(net, policy);

    for (const Branch& br : net.branches) {
        const int e = br.id;
        const double bl = facts.db_min_mw_rad[e];
        const double bh = facts.db_max_mw_rad[e];
        const double mm = big_m[e];
        for (int s = 0; s < n_s; ++s) {
            const std::string sfx = "_" + std::to_string(e) + "_" + std::to_string(s);
            const int v_dpf = ix.dpf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)];
            const int v_tf = ix.theta[static_cast<std::size_t>(br.from_bus)][static_cast<std::size_t>(s)];
            const int v_tt = ix.theta[static_cast<std::size_t>(br.to_bus)][static_cast<std::size_t>(s)];
            const int v_z = z[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)];
            const int v_psi = ix.psi[static_cast<std::size_t>(e)];

            // z = 1 selects the non-negative angle side, z = 0 the other one.
            m.add_constraint("dsj_pos_lo" + sfx,
                             terms({{v_dpf, 1.0}, {v_tt, -bl}, {v_tf, bl}, {v_z, -mm}}),
                             RowSense::GreaterEq, -mm);
            m.add_constraint("dsj_pos_hi" + sfx,
                             terms({{v_dpf, 1.0}, {v_tt, -bh}, {v_tf, bh}, {v_z, mm}}),
                             RowSense::LessEq, mm);
            m.add_constraint("dsj_neg_lo" + sfx,
                             terms({{v_dpf, 1.0}, {v_tt, -bh}, {v_tf, bh}, {v_z, mm}}),
                             RowSense::GreaterEq, 0.0);
            m.add_constraint("dsj_neg_hi" + sfx,
                             terms({{v_dpf, 1.0}, {v_tt, -bl}, {v_tf, bl}, {v_z, -mm}}),
                             RowSense::LessEq, 0.0);

            // Flow change only with an installed device.
            m.add_constraint("inst_lo" + sfx, terms({{v_dpf, 1.0}, {v_psi, mm}}),
                             RowSense::GreaterEq, 0.0);
            m.add_constraint("inst_hi" + sfx, terms({{v_dpf, 1.0}, {v_psi, -mm}}),
                             RowSense::LessEq, 0.0);
        }
    }
    return m;
}

}  // namespace

ModelIR build_fbsm(const Network& net, const std::vector<Scenario>& scenarios,
                   const CostConfig& costs, const BigMPolicy& policy) {
    const FormulationKind kind =
        policy.mode == BigMMode::PerBranch ? FormulationKind::Fbsmi : FormulationKind::Fbsm;
    return build_big_m(kind, net, scenarios, costs, policy);
}

ModelIR build_fbsmi(const Network& net, const std::vector<Scenario>& scenarios,
                    const CostConfig& costs) {
    return build_big_m(FormulationKind::Fbsmi, net, scenarios, costs,
                       BigMPolicy::per_branch());
}

ModelIR build_facets(const Network& net, const std::vector<Scenario>& scenarios,
                     const CostConfig& costs, bool apply_bound_tightening,
                     bool emit_cap_rows) {
    check_inputs(net, scenarios, costs);
    ModelIR m;
    fill_meta(m, FormulationKind::Facets, net, scenarios);
    Indices ix = add_core_variables(m, net, scenarios, costs);
    add_device_variables(m, ix, net, scenarios, costs);

    const int n_s = static_cast<int>(scenarios.size());
    std::vector<std::vector<int>> zp(net.branches.size(),
                                     std::vector<int>(static_cast<std::size_t>(n_s)));
    std::vector<std::vector<int>> zm(net.branches.size(),
                                     std::vector<int>(static_cast<std::size_t>(n_s)));
    for (const Branch& br : net.branches)
        for (int s = 0; s < n_s; ++s)
            zp[static_cast<std::size_t>(br.id)][static_cast<std::size_t>(s)] =
                m.add_variable(varname::zp(br.id, s), 0.0, 1.0, VarType::Binary);
    for (const Branch& br : net.branches)
        for (int s = 0; s < n_s; ++s)
            zm[static_cast<std::size_t>(br.id)][static_cast<std::size_t>(s)] =
                m.add_variable(varname::zm(br.id, s), 0.0, 1.0, VarType::Binary);

    const FactsParams facts = compute_facts_params(net);

    Eigen::VectorXd theta_lo = branch_theta_lo(net);
    Eigen::VectorXd theta_hi = branch_theta_hi(net);
    std::vector<DisjunctBlockParams> params(net.branches.size());
    for (const Branch& br : net.branches) {
        params[static_cast<std::size_t>(br.id)] =
            disjunct_params_for_branch(net, br, facts, apply_bound_tightening);
        theta_lo[br.id] = params[static_cast<std::size_t>(br.id)].theta_min;
        theta_hi[br.id] = params[static_cast<std::size_t>(br.id)].theta_max;
    }

    add_core_rows(m, ix, net, scenarios, /*with_dpf=*/true, theta_lo, theta_hi);

    for (const Branch& br : net.branches) {
        const int e = br.id;
        for (int s = 0; s < n_s; ++s) {
            const std::string sfx = "_" + std::to_string(e) + "_" + std::to_string(s);
            DisjunctVarIndices v;
            v.psi = ix.psi[static_cast<std::size_t>(e)];
            v.z_plus = zp[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)];
            v.z_minus = zm[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)];
            v.theta_from = ix.theta[static_cast<std::size_t>(br.from_bus)][static_cast<std::size_t>(s)];
            v.theta_to = ix.theta[static_cast<std::size_t>(br.to_bus)][static_cast<std::size_t>(s)];
            v.dpf = ix.dpf[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)];
            for (LinearConstraintDef& row :
                 facet_block(params[static_cast<std::size_t>(e)], v, sfx, emit_cap_rows))
                m.add_constraint(std::move(row.name), std::move(row.terms), row.sense, row.rhs);
        }
    }
    return m;
}

ModelIR build_formulation(FormulationKind kind, const Network& net,
                          const std::vector<Scenario>& scenarios, const CostConfig& costs,
                          bool apply_bound_tightening, bool emit_cap_rows) {
    switch (kind) {
        case FormulationKind::Tnep: return build_tnep(net, scenarios, costs);
        case FormulationKind::Fbsm: return build_fbsm(net, scenarios, costs);
        case FormulationKind::Fbsmi: return build_fbsmi(net, scenarios, costs);
        case FormulationKind::Facets:
            return build_facets(net, scenarios, costs, apply_bound_tightening, emit_cap_rows);
    }
    throw ValidationError("unknown formulation kind");
}

}  // namespace tnepfacts
