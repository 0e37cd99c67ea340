#include "support/fixtures.hpp"

namespace tnepfacts::testsupport {

namespace {

Bus make_bus(int id, double x, double y) {
    Bus b;
    b.id = id;
    b.name = "bus" + std::to_string(id);
    b.x_coord = x;
    b.y_coord = y;
    return b;
}

Branch make_branch(int id, int from, int to, double cap, double len, double dc, int m) {
    Branch br;
    br.id = id;
    br.from_bus = from;
    br.to_bus = to;
    br.reactance_pu = 0.1;  // B = 1000 MW/rad on the 100 MVA base
    br.thermal_limit_mw = cap;
    br.length_km = len;
    br.angle_max_rad = 0.6;
    br.angle_min_rad = -0.6;
    br.upgrade_increment_mw = dc;
    br.max_upgrades = m;
    br.tcsc_allowed = false;
    br.tcsc_dx_min_frac = 0.0;
    br.tcsc_dx_max_frac = 0.0;
    return br;
}

Generator make_gen(int id, int bus, double pmax, double cost) {
    Generator g;
    g.id = id;
    g.bus = bus;
    g.kind = GeneratorKind::Nonrenewable;
    g.pmin_mw = 0.0;
    g.pmax_mw = pmax;
    g.cost_per_mwh = cost;
    g.tag = "thermal";
    return g;
}

Scenario single_scenario(const Network& net, const std::vector<double>& load) {
    Scenario sc;
    sc.id = 0;
    sc.season = "summer";
    sc.criterion = "fixture";
    sc.load_mw = Eigen::Map<const Eigen::VectorXd>(load.data(),
                                                   static_cast<Eigen::Index>(load.size()));
    const auto n_g = static_cast<Eigen::Index>(net.generators.size());
    sc.gen_pmin_mw.resize(n_g);
    sc.gen_pmax_mw.resize(n_g);
    for (const Generator& g : net.generators) {
        sc.gen_pmin_mw[g.id] = g.pmin_mw;
        sc.gen_pmax_mw[g.id] = g.pmax_mw;
    }
    return sc;
}

}  // namespace

Fixture two_bus() {
    Fixture f;
    f.net.base_mva = 100.0;
    f.net.buses = {make_bus(0, 0.0, 0.0), make_bus(1, 1.0, 0.0)};
    f.net.branches = {make_branch(0, 0, 1, 100.0, 1.0, 50.0, 1)};
    f.net.generators = {make_gen(0, 0, 200.0, 10.0)};
    f.scenarios = {single_scenario(f.net, {0.0, 150.0})};
    f.costs.imbalance_penalty_per_mwh = 1000.0;
    f.costs.capacity_cost_per_mw_km = 2.0;  // 2 * 1 km * 50 MW = $100 per level
    f.costs.tcsc_cost_per_mva = 2200.0;
    validate_network(f.net);
    return f;
}

Fixture two_bus_angle_limited() {
    Fixture f = two_bus();
    f.net.branches[0].angle_max_rad = 0.05;
    f.net.branches[0].angle_min_rad = -0.05;
    return f;
}

Fixture triangle_congested() {
    Fixture f;
    f.net.base_mva = 100.0;
    f.net.buses = {make_bus(0, 0.0, 0.0), make_bus(1, 50.0, 50.0), make_bus(2, 100.0, 0.0)};
    f.net.branches = {
        make_branch(0, 0, 1, 100.0, 50.0, 20.0, 1),
        make_branch(1, 1, 2, 100.0, 50.0, 20.0, 1),
        make_branch(2, 0, 2, 100.0, 100.0, 20.0, 1),
    };
    // Device on the direct line can double its reactance (dX up to +1.0 X),
    // moving the susceptance by up to -500 MW/rad.
    f.net.branches[2].tcsc_allowed = true;
    f.net.branches[2].tcsc_dx_min_frac = 0.0;
    f.net.branches[2].tcsc_dx_max_frac = 1.0;
    f.net.generators = {make_gen(0, 0, 300.0, 10.0)};
    f.scenarios = {single_scenario(f.net, {0.0, 0.0, 200.0})};
    f.costs.imbalance_penalty_per_mwh = 50000.0;
    f.costs.capacity_cost_per_mw_km = 124.0;
    f.costs.tcsc_cost_per_mva = 2200.0;
    validate_network(f.net);
    return f;
}

Fixture triangle_loose_m() {
    Fixture f = triangle_congested();
    // Device range sized within the branch rating: swing 150 MW at the angle
    // limit, i.e. dB in [-150, 0] MW/rad, dx_max = 150/(1000-150).
    f.net.branches[2].tcsc_dx_max_frac = 150.0 / 850.0;
    // Pendant bus behind a fat line inflates the global big-M only.
    f.net.buses.push_back(make_bus(3, 150.0, 0.0));
    f.net.branches.push_back(make_branch(3, 2, 3, 1000.0, 10.0, 20.0, 1));
    f.scenarios = {single_scenario(f.net, {0.0, 0.0, 200.0, 10.0})};
    validate_network(f.net);
    return f;
}

}  // namespace tnepfacts::testsupport
