#include "tnepfacts/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

namespace tnepfacts {

namespace {

std::string ent(const char* kind, int id) {
    return std::string(kind) + " " + std::to_string(id);
}

}  // namespace

void validate_network(const Network& net) {
    if (net.base_mva <= 0.0)
        throw ValidationError("base_mva must be positive");
    if (net.buses.empty())
        throw ValidationError("network has no buses");

    const int n = static_cast<int>(net.buses.size());
    for (int i = 0; i < n; ++i) {
        if (net.buses[i].id != i)
            throw ValidationError(ent("bus", net.buses[i].id) +
                                  ": ids must be dense and 0-based (expected " +
                                  std::to_string(i) + ")");
    }

    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const Branch& br = net.branches[i];
        const std::string who = ent("branch", br.id);
        if (br.id != static_cast<int>(i))
            throw ValidationError(who + ": ids must be dense and 0-based");
        if (br.from_bus < 0 || br.from_bus >= n)
            throw ValidationError(who + ": from_bus " + std::to_string(br.from_bus) +
                                  " does not exist");
        if (br.to_bus < 0 || br.to_bus >= n)
            throw ValidationError(who + ": to_bus " + std::to_string(br.to_bus) +
                                  " does not exist");
        if (br.from_bus == br.to_bus)
            throw ValidationError(who + ": from_bus equals to_bus");
        if (!(br.reactance_pu > 0.0))
            throw ValidationError(who + ": reactance_pu must be positive");
        if (!(br.thermal_limit_mw > 0.0))
            throw ValidationError(who + ": thermal_limit_mw must be positive");
        if (br.length_km < 0.0)
            throw ValidationError(who + ": length_km must be non-negative");
        if (!(br.angle_min_rad < 0.0 && 0.0 < br.angle_max_rad))
            throw ValidationError(who + ": angle bounds must straddle zero");
        if (!(br.upgrade_increment_mw > 0.0))
            throw ValidationError(who + ": upgrade_increment_mw must be positive");
        if (br.max_upgrades < 0)
            throw ValidationError(who + ": max_upgrades must be non-negative");
        if (!(br.tcsc_dx_min_frac > -1.0))
            throw ValidationError(who + ": tcsc_dx_min_frac must exceed -1");
        if (!(br.tcsc_dx_min_frac <= 0.0 && 0.0 <= br.tcsc_dx_max_frac))
            throw ValidationError(who + ": tcsc δX fractions must straddle zero");
    }

    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& g = net.generators[i];
        const std::string who = ent("generator", g.id);
        if (g.id != static_cast<int>(i))
            throw ValidationError(who + ": ids must be dense and 0-based");
        if (g.bus < 0 || g.bus >= n)
            throw ValidationError(who + ": bus " + std::to_string(g.bus) +
                                  " does not exist");
        if (g.pmin_mw < 0.0 || g.pmin_mw > g.pmax_mw)
            throw ValidationError(who + ": requires 0 <= pmin_mw <= pmax_mw");
        if (g.kind == GeneratorKind::Renewable) {
            if (g.pmin_mw != 0.0)
                throw ValidationError(who + ": renewable generators must have pmin_mw = 0");
            if (g.cost_per_mwh != 0.0)
                throw ValidationError(who + ": renewable generators must have zero cost");
            if (g.tag != "wind" && g.tag != "solar")
                throw ValidationError(who + ": renewable generators need tag wind or solar");
        }
    }
}

void validate_series(const HourlyTimeSeries& ts, const Network& net) {
    const Eigen::Index h = ts.load_mw.rows();
    if (static_cast<Eigen::Index>(ts.timestamps.size()) != h ||
        static_cast<Eigen::Index>(ts.seasons.size()) != h ||
        ts.renewable_avail_mw.rows() != h)
        throw ValidationError("time series rows are inconsistent");
    if (ts.load_mw.cols() != static_cast<Eigen::Index>(net.buses.size()))
        throw ValidationError("time series load columns do not cover all buses");
    if (ts.renewable_avail_mw.cols() != static_cast<Eigen::Index>(ts.avail_gen_ids.size()) ||
        ts.avail_tags.size() != ts.avail_gen_ids.size())
        throw ValidationError("availability columns are inconsistent");

    std::set<int> renewables;
    for (const Generator& g : net.generators)
        if (g.kind == GeneratorKind::Renewable) renewables.insert(g.id);
    std::set<int> covered(ts.avail_gen_ids.begin(), ts.avail_gen_ids.end());
    for (int id : renewables)
        if (!covered.count(id))
            throw ValidationError("generator " + std::to_string(id) +
                                  ": renewable generator has no avail_ column");
    for (int id : ts.avail_gen_ids) {
        if (!renewables.count(id))
            throw ValidationError("generator " + std::to_string(id) +
                                  ": avail_ column does not match a renewable generator");
    }

    if ((ts.load_mw.array() < 0.0).any())
        throw ValidationError("time series has negative load entries");
    if (ts.renewable_avail_mw.size() > 0 && (ts.renewable_avail_mw.array() < 0.0).any())
        throw ValidationError("time series has negative availability entries");
}

void validate_costs(const CostConfig& costs) {
    if (!(costs.imbalance_penalty_per_mwh > 0.0))
        throw ValidationError("imbalance_penalty_per_mwh must be positive");
    if (!(costs.capacity_cost_per_mw_km > 0.0))
        throw ValidationError("capacity_cost_per_mw_km must be positive");
    if (!(costs.tcsc_cost_per_mva > 0.0))
        throw ValidationError("tcsc_cost_per_mva must be positive");
}

HourlyTimeSeries scale_series(const HourlyTimeSeries& ts, double load_factor,
                              double wind_factor, double solar_factor) {
    if (load_factor < 0.0 || wind_factor < 0.0 || solar_factor < 0.0)
        throw ValidationError("scale factors must be non-negative");
    HourlyTimeSeries out = ts;
    out.load_mw *= load_factor;
    for (Eigen::Index c = 0; c < out.renewable_avail_mw.cols(); ++c) {
        const double f = ts.avail_tags[static_cast<std::size_t>(c)] == "wind"
                             ? wind_factor
                             : solar_factor;
        out.renewable_avail_mw.col(c) *= f;
    }
    return out;
}

Scenario make_scenario(const Network& net, const HourlyTimeSeries& ts,
                       Eigen::Index hour, int id) {
    if (hour < 0 || hour >= ts.n_hours())
        throw ValidationError("hour index out of range");
    Scenario sc;
    sc.id = id;
    sc.season = ts.seasons[static_cast<std::size_t>(hour)];
    sc.source_hour = ts.timestamps[static_cast<std::size_t>(hour)];
    sc.load_mw = ts.load_mw.row(hour).transpose();

    const auto g_count = static_cast<Eigen::Index>(net.generators.size());
    sc.gen_pmin_mw.resize(g_count);
    sc.gen_pmax_mw.resize(g_count);
    for (Eigen::Index g = 0; g < g_count; ++g) {
        const Generator& gen = net.generators[static_cast<std::size_t>(g)];
        sc.gen_pmin_mw[g] = gen.pmin_mw;
        sc.gen_pmax_mw[g] = gen.pmax_mw;
    }
    for (std::size_t c = 0; c < ts.avail_gen_ids.size(); ++c) {
        const int gid = ts.avail_gen_ids[c];
        sc.gen_pmin_mw[gid] = 0.0;
        sc.gen_pmax_mw[gid] = ts.renewable_avail_mw(hour, static_cast<Eigen::Index>(c));
    }
    return sc;
}

namespace {

// argbest over the given hour set; strict comparison keeps the earliest hour
// on ties because hours are visited in ascending order.
template <typename Score>
Eigen::Index pick_hour(const std::vector<Eigen::Index>& hours, Score score, bool maximize) {
    Eigen::Index best = hours.front();
    double best_val = score(best);
    for (Eigen::Index h : hours) {
        const double v = score(h);
        if (maximize ? v > best_val : v < best_val) {
            best = h;
            best_val = v;
        }
    }
    return best;
}

}  // namespace

std::vector<Scenario> select_scenarios(const Network& net, const HourlyTimeSeries& ts) {
    validate_series(ts, net);

    std::vector<int> wind_cols, solar_cols;
    for (std::size_t c = 0; c < ts.avail_tags.size(); ++c)
        (ts.avail_tags[c] == "wind" ? wind_cols : solar_cols).push_back(static_cast<int>(c));

    auto total_load = [&](Eigen::Index h) { return ts.load_mw.row(h).sum(); };
    auto total_avail = [&](Eigen::Index h) {
        return ts.renewable_avail_mw.cols() > 0 ? ts.renewable_avail_mw.row(h).sum() : 0.0;
    };
    auto col_sum = [&](Eigen::Index h, const std::vector<int>& cols) {
        double s = 0.0;
        for (int c : cols) s += ts.renewable_avail_mw(h, c);
        return s;
    };

    std::vector<Scenario> out;
    int id = 0;
    for (const std::string& season : {std::string("summer"), std::string("winter")}) {
        std::vector<Eigen::Index> hours;
        for (Eigen::Index h = 0; h < ts.n_hours(); ++h)
            if (ts.seasons[static_cast<std::size_t>(h)] == season) hours.push_back(h);
        if (hours.empty())
            throw ValidationError("time series has no " + season + " hours");

        struct Pick {
            const char* criterion;
            Eigen::Index hour;
        };
        const Pick picks[5] = {
            {"peak_load", pick_hour(hours, total_load, true)},
            {"peak_net_load",
             pick_hour(hours, [&](Eigen::Index h) { return total_load(h) - total_avail(h); },
                       true)},
            {"peak_wind",
             pick_hour(hours, [&](Eigen::Index h) { return col_sum(h, wind_cols); }, true)},
            {"peak_solar",
             pick_hour(hours, [&](Eigen::Index h) { return col_sum(h, solar_cols); }, true)},
            {"min_wind",
             pick_hour(hours, [&](Eigen::Index h) { return col_sum(h, wind_cols); }, false)},
        };
        for (const Pick& p : picks) {
            Scenario sc = make_scenario(net, ts, p.hour, id++);
            sc.criterion = p.criterion;
            out.push_back(std::move(sc));
        }
    }
    return out;
}

namespace {

const int kDaysPerMonth[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

std::string hour_stamp(int month0, int hour_offset) {
    int day = hour_offset / 24;
    const int hour = hour_offset % 24;
    int month = month0;
    while (day >= kDaysPerMonth[month]) {
        day -= kDaysPerMonth[month];
        month = (month + 1) % 12;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "2030-%02d-%02dT%02d:00:00", month + 1, day + 1, hour);
    return buf;
}

}  // namespace

std::pair<Network, HourlyTimeSeries> synth_network(std::uint64_t seed, int n_buses,
                                                   int n_branches, int n_gens,
                                                   double renewable_fraction,
                                                   int n_hours) {
    if (n_buses < 1) throw ValidationError("synth_network: need at least one bus");
    if (n_branches < n_buses - 1)
        throw ValidationError("synth_network: " + std::to_string(n_branches) +
                              " branches cannot connect " + std::to_string(n_buses) + " buses");
    if (n_gens < 0 || renewable_fraction < 0.0 || renewable_fraction > 1.0)
        throw ValidationError("synth_network: bad generator counts");
    if (n_hours < 2) throw ValidationError("synth_network: need at least two hours");

    Rng rng(seed);
    Network net;
    net.base_mva = 100.0;

    net.buses.resize(static_cast<std::size_t>(n_buses));
    for (int i = 0; i < n_buses; ++i) {
        Bus& b = net.buses[static_cast<std::size_t>(i)];
        b.id = i;
        b.name = "bus" + std::to_string(i);
        b.x_coord = rng.uniform(0.0, 1000.0);
        b.y_coord = rng.uniform(0.0, 1000.0);
    }

    // Random spanning tree first, then extra edges over unused bus pairs.
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> used;
    std::vector<int> order(static_cast<std::size_t>(n_buses));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n_buses - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(rng.uniform_int(0, i))]);
    for (int i = 1; i < n_buses; ++i) {
        const int a = order[static_cast<std::size_t>(i)];
        const int b = order[static_cast<std::size_t>(rng.uniform_int(0, i - 1))];
        edges.emplace_back(a, b);
        used.insert({std::min(a, b), std::max(a, b)});
    }
    const long max_pairs = static_cast<long>(n_buses) * (n_buses - 1) / 2;
    while (static_cast<int>(edges.size()) < n_branches) {
        const int a = static_cast<int>(rng.uniform_int(0, n_buses - 1));
        const int b = static_cast<int>(rng.uniform_int(0, n_buses - 1));
        if (a == b) continue;
        const auto key = std::make_pair(std::min(a, b), std::max(a, b));
        if (static_cast<long>(used.size()) < max_pairs && used.count(key)) continue;
        used.insert(key);
        edges.emplace_back(a, b);
    }

    net.branches.resize(static_cast<std::size_t>(n_branches));
    for (int e = 0; e < n_branches; ++e) {
        Branch& br = net.branches[static_cast<std::size_t>(e)];
        br.id = e;
        br.from_bus = edges[static_cast<std::size_t>(e)].first;
        br.to_bus = edges[static_cast<std::size_t>(e)].second;
        br.reactance_pu = rng.uniform(0.01, 0.2);
        br.thermal_limit_mw = rng.uniform(100.0, 2000.0);
        const Bus& fb = net.buses[static_cast<std::size_t>(br.from_bus)];
        const Bus& tb = net.buses[static_cast<std::size_t>(br.to_bus)];
        br.length_km = std::max(1.0, std::hypot(*fb.x_coord - *tb.x_coord,
                                                *fb.y_coord - *tb.y_coord));
        br.angle_max_rad = 0.6;
        br.angle_min_rad = -0.6;
        br.upgrade_increment_mw = 300.0;
        br.max_upgrades = 3;
        br.tcsc_allowed = true;
        br.tcsc_dx_min_frac = -0.4;
        br.tcsc_dx_max_frac = 0.2;
    }

    const int n_renewable = static_cast<int>(std::lround(renewable_fraction * n_gens));
    net.generators.resize(static_cast<std::size_t>(n_gens));
    for (int g = 0; g < n_gens; ++g) {
        Generator& gen = net.generators[static_cast<std::size_t>(g)];
        gen.id = g;
        gen.bus = static_cast<int>(rng.uniform_int(0, n_buses - 1));
        if (g < n_gens - n_renewable) {
            gen.kind = GeneratorKind::Nonrenewable;
            gen.pmax_mw = rng.uniform(50.0, 800.0);
            gen.pmin_mw = rng.uniform(0.0, 0.4) * gen.pmax_mw;
            gen.cost_per_mwh = rng.uniform(8.0, 60.0);
            gen.tag = "thermal";
        } else {
            gen.kind = GeneratorKind::Renewable;
            gen.pmax_mw = rng.uniform(50.0, 400.0);
            gen.pmin_mw = 0.0;
            gen.cost_per_mwh = 0.0;
            gen.tag = rng.coin() ? "wind" : "solar";
        }
    }

    // Hourly series: first half winter (January onward), second half summer
    // (July onward). Loads follow a diurnal shape; solar follows daylight.
    HourlyTimeSeries ts;
    ts.load_mw.resize(n_hours, n_buses);
    for (const Generator& g : net.generators) {
        if (g.kind == GeneratorKind::Renewable) {
            ts.avail_gen_ids.push_back(g.id);
            ts.avail_tags.push_back(g.tag);
        }
    }
    ts.renewable_avail_mw.resize(n_hours, static_cast<Eigen::Index>(ts.avail_gen_ids.size()));

    double cap_total = 0.0;
    for (const Generator& g : net.generators)
        cap_total += g.kind == GeneratorKind::Nonrenewable ? g.pmax_mw : 0.5 * g.pmax_mw;
    const double peak_total = n_gens > 0 ? 0.7 * cap_total : 100.0 * n_buses;

    Eigen::VectorXd bus_weight(n_buses);
    for (int i = 0; i < n_buses; ++i) bus_weight[i] = rng.uniform(0.2, 1.0);
    bus_weight /= bus_weight.sum();

    const int half = n_hours / 2;
    for (int h = 0; h < n_hours; ++h) {
        const bool winter = h < half;
        const int local = winter ? h : h - half;
        ts.seasons.push_back(winter ? "winter" : "summer");
        ts.timestamps.push_back(hour_stamp(winter ? 0 : 6, local));

        const int hod = local % 24;
        const double diurnal = 0.75 + 0.25 * std::sin((hod - 5.0) * std::numbers::pi / 12.0);
        const double season_f = winter ? 0.9 : 1.0;
        for (int i = 0; i < n_buses; ++i) {
            const double noise = rng.uniform(0.92, 1.08);
            ts.load_mw(h, i) = peak_total * bus_weight[i] * diurnal * season_f * noise;
        }
        for (std::size_t c = 0; c < ts.avail_gen_ids.size(); ++c) {
            const Generator& g = net.generators[static_cast<std::size_t>(ts.avail_gen_ids[c])];
            double f;
            if (g.tag == "wind") {
                f = std::pow(rng.uniform(0.0, 1.0), 1.3);
            } else {
                const double daylight = std::max(0.0, std::sin((hod - 6.0) * std::numbers::pi / 12.0));
                f = daylight * rng.uniform(0.7, 1.0);
            }
            ts.renewable_avail_mw(h, static_cast<Eigen::Index>(c)) = g.pmax_mw * f;
        }
    }

    validate_network(net);
    validate_series(ts, net);
    return {std::move(net), std::move(ts)};
}

}  // namespace tnepfacts
