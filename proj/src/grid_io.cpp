#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tnepfacts/grid.hpp"

namespace tnepfacts {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

double num_or(const json& j, const char* key, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<double>();
}

json bus_to_json(const Bus& b) {
    json j{{"id", b.id}, {"name", b.name}};
    if (b.x_coord) j["x_coord"] = *b.x_coord;
    if (b.y_coord) j["y_coord"] = *b.y_coord;
    return j;
}

json branch_to_json(const Branch& b) {
    return json{{"id", b.id},
                {"from_bus", b.from_bus},
                {"to_bus", b.to_bus},
                {"reactance_pu", b.reactance_pu},
                {"thermal_limit_mw", b.thermal_limit_mw},
                {"length_km", b.length_km},
                {"angle_min_rad", b.angle_min_rad},
                {"angle_max_rad", b.angle_max_rad},
                {"upgrade_increment_mw", b.upgrade_increment_mw},
                {"max_upgrades", b.max_upgrades},
                {"tcsc_allowed", b.tcsc_allowed},
                {"tcsc_dx_min_frac", b.tcsc_dx_min_frac},
                {"tcsc_dx_max_frac", b.tcsc_dx_max_frac}};
}

json generator_to_json(const Generator& g) {
    return json{{"id", g.id},
                {"bus", g.bus},
                {"kind", g.kind == GeneratorKind::Renewable ? "renewable" : "nonrenewable"},
                {"pmin_mw", g.pmin_mw},
                {"pmax_mw", g.pmax_mw},
                {"cost_per_mwh", g.cost_per_mwh},
                {"tag", g.tag}};
}

}  // namespace

std::string network_to_json_string(const Network& net) {
    json j;
    j["base_mva"] = net.base_mva;
    j["buses"] = json::array();
    for (const Bus& b : net.buses) j["buses"].push_back(bus_to_json(b));
    j["branches"] = json::array();
    for (const Branch& b : net.branches) j["branches"].push_back(branch_to_json(b));
    j["generators"] = json::array();
    for (const Generator& g : net.generators) j["generators"].push_back(generator_to_json(g));
    return j.dump(2) + "\n";
}

Network network_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad network JSON: ") + e.what());
    }

    Network net;
    try {
        net.base_mva = num_or(j, "base_mva", 100.0);
        for (const json& jb : j.at("buses")) {
            Bus b;
            b.id = jb.at("id").get<int>();
            b.name = jb.value("name", "bus" + std::to_string(b.id));
            if (jb.contains("x_coord")) b.x_coord = jb["x_coord"].get<double>();
            if (jb.contains("y_coord")) b.y_coord = jb["y_coord"].get<double>();
            net.buses.push_back(std::move(b));
        }
        for (const json& jb : j.at("branches")) {
            Branch b;
            b.id = jb.at("id").get<int>();
            b.from_bus = jb.at("from_bus").get<int>();
            b.to_bus = jb.at("to_bus").get<int>();
            b.reactance_pu = jb.at("reactance_pu").get<double>();
            b.thermal_limit_mw = jb.at("thermal_limit_mw").get<double>();
            b.length_km = num_or(jb, "length_km", 1.0);
            b.angle_max_rad = num_or(jb, "angle_max_rad", 0.6);
            b.angle_min_rad = num_or(jb, "angle_min_rad", -b.angle_max_rad);
            b.upgrade_increment_mw = num_or(jb, "upgrade_increment_mw", 300.0);
            b.max_upgrades = jb.contains("max_upgrades") ? jb["max_upgrades"].get<int>() : 0;
            b.tcsc_allowed = jb.value("tcsc_allowed", false);
            b.tcsc_dx_min_frac = num_or(jb, "tcsc_dx_min_frac", -0.4);
            b.tcsc_dx_max_frac = num_or(jb, "tcsc_dx_max_frac", 0.2);
            net.branches.push_back(b);
        }
        for (const json& jg : j.at("generators")) {
            Generator g;
            g.id = jg.at("id").get<int>();
            g.bus = jg.at("bus").get<int>();
            const std::string kind = jg.at("kind").get<std::string>();
            if (kind == "renewable")
                g.kind = GeneratorKind::Renewable;
            else if (kind == "nonrenewable")
                g.kind = GeneratorKind::Nonrenewable;
            else
                throw ValidationError("generator " + std::to_string(g.id) +
                                      ": unknown kind '" + kind + "'");
            g.pmin_mw = num_or(jg, "pmin_mw", 0.0);
            g.pmax_mw = jg.at("pmax_mw").get<double>();
            g.cost_per_mwh = num_or(jg, "cost_per_mwh", 0.0);
            g.tag = jg.value("tag", "");
            net.generators.push_back(std::move(g));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad network JSON: ") + e.what());
    }

    validate_network(net);
    return net;
}

Network load_network(const std::string& path) {
    return network_from_json_string(slurp(path));
}

void save_network(const Network& net, const std::string& path) {
    spit(path, network_to_json_string(net));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

HourlyTimeSeries load_series(const std::string& path, const Network& net) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty time series file");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "timestamp" || header[1] != "season")
        throw ParseError(path + ": header must start with timestamp,season");

    const int n_buses = static_cast<int>(net.buses.size());
    std::vector<int> load_col_of_bus(static_cast<std::size_t>(n_buses), -1);
    std::vector<std::pair<int, int>> avail_cols;  // (csv column, generator id)
    for (std::size_t c = 2; c < header.size(); ++c) {
        const std::string& h = header[c];
        if (h.rfind("load_", 0) == 0) {
            const int id = std::stoi(h.substr(5));
            if (id < 0 || id >= n_buses)
                throw ValidationError(path + ": column " + h + " names an unknown bus");
            load_col_of_bus[static_cast<std::size_t>(id)] = static_cast<int>(c);
        } else if (h.rfind("avail_", 0) == 0) {
            const int id = std::stoi(h.substr(6));
            if (id < 0 || id >= static_cast<int>(net.generators.size()))
                throw ValidationError(path + ": column " + h + " names an unknown generator");
            avail_cols.emplace_back(static_cast<int>(c), id);
        } else {
            throw ParseError(path + ": unexpected column '" + h + "'");
        }
    }
    for (int b = 0; b < n_buses; ++b)
        if (load_col_of_bus[static_cast<std::size_t>(b)] < 0)
            throw ValidationError(path + ": missing load column for bus " + std::to_string(b));

    HourlyTimeSeries ts;
    for (const auto& [col, gid] : avail_cols) {
        ts.avail_gen_ids.push_back(gid);
        ts.avail_tags.push_back(net.generators[static_cast<std::size_t>(gid)].tag);
    }

    std::vector<std::vector<double>> load_rows, avail_rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": row has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(header.size()));
        ts.timestamps.push_back(cells[0]);
        ts.seasons.push_back(lower(cells[1]));
        std::vector<double> lr(static_cast<std::size_t>(n_buses));
        for (int b = 0; b < n_buses; ++b)
            lr[static_cast<std::size_t>(b)] = parse_double(
                cells[static_cast<std::size_t>(load_col_of_bus[static_cast<std::size_t>(b)])],
                path + ":" + std::to_string(line_no));
        std::vector<double> ar(avail_cols.size());
        for (std::size_t k = 0; k < avail_cols.size(); ++k)
            ar[k] = parse_double(cells[static_cast<std::size_t>(avail_cols[k].first)],
                                 path + ":" + std::to_string(line_no));
        load_rows.push_back(std::move(lr));
        avail_rows.push_back(std::move(ar));
    }

    const auto h = static_cast<Eigen::Index>(load_rows.size());
    ts.load_mw.resize(h, n_buses);
    ts.renewable_avail_mw.resize(h, static_cast<Eigen::Index>(avail_cols.size()));
    for (Eigen::Index r = 0; r < h; ++r) {
        for (int b = 0; b < n_buses; ++b)
            ts.load_mw(r, b) = load_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
        for (std::size_t k = 0; k < avail_cols.size(); ++k)
            ts.renewable_avail_mw(r, static_cast<Eigen::Index>(k)) =
                avail_rows[static_cast<std::size_t>(r)][k];
    }

    validate_series(ts, net);
    return ts;
}

void save_series(const HourlyTimeSeries& ts, const Network& net, const std::string& path) {
    validate_series(ts, net);
    std::ostringstream out;
    out << "timestamp,season";
    for (const Bus& b : net.buses) out << ",load_" << b.id;
    for (int gid : ts.avail_gen_ids) out << ",avail_" << gid;
    out << "\n";
    for (Eigen::Index h = 0; h < ts.n_hours(); ++h) {
        out << ts.timestamps[static_cast<std::size_t>(h)] << ","
            << ts.seasons[static_cast<std::size_t>(h)];
        for (Eigen::Index b = 0; b < ts.load_mw.cols(); ++b)
            out << "," << format_double(ts.load_mw(h, b));
        for (Eigen::Index c = 0; c < ts.renewable_avail_mw.cols(); ++c)
            out << "," << format_double(ts.renewable_avail_mw(h, c));
        out << "\n";
    }
    spit(path, out.str());
}

std::vector<Scenario> load_scenarios(const std::string& path, const Network& net) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad scenarios JSON: ") + e.what());
    }
    std::vector<Scenario> out;
    try {
        for (const json& js : j.at("scenarios")) {
            Scenario sc;
            sc.id = js.at("id").get<int>();
            sc.season = js.value("season", "");
            sc.criterion = js.value("criterion", "");
            sc.source_hour = js.value("source_hour", "");
            const auto& load = js.at("load_mw");
            const auto& pmin = js.at("gen_pmin_mw");
            const auto& pmax = js.at("gen_pmax_mw");
            if (load.size() != net.buses.size())
                throw ValidationError("scenario " + std::to_string(sc.id) +
                                      ": load vector does not match bus count");
            if (pmin.size() != net.generators.size() || pmax.size() != net.generators.size())
                throw ValidationError("scenario " + std::to_string(sc.id) +
                                      ": generator limit vectors do not match generator count");
            sc.load_mw.resize(static_cast<Eigen::Index>(load.size()));
            for (std::size_t i = 0; i < load.size(); ++i)
                sc.load_mw[static_cast<Eigen::Index>(i)] = load[i].get<double>();
            sc.gen_pmin_mw.resize(static_cast<Eigen::Index>(pmin.size()));
            sc.gen_pmax_mw.resize(static_cast<Eigen::Index>(pmax.size()));
            for (std::size_t i = 0; i < pmin.size(); ++i) {
                sc.gen_pmin_mw[static_cast<Eigen::Index>(i)] = pmin[i].get<double>();
                sc.gen_pmax_mw[static_cast<Eigen::Index>(i)] = pmax[i].get<double>();
                if (sc.gen_pmin_mw[static_cast<Eigen::Index>(i)] >
                    sc.gen_pmax_mw[static_cast<Eigen::Index>(i)])
                    throw ValidationError("scenario " + std::to_string(sc.id) +
                                          ": generator " + std::to_string(i) +
                                          " has pmin > pmax");
            }
            out.push_back(std::move(sc));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad scenarios JSON: ") + e.what());
    }
    return out;
}

void save_scenarios(const std::vector<Scenario>& scenarios, const std::string& path) {
    json j;
    j["scenarios"] = json::array();
    for (const Scenario& sc : scenarios) {
        json js{{"id", sc.id},
                {"season", sc.season},
                {"criterion", sc.criterion},
                {"source_hour", sc.source_hour}};
        js["load_mw"] = std::vector<double>(sc.load_mw.data(), sc.load_mw.data() + sc.load_mw.size());
        js["gen_pmin_mw"] =
            std::vector<double>(sc.gen_pmin_mw.data(), sc.gen_pmin_mw.data() + sc.gen_pmin_mw.size());
        js["gen_pmax_mw"] =
            std::vector<double>(sc.gen_pmax_mw.data(), sc.gen_pmax_mw.data() + sc.gen_pmax_mw.size());
        j["scenarios"].push_back(std::move(js));
    }
    spit(path, j.dump(2) + "\n");
}

}  // namespace tnepfacts
