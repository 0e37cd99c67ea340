#include "tnepfacts/milp.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tnepfacts {

int ModelIR::add_variable(std::string name, double lower, double upper, VarType type) {
    if (!(lower <= upper))
        throw ValidationError("variable " + name + ": lower bound exceeds upper bound");
    if (type == VarType::Binary && (lower < 0.0 || upper > 1.0))
        throw ValidationError("variable " + name + ": binary bounds must lie in [0,1]");
    if (var_index_.count(name))
        throw ValidationError("variable " + name + ": duplicate name");
    const int idx = static_cast<int>(vars_.size());
    var_index_.emplace(name, idx);
    vars_.push_back(VariableDef{std::move(name), lower, upper, type});
    obj_.push_back(0.0);
    return idx;
}

void ModelIR::add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                             RowSense sense, double rhs) {
    std::set<int> seen;
    for (const auto& [v, coef] : terms) {
        if (v < 0 || v >= static_cast<int>(vars_.size()))
            throw ValidationError("constraint " + name + ": term references unknown variable");
        if (!std::isfinite(coef))
            throw ValidationError("constraint " + name + ": non-finite coefficient");
        if (!seen.insert(v).second)
            throw ValidationError("constraint " + name + ": duplicate variable " +
                                  vars_[static_cast<std::size_t>(v)].name);
    }
    if (!std::isfinite(rhs))
        throw ValidationError("constraint " + name + ": non-finite rhs");
    cons_.push_back(LinearConstraintDef{std::move(name), std::move(terms), sense, rhs});
}

void ModelIR::add_objective_term(int var, double coef) {
    if (var < 0 || var >= static_cast<int>(vars_.size()))
        throw ValidationError("objective term references unknown variable");
    if (!std::isfinite(coef))
        throw ValidationError("objective coefficient must be finite");
    obj_[static_cast<std::size_t>(var)] += coef;
}

int ModelIR::variable_index(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? -1 : it->second;
}

int ModelIR::require_variable(const std::string& name) const {
    const int idx = variable_index(name);
    if (idx < 0) throw ValidationError("unknown variable: " + name);
    return idx;
}

ModelStats model_stats(const ModelIR& model) {
    ModelStats st;
    st.n_vars = static_cast<int>(model.variables().size());
    st.n_constraints = static_cast<int>(model.constraints().size());
    for (const VariableDef& v : model.variables()) {
        if (v.integrality == VarType::Binary) ++st.n_binary;
        if (v.integrality == VarType::Integer) ++st.n_integer;
    }
    return st;
}

std::string to_string(SolStatus s) {
    switch (s) {
        case SolStatus::Optimal: return "optimal";
        case SolStatus::Feasible: return "feasible";
        case SolStatus::Infeasible: return "infeasible";
        case SolStatus::Unbounded: return "unbounded";
        case SolStatus::Limit: return "limit";
    }
    return "infeasible";
}

SolStatus sol_status_from_string(const std::string& word) {
    if (word == "optimal") return SolStatus::Optimal;
    if (word == "feasible") return SolStatus::Feasible;
    if (word == "infeasible") return SolStatus::Infeasible;
    if (word == "unbounded") return SolStatus::Unbounded;
    if (word == "limit") return SolStatus::Limit;
    throw ParseError("unknown solution status '" + word + "'");
}

namespace {

char sense_char(RowSense s) {
    switch (s) {
        case RowSense::LessEq: return 'L';
        case RowSense::GreaterEq: return 'G';
        case RowSense::Equal: return 'E';
    }
    return 'E';
}

}  // namespace

std::string write_mps_string(const ModelIR& model) {
    const auto& vars = model.variables();
    const auto& cons = model.constraints();
    const auto& obj = model.objective();

    // Column-major entry lists, rows kept in declaration order.
    std::vector<std::vector<std::pair<int, double>>> col_entries(vars.size());
    for (int r = 0; r < static_cast<int>(cons.size()); ++r)
        for (const auto& [v, coef] : cons[static_cast<std::size_t>(r)].terms)
            col_entries[static_cast<std::size_t>(v)].emplace_back(r, coef);

    std::ostringstream out;
    out << "NAME " << (model.meta.formulation.empty() ? "model" : model.meta.formulation)
        << "\n";

    out << "ROWS\n";
    out << " N OBJ\n";
    for (const LinearConstraintDef& c : cons)
        out << " " << sense_char(c.sense) << " " << c.name << "\n";

    out << "COLUMNS\n";
    bool in_integer_block = false;
    int marker_count = 0;
    for (std::size_t v = 0; v < vars.size(); ++v) {
        const bool integral = vars[v].integrality != VarType::Continuous;
        if (integral != in_integer_block) {
            out << "    MARKER" << marker_count++ << " 'MARKER' "
                << (integral ? "'INTORG'" : "'INTEND'") << "\n";
            in_integer_block = integral;
        }
        bool emitted = false;
        if (obj[v] != 0.0) {
            out << "    " << vars[v].name << " OBJ " << format_double(obj[v]) << "\n";
            emitted = true;
        }
        for (const auto& [r, coef] : col_entries[v]) {
            out << "    " << vars[v].name << " " << cons[static_cast<std::size_t>(r)].name
                << " " << format_double(coef) << "\n";
            emitted = true;
        }
        // Every declared column must appear in COLUMNS.
        if (!emitted) out << "    " << vars[v].name << " OBJ 0\n";
    }
    if (in_integer_block)
        out << "    MARKER" << marker_count++ << " 'MARKER' 'INTEND'\n";

    out << "RHS\n";
    if (model.objective_constant() != 0.0)
        out << "    RHS OBJ " << format_double(-model.objective_constant()) << "\n";
    for (const LinearConstraintDef& c : cons)
        out << "    RHS " << c.name << " " << format_double(c.rhs) << "\n";

    out << "BOUNDS\n";
    for (const VariableDef& v : vars) {
        const bool lo_inf = v.lower == -kInf;
        const bool up_inf = v.upper == kInf;
        if (!lo_inf && !up_inf && v.lower == v.upper) {
            out << " FX BND " << v.name << " " << format_double(v.lower) << "\n";
        } else if (lo_inf && up_inf) {
            out << " FR BND " << v.name << "\n";
        } else {
            if (lo_inf)
                out << " MI BND " << v.name << "\n";
            else
                out << " LO BND " << v.name << " " << format_double(v.lower) << "\n";
            if (!up_inf)
                out << " UP BND " << v.name << " " << format_double(v.upper) << "\n";
        }
    }
    out << "ENDATA\n";
    return out.str();
}

void write_mps(const ModelIR& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << write_mps_string(model);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

}  // namespace

SolutionRecord parse_solution_text(const std::string& text, const ModelIR& model,
                                   const std::string& context) {
    SolutionRecord sol;
    sol.status = SolStatus::Feasible;
    bool have_objective = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = context + ":" + std::to_string(line_no);
        if (line[0] == '#') {
            std::vector<std::string> toks = tokenize(line.substr(1));
            if (toks.size() >= 2 && toks[0] == "status") {
                sol.status = sol_status_from_string(toks[1]);
            } else if (toks.size() >= 2 && toks[0] == "objective") {
                sol.objective_value = parse_double(toks[1], where);
                have_objective = true;
            } else if (toks.size() >= 2 && toks[0] == "bound") {
                sol.bound = parse_double(toks[1], where);
            } else if (toks.size() >= 4 && toks[0] == "Objective" && toks[1] == "value" &&
                       toks[2] == "=") {
                // Common solver .sol header style.
                sol.objective_value = parse_double(toks[3], where);
                have_objective = true;
            }
            // other comment lines are ignored
            continue;
        }
        const std::vector<std::string> toks = tokenize(line);
        if (toks.size() != 2)
            throw ParseError(where + ": expected '<varname> <value>'");
        if (model.variable_index(toks[0]) < 0)
            throw ValidationError(where + ": solution references unknown variable '" +
                                  toks[0] + "'");
        sol.values[toks[0]] = parse_double(toks[1], where);
    }

    if (sol.status == SolStatus::Optimal || sol.status == SolStatus::Feasible) {
        for (const VariableDef& v : model.variables()) {
            if (!sol.values.count(v.name)) {
                sol.values[v.name] = 0.0;
                sol.warnings.push_back("variable " + v.name + " missing, defaulted to 0");
            }
        }
        if (!have_objective) {
            double acc = model.objective_constant();
            const auto& obj = model.objective();
            for (std::size_t v = 0; v < obj.size(); ++v)
                if (obj[v] != 0.0) acc += obj[v] * sol.values.at(model.variables()[v].name);
            sol.objective_value = acc;
            sol.warnings.push_back("objective missing, recomputed from values");
        }
    }
    return sol;
}

SolutionRecord read_solution(const std::string& path, const ModelIR& model) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_solution_text(ss.str(), model, path);
}

void write_solution(const SolutionRecord& sol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "# status " << to_string(sol.status) << "\n";
    out << "# objective " << format_double(sol.objective_value) << "\n";
    if (sol.bound != -kInf) out << "# bound " << format_double(sol.bound) << "\n";
    for (const auto& [name, value] : sol.values)
        out << name << " " << format_double(value) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tnepfacts
