#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tnepfacts/common.hpp"

namespace tnepfacts {

enum class VarType { Continuous, Binary, Integer };

enum class RowSense { LessEq, GreaterEq, Equal };

struct VariableDef {
    std::string name;
    double lower = 0.0;   // -inf allowed
    double upper = kInf;  // +inf allowed
    VarType integrality = VarType::Continuous;
};

struct LinearConstraintDef {
    std::string name;
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
    RowSense sense = RowSense::LessEq;
    double rhs = 0.0;
};

struct ModelMeta {
    std::string formulation;  // tnep | fbsm | fbsmi | facets | ad-hoc
    int n_buses = 0;
    int n_branches = 0;
    int n_generators = 0;
    int n_scenarios = 0;
};

// Solver-agnostic MILP: variables with bounds/integrality, linear rows,
// linear minimization objective. Declaration order is preserved everywhere,
// which makes MPS emission byte-deterministic.
class ModelIR {
public:
    ModelMeta meta;

    int add_variable(std::string name, double lower, double upper, VarType type);
    void add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                        RowSense sense, double rhs);
    // Accumulates; repeated calls for the same variable sum up.
    void add_objective_term(int var, double coef);
    void add_objective_constant(double c) { obj_constant_ += c; }

    int variable_index(const std::string& name) const;       // -1 when absent
    int require_variable(const std::string& name) const;     // throws when absent

    const std::vector<VariableDef>& variables() const { return vars_; }
    const std::vector<LinearConstraintDef>& constraints() const { return cons_; }
    const std::vector<double>& objective() const { return obj_; }  // dense, per variable
    double objective_constant() const { return obj_constant_; }

private:
    std::vector<VariableDef> vars_;
    std::vector<LinearConstraintDef> cons_;
    std::vector<double> obj_;
    double obj_constant_ = 0.0;
    std::unordered_map<std::string, int> var_index_;
};

struct ModelStats {
    int n_vars = 0;
    int n_binary = 0;
    int n_integer = 0;  // general integers, binaries not included
    int n_constraints = 0;
};

// Exact declared counts; variable bounds are not constraints.
ModelStats model_stats(const ModelIR& model);

enum class SolStatus { Optimal, Feasible, Infeasible, Unbounded, Limit };

std::string to_string(SolStatus s);
SolStatus sol_status_from_string(const std::string& word);

struct SolutionRecord {
    SolStatus status = SolStatus::Infeasible;
    double objective_value = 0.0;
    double bound = -kInf;
    std::map<std::string, double> values;  // keyed by variable name
    std::vector<std::string> warnings;     // e.g. variables defaulted to 0 on read
};

// Free-format MPS with NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA, integer markers,
// 17-significant-digit numbers, declaration order. Byte-identical output for
// identical models.
void write_mps(const ModelIR& model, const std::string& path);
std::string write_mps_string(const ModelIR& model);

// Plain-text solution format:
//   # status <optimal|feasible|infeasible|unbounded|limit>
//   # objective <real>
//   # bound <real>          (optional)
//   <varname> <value>       (one per line)
// Lines of the form "# Objective value = <real>" (as written by common
// solver .sol files) are also recognized; a missing status defaults to
// feasible. Unknown variable names are an error; missing variables default
// to 0 and are reported in warnings.
SolutionRecord read_solution(const std::string& path, const ModelIR& model);
SolutionRecord parse_solution_text(const std::string& text, const ModelIR& model,
                                   const std::string& context);
void write_solution(const SolutionRecord& sol, const std::string& path);

}  // namespace tnepfacts
