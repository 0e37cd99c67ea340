#pragma once

#include <utility>

#include <Eigen/Core>

#include "tnepfacts/milp.hpp"

namespace tnepfacts {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, Numerical };

std::string to_string(LpStatus s);

struct LpOptions {
    double feas_tol = 1e-7;   // relative primal feasibility
    double opt_tol = 1e-7;    // relative dual feasibility
    double pivot_tol = 1e-9;
    long max_iterations = 0;  // 0 -> automatic from problem size
    int refactor_every = 64;
    int bland_after = 64;     // consecutive degenerate pivots before Bland's rule
    int max_variables = 5000;  // documented desk-scale limit
    int max_rows = 20000;
};

struct LpResult {
    LpStatus status = LpStatus::Numerical;
    double objective = 0.0;
    Eigen::VectorXd x;  // per model variable, declaration order
    long iterations = 0;
};

// Bounded-variable primal simplex on a dense tableau, two phases with
// artificial columns, periodic refactorization, and a basis certificate
// recomputed from scratch before any "optimal" is reported. Integrality
// is ignored (the LP relaxation is solved).
LpResult solve_lp(const ModelIR& model, const LpOptions& options = {});

struct BnBConfig {
    double int_tol = 1e-6;
    double rel_gap = 1e-3;      // mirrors a typical solver gap setting
    long node_limit = 0;        // 0 -> unlimited
    double time_limit_s = 0.0;  // 0 -> unlimited; breaks node-count determinism
    int max_integer_vars = 60;  // desk-scale guard
    LpOptions lp;
};

struct BnBStats {
    long nodes = 0;            // nodes whose relaxation was solved
    double incumbent = kInf;
    double bound = -kInf;
    double gap = kInf;         // (incumbent - bound) / max(1, |incumbent|)
};

// Best-bound branch and bound; branches on the most fractional integer
// variable (ties by lowest index), children inherit the parent bound,
// FIFO tie-break on equal bounds. Deterministic.
std::pair<SolutionRecord, BnBStats> solve_milp(const ModelIR& model,
                                               const BnBConfig& config = {});

struct BruteForceOptions {
    int max_integer_vars = 20;
    long max_assignments = 1L << 20;
    LpOptions lp;
};

// Ground-truth oracle: enumerates every integral assignment over the integer
// variables' bound ranges and solves the restricted LP for each. Refuses
// problems beyond the enumeration limits.
SolutionRecord brute_force_milp(const ModelIR& model, const BruteForceOptions& options = {});

// Shared helper: LP result as a named-value record.
SolutionRecord lp_result_to_record(const LpResult& lp, const ModelIR& model);

}  // namespace tnepfacts
