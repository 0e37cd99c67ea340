#include "doctest.h"

#include <cmath>

#include "support/fixtures.hpp"
#include "support/instance_gen.hpp"
#include "tnepfacts/formulations.hpp"
#include "tnepfacts/refsolver.hpp"

using namespace tnepfacts;
using namespace tnepfacts::testsupport;

namespace {

double relgap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Random box-constrained LP with a few rows; used for feasibility properties.
ModelIR random_lp(std::uint64_t seed) {
    Rng rng(seed * 77 + 1);
    ModelIR m;
    const int n = static_cast<int>(rng.uniform_int(2, 8));
    const int rows = static_cast<int>(rng.uniform_int(1, 6));
    for (int j = 0; j < n; ++j) {
        const double lo = rng.coin(0.2) ? -kInf : rng.uniform(-5.0, 0.0);
        const double up = rng.coin(0.2) ? kInf : rng.uniform(0.5, 8.0);
        m.add_variable("x" + std::to_string(j), lo, up, VarType::Continuous);
        m.add_objective_term(j, rng.uniform(-3.0, 3.0));
    }
    for (int r = 0; r < rows; ++r) {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < n; ++j)
            if (rng.coin(0.7)) terms.emplace_back(j, rng.uniform(-4.0, 4.0));
        if (terms.empty()) terms.emplace_back(0, 1.0);
        const RowSense sense = rng.coin(0.4) ? RowSense::LessEq
                               : rng.coin(0.5) ? RowSense::GreaterEq
                                               : RowSense::Equal;
        m.add_constraint("r" + std::to_string(r), std::move(terms), sense,
                         rng.uniform(-6.0, 6.0));
    }
    return m;
}

bool primal_feasible(const ModelIR& m, const Eigen::VectorXd& x, double tol) {
    for (std::size_t j = 0; j < m.variables().size(); ++j) {
        const VariableDef& v = m.variables()[j];
        const double xv = x[static_cast<Eigen::Index>(j)];
        if (xv < v.lower - tol * (1 + std::abs(v.lower))) return false;
        if (xv > v.upper + tol * (1 + std::abs(v.upper))) return false;
    }
    for (const LinearConstraintDef& c : m.constraints()) {
        double lhs = 0.0, scale = 1.0;
        for (const auto& [v, coef] : c.terms) {
            lhs += coef * x[v];
            scale = std::max(scale, std::abs(coef * x[v]));
        }
        scale = std::max(scale, std::abs(c.rhs));
        switch (c.sense) {
            case RowSense::LessEq:
                if (lhs > c.rhs + tol * scale) return false;
                break;
            case RowSense::GreaterEq:
                if (lhs < c.rhs - tol * scale) return false;
                break;
            case RowSense::Equal:
                if (std::abs(lhs - c.rhs) > tol * scale) return false;
                break;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("textbook LPs") {
    SUBCASE("single lower-bounding row") {
        ModelIR m;
        const int x = m.add_variable("x", 0.0, kInf, VarType::Continuous);
        m.add_objective_term(x, 1.0);
        m.add_constraint("c0", {{x, 1.0}}, RowSense::GreaterEq, 3.0);
        const LpResult r = solve_lp(m);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(3.0));
    }
    SUBCASE("simple packing") {
        ModelIR m;
        const int x = m.add_variable("x", 0.0, 1.0, VarType::Continuous);
        const int y = m.add_variable("y", 0.0, 1.0, VarType::Continuous);
        m.add_objective_term(x, -1.0);
        m.add_objective_term(y, -1.0);
        m.add_constraint("c0", {{x, 1.0}, {y, 1.0}}, RowSense::LessEq, 1.0);
        const LpResult r = solve_lp(m);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(-1.0));
    }
    SUBCASE("infeasible pair of rows") {
        ModelIR m;
        const int x = m.add_variable("x", -kInf, kInf, VarType::Continuous);
        m.add_constraint("c0", {{x, 1.0}}, RowSense::GreaterEq, 1.0);
        m.add_constraint("c1", {{x, 1.0}}, RowSense::LessEq, 0.0);
        CHECK(solve_lp(m).status == LpStatus::Infeasible);
    }
    SUBCASE("unbounded ray") {
        ModelIR m;
        const int x = m.add_variable("x", 0.0, kInf, VarType::Continuous);
        m.add_objective_term(x, -1.0);
        m.add_constraint("c0", {{x, 1.0}}, RowSense::GreaterEq, 0.0);
        CHECK(solve_lp(m).status == LpStatus::Unbounded);
    }
    SUBCASE("classic degenerate cycling example terminates at -1/20") {
        ModelIR m;
        const int x1 = m.add_variable("x1", 0.0, kInf, VarType::Continuous);
        const int x2 = m.add_variable("x2", 0.0, kInf, VarType::Continuous);
        const int x3 = m.add_variable("x3", 0.0, kInf, VarType::Continuous);
        const int x4 = m.add_variable("x4", 0.0, kInf, VarType::Continuous);
        m.add_objective_term(x1, -0.75);
        m.add_objective_term(x2, 150.0);
        m.add_objective_term(x3, -0.02);
        m.add_objective_term(x4, 6.0);
        m.add_constraint("r0", {{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}},
                         RowSense::LessEq, 0.0);
        m.add_constraint("r1", {{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}},
                         RowSense::LessEq, 0.0);
        m.add_constraint("r2", {{x3, 1.0}}, RowSense::LessEq, 1.0);
        const LpResult r = solve_lp(m);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(-0.05));
    }
}

TEST_CASE("random LPs: any reported optimum is primal feasible") {
    int optimal = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const ModelIR m = random_lp(seed);
        const LpResult r = solve_lp(m);
        if (r.status == LpStatus::Optimal) {
            ++optimal;
            CHECK(primal_feasible(m, r.x, 1e-6));
            // reported objective matches the point
            double obj = 0.0;
            for (std::size_t j = 0; j < m.variables().size(); ++j)
                obj += m.objective()[j] * r.x[static_cast<Eigen::Index>(j)];
            CHECK(relgap(obj, r.objective) < 1e-7);
        }
    }
    CHECK(optimal > 10);  // the generator produces plenty of solvable cases
}

TEST_CASE("LP relaxation bounds the planning optimum from below") {
    const Fixture f = two_bus();
    const ModelIR m = build_tnep(f.net, f.scenarios, f.costs);
    const LpResult lp = solve_lp(m);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.objective <= 1600.0 + 1e-6);
}

TEST_CASE("desk-scale guards refuse oversized problems") {
    ModelIR m;
    for (int j = 0; j < 5001; ++j)
        m.add_variable("v" + std::to_string(j), 0.0, 1.0, VarType::Continuous);
    CHECK_THROWS_AS(solve_lp(m), EngineLimitError);

    ModelIR mi;
    for (int j = 0; j < 61; ++j)
        mi.add_variable("b" + std::to_string(j), 0.0, 1.0, VarType::Binary);
    CHECK_THROWS_AS(solve_milp(mi), EngineLimitError);
    BruteForceOptions bo;
    CHECK_THROWS_AS(brute_force_milp(mi, bo), EngineLimitError);
}

TEST_CASE("branch and bound") {
    SUBCASE("all integers fixed by bounds solve in one node") {
        ModelIR m;
        const int b = m.add_variable("b", 1.0, 1.0, VarType::Binary);
        const int x = m.add_variable("x", 0.0, 10.0, VarType::Continuous);
        m.add_objective_term(x, 1.0);
        m.add_constraint("c0", {{x, 1.0}, {b, -3.0}}, RowSense::GreaterEq, 0.0);
        const auto [sol, stats] = solve_milp(m);
        REQUIRE(sol.status == SolStatus::Optimal);
        CHECK(stats.nodes == 1);
        CHECK(sol.objective_value == doctest::Approx(3.0));
    }
    SUBCASE("two-bus fixture solves to the known optimum") {
        const Fixture f = two_bus();
        const ModelIR m = build_tnep(f.net, f.scenarios, f.costs);
        BnBConfig cfg;
        cfg.rel_gap = 1e-9;
        const auto [sol, stats] = solve_milp(m, cfg);
        REQUIRE(sol.status == SolStatus::Optimal);
        CHECK(sol.objective_value == doctest::Approx(1600.0));
        CHECK(stats.bound <= stats.incumbent + 1e-9);
        CHECK(stats.gap <= 1e-9);
        CHECK(stats.gap ==
              doctest::Approx((stats.incumbent - stats.bound) /
                              std::max(1.0, std::abs(stats.incumbent))));
    }
    SUBCASE("extended formulation agrees with the enumeration oracle") {
        const Fixture f = triangle_congested();
        const ModelIR m = build_facets(f.net, f.scenarios, f.costs);
        BnBConfig cfg;
        cfg.rel_gap = 1e-9;
        const auto [sol, stats] = solve_milp(m, cfg);
        const SolutionRecord bf = brute_force_milp(m);
        REQUIRE(sol.status == SolStatus::Optimal);
        REQUIRE(bf.status == SolStatus::Optimal);
        CHECK(relgap(sol.objective_value, bf.objective_value) < 1e-6);
    }
    SUBCASE("node limit reports a valid bound") {
        const Fixture f = triangle_congested();
        const ModelIR m = build_fbsm(f.net, f.scenarios, f.costs);
        BnBConfig cfg;
        cfg.rel_gap = 1e-12;
        cfg.node_limit = 1;
        const auto [sol, stats] = solve_milp(m, cfg);
        CHECK(stats.nodes <= 1);
        CHECK(sol.status == SolStatus::Limit);
        const SolutionRecord bf = brute_force_milp(m);
        CHECK(stats.bound <= bf.objective_value + 1e-6);
    }
    SUBCASE("deterministic across repeated runs") {
        const Fixture f = triangle_congested();
        const ModelIR m = build_fbsmi(f.net, f.scenarios, f.costs);
        BnBConfig cfg;
        cfg.rel_gap = 1e-9;
        const auto [s1, st1] = solve_milp(m, cfg);
        const auto [s2, st2] = solve_milp(m, cfg);
        CHECK(st1.nodes == st2.nodes);
        CHECK(s1.objective_value == s2.objective_value);
        CHECK(st1.bound == st2.bound);
    }
}

TEST_CASE("brute force oracle") {
    SUBCASE("no integers reduces to one LP") {
        ModelIR m;
        const int x = m.add_variable("x", 0.0, 5.0, VarType::Continuous);
        m.add_objective_term(x, -2.0);
        m.add_constraint("c0", {{x, 1.0}}, RowSense::LessEq, 4.0);
        const SolutionRecord sol = brute_force_milp(m);
        REQUIRE(sol.status == SolStatus::Optimal);
        CHECK(sol.objective_value == doctest::Approx(-8.0));
        CHECK(sol.objective_value == doctest::Approx(solve_lp(m).objective));
    }
    SUBCASE("two-bus fixture enumerates both upgrade levels") {
        const Fixture f = two_bus();
        const SolutionRecord sol = brute_force_milp(build_tnep(f.net, f.scenarios, f.costs));
        REQUIRE(sol.status == SolStatus::Optimal);
        CHECK(sol.objective_value == doctest::Approx(1600.0));
        CHECK(sol.values.at("gamma_0") == doctest::Approx(1.0));
    }
    SUBCASE("infeasible toy model") {
        ModelIR m;
        const int b = m.add_variable("b", 0.0, 1.0, VarType::Binary);
        m.add_constraint("c0", {{b, 2.0}}, RowSense::Equal, 1.0);
        CHECK(brute_force_milp(m).status == SolStatus::Infeasible);
    }
    SUBCASE("unbounded integer range is refused") {
        ModelIR m;
        m.add_variable("k", 0.0, kInf, VarType::Integer);
        CHECK_THROWS_AS(brute_force_milp(m), EngineLimitError);
    }
}

TEST_CASE("branch and bound matches brute force on random planning instances") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const SmallInstance inst = random_small_instance(seed);
        for (const FormulationKind kind :
             {FormulationKind::Tnep, FormulationKind::Fbsmi, FormulationKind::Facets}) {
            const ModelIR m = build_formulation(kind, inst.net, inst.scenarios, inst.costs);
            BnBConfig cfg;
            cfg.rel_gap = 1e-9;
            const auto [sol, stats] = solve_milp(m, cfg);
            const SolutionRecord bf = brute_force_milp(m);
            REQUIRE(sol.status == SolStatus::Optimal);
            REQUIRE(bf.status == SolStatus::Optimal);
            INFO("seed " << seed << " kind " << to_string(kind));
            CHECK(relgap(sol.objective_value, bf.objective_value) < 1e-6);
            CHECK(stats.bound <= sol.objective_value + 1e-6 * std::abs(sol.objective_value));
        }
    }
}
