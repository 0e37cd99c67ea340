#include "tnepfacts/refsolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <vector>

namespace tnepfacts {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
        case LpStatus::Numerical: return "numerical";
    }
    return "numerical";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Equality standard form: min c.x, A x = b, lo <= x <= up. One slack column
// per row; the slack bounds encode the row sense (<=: [0,inf), >=: (-inf,0],
// =: [0,0]).
struct StdLp {
    int n_struct = 0;
    int n_rows = 0;
    MatrixXd a;  // n_rows x (n_struct + n_rows)
    VectorXd b;
    VectorXd lo, up, cost;
};

StdLp std_form(const ModelIR& model) {
    const int n = static_cast<int>(model.variables().size());
    const int m = static_cast<int>(model.constraints().size());
    StdLp lp;
    lp.n_struct = n;
    lp.n_rows = m;
    lp.a = MatrixXd::Zero(m, n + m);
    lp.b.resize(m);
    lp.lo.resize(n + m);
    lp.up.resize(n + m);
    lp.cost = VectorXd::Zero(n + m);

    for (int j = 0; j < n; ++j) {
        const VariableDef& v = model.variables()[static_cast<std::size_t>(j)];
        lp.lo[j] = v.lower;
        lp.up[j] = v.upper;
        lp.cost[j] = model.objective()[static_cast<std::size_t>(j)];
    }
    for (int r = 0; r < m; ++r) {
        const LinearConstraintDef& c = model.constraints()[static_cast<std::size_t>(r)];
        for (const auto& [v, coef] : c.terms) lp.a(r, v) = coef;
        lp.a(r, n + r) = 1.0;
        lp.b[r] = c.rhs;
        switch (c.sense) {
            case RowSense::LessEq:
                lp.lo[n + r] = 0.0;
                lp.up[n + r] = kInf;
                break;
            case RowSense::GreaterEq:
                lp.lo[n + r] = -kInf;
                lp.up[n + r] = 0.0;
                break;
            case RowSense::Equal:
                lp.lo[n + r] = 0.0;
                lp.up[n + r] = 0.0;
                break;
        }
    }
    return lp;
}

enum class CStat : char { Basic, AtLower, AtUpper, FreeZero };

struct RawResult {
    LpStatus status = LpStatus::Numerical;
    double objective = 0.0;
    VectorXd x;  // structural part only
    long iterations = 0;
};

// Bounded-variable primal simplex with an explicit dense basis inverse,
// eta-style pivot updates, periodic refactorization, Dantzig pricing with a
// Bland fallback after a run of degenerate pivots, and a from-scratch basis
// certificate before any phase is declared optimal. Artificial columns are
// unit vectors and are kept implicit (never appended to A).
class Simplex {
public:
    Simplex(const StdLp& lp, VectorXd lo, VectorXd up, const LpOptions& opt)
        : lp_(lp), opt_(opt), lo_(std::move(lo)), up_(std::move(up)) {
        m_ = lp.n_rows;
        nm_ = lp.n_struct + lp.n_rows;
        max_iters_ = opt.max_iterations > 0
                         ? opt.max_iterations
                         : 50000 + 100L * (m_ + lp.n_struct);
    }

    RawResult solve() {
        RawResult out;
        init_basis();
        setup_artificials();

        if (n_art_ > 0) {
            const LpStatus p1 = solve_phase(phase1_cost_);
            if (p1 != LpStatus::Optimal) {
                out.status = p1 == LpStatus::Unbounded ? LpStatus::Numerical : p1;
                out.iterations = iters_;
                return out;
            }
            const double infeas = phase1_cost_.dot(x_);
            const double scale = 1.0 + lp_.b.cwiseAbs().maxCoeff();
            if (infeas > opt_.feas_tol * scale) {
                out.status = LpStatus::Infeasible;
                out.objective = infeas;
                out.iterations = iters_;
                return out;
            }
            // Pin the artificials at zero for phase 2.
            for (int k = 0; k < n_art_; ++k) {
                const int j = nm_ + k;
                lo_[j] = 0.0;
                up_[j] = 0.0;
                if (stat_[static_cast<std::size_t>(j)] != CStat::Basic) x_[j] = 0.0;
            }
        }

        VectorXd cost2 = VectorXd::Zero(nm_ + n_art_);
        cost2.head(nm_) = lp_.cost;
        const LpStatus p2 = solve_phase(cost2);
        out.status = p2;
        out.iterations = iters_;
        if (p2 == LpStatus::Optimal) {
            out.objective = cost2.dot(x_);
            out.x = x_.head(lp_.n_struct);
        }
        return out;
    }

private:
    const StdLp& lp_;
    const LpOptions& opt_;
    VectorXd lo_, up_;  // extended by artificials
    int m_ = 0, nm_ = 0, n_art_ = 0;
    std::vector<int> art_row_;   // artificial k -> row
    std::vector<int> basis_;     // row -> col
    std::vector<CStat> stat_;    // col
    VectorXd x_;
    MatrixXd binv_;
    VectorXd phase1_cost_;
    long iters_ = 0;
    long max_iters_ = 0;
    int pivots_since_refactor_ = 0;
    int degen_run_ = 0;
    bool bland_ = false;

    int ncols() const { return nm_ + n_art_; }

    bool fixed(int j) const { return lo_[j] == up_[j]; }

    double nb_value(int j) const {
        switch (stat_[static_cast<std::size_t>(j)]) {
            case CStat::AtLower: return lo_[j];
            case CStat::AtUpper: return up_[j];
            case CStat::FreeZero: return 0.0;
            case CStat::Basic: break;
        }
        return x_[j];
    }

    // column j of the extended matrix
    double col_dot(int j, const VectorXd& y) const {
        if (j < nm_) return lp_.a.col(j).dot(y);
        return y[art_row_[static_cast<std::size_t>(j - nm_)]];
    }

    VectorXd ftran(int j) const {
        if (j < nm_) return binv_ * lp_.a.col(j);
        return binv_.col(art_row_[static_cast<std::size_t>(j - nm_)]);
    }

    void init_basis() {
        basis_.resize(static_cast<std::size_t>(m_));
        stat_.assign(static_cast<std::size_t>(nm_), CStat::AtLower);
        x_ = VectorXd::Zero(nm_);
        for (int j = 0; j < lp_.n_struct; ++j) {
            const bool lo_f = lo_[j] > -kInf, up_f = up_[j] < kInf;
            if (lo_f && up_f)
                stat_[static_cast<std::size_t>(j)] =
                    std::abs(lo_[j]) <= std::abs(up_[j]) ? CStat::AtLower : CStat::AtUpper;
            else if (lo_f)
                stat_[static_cast<std::size_t>(j)] = CStat::AtLower;
            else if (up_f)
                stat_[static_cast<std::size_t>(j)] = CStat::AtUpper;
            else
                stat_[static_cast<std::size_t>(j)] = CStat::FreeZero;
            x_[j] = nb_value(j);
        }
        for (int r = 0; r < m_; ++r) {
            basis_[static_cast<std::size_t>(r)] = lp_.n_struct + r;
            stat_[static_cast<std::size_t>(lp_.n_struct + r)] = CStat::Basic;
        }
        binv_ = MatrixXd::Identity(m_, m_);
        compute_basics();
    }

    // x_B = B^-1 (b - A_N x_N)
    void compute_basics() {
        VectorXd xn = x_.head(nm_);
        for (int r = 0; r < m_; ++r) {
            const int j = basis_[static_cast<std::size_t>(r)];
            if (j < nm_) xn[j] = 0.0;
        }
        VectorXd resid = lp_.b - lp_.a * xn;
        for (int k = 0; k < n_art_; ++k) {
            const int j = nm_ + k;
            if (stat_[static_cast<std::size_t>(j)] != CStat::Basic)
                resid[art_row_[static_cast<std::size_t>(k)]] -= x_[j];
        }
        const VectorXd xb = binv_ * resid;
        for (int r = 0; r < m_; ++r) x_[basis_[static_cast<std::size_t>(r)]] = xb[r];
    }

    void setup_artificials() {
        std::vector<int> bad_rows;
        for (int r = 0; r < m_; ++r) {
            const int j = lp_.n_struct + r;
            const double v = x_[j];
            const double tol = opt_.feas_tol * (1.0 + std::abs(lp_.b[r]));
            if (v < lo_[j] - tol || v > up_[j] + tol) bad_rows.push_back(r);
        }
        n_art_ = static_cast<int>(bad_rows.size());
        if (n_art_ == 0) {
            phase1_cost_ = VectorXd::Zero(nm_);
            return;
        }
        art_row_ = bad_rows;
        lo_.conservativeResize(ncols());
        up_.conservativeResize(ncols());
        x_.conservativeResize(ncols());
        stat_.resize(static_cast<std::size_t>(ncols()));
        phase1_cost_ = VectorXd::Zero(ncols());

        for (int k = 0; k < n_art_; ++k) {
            const int r = art_row_[static_cast<std::size_t>(k)];
            const int slack = lp_.n_struct + r;
            const int aj = nm_ + k;
            const double v = x_[slack];
            const double clamped = std::clamp(v, lo_[slack], up_[slack]);
            x_[slack] = clamped;
            stat_[static_cast<std::size_t>(slack)] =
                clamped == lo_[slack] ? CStat::AtLower : CStat::AtUpper;
            const double va = v - clamped;
            x_[aj] = va;
            if (va >= 0.0) {
                lo_[aj] = 0.0;
                up_[aj] = kInf;
                phase1_cost_[aj] = 1.0;
            } else {
                lo_[aj] = -kInf;
                up_[aj] = 0.0;
                phase1_cost_[aj] = -1.0;
            }
            stat_[static_cast<std::size_t>(aj)] = CStat::Basic;
            basis_[static_cast<std::size_t>(r)] = aj;
        }
    }

    bool refactor() {
        MatrixXd bmat = MatrixXd::Zero(m_, m_);
        for (int r = 0; r < m_; ++r) {
            const int j = basis_[static_cast<std::size_t>(r)];
            if (j < nm_)
                bmat.col(r) = lp_.a.col(j);
            else
                bmat(art_row_[static_cast<std::size_t>(j - nm_)], r) = 1.0;
        }
        if (m_ == 0) {
            pivots_since_refactor_ = 0;
            return true;
        }
        Eigen::PartialPivLU<MatrixXd> lu(bmat);
        binv_ = lu.inverse();
        const double resid = (bmat * binv_ - MatrixXd::Identity(m_, m_)).cwiseAbs().maxCoeff();
        pivots_since_refactor_ = 0;
        return resid <= 1e-6;
    }

    VectorXd dual_y(const VectorXd& cost) const {
        VectorXd cb(m_);
        for (int r = 0; r < m_; ++r) cb[r] = cost[basis_[static_cast<std::size_t>(r)]];
        return binv_.transpose() * cb;
    }

    // Reduced costs for all columns (basic entries are meaningless and unused).
    VectorXd reduced_costs(const VectorXd& cost, const VectorXd& y) const {
        VectorXd d(ncols());
        d.head(nm_) = cost.head(nm_) - lp_.a.transpose() * y;
        for (int k = 0; k < n_art_; ++k)
            d[nm_ + k] = cost[nm_ + k] - y[art_row_[static_cast<std::size_t>(k)]];
        return d;
    }

    bool eligible(int j, double dj, double tol) const {
        if (stat_[static_cast<std::size_t>(j)] == CStat::Basic || fixed(j)) return false;
        switch (stat_[static_cast<std::size_t>(j)]) {
            case CStat::AtLower: return dj < -tol;
            case CStat::AtUpper: return dj > tol;
            case CStat::FreeZero: return std::abs(dj) > tol;
            case CStat::Basic: break;
        }
        return false;
    }

    LpStatus iterate(const VectorXd& cost) {
        while (true) {
            if (iters_ >= max_iters_) return LpStatus::IterationLimit;
            if (pivots_since_refactor_ >= opt_.refactor_every) {
                if (!refactor()) return LpStatus::Numerical;
                compute_basics();
            }

            const VectorXd y = dual_y(cost);
            const VectorXd d = reduced_costs(cost, y);

            int q = -1;
            double best = 0.0;
            for (int j = 0; j < ncols(); ++j) {
                const double tol = opt_.opt_tol * (1.0 + std::abs(cost[j]));
                if (!eligible(j, d[j], tol)) continue;
                if (bland_) {
                    q = j;
                    break;
                }
                if (std::abs(d[j]) > best) {
                    best = std::abs(d[j]);
                    q = j;
                }
            }
            if (q < 0) return LpStatus::Optimal;

            double sigma;
            switch (stat_[static_cast<std::size_t>(q)]) {
                case CStat::AtLower: sigma = 1.0; break;
                case CStat::AtUpper: sigma = -1.0; break;
                default: sigma = d[q] < 0.0 ? 1.0 : -1.0; break;
            }

            const VectorXd alpha = ftran(q);

            // Ratio test: how far can x_q move before a basic variable hits a
            // bound, or x_q reaches its own opposite bound. Two passes: exact
            // minimum first, then the tie group within a relative window.
            double t_min = kInf;
            std::vector<std::pair<int, double>> ratios;
            for (int r = 0; r < m_; ++r) {
                const int j = basis_[static_cast<std::size_t>(r)];
                const double dirr = sigma * alpha[r];
                double t;
                if (dirr > opt_.pivot_tol) {
                    if (lo_[j] == -kInf) continue;
                    t = (x_[j] - lo_[j]) / dirr;
                } else if (dirr < -opt_.pivot_tol) {
                    if (up_[j] == kInf) continue;
                    t = (x_[j] - up_[j]) / dirr;
                } else {
                    continue;
                }
                t = std::max(t, 0.0);
                ratios.emplace_back(r, t);
                t_min = std::min(t_min, t);
            }
            std::vector<int> cand;
            for (const auto& [r, t] : ratios)
                if (t <= t_min + 1e-9 * (1.0 + t_min)) cand.push_back(r);
            const double t_own =
                (lo_[q] > -kInf && up_[q] < kInf) ? up_[q] - lo_[q] : kInf;

            if (t_own <= t_min) {
                if (t_own == kInf) return LpStatus::Unbounded;
                // Bound flip, basis unchanged.
                for (int r = 0; r < m_; ++r)
                    x_[basis_[static_cast<std::size_t>(r)]] -= t_own * sigma * alpha[r];
                stat_[static_cast<std::size_t>(q)] =
                    sigma > 0.0 ? CStat::AtUpper : CStat::AtLower;
                x_[q] = nb_value(q);
                ++iters_;
                degen_run_ = 0;
                continue;
            }
            if (cand.empty()) return LpStatus::Unbounded;

            // Leaving row: largest pivot magnitude inside the tie group for
            // stability (lowest variable index under Bland's rule).
            int r_leave = cand[0];
            if (bland_) {
                for (int r : cand)
                    if (basis_[static_cast<std::size_t>(r)] <
                        basis_[static_cast<std::size_t>(r_leave)])
                        r_leave = r;
            } else {
                for (int r : cand)
                    if (std::abs(alpha[r]) > std::abs(alpha[r_leave])) r_leave = r;
            }
            if (std::abs(alpha[r_leave]) <= opt_.pivot_tol) return LpStatus::Numerical;

            const double t = t_min;
            const int j_leave = basis_[static_cast<std::size_t>(r_leave)];
            for (int r = 0; r < m_; ++r)
                x_[basis_[static_cast<std::size_t>(r)]] -= t * sigma * alpha[r];
            x_[q] = nb_value(q) + t * sigma;

            const double dir_leave = sigma * alpha[r_leave];
            stat_[static_cast<std::size_t>(j_leave)] =
                dir_leave > 0.0 ? CStat::AtLower : CStat::AtUpper;
            x_[j_leave] = dir_leave > 0.0 ? lo_[j_leave] : up_[j_leave];

            basis_[static_cast<std::size_t>(r_leave)] = q;
            stat_[static_cast<std::size_t>(q)] = CStat::Basic;

            binv_.row(r_leave) /= alpha[r_leave];
            for (int r = 0; r < m_; ++r) {
                if (r == r_leave) continue;
                if (alpha[r] != 0.0) binv_.row(r) -= alpha[r] * binv_.row(r_leave);
            }

            ++iters_;
            ++pivots_since_refactor_;
            if (t <= 1e-10 * (1.0 + std::abs(x_[q]))) {
                if (++degen_run_ >= opt_.bland_after) bland_ = true;
            } else {
                degen_run_ = 0;
                bland_ = false;
            }
        }
    }

    // From-scratch verification of the final basis: refactorize, recompute the
    // basic values, check bounds, and re-price every nonbasic column with a
    // scale-aware tolerance. Returns false when the claimed optimum fails.
    bool certify(const VectorXd& cost, bool& resumable) {
        resumable = false;
        if (!refactor()) return false;
        compute_basics();
        for (int r = 0; r < m_; ++r) {
            const int j = basis_[static_cast<std::size_t>(r)];
            const double tol = opt_.feas_tol * (1.0 + std::abs(x_[j]));
            if (x_[j] < lo_[j] - tol || x_[j] > up_[j] + tol) return false;
        }
        const VectorXd y = dual_y(cost);
        const VectorXd d = reduced_costs(cost, y);
        const VectorXd yabs = y.cwiseAbs();
        const VectorXd sabs = lp_.a.cwiseAbs().transpose() * yabs;
        for (int j = 0; j < ncols(); ++j) {
            if (stat_[static_cast<std::size_t>(j)] == CStat::Basic || fixed(j)) continue;
            const double scale =
                std::max({1.0, std::abs(cost[j]),
                          j < nm_ ? sabs[j] : yabs[art_row_[static_cast<std::size_t>(j - nm_)]]});
            if (eligible(j, d[j], 10.0 * opt_.opt_tol * scale)) {
                resumable = true;
                return false;
            }
        }
        return true;
    }

    LpStatus solve_phase(const VectorXd& cost) {
        bland_ = false;
        degen_run_ = 0;
        for (int attempt = 0; attempt < 4; ++attempt) {
            const LpStatus st = iterate(cost);
            if (st != LpStatus::Optimal) return st;
            bool resumable = false;
            if (certify(cost, resumable)) return LpStatus::Optimal;
            if (!resumable) return LpStatus::Numerical;
            // fresh factorization already in place; keep pivoting
        }
        return LpStatus::Numerical;
    }
};

RawResult solve_std(const StdLp& lp, const VectorXd& lo, const VectorXd& up,
                    const LpOptions& opt) {
    Simplex s(lp, lo, up, opt);
    return s.solve();
}

void check_desk_scale(const ModelIR& model, const LpOptions& opt) {
    if (static_cast<int>(model.variables().size()) > opt.max_variables)
        throw EngineLimitError("reference engine limit: model has " +
                               std::to_string(model.variables().size()) +
                               " variables, limit is " + std::to_string(opt.max_variables));
    if (static_cast<int>(model.constraints().size()) > opt.max_rows)
        throw EngineLimitError("reference engine limit: model has " +
                               std::to_string(model.constraints().size()) +
                               " constraints, limit is " + std::to_string(opt.max_rows));
}

}  // namespace

LpResult solve_lp(const ModelIR& model, const LpOptions& options) {
    check_desk_scale(model, options);
    const StdLp lp = std_form(model);
    const RawResult raw = solve_std(lp, lp.lo, lp.up, options);
    LpResult out;
    out.status = raw.status;
    out.iterations = raw.iterations;
    if (raw.status == LpStatus::Optimal) {
        out.x = raw.x;
        out.objective = raw.objective + model.objective_constant();
    }
    return out;
}

SolutionRecord lp_result_to_record(const LpResult& lp, const ModelIR& model) {
    SolutionRecord sol;
    switch (lp.status) {
        case LpStatus::Optimal: sol.status = SolStatus::Optimal; break;
        case LpStatus::Infeasible: sol.status = SolStatus::Infeasible; break;
        case LpStatus::Unbounded: sol.status = SolStatus::Unbounded; break;
        case LpStatus::IterationLimit:
        case LpStatus::Numerical:
            sol.status = SolStatus::Limit;
            sol.warnings.push_back("reference LP engine stopped: " + to_string(lp.status));
            break;
    }
    if (lp.status == LpStatus::Optimal) {
        sol.objective_value = lp.objective;
        sol.bound = lp.objective;
        for (std::size_t j = 0; j < model.variables().size(); ++j)
            sol.values[model.variables()[j].name] = lp.x[static_cast<Eigen::Index>(j)];
    }
    return sol;
}

namespace {

std::vector<int> integer_columns(const ModelIR& model) {
    std::vector<int> cols;
    for (int j = 0; j < static_cast<int>(model.variables().size()); ++j) {
        const VariableDef& v = model.variables()[static_cast<std::size_t>(j)];
        if (v.integrality != VarType::Continuous && v.lower < v.upper) cols.push_back(j);
    }
    return cols;
}

SolutionRecord record_from_std(const ModelIR& model, const VectorXd& x, double objective) {
    SolutionRecord sol;
    sol.status = SolStatus::Optimal;
    sol.objective_value = objective;
    sol.bound = objective;
    for (std::size_t j = 0; j < model.variables().size(); ++j)
        sol.values[model.variables()[j].name] = x[static_cast<Eigen::Index>(j)];
    return sol;
}

}  // namespace

std::pair<SolutionRecord, BnBStats> solve_milp(const ModelIR& model, const BnBConfig& config) {
    check_desk_scale(model, config.lp);
    const std::vector<int> int_cols = integer_columns(model);
    if (static_cast<int>(int_cols.size()) > config.max_integer_vars)
        throw EngineLimitError("reference engine limit: " + std::to_string(int_cols.size()) +
                               " integer variables, limit is " +
                               std::to_string(config.max_integer_vars));

    const StdLp lp = std_form(model);
    const double c0 = model.objective_constant();

    struct Node {
        double bound;
        long seq;
        std::vector<double> int_lo, int_up;
    };
    const auto cmp = [](const Node& a, const Node& b) {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.seq > b.seq;  // FIFO among equal bounds
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);

    Node root;
    root.bound = -kInf;
    root.seq = 0;
    for (int j : int_cols) {
        root.int_lo.push_back(lp.lo[j]);
        root.int_up.push_back(lp.up[j]);
    }
    open.push(std::move(root));
    long next_seq = 1;

    BnBStats stats;
    SolutionRecord incumbent;
    incumbent.status = SolStatus::Infeasible;
    bool have_incumbent = false;
    bool hit_limit = false;
    double stop_bound = -kInf;

    VectorXd lo = lp.lo, up = lp.up;
    const auto inc_scale = [&] { return std::max(1.0, std::abs(stats.incumbent)); };
    const auto t_start = std::chrono::steady_clock::now();
    const auto out_of_time = [&] {
        if (config.time_limit_s <= 0.0) return false;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t_start;
        return elapsed.count() > config.time_limit_s;
    };

    while (!open.empty()) {
        const Node node = open.top();

        // The queue is bound-ordered, so the top node carries the global lower
        // bound; the incumbent caps it once nothing better can remain.
        const double remaining_bound =
            have_incumbent ? std::min(node.bound, stats.incumbent) : node.bound;
        if (have_incumbent &&
            stats.incumbent - node.bound <= config.rel_gap * inc_scale()) {
            stop_bound = remaining_bound;
            break;
        }
        if ((config.node_limit > 0 && stats.nodes >= config.node_limit) || out_of_time()) {
            hit_limit = true;
            stop_bound = remaining_bound;
            break;
        }
        open.pop();

        for (std::size_t k = 0; k < int_cols.size(); ++k) {
            lo[int_cols[k]] = node.int_lo[k];
            up[int_cols[k]] = node.int_up[k];
        }
        const RawResult lpres = solve_std(lp, lo, up, config.lp);
        ++stats.nodes;
        if (lpres.status == LpStatus::Infeasible) continue;
        if (lpres.status == LpStatus::Unbounded) {
            SolutionRecord sol;
            sol.status = SolStatus::Unbounded;
            stats.bound = -kInf;
            return {sol, stats};
        }
        if (lpres.status != LpStatus::Optimal)
            throw std::runtime_error("branch-and-bound: node relaxation failed (" +
                                     to_string(lpres.status) + ")");
        const double v = lpres.objective + c0;
        if (have_incumbent && stats.incumbent - v <= config.rel_gap * inc_scale()) continue;

        // Most fractional integer variable, ties by lowest index.
        int branch_k = -1;
        double best_dist = config.int_tol;
        for (std::size_t k = 0; k < int_cols.size(); ++k) {
            const double val = lpres.x[int_cols[k]];
            const double dist = std::abs(val - std::round(val));
            if (dist > best_dist) {
                best_dist = dist;
                branch_k = static_cast<int>(k);
            }
        }

        if (branch_k < 0) {
            // Integral: resolve with the integers pinned to get a clean point.
            for (std::size_t k = 0; k < int_cols.size(); ++k) {
                const double r = std::round(lpres.x[int_cols[k]]);
                lo[int_cols[k]] = r;
                up[int_cols[k]] = r;
            }
            const RawResult fixed = solve_std(lp, lo, up, config.lp);
            if (fixed.status == LpStatus::Optimal) {
                const double fv = fixed.objective + c0;
                if (!have_incumbent || fv < stats.incumbent) {
                    stats.incumbent = fv;
                    incumbent = record_from_std(model, fixed.x, fv);
                    have_incumbent = true;
                }
            }
            continue;
        }

        Node down = node;
        down.bound = v;
        down.seq = next_seq++;
        down.int_up[static_cast<std::size_t>(branch_k)] =
            std::floor(lpres.x[int_cols[static_cast<std::size_t>(branch_k)]]);
        Node upnode = node;
        upnode.bound = v;
        upnode.seq = next_seq++;
        upnode.int_lo[static_cast<std::size_t>(branch_k)] =
            std::ceil(lpres.x[int_cols[static_cast<std::size_t>(branch_k)]]);
        open.push(std::move(down));
        open.push(std::move(upnode));
    }

    if (open.empty()) stop_bound = have_incumbent ? stats.incumbent : kInf;

    stats.bound = stop_bound;
    if (have_incumbent) {
        stats.gap = std::max(0.0, (stats.incumbent - stats.bound) / inc_scale());
        incumbent.status = hit_limit ? SolStatus::Limit : SolStatus::Optimal;
        incumbent.bound = stats.bound;
    } else if (hit_limit) {
        incumbent.status = SolStatus::Limit;
        incumbent.bound = stats.bound;
    } else {
        incumbent.status = SolStatus::Infeasible;
    }
    return {incumbent, stats};
}

SolutionRecord brute_force_milp(const ModelIR& model, const BruteForceOptions& options) {
    check_desk_scale(model, options.lp);
    const std::vector<int> int_cols = integer_columns(model);
    if (static_cast<int>(int_cols.size()) > options.max_integer_vars)
        throw EngineLimitError("brute force refused: " + std::to_string(int_cols.size()) +
                               " integer variables, limit is " +
                               std::to_string(options.max_integer_vars));

    const StdLp lp = std_form(model);
    const double c0 = model.objective_constant();

    long combos = 1;
    std::vector<long> base(int_cols.size()), span(int_cols.size());
    for (std::size_t k = 0; k < int_cols.size(); ++k) {
        const double l = lp.lo[int_cols[k]], u = lp.up[int_cols[k]];
        if (l == -kInf || u == kInf)
            throw EngineLimitError("brute force refused: integer variable " +
                                   model.variables()[static_cast<std::size_t>(int_cols[k])].name +
                                   " has an unbounded range");
        base[k] = static_cast<long>(std::ceil(l - 1e-9));
        span[k] = static_cast<long>(std::floor(u + 1e-9)) - base[k] + 1;
        if (span[k] < 1)
            throw ValidationError("integer variable with empty bound range");
        if (combos > options.max_assignments / span[k])
            throw EngineLimitError("brute force refused: enumeration exceeds " +
                                   std::to_string(options.max_assignments) + " assignments");
        combos *= span[k];
    }

    VectorXd lo = lp.lo, up = lp.up;
    std::vector<long> val(int_cols.size(), 0);

    bool found = false;
    double best = kInf;
    VectorXd best_x;

    for (long it = 0; it < combos; ++it) {
        for (std::size_t k = 0; k < int_cols.size(); ++k) {
            const double v = static_cast<double>(base[k] + val[k]);
            lo[int_cols[k]] = v;
            up[int_cols[k]] = v;
        }
        const RawResult r = solve_std(lp, lo, up, options.lp);
        if (r.status == LpStatus::Unbounded) {
            SolutionRecord sol;
            sol.status = SolStatus::Unbounded;
            return sol;
        }
        if (r.status == LpStatus::Optimal) {
            const double v = r.objective + c0;
            if (!found || v < best) {
                found = true;
                best = v;
                best_x = r.x;
            }
        } else if (r.status != LpStatus::Infeasible) {
            throw std::runtime_error("brute force: restricted LP failed (" +
                                     to_string(r.status) + ")");
        }
        // odometer, last variable fastest
        for (int k = static_cast<int>(int_cols.size()) - 1; k >= 0; --k) {
            if (++val[static_cast<std::size_t>(k)] < span[static_cast<std::size_t>(k)]) break;
            val[static_cast<std::size_t>(k)] = 0;
        }
    }

    if (!found) {
        SolutionRecord sol;
        sol.status = SolStatus::Infeasible;
        return sol;
    }
    return record_from_std(model, best_x, best);
}

}  // namespace tnepfacts
