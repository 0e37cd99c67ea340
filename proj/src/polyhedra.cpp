#include "tnepfacts/polyhedra.hpp"

#include <cmath>

namespace tnepfacts {

bool FacetReport::all_facets() const {
    for (const FacetCheck& c : checks)
        if (!c.applicable || !c.is_facet) return false;
    return true;
}

std::array<DisjunctPoint, 8> enumerate_extreme_points(const DisjunctBlockParams& p) {
    if (!(p.theta_min < 0.0 && 0.0 < p.theta_max))
        throw ValidationError("enumerate_extreme_points: angle bounds must straddle zero");
    if (!(p.db_min <= p.db_max))
        throw ValidationError("enumerate_extreme_points: db_min exceeds db_max");
    const double tl = p.theta_min, th = p.theta_max;
    const double bl = p.db_min, bh = p.db_max;
    return {{
        {0.0, 0.0, 0.0, tl, 0.0},
        {0.0, 0.0, 0.0, th, 0.0},
        {1.0, 1.0, 0.0, 0.0, 0.0},
        {1.0, 1.0, 0.0, th, th * bl},
        {1.0, 1.0, 0.0, th, th * bh},
        {1.0, 0.0, 1.0, 0.0, 0.0},
        {1.0, 0.0, 1.0, tl, tl * bl},
        {1.0, 0.0, 1.0, tl, tl * bh},
    }};
}

namespace {

constexpr double kTol = 1e-9;

// One inequality in canonical form a . (psi, z+, z-, theta, dpf) >= rhs.
struct Inequality {
    const char* name;
    Eigen::Matrix<double, 5, 1> a;
    double rhs;
};

Eigen::Matrix<double, 5, 1> coeffs(double psi, double zp, double zm, double theta,
                                   double dpf) {
    return (Eigen::Matrix<double, 5, 1>() << psi, zp, zm, theta, dpf).finished();
}

// The eight inequality rows of the extended block plus the three binary-bound
// facets, written independently of the model builder so the two routes can
// cross-check each other. Less-or-equal rows are negated into >= form.
std::vector<Inequality> block_inequalities(const DisjunctBlockParams& p) {
    const double tl = p.theta_min, th = p.theta_max;
    const double bl = p.db_min, bh = p.db_max;
    return {
        {"th_lo", coeffs(0, tl, 0, 1, 0), tl},
        {"th_hi", coeffs(0, 0, -th, -1, 0), -th},
        {"sec_lo", coeffs(0, -th * bl, -tl * bh, 0, 1), 0.0},
        {"sec_hi", coeffs(0, th * bh, tl * bl, 0, -1), 0.0},
        {"cut_pmax", coeffs(0, -th * bl, -th * bh, -bh, 1), -th * bh},
        {"cut_pmin", coeffs(0, th * bh, th * bl, bl, -1), th * bl},
        {"cut_nmax", coeffs(0, tl * bh, tl * bl, bh, -1), tl * bh},
        {"cut_nmin", coeffs(0, -tl * bl, -tl * bh, -bl, 1), -tl * bl},
        {"psi_ub", coeffs(-1, 0, 0, 0, 0), -1.0},
        {"zp_lb", coeffs(0, 1, 0, 0, 0), 0.0},
        {"zm_lb", coeffs(0, 0, 1, 0, 0), 0.0},
    };
}

double eval_scale(const Inequality& q, const Eigen::Matrix<double, 5, 1>& x) {
    double s = std::max(1.0, std::abs(q.rhs));
    for (int i = 0; i < 5; ++i) s = std::max(s, std::abs(q.a[i] * x[i]));
    return s;
}

// Number of affinely independent points: linear rank of the difference
// vectors plus one. Gaussian elimination with partial pivoting; the pivot
// threshold is relative to the largest entry.
int affine_rank(const std::vector<Eigen::Matrix<double, 5, 1>>& pts) {
    if (pts.empty()) return 0;
    const int k = static_cast<int>(pts.size()) - 1;
    if (k == 0) return 1;
    Eigen::MatrixXd d(k, 5);
    for (int i = 0; i < k; ++i)
        d.row(i) = (pts[static_cast<std::size_t>(i + 1)] - pts[0]).transpose();
    const double threshold = kTol * std::max(1.0, d.cwiseAbs().maxCoeff());

    int rank = 0;
    int row = 0;
    for (int col = 0; col < 5 && row < k; ++col) {
        int piv = -1;
        double best = threshold;
        for (int r = row; r < k; ++r) {
            if (std::abs(d(r, col)) > best) {
                best = std::abs(d(r, col));
                piv = r;
            }
        }
        if (piv < 0) continue;
        d.row(row).swap(d.row(piv));
        for (int r = row + 1; r < k; ++r) d.row(r) -= d(r, col) / d(row, col) * d.row(row);
        ++row;
        ++rank;
    }
    return rank + 1;
}

}  // namespace

FacetReport verify_facets(const DisjunctBlockParams& params) {
    FacetReport report;
    report.params = params;
    report.degenerate = !(params.theta_min < 0.0 && 0.0 < params.theta_max &&
                          params.db_min < params.db_max);

    const std::vector<Inequality> ineqs = block_inequalities(params);
    if (report.degenerate) {
        for (const Inequality& q : ineqs) {
            FacetCheck c;
            c.name = q.name;
            c.applicable = false;
            report.checks.push_back(std::move(c));
        }
        return report;
    }

    const std::array<DisjunctPoint, 8> points = enumerate_extreme_points(params);
    for (const Inequality& q : ineqs) {
        FacetCheck c;
        c.name = q.name;
        c.valid = true;
        std::vector<Eigen::Matrix<double, 5, 1>> tight;
        for (int i = 0; i < 8; ++i) {
            const Eigen::Matrix<double, 5, 1> x = points[static_cast<std::size_t>(i)].vec();
            const double slack = q.a.dot(x) - q.rhs;
            const double scale = eval_scale(q, x);
            if (slack < -kTol * scale) c.valid = false;
            if (std::abs(slack) <= kTol * scale) {
                c.tight_points.push_back(i);
                tight.push_back(x);
            }
        }
        c.affine_rank = affine_rank(tight);
        c.is_facet = c.valid && c.affine_rank == 4;
        report.checks.push_back(std::move(c));
    }
    return report;
}

std::string to_string(DisjunctMembership m) {
    switch (m) {
        case DisjunctMembership::P000: return "P000";
        case DisjunctMembership::P110: return "P110";
        case DisjunctMembership::P101: return "P101";
        case DisjunctMembership::None: return "none";
    }
    return "none";
}

DisjunctMembership check_point_in_disjunction(const DisjunctPoint& p,
                                              const DisjunctBlockParams& params,
                                              double tol) {
    const auto integral = [&](double v) {
        return std::abs(v - std::round(v)) <= tol;
    };
    if (!integral(p.psi) || !integral(p.z_plus) || !integral(p.z_minus))
        throw ValidationError("check_point_in_disjunction: binaries are fractional");
    const int psi = static_cast<int>(std::lround(p.psi));
    const int zp = static_cast<int>(std::lround(p.z_plus));
    const int zm = static_cast<int>(std::lround(p.z_minus));

    const double tol_theta =
        tol * std::max({1.0, std::abs(params.theta_min), std::abs(params.theta_max)});
    const double lo_env = params.db_min * p.theta;
    const double hi_env = params.db_max * p.theta;
    const double tol_dpf =
        tol * std::max({1.0, std::abs(lo_env), std::abs(hi_env), std::abs(p.dpf)});

    if (psi == 0 && zp == 0 && zm == 0) {
        if (std::abs(p.dpf) <= tol_dpf && p.theta >= params.theta_min - tol_theta &&
            p.theta <= params.theta_max + tol_theta)
            return DisjunctMembership::P000;
        return DisjunctMembership::None;
    }
    if (psi == 1 && zp == 1 && zm == 0) {
        if (p.theta >= -tol_theta && p.theta <= params.theta_max + tol_theta &&
            p.dpf >= lo_env - tol_dpf && p.dpf <= hi_env + tol_dpf)
            return DisjunctMembership::P110;
        return DisjunctMembership::None;
    }
    if (psi == 1 && zp == 0 && zm == 1) {
        // theta <= 0 flips the envelope order.
        if (p.theta >= params.theta_min - tol_theta && p.theta <= tol_theta &&
            p.dpf >= hi_env - tol_dpf && p.dpf <= lo_env + tol_dpf)
            return DisjunctMembership::P101;
        return DisjunctMembership::None;
    }
    return DisjunctMembership::None;
}

double block_violation(const DisjunctBlockParams& params, const DisjunctPoint& p) {
    const Eigen::Matrix<double, 5, 1> x = p.vec();
    double worst = std::abs(p.z_plus + p.z_minus - p.psi);
    for (const Inequality& q : block_inequalities(params)) {
        const double slack = q.a.dot(x) - q.rhs;
        if (slack < 0.0) worst = std::max(worst, -slack / eval_scale(q, x));
    }
    return worst;
}

namespace {

// Projection membership for the big-M block: a z in [0,1] exists satisfying
// the four sign-selection rows iff the implied interval is non-empty.
bool big_m_projection_feasible(const DisjunctBlockParams& p, double big_m, double psi,
                               double theta, double dpf, double tol) {
    const double scale = std::max({1.0, big_m, std::abs(dpf)});
    if (std::abs(dpf) > big_m * psi + tol * scale) return false;
    const double lo_env = p.db_min * theta;
    const double hi_env = p.db_max * theta;
    double z_lo = 0.0, z_hi = 1.0;
    // dpf >= lo_env - M(1-z)  ->  z <= (dpf - lo_env + M) / M
    z_hi = std::min(z_hi, (dpf - lo_env + big_m) / big_m);
    // dpf <= hi_env + M(1-z)  ->  z <= (hi_env - dpf + M) / M
    z_hi = std::min(z_hi, (hi_env - dpf + big_m) / big_m);
    // dpf >= hi_env - M z     ->  z >= (hi_env - dpf) / M
    z_lo = std::max(z_lo, (hi_env - dpf) / big_m);
    // dpf <= lo_env + M z     ->  z >= (dpf - lo_env) / M
    z_lo = std::max(z_lo, (dpf - lo_env) / big_m);
    return z_lo <= z_hi + tol;
}

// Projection membership for the extended block: z+ = t, z- = psi - t with
// t in [0, psi]; every inequality is linear in t.
bool hull_projection_feasible(const DisjunctBlockParams& p, double psi, double theta,
                              double dpf, double tol) {
    double t_lo = 0.0, t_hi = psi;
    const Eigen::Matrix<double, 5, 1> x0 = coeffs(psi, 0.0, psi, theta, dpf);
    for (const Inequality& q : block_inequalities(p)) {
        const double base = q.a.dot(x0);        // contribution at t = 0
        const double slope = q.a[1] - q.a[2];   // d/dt of the left-hand side
        const double scale = eval_scale(q, x0) + std::abs(slope * psi);
        const double need = q.rhs - base;       // slope * t >= need
        if (std::abs(slope) <= kTol * scale) {
            if (need > tol * scale) return false;
        } else if (slope > 0.0) {
            t_lo = std::max(t_lo, need / slope);
        } else {
            t_hi = std::min(t_hi, need / slope);
        }
    }
    return t_lo <= t_hi + tol;
}

}  // namespace

ContainmentSample relaxation_containment_sample(const DisjunctBlockParams& params,
                                                long n_samples, std::uint64_t seed) {
    if (n_samples < 1)
        throw ValidationError("relaxation_containment_sample: need at least one sample");
    if (!(params.flow_cap > 0.0))
        throw ValidationError("relaxation_containment_sample: flow_cap must be positive");

    const double big_m = params.flow_cap;  // per-branch bound
    Rng rng(seed);
    ContainmentSample out;
    out.n_samples = n_samples;
    long strict = 0;
    for (long i = 0; i < n_samples; ++i) {
        const double psi = rng.uniform(0.0, 1.0);
        const double theta = rng.uniform(params.theta_min, params.theta_max);
        const double dpf = rng.uniform(-big_m, big_m);
        // Loose acceptance for the big-M test and strict for the hull test so
        // boundary noise cannot produce spurious containment violations.
        const bool in_big_m =
            big_m_projection_feasible(params, big_m, psi, theta, dpf, 1e-7);
        const bool in_hull = hull_projection_feasible(params, psi, theta, dpf, 1e-12);
        if (in_big_m) ++out.big_m_feasible;
        if (in_hull) ++out.hull_feasible;
        if (in_hull && !in_big_m) ++out.containment_violations;
        if (in_big_m && !in_hull) ++strict;
    }
    out.strictness_fraction = static_cast<double>(strict) / static_cast<double>(n_samples);
    return out;
}

}  // namespace tnepfacts
