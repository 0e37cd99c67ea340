#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tnepfacts/formulations.hpp"

namespace tnepfacts {

// A point (psi, z+, z-, theta, dpf) of the per-branch device space.
// Fractional binaries are allowed; these are LP-relaxation points.
struct DisjunctPoint {
    double psi = 0.0;
    double z_plus = 0.0;
    double z_minus = 0.0;
    double theta = 0.0;  // angle difference, rad
    double dpf = 0.0;    // flow change, MW

    Eigen::Matrix<double, 5, 1> vec() const {
        return (Eigen::Matrix<double, 5, 1>() << psi, z_plus, z_minus, theta, dpf).finished();
    }
};

// The eight extreme points of the three disjunction pieces, in a fixed order:
// two for the no-device piece, three for the non-negative-angle piece, three
// for the non-positive-angle piece.
std::array<DisjunctPoint, 8> enumerate_extreme_points(const DisjunctBlockParams& params);

struct FacetCheck {
    std::string name;            // th_lo, ..., cut_nmin, psi_ub, zp_lb, zm_lb
    bool applicable = true;      // false when the parameters are degenerate
    bool valid = false;          // holds at all 8 extreme points
    std::vector<int> tight_points;
    int affine_rank = 0;         // of the tight set (npoints-style rank: dim + 1)
    bool is_facet = false;       // valid and affine rank 4 on the link hyperplane
};

struct FacetReport {
    DisjunctBlockParams params;
    bool degenerate = false;
    std::vector<FacetCheck> checks;  // 8 inequality rows + 3 binary-bound facets

    bool all_facets() const;
};

// Brute-force check of the facet property: validity at the 8 extreme points,
// tightness sets, and the affine rank of each tight set via elimination with
// partial pivoting. Tolerances are relative to the coefficient scale.
FacetReport verify_facets(const DisjunctBlockParams& params);

enum class DisjunctMembership { P000, P110, P101, None };

std::string to_string(DisjunctMembership m);

// Which disjunction piece (if any) contains the point. The binaries must be
// integral within tol; throws otherwise.
DisjunctMembership check_point_in_disjunction(const DisjunctPoint& p,
                                              const DisjunctBlockParams& params,
                                              double tol);

// Max normalized violation of the link equality and the eight inequality
// rows at one point. 0 means the point satisfies the whole extended block.
double block_violation(const DisjunctBlockParams& params, const DisjunctPoint& p);

struct ContainmentSample {
    long n_samples = 0;
    long big_m_feasible = 0;
    long hull_feasible = 0;
    long containment_violations = 0;  // hull-feasible but big-M-infeasible; must be 0
    double strictness_fraction = 0.0;  // big-M-feasible yet hull-infeasible, per sample
};

// Monte Carlo comparison of the two per-branch LP relaxations over the box
// psi in [0,1], theta in its box, dpf in [-M, M] with M = flow_cap. Membership
// is tested on (psi, theta, dpf) with the auxiliary sign binaries eliminated
// by interval arithmetic. Every hull-feasible point must be big-M feasible.
ContainmentSample relaxation_containment_sample(const DisjunctBlockParams& params,
                                                long n_samples, std::uint64_t seed);

}  // namespace tnepfacts
