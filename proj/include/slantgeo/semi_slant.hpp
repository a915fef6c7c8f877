#pragma once
// Pointwise semi-slant splitting TM = D1 + D2 and TM^perp = F D2 + mu.

#include <optional>
#include <string>
#include <vector>

#include "slantgeo/submanifold.hpp"

namespace slantgeo {

enum class SplitStatus {
    Ok,             // D1 (phi-invariant, with xi when tangent) and at most one slant cluster D2
    Invariant,      // D2 empty
    NotSemiSlant,   // two or more clusters besides the one at 1
    Indeterminate,  // two clusters closer than 10 * cluster_tol
    Boundary,       // the D2 cluster is within 10 * cluster_tol of 0 or 1 without merging
    Oblique,        // xi neither tangent nor normal; split skipped
};
const char* to_string(SplitStatus s);

struct SemiSlantSplit {
    std::vector<double> u;
    XiPosition xi_position = XiPosition::Oblique;
    SplitStatus status = SplitStatus::Oblique;
    std::vector<double> eigenvalues;    // of -T^2 on M_p, ascending
    std::vector<double> cluster_means;  // ascending
    MatD D1, D2;                        // g-orthonormal columns, parameter coords
    MatD FD2, mu;                       // g-orthonormal columns, ambient
    std::optional<double> theta;        // semi-slant value on D2 (pi/2 for an anti-invariant part)
    bool proper = false;                // D1 and D2 both nontrivial and 0 < theta < pi/2
    MatD P, Q;                          // projections onto D1, D2 in parameter coords
    bool ok() const { return status == SplitStatus::Ok; }
};

SemiSlantSplit split_distributions(const FramedPoint& p, double cluster_tol = 1e-6);
SemiSlantSplit split_distributions(const ACMStructure& S, const Immersion& imm, const std::vector<double>& u,
                                   double cluster_tol = 1e-6);

// Jet of the projection onto D1 along the parameters, from -T^2 + xi_t (x) eta.
// Requires an Ok split with D2 nontrivial and xi tangent or normal.
MatJ projector_jet(const FramedPoint& p, const SemiSlantSplit& s);

// norm of the part of phi V outside mu, maximised over the mu basis; empty when
// neither D2 nor mu lies in ker eta
std::optional<double> mu_invariance_residual(const FramedPoint& p, const SemiSlantSplit& s, double tol = 1e-10);

struct SemiSlantResiduals {
    double T_D1 = 0;    // component of T(D1) in D2
    double F_D1 = 0;    // |F(D1)|
    double T_D2 = 0;    // component of T(D2) in D1
    double t_nor = 0;   // component of t(TM^perp) in D1
    double T2_D2 = 0;   // |T^2 X + cos^2 X| on D2
    double orth = 0;    // D1 against D2 and FD2 against mu
    BlockResiduals block;
    double max() const;
};
SemiSlantResiduals semi_slant_identities(const FramedPoint& p, const SemiSlantSplit& s);

struct SemiSlantField {
    std::string label;  // semi-slant(<theta>) | pointwise-semi-slant | invariant | not-pointwise-semi-slant | mixed
    std::vector<SemiSlantSplit> samples;
    int degenerate = 0;
    bool xi_dichotomy_consistent = true;  // xi in D1 at every sample or at none
    bool dims_consistent = true;
    std::optional<double> theta0;
};
SemiSlantField semi_slant_function(const ACMStructure& S, const Immersion& imm,
                                   const std::vector<std::vector<double>>& points, double cluster_tol = 1e-6,
                                   double constancy_tol = 1e-6);

}  // namespace slantgeo
