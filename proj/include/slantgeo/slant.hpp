#pragma once
// Pointwise slant analysis on the xi-orthogonal part M_p of the tangent space.

#include <optional>
#include <string>
#include <vector>

#include "slantgeo/submanifold.hpp"

namespace slantgeo {

struct SlantSpectrum {
    std::vector<double> u;
    std::vector<double> eigenvalues;  // of -T^2 on M_p, ascending
    std::optional<double> theta;      // empty when not pointwise slant
    double spread = 0;
    XiPosition xi_position = XiPosition::Oblique;
    bool slant() const { return theta.has_value(); }
};

// Throws DegeneratePoint, or std::domain_error when M_p is zero-dimensional.
SlantSpectrum slant_spectrum(const FramedPoint& p, double tol = 1e-8);
SlantSpectrum slant_spectrum(const ACMStructure& S, const Immersion& imm, const std::vector<double>& u,
                             double tol = 1e-8);

// Matrix of the M_p-component of T on the g-orthonormal basis p.Mp (skew when xi is tangent or normal).
MatD restricted_T(const FramedPoint& p);

struct SlantClassification {
    std::string label;  // invariant | anti-invariant | slant(<theta>) | pointwise-slant | not-pointwise-slant
    std::optional<double> theta0;
    std::vector<SlantSpectrum> samples;
    int degenerate = 0;
    double theta_min = 0, theta_max = 0;
};

SlantClassification classify_slant(const ACMStructure& S, const Immersion& imm,
                                   const std::vector<std::vector<double>>& points, double tol = 1e-8,
                                   double constancy_tol = 1e-6);

// max |g(TX,TY)| over random g-orthonormal pairs in M_p
double orthogonality_residual(const FramedPoint& p, int trials, uint64_t seed);

// max |g(TX,TY) - cos^2 g(X,Y)| and max |g(FX,FY) - sin^2 g(X,Y)| over random pairs in M_p
struct AngleResiduals {
    double tangential = 0, normal = 0;
};
AngleResiduals angle_residuals(const FramedPoint& p, double theta, int trials, uint64_t seed);

// Omega(X, Y) = g(X, TY) for parameter vectors
double omega(const FramedPoint& p, const MatD& X, const MatD& Y);
// max |d Omega| over coordinate triples; 0 when m < 3
double d_omega_residual(const FramedPoint& p);

// (eta ^ Omega^k)(e_xi, e_1, ..., e_2k) on an oriented orthonormal frame; xi must be tangent
double volume_form_coefficient(const FramedPoint& p);

// max |theta' - theta| after (phi, e^-f xi, e^f eta, e^2f g)
double conformal_invariance_residual(const ACMStructure& S, const Immersion& imm, const Expr& f,
                                     const std::vector<std::vector<double>>& samples, double tol = 1e-8);

// max |A_{FX} TX - A_{FTX} X| over random unit X in M_p
double ar_relation_residual(const FramedPoint& p, int trials, uint64_t seed);

// Residuals of
//   (nabla_X T)Y = A_{FY} X + t h(X,Y)         (D_X F)Y = -h(X,TY) + f h(X,Y)
//   -T A_Z X + t D_X Z = nabla_X(tZ) - A_{fZ}X  -F A_Z X + f D_X Z = h(X,tZ) + D_X(fZ)
// for coordinate X, coordinate and frame-coefficient fields Y, Z.
struct ParallelResiduals {
    double nabla_T = 0, D_F = 0, t_part = 0, f_part = 0;
    double max() const;
};
ParallelResiduals parallel_tensor_residuals(const FramedPoint& p);

}  // namespace slantgeo
