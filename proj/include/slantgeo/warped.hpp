#pragma once
// Warped products B x_f F immersed in an almost contact metric manifold.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slantgeo/semi_slant.hpp"

namespace slantgeo {

class NotWarped : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters split into base and fiber. ln f is extracted symbolically from the
// induced metric: f^2 = tr g_FF(u) / tr g_FF(u with the base at the box centre).
class WarpedImmersion {
public:
    WarpedImmersion(const ACMStructure& S, Immersion imm, const std::vector<std::string>& base,
                    const std::vector<std::string>& fiber, std::optional<Expr> declared_f = std::nullopt);

    const Immersion& immersion() const { return imm_; }
    const std::vector<int>& base() const { return base_; }
    const std::vector<int>& fiber() const { return fiber_; }
    int m1() const { return static_cast<int>(base_.size()); }
    int m2() const { return static_cast<int>(fiber_.size()); }
    const Expr& ln_f() const { return lnf_; }
    const std::optional<Expr>& declared_f() const { return declared_; }
    const ChartedManifold& induced() const { return induced_; }

    struct LnF {
        double value;
        MatD d;     // d ln f, m x 1 (covector in parameter coords)
        MatD hess;  // second partials of f (not ln f), m x m
        double f;
    };
    LnF eval_ln_f(const std::vector<double>& u) const;

private:
    Immersion imm_;
    std::vector<int> base_, fiber_;
    std::optional<Expr> declared_;
    std::vector<std::vector<Expr>> G_;
    Expr lnf_;
    std::shared_ptr<Program> prog_;
    ChartedManifold induced_;
};

struct WarpExtraction {
    std::vector<std::vector<double>> u;
    std::vector<double> f;
    double cross_residual = 0;  // max |g(d_B, d_F)|
    double ratio_spread = 0;    // max deviation of the fiber-block ratio from f^2, relative
    std::optional<double> declared_residual;
    double ln_f_range = 0;
    double fiber_gradient = 0;  // max |d ln f| along fiber directions
    int degenerate = 0;
    bool nontrivial() const { return ln_f_range > 1e-6; }
};
// Throws NotWarped when the cross block or the ratio spread exceeds the tolerances.
WarpExtraction extract_warping(const ACMStructure& S, const WarpedImmersion& W,
                               const std::vector<std::vector<double>>& samples, double cross_tol = 1e-8,
                               double ratio_tol = 1e-6);

struct WarpData {
    std::vector<double> u;
    double f = 0;
    MatD grad_ln_f;  // parameter coords
    double grad_ln_f_norm2 = 0;
    double phi_grad_ln_f_norm2 = 0;
    double laplacian_f = 0;          // -trace of the Hessian over an orthonormal base frame
    double laplacian_f_direct = 0;   // coordinate divergence form, finite differences on the base
};
WarpData warp_data(const FramedPoint& p, const WarpedImmersion& W);

// max over unit base X and unit fiber Y of |tan(nabla_X Y) - X(ln f) Y|
double warp_connection_residual(const FramedPoint& p, const WarpedImmersion& W);

// max over fiber directions j of |lap f / f - sum_i K(e_i ^ e_j)|, and the largest
// disagreement between intrinsic K and the Gauss equation
struct CurvatureRelation {
    double laplacian = 0;
    double gauss = 0;
};
CurvatureRelation warp_curvature_relation(const ACMStructure& S, const FramedPoint& p, const WarpedImmersion& W);

enum class AmbientClass { Cosymplectic, Sasakian, Kenmotsu, Other };
const char* to_string(AmbientClass c);
AmbientClass ambient_class(const StructureClassReport& r);

// Checks whether D1 = TB and D2 = TF (allowed) or D1 = TF and D2 = TB (forbidden).
enum class Orientation { Allowed, Forbidden, Neither };
Orientation orientation(const FramedPoint& p, const SemiSlantSplit& s, const WarpedImmersion& W, double tol = 1e-8);

// Residual per identity over orthonormal bases of D1 = TB and D2 = TF at one point, X, Y in D1, Z, W in D2.
// Class-specific forms, right-hand sides selected by the ambient class:
//   shape_symmetry   g(h(X,W), FZ) = g(h(X,Z), FW)
//   shape_FTZ        g(h(W,X), FTZ) = -TX(ln f) g(W,TZ) - cos^2 X(ln f) g(W,Z) + class term
//   shape_FZ_phiX    g(h(W,TX), FZ) = (X - eta(X) xi)(ln f) g(W,Z) - TX(ln f) g(TW,Z)
//   h_base           g(h(X,Y), FZ) = 0 | eta(Z) g(X,Y) | eta(Z) g(phi X,Y)
//   h_mixed          g(h(X,W), FZ) = class term - TX(ln f) g(W,Z) + (X - eta(X) xi)(ln f) g(W,TZ)
// General forms, valid for any ambient:
//   h_base_general   g(h(X,Y), FZ) = g((nabla_X phi) Y, Z)
//   h_mixed_general  g(h(X,W), FZ) = -TX(ln f) g(W,Z) + g((nabla_W phi) X, Z) - X(ln f) g(W,TZ)
//   shape_symmetry_general  the difference of the two sides of shape_symmetry implied by h_mixed_general
std::map<std::string, double> warp_identity_residuals(const FramedPoint& p, const SemiSlantSplit& s,
                                                      const WarpedImmersion& W, AmbientClass cls);
// Same with d ln f given directly (zero for a configuration that is not a warped product).
std::map<std::string, double> warp_identity_residuals(const FramedPoint& p, const SemiSlantSplit& s,
                                                      const MatD& d_ln_f, AmbientClass cls);

// Chain forcing Z(ln f) = 0 in the forbidden orientation D1 = TF, D2 = TB; X, Y in D1, Z in D2.
//   angle_chain          sin^2 Z(ln f) g(X,Y) = g(h(X,Y), FTZ) - g(h(X,TY), FZ) [+ Z(ln f) eta(X) eta(Y), xi tangent]
//   angle_chain_general  the same with the nabla phi and nabla xi terms kept
//   h_phi_symmetry       g(h(X,TY), FZ) = g(h(Y,TX), FZ)
//   TZ_ln_f              TZ(ln f) g(X, TY) = 0
//   xi_chain             cos^2 Z(ln f) = -g(h(xi,xi), FTZ), xi tangent only
//   z_ln_f, cos2_z_ln_f  max |Z(ln f)| and cos^2 |Z(ln f)| over unit Z in D2
std::map<std::string, double> nonexistence_chain(const FramedPoint& p, const SemiSlantSplit& s,
                                                 const WarpedImmersion& W);

struct InequalityTerms {
    std::string formula;  // <class>-xi-<tangent|normal> or none
    double h_norm2 = 0;
    double rhs = 0;
    double slack = 0;
    double equality_residual = 0;  // max |g(h(Z,W), V)| over fiber pairs and normal V
    double frame_residual = 0;     // normalization of the adapted frame
    int m1 = 0, m2 = 0, n = 0, mu_dim = 0;
    bool mu_minimal = false;       // the dimension hypothesis n = m1 + 2 m2
};
InequalityTerms inequality_terms(const FramedPoint& p, const SemiSlantSplit& s, const WarpedImmersion& W,
                                 AmbientClass cls);

}  // namespace slantgeo
