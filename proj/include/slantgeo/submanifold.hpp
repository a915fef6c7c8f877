#pragma once
// Immersed submanifolds of an almost contact metric ambient.
//
// Tangent vectors are carried in parameter coordinates (m x 1); ambient
// vectors in chart coordinates (N x 1). Quantities that must be
// differentiated along the submanifold are jets in the parameters.

#include <string>
#include <vector>

#include "slantgeo/acm.hpp"

namespace slantgeo {

class Immersion {
public:
    Immersion() = default;
    Immersion(std::vector<std::string> params, Box domain, std::vector<Expr> map);

    int dim() const { return static_cast<int>(params_.size()); }
    int ambient_dim() const { return static_cast<int>(map_.size()); }
    const std::vector<std::string>& params() const { return params_; }
    const Box& domain() const { return domain_; }
    const std::vector<Expr>& map() const { return map_; }

    // point, Jacobian (N x m) and second partials packed as d2[a*m+b] (N x 1)
    struct Values {
        std::vector<double> x;
        MatD J;
        std::vector<MatD> d2;
    };
    Values eval(const std::vector<double>& u) const;

private:
    std::vector<std::string> params_;
    Box domain_;
    std::vector<Expr> map_;
    std::shared_ptr<Program> prog_;
};

// Induced metric i*g as expressions in the parameters.
std::vector<std::vector<Expr>> induced_metric(const ACMStructure& S, const Immersion& imm);
ChartedManifold induced_manifold(const ACMStructure& S, const Immersion& imm);

enum class XiPosition { Tangent, Normal, Oblique };
const char* to_string(XiPosition p);

struct Tolerances {
    double rank = 1e-8;      // smallest singular value of the Jacobian in g
    double xi_position = 1e-10;
};

struct TangentOperators {
    MatD T, F, t, f;  // in the orthonormal tangent and normal frames
    MatD xi_t, xi_n;  // g(e_a, xi), g(nu_alpha, xi)
};

struct FundamentalForms {
    std::vector<MatD> h;  // h[alpha](a, b) in orthonormal frames
    MatD H;               // mean curvature, ambient
    double h_norm2 = 0;
};

// Everything computed at one parameter point. Throws DegeneratePoint.
class FramedPoint {
public:
    FramedPoint(const ACMStructure& S, const Immersion& imm, const std::vector<double>& u, Tolerances tol = {},
                bool curvature = false);

    int m = 0, N = 0;
    std::vector<double> u, x;
    AmbientPoint amb;

    // jets along the parameters
    MatJ J, g, phi, xi;
    MatJ G, Ginv, Ptan, Pn;  // Ptan: ambient -> parameter coords of the tangential part
    MatJ T;                  // tangential part of phi on TM, parameter coords
    MatJ xi_t, xi_n;         // xi_t in parameter coords, xi_n ambient
    MatJ Ej;                 // orthonormal tangent frame, parameter coords (m x m)
    MatJ Nj;                 // orthonormal normal frame, ambient (N x (N-m))

    XiPosition xi_position = XiPosition::Oblique;
    MatD Mp;  // g-orthonormal basis of M_p in parameter coords (m x k)

    // value accessors
    MatD E() const { return values(Ej); }
    MatD tangent_frame() const { return values(J) * values(Ej); }
    MatD normal_frame() const { return values(Nj); }
    MatD Gv() const { return values(G); }
    MatD gv() const { return amb.m.g; }

    // parameter vector -> ambient vector
    MatD push(const MatD& X) const { return Jv_ * X; }
    double gt(const MatD& X, const MatD& Y) const { return inner(X, Gv_, Y); }
    double ga(const MatD& V, const MatD& W) const { return inner(V, amb.m.g, W); }
    MatD tan_part(const MatD& V) const { return Ptanv_ * V; }  // parameter coords
    MatD nor_part(const MatD& V) const { return Pnv_ * V; }

    // second fundamental form for parameter vectors (ambient normal vector)
    MatD h(const MatD& X, const MatD& Y) const;
    const MatD& h_ab(int a, int b) const { return h_[a * m + b]; }
    FundamentalForms forms() const;

    // shape operator by duality, parameter coords. Throws std::invalid_argument if Z is not normal.
    MatD A(const MatD& Z, const MatD& X) const;
    // -tan(nabla_X Z) for a normal field given by jets
    MatD A_weingarten(const MatJ& Z, const MatD& X) const;

    // derivative of a jet field along the parameter vector X
    static MatD dir(const MatJ& V, const MatD& X);
    // ambient covariant derivative of an ambient field along X
    MatD nabla_bar(const MatD& X, const MatJ& V) const;
    // induced connection on a tangent field given in parameter coords
    MatD nabla(const MatD& X, const MatJ& Y) const;
    // normal connection on a normal field (ambient)
    MatD D(const MatD& X, const MatJ& Z) const;

    // operators on jets
    MatJ ambient(const MatJ& Y) const { return J * Y; }
    MatJ Tof(const MatJ& Y) const { return T * Y; }
    MatJ Fof(const MatJ& Y) const { return Pn * (phi * (J * Y)); }
    MatJ tof(const MatJ& Z) const { return Ptan * (phi * Z); }
    MatJ fof(const MatJ& Z) const { return Pn * (phi * Z); }
    MatJ normal_field(const std::vector<double>& coeffs) const;  // constant coefficients on the frame

    TangentOperators operators() const;

private:
    MatD Jv_, Gv_, Ptanv_, Pnv_;
    std::vector<MatD> h_;
};

// Residuals of the pointwise block identities
//   T^2 + tF = -I + eta (x) H(xi),  FT + fF = eta (x) V(xi)
//   Tt + tf = eta (x) H(xi),        Ft + f^2 = -I + eta (x) V(xi)
struct BlockResiduals {
    double TT_tF = 0, FT_fF = 0, Tt_tf = 0, Ft_ff = 0;
    double max() const;
};
BlockResiduals block_identities(const TangentOperators& op);

}  // namespace slantgeo
