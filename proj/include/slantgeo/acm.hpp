#pragma once
// Almost contact metric structures (phi, xi, eta, g) on a chart.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slantgeo/geometry.hpp"

namespace slantgeo {

struct AmbientPoint {
    std::vector<double> x;
    MetricPoint m;
    MatD phi;                // phi(k, j): k-th component of phi(d_j)
    std::vector<MatD> dphi;  // dphi[c] = d_c phi
    MatD xi;                 // N x 1
    std::vector<MatD> dxi;
    MatD eta;                // 1 x N
    std::vector<MatD> deta;

    int n() const { return m.n; }
    MatD phi_of(const MatD& X) const { return phi * X; }
    double eta_of(const MatD& X) const { return (eta * X)[0]; }
    double g(const MatD& X, const MatD& Y) const { return m.ip(X, Y); }
    // (nabla_X phi) Y
    MatD nabla_phi(const MatD& X, const MatD& Y) const;
    MatD nabla_xi(const MatD& X) const;
    double nabla_eta(const MatD& X, const MatD& Y) const;
    // nabla_X Y for a vector field Y with known directional derivative dY = X(Y)
    MatD cov(const MatD& X, const MatD& Y, const MatD& dY) const { return dY + m.Gamma(X, Y); }
    // orthonormal frame built from the coordinate basis
    std::vector<MatD> frame() const;
};

class ACMStructure {
public:
    ACMStructure() = default;
    ACMStructure(std::string name, ChartedManifold M, std::vector<std::vector<Expr>> phi, std::vector<Expr> xi,
                 std::vector<Expr> eta);

    const std::string& name() const { return name_; }
    const ChartedManifold& manifold() const { return M_; }
    int dim() const { return M_.dim(); }
    const std::vector<std::string>& coords() const { return M_.coords(); }
    const std::vector<std::vector<Expr>>& phi() const { return phi_; }
    const std::vector<Expr>& xi() const { return xi_; }
    const std::vector<Expr>& eta() const { return eta_; }

    // Throws DegeneratePoint.
    AmbientPoint at(const std::vector<double>& x, bool curvature = false) const;

    // (phi, e^{-f} xi, e^{f} eta, e^{2f} g)
    ACMStructure conformal(const Expr& f) const;

private:
    std::string name_;
    ChartedManifold M_;
    std::vector<std::vector<Expr>> phi_;
    std::vector<Expr> xi_, eta_;
    std::shared_ptr<Program> prog_;
};

// Built-in ambients on R^{2n+1} with coordinates y1..y2n, t.
//   euclidean_cosymplectic, kenmotsu_warped, sasakian_standard, rotation_family
// rotation_family uses phi = cos f J1 - sin f J2 on each block of four y's
// and the standard complex structure on a trailing pair when n is odd.
ACMStructure builtin(const std::string& name, int n, const std::optional<Expr>& f = std::nullopt);
std::vector<std::string> builtin_coords(int n);
std::vector<std::string> builtin_names();

enum class DEtaConvention { Half, Full };
const char* to_string(DEtaConvention c);
// Convention used unless a caller overrides it: the one under which
// sasakian_standard satisfies Phi = d eta.
DEtaConvention default_deta_convention();

double fundamental_two_form(const AmbientPoint& p, const MatD& X, const MatD& Y);
// d eta(X, Y) for constant-coefficient X, Y
double d_eta(const AmbientPoint& p, const MatD& X, const MatD& Y, DEtaConvention c);
// N(d_i, d_j) for coordinate fields
MatD nijenhuis(const AmbientPoint& p, int i, int j);
MatD nijenhuis(const AmbientPoint& p, const MatD& X, const MatD& Y);

struct AxiomReport {
    std::map<std::string, double> residuals;
    int samples_used = 0;
    int degenerate = 0;
    double max_residual() const;
};

AxiomReport check_axioms(const ACMStructure& S, const std::vector<std::vector<double>>& samples);

struct StructureClassReport {
    bool axioms_ok = false, contact_metric = false, normal = false;
    bool sasakian = false, kenmotsu = false, cosymplectic = false;
    bool consistent = true;
    std::map<std::string, double> residuals;
    int samples_used = 0;
    int degenerate = 0;
    double tol = 1e-8;
    DEtaConvention convention = DEtaConvention::Half;
    std::string label() const;  // sasakian | kenmotsu | cosymplectic | contact_metric | almost_contact_metric | invalid
};

StructureClassReport classify(const ACMStructure& S, const std::vector<std::vector<double>>& samples,
                              double tol = 1e-8, std::optional<DEtaConvention> conv = std::nullopt,
                              double axiom_tol = 1e-10);

}  // namespace slantgeo
