#pragma once
// Riemannian data on a single coordinate chart.

#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "slantgeo/dense.hpp"
#include "slantgeo/expr.hpp"

namespace slantgeo {

struct Box {
    std::vector<double> lo, hi;
    size_t dim() const { return lo.size(); }
    std::vector<double> center() const;
    Box shrunk(double margin) const;
};

// A sample point that cannot be used (rank loss, singular metric, abs kink, domain error).
class DegeneratePoint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankError : public DegeneratePoint {
public:
    using DegeneratePoint::DegeneratePoint;
};

// Deterministic generator: mt19937_64 mapped to [0,1) with 53 bits.
class Rng {
public:
    explicit Rng(uint64_t seed);
    double uniform();
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double normal();

private:
    std::mt19937_64 eng_;
};

std::vector<std::vector<double>> grid_points(const Box& box, const std::vector<int>& counts);
std::vector<std::vector<double>> random_points(const Box& box, int n, uint64_t seed);

struct MetricPoint {
    int n = 0;
    MatD g, ginv;
    std::vector<MatD> dg;     // dg[c](i,j) = d_c g_ij
    std::vector<MatD> gamma;  // gamma[k](i,j) = Gamma^k_ij
    std::vector<MatD> dgamma; // dgamma[l*n+k](i,j) = d_l Gamma^k_ij, only with curvature

    // Gamma(X, Y)^k = Gamma^k_ij X^i Y^j
    MatD Gamma(const MatD& X, const MatD& Y) const;
    // R(X,Y)Z with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
    MatD R(const MatD& X, const MatD& Y, const MatD& Z) const;
    double sectional(const MatD& X, const MatD& Y) const;
    double ip(const MatD& X, const MatD& Y) const { return inner(X, g, Y); }
};

class ChartedManifold {
public:
    ChartedManifold() = default;
    ChartedManifold(std::vector<std::string> coords, std::vector<std::vector<Expr>> metric, Box domain);

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<std::vector<Expr>>& metric() const { return metric_; }
    const Box& domain() const { return domain_; }

    // Throws DegeneratePoint for a singular metric (condition number > 1e12)
    // or when an expression cannot be evaluated.
    MetricPoint at(const std::vector<double>& x, bool curvature = false) const;
    MatD metric_at(const std::vector<double>& x) const;

private:
    std::vector<std::string> coords_;
    std::vector<std::vector<Expr>> metric_;
    Box domain_;
    std::shared_ptr<Program> first_;  // g and d g
    mutable std::shared_ptr<Program> second_;
    mutable std::shared_ptr<std::once_flag> second_once_;
};

struct ChristoffelData {
    std::vector<double> point;
    std::vector<MatD> gamma;
};

ChristoffelData christoffel(const ChartedManifold& M, const std::vector<double>& x);

// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j for fields given by expressions.
MatD cov_deriv(const ChartedManifold& M, const std::vector<Expr>& X, const std::vector<Expr>& Y,
               const std::vector<double>& x);

double sectional_curvature(const ChartedManifold& M, const std::vector<double>& x, const MatD& X, const MatD& Y);

// max |d_k g_ij - (Gamma^l_ki g_lj + Gamma^l_kj g_il)|
double metric_compatibility_residual(const MetricPoint& p);
// max |R(X,Y)Z + R(Y,Z)X + R(Z,X)Y| over coordinate triples
double bianchi_residual(const MetricPoint& p);

// Modified Gram-Schmidt in the metric G, no pivoting. Throws RankError when
// a residual norm falls below tol.
template <class S>
std::vector<Mat<S>> gram_schmidt(const std::vector<Mat<S>>& vs, const Mat<S>& G, double tol = 1e-10) {
    std::vector<Mat<S>> out;
    for (const auto& v0 : vs) {
        Mat<S> v = v0;
        for (const auto& e : out) {
            S p = inner(e, G, v);
            for (int i = 0; i < v.r; ++i) v[i] -= p * e[i];
        }
        S nn = sqrt(inner(v, G, v));
        if (value(nn) < tol) throw RankError("gram_schmidt: rank deficiency");
        for (int i = 0; i < v.r; ++i) v[i] /= nn;
        out.push_back(v);
    }
    return out;
}

}  // namespace slantgeo
