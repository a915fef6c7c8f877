#include "slantgeo/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace slantgeo {

std::vector<double> Box::center() const {
    std::vector<double> c(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

Box Box::shrunk(double margin) const {
    Box b = *this;
    for (size_t i = 0; i < lo.size(); ++i)
        if (hi[i] - lo[i] > 2 * margin) {
            b.lo[i] += margin;
            b.hi[i] -= margin;
        }
    return b;
}

// ---------------------------------------------------------------- rng

Rng::Rng(uint64_t seed) : eng_(seed) {}

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<std::vector<double>> grid_points(const Box& box, const std::vector<int>& counts) {
    size_t d = box.dim();
    std::vector<std::vector<double>> pts;
    std::vector<int> idx(d, 0);
    for (;;) {
        std::vector<double> p(d);
        for (size_t i = 0; i < d; ++i) {
            int n = i < counts.size() ? std::max(1, counts[i]) : 1;
            p[i] = box.lo[i] + (idx[i] + 0.5) * (box.hi[i] - box.lo[i]) / n;
        }
        pts.push_back(p);
        size_t k = 0;
        for (; k < d; ++k) {
            int n = k < counts.size() ? std::max(1, counts[k]) : 1;
            if (++idx[k] < n) break;
            idx[k] = 0;
        }
        if (k == d) break;
    }
    return pts;
}

std::vector<std::vector<double>> random_points(const Box& box, int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> pts(n, std::vector<double>(box.dim()));
    for (auto& p : pts)
        for (size_t i = 0; i < box.dim(); ++i) p[i] = rng.uniform(box.lo[i], box.hi[i]);
    return pts;
}

// ---------------------------------------------------------------- dense helpers

void sym_eigen(const MatD& m, std::vector<double>& evals, MatD& evecs) {
    Eigen::MatrixXd A(m.r, m.c);
    for (int i = 0; i < m.r; ++i)
        for (int j = 0; j < m.c; ++j) A(i, j) = 0.5 * (m(i, j) + m(j, i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    evals.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.r);
    evecs = MatD(m.r, m.r);
    for (int i = 0; i < m.r; ++i)
        for (int j = 0; j < m.r; ++j) evecs(i, j) = es.eigenvectors()(i, j);
}

std::vector<double> singular_values(const MatD& m) {
    Eigen::MatrixXd A(m.r, m.c);
    for (int i = 0; i < m.r; ++i)
        for (int j = 0; j < m.c; ++j) A(i, j) = m(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    auto s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

// ---------------------------------------------------------------- manifold

ChartedManifold::ChartedManifold(std::vector<std::string> coords, std::vector<std::vector<Expr>> metric, Box domain)
    : coords_(std::move(coords)), metric_(std::move(metric)), domain_(std::move(domain)) {
    int n = dim();
    if (static_cast<int>(metric_.size()) != n) throw std::invalid_argument("metric must be dim x dim");
    for (auto& row : metric_)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("metric must be dim x dim");
    std::vector<Expr> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.push_back(metric_[i][j]);
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.push_back(differentiate(metric_[i][j], coords_[c]));
    first_ = std::make_shared<Program>(out, coords_);
    second_once_ = std::make_shared<std::once_flag>();
}

MatD ChartedManifold::metric_at(const std::vector<double>& x) const {
    int n = dim();
    std::vector<double> v;
    try {
        v = first_->run(x);
    } catch (const EvalError& e) {
        throw DegeneratePoint(e.what());
    }
    MatD g(n, n);
    for (int i = 0; i < n * n; ++i) g.a[i] = v[i];
    return g;
}

MetricPoint ChartedManifold::at(const std::vector<double>& x, bool curvature) const {
    int n = dim();
    MetricPoint p;
    p.n = n;
    std::vector<double> v;
    try {
        v = first_->run(x);
    } catch (const EvalError& e) {
        throw DegeneratePoint(e.what());
    }
    p.g = MatD(n, n);
    for (int i = 0; i < n * n; ++i) p.g.a[i] = v[i];
    p.dg.assign(n, MatD(n, n));
    for (int c = 0; c < n; ++c)
        for (int k = 0; k < n * n; ++k) p.dg[c].a[k] = v[n * n + c * n * n + k];

    auto sv = singular_values(p.g);
    if (sv.back() <= 0 || sv.front() / sv.back() < 1e-12 || sv.back() < 1e-10)
        throw DegeneratePoint("singular metric");
    p.ginv = inverse(p.g);

    // first kind: G_lij = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    p.gamma.assign(n, MatD(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0;
                for (int l = 0; l < n; ++l)
                    s += p.ginv(k, l) * 0.5 * (p.dg[i](j, l) + p.dg[j](i, l) - p.dg[l](i, j));
                p.gamma[k](i, j) = s;
                p.gamma[k](j, i) = s;
            }

    if (curvature) {
        std::call_once(*second_once_, [&] {
            std::vector<Expr> out;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            out.push_back(differentiate(differentiate(metric_[i][j], coords_[a]), coords_[b]));
            second_ = std::make_shared<Program>(out, coords_);
        });
        std::vector<double> w;
        try {
            w = second_->run(x);
        } catch (const EvalError& e) {
            throw DegeneratePoint(e.what());
        }
        auto d2g = [&](int a, int b, int i, int j) { return w[((a * n + b) * n + i) * n + j]; };
        // d_l g^{kp} = -g^{ka} d_l g_ab g^{bp}
        std::vector<MatD> dginv(n);
        for (int l = 0; l < n; ++l) dginv[l] = -(p.ginv * p.dg[l] * p.ginv);
        p.dgamma.assign(n * n, MatD(n, n));
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        double s = 0;
                        for (int q = 0; q < n; ++q) {
                            double first = 0.5 * (p.dg[i](j, q) + p.dg[j](i, q) - p.dg[q](i, j));
                            double second = 0.5 * (d2g(l, i, j, q) + d2g(l, j, i, q) - d2g(l, q, i, j));
                            s += dginv[l](k, q) * first + p.ginv(k, q) * second;
                        }
                        p.dgamma[l * n + k](i, j) = s;
                        p.dgamma[l * n + k](j, i) = s;
                    }
    }
    return p;
}

MatD MetricPoint::Gamma(const MatD& X, const MatD& Y) const {
    MatD r(n, 1);
    for (int k = 0; k < n; ++k) r[k] = inner(X, gamma[k], Y);
    return r;
}

MatD MetricPoint::R(const MatD& X, const MatD& Y, const MatD& Z) const {
    if (dgamma.empty()) throw std::logic_error("curvature data not requested");
    // R^k_{lij} = d_i G^k_jl - d_j G^k_il + G^k_ip G^p_jl - G^k_jp G^p_il  (R(d_i,d_j)d_l)
    MatD out(n, 1);
    for (int i = 0; i < n; ++i) {
        if (X[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            double xy = X[i] * Y[j];
            if (xy == 0) continue;
            for (int l = 0; l < n; ++l) {
                if (Z[l] == 0) continue;
                double w = xy * Z[l];
                for (int k = 0; k < n; ++k) {
                    double s = dgamma[i * n + k](j, l) - dgamma[j * n + k](i, l);
                    for (int q = 0; q < n; ++q) s += gamma[k](i, q) * gamma[q](j, l) - gamma[k](j, q) * gamma[q](i, l);
                    out[k] += w * s;
                }
            }
        }
    }
    return out;
}

double MetricPoint::sectional(const MatD& X, const MatD& Y) const {
    double gram = ip(X, X) * ip(Y, Y) - ip(X, Y) * ip(X, Y);
    if (gram < 1e-12) throw DegeneratePoint("degenerate plane");
    return ip(R(X, Y, Y), X) / gram;
}

ChristoffelData christoffel(const ChartedManifold& M, const std::vector<double>& x) {
    auto p = M.at(x);
    return {x, p.gamma};
}

MatD cov_deriv(const ChartedManifold& M, const std::vector<Expr>& X, const std::vector<Expr>& Y,
               const std::vector<double>& x) {
    int n = M.dim();
    std::vector<Expr> out;
    for (auto& e : X) out.push_back(e);
    for (auto& e : Y) out.push_back(e);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) out.push_back(differentiate(Y[k], M.coords()[i]));
    Program prog(out, M.coords());
    std::vector<double> v;
    try {
        v = prog.run(x);
    } catch (const EvalError& e) {
        throw DegeneratePoint(e.what());
    }
    MatD Xv(n, 1), Yv(n, 1);
    for (int i = 0; i < n; ++i) {
        Xv[i] = v[i];
        Yv[i] = v[n + i];
    }
    auto p = M.at(x);
    MatD r = p.Gamma(Xv, Yv);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) r[k] += Xv[i] * v[2 * n + k * n + i];
    return r;
}

double sectional_curvature(const ChartedManifold& M, const std::vector<double>& x, const MatD& X, const MatD& Y) {
    return M.at(x, true).sectional(X, Y);
}

double metric_compatibility_residual(const MetricPoint& p) {
    int n = p.n;
    double worst = 0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int l = 0; l < n; ++l) s += p.gamma[l](k, i) * p.g(l, j) + p.gamma[l](k, j) * p.g(i, l);
                worst = std::fmax(worst, std::fabs(p.dg[k](i, j) - s));
            }
    return worst;
}

double bianchi_residual(const MetricPoint& p) {
    int n = p.n;
    double worst = 0;
    auto e = [&](int i) {
        MatD v(n, 1);
        v[i] = 1;
        return v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                MatD s = p.R(e(i), e(j), e(l)) + p.R(e(j), e(l), e(i)) + p.R(e(l), e(i), e(j));
                worst = std::fmax(worst, max_abs(s));
            }
    return worst;
}

}  // namespace slantgeo
