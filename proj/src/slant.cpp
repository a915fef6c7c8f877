#include "slantgeo/slant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace slantgeo {

namespace {

MatD random_in(const FramedPoint& p, Rng& rng) {
    MatD c(p.Mp.c, 1);
    for (auto& v : c.a) v = rng.normal();
    return p.Mp * c;
}

MatD unit(const FramedPoint& p, MatD X) {
    double n = std::sqrt(p.gt(X, X));
    for (auto& v : X.a) v /= n;
    return X;
}

MatD F_of(const FramedPoint& p, const MatD& X) { return p.nor_part(p.amb.phi * p.push(X)); }

double tnorm(const FramedPoint& p, const MatD& X) { return std::sqrt(std::fmax(0.0, p.gt(X, X))); }
double anorm(const FramedPoint& p, const MatD& V) { return std::sqrt(std::fmax(0.0, p.ga(V, V))); }

double pfaffian(const MatD& A) {
    int n = A.r;
    if (n == 0) return 1;
    if (n % 2) return 0;
    double s = 0;
    for (int j = 1; j < n; ++j) {
        if (A(0, j) == 0) continue;
        MatD B(n - 2, n - 2);
        int bi = 0;
        for (int i = 1; i < n; ++i) {
            if (i == j) continue;
            int bk = 0;
            for (int k = 1; k < n; ++k) {
                if (k == j) continue;
                B(bi, bk++) = A(i, k);
            }
            ++bi;
        }
        s += (j % 2 ? 1.0 : -1.0) * A(0, j) * pfaffian(B);
    }
    return s;
}

}  // namespace

MatD restricted_T(const FramedPoint& p) { return p.Mp.t() * p.Gv() * values(p.T) * p.Mp; }

SlantSpectrum slant_spectrum(const FramedPoint& p, double tol) {
    int k = p.Mp.c;
    if (k == 0) throw std::domain_error("slant spectrum: M_p is zero-dimensional");
    SlantSpectrum r;
    r.u = p.u;
    r.xi_position = p.xi_position;
    MatD Q = restricted_T(p);
    MatD C = Q.t() * Q;
    MatD vecs;
    sym_eigen(C, r.eigenvalues, vecs);
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    r.spread = r.eigenvalues.back() - r.eigenvalues.front();
    if (r.spread >= tol) return r;
    // sin^2 from the parts of phi X leaving M_p, so small angles keep their precision
    MatD TB = values(p.T) * p.Mp;
    MatD FB = p.nor_part(p.amb.phi * p.push(p.Mp));
    MatD Sm = FB.t() * p.gv() * FB + TB.t() * p.Gv() * TB - C;
    double c = trace(C) / k, s = trace(Sm) / k;
    r.theta = std::atan2(std::sqrt(std::fmax(0.0, s)), std::sqrt(std::fmax(0.0, c)));
    return r;
}

SlantSpectrum slant_spectrum(const ACMStructure& S, const Immersion& imm, const std::vector<double>& u, double tol) {
    return slant_spectrum(FramedPoint(S, imm, u), tol);
}

SlantClassification classify_slant(const ACMStructure& S, const Immersion& imm,
                                   const std::vector<std::vector<double>>& points, double tol, double constancy_tol) {
    SlantClassification out;
    bool all_slant = true;
    double lo = INFINITY, hi = -INFINITY, sum = 0;
    for (auto& u : points) {
        try {
            auto s = slant_spectrum(S, imm, u, tol);
            if (s.theta) {
                lo = std::fmin(lo, *s.theta);
                hi = std::fmax(hi, *s.theta);
                sum += *s.theta;
            } else {
                all_slant = false;
            }
            out.samples.push_back(std::move(s));
        } catch (const DegeneratePoint&) {
            ++out.degenerate;
        }
    }
    if (out.samples.empty()) throw DegeneratePoint("classify_slant: no usable sample points");
    if (!all_slant) {
        out.label = "not-pointwise-slant";
        return out;
    }
    out.theta_min = lo;
    out.theta_max = hi;
    const double half_pi = std::numbers::pi / 2;
    if (hi < constancy_tol) {
        out.label = "invariant";
        out.theta0 = 0.0;
    } else if (lo > half_pi - constancy_tol) {
        out.label = "anti-invariant";
        out.theta0 = half_pi;
    } else if (hi - lo < constancy_tol) {
        out.theta0 = sum / out.samples.size();
        char buf[64];
        std::snprintf(buf, sizeof buf, "slant(%.10g)", *out.theta0);
        out.label = buf;
    } else {
        out.label = "pointwise-slant";
    }
    return out;
}

double orthogonality_residual(const FramedPoint& p, int trials, uint64_t seed) {
    if (p.Mp.c < 2) return 0;
    Rng rng(seed);
    MatD T = values(p.T);
    double worst = 0;
    for (int i = 0; i < trials; ++i) {
        MatD X = unit(p, random_in(p, rng));
        MatD Y = random_in(p, rng);
        double c = p.gt(X, Y);
        for (int a = 0; a < p.m; ++a) Y[a] -= c * X[a];
        Y = unit(p, Y);
        worst = std::fmax(worst, std::fabs(p.gt(T * X, T * Y)));
    }
    return worst;
}

AngleResiduals angle_residuals(const FramedPoint& p, double theta, int trials, uint64_t seed) {
    AngleResiduals r;
    if (p.Mp.c == 0) return r;
    Rng rng(seed);
    MatD T = values(p.T);
    double c2 = std::cos(theta) * std::cos(theta), s2 = std::sin(theta) * std::sin(theta);
    for (int i = 0; i < trials; ++i) {
        MatD X = unit(p, random_in(p, rng)), Y = unit(p, random_in(p, rng));
        double gxy = p.gt(X, Y);
        r.tangential = std::fmax(r.tangential, std::fabs(p.gt(T * X, T * Y) - c2 * gxy));
        r.normal = std::fmax(r.normal, std::fabs(p.ga(F_of(p, X), F_of(p, Y)) - s2 * gxy));
    }
    return r;
}

double omega(const FramedPoint& p, const MatD& X, const MatD& Y) { return p.gt(X, values(p.T) * Y); }

double d_omega_residual(const FramedPoint& p) {
    int m = p.m;
    MatJ W = p.G * p.T;
    double worst = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            for (int c = b + 1; c < m; ++c) {
                double d = W(b, c).d[a] - W(a, c).d[b] + W(a, b).d[c];
                worst = std::fmax(worst, std::fabs(d));
            }
    return worst;
}

double volume_form_coefficient(const FramedPoint& p) {
    if (p.xi_position != XiPosition::Tangent) throw std::domain_error("volume form: xi is not tangent");
    int k = p.Mp.c;
    if (k % 2) throw std::domain_error("volume form: M_p has odd dimension");
    MatD exi = unit(p, values(p.xi_t));
    double eta = (p.amb.eta * p.push(exi))[0];
    double fact = 1;
    for (int i = 2; i <= k / 2; ++i) fact *= i;
    return eta * fact * pfaffian(restricted_T(p));
}

double conformal_invariance_residual(const ACMStructure& S, const Immersion& imm, const Expr& f,
                                     const std::vector<std::vector<double>>& samples, double tol) {
    ACMStructure C = S.conformal(f);
    double worst = 0;
    for (auto& u : samples) {
        std::optional<double> a, b;
        try {
            a = slant_spectrum(S, imm, u, tol).theta;
            b = slant_spectrum(C, imm, u, tol).theta;
        } catch (const DegeneratePoint&) {
            continue;
        }
        if (a.has_value() != b.has_value()) return INFINITY;
        if (a) worst = std::fmax(worst, std::fabs(*a - *b));
    }
    return worst;
}

double ar_relation_residual(const FramedPoint& p, int trials, uint64_t seed) {
    if (p.Mp.c == 0) return 0;
    Rng rng(seed);
    MatD T = values(p.T);
    double worst = 0;
    for (int i = 0; i < trials; ++i) {
        MatD X = unit(p, random_in(p, rng));
        MatD TX = T * X;
        MatD d = p.A(F_of(p, X), TX) - p.A(F_of(p, TX), X);
        worst = std::fmax(worst, tnorm(p, d));
    }
    return worst;
}

double ParallelResiduals::max() const { return std::fmax(std::fmax(nabla_T, D_F), std::fmax(t_part, f_part)); }

ParallelResiduals parallel_tensor_residuals(const FramedPoint& p) {
    ParallelResiduals r;
    int m = p.m, q = p.N - p.m;
    MatD T = values(p.T), phi = p.amb.phi;
    for (int a = 0; a < m; ++a) {
        MatD X(m, 1);
        X[a] = 1;
        for (int b = 0; b < m; ++b) {
            MatD Yv(m, 1);
            Yv[b] = 1;
            MatJ Y = lift(Yv);
            MatD hXY = p.h(X, Yv);
            MatD l1 = p.nabla(X, p.Tof(Y)) - T * p.nabla(X, Y);
            MatD r1 = p.A(F_of(p, Yv), X) + p.tan_part(phi * hXY);
            r.nabla_T = std::fmax(r.nabla_T, tnorm(p, l1 - r1));
            MatD l2 = p.D(X, p.Fof(Y)) - F_of(p, p.nabla(X, Y));
            MatD r2 = -p.h(X, T * Yv) + p.nor_part(phi * hXY);
            r.D_F = std::fmax(r.D_F, anorm(p, l2 - r2));
        }
        for (int al = 0; al < q; ++al) {
            MatJ Z = p.Nj.col(al);
            MatD Zv = values(Z);
            MatD AZ = p.A(Zv, X), DZ = p.D(X, Z);
            MatD l3 = -(T * AZ) + p.tan_part(phi * DZ);
            MatD r3 = p.nabla(X, p.tof(Z)) - p.A(p.nor_part(phi * Zv), X);
            r.t_part = std::fmax(r.t_part, tnorm(p, l3 - r3));
            MatD l4 = -F_of(p, AZ) + p.nor_part(phi * DZ);
            MatD r4 = p.h(X, values(p.tof(Z))) + p.D(X, p.fof(Z));
            r.f_part = std::fmax(r.f_part, anorm(p, l4 - r4));
        }
    }
    return r;
}

}  // namespace slantgeo
