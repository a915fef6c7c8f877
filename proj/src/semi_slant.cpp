#include "slantgeo/semi_slant.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace slantgeo {

namespace {

MatD cols(int rows, const std::vector<MatD>& vs) {
    MatD M(rows, static_cast<int>(vs.size()));
    for (size_t i = 0; i < vs.size(); ++i) M.set_col(static_cast<int>(i), vs[i]);
    return M;
}

// greedy Gram-Schmidt in the metric g, dropping vectors whose residual is below rel * |v|
std::vector<MatD> orthonormalize(const std::vector<MatD>& vs, const MatD& g, double rel,
                                 std::vector<MatD> out = {}) {
    size_t keep = out.size();
    for (auto v : vs) {
        double n0 = std::sqrt(std::fmax(0.0, inner(v, g, v)));
        for (auto& w : out) {
            double c = inner(w, g, v);
            for (int i = 0; i < v.r; ++i) v[i] -= c * w[i];
        }
        double n = std::sqrt(std::fmax(0.0, inner(v, g, v)));
        if (n0 == 0 || n < rel * n0) continue;
        for (auto& z : v.a) z /= n;
        out.push_back(v);
    }
    return std::vector<MatD>(out.begin() + keep, out.end());
}

double tnorm(const FramedPoint& p, const MatD& X) { return std::sqrt(std::fmax(0.0, p.gt(X, X))); }
double anorm(const FramedPoint& p, const MatD& V) { return std::sqrt(std::fmax(0.0, p.ga(V, V))); }
MatD F_of(const FramedPoint& p, const MatD& X) { return p.nor_part(p.amb.phi * p.push(X)); }

}  // namespace

const char* to_string(SplitStatus s) {
    switch (s) {
        case SplitStatus::Ok: return "ok";
        case SplitStatus::Invariant: return "invariant";
        case SplitStatus::NotSemiSlant: return "not-pointwise-semi-slant";
        case SplitStatus::Indeterminate: return "indeterminate";
        case SplitStatus::Boundary: return "boundary";
        case SplitStatus::Oblique: return "oblique";
    }
    return "?";
}

SemiSlantSplit split_distributions(const FramedPoint& p, double cluster_tol) {
    SemiSlantSplit s;
    s.u = p.u;
    s.xi_position = p.xi_position;
    int m = p.m;
    s.D1 = s.D2 = MatD(m, 0);
    s.FD2 = s.mu = MatD(p.N, 0);
    s.P = s.Q = MatD(m, m);
    if (p.xi_position == XiPosition::Oblique) return s;

    MatD Tv = values(p.T);
    MatD Qm = p.Mp.t() * p.Gv() * Tv * p.Mp;
    MatD V;
    sym_eigen(Qm.t() * Qm, s.eigenvalues, V);
    int k = static_cast<int>(s.eigenvalues.size());

    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < k; ++i) {
        if (i == 0 || s.eigenvalues[i] - s.eigenvalues[i - 1] > cluster_tol) clusters.emplace_back();
        clusters.back().push_back(i);
    }
    for (auto& c : clusters) {
        double mean = 0;
        for (int i : c) mean += s.eigenvalues[i];
        s.cluster_means.push_back(mean / c.size());
    }
    int nc = static_cast<int>(clusters.size());
    int one = (nc > 0 && std::fabs(s.cluster_means.back() - 1) <= cluster_tol) ? nc - 1 : -1;
    int other = -1, n_other = 0;
    for (int c = 0; c < nc; ++c)
        if (c != one) {
            other = c;
            ++n_other;
        }

    std::vector<MatD> d1;
    if (p.xi_position == XiPosition::Tangent) {
        MatD e = values(p.xi_t);
        double n = tnorm(p, e);
        for (auto& z : e.a) z /= n;
        d1.push_back(e);
    }
    if (one >= 0)
        for (int i : clusters[one]) d1.push_back(p.Mp * V.col(i));
    std::vector<MatD> d2;
    if (other >= 0 && n_other == 1)
        for (int i : clusters[other]) d2.push_back(p.Mp * V.col(i));
    s.D1 = cols(m, d1);
    s.D2 = cols(m, d2);

    for (int c = 1; c < nc; ++c)
        if (s.cluster_means[c] - s.cluster_means[c - 1] < 10 * cluster_tol) s.status = SplitStatus::Indeterminate;
    if (s.status == SplitStatus::Indeterminate) return s;
    if (n_other >= 2) {
        s.status = SplitStatus::NotSemiSlant;
        return s;
    }
    if (n_other == 0) {
        s.status = SplitStatus::Invariant;
        s.theta = 0.0;
        s.P = MatD::identity(m);
        return s;
    }

    double lam = s.cluster_means[other];
    bool at_zero = lam <= cluster_tol;
    s.status = SplitStatus::Ok;
    if ((!at_zero && lam < 10 * cluster_tol) || (lam > 1 - 10 * cluster_tol)) s.status = SplitStatus::Boundary;
    if (at_zero) {
        s.theta = std::numbers::pi / 2;
    } else {
        double c = 0, sn = 0;
        for (auto& X : d2) {
            MatD TX = Tv * X;
            c += p.gt(TX, TX);
            MatD FX = F_of(p, X);
            sn += p.ga(FX, FX);
        }
        s.theta = std::atan2(std::sqrt(sn), std::sqrt(c));
    }
    int d1_plain = static_cast<int>(d1.size()) - (p.xi_position == XiPosition::Tangent ? 1 : 0);
    s.proper = s.status == SplitStatus::Ok && d1_plain > 0 && !d2.empty() && !at_zero;

    std::vector<MatD> fd2;
    for (auto& X : d2) fd2.push_back(F_of(p, X));
    fd2 = orthonormalize(fd2, p.gv(), 1e-6);
    s.FD2 = cols(p.N, fd2);
    std::vector<MatD> nf;
    MatD Nv = p.normal_frame();
    for (int i = 0; i < Nv.c; ++i) nf.push_back(Nv.col(i));
    s.mu = cols(p.N, orthonormalize(nf, p.gv(), 1e-6, fd2));

    MatD G = p.Gv();
    s.P = s.D1 * s.D1.t() * G;
    s.Q = s.D2 * s.D2.t() * G;
    return s;
}

SemiSlantSplit split_distributions(const ACMStructure& S, const Immersion& imm, const std::vector<double>& u,
                                   double cluster_tol) {
    return split_distributions(FramedPoint(S, imm, u), cluster_tol);
}

MatJ projector_jet(const FramedPoint& p, const SemiSlantSplit& s) {
    if (!s.ok() || s.D2.c == 0) throw std::domain_error("projector jet needs a split with nontrivial D2");
    int m = p.m;
    MatJ Sp = -(p.T * p.T) + p.xi_t * (p.xi_t.t() * p.G);
    Jet c = (trace(Sp) - Jet(static_cast<double>(s.D1.c))) / Jet(static_cast<double>(s.D2.c));
    Jet den = Jet(1.0) - c;
    MatJ P(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) P(i, j) = (Sp(i, j) - (i == j ? c : Jet(0.0))) / den;
    return P;
}

std::optional<double> mu_invariance_residual(const FramedPoint& p, const SemiSlantSplit& s, double tol) {
    auto eta_max = [&](const MatD& B, bool tangent) {
        double w = 0;
        for (int i = 0; i < B.c; ++i) {
            MatD v = tangent ? p.push(B.col(i)) : B.col(i);
            w = std::fmax(w, std::fabs((p.amb.eta * v)[0]));
        }
        return w;
    };
    if (eta_max(s.D2, true) > tol && eta_max(s.mu, false) > tol) return std::nullopt;
    double worst = 0;
    for (int i = 0; i < s.mu.c; ++i) {
        MatD W = p.amb.phi * s.mu.col(i);
        for (int j = 0; j < s.mu.c; ++j) {
            double c = p.ga(s.mu.col(j), W);
            for (int k = 0; k < p.N; ++k) W[k] -= c * s.mu(k, j);
        }
        worst = std::fmax(worst, anorm(p, W));
    }
    return worst;
}

double SemiSlantResiduals::max() const {
    double r = block.max();
    for (double v : {T_D1, F_D1, T_D2, t_nor, T2_D2, orth}) r = std::fmax(r, v);
    return r;
}

SemiSlantResiduals semi_slant_identities(const FramedPoint& p, const SemiSlantSplit& s) {
    SemiSlantResiduals r;
    r.block = block_identities(p.operators());
    if (s.status != SplitStatus::Ok && s.status != SplitStatus::Invariant && s.status != SplitStatus::Boundary)
        return r;
    MatD Tv = values(p.T);
    for (int i = 0; i < s.D1.c; ++i) {
        MatD X = s.D1.col(i);
        r.T_D1 = std::fmax(r.T_D1, tnorm(p, s.Q * (Tv * X)));
        r.F_D1 = std::fmax(r.F_D1, anorm(p, F_of(p, X)));
    }
    double c2 = s.theta ? std::cos(*s.theta) * std::cos(*s.theta) : 0;
    for (int i = 0; i < s.D2.c; ++i) {
        MatD X = s.D2.col(i);
        r.T_D2 = std::fmax(r.T_D2, tnorm(p, s.P * (Tv * X)));
        MatD R = Tv * (Tv * X);
        for (int a = 0; a < p.m; ++a) R[a] += c2 * X[a];
        r.T2_D2 = std::fmax(r.T2_D2, tnorm(p, R));
        for (int j = 0; j < s.D1.c; ++j) r.orth = std::fmax(r.orth, std::fabs(p.gt(X, s.D1.col(j))));
    }
    MatD Nv = p.normal_frame();
    for (int i = 0; i < Nv.c; ++i)
        r.t_nor = std::fmax(r.t_nor, tnorm(p, s.P * p.tan_part(p.amb.phi * Nv.col(i))));
    for (int i = 0; i < s.FD2.c; ++i)
        for (int j = 0; j < s.mu.c; ++j) r.orth = std::fmax(r.orth, std::fabs(p.ga(s.FD2.col(i), s.mu.col(j))));
    return r;
}

SemiSlantField semi_slant_function(const ACMStructure& S, const Immersion& imm,
                                   const std::vector<std::vector<double>>& points, double cluster_tol,
                                   double constancy_tol) {
    SemiSlantField out;
    bool not_ss = false, unsure = false, all_inv = true;
    double lo = INFINITY, hi = -INFINITY, sum = 0;
    int n_theta = 0;
    for (auto& u : points) {
        try {
            FramedPoint fp(S, imm, u);
            out.samples.push_back(split_distributions(fp, cluster_tol));
        } catch (const DegeneratePoint&) {
            ++out.degenerate;
            continue;
        }
        auto& s = out.samples.back();
        auto& first = out.samples.front();
        if (s.xi_position != first.xi_position) out.xi_dichotomy_consistent = false;
        switch (s.status) {
            case SplitStatus::NotSemiSlant: not_ss = true; break;
            case SplitStatus::Indeterminate:
            case SplitStatus::Boundary:
            case SplitStatus::Oblique: unsure = true; break;
            case SplitStatus::Invariant: break;
            case SplitStatus::Ok:
                all_inv = false;
                lo = std::fmin(lo, *s.theta);
                hi = std::fmax(hi, *s.theta);
                sum += *s.theta;
                ++n_theta;
                break;
        }
        if (s.status == SplitStatus::Ok || s.status == SplitStatus::Invariant)
            for (auto& t : out.samples)
                if ((t.status == SplitStatus::Ok || t.status == SplitStatus::Invariant) &&
                    (t.D1.c != s.D1.c || t.D2.c != s.D2.c))
                    out.dims_consistent = false;
    }
    if (out.samples.empty()) throw DegeneratePoint("semi_slant_function: no usable sample points");
    if (not_ss) {
        out.label = "not-pointwise-semi-slant";
    } else if (unsure) {
        out.label = "mixed";
    } else if (all_inv) {
        out.label = "invariant";
    } else if (!out.dims_consistent) {
        out.label = "mixed";
    } else if (hi - lo < constancy_tol) {
        out.theta0 = sum / n_theta;
        char buf[64];
        std::snprintf(buf, sizeof buf, "semi-slant(%.10g)", *out.theta0);
        out.label = buf;
    } else {
        out.label = "pointwise-semi-slant";
    }
    return out;
}

}  // namespace slantgeo
