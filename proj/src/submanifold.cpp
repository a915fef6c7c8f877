#include "slantgeo/submanifold.hpp"

#include <cmath>

namespace slantgeo {

Immersion::Immersion(std::vector<std::string> params, Box domain, std::vector<Expr> map)
    : params_(std::move(params)), domain_(std::move(domain)), map_(std::move(map)) {
    int m = dim(), N = ambient_dim();
    if (m < 1 || m > kJetDim) throw std::invalid_argument("immersion dimension must be between 1 and 8");
    if (static_cast<int>(domain_.dim()) != m) throw std::invalid_argument("domain box does not match parameters");
    if (m > N) throw std::invalid_argument("immersion has more parameters than ambient dimensions");
    std::vector<Expr> out = map_;
    std::vector<std::vector<Expr>> first(m);
    for (int a = 0; a < m; ++a)
        for (int k = 0; k < N; ++k) {
            first[a].push_back(differentiate(map_[k], params_[a]));
            out.push_back(first[a].back());
        }
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b)
            for (int k = 0; k < N; ++k) out.push_back(differentiate(first[a][k], params_[b]));
    prog_ = std::make_shared<Program>(out, params_);
}

Immersion::Values Immersion::eval(const std::vector<double>& u) const {
    int m = dim(), N = ambient_dim();
    std::vector<double> v;
    try {
        v = prog_->run(u);
    } catch (const EvalError& e) {
        throw DegeneratePoint(e.what());
    }
    Values r;
    r.x.assign(v.begin(), v.begin() + N);
    size_t o = N;
    r.J = MatD(N, m);
    for (int a = 0; a < m; ++a)
        for (int k = 0; k < N; ++k) r.J(k, a) = v[o++];
    r.d2.assign(static_cast<size_t>(m) * m, MatD(N, 1));
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            for (int k = 0; k < N; ++k) r.d2[a * m + b][k] = v[o + k];
            r.d2[b * m + a] = r.d2[a * m + b];
            o += N;
        }
    return r;
}

std::vector<std::vector<Expr>> induced_metric(const ACMStructure& S, const Immersion& imm) {
    int m = imm.dim(), N = imm.ambient_dim();
    if (N != S.dim()) throw std::invalid_argument("immersion target dimension does not match the ambient");
    std::map<std::string, Expr> sub;
    for (int k = 0; k < N; ++k) sub[S.coords()[k]] = imm.map()[k];
    std::vector<std::vector<Expr>> gi(N, std::vector<Expr>(N));
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) gi[k][l] = substitute(S.manifold().metric()[k][l], sub);
    std::vector<std::vector<Expr>> d(m, std::vector<Expr>(N));
    for (int a = 0; a < m; ++a)
        for (int k = 0; k < N; ++k) d[a][k] = differentiate(imm.map()[k], imm.params()[a]);
    std::vector<std::vector<Expr>> G(m, std::vector<Expr>(m));
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            Expr s(0.0);
            for (int k = 0; k < N; ++k) {
                if (d[a][k].is_const(0)) continue;
                for (int l = 0; l < N; ++l) s = s + d[a][k] * gi[k][l] * d[b][l];
            }
            G[a][b] = G[b][a] = s;
        }
    return G;
}

ChartedManifold induced_manifold(const ACMStructure& S, const Immersion& imm) {
    return ChartedManifold(imm.params(), induced_metric(S, imm), imm.domain());
}

const char* to_string(XiPosition p) {
    switch (p) {
        case XiPosition::Tangent: return "tangent";
        case XiPosition::Normal: return "normal";
        default: return "oblique";
    }
}

namespace {

// Jet of an ambient field along the parameters from its chart partials.
MatJ along(const MatD& val, const std::vector<MatD>& d, const MatD& J) {
    MatJ r(val.r, val.c);
    int N = J.r, m = J.c;
    for (size_t i = 0; i < val.a.size(); ++i) {
        r.a[i].v = val.a[i];
        for (int b = 0; b < m; ++b) {
            double s = 0;
            for (int c = 0; c < N; ++c) s += d[c].a[i] * J(c, b);
            r.a[i].d[b] = s;
        }
    }
    return r;
}

MatJ unit(int n, int i) {
    MatJ v(n, 1);
    v[i] = Jet(1.0);
    return v;
}

}  // namespace

FramedPoint::FramedPoint(const ACMStructure& S, const Immersion& imm, const std::vector<double>& u_, Tolerances tol,
                         bool curvature)
    : u(u_) {
    auto v = imm.eval(u);
    x = v.x;
    amb = S.at(x, curvature);
    m = imm.dim();
    N = imm.ambient_dim();

    J = MatJ(N, m);
    for (int k = 0; k < N; ++k)
        for (int a = 0; a < m; ++a) {
            J(k, a).v = v.J(k, a);
            for (int b = 0; b < m; ++b) J(k, a).d[b] = v.d2[a * m + b][k];
        }
    g = along(amb.m.g, amb.m.dg, v.J);
    phi = along(amb.phi, amb.dphi, v.J);
    xi = along(amb.xi, amb.dxi, v.J);

    MatJ Jt = J.t();
    G = Jt * g * J;
    Gv_ = values(G);
    std::vector<double> ev;
    MatD evec;
    sym_eigen(Gv_, ev, evec);
    if (!(ev[0] > tol.rank * tol.rank)) throw RankError("Jacobian rank deficiency");
    Ginv = inverse(G);
    Ptan = Ginv * Jt * g;
    Pn = MatJ::identity(N) - J * Ptan;
    T = Ptan * phi * J;
    xi_t = Ptan * xi;
    xi_n = Pn * xi;
    Jv_ = values(J);
    Ptanv_ = values(Ptan);
    Pnv_ = values(Pn);

    std::vector<MatJ> basis;
    for (int a = 0; a < m; ++a) basis.push_back(unit(m, a));
    auto ef = gram_schmidt(basis, G);
    Ej = MatJ(m, m);
    for (int a = 0; a < m; ++a) Ej.set_col(a, ef[a]);

    // normal frame: projected coordinate vectors in coordinate order, skipping
    // those that are (numerically) tangent
    const MatD& gv = amb.m.g;
    std::vector<MatJ> cand;
    std::vector<MatD> accepted;
    for (int k = 0; k < N && static_cast<int>(cand.size()) < N - m; ++k) {
        MatJ c = Pn * unit(N, k);
        MatD r = values(c);
        for (auto& w : accepted) {
            double p = inner(w, gv, r);
            for (int i = 0; i < N; ++i) r[i] -= p * w[i];
        }
        double nr = std::sqrt(std::fmax(0.0, inner(r, gv, r)));
        double ne = std::sqrt(gv(k, k));
        if (nr <= 1e-3 * ne) continue;
        for (int i = 0; i < N; ++i) r[i] /= nr;
        accepted.push_back(r);
        cand.push_back(c);
    }
    if (static_cast<int>(cand.size()) != N - m) throw RankError("normal frame construction failed");
    Nj = MatJ(N, N - m);
    if (N > m) {
        auto nf = gram_schmidt(cand, g);
        for (int i = 0; i < N - m; ++i) Nj.set_col(i, nf[i]);
    }

    h_.resize(static_cast<size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            MatD acc = v.d2[a * m + b] + amb.m.Gamma(v.J.col(a), v.J.col(b));
            h_[a * m + b] = Pnv_ * acc;
        }

    MatD xt = values(xi_t), xn = values(xi_n);
    double nt = std::sqrt(std::fmax(0.0, inner(xt, Gv_, xt)));
    double nn = std::sqrt(std::fmax(0.0, inner(xn, gv, xn)));
    if (nn < tol.xi_position)
        xi_position = XiPosition::Tangent;
    else if (nt < tol.xi_position)
        xi_position = XiPosition::Normal;
    else
        xi_position = XiPosition::Oblique;

    MatD Ev = values(Ej);
    if (xi_position == XiPosition::Normal) {
        Mp = Ev;
    } else {
        // orthogonal complement of xi_t in T_pM
        std::vector<MatD> out;
        MatD first = xt;
        for (auto& e : first.a) e /= nt;
        out.push_back(first);
        for (int a = 0; a < m && static_cast<int>(out.size()) < m; ++a) {
            MatD r = Ev.col(a);
            for (auto& w : out) {
                double p = inner(w, Gv_, r);
                for (int i = 0; i < m; ++i) r[i] -= p * w[i];
            }
            double nr = std::sqrt(std::fmax(0.0, inner(r, Gv_, r)));
            if (nr < 1e-6) continue;
            for (auto& e : r.a) e /= nr;
            out.push_back(r);
        }
        Mp = MatD(m, m - 1);
        for (int i = 1; i < m; ++i) Mp.set_col(i - 1, out[i]);
    }
}

MatD FramedPoint::h(const MatD& X, const MatD& Y) const {
    MatD r(N, 1);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double c = X[a] * Y[b];
            if (c == 0) continue;
            const MatD& v = h_[a * m + b];
            for (int k = 0; k < N; ++k) r[k] += c * v[k];
        }
    return r;
}

FundamentalForms FramedPoint::forms() const {
    FundamentalForms f;
    MatD Ev = E(), nf = normal_frame();
    f.H = MatD(N, 1);
    f.h.assign(N - m, MatD(m, m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            MatD hv = h(Ev.col(a), Ev.col(b));
            for (int al = 0; al < N - m; ++al) {
                double c = ga(hv, nf.col(al));
                f.h[al](a, b) = c;
                f.h_norm2 += c * c;
            }
            if (a == b) f.H = f.H + hv;
        }
    for (auto& v : f.H.a) v /= m;
    return f;
}

MatD FramedPoint::A(const MatD& Z, const MatD& X) const {
    MatD zt = tan_part(Z);
    if (std::sqrt(std::fmax(0.0, gt(zt, zt))) > 1e-8) throw std::invalid_argument("shape operator: vector is not normal");
    MatD w(m, 1);
    for (int b = 0; b < m; ++b) {
        MatD eb(m, 1);
        eb[b] = 1;
        w[b] = ga(h(X, eb), Z);
    }
    return values(Ginv) * w;
}

MatD FramedPoint::dir(const MatJ& V, const MatD& X) {
    MatD r(V.r, V.c);
    for (size_t i = 0; i < V.a.size(); ++i) {
        double s = 0;
        for (int a = 0; a < X.r; ++a) s += X[a] * V.a[i].d[a];
        r.a[i] = s;
    }
    return r;
}

MatD FramedPoint::nabla_bar(const MatD& X, const MatJ& V) const {
    return dir(V, X) + amb.m.Gamma(Jv_ * X, values(V));
}

MatD FramedPoint::A_weingarten(const MatJ& Z, const MatD& X) const { return -(Ptanv_ * nabla_bar(X, Z)); }

MatD FramedPoint::nabla(const MatD& X, const MatJ& Y) const { return Ptanv_ * nabla_bar(X, J * Y); }

MatD FramedPoint::D(const MatD& X, const MatJ& Z) const { return Pnv_ * nabla_bar(X, Z); }

MatJ FramedPoint::normal_field(const std::vector<double>& coeffs) const {
    MatJ Z(N, 1);
    for (int al = 0; al < N - m && al < static_cast<int>(coeffs.size()); ++al)
        if (coeffs[al] != 0) Z = Z + Jet(coeffs[al]) * Nj.col(al);
    return Z;
}

TangentOperators FramedPoint::operators() const {
    TangentOperators op;
    MatD te = tangent_frame(), nf = normal_frame();
    const MatD& gv = amb.m.g;
    MatD gphi = gv * amb.phi;
    op.T = te.t() * gphi * te;
    op.F = nf.t() * gphi * te;
    op.t = te.t() * gphi * nf;
    op.f = nf.t() * gphi * nf;
    op.xi_t = te.t() * gv * amb.xi;
    op.xi_n = nf.t() * gv * amb.xi;
    return op;
}

double BlockResiduals::max() const { return std::fmax(std::fmax(TT_tF, FT_fF), std::fmax(Tt_tf, Ft_ff)); }

BlockResiduals block_identities(const TangentOperators& op) {
    BlockResiduals r;
    int m = op.T.r, q = op.f.r;
    MatD a = op.xi_t, b = op.xi_n;
    r.TT_tF = max_abs(op.T * op.T + op.t * op.F + MatD::identity(m) - a * a.t());
    if (q > 0) {
        r.FT_fF = max_abs(op.F * op.T + op.f * op.F - b * a.t());
        r.Tt_tf = max_abs(op.T * op.t + op.t * op.f - a * b.t());
        r.Ft_ff = max_abs(op.F * op.t + op.f * op.f + MatD::identity(q) - b * b.t());
    }
    return r;
}

}  // namespace slantgeo
