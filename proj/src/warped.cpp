#include "slantgeo/warped.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace slantgeo {

namespace {

std::vector<int> indices(const std::vector<std::string>& params, const std::vector<std::string>& names) {
    std::vector<int> out;
    for (const auto& n : names) {
        auto it = std::find(params.begin(), params.end(), n);
        if (it == params.end()) throw std::invalid_argument("warped: unknown parameter '" + n + "'");
        out.push_back(static_cast<int>(it - params.begin()));
    }
    return out;
}

MatD unit_vec(int m, int i) {
    MatD v(m, 1);
    v[i] = 1;
    return v;
}

std::vector<MatD> block_frame(const std::vector<int>& idx, int m, const MatD& G) {
    std::vector<MatD> vs;
    for (int i : idx) vs.push_back(unit_vec(m, i));
    return gram_schmidt(vs, G);
}

std::vector<MatD> columns(const MatD& M) {
    std::vector<MatD> out;
    for (int j = 0; j < M.c; ++j) out.push_back(M.col(j));
    return out;
}

double tnorm(const FramedPoint& p, const MatD& X) { return std::sqrt(std::fmax(0.0, p.gt(X, X))); }

MatD F_of(const FramedPoint& p, const MatD& X) { return p.nor_part(p.amb.phi * p.push(X)); }

double dot_d(const MatD& d, const MatD& X) {
    double s = 0;
    for (int i = 0; i < X.r; ++i) s += d[i] * X[i];
    return s;
}

// largest entry of v on the given coordinates relative to its G-norm
double block_weight(const MatD& v, const std::vector<int>& idx) {
    double r = 0;
    for (int i : idx) r = std::fmax(r, std::fabs(v[i]));
    return r;
}

}  // namespace

WarpedImmersion::WarpedImmersion(const ACMStructure& S, Immersion imm, const std::vector<std::string>& base,
                                 const std::vector<std::string>& fiber, std::optional<Expr> declared_f)
    : imm_(std::move(imm)), declared_(std::move(declared_f)) {
    base_ = indices(imm_.params(), base);
    fiber_ = indices(imm_.params(), fiber);
    std::set<int> all(base_.begin(), base_.end());
    all.insert(fiber_.begin(), fiber_.end());
    if (base_.empty() || fiber_.empty() || static_cast<int>(all.size()) != imm_.dim() ||
        base_.size() + fiber_.size() != all.size())
        throw std::invalid_argument("warped: base and fiber must partition the parameters");

    G_ = induced_metric(S, imm_);
    Expr tr;
    for (int i : fiber_) tr = tr + G_[i][i];
    std::map<std::string, Expr> anchor;
    auto c = imm_.domain().center();
    for (int b : base_) anchor[imm_.params()[b]] = Expr(c[b]);
    Expr tr0 = substitute(tr, anchor);
    lnf_ = Expr(0.5) * log(tr) - Expr(0.5) * log(tr0);

    int m = imm_.dim();
    std::vector<Expr> outs{lnf_};
    std::vector<Expr> d1;
    for (int a = 0; a < m; ++a) d1.push_back(differentiate(lnf_, imm_.params()[a]));
    outs.insert(outs.end(), d1.begin(), d1.end());
    for (int a : base_)
        for (int b : base_) outs.push_back(differentiate(d1[a], imm_.params()[b]));
    prog_ = std::make_shared<Program>(outs, imm_.params());
    induced_ = ChartedManifold(imm_.params(), G_, imm_.domain());
}

WarpedImmersion::LnF WarpedImmersion::eval_ln_f(const std::vector<double>& u) const {
    auto v = prog_->run(u);
    int m = imm_.dim();
    LnF r;
    r.value = v[0];
    r.f = std::exp(r.value);
    r.d = MatD(m, 1);
    for (int a = 0; a < m; ++a) r.d[a] = v[1 + a];
    r.hess = MatD(m, m);
    size_t k = 1 + m;
    for (int a : base_)
        for (int b : base_) r.hess(a, b) = r.f * (v[k++] + r.d[a] * r.d[b]);
    return r;
}

WarpExtraction extract_warping(const ACMStructure& S, const WarpedImmersion& W,
                               const std::vector<std::vector<double>>& samples, double cross_tol, double ratio_tol) {
    (void)S;
    WarpExtraction out;
    const auto& base = W.base();
    const auto& fiber = W.fiber();
    int k = W.m2();
    auto anchor = W.immersion().domain().center();
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& u : samples) {
        MatD G, G0;
        WarpedImmersion::LnF L;
        try {
            G = W.induced().metric_at(u);
            auto ua = u;
            for (int b : base) ua[b] = anchor[b];
            G0 = W.induced().metric_at(ua);
            L = W.eval_ln_f(u);
        } catch (const DegeneratePoint&) {
            ++out.degenerate;
            continue;
        } catch (const EvalError&) {
            ++out.degenerate;
            continue;
        }
        for (int b : base)
            for (int f : fiber) out.cross_residual = std::fmax(out.cross_residual, std::fabs(G(b, f)));

        // eigenvalues of A^{-1/2} G_FF A^{-1/2}, A = fiber block at the anchor
        MatD A(k, k), B(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                A(i, j) = G0(fiber[i], fiber[j]);
                B(i, j) = G(fiber[i], fiber[j]);
            }
        std::vector<double> ev;
        MatD V;
        sym_eigen(A, ev, V);
        MatD S12(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                for (int l = 0; l < k; ++l) S12(i, j) += V(i, l) * V(j, l) / std::sqrt(ev[l]);
        std::vector<double> ratios;
        sym_eigen(S12 * B * S12, ratios, V);
        double f2 = L.f * L.f;
        for (double r : ratios) out.ratio_spread = std::fmax(out.ratio_spread, std::fabs(r / f2 - 1));

        if (W.declared_f()) {
            std::map<std::string, double> env;
            for (int a = 0; a < W.immersion().dim(); ++a) env[W.immersion().params()[a]] = u[a];
            double fd = eval(*W.declared_f(), env);
            out.declared_residual = std::fmax(out.declared_residual.value_or(0.0), std::fabs(L.f - fd));
        }
        for (int f : fiber) out.fiber_gradient = std::fmax(out.fiber_gradient, std::fabs(L.d[f]));
        lo = std::fmin(lo, L.value);
        hi = std::fmax(hi, L.value);
        out.u.push_back(u);
        out.f.push_back(L.f);
    }
    if (!out.u.empty()) out.ln_f_range = hi - lo;
    if (out.cross_residual > cross_tol)
        throw NotWarped("not a warped product: base-fiber metric block " + std::to_string(out.cross_residual));
    if (out.ratio_spread > ratio_tol)
        throw NotWarped("not a warped product: fiber metric ratio spread " + std::to_string(out.ratio_spread));
    return out;
}

WarpData warp_data(const FramedPoint& p, const WarpedImmersion& W) {
    WarpData w;
    w.u = p.u;
    auto L = W.eval_ln_f(p.u);
    w.f = L.f;
    MatD Ginv = values(p.Ginv);
    w.grad_ln_f = Ginv * L.d;
    w.grad_ln_f_norm2 = p.gt(w.grad_ln_f, w.grad_ln_f);
    MatD pg = p.amb.phi * p.push(w.grad_ln_f);
    w.phi_grad_ln_f_norm2 = p.ga(pg, pg);

    // frame formula: -sum_i (e_i e_i f - (nabla_{e_i} e_i) f) over an orthonormal base frame
    MetricPoint M = W.induced().at(p.u);
    MatD df = L.f * L.d;
    for (const auto& e : block_frame(W.base(), p.m, M.g)) {
        MatD Ge = M.Gamma(e, e);
        w.laplacian_f -= inner(e, L.hess, e) - dot_d(df, Ge);
    }

    // divergence form on the base block, central differences
    const auto& base = W.base();
    int k = W.m1();
    auto flux = [&](const std::vector<double>& u, double& sqrt_det) {
        MatD g = W.induced().metric_at(u);
        MatD gb(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) gb(i, j) = g(base[i], base[j]);
        std::vector<double> ev;
        MatD V;
        sym_eigen(gb, ev, V);
        sqrt_det = 1;
        for (double e : ev) sqrt_det *= std::sqrt(e);
        auto Lu = W.eval_ln_f(u);
        MatD db(k, 1);
        for (int i = 0; i < k; ++i) db[i] = Lu.f * Lu.d[base[i]];
        MatD v = inverse(gb) * db;
        for (auto& z : v.a) z *= sqrt_det;
        return v;
    };
    const double h = 1e-4;
    double sd0;
    flux(p.u, sd0);
    double div = 0;
    for (int a = 0; a < k; ++a) {
        auto up = p.u, um = p.u;
        up[base[a]] += h;
        um[base[a]] -= h;
        double s;
        div += (flux(up, s)[a] - flux(um, s)[a]) / (2 * h);
    }
    w.laplacian_f_direct = -div / sd0;
    return w;
}

double warp_connection_residual(const FramedPoint& p, const WarpedImmersion& W) {
    MatD G = p.Gv();
    auto L = W.eval_ln_f(p.u);
    double r = 0;
    for (const auto& X : block_frame(W.base(), p.m, G))
        for (const auto& Y : block_frame(W.fiber(), p.m, G)) {
            MatD d = p.nabla(X, lift(Y)) - dot_d(L.d, X) * Y;
            r = std::fmax(r, tnorm(p, d));
        }
    return r;
}

CurvatureRelation warp_curvature_relation(const ACMStructure& S, const FramedPoint& p, const WarpedImmersion& W) {
    CurvatureRelation c;
    MetricPoint M = W.induced().at(p.u, true);
    AmbientPoint amb = S.at(p.x, true);
    auto wd = warp_data(p, W);
    auto base = block_frame(W.base(), p.m, M.g);
    for (const auto& Y : block_frame(W.fiber(), p.m, M.g)) {
        double sum = 0;
        for (const auto& X : base) {
            double K = M.sectional(X, Y);
            sum += K;
            MatD hxx = p.h(X, X), hyy = p.h(Y, Y), hxy = p.h(X, Y);
            double gauss = amb.m.sectional(p.push(X), p.push(Y)) + p.ga(hxx, hyy) - p.ga(hxy, hxy);
            c.gauss = std::fmax(c.gauss, std::fabs(K - gauss));
        }
        c.laplacian = std::fmax(c.laplacian, std::fabs(wd.laplacian_f / wd.f - sum));
    }
    return c;
}

const char* to_string(AmbientClass c) {
    switch (c) {
        case AmbientClass::Cosymplectic: return "cosymplectic";
        case AmbientClass::Sasakian: return "sasakian";
        case AmbientClass::Kenmotsu: return "kenmotsu";
        case AmbientClass::Other: return "other";
    }
    return "?";
}

AmbientClass ambient_class(const StructureClassReport& r) {
    if (r.sasakian) return AmbientClass::Sasakian;
    if (r.kenmotsu) return AmbientClass::Kenmotsu;
    if (r.cosymplectic) return AmbientClass::Cosymplectic;
    return AmbientClass::Other;
}

Orientation orientation(const FramedPoint& p, const SemiSlantSplit& s, const WarpedImmersion& W, double tol) {
    auto inside = [&](const MatD& D, const std::vector<int>& other, int dim) {
        if (D.c != dim) return false;
        for (int j = 0; j < D.c; ++j)
            if (block_weight(D.col(j), other) > tol) return false;
        return true;
    };
    (void)p;
    if (inside(s.D1, W.fiber(), W.m1()) && inside(s.D2, W.base(), W.m2())) return Orientation::Allowed;
    if (inside(s.D1, W.base(), W.m2()) && inside(s.D2, W.fiber(), W.m1())) return Orientation::Forbidden;
    return Orientation::Neither;
}

std::map<std::string, double> warp_identity_residuals(const FramedPoint& p, const SemiSlantSplit& s,
                                                      const WarpedImmersion& W, AmbientClass cls) {
    return warp_identity_residuals(p, s, W.eval_ln_f(p.u).d, cls);
}

std::map<std::string, double> warp_identity_residuals(const FramedPoint& p, const SemiSlantSplit& s,
                                                      const MatD& d_ln_f, AmbientClass cls) {
    MatD Tv = values(p.T);
    bool xi_tan = s.xi_position == XiPosition::Tangent;
    MatD xi_t = xi_tan ? values(p.xi_t) : MatD(p.m, 1);
    double xi_lnf = dot_d(d_ln_f, xi_t);
    double theta = s.theta.value_or(0.0);
    double c2 = std::cos(theta) * std::cos(theta);
    auto eta = [&](const MatD& X) { return p.amb.eta_of(p.push(X)); };
    auto eta_a = [&](const MatD& V) { return p.amb.eta_of(V); };
    auto dl = [&](const MatD& X) { return dot_d(d_ln_f, X); };
    // (X - eta(X) xi)(ln f)
    auto hor = [&](const MatD& X) { return dl(X) - eta(X) * xi_lnf; };
    auto nphi = [&](const MatD& W_, const MatD& X, const MatD& Z) {
        return p.ga(p.amb.nabla_phi(p.push(W_), p.push(X)), p.push(Z));
    };

    auto D1 = columns(s.D1), D2 = columns(s.D2);
    std::map<std::string, double> r{{"shape_symmetry", 0},         {"shape_symmetry_general", 0}, {"shape_FTZ", 0},
                                    {"shape_FZ_phiX", 0},         {"h_base", 0},        {"h_base_general", 0},
                                    {"h_mixed", 0},        {"h_mixed_general", 0}};
    auto upd = [&](const char* k, double v) { r[k] = std::fmax(r[k], std::fabs(v)); };

    for (const auto& X : D1) {
        MatD TX = Tv * X;
        for (const auto& Y : D1)
            for (const auto& Z : D2) {
                double lhs = p.ga(p.h(X, Y), F_of(p, Z));
                double rhs = 0;
                if (cls == AmbientClass::Sasakian) rhs = eta(Z) * p.gt(X, Y);
                if (cls == AmbientClass::Kenmotsu) rhs = eta(Z) * p.gt(TX, Y);
                upd("h_base", lhs - rhs);
                upd("h_base_general", lhs - nphi(X, Y, Z));
            }
        for (const auto& Wv : D2)
            for (const auto& Z : D2) {
                MatD TZ = Tv * Z, TW = Tv * Wv;
                MatD FZ = F_of(p, Z), FW = F_of(p, Wv), FTZ = F_of(p, TZ);
                double hXW_FZ = p.ga(p.h(X, Wv), FZ);
                double hXZ_FW = p.ga(p.h(X, Z), FW);
                double gWZ = p.gt(Wv, Z), gWTZ = p.gt(Wv, TZ), gZTW = p.gt(Z, TW);

                upd("shape_symmetry", hXW_FZ - hXZ_FW);
                double general_sym = nphi(Wv, X, Z) - nphi(Z, X, Wv) - dl(X) * (gWTZ - gZTW);
                upd("shape_symmetry_general", hXW_FZ - hXZ_FW - general_sym);

                // g(A_{FTZ} W, X) = g(h(W, X), FTZ)
                double a07 = p.ga(p.h(Wv, X), FTZ);
                double rhs07 = -dl(TX) * gWTZ - c2 * dl(X) * gWZ;
                if (cls == AmbientClass::Sasakian) rhs07 += -eta(X) * p.gt(TZ, Wv);
                if (cls == AmbientClass::Kenmotsu) rhs07 += c2 * eta(X) * (gWZ - eta(Z) * eta(Wv));
                upd("shape_FTZ", a07 - rhs07);

                // g(A_{FZ} W, phi X) with phi X = TX on D1
                double a08 = p.ga(p.h(Wv, TX), FZ);
                double rhs08 = hor(X) * gWZ - dl(TX) * p.gt(TW, Z);
                upd("shape_FZ_phiX", a08 - rhs08);

                double rhs14 = -dl(TX) * gWZ + hor(X) * gWTZ;
                if (cls == AmbientClass::Sasakian) rhs14 += -eta(X) * p.ga(FW, FZ);
                if (cls == AmbientClass::Kenmotsu) rhs14 += -eta(X) * eta(Wv) * eta_a(FZ);
                upd("h_mixed", hXW_FZ - rhs14);
                double general_mixed = -dl(TX) * gWZ + nphi(Wv, X, Z) - dl(X) * gWTZ;
                upd("h_mixed_general", hXW_FZ - general_mixed);
            }
    }
    return r;
}

std::map<std::string, double> nonexistence_chain(const FramedPoint& p, const SemiSlantSplit& s,
                                                 const WarpedImmersion& W) {
    auto L = W.eval_ln_f(p.u);
    MatD Tv = values(p.T);
    bool xi_tan = s.xi_position == XiPosition::Tangent;
    double theta = s.theta.value_or(0.0);
    double s2 = std::sin(theta) * std::sin(theta), c2 = 1 - s2;
    auto eta = [&](const MatD& X) { return p.amb.eta_of(p.push(X)); };
    auto dl = [&](const MatD& X) { return dot_d(L.d, X); };

    auto D1 = columns(s.D1), D2 = columns(s.D2);
    std::map<std::string, double> r{{"h_phi_symmetry", 0}, {"TZ_ln_f", 0}, {"angle_chain_general", 0}, {"z_ln_f", 0}};
    const char* first = "angle_chain";
    r[first] = 0;
    auto upd = [&](const std::string& k, double v) { r[k] = std::fmax(r[k], std::fabs(v)); };

    for (const auto& Z : D2) {
        MatD TZ = Tv * Z, FZ = F_of(p, Z), FTZ = F_of(p, TZ);
        double zl = dl(Z);
        upd("z_ln_f", zl);
        for (const auto& X : D1)
            for (const auto& Y : D1) {
                MatD TX = Tv * X, TY = Tv * Y;
                double hXY = p.ga(p.h(X, Y), FTZ);
                double hXphiY = p.ga(p.h(X, TY), FZ);
                double hYphiX = p.ga(p.h(Y, TX), FZ);
                double lhs = s2 * zl * p.gt(X, Y);
                double rhs = hXY - hXphiY + (xi_tan ? zl * eta(X) * eta(Y) : 0.0);
                upd(first, lhs - rhs);
                upd("h_phi_symmetry", hXphiY - hYphiX);
                upd("TZ_ln_f", dl(TZ) * p.gt(X, TY));

                MatD pX = p.push(X), pY = p.push(Y), pZ = p.push(Z), pTZ = p.push(TZ);
                double etaNZ = -p.ga(pZ, p.amb.nabla_xi(pX));
                double general = hXY - hXphiY - p.ga(p.amb.nabla_phi(pX, pZ), p.amb.phi * pY) +
                                 p.ga(p.amb.nabla_phi(pX, pTZ), pY) + etaNZ * eta(Y);
                upd("angle_chain_general", lhs - general);
            }
        if (xi_tan) {
            MatD e = values(p.xi_t);
            double n = tnorm(p, e);
            for (auto& z : e.a) z /= n;
            upd("cos2_z_ln_f", c2 * zl);
            upd("xi_chain", c2 * zl + p.ga(p.h(e, e), FTZ));
        }
    }
    return r;
}

InequalityTerms inequality_terms(const FramedPoint& p, const SemiSlantSplit& s, const WarpedImmersion& W,
                                 AmbientClass cls) {
    InequalityTerms t;
    bool xi_tan = s.xi_position == XiPosition::Tangent;
    t.m2 = s.D2.c / 2;
    t.m1 = xi_tan ? (s.D1.c - 1) / 2 : s.D1.c / 2;
    t.n = (p.N - 1) / 2;
    t.mu_dim = s.mu.c;
    t.mu_minimal = t.n == t.m1 + 2 * t.m2;
    t.h_norm2 = p.forms().h_norm2;

    auto wd = warp_data(p, W);
    double theta = s.theta.value_or(0.0);
    double sn = std::sin(theta), cs = std::cos(theta);
    double k = 4.0 * t.m2 * (1 / (sn * sn) + cs * cs / (sn * sn));
    if (xi_tan) {
        switch (cls) {
            case AmbientClass::Sasakian:
                t.formula = "sasakian-xi-tangent";
                t.rhs = k * wd.phi_grad_ln_f_norm2 + 4.0 * t.m2 * sn * sn;
                break;
            case AmbientClass::Cosymplectic:
                t.formula = "cosymplectic-xi-tangent";
                t.rhs = k * wd.phi_grad_ln_f_norm2;
                break;
            case AmbientClass::Kenmotsu:
                t.formula = "kenmotsu-xi-tangent";
                t.rhs = k * wd.phi_grad_ln_f_norm2;
                break;
            default: t.formula = "none";
        }
    } else if (s.xi_position == XiPosition::Normal) {
        switch (cls) {
            case AmbientClass::Kenmotsu:
                t.formula = "kenmotsu-xi-normal";
                t.rhs = k * wd.grad_ln_f_norm2 + 2.0 * t.m1;
                break;
            case AmbientClass::Cosymplectic:
                t.formula = "cosymplectic-xi-normal";
                t.rhs = k * wd.grad_ln_f_norm2;
                break;
            default: t.formula = "none";
        }
    } else {
        t.formula = "none";
    }
    t.slack = t.h_norm2 - t.rhs;

    // adapted frame: v_{m2+i} = sec(theta) T v_i, w_i = csc(theta) F v_i
    MatD Tv = values(p.T);
    MatD G = p.Gv();
    std::vector<MatD> v;
    for (const auto& c : columns(s.D2)) {
        if (static_cast<int>(v.size()) == t.m2) break;
        MatD x = c;
        for (const auto& e : v) {
            double a = p.gt(e, x);
            for (int i = 0; i < x.r; ++i) x[i] -= a * e[i];
            MatD Te = (1 / cs) * (Tv * e);
            double b = p.gt(Te, x);
            for (int i = 0; i < x.r; ++i) x[i] -= b * Te[i];
        }
        double n = tnorm(p, x);
        if (n < 1e-8) continue;
        for (auto& z : x.a) z /= n;
        v.push_back(x);
    }
    int half = static_cast<int>(v.size());
    for (int i = 0; i < half; ++i) v.push_back((1 / cs) * (Tv * v[i]));
    std::vector<MatD> w;
    for (const auto& x : v) w.push_back((1 / sn) * F_of(p, x));
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) {
            double d = i == j ? 1.0 : 0.0;
            t.frame_residual = std::fmax(t.frame_residual, std::fabs(p.gt(v[i], v[j]) - d));
            t.frame_residual = std::fmax(t.frame_residual, std::fabs(p.ga(w[i], w[j]) - d));
        }
    if (static_cast<int>(v.size()) != 2 * t.m2) t.frame_residual = INFINITY;

    MatD Nf = p.normal_frame();
    for (const auto& a : v)
        for (const auto& b : v) {
            MatD hv = p.h(a, b);
            for (int j = 0; j < Nf.c; ++j)
                t.equality_residual = std::fmax(t.equality_residual, std::fabs(p.ga(hv, Nf.col(j))));
        }
    return t;
}

}  // namespace slantgeo
