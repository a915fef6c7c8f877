#include "slantgeo/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

namespace slantgeo {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Skipped: return "skipped";
    }
    return "?";
}

double shape_route_residual(const FramedPoint& p) {
    int q = p.N - p.m;
    double worst = 0;
    for (int al = 0; al < q; ++al) {
        std::vector<double> c(q, 0.0);
        c[al] = 1;
        MatJ Z = p.normal_field(c);
        MatD Zv = values(Z);
        for (int a = 0; a < p.m; ++a) {
            MatD X(p.m, 1);
            X[a] = 1;
            MatD d = p.A(Zv, X) - p.A_weingarten(Z, X);
            worst = std::fmax(worst, std::sqrt(std::fmax(0.0, p.gt(d, d))));
        }
    }
    return worst;
}

namespace {

const std::vector<std::string> kSuites = {
    "acm-axioms",       "slant-basic",  "semi-slant-basic", "parallel-tensors", "integrability-D1",
    "integrability-D2", "foliation-D1", "foliation-D2",     "product-criterion", "umbilic",
    "warp-identities",  "nonexistence", "inequality"};

constexpr double kTolH = 1e-6;
constexpr double kTolAlg = 1e-8;

struct Check {
    CheckReport r;
    bool evaluated = false, nan = false;
    std::set<std::string> reasons;

    void value(double v) {
        evaluated = true;
        if (std::isnan(v)) nan = true;
        else r.max_residual = std::fmax(r.max_residual, v);
    }
    void skip(const std::string& why, int count = 1) {
        r.skipped += count;
        reasons.insert(why);
    }
    void metric_min(const std::string& k, double v) {
        auto it = r.metrics.find(k);
        r.metrics[k] = it == r.metrics.end() ? v : std::fmin(it->second, v);
    }
    void metric_max(const std::string& k, double v) {
        auto it = r.metrics.find(k);
        r.metrics[k] = it == r.metrics.end() ? v : std::fmax(it->second, v);
    }
};

class Suite {
public:
    Suite(std::string name, const VerifyConfig& cfg) : name_(std::move(name)), cfg_(cfg) {}

    Check& add(const std::string& key, const std::string& formula, double tol) {
        order_.push_back(key);
        Check& c = checks_[key];
        c.r.suite = name_;
        c.r.check = key;
        c.r.formula = formula;
        c.r.tolerance = cfg_.tol_override.value_or(tol);
        c.r.samples_total = static_cast<int>(cfg_.samples.size());
        return c;
    }
    Check& operator[](const std::string& key) { return checks_.at(key); }
    bool has(const std::string& key) const { return checks_.count(key) > 0; }
    void degenerate() {
        for (auto& [k, c] : checks_) ++c.r.degenerate;
    }
    void skip_all(const std::string& why) {
        for (auto& [k, c] : checks_) c.skip(why, c.r.samples_total);
    }
    void skip_whole(const std::string& key, const std::string& why) {
        Check& c = checks_.at(key);
        c.skip(why, c.r.samples_total);
    }
    std::vector<CheckReport> finish() {
        std::vector<CheckReport> out;
        for (const auto& key : order_) {
            Check& c = checks_[key];
            std::string h;
            for (const auto& s : c.reasons) h += (h.empty() ? "" : "; ") + s;
            c.r.hypothesis = h;
            if (!c.evaluated) {
                c.r.verdict = Verdict::Skipped;
                if (c.r.hypothesis.empty()) c.r.hypothesis = "no usable samples";
            } else {
                c.r.verdict = (!c.nan && c.r.max_residual <= c.r.tolerance) ? Verdict::Pass : Verdict::Fail;
                if (c.nan) c.r.notes.push_back("non-finite residual at some sample");
            }
            out.push_back(c.r);
        }
        return out;
    }

private:
    std::string name_;
    const VerifyConfig& cfg_;
    std::vector<std::string> order_;
    std::map<std::string, Check> checks_;
};

// Runs body(p, index) at every sample, counting degenerate points.
template <class Body>
void for_samples(Suite& suite, const VerifyConfig& cfg, bool curvature, Body body) {
    for (size_t i = 0; i < cfg.samples.size(); ++i) {
        std::optional<FramedPoint> p;
        try {
            p.emplace(cfg.ambient, cfg.immersion, cfg.samples[i], cfg.point_tol, curvature);
        } catch (const DegeneratePoint&) {
            suite.degenerate();
            continue;
        } catch (const EvalError&) {
            suite.degenerate();
            continue;
        }
        try {
            body(*p, i);
        } catch (const DegeneratePoint&) {
            suite.degenerate();
        } catch (const EvalError&) {
            suite.degenerate();
        }
    }
}

struct ClassInfo {
    AmbientClass cls = AmbientClass::Other;
    std::string label;
};

ClassInfo ambient_info(const VerifyConfig& cfg) {
    std::vector<std::vector<double>> pts;
    for (size_t i = 0; i < cfg.samples.size() && pts.size() < 40; ++i) {
        try {
            pts.push_back(cfg.immersion.eval(cfg.samples[i]).x);
        } catch (const EvalError&) {
        }
    }
    ClassInfo info;
    if (pts.empty()) return info;
    auto rep = classify(cfg.ambient, pts);
    info.cls = ambient_class(rep);
    info.label = rep.label();
    return info;
}

bool in_three(AmbientClass c) { return c != AmbientClass::Other; }

std::string class_reason(const ClassInfo& ci, const std::string& allowed) {
    return "ambient class " + (ci.label.empty() ? std::string("unknown") : ci.label) + " not in {" + allowed + "}";
}

uint64_t mix(uint64_t seed, size_t i) { return seed * 0x9E3779B97F4A7C15ULL + 7919ULL * (i + 1); }

double tnorm(const FramedPoint& p, const MatD& X) { return std::sqrt(std::fmax(0.0, p.gt(X, X))); }
double anorm(const FramedPoint& p, const MatD& V) { return std::sqrt(std::fmax(0.0, p.ga(V, V))); }
MatD F_of(const FramedPoint& p, const MatD& X) { return p.nor_part(p.amb.phi * p.push(X)); }

MatD random_param(int m, Rng& rng) {
    MatD a(m, 1);
    for (int i = 0; i < m; ++i) a[i] = rng.normal();
    return a;
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> suite_axioms(const VerifyConfig& cfg) {
    Suite s("acm-axioms", cfg);
    std::vector<std::vector<double>> pts;
    int degenerate = 0;
    for (const auto& u : cfg.samples) {
        try {
            pts.push_back(cfg.immersion.eval(u).x);
        } catch (const EvalError&) {
            ++degenerate;
        }
    }
    if (pts.empty()) pts.push_back(cfg.ambient.manifold().domain().center());
    auto rep = check_axioms(cfg.ambient, pts);
    static const std::map<std::string, std::string> formulas = {
        {"phi_squared", "phi^2 X = -X + eta(X) xi"},
        {"eta_xi", "eta(xi) = 1"},
        {"phi_xi", "phi xi = 0"},
        {"eta_phi", "eta o phi = 0"},
        {"compatible_metric", "g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)"},
        {"eta_metric", "eta(X) = g(X, xi)"},
    };
    for (const auto& [k, v] : rep.residuals) {
        auto it = formulas.find(k);
        Check& c = s.add(k, it == formulas.end() ? k : it->second, kTolAlg);
        c.value(v);
        c.r.samples_total = static_cast<int>(pts.size()) + degenerate;
        c.r.degenerate = rep.degenerate + degenerate;
        c.r.notes.push_back("evaluated at the images of the samples in the ambient chart");
    }
    return s.finish();
}

std::vector<CheckReport> suite_slant_basic(const VerifyConfig& cfg) {
    Suite s("slant-basic", cfg);
    auto ci = ambient_info(cfg);
    s.add("block-identities", "T^2 + tF = -I + eta(x)xi_T, FT + fF = eta(x)xi_N, Tt + tf = ..., Ft + f^2 = ...", 1e-9);
    s.add("characterization", "T^2 = -cos^2(theta) I on M_p", 1e-7);
    s.add("eigenvalue-range", "eigenvalues of -T^2 on M_p in [0, 1]", 1e-10);
    s.add("angle-tangential", "g(TX, TY) = cos^2(theta) g(X, Y) on M_p", kTolAlg);
    s.add("angle-normal", "g(FX, FY) = sin^2(theta) g(X, Y) on M_p", kTolAlg);
    s.add("orthogonality", "g(TX, TY) = 0 whenever g(X, Y) = 0 on M_p", kTolAlg);
    s.add("shape-relation", "A_{FX} TX = A_{FTX} X", kTolH);
    s.add("conformal-invariance", "theta unchanged under (phi, e^-f xi, e^f eta, e^2f g)", kTolAlg);
    s.add("shape-routes", "A by duality = A by the Weingarten formula", kTolH);

    std::optional<SlantClassification> global;
    try {
        global = classify_slant(cfg.ambient, cfg.immersion, cfg.samples);
    } catch (const DegeneratePoint&) {
    }
    bool constant = global && (global->theta0 || global->label == "invariant" || global->label == "anti-invariant");
    for_samples(s, cfg, false, [&](const FramedPoint& p, size_t i) {
        s["block-identities"].value(block_identities(p.operators()).max());
        s["shape-routes"].value(shape_route_residual(p));
        SlantSpectrum sp;
        try {
            sp = slant_spectrum(p);
        } catch (const std::domain_error&) {
            for (auto k : {"characterization", "eigenvalue-range", "angle-tangential", "angle-normal", "orthogonality",
                           "shape-relation"})
                s[k].skip("M_p is zero-dimensional");
            return;
        }
        double lo = INFINITY, hi = -INFINITY;
        for (double e : sp.eigenvalues) {
            lo = std::fmin(lo, e);
            hi = std::fmax(hi, e);
        }
        s["eigenvalue-range"].value(std::fmax(0.0, std::fmax(-lo, hi - 1)));
        if (!sp.slant()) {
            for (auto k : {"characterization", "angle-tangential", "angle-normal", "orthogonality", "shape-relation"})
                s[k].skip("not pointwise slant at the sample");
            return;
        }
        double th = *sp.theta;
        MatD Q = restricted_T(p);
        MatD R = Q * Q;
        double c2 = std::cos(th) * std::cos(th);
        for (int a = 0; a < R.r; ++a) R(a, a) += c2;
        s["characterization"].value(max_abs(R));
        auto ar = angle_residuals(p, th, cfg.trials, mix(cfg.seed, i));
        s["angle-tangential"].value(ar.tangential);
        s["angle-normal"].value(ar.normal);
        s["orthogonality"].value(orthogonality_residual(p, cfg.trials, mix(cfg.seed, i) + 1));
        if (!constant) s["shape-relation"].skip("slant function not constant");
        else if (in_three(ci.cls)) s["shape-relation"].value(ar_relation_residual(p, cfg.trials, mix(cfg.seed, i) + 2));
        else s["shape-relation"].skip(class_reason(ci, "cosymplectic, sasakian, kenmotsu"));
    });

    Check& conf = s["conformal-invariance"];
    try {
        Expr sum(0.0);
        for (const auto& x : cfg.ambient.coords()) sum = sum + Expr::var(x);
        Expr f = Expr(0.25) * sin(sum);
        if (!global || global->label == "not-pointwise-slant") {
            conf.skip("not pointwise slant");
        } else {
            conf.value(conformal_invariance_residual(cfg.ambient, cfg.immersion, f, cfg.samples));
            conf.r.notes.push_back("f = 0.25 sin(sum of ambient coordinates)");
        }
    } catch (const DegeneratePoint&) {
        conf.skip("no usable samples");
    }
    return s.finish();
}

std::vector<CheckReport> suite_semi_slant_basic(const VerifyConfig& cfg) {
    Suite s("semi-slant-basic", cfg);
    s.add("block-identities", "T^2 + tF = -I + eta(x)xi_T, FT + fF = eta(x)xi_N, Tt + tf = ..., Ft + f^2 = ...", 1e-9);
    s.add("D1-invariant", "T(D1) in D1 and F(D1) = 0", kTolAlg);
    s.add("D2-slant", "T(D2) in D2 and T^2 = -cos^2(theta) I on D2", kTolAlg);
    s.add("normal-tangent", "t(TM^perp) in D2", kTolAlg);
    s.add("orthogonality", "D1 perp D2 and F D2 perp mu", kTolAlg);
    s.add("mu-invariant", "phi(mu) = mu", kTolAlg);
    for_samples(s, cfg, false, [&](const FramedPoint& p, size_t) {
        auto sp = split_distributions(p, cfg.cluster_tol);
        auto r = semi_slant_identities(p, sp);
        s["block-identities"].value(r.block.max());
        bool usable = sp.status == SplitStatus::Ok || sp.status == SplitStatus::Invariant;
        if (!usable) {
            for (auto k : {"D1-invariant", "D2-slant", "normal-tangent", "orthogonality", "mu-invariant"})
                s[k].skip(std::string("split status ") + to_string(sp.status));
            return;
        }
        s["D1-invariant"].value(std::fmax(r.T_D1, r.F_D1));
        s["D2-slant"].value(std::fmax(r.T_D2, r.T2_D2));
        s["normal-tangent"].value(r.t_nor);
        s["orthogonality"].value(r.orth);
        auto mu = mu_invariance_residual(p, sp);
        if (mu) s["mu-invariant"].value(*mu);
        else s["mu-invariant"].skip("neither D2 nor mu lies in ker eta");
        s["D2-slant"].metric_min("theta_min", sp.theta.value_or(0));
        s["D2-slant"].metric_max("theta_max", sp.theta.value_or(0));
    });
    return s.finish();
}

std::vector<CheckReport> suite_parallel(const VerifyConfig& cfg) {
    Suite s("parallel-tensors", cfg);
    auto ci = ambient_info(cfg);
    s.add("nabla-T", "(nabla_X T)Y = A_{FY} X + t h(X,Y)", kTolH);
    s.add("D-F", "(D_X F)Y = -h(X,TY) + f h(X,Y)", kTolH);
    s.add("nabla-t", "(nabla_X t)Z = A_{fZ} X - T A_Z X", kTolH);
    s.add("D-f", "(D_X f)Z = -F A_Z X - h(X, tZ)", kTolH);
    s.add("d-omega", "d Omega = 0, Omega(X,Y) = g(X, TY)", 1e-5);
    s.add("volume-form", "(eta ^ Omega^k) != 0 on M (|coefficient| >= 1e-6)", 0.0);
    s.add("shape-routes", "A by duality = A by the Weingarten formula", kTolH);
    bool cosym = ci.cls == AmbientClass::Cosymplectic;
    std::optional<SlantClassification> sc;
    try {
        sc = classify_slant(cfg.ambient, cfg.immersion, cfg.samples);
    } catch (const DegeneratePoint&) {
    }
    bool slant = sc && sc->label != "not-pointwise-slant";
    for_samples(s, cfg, false, [&](const FramedPoint& p, size_t) {
        s["shape-routes"].value(shape_route_residual(p));
        if (!cosym) {
            for (auto k : {"nabla-T", "D-F", "nabla-t", "D-f", "d-omega"}) s[k].skip(class_reason(ci, "cosymplectic"));
        } else {
            auto r = parallel_tensor_residuals(p);
            s["nabla-T"].value(r.nabla_T);
            s["D-F"].value(r.D_F);
            s["nabla-t"].value(r.t_part);
            s["D-f"].value(r.f_part);
            if (slant) s["d-omega"].value(d_omega_residual(p));
            else s["d-omega"].skip("not pointwise slant");
        }
        Check& v = s["volume-form"];
        if (p.xi_position != XiPosition::Tangent) {
            v.skip("xi not tangent");
        } else if (p.Mp.c % 2 != 0) {
            v.skip("M_p odd-dimensional");
        } else {
            bool ok = slant;
            if (!ok) {
                auto sp = split_distributions(p, cfg.cluster_tol);
                ok = sp.ok();
            }
            if (!ok) {
                v.skip("neither pointwise slant nor semi-slant");
            } else {
                double c = std::fabs(volume_form_coefficient(p));
                v.value(std::fmax(0.0, 1e-6 - c));
                v.metric_min("min_abs_coefficient", c);
            }
        }
    });
    return s.finish();
}

// Per-sample context for the distribution suites.
struct SplitPoint {
    SemiSlantSplit split;
    MatJ P, Q;
    double s2 = 0;
};

std::optional<std::string> split_point(const FramedPoint& p, const VerifyConfig& cfg, SplitPoint& out) {
    out.split = split_distributions(p, cfg.cluster_tol);
    if (!out.split.ok()) return std::string("split status ") + to_string(out.split.status);
    if (!out.split.proper) return std::string("not proper semi-slant");
    out.P = projector_jet(p, out.split);
    out.Q = lift(MatD::identity(p.m)) - out.P;
    double sn = std::sin(*out.split.theta);
    out.s2 = sn * sn;
    return std::nullopt;
}

// X = P a (or Q a) as a field with constant coefficients a
struct Field {
    MatJ jet;
    MatD v;
    double n = 0;
};

Field field(const FramedPoint& p, const MatJ& Proj, Rng& rng) {
    for (int tries = 0; tries < 20; ++tries) {
        MatD a = random_param(p.m, rng);
        Field f;
        f.jet = Proj * lift(a);
        f.v = values(f.jet);
        f.n = tnorm(p, f.v);
        if (f.n > 1e-6 * tnorm(p, a)) return f;
    }
    throw DegeneratePoint("distribution projection vanishes");
}

double eta_t(const FramedPoint& p, const MatD& X) { return p.amb.eta_of(p.push(X)); }

std::vector<CheckReport> suite_distributions(const std::string& name, const VerifyConfig& cfg) {
    Suite s(name, cfg);
    auto ci = ambient_info(cfg);
    auto C = AmbientClass::Cosymplectic, S = AmbientClass::Sasakian, K = AmbientClass::Kenmotsu;
    auto is = [&](std::initializer_list<AmbientClass> l) {
        return std::find(l.begin(), l.end(), ci.cls) != l.end();
    };
    bool want_int1 = name == "integrability-D1", want_int2 = name == "integrability-D2";
    bool want_fol1 = name == "foliation-D1" || name == "product-criterion";
    bool want_fol2 = name == "foliation-D2" || name == "product-criterion";
    bool product = name == "product-criterion";
    if (want_int1) s.add("bracket-identity", "sin^2 g([X,Y],Z) = g(h(X,phi Y) - h(Y,phi X), FZ)", kTolH);
    if (want_int2) {
        s.add("bracket-identity",
              "sin^2 g([Z,W],X) = eta([Z,W]) eta(X) + g(A_{FTW}Z - A_{FTZ}W, X) + g(A_{FZ}W - A_{FW}Z, phi X)", kTolH);
        s.add("eta-bracket", "eta([Z,W]) = 0 (xi tangent)", kTolH);
    }
    if (want_fol1) s.add("D1-identity", "sin^2 g(nabla_Y X, Z) = g(A_{FZ} phi X - A_{FTZ} X, Y)", kTolH);
    if (want_fol2)
        s.add("D2-identity",
              "sin^2 g(nabla_W Z, X) = g(A_{FTZ} X - A_{FZ} phi X, W) [- sin^2 eta(X) g(W,Z), kenmotsu xi tangent]",
              kTolH);
    s.add("shape-routes", "A by duality = A by the Weingarten formula", kTolH);
    if (product) {
        s["D1-identity"].r.notes.push_back("evaluated together with D2-identity");
        s["D2-identity"].r.notes.push_back("evaluated together with D1-identity");
    }
    double crit = 0, conn = 0;
    bool crit_any = false;

    for_samples(s, cfg, false, [&](const FramedPoint& p, size_t i) {
        SplitPoint sp;
        if (auto why = split_point(p, cfg, sp)) {
            for (auto k : {"bracket-identity", "eta-bracket", "D1-identity", "D2-identity", "shape-routes"})
                if (s.has(k)) s[k].skip(*why);
            return;
        }
        bool tan = p.xi_position == XiPosition::Tangent;
        bool d1_ok = (tan && is({C, S, K})) || (!tan && is({C, K}));
        bool d2_int_ok = is({C, K});
        bool d2_fol_ok = (tan && is({C, S, K})) || (!tan && is({C, K}));
        bool prod_ok = (tan && is({C, S})) || (!tan && is({C, K}));
        std::string r1 = class_reason(ci, tan ? "cosymplectic, sasakian, kenmotsu" : "cosymplectic, kenmotsu");
        std::string r2 = class_reason(ci, "cosymplectic, kenmotsu");
        std::string rp = class_reason(ci, tan ? "cosymplectic, sasakian" : "cosymplectic, kenmotsu");

        bool run_int1 = want_int1 && d1_ok, run_int2 = want_int2 && d2_int_ok;
        bool run_fol1 = want_fol1 && (product ? prod_ok : d1_ok);
        bool run_fol2 = want_fol2 && (product ? prod_ok : d2_fol_ok);
        if (want_int1 && !run_int1) s["bracket-identity"].skip(r1);
        if (want_int2 && !run_int2) {
            s["bracket-identity"].skip(r2);
            s["eta-bracket"].skip(r2);
        } else if (want_int2 && !tan) {
            s["eta-bracket"].skip("xi normal");
        }
        if (want_fol1 && !run_fol1) s["D1-identity"].skip(product ? rp : r1);
        if (want_fol2 && !run_fol2) s["D2-identity"].skip(product ? rp : (tan ? r1 : r2));
        if (!(run_int1 || run_int2 || run_fol1 || run_fol2)) {
            s["shape-routes"].skip("no identity evaluated at the sample");
            return;
        }
        s["shape-routes"].value(shape_route_residual(p));

        MatD Tv = values(p.T);
        Rng rng(mix(cfg.seed, i));
        for (int t = 0; t < cfg.trials; ++t) {
            Field X = field(p, sp.P, rng), Y = field(p, sp.P, rng);
            Field Z = field(p, sp.Q, rng), W = field(p, sp.Q, rng);
            MatD TX = Tv * X.v, TY = Tv * Y.v, TZ = Tv * Z.v, TW = Tv * W.v;
            MatD FZ = F_of(p, Z.v), FW = F_of(p, W.v), FTZ = F_of(p, TZ), FTW = F_of(p, TW);
            auto hf = [&](const MatD& a, const MatD& b, const MatD& V) { return p.ga(p.h(a, b), V); };

            if (run_int1) {
                MatD br = p.nabla(X.v, Y.jet) - p.nabla(Y.v, X.jet);
                double lhs = sp.s2 * p.gt(br, Z.v);
                double rhs = hf(X.v, TY, FZ) - hf(Y.v, TX, FZ);
                s["bracket-identity"].value(std::fabs(lhs - rhs) / (X.n * Y.n * Z.n));
            }
            if (run_int2) {
                MatD br = p.nabla(Z.v, W.jet) - p.nabla(W.v, Z.jet);
                double lhs = sp.s2 * p.gt(br, X.v);
                double rhs = eta_t(p, br) * eta_t(p, X.v) + hf(Z.v, X.v, FTW) - hf(W.v, X.v, FTZ) +
                             hf(W.v, TX, FZ) - hf(Z.v, TX, FW);
                s["bracket-identity"].value(std::fabs(lhs - rhs) / (X.n * Z.n * W.n));
                if (tan) s["eta-bracket"].value(std::fabs(eta_t(p, br)) / (Z.n * W.n));
            }
            if (run_fol1) {
                double lhs = sp.s2 * p.gt(p.nabla(Y.v, X.jet), Z.v);
                double rhs = hf(TX, Y.v, FZ) - hf(X.v, Y.v, FTZ);
                s["D1-identity"].value(std::fabs(lhs - rhs) / (X.n * Y.n * Z.n));
                conn = std::fmax(conn, std::fabs(p.gt(p.nabla(Y.v, X.jet), Z.v)) / (X.n * Y.n * Z.n));
            }
            if (run_fol2) {
                MatD nz = p.nabla(W.v, Z.jet);
                double lhs = sp.s2 * p.gt(nz, X.v);
                double rhs = hf(X.v, W.v, FTZ) - hf(TX, W.v, FZ);
                if (tan && ci.cls == K) rhs -= sp.s2 * eta_t(p, X.v) * p.gt(W.v, Z.v);
                s["D2-identity"].value(std::fabs(lhs - rhs) / (X.n * Z.n * W.n));
                conn = std::fmax(conn, std::fabs(p.gt(nz, X.v)) / (X.n * Z.n * W.n));
            }
            if (product && prod_ok) {
                // A_{FZ} phi X - A_{FTZ} X in parameter coords
                MatD d = p.A(FZ, TX) - p.A(FTZ, X.v);
                crit = std::fmax(crit, tnorm(p, d) / (X.n * Z.n));
                crit_any = true;
            }
        }
    });
    auto out = s.finish();
    if (product && crit_any) {
        for (auto& r : out) {
            if (r.check != "D1-identity" && r.check != "D2-identity") continue;
            r.metrics["criterion_max"] = crit;
            r.metrics["connection_max"] = conn;
            char buf[160];
            std::snprintf(buf, sizeof buf, "criterion A_{FZ} phi X = A_{FTZ} X %s; both foliations totally geodesic %s",
                          crit < kTolH ? "holds" : "fails", conn < kTolH ? "yes" : "no");
            r.notes.push_back(buf);
        }
    }
    return out;
}

std::vector<CheckReport> suite_umbilic(const VerifyConfig& cfg) {
    Suite s("umbilic", cfg);
    auto ci = ambient_info(cfg);
    s.add("totally-umbilic", "h(X,Y) = g(X,Y) H", kTolH);
    s.add("H-in-FD2", "H in F D2", kTolH);
    s.add("invariant-geodesic", "theta = 0 implies h = 0", kTolH);
    // decide umbilicity first when not declared
    bool umbilic = cfg.declared_umbilic;
    std::vector<double> umb(cfg.samples.size(), NAN);
    if (!umbilic) {
        umbilic = true;
        for (size_t i = 0; i < cfg.samples.size(); ++i) {
            try {
                FramedPoint p(cfg.ambient, cfg.immersion, cfg.samples[i], cfg.point_tol);
                auto f = p.forms();
                MatD E = p.E();
                double w = 0;
                for (int a = 0; a < p.m; ++a)
                    for (int b = 0; b < p.m; ++b) {
                        MatD d = p.h(E.col(a), E.col(b));
                        if (a == b) d = d - f.H;
                        w = std::fmax(w, anorm(p, d));
                    }
                if (w > s["totally-umbilic"].r.tolerance) umbilic = false;
            } catch (const DegeneratePoint&) {
            } catch (const EvalError&) {
            }
        }
    }
    for_samples(s, cfg, false, [&](const FramedPoint& p, size_t) {
        if (!umbilic) {
            s.skip_all("not totally umbilic");
            return;
        }
        auto f = p.forms();
        MatD E = p.E();
        double w = 0;
        for (int a = 0; a < p.m; ++a)
            for (int b = 0; b < p.m; ++b) {
                MatD d = p.h(E.col(a), E.col(b));
                if (a == b) d = d - f.H;
                w = std::fmax(w, anorm(p, d));
            }
        s["totally-umbilic"].value(w);
        auto sp = split_distributions(p, cfg.cluster_tol);
        if (p.xi_position != XiPosition::Tangent || !in_three(ci.cls)) {
            s["H-in-FD2"].skip(p.xi_position != XiPosition::Tangent ? "xi not tangent"
                                                                     : class_reason(ci, "cosymplectic, sasakian, kenmotsu"));
        } else if (sp.status != SplitStatus::Ok && sp.status != SplitStatus::Invariant) {
            s["H-in-FD2"].skip(std::string("split status ") + to_string(sp.status));
        } else {
            MatD r = f.H;
            for (int j = 0; j < sp.FD2.c; ++j) {
                double c = p.ga(sp.FD2.col(j), f.H);
                for (int k = 0; k < p.N; ++k) r[k] -= c * sp.FD2(k, j);
            }
            s["H-in-FD2"].value(anorm(p, r));
        }
        if (sp.status == SplitStatus::Invariant && p.xi_position == XiPosition::Tangent && in_three(ci.cls))
            s["invariant-geodesic"].value(std::sqrt(f.h_norm2));
        else
            s["invariant-geodesic"].skip("semi-slant function not identically 0 with xi tangent");
    });
    return s.finish();
}

struct WarpContext {
    std::optional<WarpExtraction> ex;
    std::string why;
};

WarpContext warp_context(const VerifyConfig& cfg, bool need_nontrivial) {
    WarpContext w;
    if (!cfg.warped) {
        w.why = "no warped structure declared";
        return w;
    }
    try {
        w.ex = extract_warping(cfg.ambient, *cfg.warped, cfg.samples);
    } catch (const NotWarped& e) {
        w.why = e.what();
        return w;
    }
    if (need_nontrivial && !w.ex->nontrivial()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "trivial warp (ln f range %.3g)", w.ex->ln_f_range);
        w.why = buf;
        w.ex.reset();
    }
    return w;
}

std::vector<CheckReport> suite_warp(const VerifyConfig& cfg) {
    Suite s("warp-identities", cfg);
    auto ci = ambient_info(cfg);
    s.add("fiber-ratio", "g_F(u) = f^2 g_F(anchor)", 1e-6);
    s.add("connection", "nabla_X V = X(ln f) V for X in TB, V in TF", kTolH);
    s.add("laplacian-forms", "frame Laplacian = divergence-form Laplacian", 1e-5);
    s.add("laplacian-curvature", "lap f / f = sum_i K(e_i ^ e_j)", 1e-5);
    s.add("gauss", "K = Kbar + g(h(X,X),h(Y,Y)) - |h(X,Y)|^2", kTolH);
    s.add("shape-routes", "A by duality = A by the Weingarten formula", kTolH);
    const std::vector<std::pair<std::string, std::string>> ids = {
        {"h_base", "g(h(X,Y), FZ) = 0 | eta(Z) g(X,Y) | eta(Z) g(phi X, Y)"},
        {"h_mixed", "g(h(X,W), FZ) = c(X,W,Z) - phi X(ln f) g(W,Z) + (X - eta(X) xi)(ln f) g(W,TZ)"},
        {"shape_symmetry", "g(A_{FZ} W, X) = g(A_{FW} Z, X)"},
        {"shape_FTZ", "g(A_{FTZ} W, X) = c'(X,W,Z) - phi X(ln f) g(W,TZ) - cos^2 X(ln f) g(W,Z)"},
        {"shape_FZ_phiX", "g(A_{FZ} W, phi X) = (X - eta(X) xi)(ln f) g(W,Z) - phi X(ln f) g(TW,Z)"},
        {"h_base_general", "g(h(X,Y), FZ) = g((nabla_X phi) Y, Z)"},
        {"h_mixed_general", "g(h(X,W), FZ) = -phi X(ln f) g(W,Z) + g((nabla_W phi) X, Z) - X(ln f) g(W,TZ)"},
        {"shape_symmetry_general",
         "g(A_{FZ} W - A_{FW} Z, X) = g((nabla_W phi)X, Z) - g((nabla_Z phi)X, W) - X(ln f)(g(W,TZ) - g(Z,TW))"},
    };
    for (const auto& [k, f] : ids) s.add(k, f, 1e-5);
    s["h_mixed"].r.notes.push_back("c = 0 (cosymplectic), -eta(X) g(FW,FZ) (sasakian), -eta(X) eta(W) eta(FZ) (kenmotsu)");
    s["shape_FTZ"].r.notes.push_back(
        "c' = 0 (cosymplectic), -eta(X) g(TZ,W) (sasakian), cos^2 eta(X)(g(Z,W) - eta(Z) eta(W)) (kenmotsu)");

    auto w = warp_context(cfg, true);
    if (!w.ex && ci.cls == AmbientClass::Sasakian) {
        // no sasakian warped instance: the sasakian forms of h_base and h_mixed
        // are still evaluated with ln f = 0 on the semi-slant split
        for (const auto& [k, f] : ids)
            if (k != "h_base" && k != "h_mixed") s.skip_whole(k, w.why);
        for (auto k : {"fiber-ratio", "connection", "laplacian-forms", "laplacian-curvature", "gauss"})
            s.skip_whole(k, w.why);
        for (auto k : {"h_base", "h_mixed"})
            s[k].r.notes.push_back("not a warped product: evaluated with ln f = 0 (" + w.why + ")");
        for_samples(s, cfg, false, [&](const FramedPoint& p, size_t) {
            SplitPoint sp;
            auto why = split_point(p, cfg, sp);
            if (!why && p.xi_position != XiPosition::Tangent) why = "xi not tangent";
            if (why) {
                for (auto k : {"h_base", "h_mixed", "shape-routes"}) s[k].skip(*why);
                return;
            }
            s["shape-routes"].value(shape_route_residual(p));
            auto r = warp_identity_residuals(p, sp.split, MatD(p.m, 1), ci.cls);
            s["h_base"].value(r.at("h_base"));
            s["h_mixed"].value(r.at("h_mixed"));
        });
        return s.finish();
    }
    if (!w.ex) {
        s.skip_all(w.why);
        return s.finish();
    }
    s["fiber-ratio"].value(w.ex->ratio_spread);
    s["fiber-ratio"].r.metrics["ln_f_range"] = w.ex->ln_f_range;
    s["fiber-ratio"].r.metrics["cross_block"] = w.ex->cross_residual;
    if (w.ex->declared_residual) s["fiber-ratio"].r.metrics["declared_f_residual"] = *w.ex->declared_residual;
    const auto& W = *cfg.warped;

    for_samples(s, cfg, true, [&](const FramedPoint& p, size_t) {
        s["connection"].value(warp_connection_residual(p, W));
        auto wd = warp_data(p, W);
        s["laplacian-forms"].value(std::fabs(wd.laplacian_f - wd.laplacian_f_direct));
        auto cr = warp_curvature_relation(cfg.ambient, p, W);
        s["laplacian-curvature"].value(cr.laplacian);
        s["gauss"].value(cr.gauss);

        SplitPoint sp;
        auto why = split_point(p, cfg, sp);
        if (!why && orientation(p, sp.split, W) != Orientation::Allowed) why = "D1 = TB, D2 = TF fails";
        if (why) {
            for (const auto& [k, f] : ids) s[k].skip(*why);
            s["shape-routes"].skip(*why);
            return;
        }
        s["shape-routes"].value(shape_route_residual(p));
        auto r = warp_identity_residuals(p, sp.split, W, ci.cls);
        for (const auto& [k, f] : ids) {
            bool general = k.size() > 8 && k.compare(k.size() - 8, 8, "_general") == 0;
            if (!general && !in_three(ci.cls)) s[k].skip(class_reason(ci, "cosymplectic, sasakian, kenmotsu"));
            else s[k].value(r.at(k));
        }
    });
    return s.finish();
}

std::vector<CheckReport> suite_nonexistence(const VerifyConfig& cfg) {
    Suite s("nonexistence", cfg);
    auto ci = ambient_info(cfg);
    s.add("angle_chain", "sin^2 Z(ln f) g(X,Y) = g(h(X,Y), FTZ) - g(h(X,phi Y), FZ) [+ Z(ln f) eta(X) eta(Y)]", kTolH);
    s.add("angle_chain_general", "angle chain with the nabla phi and nabla xi terms kept", kTolH);
    s.add("h_phi_symmetry", "g(h(X, phi Y), FZ) = g(h(Y, phi X), FZ)", kTolH);
    s.add("TZ_ln_f", "TZ(ln f) g(X, phi Y) = 0", kTolH);
    s.add("xi_chain", "cos^2 Z(ln f) = -g(h(xi,xi), FTZ)", kTolH);
    s.add("z_ln_f", "Z(ln f) = 0 for Z in D2 = TB", 1e-6);
    s.add("shape-routes", "A by duality = A by the Weingarten formula", kTolH);
    auto w = warp_context(cfg, false);
    if (!w.ex) {
        s.skip_all(w.why);
        return s.finish();
    }
    const auto& W = *cfg.warped;
    for_samples(s, cfg, false, [&](const FramedPoint& p, size_t) {
        SplitPoint sp;
        auto why = split_point(p, cfg, sp);
        if (!why && orientation(p, sp.split, W) != Orientation::Forbidden) why = "D1 = TF, D2 = TB fails";
        if (!why && !in_three(ci.cls)) why = class_reason(ci, "cosymplectic, sasakian, kenmotsu");
        if (why) {
            for (auto k : {"angle_chain", "angle_chain_general", "h_phi_symmetry", "TZ_ln_f", "xi_chain", "z_ln_f",
                           "shape-routes"})
                s[k].skip(*why);
            return;
        }
        s["shape-routes"].value(shape_route_residual(p));
        auto r = nonexistence_chain(p, sp.split, W);
        for (auto k : {"angle_chain", "angle_chain_general", "h_phi_symmetry", "TZ_ln_f", "z_ln_f"}) s[k].value(r.at(k));
        if (r.count("xi_chain")) {
            s["xi_chain"].value(r.at("xi_chain"));
            s["xi_chain"].metric_max("cos2_z_ln_f", r.at("cos2_z_ln_f"));
        } else {
            s["xi_chain"].skip("xi not tangent");
        }
    });
    return s.finish();
}

std::vector<CheckReport> suite_inequality(const VerifyConfig& cfg) {
    Suite s("inequality", cfg);
    auto ci = ambient_info(cfg);
    s.add("slack", "||h||^2 >= 4 m2 (csc^2 + cot^2) ||phi grad ln f||^2 (+ 4 m2 sin^2 | + 2 m1)", kTolH);
    s.add("equality-condition", "g(h(Z,W), V) = 0 where the slack vanishes", 1e-4);
    s.add("adapted-frame", "v_{m2+i} = sec T v_i, w_i = csc F v_i orthonormal", kTolAlg);
    s.add("rhs-monotonicity", "csc^2 + cot^2 decreasing on (0, pi/2)", 0.0);
    s.add("shape-routes", "A by duality = A by the Weingarten formula", kTolH);

    {
        double prev = INFINITY, worst = 0;
        for (int i = 1; i < 1000; ++i) {
            double th = i * (std::numbers::pi / 2) / 1000;
            double sn = std::sin(th), v = (1 + std::cos(th) * std::cos(th)) / (sn * sn);
            worst = std::fmax(worst, v - prev);
            prev = v;
        }
        s["rhs-monotonicity"].value(std::fmax(0.0, worst));
    }

    auto w = warp_context(cfg, true);
    if (!w.ex) {
        std::string why = w.why;
        if (ci.cls == AmbientClass::Sasakian)
            why = "vacuous: no nontrivial warped proper semi-slant instance with n = m1 + 2 m2 in a sasakian ambient (" +
                  w.why + ")";
        for (auto k : {"slack", "equality-condition", "adapted-frame", "shape-routes"}) s.skip_whole(k, why);
        return s.finish();
    }
    const auto& W = *cfg.warped;
    std::set<std::string> formulas;
    bool relaxed = false;
    int mu_dim = -1;
    for_samples(s, cfg, false, [&](const FramedPoint& p, size_t) {
        SplitPoint sp;
        auto why = split_point(p, cfg, sp);
        if (!why && orientation(p, sp.split, W) != Orientation::Allowed) why = "D1 = TB, D2 = TF fails";
        if (!why && ci.cls == AmbientClass::Sasakian && p.xi_position == XiPosition::Normal)
            why = "sasakian ambient with xi normal admits no proper semi-slant submanifold";
        if (!why && !in_three(ci.cls)) why = class_reason(ci, "cosymplectic, sasakian, kenmotsu");
        if (why) {
            for (auto k : {"slack", "equality-condition", "adapted-frame", "shape-routes"}) s[k].skip(*why);
            return;
        }
        s["shape-routes"].value(shape_route_residual(p));
        auto t = inequality_terms(p, sp.split, W, ci.cls);
        formulas.insert(t.formula);
        if (!t.mu_minimal) relaxed = true;
        mu_dim = t.mu_dim;
        s["slack"].value(std::fmax(0.0, -t.slack));
        s["slack"].metric_min("min_slack", t.slack);
        s["slack"].metric_max("max_h_norm2", t.h_norm2);
        s["slack"].metric_max("max_rhs", t.rhs);
        s["adapted-frame"].value(t.frame_residual);
        if (t.slack < 1e-4) s["equality-condition"].value(t.equality_residual);
        else s["equality-condition"].skip("slack >= 1e-4, not at equality");
    });
    auto out = s.finish();
    for (auto& r : out) {
        if (r.check != "slack") continue;
        for (const auto& f : formulas) r.notes.push_back("bound: " + f);
        if (relaxed) {
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "relaxed: n != m1 + 2 m2 (mu of dimension %d); mu components only add to ||h||^2", mu_dim);
            r.notes.push_back(buf);
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> suite_names() { return kSuites; }

std::vector<CheckReport> run_suite(const std::string& name, const VerifyConfig& cfg) {
    if (name == "acm-axioms") return suite_axioms(cfg);
    if (name == "slant-basic") return suite_slant_basic(cfg);
    if (name == "semi-slant-basic") return suite_semi_slant_basic(cfg);
    if (name == "parallel-tensors") return suite_parallel(cfg);
    if (name == "integrability-D1" || name == "integrability-D2" || name == "foliation-D1" ||
        name == "foliation-D2" || name == "product-criterion")
        return suite_distributions(name, cfg);
    if (name == "umbilic") return suite_umbilic(cfg);
    if (name == "warp-identities") return suite_warp(cfg);
    if (name == "nonexistence") return suite_nonexistence(cfg);
    if (name == "inequality") return suite_inequality(cfg);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace slantgeo
