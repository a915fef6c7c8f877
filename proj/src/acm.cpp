#include "slantgeo/acm.hpp"

#include <cmath>
#include <mutex>

namespace slantgeo {

ACMStructure::ACMStructure(std::string name, ChartedManifold M, std::vector<std::vector<Expr>> phi,
                           std::vector<Expr> xi, std::vector<Expr> eta)
    : name_(std::move(name)), M_(std::move(M)), phi_(std::move(phi)), xi_(std::move(xi)), eta_(std::move(eta)) {
    int n = M_.dim();
    if (n % 2 == 0) throw std::invalid_argument("almost contact manifold must be odd-dimensional");
    if (static_cast<int>(phi_.size()) != n || static_cast<int>(xi_.size()) != n || static_cast<int>(eta_.size()) != n)
        throw std::invalid_argument("phi, xi, eta must match the chart dimension");
    for (auto& r : phi_)
        if (static_cast<int>(r.size()) != n) throw std::invalid_argument("phi must be square");
    std::vector<Expr> out;
    auto push = [&](const Expr& e) {
        out.push_back(e);
        for (auto& c : M_.coords()) out.push_back(differentiate(e, c));
    };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) push(phi_[k][j]);
    for (int k = 0; k < n; ++k) push(xi_[k]);
    for (int k = 0; k < n; ++k) push(eta_[k]);
    prog_ = std::make_shared<Program>(out, M_.coords());
}

AmbientPoint ACMStructure::at(const std::vector<double>& x, bool curvature) const {
    int n = dim();
    AmbientPoint p;
    p.x = x;
    p.m = M_.at(x, curvature);
    std::vector<double> v;
    try {
        v = prog_->run(x);
    } catch (const EvalError& e) {
        throw DegeneratePoint(e.what());
    }
    const int s = n + 1;
    size_t o = 0;
    p.phi = MatD(n, n);
    p.dphi.assign(n, MatD(n, n));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j, o += s) {
            p.phi(k, j) = v[o];
            for (int c = 0; c < n; ++c) p.dphi[c](k, j) = v[o + 1 + c];
        }
    p.xi = MatD(n, 1);
    p.dxi.assign(n, MatD(n, 1));
    for (int k = 0; k < n; ++k, o += s) {
        p.xi[k] = v[o];
        for (int c = 0; c < n; ++c) p.dxi[c][k] = v[o + 1 + c];
    }
    p.eta = MatD(1, n);
    p.deta.assign(n, MatD(1, n));
    for (int k = 0; k < n; ++k, o += s) {
        p.eta[k] = v[o];
        for (int c = 0; c < n; ++c) p.deta[c][k] = v[o + 1 + c];
    }
    return p;
}

ACMStructure ACMStructure::conformal(const Expr& f) const {
    int n = dim();
    Expr ef = exp(f), emf = exp(-f), e2f = exp(Expr(2.0) * f);
    std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = e2f * M_.metric()[i][j];
    std::vector<Expr> xi(n), eta(n);
    for (int i = 0; i < n; ++i) {
        xi[i] = emf * xi_[i];
        eta[i] = ef * eta_[i];
    }
    return ACMStructure(name_ + "+conformal", ChartedManifold(M_.coords(), g, M_.domain()), phi_, xi, eta);
}

// ---------------------------------------------------------------- pointwise tensors

MatD AmbientPoint::nabla_phi(const MatD& X, const MatD& Y) const {
    int n = this->n();
    // (nabla_X phi)Y = X(phi)Y + Gamma(X, phi Y) - phi Gamma(X, Y)
    MatD dphiX(n, n);
    for (int c = 0; c < n; ++c)
        if (X[c] != 0) dphiX = dphiX + X[c] * dphi[c];
    return dphiX * Y + m.Gamma(X, phi * Y) - phi * m.Gamma(X, Y);
}

MatD AmbientPoint::nabla_xi(const MatD& X) const {
    int n = this->n();
    MatD d(n, 1);
    for (int c = 0; c < n; ++c)
        if (X[c] != 0) d = d + X[c] * dxi[c];
    return d + m.Gamma(X, xi);
}

double AmbientPoint::nabla_eta(const MatD& X, const MatD& Y) const {
    int n = this->n();
    double s = 0;
    for (int c = 0; c < n; ++c) s += X[c] * (deta[c] * Y)[0];
    return s - (eta * m.Gamma(X, Y))[0];
}

std::vector<MatD> AmbientPoint::frame() const {
    int n = this->n();
    std::vector<MatD> basis;
    for (int i = 0; i < n; ++i) {
        MatD v(n, 1);
        v[i] = 1;
        basis.push_back(v);
    }
    return gram_schmidt(basis, m.g);
}

double fundamental_two_form(const AmbientPoint& p, const MatD& X, const MatD& Y) { return p.g(X, p.phi * Y); }

double d_eta(const AmbientPoint& p, const MatD& X, const MatD& Y, DEtaConvention c) {
    int n = p.n();
    // constant coefficient fields commute
    double s = 0;
    for (int a = 0; a < n; ++a) s += X[a] * (p.deta[a] * Y)[0] - Y[a] * (p.deta[a] * X)[0];
    return c == DEtaConvention::Half ? 0.5 * s : s;
}

MatD nijenhuis(const AmbientPoint& p, int i, int j) {
    int n = p.n();
    MatD N(n, 1);
    for (int mm = 0; mm < n; ++mm) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += p.phi(k, i) * p.dphi[k](mm, j) - p.phi(k, j) * p.dphi[k](mm, i);
        for (int l = 0; l < n; ++l) s -= p.phi(mm, l) * (p.dphi[i](l, j) - p.dphi[j](l, i));
        N[mm] = s;
    }
    return N;
}

MatD nijenhuis(const AmbientPoint& p, const MatD& X, const MatD& Y) {
    int n = p.n();
    MatD N(n, 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (X[i] * Y[j] != 0) N = N + (X[i] * Y[j]) * nijenhuis(p, i, j);
    return N;
}

// ---------------------------------------------------------------- builtins

std::vector<std::string> builtin_coords(int n) {
    std::vector<std::string> c;
    for (int i = 1; i <= 2 * n; ++i) c.push_back("y" + std::to_string(i));
    c.push_back("t");
    return c;
}

std::vector<std::string> builtin_names() {
    return {"euclidean_cosymplectic", "kenmotsu_warped", "rotation_family", "sasakian_standard"};
}

ACMStructure builtin(const std::string& name, int n, const std::optional<Expr>& f) {
    if (n < 1) throw std::invalid_argument("builtin ambient needs n >= 1");
    int N = 2 * n + 1;
    auto coords = builtin_coords(n);
    Box box{std::vector<double>(N, -10.0), std::vector<double>(N, 10.0)};
    std::vector<std::vector<Expr>> g(N, std::vector<Expr>(N)), phi(N, std::vector<Expr>(N));
    std::vector<Expr> xi(N), eta(N);
    Expr T = Expr::var("t");
    auto y = [&](int i) { return Expr::var(coords[i - 1]); };  // 1-based

    // standard complex structure on pairs: d_{2i-1} -> d_{2i}, d_{2i} -> -d_{2i-1}
    auto std_pairs = [&](int from_pair) {
        for (int i = from_pair; i <= n; ++i) {
            phi[2 * i - 1][2 * i - 2] = Expr(1.0);
            phi[2 * i - 2][2 * i - 1] = Expr(-1.0);
        }
    };

    if (name == "euclidean_cosymplectic" || name == "kenmotsu_warped") {
        Expr w = name == "kenmotsu_warped" ? exp(Expr(2.0) * T) : Expr(1.0);
        for (int i = 0; i < 2 * n; ++i) g[i][i] = w;
        g[N - 1][N - 1] = Expr(1.0);
        std_pairs(1);
        xi[N - 1] = Expr(1.0);
        eta[N - 1] = Expr(1.0);
    } else if (name == "sasakian_standard") {
        // eta = 1/2 (dt - sum y_{2i} dy_{2i-1}), xi = 2 d_t, g = eta (x) eta + 1/4 sum dy^2
        eta[N - 1] = Expr(0.5);
        for (int i = 1; i <= n; ++i) eta[2 * i - 2] = Expr(-0.5) * y(2 * i);
        xi[N - 1] = Expr(2.0);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                Expr v = eta[a] * eta[b];
                if (a == b && a < N - 1) v = v + Expr(0.25);
                g[a][b] = v;
            }
        for (int i = 1; i <= n; ++i) {
            // phi d_{2i-1} = -d_{2i};  phi d_{2i} = d_{2i-1} + y_{2i} d_t
            phi[2 * i - 1][2 * i - 2] = Expr(-1.0);
            phi[2 * i - 2][2 * i - 1] = Expr(1.0);
            phi[N - 1][2 * i - 1] = y(2 * i);
        }
    } else if (name == "rotation_family") {
        if (!f) throw std::invalid_argument("rotation_family needs a function f");
        for (int i = 0; i < N; ++i) g[i][i] = Expr(1.0);
        Expr c = cos(*f), s = sin(*f);
        // J1: e1->e2, e2->-e1, e3->e4, e4->-e3
        // J2: e1->e3, e2->-e4, e3->-e1, e4->e2
        const int J1[4][4] = {{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
        const int J2[4][4] = {{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}};
        int blocks = n / 2;
        for (int b = 0; b < blocks; ++b)
            for (int r = 0; r < 4; ++r)
                for (int q = 0; q < 4; ++q) phi[4 * b + r][4 * b + q] = Expr(J1[r][q]) * c - Expr(J2[r][q]) * s;
        if (n % 2 == 1) std_pairs(n);
        xi[N - 1] = Expr(1.0);
        eta[N - 1] = Expr(1.0);
    } else {
        std::string known;
        for (auto& b : builtin_names()) known += " " + b;
        throw std::invalid_argument("unknown builtin ambient '" + name + "'; known:" + known);
    }
    return ACMStructure(name + "(" + std::to_string(n) + ")", ChartedManifold(coords, g, box), phi, xi, eta);
}

// ---------------------------------------------------------------- checks

const char* to_string(DEtaConvention c) { return c == DEtaConvention::Half ? "half" : "full"; }

double AxiomReport::max_residual() const {
    double r = 0;
    for (auto& [k, v] : residuals) r = std::fmax(r, v);
    return r;
}

namespace {

void bump(std::map<std::string, double>& m, const std::string& k, double v) {
    auto it = m.find(k);
    if (it == m.end())
        m[k] = v;
    else
        it->second = std::fmax(it->second, v);
}

// g-norm of an ambient vector
double gnorm(const AmbientPoint& p, const MatD& v) { return std::sqrt(std::fmax(0.0, p.g(v, v))); }

}  // namespace

AxiomReport check_axioms(const ACMStructure& S, const std::vector<std::vector<double>>& samples) {
    AxiomReport r;
    for (const char* k : {"phi_squared", "eta_xi", "phi_xi", "eta_phi", "compatible_metric", "eta_is_g_xi"})
        r.residuals[k] = 0.0;
    for (auto& x : samples) {
        AmbientPoint p;
        std::vector<MatD> E;
        try {
            p = S.at(x);
            E = p.frame();
        } catch (const DegeneratePoint&) {
            ++r.degenerate;
            continue;
        }
        ++r.samples_used;
        int n = p.n();
        for (int a = 0; a < n; ++a) {
            MatD X = E[a];
            MatD lhs = p.phi * (p.phi * X) + X - p.eta_of(X) * p.xi;
            bump(r.residuals, "phi_squared", gnorm(p, lhs));
            bump(r.residuals, "eta_phi", std::fabs(p.eta_of(p.phi * X)));
            bump(r.residuals, "eta_is_g_xi", std::fabs(p.eta_of(X) - p.g(X, p.xi)));
            for (int b = 0; b < n; ++b) {
                MatD Y = E[b];
                double v = p.g(p.phi * X, p.phi * Y) - p.g(X, Y) + p.eta_of(X) * p.eta_of(Y);
                bump(r.residuals, "compatible_metric", std::fabs(v));
            }
        }
        bump(r.residuals, "eta_xi", std::fabs(p.eta_of(p.xi) - 1.0));
        bump(r.residuals, "phi_xi", gnorm(p, p.phi * p.xi));
    }
    return r;
}

DEtaConvention default_deta_convention() {
    static DEtaConvention conv = [] {
        ACMStructure s = builtin("sasakian_standard", 1);
        auto pts = random_points(s.manifold().domain().shrunk(9.0), 8, 1);
        double best[2] = {0, 0};
        for (auto& x : pts) {
            auto p = s.at(x);
            auto E = p.frame();
            for (int c = 0; c < 2; ++c)
                for (auto& X : E)
                    for (auto& Y : E) {
                        double v = fundamental_two_form(p, X, Y) - d_eta(p, X, Y, c ? DEtaConvention::Full : DEtaConvention::Half);
                        best[c] = std::fmax(best[c], std::fabs(v));
                    }
        }
        return best[0] <= best[1] ? DEtaConvention::Half : DEtaConvention::Full;
    }();
    return conv;
}

std::string StructureClassReport::label() const {
    if (!axioms_ok) return "invalid";
    if (cosymplectic) return "cosymplectic";
    if (sasakian) return "sasakian";
    if (kenmotsu) return "kenmotsu";
    if (contact_metric) return "contact_metric";
    return "almost_contact_metric";
}

StructureClassReport classify(const ACMStructure& S, const std::vector<std::vector<double>>& samples, double tol,
                              std::optional<DEtaConvention> conv, double axiom_tol) {
    StructureClassReport r;
    r.tol = tol;
    r.convention = conv ? *conv : default_deta_convention();
    AxiomReport ax = check_axioms(S, samples);
    for (auto& [k, v] : ax.residuals) r.residuals["axiom_" + k] = v;
    r.axioms_ok = ax.samples_used > 0 && ax.max_residual() < axiom_tol;

    for (const char* k : {"contact_metric", "normal", "sasakian", "kenmotsu", "cosymplectic", "nabla_eta",
                          "sasakian_nabla_xi", "kenmotsu_nabla_xi", "cosymplectic_nabla_xi"})
        r.residuals[k] = 0.0;
    for (auto& x : samples) {
        AmbientPoint p;
        std::vector<MatD> E;
        try {
            p = S.at(x);
            E = p.frame();
        } catch (const DegeneratePoint&) {
            ++r.degenerate;
            continue;
        }
        ++r.samples_used;
        int n = p.n();
        for (int a = 0; a < n; ++a) {
            const MatD& X = E[a];
            MatD nx = p.nabla_xi(X);
            bump(r.residuals, "sasakian_nabla_xi", gnorm(p, nx + p.phi * X));
            bump(r.residuals, "kenmotsu_nabla_xi", gnorm(p, nx - X + p.eta_of(X) * p.xi));
            bump(r.residuals, "cosymplectic_nabla_xi", gnorm(p, nx));
            for (int b = 0; b < n; ++b) {
                const MatD& Y = E[b];
                MatD np = p.nabla_phi(X, Y);
                bump(r.residuals, "sasakian", gnorm(p, np - (p.g(X, Y) * p.xi - p.eta_of(Y) * X)));
                bump(r.residuals, "kenmotsu",
                     gnorm(p, np - (p.g(p.phi * X, Y) * p.xi - p.eta_of(Y) * (p.phi * X))));
                bump(r.residuals, "cosymplectic", gnorm(p, np));
                bump(r.residuals, "nabla_eta", std::fabs(p.nabla_eta(X, Y)));
                bump(r.residuals, "contact_metric",
                     std::fabs(fundamental_two_form(p, X, Y) - d_eta(p, X, Y, r.convention)));
                MatD N = nijenhuis(p, X, Y) + (2.0 * d_eta(p, X, Y, r.convention)) * p.xi;
                bump(r.residuals, "normal", gnorm(p, N));
            }
        }
    }
    if (r.samples_used == 0) return r;
    r.contact_metric = r.residuals["contact_metric"] < tol;
    r.normal = r.residuals["normal"] < tol;
    r.sasakian = r.axioms_ok && r.residuals["sasakian"] < tol;
    r.kenmotsu = r.axioms_ok && r.residuals["kenmotsu"] < tol;
    r.cosymplectic = r.axioms_ok && r.residuals["cosymplectic"] < tol;
    if (r.sasakian && !(r.contact_metric && r.normal)) r.consistent = false;
    if (r.sasakian && r.residuals["sasakian_nabla_xi"] >= tol) r.consistent = false;
    if (r.kenmotsu && r.residuals["kenmotsu_nabla_xi"] >= tol) r.consistent = false;
    if (r.cosymplectic && (r.sasakian || r.kenmotsu)) r.consistent = false;
    return r;
}

}  // namespace slantgeo
