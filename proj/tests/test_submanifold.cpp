#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "slantgeo/submanifold.hpp"

using namespace slantgeo;

namespace {

const double kPi = std::numbers::pi;

Immersion make(const std::vector<std::string>& params, Box box, const std::vector<std::string>& map) {
    std::vector<Expr> e;
    for (auto& s : map) e.push_back(parse(s, params));
    return Immersion(params, box, e);
}

Immersion ex_tangent() {
    return make({"x1", "x2", "x3"}, Box{{-1, 0.01, -1}, {1, 1.56, 1}}, {"x1", "sin(x2)", "0", "cos(x2)", "x3"});
}

Immersion ex_normal() {
    return make({"x1", "x2"}, Box{{0.01, -1}, {1.56, 1}}, {"0", "cos(x1)", "x2", "sin(x1)", "0"});
}

// curved, generic immersion of dimension m into an ambient of dimension N
Immersion lumpy(int m, int N, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> p;
    for (int a = 0; a < m; ++a) p.push_back("x" + std::to_string(a + 1));
    std::vector<Expr> map;
    for (int k = 0; k < N; ++k) {
        Expr e = k < m ? Expr::var(p[k]) : Expr(0.0);
        e = e + Expr(0.3) * oracle::random_expr(rng, 2, p);
        map.push_back(e);
    }
    return Immersion(p, Box{std::vector<double>(m, -0.5), std::vector<double>(m, 0.5)}, map);
}

MatD e(int n, int i) {
    MatD v(n, 1);
    v[i] = 1;
    return v;
}

// h(X, Y) from finite differences of the map and of the metric only
MatD fd_h(const ACMStructure& S, const Immersion& imm, const std::vector<double>& u, int a, int b) {
    int N = imm.ambient_dim();
    double hs = 1e-4;
    auto X = [&](double da, double db) {
        auto w = u;
        w[a] += da;
        w[b] += db;
        return imm.eval(w).x;
    };
    MatD d2(N, 1);
    auto pp = X(hs, hs), pm = X(hs, -hs), mp = X(-hs, hs), mm = X(-hs, -hs);
    for (int k = 0; k < N; ++k) d2[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4 * hs * hs);
    auto v = imm.eval(u);
    const auto& M = S.manifold();
    double h1 = 1e-5;
    std::vector<MatD> dg(N);
    for (int c = 0; c < N; ++c) {
        auto xp = v.x, xm = v.x;
        xp[c] += h1;
        xm[c] -= h1;
        dg[c] = M.metric_at(xp) - M.metric_at(xm);
        for (auto& z : dg[c].a) z /= 2 * h1;
    }
    MatD g = M.metric_at(v.x), gi = inverse(g);
    MatD Ja = v.J.col(a), Jb = v.J.col(b);
    MatD acc = d2;
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int l = 0; l < N; ++l)
                    acc[k] += Ja[i] * Jb[j] * gi(k, l) * 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
    // normal projection with the metric
    MatD G = v.J.t() * g * v.J;
    MatD tan = v.J * inverse(G) * v.J.t() * g * acc;
    return acc - tan;
}

}  // namespace

TEST_CASE("frames of the tangent-xi example") {
    auto S = builtin("euclidean_cosymplectic", 2);
    FramedPoint p(S, ex_tangent(), {0.3, kPi / 3, 0.1});
    CHECK(p.xi_position == XiPosition::Tangent);
    CHECK(max_abs(values(p.xi_n)) < 1e-15);
    MatD te = p.tangent_frame();
    CHECK(max_abs(te.col(2) - e(5, 4)) < 1e-15);
    CHECK(max_abs(te.col(0) - e(5, 0)) == 0.0);
    MatD nf = p.normal_frame();
    CHECK(nf.c == 2);
    MatD all(5, 5);
    for (int i = 0; i < 3; ++i) all.set_col(i, te.col(i));
    for (int i = 0; i < 2; ++i) all.set_col(3 + i, nf.col(i));
    CHECK(max_abs(all.t() * all - MatD::identity(5)) < 1e-12);
    CHECK(p.Mp.c == 2);
    // singular values of T on M_p are cos(pi/3)
    MatD Tp = p.Mp.t() * p.Gv() * values(p.T) * p.Mp;
    auto sv = singular_values(Tp);
    CHECK(sv[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("frames of the normal-xi example") {
    auto S = builtin("euclidean_cosymplectic", 2);
    FramedPoint p(S, ex_normal(), {kPi / 4, 0.5});
    CHECK(p.xi_position == XiPosition::Normal);
    CHECK(max_abs(values(p.xi_t)) < 1e-15);
    CHECK(p.Mp.c == 2);
}

TEST_CASE("invariant and anti-invariant planes") {
    auto S = builtin("euclidean_cosymplectic", 2);
    auto inv = make({"x1", "x2"}, Box{{-1, -1}, {1, 1}}, {"x1", "x2", "0", "0", "0"});
    FramedPoint p(S, inv, {0.2, 0.1});
    auto op = p.operators();
    CHECK(max_abs(op.F) == 0.0);
    CHECK(op.T(1, 0) == 1.0);
    CHECK(op.T(0, 1) == -1.0);
    CHECK(max_abs(p.forms().H) == 0.0);
    auto anti = make({"x1", "x2"}, Box{{-1, -1}, {1, 1}}, {"x1", "0", "0", "0", "x2"});
    FramedPoint q(S, anti, {0.2, 0.1});
    CHECK(q.xi_position == XiPosition::Tangent);
    MatD Tq = values(q.T) * q.Mp;
    CHECK(max_abs(Tq) == 0.0);
}

TEST_CASE("unit circle has unit mean curvature and identity shape operator") {
    auto S = builtin("euclidean_cosymplectic", 2);
    auto circ = make({"x1"}, Box{{-3}, {3}}, {"cos(x1)", "sin(x1)", "0", "0", "0"});
    for (double u : {-1.0, 0.3, 2.0}) {
        FramedPoint p(S, circ, {u});
        auto f = p.forms();
        CHECK(norm(f.H) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(f.h_norm2 == doctest::Approx(1.0).epsilon(1e-14));
        MatD inward = column({-std::cos(u), -std::sin(u), 0, 0, 0});
        MatD A = p.A(inward, column({1.0}));
        CHECK(A[0] == doctest::Approx(1.0));
        CHECK(max_abs(fd_h(S, circ, {u}, 0, 0) - f.H) < 1e-6);
    }
    FramedPoint p(S, circ, {0.0});
    CHECK_THROWS_AS(p.A(column({0, 1, 0, 0, 0}), column({1.0})), std::invalid_argument);
}

TEST_CASE("second fundamental form agrees with finite differences in curved ambients") {
    for (auto name : {"kenmotsu_warped", "sasakian_standard"}) {
        auto S = builtin(name, 2);
        auto imm = lumpy(3, 5, 42);
        for (auto& u : random_points(imm.domain(), 5, 7)) {
            FramedPoint p(S, imm, u);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    CHECK(max_abs(p.h_ab(a, b) - p.h_ab(b, a)) < 1e-12);
                    CHECK(max_abs(p.h_ab(a, b) - fd_h(S, imm, u, a, b)) < 2e-6);
                }
        }
    }
}

TEST_CASE("shape operator: duality and Weingarten routes agree") {
    Rng rng(3);
    for (auto name : {"euclidean_cosymplectic", "kenmotsu_warped", "sasakian_standard"}) {
        auto S = builtin(name, 3);
        auto imm = lumpy(4, 7, 11);
        for (auto& u : random_points(imm.domain(), 5, 2)) {
            FramedPoint p(S, imm, u);
            for (int al = 0; al < 3; ++al) {
                std::vector<double> c(3, 0.0);
                c[al] = 1;
                MatJ Z = p.normal_field(c);
                for (int a = 0; a < 4; ++a) {
                    MatD X = e(4, a);
                    MatD d1 = p.A(values(Z), X), d2 = p.A_weingarten(Z, X);
                    CHECK(max_abs(d1 - d2) < 1e-9);
                }
                // symmetry of A in an orthonormal frame
                MatD E = p.E();
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        CHECK(std::fabs(p.gt(p.A(values(Z), E.col(a)), E.col(b)) -
                                        p.gt(E.col(a), p.A(values(Z), E.col(b)))) < 1e-10);
            }
        }
    }
}

TEST_CASE("normal connection: Weingarten split and metric compatibility") {
    auto S = builtin("kenmotsu_warped", 2);
    auto imm = lumpy(2, 5, 5);
    std::vector<double> u = {0.1, -0.2};
    // Z = c0(u) nu_0 + c1(u) nu_2, W = nu_1 + u1 nu_2, with hand-written derivatives
    auto fields = [&](const FramedPoint& p, const std::vector<double>& w, MatJ& Z, MatJ& W) {
        Jet c0(std::sin(w[0]) + w[1]), c1(w[0] * w[1]);
        c0.d[0] = std::cos(w[0]);
        c0.d[1] = 1;
        c1.d[0] = w[1];
        c1.d[1] = w[0];
        Jet d1(w[0]);
        d1.d[0] = 1;
        Z = c0 * p.Nj.col(0) + c1 * p.Nj.col(2);
        W = p.Nj.col(1) + d1 * p.Nj.col(2);
    };
    FramedPoint p(S, imm, u);
    MatJ Z, W;
    fields(p, u, Z, W);
    for (int a = 0; a < 2; ++a) {
        MatD X = e(2, a);
        MatD split = p.nabla_bar(X, Z) + p.push(p.A(values(Z), X)) - p.D(X, Z);
        CHECK(max_abs(split) < 1e-9);
        auto gZW = [&](double s) {
            auto w = u;
            w[a] += s;
            FramedPoint q(S, imm, w);
            MatJ Zq, Wq;
            fields(q, w, Zq, Wq);
            return q.ga(values(Zq), values(Wq));
        };
        double lhs = oracle::central_diff(gZW, 1e-5);
        double rhs = p.ga(p.D(X, Z), values(W)) + p.ga(values(Z), p.D(X, W));
        CHECK(std::fabs(lhs - rhs) < 1e-8);
    }
    // constant normal field along a plane in Euclidean space
    auto E = builtin("euclidean_cosymplectic", 2);
    auto plane = make({"x1", "x2"}, Box{{-1, -1}, {1, 1}}, {"x1", "x2", "x1 + x2", "0", "0"});
    FramedPoint q(E, plane, {0.2, 0.3});
    MatJ N0 = q.normal_field({1, 0, 0});
    CHECK(max_abs(q.D(e(2, 0), N0)) < 1e-15);
}

TEST_CASE("induced connection matches the intrinsic Levi-Civita connection") {
    auto S = builtin("sasakian_standard", 2);
    auto imm = lumpy(3, 5, 9);
    auto M = induced_manifold(S, imm);
    std::vector<double> u = {0.2, 0.1, -0.3};
    FramedPoint p(S, imm, u);
    auto mp = M.at(u);
    CHECK(max_abs(mp.g - p.Gv()) < 1e-12);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            MatJ Y(3, 1);
            Y[b] = Jet(1.0);
            MatD lhs = p.nabla(e(3, a), Y);
            MatD rhs = mp.Gamma(e(3, a), e(3, b));
            CHECK(max_abs(lhs - rhs) < 1e-9);
        }
}

TEST_CASE("block identities hold at every framed point") {
    double worst = 0;
    int n = 0;
    for (auto name : {"euclidean_cosymplectic", "kenmotsu_warped", "sasakian_standard"}) {
        auto S = builtin(name, 3);
        for (int m : {1, 2, 3, 5}) {
            auto imm = lumpy(m, 7, 100 + m);
            for (auto& u : random_points(imm.domain(), 10, m)) {
                FramedPoint p(S, imm, u);
                auto op = p.operators();
                worst = std::fmax(worst, block_identities(op).max());
                // T is skew in the orthonormal frame
                worst = std::fmax(worst, max_abs(op.T + op.T.t()));
                ++n;
            }
        }
    }
    CHECK(n == 120);
    CHECK(worst < 1e-10);
}

TEST_CASE("rank deficiency is a degenerate point") {
    auto S = builtin("euclidean_cosymplectic", 1);
    auto bad = make({"x1", "x2"}, Box{{-1, -1}, {1, 1}}, {"x1", "x1", "x1"});
    CHECK_THROWS_AS(FramedPoint(S, bad, {0.1, 0.2}), DegeneratePoint);
    auto cusp = make({"x1"}, Box{{-1}, {1}}, {"x1^2", "x1^3", "0"});
    CHECK_THROWS_AS(FramedPoint(S, cusp, {0.0}), DegeneratePoint);
    CHECK_NOTHROW(FramedPoint(S, cusp, {0.5}));
}
