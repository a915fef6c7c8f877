#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "slantgeo/acm.hpp"

using namespace slantgeo;

namespace {

MatD e(int n, int i) {
    MatD v(n, 1);
    v[i] = 1;
    return v;
}

std::vector<std::vector<double>> sample(const ACMStructure& S, int n, uint64_t seed, double half = 1.0) {
    Box b = S.manifold().domain();
    for (size_t i = 0; i < b.dim(); ++i) {
        b.lo[i] = -half;
        b.hi[i] = half;
    }
    return random_points(b, n, seed);
}

// phi as a plain matrix from the expressions, no compiled program
MatD phi_eval(const ACMStructure& S, const std::vector<double>& x) {
    std::map<std::string, double> env;
    for (size_t i = 0; i < x.size(); ++i) env[S.coords()[i]] = x[i];
    int n = S.dim();
    MatD m(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) m(k, j) = eval(S.phi()[k][j], env);
    return m;
}

// (nabla_X phi)Y with every derivative taken by central differences
MatD fd_nabla_phi(const ACMStructure& S, const std::vector<double>& x, const MatD& X, const MatD& Y) {
    const auto& M = S.manifold();
    int n = S.dim();
    double h = 1e-5;
    std::vector<MatD> dg(n);
    MatD dphiX(n, n);
    for (int c = 0; c < n; ++c) {
        auto xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        dg[c] = M.metric_at(xp) - M.metric_at(xm);
        for (auto& v : dg[c].a) v /= 2 * h;
        MatD d = phi_eval(S, xp) - phi_eval(S, xm);
        dphiX = dphiX + (X[c] / (2 * h)) * d;
    }
    MatD ginv = inverse(M.metric_at(x));
    auto Gam = [&](const MatD& A, const MatD& B) {
        MatD r(n, 1);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l)
                        r[k] += A[i] * B[j] * ginv(k, l) * 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        return r;
    };
    MatD phi = phi_eval(S, x);
    return dphiX * Y + Gam(X, phi * Y) - phi * Gam(X, Y);
}

}  // namespace

TEST_CASE("builtin ambients satisfy the almost contact metric axioms") {
    for (int n = 1; n <= 3; ++n) {
        for (auto name : {"euclidean_cosymplectic", "kenmotsu_warped", "sasakian_standard"}) {
            auto S = builtin(name, n);
            CHECK(S.dim() == 2 * n + 1);
            auto r = check_axioms(S, sample(S, 200, 17 + n));
            CHECK(r.samples_used == 200);
            INFO(name, " n=", n);
            CHECK(r.max_residual() < 1e-10);
        }
        auto R = builtin("rotation_family", n, parse("y1 + 2*y2*t", builtin_coords(n)));
        CHECK(check_axioms(R, sample(R, 200, 5)).max_residual() < 1e-10);
    }
}

TEST_CASE("fundamental two-form sign") {
    auto S = builtin("euclidean_cosymplectic", 2);
    auto p = S.at({0, 0, 0, 0, 0});
    CHECK(fundamental_two_form(p, e(5, 0), e(5, 1)) == -1.0);
    CHECK(fundamental_two_form(p, e(5, 1), e(5, 0)) == 1.0);
    CHECK(fundamental_two_form(p, e(5, 0), e(5, 4)) == 0.0);
}

TEST_CASE("d eta convention is fixed by the standard sasakian model") {
    CHECK(default_deta_convention() == DEtaConvention::Half);
    CHECK(std::string(to_string(default_deta_convention())) == "half");
    auto S = builtin("sasakian_standard", 1);
    auto p = S.at({0.3, -0.7, 0.2});
    // eta = 1/2 (dt - y2 dy1): d eta(d1, d2) = 1/2 * (1/2) under the half convention
    CHECK(d_eta(p, e(3, 0), e(3, 1), DEtaConvention::Half) == doctest::Approx(0.25));
    CHECK(d_eta(p, e(3, 0), e(3, 1), DEtaConvention::Full) == doctest::Approx(0.5));
}

TEST_CASE("classification of the builtin ambients") {
    for (int n = 1; n <= 3; ++n) {
        auto E = builtin("euclidean_cosymplectic", n);
        auto rE = classify(E, sample(E, 20, 1));
        CHECK(rE.label() == "cosymplectic");
        CHECK(rE.normal);
        CHECK(rE.consistent);

        auto K = builtin("kenmotsu_warped", n);
        auto rK = classify(K, sample(K, 20, 2));
        CHECK(rK.label() == "kenmotsu");
        CHECK(rK.normal);
        CHECK(!rK.contact_metric);
        CHECK(rK.consistent);

        auto S = builtin("sasakian_standard", n);
        auto rS = classify(S, sample(S, 20, 3));
        CHECK(rS.label() == "sasakian");
        CHECK(rS.contact_metric);
        CHECK(rS.normal);
        CHECK(rS.consistent);
        CHECK(rS.residuals.at("sasakian_nabla_xi") < 1e-10);
    }
}

TEST_CASE("full d eta convention breaks the contact condition") {
    auto S = builtin("sasakian_standard", 2);
    auto r = classify(S, sample(S, 10, 3), 1e-8, DEtaConvention::Full);
    CHECK(!r.contact_metric);
    CHECK(r.label() == "sasakian");
    CHECK(!r.consistent);
}

TEST_CASE("rotation family: constant angle is cosymplectic, varying angle is not") {
    auto c = builtin_coords(2);
    auto R0 = builtin("rotation_family", 2, Expr(0.4));
    CHECK(classify(R0, sample(R0, 10, 1)).label() == "cosymplectic");
    auto R1 = builtin("rotation_family", 2, parse("y1*y3", c));
    auto r = classify(R1, sample(R1, 10, 1));
    CHECK(r.axioms_ok);
    CHECK(r.label() == "almost_contact_metric");
    CHECK(r.residuals.at("cosymplectic") > 1e-3);
    // odd n keeps a standard trailing pair
    auto R3 = builtin("rotation_family", 3, Expr(0.0));
    auto p = R3.at(std::vector<double>(7, 0.1));
    CHECK(p.phi(5, 4) == 1.0);
    CHECK(p.phi(4, 5) == -1.0);
}

TEST_CASE("perturbed structure is rejected") {
    auto S = builtin("euclidean_cosymplectic", 1);
    auto phi = S.phi();
    phi[0][1] = phi[0][1] + Expr(1e-6);
    ACMStructure P("perturbed", S.manifold(), phi, S.xi(), S.eta());
    auto ax = check_axioms(P, sample(P, 30, 4));
    CHECK(ax.max_residual() > 1e-7);
    CHECK(classify(P, sample(P, 30, 4)).label() == "invalid");
}

TEST_CASE("covariant derivative of phi matches finite-difference oracle") {
    auto c = builtin_coords(2);
    std::vector<ACMStructure> cases = {builtin("sasakian_standard", 2), builtin("kenmotsu_warped", 2),
                                       builtin("rotation_family", 2, parse("sin(y1) + y2*t", c))};
    Rng rng(8);
    for (auto& S : cases) {
        for (auto& x : sample(S, 5, 9)) {
            auto p = S.at(x);
            MatD X(5, 1), Y(5, 1);
            for (int i = 0; i < 5; ++i) {
                X[i] = rng.normal();
                Y[i] = rng.normal();
            }
            CHECK(max_abs(p.nabla_phi(X, Y) - fd_nabla_phi(S, x, X, Y)) < 1e-7);
        }
    }
}

TEST_CASE("nijenhuis tensor") {
    auto S = builtin("sasakian_standard", 1);
    auto p = S.at({0.2, 0.5, -0.4});
    // N(d1, d2) = -2 d eta(d1, d2) xi for a normal structure
    MatD N = nijenhuis(p, 0, 1);
    MatD want = (-2 * d_eta(p, e(3, 0), e(3, 1), DEtaConvention::Half)) * p.xi;
    CHECK(max_abs(N - want) < 1e-12);
    CHECK(max_abs(nijenhuis(p, 0, 0)) == 0.0);
    // antisymmetry and bilinearity
    MatD X = column({1, 2, 3}), Y = column({-1, 0.5, 2});
    CHECK(max_abs(nijenhuis(p, X, Y) + nijenhuis(p, Y, X)) < 1e-12);
}

TEST_CASE("conformal change preserves the axioms") {
    auto S = builtin("euclidean_cosymplectic", 1);
    auto C = S.conformal(parse("0.3*y1 + 0.1*t^2", S.coords()));
    CHECK(check_axioms(C, sample(C, 50, 6)).max_residual() < 1e-10);
    auto r = classify(C, sample(C, 10, 6));
    CHECK(r.label() == "almost_contact_metric");
}

TEST_CASE("unknown builtin lists known names") {
    try {
        builtin("hyperbolic", 1);
        FAIL("no error");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("sasakian_standard") != std::string::npos);
    }
    CHECK_THROWS(builtin("rotation_family", 2));
}
