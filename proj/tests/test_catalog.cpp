#include <cmath>
#include <set>

#include "doctest.h"
#include "slantgeo/catalog.hpp"

using namespace slantgeo;

namespace {

double expected(const CatalogEntry& e, const std::vector<double>& u) {
    std::map<std::string, double> env;
    for (size_t i = 0; i < u.size(); ++i) env[e.immersion.params[i]] = u[i];
    return eval(parse(*e.expected_theta, e.immersion.params), env);
}

}  // namespace

TEST_CASE("catalog ids are unique and buildable") {
    auto ids = list_entries();
    std::set<std::string> seen(ids.begin(), ids.end());
    CHECK(seen.size() == ids.size());
    CHECK(ids.size() >= 20);
    for (const auto& id : ids) {
        auto e = build(id);
        CHECK(e.id == id);
        auto S = build_ambient(e.ambient);
        auto I = build_immersion(e.immersion);
        CHECK(static_cast<int>(e.immersion.map.size()) == S.dim());
        CHECK(I.dim() == static_cast<int>(e.immersion.params.size()));
        CHECK((e.expected_xi == "tangent" || e.expected_xi == "normal"));
    }
    CHECK(build("slant-r5-ex1").id == "slant-r5-tangent");
    CHECK_THROWS_AS(build("no-such-entry"), std::out_of_range);
}

TEST_CASE("catalog domains are the stated boxes shrunk by 1e-3") {
    auto e = build("slant-r5-tangent");
    CHECK(e.immersion.domain.lo[1] == doctest::Approx(1e-3));
    CHECK(e.immersion.domain.hi[1] == doctest::Approx(std::numbers::pi / 2 - 1e-3));
}

TEST_CASE("every entry reproduces its expected angle, xi position and class") {
    for (const auto& id : list_entries()) {
        CAPTURE(id);
        auto e = build(id);
        auto cfg = make_config(e, {3});
        std::vector<std::vector<double>> pts;
        for (const auto& u : cfg.samples) pts.push_back(cfg.immersion.eval(u).x);
        auto cls = classify(cfg.ambient, pts);
        if (e.expected_class != "unconstrained") CHECK(cls.label() == e.expected_class);
        CHECK(check_axioms(cfg.ambient, pts).max_residual() < 1e-10);

        double worst = 0;
        int evaluated = 0;
        for (const auto& u : cfg.samples) {
            FramedPoint p(cfg.ambient, cfg.immersion, u);
            CHECK(to_string(p.xi_position) == e.expected_xi);
            std::optional<double> th;
            if (e.kind == "slant") {
                th = slant_spectrum(p).theta;
                REQUIRE(th);
            } else {
                auto sp = split_distributions(p, 1e-6);
                REQUIRE(sp.ok());
                if (e.split_dims) {
                    CHECK(sp.D1.c == e.split_dims->first);
                    CHECK(sp.D2.c == e.split_dims->second);
                }
                th = sp.theta;
            }
            if (e.expected_theta && th) {
                worst = std::fmax(worst, std::fabs(*th - expected(e, u)));
                ++evaluated;
            }
        }
        if (e.expected_theta) {
            CHECK(evaluated == static_cast<int>(cfg.samples.size()));
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("make_config replicates a single grid count and attaches the warping") {
    auto e = build("warped-kenmotsu-tangent");
    auto cfg = make_config(e, {2}, 9);
    CHECK(cfg.samples.size() == 32);
    CHECK(cfg.seed == 9);
    REQUIRE(cfg.warped);
    CHECK(cfg.warped->m1() == 3);
    auto ex = extract_warping(cfg.ambient, *cfg.warped, cfg.samples);
    REQUIRE(ex.declared_residual);
    CHECK(*ex.declared_residual < 1e-9);

    auto g = make_config(build("slant-euclidean"), {2, 5});
    CHECK(g.samples.size() == 10);
    CHECK_FALSE(g.warped);
}

TEST_CASE("custom ambients are validated") {
    AmbientSpec a;
    a.coords = {"y1", "y2", "t"};
    a.metric = {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}};
    a.phi = {{"0", "-1", "0"}, {"1", "0", "0"}, {"0", "0", "0"}};
    a.xi = {"0", "0", "1"};
    a.eta = {"0", "0", "1"};
    auto S = build_ambient(a);
    CHECK(S.dim() == 3);
    CHECK(classify(S, {{0.1, 0.2, 0.3}}).label() == "cosymplectic");

    auto even = a;
    even.coords = {"y1", "y2"};
    CHECK_THROWS_AS(build_ambient(even), std::invalid_argument);
    auto ragged = a;
    ragged.metric[1].pop_back();
    CHECK_THROWS_AS(build_ambient(ragged), std::invalid_argument);
    auto bad = a;
    bad.phi[0][0] = "y1 +";
    CHECK_THROWS_AS(build_ambient(bad), ParseError);
    auto unknown = a;
    unknown.xi[0] = "q";
    CHECK_THROWS_AS(build_ambient(unknown), ParseError);

    ImmersionSpec s{{"x1"}, Box{{0}, {1}}, {"x1", "0", "0"}};
    CHECK(build_immersion(s).dim() == 1);
    s.domain = Box{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(build_immersion(s), std::invalid_argument);
}
