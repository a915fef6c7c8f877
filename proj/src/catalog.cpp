#include "slantgeo/catalog.hpp"

#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

namespace slantgeo {

namespace {

std::vector<std::vector<Expr>> parse_matrix(const std::vector<std::vector<std::string>>& m,
                                            const std::vector<std::string>& vars, size_t n, const char* what) {
    if (m.size() != n) throw std::invalid_argument(std::string(what) + " must be " + std::to_string(n) + " x " + std::to_string(n));
    std::vector<std::vector<Expr>> out(n);
    for (size_t i = 0; i < n; ++i) {
        if (m[i].size() != n)
            throw std::invalid_argument(std::string(what) + " must be " + std::to_string(n) + " x " + std::to_string(n));
        for (const auto& s : m[i]) out[i].push_back(parse(s, vars));
    }
    return out;
}

std::vector<Expr> parse_vector(const std::vector<std::string>& v, const std::vector<std::string>& vars, size_t n,
                               const char* what) {
    if (v.size() != n) throw std::invalid_argument(std::string(what) + " must have " + std::to_string(n) + " entries");
    std::vector<Expr> out;
    for (const auto& s : v) out.push_back(parse(s, vars));
    return out;
}

}  // namespace

ACMStructure build_ambient(const AmbientSpec& a) {
    if (!a.builtin.empty()) {
        std::optional<Expr> f;
        if (a.f) f = parse(*a.f, builtin_coords(a.n));
        return builtin(a.builtin, a.n, f);
    }
    size_t N = a.coords.size();
    if (N == 0 || N % 2 == 0) throw std::invalid_argument("ambient dimension must be odd");
    auto g = parse_matrix(a.metric, a.coords, N, "metric");
    auto phi = parse_matrix(a.phi, a.coords, N, "phi");
    auto xi = parse_vector(a.xi, a.coords, N, "xi");
    auto eta = parse_vector(a.eta, a.coords, N, "eta");
    Box box = a.box.value_or(Box{std::vector<double>(N, -10.0), std::vector<double>(N, 10.0)});
    if (box.dim() != N || box.hi.size() != N) throw std::invalid_argument("ambient box dimension mismatch");
    return ACMStructure("custom", ChartedManifold(a.coords, g, box), phi, xi, eta);
}

Immersion build_immersion(const ImmersionSpec& s) {
    if (s.params.empty()) throw std::invalid_argument("submanifold needs parameters");
    if (s.domain.lo.size() != s.params.size() || s.domain.hi.size() != s.params.size())
        throw std::invalid_argument("domain dimension does not match the parameters");
    for (size_t i = 0; i < s.params.size(); ++i)
        if (!(s.domain.lo[i] < s.domain.hi[i]) && s.domain.lo[i] != s.domain.hi[i])
            throw std::invalid_argument("domain bounds out of order");
    std::vector<Expr> map;
    for (const auto& e : s.map) map.push_back(parse(e, s.params));
    return Immersion(s.params, s.domain, map);
}

namespace {

const double kPi = std::numbers::pi;
const std::vector<std::string> P2 = {"x1", "x2"}, P3 = {"x1", "x2", "x3"}, P4 = {"x1", "x2", "x3", "x4"},
                               P5 = {"x1", "x2", "x3", "x4", "x5"}, P6 = {"x1", "x2", "x3", "x4", "x5", "x6"};

AmbientSpec amb(const std::string& name, int n, std::optional<std::string> f = std::nullopt) {
    AmbientSpec a;
    a.builtin = name;
    a.n = n;
    a.f = std::move(f);
    return a;
}

ImmersionSpec imm(const std::vector<std::string>& params, Box box, std::vector<std::string> map) {
    return {params, box.shrunk(1e-3), std::move(map)};
}

// w * a(s), a the Legendrian torus in S^5, plus a flat slant plane with the same metric
std::vector<std::string> torus_map(const std::string& t) {
    std::vector<std::string> m;
    for (const char* ang : {"x3", "x4", "-(x3 + x4)"}) {
        std::string c = "cos(" + std::string(ang) + ")", s = "sin(" + std::string(ang) + ")";
        m.push_back("(x1*" + c + " - x2*" + s + ")/sqrt(3)");
        m.push_back("(x1*" + s + " + x2*" + c + ")/sqrt(3)");
    }
    m.push_back("sqrt(2/3)*x3 + x4/sqrt(6)");
    m.push_back("x4/sqrt(2)");
    m.push_back(t);
    return m;
}

// e^{k a}(cos a cos b, cos a sin b, sin a cos b, sin a sin b), constant angle atan(1/k)
std::vector<std::string> spiral(const std::string& a, const std::string& b) {
    std::string s = "exp(0.5*" + a + ")";
    return {s + "*cos(" + a + ")*cos(" + b + ")", s + "*cos(" + a + ")*sin(" + b + ")",
            s + "*sin(" + a + ")*cos(" + b + ")", s + "*sin(" + a + ")*sin(" + b + ")"};
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

using Maker = std::function<CatalogEntry()>;

const std::vector<std::pair<std::string, Maker>>& table() {
    static const std::vector<std::pair<std::string, Maker>> t = {
        {"slant-r5-tangent",
         [] {
             CatalogEntry e;
             e.title = "(x1, sin x2, 0, cos x2, x3) in R^5 with xi tangent";
             e.ambient = amb("euclidean_cosymplectic", 2);
             e.immersion = imm(P3, Box{{-1, 0, -1}, {1, kPi / 2, 1}}, {"x1", "sin(x2)", "0", "cos(x2)", "x3"});
             e.expected_theta = "x2";
             e.expected_xi = "tangent";
             e.expected_class = "unconstrained";
             e.kind = "slant";
             e.suites = {"acm-axioms", "slant-basic", "parallel-tensors"};
             e.notes = "Only the almost contact metric axioms are required here; the class is reported, not "
                       "asserted. Alias: slant-r5-ex1.";
             return e;
         }},
        {"slant-euclidean",
         [] {
             CatalogEntry e;
             e.title = "(0, cos x1, x2, sin x1, 0) in the cosymplectic R^5";
             e.ambient = amb("euclidean_cosymplectic", 2);
             e.immersion = imm(P2, Box{{0, -1}, {kPi / 2, 1}}, {"0", "cos(x1)", "x2", "sin(x1)", "0"});
             e.expected_theta = "x1";
             e.expected_xi = "normal";
             e.expected_class = "cosymplectic";
             e.kind = "slant";
             e.suites = {"acm-axioms", "slant-basic", "parallel-tensors"};
             return e;
         }},
        {"slant-kenmotsu",
         [] {
             CatalogEntry e;
             e.title = "(x2, sin x1, 1972, cos x1) in the t = 0 slice of R x_{e^t} R^4";
             e.ambient = amb("kenmotsu_warped", 2);
             e.immersion = imm(P2, Box{{0, -1}, {kPi / 2, 1}}, {"x2", "sin(x1)", "1972", "cos(x1)", "0"});
             e.expected_theta = "x1";
             e.expected_xi = "normal";
             e.expected_class = "kenmotsu";
             e.kind = "slant";
             e.suites = {"acm-axioms", "slant-basic"};
             return e;
         }},
        {"slant-hyperkahler",
         [] {
             CatalogEntry e;
             e.title = "J1-complex, J2-totally real plane in flat R^4 x R";
             e.ambient = amb("rotation_family", 2, "atan(1 + y1^2 + y2^2)");
             e.immersion = imm(P2, Box{{-1, -1}, {1, 1}}, {"x1", "x2", "0", "0", "0"});
             e.expected_theta = "atan(1 + x1^2 + x2^2)";
             e.expected_xi = "normal";
             e.expected_class = "unconstrained";
             e.kind = "slant";
             e.suites = {"acm-axioms", "slant-basic"};
             e.notes = "Flat hyperkahler model with constant J1, J2; f = atan(1 + y1^2 + y2^2) is one admissible "
                       "choice of the free function.";
             return e;
         }},
        {"slant-rotation",
         [] {
             CatalogEntry e;
             e.title = "(e, -pi, x2, x1, sqrt 2) under phi = cos f J1 - sin f J2";
             e.ambient = amb("rotation_family", 2, "0.5 + 0.25*sin(y3*y4 + t)");
             e.immersion = imm(P2, Box{{-1, -1}, {1, 1}}, {"e", "-pi", "x2", "x1", "sqrt(2)"});
             e.expected_theta = "0.5 + 0.25*sin(x1*x2 + sqrt(2))";
             e.expected_xi = "normal";
             e.expected_class = "unconstrained";
             e.kind = "slant";
             e.suites = {"acm-axioms", "slant-basic"};
             e.notes = "f = 0.5 + 0.25 sin(y3 y4 + t) is one admissible choice of the free function.";
             return e;
         }},
        {"slant-arctan",
         [] {
             CatalogEntry e;
             e.title = "(e, -pi, x2, x1, sqrt 2) with f = atan|y1 + y2 + y3 + y4|";
             e.ambient = amb("rotation_family", 2, "atan(abs(y1 + y2 + y3 + y4))");
             e.immersion = imm(P2, Box{{0.5, 0.5}, {2, 2}}, {"e", "-pi", "x2", "x1", "sqrt(2)"});
             e.expected_theta = "atan(abs(e - pi + x1 + x2))";
             e.expected_xi = "normal";
             e.expected_class = "unconstrained";
             e.kind = "slant";
             e.suites = {"acm-axioms", "slant-basic"};
             e.notes = "Domain kept away from the kink of |e - pi + x1 + x2|.";
             return e;
         }},
        {"semislant-r11",
         [] {
             CatalogEntry e;
             e.title = "R^4 in the cosymplectic R^11";
             e.ambient = amb("euclidean_cosymplectic", 5);
             e.immersion = imm(P4, Box{{0, 0, 0, 0}, {1, 1, kPi / 2, kPi / 2}},
                               {"x2*sin(x3)", "x1*sin(x3)", "x2*sin(x4)", "x1*sin(x4)", "x2*cos(x3)", "x1*cos(x3)",
                                "x2*cos(x4)", "x1*cos(x4)", "x3", "x4", "0"});
             e.expected_theta = "acos(1/(x1^2 + x2^2 + 1))";
             e.expected_xi = "normal";
             e.expected_class = "cosymplectic";
             e.kind = "semi-slant";
             e.split_dims = std::make_pair(2, 2);
             e.suites = {"semi-slant-basic", "integrability-D1", "integrability-D2", "foliation-D1", "foliation-D2",
                         "product-criterion"};
             e.notes = "D1 = span(d/dx1, d/dx2), D2 = span(d/dx3, d/dx4).";
             return e;
         }},
        {"semislant-r7",
         [] {
             CatalogEntry e;
             e.title = "(x3, x1, x5, sin x4, 0, cos x4, x2) in the cosymplectic R^7";
             e.ambient = amb("euclidean_cosymplectic", 3);
             e.immersion = imm(P5, Box{{-1, -1, -1, 0, -1}, {1, 1, 1, kPi / 2, 1}},
                               {"x3", "x1", "x5", "sin(x4)", "0", "cos(x4)", "x2"});
             e.expected_theta = "x4";
             e.expected_xi = "tangent";
             e.expected_class = "cosymplectic";
             e.kind = "semi-slant";
             e.split_dims = std::make_pair(3, 2);
             e.suites = {"semi-slant-basic", "parallel-tensors", "integrability-D1", "integrability-D2",
                         "foliation-D1", "foliation-D2", "product-criterion", "umbilic"};
             return e;
         }},
        {"semislant-product",
         [] {
             CatalogEntry e;
             e.title = "M x N in flat R^4 x R^3, M complex for J1 and totally real for J2";
             e.ambient = amb("rotation_family", 3, "atan(abs(y1 + y2 + y3 + y4))");
             e.immersion = imm(P5, Box{{0.1, 0.1, -1, -1, -1}, {0.9, 0.9, 1, 1, 1}},
                               {"x1", "x2", "0", "0", "x3", "x4", "x5"});
             e.expected_theta = "atan(abs(x1 + x2))";
             e.expected_xi = "tangent";
             e.expected_class = "unconstrained";
             e.kind = "semi-slant";
             e.split_dims = std::make_pair(3, 2);
             e.suites = {"semi-slant-basic"};
             e.notes = "N = euclidean_cosymplectic(1) on (y5, y6, t); f = atan|y1 + y2 + y3 + y4|.";
             return e;
         }},
        {"slant-spirals",
         [] {
             CatalogEntry e;
             e.title = "two log-spiral blocks in the cosymplectic R^9";
             e.ambient = amb("euclidean_cosymplectic", 4);
             e.immersion = imm(P4, Box{{0.1, 0.1, 0.1, 0.1}, {1, 1, 1, 1}}, cat(cat(spiral("x1", "x2"), spiral("x3", "x4")), {"0"}));
             e.expected_theta = "atan(2)";
             e.expected_xi = "normal";
             e.expected_class = "cosymplectic";
             e.kind = "slant";
             e.constructed = true;
             e.suites = {"slant-basic", "parallel-tensors"};
             e.notes = "Constructed 4-parameter proper slant immersion; each block has angle atan(1/k), k = 0.5.";
             return e;
         }},
        {"warped-cosymplectic-normal",
         [] {
             CatalogEntry e;
             e.title = "w a(s) + b(s) in the cosymplectic R^9, t = 0";
             e.ambient = amb("euclidean_cosymplectic", 4);
             e.immersion = imm(P4, Box{{0.2, 0.2, 0.1, 0.1}, {1, 1, 1, 1}}, torus_map("0"));
             e.warped = WarpSpec{{"x1", "x2"}, {"x3", "x4"}, std::nullopt};
             e.expected_xi = "normal";
             e.expected_class = "cosymplectic";
             e.kind = "warped";
             e.split_dims = std::make_pair(2, 2);
             e.constructed = true;
             e.suites = {"warp-identities", "inequality"};
             e.notes = "Base w = x1 + i x2, fiber s = (x3, x4); a is the Legendrian torus in S^5 and b a flat plane "
                       "with the same metric, so f^2 is proportional to |w|^2 + 1. n = 4 > m1 + 2 m2.";
             return e;
         }},
        {"warped-cosymplectic-tangent",
         [] {
             CatalogEntry e;
             e.title = "w a(s) + b(s) in the cosymplectic R^9, t = x5";
             e.ambient = amb("euclidean_cosymplectic", 4);
             e.immersion = imm(P5, Box{{0.2, 0.2, 0.1, 0.1, -1}, {1, 1, 1, 1, 1}}, torus_map("x5"));
             e.warped = WarpSpec{{"x1", "x2", "x5"}, {"x3", "x4"}, std::nullopt};
             e.expected_xi = "tangent";
             e.expected_class = "cosymplectic";
             e.kind = "warped";
             e.split_dims = std::make_pair(3, 2);
             e.constructed = true;
             e.suites = {"warp-identities", "inequality"};
             e.notes = "As warped-cosymplectic-normal with t = x5 added to the base.";
             return e;
         }},
        {"warped-kenmotsu-normal",
         [] {
             CatalogEntry e;
             e.title = "w a(s) + b(s) in the t = 0 slice of R x_{e^t} R^8";
             e.ambient = amb("kenmotsu_warped", 4);
             e.immersion = imm(P4, Box{{0.2, 0.2, 0.1, 0.1}, {1, 1, 1, 1}}, torus_map("0"));
             e.warped = WarpSpec{{"x1", "x2"}, {"x3", "x4"}, std::nullopt};
             e.expected_xi = "normal";
             e.expected_class = "kenmotsu";
             e.kind = "warped";
             e.split_dims = std::make_pair(2, 2);
             e.constructed = true;
             e.suites = {"warp-identities", "inequality"};
             e.notes = "Same map as warped-cosymplectic-normal in the Kenmotsu ambient.";
             return e;
         }},
        {"warped-kenmotsu-tangent",
         [] {
             CatalogEntry e;
             e.title = "(x1, x2, 0, cos x3, x4, sin x3, x5) in R x_{e^t} R^6";
             e.ambient = amb("kenmotsu_warped", 3);
             e.immersion = imm(P5, Box{{-1, -1, 0.1, -1, -0.5}, {1, 1, 1.4, 1, 0.5}},
                               {"x1", "x2", "0", "cos(x3)", "x4", "sin(x3)", "x5"});
             e.warped = WarpSpec{{"x1", "x2", "x5"}, {"x3", "x4"}, std::string("exp(x5)")};
             e.expected_theta = "x3";
             e.expected_xi = "tangent";
             e.expected_class = "kenmotsu";
             e.kind = "warped";
             e.split_dims = std::make_pair(3, 2);
             e.constructed = true;
             e.suites = {"warp-identities", "inequality"};
             e.notes = "f = e^{x5}; the ambient warping restricts to the slant fiber.";
             return e;
         }},
        {"sasakian-semislant",
         [] {
             CatalogEntry e;
             e.title = "(x1, x2, x3, sin x4, 0, cos x4, x5) in the standard Sasakian R^7";
             e.ambient = amb("sasakian_standard", 3);
             e.immersion = imm(P5, Box{{-1, -1, -1, 0, -1}, {1, 1, 1, kPi / 2, 1}},
                               {"x1", "x2", "x3", "sin(x4)", "0", "cos(x4)", "x5"});
             e.expected_theta = "x4";
             e.expected_xi = "tangent";
             e.expected_class = "sasakian";
             e.kind = "semi-slant";
             e.split_dims = std::make_pair(3, 2);
             e.constructed = true;
             e.suites = {"semi-slant-basic", "warp-identities", "inequality"};
             e.notes = "Not a warped product (D2 is not orthogonal to the coordinate fiber). The Sasakian forms of "
                       "the h(X,Y) and h(X,W) identities are evaluated with ln f = 0; the Sasakian inequality is "
                       "vacuous here.";
             return e;
         }},
    };
    return t;
}

// Products in the forbidden orientation D1 = TF, D2 = TB.
struct Candidate {
    const char* id;
    const char* title;
    AmbientSpec ambient;
    ImmersionSpec immersion;
    WarpSpec warp;
    const char* theta;
    const char* xi;
    const char* cls;
    std::pair<int, int> dims;
};

const std::vector<Candidate>& candidates() {
    static const std::vector<Candidate> c = {
        {"forbidden-cosymplectic-tangent", "invariant fiber (y1, y2, t), slant base (y3, sin x4, 0, cos x4)",
         amb("euclidean_cosymplectic", 3),
         imm(P5, Box{{-1, -1, -1, 0.2, -1}, {1, 1, 1, 1.3, 1}}, {"x1", "x2", "x3", "sin(x4)", "0", "cos(x4)", "x5"}),
         WarpSpec{{"x3", "x4"}, {"x1", "x2", "x5"}, std::nullopt}, "x4", "tangent", "cosymplectic", {3, 2}},
        {"forbidden-cosymplectic-normal", "invariant fiber (y1, y2), slant base in (y3..y6)",
         amb("euclidean_cosymplectic", 4),
         imm(P4, Box{{-1, -1, -1, 0.2}, {1, 1, 1, 1.3}}, {"x1", "x2", "x3", "sin(x4)", "0", "cos(x4)", "0", "0", "0"}),
         WarpSpec{{"x3", "x4"}, {"x1", "x2"}, std::nullopt}, "x4", "normal", "cosymplectic", {2, 2}},
        {"forbidden-kenmotsu-normal", "as forbidden-cosymplectic-normal in the t = 0 slice of the Kenmotsu R^9",
         amb("kenmotsu_warped", 4),
         imm(P4, Box{{-1, -1, -1, 0.2}, {1, 1, 1, 1.3}}, {"x1", "x2", "x3", "sin(x4)", "0", "cos(x4)", "0", "0", "0"}),
         WarpSpec{{"x3", "x4"}, {"x1", "x2"}, std::nullopt}, "x4", "normal", "kenmotsu", {2, 2}},
        {"forbidden-cosymplectic-wide", "four-dimensional invariant fiber, slant base in (y5..y8)",
         amb("euclidean_cosymplectic", 4),
         imm(P6, Box{{-1, -1, -1, -1, -1, 0.2}, {1, 1, 1, 1, 1, 1.3}},
             {"x1", "x2", "x3", "x4", "x5", "sin(x6)", "0", "cos(x6)", "0"}),
         WarpSpec{{"x5", "x6"}, {"x1", "x2", "x3", "x4"}, std::nullopt}, "x6", "normal", "cosymplectic", {4, 2}},
        {"forbidden-cosymplectic-spiral", "invariant fiber (y1, y2, t), log-spiral slant base",
         amb("euclidean_cosymplectic", 3),
         imm(P5, Box{{-1, -1, 0.1, 0.1, -1}, {1, 1, 1, 1, 1}}, cat(cat({"x1", "x2"}, spiral("x3", "x4")), {"x5"})),
         WarpSpec{{"x3", "x4"}, {"x1", "x2", "x5"}, std::nullopt}, "atan(2)", "tangent", "cosymplectic", {3, 2}},
    };
    return c;
}

}  // namespace

std::vector<std::string> list_entries() {
    std::vector<std::string> ids;
    for (const auto& [id, mk] : table()) ids.push_back(id);
    for (const auto& c : candidates()) ids.push_back(c.id);
    return ids;
}

CatalogEntry build(const std::string& id_in) {
    std::string id = id_in == "slant-r5-ex1" ? "slant-r5-tangent" : id_in;
    for (const auto& [key, mk] : table())
        if (key == id) {
            CatalogEntry e = mk();
            e.id = key;
            return e;
        }
    for (const auto& c : candidates())
        if (c.id == id) {
            CatalogEntry e;
            e.id = c.id;
            e.title = c.title;
            e.ambient = c.ambient;
            e.immersion = c.immersion;
            e.warped = c.warp;
            e.expected_theta = c.theta;
            e.expected_xi = c.xi;
            e.expected_class = c.cls;
            e.kind = "nonexistence-candidate";
            e.split_dims = c.dims;
            e.constructed = true;
            e.suites = {"nonexistence"};
            e.notes = "Riemannian product with the invariant factor as fiber; any warping of this shape must be "
                      "trivial.";
            return e;
        }
    throw std::out_of_range("unknown catalog entry '" + id_in + "'");
}

VerifyConfig make_config(const CatalogEntry& e, const std::vector<int>& grid, uint64_t seed) {
    auto S = build_ambient(e.ambient);
    auto I = build_immersion(e.immersion);
    if (static_cast<int>(e.immersion.map.size()) != S.dim())
        throw std::invalid_argument("map has " + std::to_string(e.immersion.map.size()) + " components, ambient dimension is " +
                                    std::to_string(S.dim()));
    std::vector<int> counts = grid;
    if (counts.size() == 1) counts.assign(I.dim(), grid[0]);
    VerifyConfig cfg;
    cfg.ambient = S;
    cfg.immersion = I;
    cfg.samples = grid_points(I.domain(), counts);
    cfg.seed = seed;
    if (e.warped) {
        std::optional<Expr> f;
        if (e.warped->declared_f) f = parse(*e.warped->declared_f, e.immersion.params);
        cfg.warped.emplace(S, I, e.warped->base, e.warped->fiber, f);
    }
    return cfg;
}

}  // namespace slantgeo
