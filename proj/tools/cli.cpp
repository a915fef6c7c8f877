#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "slantgeo/semi_slant.hpp"

namespace slantgeo::cli {

using nlohmann::json;

namespace {

constexpr int kReportVersion = 1;
const double kDeg = 180.0 / std::numbers::pi;

// ---------------------------------------------------------------- manifest

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ManifestError(where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) bad(where, "unknown key '" + it.key() + "'");
}

const json& need(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) bad(where, "missing '" + key + "'");
    return j.at(key);
}

std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) bad(where, "expected a string");
    return j.get<std::string>();
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) bad(where, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) bad(where, "expected an integer");
    return j.get<int>();
}

double positive(const json& j, const std::string& where) {
    double v = num(j, where);
    if (!(v > 0) || !std::isfinite(v)) bad(where, "expected a positive number");
    return v;
}

std::vector<std::string> strings(const json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of strings");
    std::vector<std::string> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<std::string>> string_matrix(const json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of rows");
    std::vector<std::vector<std::string>> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(strings(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Box box(const json& j, const std::string& where) {
    only_keys(j, where, {"lo", "hi"});
    Box b{numbers(need(j, "lo", where), where + ".lo"), numbers(need(j, "hi", where), where + ".hi")};
    if (b.lo.size() != b.hi.size()) bad(where, "lo and hi differ in length");
    for (size_t i = 0; i < b.lo.size(); ++i)
        if (b.lo[i] > b.hi[i]) bad(where, "lo > hi on axis " + std::to_string(i + 1));
    return b;
}

std::vector<int> grid_counts(const json& j, const std::string& where) {
    std::vector<int> g;
    if (j.is_number_integer()) {
        g.push_back(j.get<int>());
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i) g.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
    } else {
        bad(where, "expected an integer or an array of integers");
    }
    if (g.empty()) bad(where, "empty grid");
    for (int c : g)
        if (c < 1) bad(where, "grid counts must be positive");
    return g;
}

AmbientSpec parse_ambient(const json& j) {
    AmbientSpec a;
    if (j.contains("custom")) {
        only_keys(j, "ambient", {"custom"});
        const json& c = j.at("custom");
        only_keys(c, "ambient.custom", {"dim", "coords", "metric", "phi", "xi", "eta", "box"});
        a.coords = strings(need(c, "coords", "ambient.custom"), "ambient.custom.coords");
        if (c.contains("dim") && integer(c.at("dim"), "ambient.custom.dim") != static_cast<int>(a.coords.size()))
            bad("ambient.custom.dim", "does not match the number of coordinates");
        a.metric = string_matrix(need(c, "metric", "ambient.custom"), "ambient.custom.metric");
        a.phi = string_matrix(need(c, "phi", "ambient.custom"), "ambient.custom.phi");
        a.xi = strings(need(c, "xi", "ambient.custom"), "ambient.custom.xi");
        a.eta = strings(need(c, "eta", "ambient.custom"), "ambient.custom.eta");
        if (c.contains("box")) a.box = box(c.at("box"), "ambient.custom.box");
    } else {
        only_keys(j, "ambient", {"builtin", "n", "f"});
        a.builtin = str(need(j, "builtin", "ambient"), "ambient.builtin");
        auto names = builtin_names();
        if (std::find(names.begin(), names.end(), a.builtin) == names.end())
            bad("ambient.builtin", "unknown builtin '" + a.builtin + "'");
        a.n = integer(need(j, "n", "ambient"), "ambient.n");
        if (a.n < 1) bad("ambient.n", "must be at least 1");
        if (j.contains("f")) a.f = str(j.at("f"), "ambient.f");
    }
    return a;
}

bool known_class(const std::string& s) {
    for (const char* c : {"sasakian", "kenmotsu", "cosymplectic", "contact_metric", "almost_contact_metric", "invalid"})
        if (s == c) return true;
    return false;
}

// ---------------------------------------------------------------- canonical output

void write_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    if (v == 0) v = 0;  // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void write_string(std::string& out, const std::string& s) {
    out += json(s).dump(-1, ' ', false, json::error_handler_t::replace);
}

void write(std::string& out, const json& j, int indent) {
    std::string pad(indent * 2, ' '), inner((indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
                if (!first) out += ",\n";
                first = false;
                out += inner;
                write_string(out, it.key());
                out += ": ";
                write(out, it.value(), indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return !e.is_structured(); });
            if (flat) {
                out += "[";
                for (size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    write(out, j[i], indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                write(out, j[i], indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: write_number(out, j.get<double>()); return;
        case json::value_t::string: write_string(out, j.get<std::string>()); return;
        default: out += j.dump(); return;
    }
}

std::string text_scalar(const json& j) {
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (!std::isfinite(v)) return "null";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::string s = "[";
        for (size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + text_scalar(j[i]);
        return s + "]";
    }
    if (j.is_object()) {
        std::string s;
        for (auto it = j.begin(); it != j.end(); ++it) s += (s.empty() ? "" : " ") + it.key() + "=" + text_scalar(it.value());
        return "{" + s + "}";
    }
    return j.dump();
}

bool shallow(const json& j) {
    if (!j.is_object()) return false;
    for (const auto& v : j)
        if (v.is_object() || (v.is_array() && std::any_of(v.begin(), v.end(), [](const json& e) { return e.is_structured(); })))
            return false;
    return true;
}

void render(std::string& out, const json& j, int indent) {
    std::string pad(indent * 2, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        if (v.is_object() && !v.empty()) {
            out += pad + it.key() + ":\n";
            render(out, v, indent + 1);
        } else if (v.is_array() && !v.empty() && v[0].is_object()) {
            out += pad + it.key() + " (" + std::to_string(v.size()) + "):\n";
            for (const auto& e : v) {
                if (shallow(e)) {
                    out += pad + "  -";
                    for (auto f = e.begin(); f != e.end(); ++f) out += " " + f.key() + "=" + text_scalar(f.value());
                    out += "\n";
                } else {
                    out += pad + "  -\n";
                    render(out, e, indent + 2);
                }
            }
        } else {
            out += pad + it.key() + ": " + text_scalar(v) + "\n";
        }
    }
}

// ---------------------------------------------------------------- commands

json vec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct Context {
    Manifest m;
    VerifyConfig cfg;
    std::vector<int> grid;
};

std::vector<int> expand_grid(const std::vector<int>& g, int m) {
    if (g.size() == 1) return std::vector<int>(m, g[0]);
    if (static_cast<int>(g.size()) != m)
        throw ManifestError("sampling.grid: " + std::to_string(g.size()) + " counts for " + std::to_string(m) + " parameters");
    return g;
}

Context context(const json& manifest, const Overrides& o, bool need_submanifold) {
    Manifest m = parse_manifest(manifest);
    if (o.grid) m.grid = *o.grid;
    if (o.tol) m.residual_tol = *o.tol;
    if (o.seed) m.seed = *o.seed;
    if (need_submanifold && !m.submanifold) throw ManifestError("submanifold: required by this command");
    Context c{m, {}, {}};
    c.cfg.ambient = build_ambient(m.ambient);
    c.cfg.seed = m.seed;
    c.cfg.point_tol.rank = m.degenerate_rank;
    c.cfg.cluster_tol = m.eigen_cluster;
    c.cfg.tol_override = m.residual_tol;
    c.cfg.declared_umbilic = m.declared_umbilic;
    if (m.submanifold) {
        c.cfg.immersion = build_immersion(*m.submanifold);
        c.grid = expand_grid(m.grid, c.cfg.immersion.dim());
        c.cfg.samples = grid_points(c.cfg.immersion.domain(), c.grid);
        if (m.warped) {
            std::optional<Expr> f;
            if (m.warped->declared_f) f = parse(*m.warped->declared_f, m.submanifold->params);
            c.cfg.warped.emplace(c.cfg.ambient, c.cfg.immersion, m.warped->base, m.warped->fiber, f);
        }
    }
    return c;
}

std::optional<Expr> expected_theta(const Context& c) {
    if (!c.m.expect_theta) return std::nullopt;
    return parse(*c.m.expect_theta, c.m.submanifold->params);
}

double eval_at(const Expr& e, const std::vector<std::string>& params, const std::vector<double>& u) {
    std::map<std::string, double> env;
    for (size_t i = 0; i < params.size(); ++i) env[params[i]] = u[i];
    return eval(e, env);
}

// more than 1% degenerate samples outranks a check failure: the residuals are not trustworthy
int settle(bool failed, int degenerate, int total) {
    if (total > 0 && degenerate * 100 > total) return Degenerate;
    return failed ? CheckFailure : Ok;
}

json base_report(const std::string& command, const json& manifest, const Context& c) {
    json r;
    r["report_version"] = kReportVersion;
    r["command"] = command;
    r["engine_version"] = kEngineVersion;
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_dump(manifest))));
    r["manifest_digest"] = std::string("fnv1a64:") + digest;
    r["conventions"] = {{"d_eta", to_string(default_deta_convention())},
                        {"angles", "radians; *_deg fields in degrees"}};
    json s;
    s["seed"] = c.m.seed;
    if (!c.grid.empty()) s["grid"] = c.grid;
    s["samples"] = c.cfg.samples.size();
    r["sampling"] = s;
    return r;
}

Result cmd_classify(const json& manifest, const Context& c) {
    std::vector<std::vector<double>> pts;
    std::string source;
    int unusable = 0;
    if (c.m.submanifold) {
        source = "submanifold sample images";
        for (const auto& u : c.cfg.samples) {
            try {
                pts.push_back(c.cfg.immersion.eval(u).x);
            } catch (const EvalError&) {
                ++unusable;
            }
        }
    } else {
        int N = c.cfg.ambient.dim();
        Box b = c.m.ambient.box.value_or(Box{std::vector<double>(N, -1.0), std::vector<double>(N, 1.0)});
        source = "random ambient points";
        pts = random_points(b, c.m.ambient_points, c.m.seed);
    }
    auto rep = classify(c.cfg.ambient, pts, c.m.classification_tol);
    json p;
    p["label"] = rep.label();
    p["flags"] = {{"axioms_ok", rep.axioms_ok}, {"contact_metric", rep.contact_metric}, {"normal", rep.normal},
                  {"sasakian", rep.sasakian}, {"kenmotsu", rep.kenmotsu}, {"cosymplectic", rep.cosymplectic},
                  {"consistent", rep.consistent}};
    json res = json::object();
    for (const auto& [k, v] : rep.residuals) res[k] = v;
    p["residuals"] = res;
    p["samples_used"] = rep.samples_used;
    p["degenerate"] = rep.degenerate + unusable;
    p["tolerance"] = rep.tol;
    p["points"] = source;
    p["points_count"] = pts.size();
    bool failed = false;
    if (c.m.expect_class) {
        bool match = rep.label() == *c.m.expect_class;
        p["expect"] = {{"class", *c.m.expect_class}, {"matches", match}};
        failed = !match;
    }
    json r = base_report("classify", manifest, c);
    r["conventions"]["d_eta"] = to_string(rep.convention);
    r["payload"] = p;
    int total = static_cast<int>(pts.size()) + unusable;
    int code = settle(failed, rep.degenerate + unusable, total);
    r["exit_code"] = code;
    return {code, r};
}

Result cmd_slant(const json& manifest, const Context& c) {
    const auto& params = c.m.submanifold->params;
    auto cls = classify_slant(c.cfg.ambient, c.cfg.immersion, c.cfg.samples, c.m.degenerate_rank);
    auto want = expected_theta(c);
    double tol = c.m.residual_tol.value_or(c.m.theta_tol);

    json samples = json::array();
    double worst = 0;
    int unmatched = 0, xi_mismatch = 0;
    for (const auto& s : cls.samples) {
        json e;
        e["u"] = s.u;
        e["theta"] = opt(s.theta);
        e["theta_deg"] = s.theta ? json(*s.theta * kDeg) : json(nullptr);
        e["xi_position"] = to_string(s.xi_position);
        e["eigenvalues"] = vec(s.eigenvalues);
        e["spread"] = s.spread;
        if (want) {
            double w = eval_at(*want, params, s.u);
            e["expected"] = w;
            if (s.theta) {
                double d = std::fabs(*s.theta - w);
                e["deviation"] = d;
                worst = std::fmax(worst, d);
            } else {
                ++unmatched;
            }
        }
        if (c.m.expect_xi && to_string(s.xi_position) != *c.m.expect_xi) ++xi_mismatch;
        samples.push_back(e);
    }

    json p;
    p["label"] = cls.label;
    p["theta0"] = opt(cls.theta0);
    p["theta0_deg"] = cls.theta0 ? json(*cls.theta0 * kDeg) : json(nullptr);
    p["theta_min"] = cls.theta_min;
    p["theta_max"] = cls.theta_max;
    p["degenerate"] = cls.degenerate;
    p["samples"] = samples;
    bool failed = false;
    if (want || c.m.expect_xi) {
        json x;
        if (want) {
            x["theta"] = *c.m.expect_theta;
            x["max_deviation"] = worst;
            x["not_slant_samples"] = unmatched;
            x["tolerance"] = tol;
            failed |= worst > tol || unmatched > 0;
        }
        if (c.m.expect_xi) {
            x["xi_position"] = *c.m.expect_xi;
            x["xi_mismatches"] = xi_mismatch;
            failed |= xi_mismatch > 0;
        }
        x["matches"] = !failed;
        p["expect"] = x;
    }
    json r = base_report("slant", manifest, c);
    r["payload"] = p;
    int code = settle(failed, cls.degenerate, static_cast<int>(c.cfg.samples.size()));
    r["exit_code"] = code;
    return {code, r};
}

Result cmd_semislant(const json& manifest, const Context& c) {
    const auto& params = c.m.submanifold->params;
    auto field = semi_slant_function(c.cfg.ambient, c.cfg.immersion, c.cfg.samples, c.m.eigen_cluster);
    auto want = expected_theta(c);
    double theta_tol = c.m.residual_tol.value_or(c.m.theta_tol);
    double id_tol = c.m.residual_tol.value_or(1e-8);
    Tolerances pt;
    pt.rank = c.m.degenerate_rank;

    json samples = json::array();
    double worst_theta = 0, worst_id = 0;
    int degenerate = 0, dims_mismatch = 0, xi_mismatch = 0, unmatched = 0, ok = 0;
    for (const auto& u : c.cfg.samples) {
        json e;
        e["u"] = u;
        try {
            FramedPoint p(c.cfg.ambient, c.cfg.immersion, u, pt);
            auto s = split_distributions(p, c.m.eigen_cluster);
            e["status"] = to_string(s.status);
            e["xi_position"] = to_string(s.xi_position);
            e["eigenvalues"] = vec(s.eigenvalues);
            e["proper"] = s.proper;
            if (c.m.expect_xi && to_string(s.xi_position) != *c.m.expect_xi) ++xi_mismatch;
            if (s.ok()) {
                ++ok;
                e["dim_D1"] = s.D1.c;
                e["dim_D2"] = s.D2.c;
                e["dim_mu"] = s.mu.c;
                e["theta"] = opt(s.theta);
                e["theta_deg"] = s.theta ? json(*s.theta * kDeg) : json(nullptr);
                e["mu_invariance"] = opt(mu_invariance_residual(p, s));
                double id = semi_slant_identities(p, s).max();
                e["identity_residual"] = id;
                worst_id = std::fmax(worst_id, id);
                if ((c.m.expect_d1 && s.D1.c != *c.m.expect_d1) || (c.m.expect_d2 && s.D2.c != *c.m.expect_d2))
                    ++dims_mismatch;
                if (want) {
                    double w = eval_at(*want, params, u);
                    e["expected"] = w;
                    if (s.theta) {
                        double d = std::fabs(*s.theta - w);
                        e["deviation"] = d;
                        worst_theta = std::fmax(worst_theta, d);
                    } else {
                        ++unmatched;
                    }
                }
            } else if (want || c.m.expect_d1 || c.m.expect_d2) {
                ++unmatched;
            }
        } catch (const DegeneratePoint& ex) {
            ++degenerate;
            e["degenerate"] = ex.what();
        } catch (const EvalError& ex) {
            ++degenerate;
            e["degenerate"] = ex.what();
        }
        samples.push_back(e);
    }

    json p;
    p["label"] = field.label;
    p["theta0"] = opt(field.theta0);
    p["theta0_deg"] = field.theta0 ? json(*field.theta0 * kDeg) : json(nullptr);
    p["xi_dichotomy_consistent"] = field.xi_dichotomy_consistent;
    p["dims_consistent"] = field.dims_consistent;
    p["degenerate"] = degenerate;
    p["split_samples"] = ok;
    p["max_identity_residual"] = worst_id;
    p["identity_tolerance"] = id_tol;
    p["samples"] = samples;
    bool failed = worst_id > id_tol;
    if (want || c.m.expect_xi || c.m.expect_d1 || c.m.expect_d2) {
        json x;
        bool bad_expect = unmatched > 0;
        x["unsplit_samples"] = unmatched;
        if (want) {
            x["theta"] = *c.m.expect_theta;
            x["max_deviation"] = worst_theta;
            x["tolerance"] = theta_tol;
            bad_expect |= worst_theta > theta_tol;
        }
        if (c.m.expect_xi) {
            x["xi_position"] = *c.m.expect_xi;
            x["xi_mismatches"] = xi_mismatch;
            bad_expect |= xi_mismatch > 0;
        }
        if (c.m.expect_d1) x["d1_dim"] = *c.m.expect_d1;
        if (c.m.expect_d2) x["d2_dim"] = *c.m.expect_d2;
        if (c.m.expect_d1 || c.m.expect_d2) {
            x["dims_mismatches"] = dims_mismatch;
            bad_expect |= dims_mismatch > 0;
        }
        x["matches"] = !bad_expect;
        p["expect"] = x;
        failed |= bad_expect;
    }
    json r = base_report("semislant", manifest, c);
    r["payload"] = p;
    int code = settle(failed, degenerate, static_cast<int>(c.cfg.samples.size()));
    r["exit_code"] = code;
    return {code, r};
}

json check_json(const CheckReport& k) {
    json j;
    j["suite"] = k.suite;
    j["check"] = k.check;
    j["formula"] = k.formula;
    j["samples_total"] = k.samples_total;
    j["degenerate"] = k.degenerate;
    j["skipped"] = k.skipped;
    j["max_residual"] = k.max_residual;
    j["tolerance"] = k.tolerance;
    j["verdict"] = to_string(k.verdict);
    if (!k.hypothesis.empty()) j["hypothesis"] = k.hypothesis;
    if (!k.metrics.empty()) {
        json m;
        for (const auto& [key, v] : k.metrics) m[key] = v;
        j["metrics"] = m;
    }
    if (!k.notes.empty()) j["notes"] = k.notes;
    return j;
}

Result cmd_verify(const json& manifest, const Context& c, const std::string& suite) {
    std::vector<std::string> suites;
    if (suite == "all") {
        suites = suite_names();
    } else {
        auto names = suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end())
            throw ManifestError("unknown suite '" + suite + "'");
        suites = {suite};
    }
    json checks = json::array();
    int pass = 0, fail = 0, skipped = 0, worst_degenerate = 0, total = 1;
    for (const auto& s : suites) {
        for (const auto& k : run_suite(s, c.cfg)) {
            checks.push_back(check_json(k));
            if (k.verdict == Verdict::Pass) ++pass;
            else if (k.verdict == Verdict::Fail) ++fail;
            else ++skipped;
            if (k.samples_total > 0 && int64_t{k.degenerate} * total > int64_t{worst_degenerate} * k.samples_total) {
                worst_degenerate = k.degenerate;
                total = k.samples_total;
            }
        }
    }
    json p;
    p["suite"] = suite;
    p["summary"] = {{"pass", pass}, {"fail", fail}, {"skipped", skipped}};
    p["checks"] = checks;
    if (pass == 0 && fail == 0) p["note"] = "vacuous: every check was skipped";
    json r = base_report("verify", manifest, c);
    r["sampling"]["trials"] = c.cfg.trials;
    r["payload"] = p;
    int code = settle(fail > 0, worst_degenerate, total);
    r["exit_code"] = code;
    return {code, r};
}

Result error_report(const std::string& command, const std::string& msg) {
    json r;
    r["report_version"] = kReportVersion;
    r["command"] = command;
    r["engine_version"] = kEngineVersion;
    r["error"] = msg;
    r["exit_code"] = static_cast<int>(InvalidManifest);
    return {InvalidManifest, r};
}

json box_json(const Box& b) { return {{"lo", b.lo}, {"hi", b.hi}}; }

}  // namespace

Manifest parse_manifest(const json& j) {
    only_keys(j, "manifest", {"manifest_version", "ambient", "submanifold", "warped", "sampling", "tolerances", "expect",
                              "declared_umbilic", "title"});
    if (integer(need(j, "manifest_version", "manifest"), "manifest_version") != 1)
        bad("manifest_version", "only version 1 is supported");
    Manifest m;
    m.ambient = parse_ambient(need(j, "ambient", "manifest"));
    ACMStructure S;
    try {
        S = build_ambient(m.ambient);
    } catch (const std::exception& e) {
        bad("ambient", e.what());
    }

    if (j.contains("submanifold")) {
        const json& s = j.at("submanifold");
        only_keys(s, "submanifold", {"params", "domain", "map"});
        ImmersionSpec sp;
        sp.params = strings(need(s, "params", "submanifold"), "submanifold.params");
        sp.domain = box(need(s, "domain", "submanifold"), "submanifold.domain");
        sp.map = strings(need(s, "map", "submanifold"), "submanifold.map");
        if (static_cast<int>(sp.map.size()) != S.dim())
            bad("submanifold.map", std::to_string(sp.map.size()) + " components for an ambient of dimension " +
                                       std::to_string(S.dim()));
        if (static_cast<int>(sp.params.size()) >= S.dim()) bad("submanifold.params", "must be fewer than the ambient dimension");
        try {
            build_immersion(sp);
        } catch (const std::exception& e) {
            bad("submanifold", e.what());
        }
        m.submanifold = sp;
    }

    if (j.contains("warped")) {
        if (!m.submanifold) bad("warped", "requires a submanifold");
        const json& w = j.at("warped");
        only_keys(w, "warped", {"base_params", "fiber_params", "declared_f"});
        WarpSpec ws;
        ws.base = strings(need(w, "base_params", "warped"), "warped.base_params");
        ws.fiber = strings(need(w, "fiber_params", "warped"), "warped.fiber_params");
        std::set<std::string> all(m.submanifold->params.begin(), m.submanifold->params.end()), seen;
        for (const auto& v : ws.base) seen.insert(v);
        for (const auto& v : ws.fiber) seen.insert(v);
        if (seen != all || ws.base.size() + ws.fiber.size() != all.size())
            bad("warped", "base_params and fiber_params must partition the submanifold parameters");
        if (w.contains("declared_f")) ws.declared_f = str(w.at("declared_f"), "warped.declared_f");
        m.warped = ws;
    }

    if (j.contains("sampling")) {
        const json& s = j.at("sampling");
        only_keys(s, "sampling", {"grid", "seed", "points"});
        if (s.contains("grid")) m.grid = grid_counts(s.at("grid"), "sampling.grid");
        if (s.contains("seed")) {
            const json& v = s.at("seed");
            if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0))
                bad("sampling.seed", "expected a non-negative integer");
            m.seed = s.at("seed").get<uint64_t>();
        }
        if (s.contains("points")) {
            m.ambient_points = integer(s.at("points"), "sampling.points");
            if (m.ambient_points < 1) bad("sampling.points", "must be positive");
        }
    }
    if (m.submanifold) expand_grid(m.grid, static_cast<int>(m.submanifold->params.size()));

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        only_keys(t, "tolerances", {"residual", "eigen_cluster", "degenerate_rank", "classification", "theta"});
        if (t.contains("residual")) m.residual_tol = positive(t.at("residual"), "tolerances.residual");
        if (t.contains("eigen_cluster")) m.eigen_cluster = positive(t.at("eigen_cluster"), "tolerances.eigen_cluster");
        if (t.contains("degenerate_rank")) m.degenerate_rank = positive(t.at("degenerate_rank"), "tolerances.degenerate_rank");
        if (t.contains("classification")) m.classification_tol = positive(t.at("classification"), "tolerances.classification");
        if (t.contains("theta")) m.theta_tol = positive(t.at("theta"), "tolerances.theta");
    }

    if (j.contains("expect")) {
        const json& x = j.at("expect");
        only_keys(x, "expect", {"theta", "xi_position", "class", "d1_dim", "d2_dim"});
        if (x.contains("theta")) {
            if (!m.submanifold) bad("expect.theta", "requires a submanifold");
            m.expect_theta = str(x.at("theta"), "expect.theta");
            try {
                parse(*m.expect_theta, m.submanifold->params);
            } catch (const ParseError& e) {
                bad("expect.theta", e.what());
            }
        }
        if (x.contains("xi_position")) {
            m.expect_xi = str(x.at("xi_position"), "expect.xi_position");
            if (*m.expect_xi != "tangent" && *m.expect_xi != "normal" && *m.expect_xi != "oblique")
                bad("expect.xi_position", "expected tangent, normal or oblique");
        }
        if (x.contains("class")) {
            m.expect_class = str(x.at("class"), "expect.class");
            if (!known_class(*m.expect_class)) bad("expect.class", "unknown class '" + *m.expect_class + "'");
        }
        if (x.contains("d1_dim")) m.expect_d1 = integer(x.at("d1_dim"), "expect.d1_dim");
        if (x.contains("d2_dim")) m.expect_d2 = integer(x.at("d2_dim"), "expect.d2_dim");
    }
    if (j.contains("declared_umbilic")) {
        if (!j.at("declared_umbilic").is_boolean()) bad("declared_umbilic", "expected true or false");
        m.declared_umbilic = j.at("declared_umbilic").get<bool>();
    }
    if (j.contains("title")) str(j.at("title"), "title");
    return m;
}

json manifest_json(const CatalogEntry& e) {
    json j;
    j["manifest_version"] = 1;
    j["title"] = e.title;
    if (!e.ambient.builtin.empty()) {
        j["ambient"] = {{"builtin", e.ambient.builtin}, {"n", e.ambient.n}};
        if (e.ambient.f) j["ambient"]["f"] = *e.ambient.f;
    } else {
        json c = {{"dim", e.ambient.coords.size()}, {"coords", e.ambient.coords}, {"metric", e.ambient.metric},
                  {"phi", e.ambient.phi}, {"xi", e.ambient.xi}, {"eta", e.ambient.eta}};
        if (e.ambient.box) c["box"] = box_json(*e.ambient.box);
        j["ambient"] = {{"custom", c}};
    }
    j["submanifold"] = {{"params", e.immersion.params}, {"domain", box_json(e.immersion.domain)}, {"map", e.immersion.map}};
    if (e.warped) {
        j["warped"] = {{"base_params", e.warped->base}, {"fiber_params", e.warped->fiber}};
        if (e.warped->declared_f) j["warped"]["declared_f"] = *e.warped->declared_f;
    }
    size_t m = e.immersion.params.size();
    int grid = m <= 2 ? 10 : m == 3 ? 5 : m == 4 ? 4 : 3;
    j["sampling"] = {{"grid", json::array({grid})}, {"seed", 1}};
    json x = {{"xi_position", e.expected_xi}};
    if (e.expected_theta) x["theta"] = *e.expected_theta;
    if (e.expected_class != "unconstrained") x["class"] = e.expected_class;
    if (e.split_dims) {
        x["d1_dim"] = e.split_dims->first;
        x["d2_dim"] = e.split_dims->second;
    }
    j["expect"] = x;
    return j;
}

Result run(const std::string& command, const json& manifest, const std::string& suite, const Overrides& o) {
    try {
        if (command == "classify") return cmd_classify(manifest, context(manifest, o, false));
        if (command == "slant") return cmd_slant(manifest, context(manifest, o, true));
        if (command == "semislant") return cmd_semislant(manifest, context(manifest, o, true));
        if (command == "verify") return cmd_verify(manifest, context(manifest, o, true), suite);
        return error_report(command, "unknown command '" + command + "'");
    } catch (const ManifestError& e) {
        return error_report(command, e.what());
    } catch (const ParseError& e) {
        return error_report(command, e.what());
    } catch (const std::invalid_argument& e) {
        return error_report(command, e.what());
    }
}

Result run_example(const std::string& id, const std::string& command, const std::string& suite, const Overrides& o) {
    CatalogEntry e;
    try {
        e = build(id);
    } catch (const std::out_of_range&) {
        return error_report(command, "unknown catalog entry '" + id + "'");
    }
    json manifest = manifest_json(e);
    if (command == "manifest") return {Ok, manifest};
    Result r = run(command, manifest, suite, o);
    if (r.exit_code != InvalidManifest) r.report["example"] = e.id;
    return r;
}

Result catalog_listing() {
    json entries = json::array();
    for (const auto& id : list_entries()) {
        auto e = build(id);
        json j = {{"id", e.id}, {"title", e.title}, {"kind", e.kind}, {"xi_position", e.expected_xi},
                  {"class", e.expected_class}, {"constructed", e.constructed}, {"suites", e.suites}};
        if (e.expected_theta) j["theta"] = *e.expected_theta;
        entries.push_back(j);
    }
    json r;
    r["report_version"] = kReportVersion;
    r["command"] = "list";
    r["engine_version"] = kEngineVersion;
    r["payload"] = {{"entries", entries}, {"suites", suite_names()}};
    r["exit_code"] = 0;
    return {Ok, r};
}

std::string canonical_dump(const json& j) {
    std::string out;
    write(out, j, 0);
    out += "\n";
    return out;
}

std::string render_text(const json& report) {
    std::string out;
    render(out, report, 0);
    return out;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace slantgeo::cli
