#include <cmath>
#include <fstream>
#include <set>

#include "rfheat/errors.hpp"
#include "rfheat/harness.hpp"

namespace rfheat::harness {

using nlohmann::json;

namespace {

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
    return j.get<int>();
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<RoundFactor> parse_geometry(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("geometry", "expected a non-empty array of factors");
    std::vector<RoundFactor> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string prefix = "geometry[" + std::to_string(i) + "]";
        const auto& f = j[i];
        if (!f.is_object()) throw ConfigError(prefix, "expected {dim, radius0}");
        const json* dim = find(f, "dim");
        if (!dim) throw ConfigError(prefix + ".dim", "missing");
        RoundFactor rf;
        rf.dim = get_int(*dim, prefix + ".dim");
        const json* r0 = find(f, "radius0");
        rf.radius0 = r0 ? get_number(*r0, prefix + ".radius0") : 1.0;
        out.push_back(rf);
    }
    // Validates dims, radii and the total dimension with field names.
    (void)ProductGeometry(out);
    return out;
}

ProfileSpec parse_profile(const json& j) {
    ProfileSpec p;
    if (j.is_string()) {
        if (j.get<std::string>() != "fit") throw ConfigError("profile", "only \"fit\" may be given as a string");
        return p;
    }
    if (!j.is_object()) throw ConfigError("profile", "expected an object or \"fit\"");
    std::string type = "fit";
    if (const json* ty = find(j, "type")) {
        if (!ty->is_string()) throw ConfigError("profile.type", "expected a string");
        type = ty->get<std::string>();
    } else if (find(j, "t")) {
        type = "table";
    } else if (find(j, "A")) {
        type = "constant";
    }
    if (const json* e = find(j, "eps_fraction")) p.eps_fraction = get_number(*e, "profile.eps_fraction");
    if (const json* e = find(j, "safety")) p.fit.safety = get_number(*e, "profile.safety");
    if (const json* e = find(j, "floor_fraction")) p.fit.floor_fraction = get_number(*e, "profile.floor_fraction");
    if (type == "fit") {
        p.kind = ProfileSpec::Kind::fit;
    } else if (type == "constant") {
        p.kind = ProfileSpec::Kind::constant;
        const json* a = find(j, "A");
        const json* b = find(j, "B");
        if (!a) throw ConfigError("profile.A", "missing");
        if (!b) throw ConfigError("profile.B", "missing");
        p.A = get_number(*a, "profile.A");
        p.B = get_number(*b, "profile.B");
        (void)SobolevProfile::constant(p.A, p.B);
    } else if (type == "table") {
        p.kind = ProfileSpec::Kind::table;
        for (const char* key : {"t", "A", "B"}) {
            if (!find(j, key)) throw ConfigError(std::string("profile.") + key, "missing");
        }
        p.table_t = get_numbers(j["t"], "profile.t");
        p.table_A = get_numbers(j["A"], "profile.A");
        p.table_B = get_numbers(j["B"], "profile.B");
        (void)SobolevProfile::table(p.table_t, p.table_A, p.table_B);
    } else {
        throw ConfigError("profile.type", "expected fit, constant or table");
    }
    if (!(p.eps_fraction > 0.0)) throw ConfigError("profile.eps_fraction", "must be positive");
    if (!(p.fit.safety >= 1.0)) throw ConfigError("profile.safety", "must be >= 1");
    if (!(p.fit.floor_fraction > 0.0)) throw ConfigError("profile.floor_fraction", "must be positive");
    return p;
}

std::vector<TimePair> parse_times(const json& j) {
    std::vector<TimePair> out;
    if (j.is_object()) {
        // Cartesian grid of source times and gaps.
        if (!find(j, "s") || !find(j, "gap")) throw ConfigError("times", "grid form needs \"s\" and \"gap\"");
        const auto s = get_numbers(j["s"], "times.s");
        const auto gap = get_numbers(j["gap"], "times.gap");
        for (double si : s) {
            for (double gi : gap) out.push_back({si, si + gi});
        }
        return out;
    }
    if (!j.is_array()) throw ConfigError("times", "expected an array of [s, t] pairs or a {s, gap} grid");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string field = "times[" + std::to_string(i) + "]";
        const auto& e = j[i];
        TimePair tp;
        if (e.is_array() && e.size() == 2) {
            tp.s = get_number(e[0], field + "[0]");
            tp.t = get_number(e[1], field + "[1]");
        } else if (e.is_object() && find(e, "s") && find(e, "t")) {
            tp.s = get_number(e["s"], field + ".s");
            tp.t = get_number(e["t"], field + ".t");
        } else {
            throw ConfigError(field, "expected [s, t] or {\"s\":..,\"t\":..}");
        }
        out.push_back(tp);
    }
    return out;
}

std::vector<std::vector<double>> parse_angles(const json& j, std::size_t factors) {
    if (!j.is_array()) throw ConfigError("angles", "expected an array");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string field = "angles[" + std::to_string(i) + "]";
        std::vector<double> tuple;
        if (j[i].is_number()) {
            tuple.assign(factors, get_number(j[i], field));
        } else {
            tuple = get_numbers(j[i], field);
            if (tuple.size() != factors) throw ConfigError(field, "needs one angle per factor");
        }
        for (double a : tuple) {
            if (!(a >= 0.0 && a <= M_PI + 1e-15)) throw ConfigError(field, "angles must lie in [0, pi]");
        }
        for (double& a : tuple) a = std::min(a, M_PI);
        out.push_back(std::move(tuple));
    }
    return out;
}

std::vector<CheckSpec> parse_checks(const json& j) {
    if (!j.is_array()) throw ConfigError("checks", "expected an array");
    const auto known = known_checks();
    const std::set<std::string> ids(known.begin(), known.end());
    std::vector<CheckSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string field = "checks[" + std::to_string(i) + "]";
        CheckSpec c;
        if (j[i].is_string()) {
            c.id = j[i].get<std::string>();
        } else if (j[i].is_object() && find(j[i], "id") && j[i]["id"].is_string()) {
            c.id = j[i]["id"].get<std::string>();
            if (const json* tol = find(j[i], "tol")) c.tol = get_number(*tol, field + ".tol");
        } else {
            throw ConfigError(field, "expected a check id or {\"id\":..,\"tol\":..}");
        }
        if (!ids.count(c.id)) throw ConfigError(field + ".id", "unknown check '" + c.id + "'");
        if (c.tol == 0.0) c.tol = default_tolerance(c.id);
        if (!(c.tol > 0.0)) throw ConfigError(field + ".tol", "must be positive");
        out.push_back(c);
    }
    return out;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ConfigError("scenario", "expected a JSON object");
    Scenario sc;
    if (const json* n = find(doc, "name")) {
        if (!n->is_string()) throw ConfigError("name", "expected a string");
        sc.name = n->get<std::string>();
    }
    const json* geo = find(doc, "geometry");
    if (!geo) throw ConfigError("geometry", "missing");
    sc.factors = parse_geometry(*geo);
    const ProductGeometry g(sc.factors);

    if (const json* p = find(doc, "profile")) sc.profile = parse_profile(*p);
    if (const json* a = find(doc, "a_convention")) {
        if (!a->is_string()) throw ConfigError("a_convention", "expected a string");
        sc.a_convention = parse_a_convention(a->get<std::string>());
    }
    if (const json* m = find(doc, "time_margin")) sc.time_margin = get_number(*m, "time_margin");
    if (!(sc.time_margin > 0.0 && sc.time_margin <= 1.0)) throw ConfigError("time_margin", "must lie in (0, 1]");

    if (const json* t = find(doc, "times")) sc.times = parse_times(*t);
    const double limit = sc.time_margin * singular_time(g);
    for (std::size_t i = 0; i < sc.times.size(); ++i) {
        const std::string field = "times[" + std::to_string(i) + "]";
        if (!(sc.times[i].s >= 0.0)) throw ConfigError(field + ".s", "must be >= 0");
        if (!(sc.times[i].t > sc.times[i].s)) throw ConfigError(field + ".t", "must exceed s");
        if (!(sc.times[i].t < limit)) {
            throw ConfigError(field + ".t", "must be below " + std::to_string(limit) + " (margin * singular time)");
        }
    }
    if (const json* a = find(doc, "angles")) {
        sc.angles = parse_angles(*a, g.factor_count());
    } else {
        sc.angles = {std::vector<double>(g.factor_count(), 0.0)};
    }
    if (const json* s = find(doc, "series")) {
        if (!s->is_object()) throw ConfigError("series", "expected an object");
        if (const json* v = find(*s, "k_max")) sc.series.k_max = get_int(*v, "series.k_max");
        if (const json* v = find(*s, "tail_tol")) sc.series.tail_tol = get_number(*v, "series.tail_tol");
        if (const json* v = find(*s, "sigma_min")) sc.series.sigma_min = get_number(*v, "series.sigma_min");
        if (const json* v = find(*s, "enforce_tail")) {
            if (!v->is_boolean()) throw ConfigError("series.enforce_tail", "expected a boolean");
            sc.series.enforce_tail = v->get<bool>();
        }
        if (sc.series.k_max < 0) throw ConfigError("series.k_max", "must be >= 0");
        if (!(sc.series.tail_tol > 0.0)) throw ConfigError("series.tail_tol", "must be positive");
        if (!(sc.series.sigma_min > 0.0)) throw ConfigError("series.sigma_min", "must be positive");
    }
    if (const json* q = find(doc, "quadrature")) {
        if (!q->is_object()) throw ConfigError("quadrature", "expected an object");
        if (const json* v = find(*q, "nodes")) sc.quad_nodes = get_int(*v, "quadrature.nodes");
        if (const json* v = find(*q, "fd_nodes")) sc.fd_nodes = get_int(*v, "quadrature.fd_nodes");
        if (const json* v = find(*q, "bump_width")) sc.fd_bump_width = get_number(*v, "quadrature.bump_width");
        if (sc.quad_nodes < 16) throw ConfigError("quadrature.nodes", "must be >= 16");
        if (sc.fd_nodes < 64) throw ConfigError("quadrature.fd_nodes", "must be >= 64");
        if (!(sc.fd_bump_width > 0.0)) throw ConfigError("quadrature.bump_width", "must be positive");
    }
    if (const json* c = find(doc, "checks")) sc.checks = parse_checks(*c);
    if (const json* o = find(doc, "output")) {
        if (o->is_string()) {
            sc.out_dir = o->get<std::string>();
        } else if (o->is_object() && find(*o, "dir") && (*o)["dir"].is_string()) {
            sc.out_dir = (*o)["dir"].get<std::string>();
        } else {
            throw ConfigError("output", "expected a directory string or {\"dir\": ..}");
        }
    }
    if (const json* th = find(doc, "threads")) sc.threads = get_int(*th, "threads");
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario", std::string("parse error: ") + e.what());
    }
    return parse_scenario(doc);
}

}  // namespace rfheat::harness
