#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rfheat/errors.hpp"
#include "rfheat/harness.hpp"

namespace rfheat::harness {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// JSON has no NaN or infinity.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt(const std::optional<double>& v) { return v ? finite_or_null(*v) : json(nullptr); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : ""; }

}  // namespace

std::string results_csv(const std::vector<CheckResult>& results, std::size_t factor_count) {
    std::ostringstream os;
    os << "check_id,geometry,kind,s,t";
    for (std::size_t i = 0; i < factor_count; ++i) os << ",theta" << i;
    os << ",lhs,rhs,slack,tol,pass,note\n";
    for (const auto& r : results) {
        os << r.check_id << ',' << csv_field(r.geometry) << ',' << r.kind << ',' << num(r.s) << ',' << num(r.t);
        for (std::size_t i = 0; i < factor_count; ++i) {
            os << ',' << (i < r.theta.size() ? num(r.theta[i]) : "");
        }
        os << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.slack) << ',' << num(r.tol) << ','
           << (r.pass ? "true" : "false") << ',' << csv_field(r.note) << '\n';
    }
    return os.str();
}

json summary_json(const RunOutcome& outcome) {
    struct Agg {
        std::string kind;
        int count = 0;
        int passed = 0;
        int errors = 0;
        double min_slack = INFINITY;
        double max_residual = 0.0;
    };
    std::vector<std::string> order;
    std::map<std::string, Agg> agg;
    for (const auto& r : outcome.results) {
        auto [it, inserted] = agg.try_emplace(r.check_id);
        if (inserted) order.push_back(r.check_id);
        Agg& a = it->second;
        a.kind = r.kind;
        ++a.count;
        if (r.pass) ++a.passed;
        if (!std::isfinite(r.slack)) {
            ++a.errors;
            continue;
        }
        if (r.kind == "identity") {
            a.max_residual = std::max(a.max_residual, std::abs(r.slack));
        } else {
            a.min_slack = std::min(a.min_slack, r.slack);
        }
    }
    json checks = json::array();
    for (const auto& id : order) {
        const Agg& a = agg.at(id);
        json c = {{"id", id}, {"kind", a.kind}, {"count", a.count}, {"passed", a.passed},
                  {"failed", a.count - a.passed}, {"errors", a.errors}};
        if (a.kind == "identity") {
            c["max_residual"] = a.max_residual;
        } else {
            c["min_slack"] = finite_or_null(a.min_slack);
        }
        checks.push_back(std::move(c));
    }
    const auto& sc = outcome.scenario;
    json out = {{"scenario", sc.name},
                {"geometry", sc.geometry().label()},
                {"a_convention", std::string(to_string(sc.a_convention))},
                {"results", outcome.results.size()},
                {"success", outcome.success},
                {"checks", std::move(checks)}};
    json prof = {{"A0", outcome.profile.A(0.0)}, {"B0", outcome.profile.B(0.0)},
                 {"empirical", outcome.profile.empirical}};
    if (outcome.fit) {
        prof["raw_max"] = outcome.fit->raw_max;
        prof["floor"] = outcome.fit->floor;
        prof["argmax"] = outcome.fit->argmax;
        prof["argmax_time"] = outcome.fit->argmax_time;
        prof["evaluations"] = outcome.fit->evaluations;
    }
    out["profile"] = std::move(prof);
    return out;
}

void write_reports(const RunOutcome& outcome, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("output", "cannot create " + out_dir.string() + ": " + ec.message());
    const auto& name = outcome.scenario.name;
    {
        std::ofstream csv(out_dir / (name + "_checks.csv"));
        if (!csv) throw ConfigError("output", "cannot write to " + out_dir.string());
        csv << results_csv(outcome.results, outcome.scenario.factors.size());
    }
    std::ofstream js(out_dir / (name + "_summary.json"));
    if (!js) throw ConfigError("output", "cannot write to " + out_dir.string());
    js << summary_json(outcome).dump(2) << '\n';
}

json to_json(const BoundReport& r) {
    return {{"n", r.n},
            {"s", r.s},
            {"t", r.t},
            {"m0", r.m0},
            {"c_n", r.c_n},
            {"envelope_valid", r.envelope_valid},
            {"chi_ts", r.chi_ts},
            {"A_s", r.A_s},
            {"B_s", r.B_s},
            {"a_convention", std::string(to_string(r.convention))},
            {"C_n", r.C_n},
            {"H_mid", r.H_mid},
            {"I1", finite_or_null(r.I1)},
            {"I2", finite_or_null(r.I2)},
            {"alpha_bound", finite_or_null(r.alpha_bound)},
            {"beta_bound", finite_or_null(r.beta_bound)},
            {"kernel_bound", finite_or_null(r.kernel_bound)},
            {"corollary_bound", opt(r.corollary_bound)},
            {"corollary_power_law", opt(r.corollary_power_law)},
            {"Ctilde_n", opt(r.Ctilde_n)}};
}

std::string bound_csv_header() {
    return "n,s,t,m0,c_n,envelope_valid,chi_ts,A_s,B_s,a_convention,C_n,H_mid,I1,I2,"
           "alpha_bound,beta_bound,kernel_bound,corollary_bound,corollary_power_law,Ctilde_n";
}

std::string bound_csv_row(const BoundReport& r) {
    std::ostringstream os;
    os << r.n << ',' << num(r.s) << ',' << num(r.t) << ',' << num(r.m0) << ',' << num(r.c_n) << ','
       << (r.envelope_valid ? "true" : "false") << ',' << num(r.chi_ts) << ',' << num(r.A_s) << ','
       << num(r.B_s) << ',' << to_string(r.convention) << ',' << num(r.C_n) << ',' << num(r.H_mid) << ','
       << num(r.I1) << ',' << num(r.I2) << ',' << num(r.alpha_bound) << ',' << num(r.beta_bound) << ','
       << num(r.kernel_bound) << ',' << opt_num(r.corollary_bound) << ',' << opt_num(r.corollary_power_law)
       << ',' << opt_num(r.Ctilde_n);
    return os.str();
}

}  // namespace rfheat::harness
