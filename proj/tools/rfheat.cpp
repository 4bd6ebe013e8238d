// rfheat: heat-kernel bounds under Ricci flow on products of round spheres.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "rfheat/errors.hpp"
#include "rfheat/harness.hpp"

using namespace rfheat;
using namespace rfheat::harness;
using nlohmann::json;

namespace {

struct Common {
    std::string scenario;
    std::string out;
    double tol_scale = 1.0;
    std::string a_convention;
    int threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("scenario", c.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory (defaults to the scenario's output entry)");
    cmd->add_option("--a-convention", c.a_convention, "A(t) convention: squared or linear")
        ->check(CLI::IsMember({"squared", "linear"}));
}

Scenario load(const Common& c) {
    Scenario sc = load_scenario(c.scenario);
    if (!c.a_convention.empty()) sc.a_convention = parse_a_convention(c.a_convention);
    if (c.threads > 0) sc.threads = c.threads;
    return sc;
}

std::filesystem::path out_dir(const Common& c, const Scenario& sc) {
    const std::filesystem::path dir = c.out.empty() ? sc.out_dir : std::filesystem::path(c.out);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw ConfigError("output", "cannot write " + path.string());
    f << text;
}

int cmd_verify(const Common& c) {
    const Scenario sc = load(c);
    RunOptions opts;
    opts.tol_scale = c.tol_scale;
    const RunOutcome outcome = run(sc, opts);
    const auto dir = out_dir(c, sc);
    write_reports(outcome, dir);
    const json summary = summary_json(outcome);
    for (const auto& chk : summary["checks"]) {
        std::printf("%-24s %4d/%-4d %s\n", chk["id"].get<std::string>().c_str(), chk["passed"].get<int>(),
                    chk["count"].get<int>(), chk["failed"].get<int>() == 0 ? "pass" : "FAIL");
    }
    for (const auto& r : outcome.results) {
        if (!r.pass && r.note.rfind("error:", 0) == 0) {
            std::fprintf(stderr, "%s (s=%g, t=%g): %s\n", r.check_id.c_str(), r.s, r.t, r.note.c_str());
        }
    }
    std::printf("%s: %zu results, %s; reports in %s\n", sc.name.c_str(), outcome.results.size(),
                outcome.success ? "all passed" : "some FAILED", dir.string().c_str());
    return outcome.success ? 0 : 1;
}

int cmd_bound(const Common& c) {
    const Scenario sc = load(c);
    const auto g = sc.geometry();
    std::optional<ProfileFit> fit;
    const SobolevProfile prof = resolve_profile(sc, &fit);
    std::string csv = bound_csv_header() + "\n";
    json rows = json::array();
    for (const auto& tp : sc.times) {
        const auto rep = kernel_bound(make_bound_inputs(g, prof, tp.s, tp.t, sc.a_convention));
        csv += bound_csv_row(rep) + "\n";
        rows.push_back(to_json(rep));
    }
    const auto dir = out_dir(c, sc);
    write_text(dir / (sc.name + "_bounds.csv"), csv);
    write_text(dir / (sc.name + "_bounds.json"), rows.dump(2) + "\n");
    std::cout << csv;
    return 0;
}

int cmd_kernel(const Common& c) {
    const Scenario sc = load(c);
    const auto g = sc.geometry();
    std::string csv = "s,t";
    for (std::size_t i = 0; i < g.factor_count(); ++i) csv += ",theta" + std::to_string(i);
    csv += ",kernel,tail_bound\n";
    for (const auto& tp : sc.times) {
        for (const auto& a : sc.angles) {
            const auto kv = kernel(g, {a, tp.s, tp.t}, sc.series);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", tp.s, tp.t);
            csv += buf;
            for (double th : a) {
                std::snprintf(buf, sizeof buf, ",%.17g", th);
                csv += buf;
            }
            std::snprintf(buf, sizeof buf, ",%.17g,%.3g\n", kv.value, kv.tail_bound);
            csv += buf;
        }
    }
    write_text(out_dir(c, sc) / (sc.name + "_kernel.csv"), csv);
    std::cout << csv;
    return 0;
}

int cmd_sobolev(const Common& c) {
    const Scenario sc = load(c);
    const auto g = sc.geometry();
    std::vector<double> times;
    double hi = 0.0;
    for (const auto& tp : sc.times) hi = std::max(hi, tp.t);
    for (int i = 0; i < 6; ++i) times.push_back(hi * i / 5.0);
    const ProductQuadrature quad(g, std::min(sc.quad_nodes, 200));
    json out = json::object();
    out["geometry"] = g.label();
    for (AConvention conv : {AConvention::squared, AConvention::linear}) {
        if (!c.a_convention.empty() && conv != sc.a_convention) continue;
        const auto est = estimate_sobolev(g, conv, TestFamily::defaults(), times, quad,
                                          sc.profile.eps_fraction, sc.profile.fit);
        out[std::string(to_string(conv))] = {{"K", est.K},
                                             {"eps", est.eps},
                                             {"A0", est.A0},
                                             {"B0", est.B0},
                                             {"raw_max", est.fit.raw_max},
                                             {"floor", est.fit.floor},
                                             {"argmax", est.fit.argmax},
                                             {"argmax_time", est.fit.argmax_time},
                                             {"evaluations", est.fit.evaluations}};
    }
    write_text(out_dir(c, sc) / (sc.name + "_sobolev.json"), out.dump(2) + "\n");
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat-kernel bounds under Ricci flow on products of round spheres"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--tol-scale", common.tol_scale, "Multiply every check tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", common.threads, "Worker threads (0: hardware concurrency)");

    std::map<CLI::App*, int (*)(const Common&)> verbs;
    const std::pair<const char*, const char*> specs[] = {
        {"verify", "Run the scenario's checks and write CSV/JSON reports"},
        {"bound", "Tabulate the bound report for each time pair"},
        {"kernel", "Tabulate kernel values over the angle and time grid"},
        {"sobolev", "Estimate the Sobolev constants"},
    };
    int (*fns[])(const Common&) = {cmd_verify, cmd_bound, cmd_kernel, cmd_sobolev};
    for (std::size_t i = 0; i < std::size(specs); ++i) {
        CLI::App* sub = app.add_subcommand(specs[i].first, specs[i].second);
        add_common(sub, common);
        sub->add_option("--tol-scale", common.tol_scale, "Multiply every check tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--threads", common.threads, "Worker threads (0: hardware concurrency)");
        verbs[sub] = fns[i];
    }

    CLI11_PARSE(app, argc, argv);
    try {
        for (const auto& [sub, fn] : verbs) {
            if (sub->parsed()) return fn(common);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
