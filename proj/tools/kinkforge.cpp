// kinkforge command-line front end.

#include "kinkforge/catalog/catalog.hpp"
#include "kinkforge/errors.hpp"
#include "kinkforge/painleve/painleve.hpp"
#include "kinkforge/simulate/simulate.hpp"
#include "kinkforge/solve/solve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace kinkforge;
using algebra::Rational;

namespace {

constexpr int kSchemaVersion = 1;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json doc(const std::string& verb) { return json{{"schema_version", kSchemaVersion}, {"verb", verb}}; }

std::optional<fs::path> out_dir(const std::string& flag) {
    if (!flag.empty()) return fs::path(flag);
    if (const char* env = std::getenv("KINKFORGE_OUT"); env && *env) return fs::path(env);
    return std::nullopt;
}

void emit(const json& j, const std::optional<fs::path>& dir, const std::string& name) {
    if (!dir) return;
    fs::create_directories(*dir);
    std::ofstream f(*dir / name);
    f << j.dump(2) << '\n';
    std::cout << "wrote " << (*dir / name).string() << '\n';
}

json surds_json(const algebra::SurdContext& s) {
    json j = json::object();
    for (const auto& r : s.relations()) j[r.name] = r.square.to_string();
    return j;
}

json velocities_json(const painleve::VelocityResult& v) {
    json vals = json::array();
    for (double x : v.velocities) vals.push_back(x);
    return {{"values", vals}, {"degenerate", v.degenerate}};
}

std::string velocities_text(const painleve::VelocityResult& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.velocities.size(); ++i) s += (i ? ", " : "") + fmt(v.velocities[i]);
    s += "}";
    if (v.degenerate) s += "  (degenerate: a compatibility condition vanishes identically)";
    return s;
}

std::string B_text(const system::PdeSystem& sys) { return sys.B ? sys.B->to_string() : "sym"; }

// ---- painleve / velocities / sweep

json branch_json(const painleve::BranchAnalysis& a) {
    const auto& e = a.expansion;
    const auto& br = e.branch;
    json j;
    j["label"] = br.label();
    j["pole_orders"] = {br.q1, br.q2};
    j["principal"] = a.principal;
    j["constraints"] = json::array();
    for (const auto& c : br.constraints) j["constraints"].push_back(c.to_string());
    j["B_binding"] = br.B_binding ? json(br.B_binding->to_string()) : json(nullptr);
    j["surds"] = surds_json(br.surds);
    j["free_symbols"] = e.free_symbols;
    j["a"] = json::array();
    j["b"] = json::array();
    for (const auto& c : e.a) j["a"].push_back(c.to_string());
    for (const auto& c : e.b) j["b"].push_back(c.to_string());
    j["resonances"] = json::array();
    for (const auto& r : e.resonances)
        j["resonances"].push_back({{"k", r.k},
                                   {"free_symbol", r.free_symbol},
                                   {"obstruction", r.obstruction ? json(r.obstruction->to_string()) : json(nullptr)}});
    j["conditions"] = json::array();
    if (a.relation)
        for (const auto& c : a.relation->conditions)
            j["conditions"].push_back({{"condition", c.condition.to_string()},
                                       {"stripped_monomial", c.stripped_monomial.to_string()},
                                       {"source_order", c.source_order}});
    j["stopped"] = e.stopped;
    return j;
}

void branch_text(std::ostream& os, const painleve::BranchAnalysis& a) {
    const auto& e = a.expansion;
    os << "branch " << e.branch.label() << (a.principal ? "" : "  [analytic component]") << '\n';
    for (const auto& c : e.branch.constraints) os << "  constraint: " << c.to_string() << " = 0\n";
    for (const auto& r : e.branch.surds.relations()) os << "  " << r.name << "^2 = " << r.square.to_string() << '\n';
    for (int k = 0; k <= e.last_order(); ++k)
        os << "  a" << k << " = " << e.a[static_cast<std::size_t>(k)].to_string() << "\n  b" << k << " = "
           << e.b[static_cast<std::size_t>(k)].to_string() << '\n';
    for (const auto& r : e.resonances)
        os << "  resonance k = " << r.k << ", free " << r.free_symbol
           << (r.obstruction ? ", compatibility required" : "") << '\n';
    if (a.relation)
        for (const auto& c : a.relation->conditions)
            os << "  dispersion: " << c.condition.to_string() << " = 0"
               << (c.stripped_monomial.is_constant() ? "" : "  (removed factor " + c.stripped_monomial.to_string() + ")")
               << '\n';
    if (!e.stopped.empty()) os << "  stopped: " << e.stopped << '\n';
}

int cmd_painleve(const std::string& system_arg, const std::string& B_arg, std::optional<int> K, const std::string& out,
                 bool velocities_only) {
    const auto sys = system::resolve_system(system_arg, B_arg);
    if (K && *K < 1) throw Usage("--K must be positive");
    bool uses_B = false;
    for (const auto& r : sys.rhs)
        for (const auto& v : r.variables()) uses_B = uses_B || v == system::kB;
    if (velocities_only && uses_B && !sys.B) throw Usage("velocities needs a rational --B");
    const auto analyses = velocities_only ? std::vector<painleve::BranchAnalysis>{} : painleve::analyze(sys, K);
    json j = doc(velocities_only ? "velocities" : "painleve");
    j["system"] = json::parse(system::emit_system_spec(sys));
    j["B"] = B_text(sys);
    std::cout << "system " << sys.name << ", B = " << B_text(sys) << '\n';
    if (!velocities_only) {
        j["K"] = K ? json(*K) : json(nullptr);
        j["branches"] = json::array();
        for (const auto& a : analyses) {
            branch_text(std::cout, a);
            j["branches"].push_back(branch_json(a));
        }
    }
    if (sys.B || !uses_B) {
        const auto v = sys.B ? painleve::sliced_velocities(sys, *sys.B, K)
                             : painleve::union_velocities(painleve::analyze(sys, K), std::nullopt);
        std::cout << "velocities: " << velocities_text(v) << '\n';
        j["velocities"] = velocities_json(v);
    }
    emit(j, out_dir(out), velocities_only ? "velocities.json" : "painleve.json");
    return 0;
}

std::vector<Rational> parse_B_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = system::parse_B(item);
        if (!b) throw Usage("sweep needs rational B values, got '" + item + "'");
        out.push_back(*b);
    }
    if (out.empty()) throw Usage("sweep needs at least one B value");
    return out;
}

int cmd_sweep(const std::string& system_arg, const std::string& B_arg, std::optional<int> K, const std::string& out) {
    const auto values = parse_B_list(B_arg);
    const auto sys = system::resolve_system(system_arg, std::string("sym"));
    const auto analyses = painleve::analyze(sys, K);  // symbolic once, evaluated per B
    json j = doc("sweep");
    j["system"] = json::parse(system::emit_system_spec(sys));
    j["rows"] = json::array();
    std::cout << "system " << sys.name << '\n';
    for (const auto& B : values) {
        const auto v = painleve::union_velocities(analyses, B);
        std::cout << "B = " << B.to_string() << ": " << velocities_text(v) << '\n';
        json row = velocities_json(v);
        row["B"] = B.to_string();
        j["rows"].push_back(row);
    }
    emit(j, out_dir(out), "sweep.json");
    return 0;
}

// ---- solve

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Usage("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int cmd_solve(const std::string& system_arg, const std::string& B_arg, const std::string& ansatz_path,
              std::uint64_t seed, const std::string& out) {
    const auto sys = system::resolve_system(system_arg, B_arg);
    // builtin template names stand in for a spec file
    ansatz::AnsatzExpr z;
    if (ansatz_path == "poly_times_exp")
        z = ansatz::two_phase_template(ansatz::TemplateKind::poly_times_exp, sys.scalar);
    else if (ansatz_path == "double_exp")
        z = ansatz::two_phase_template(ansatz::TemplateKind::double_exp, sys.scalar);
    else
        z = ansatz::parse_ansatz_spec(read_file(ansatz_path));
    solve::SolveConfig cfg;
    cfg.seed = seed;
    const auto results = solve::solve_ansatz(sys, z, cfg);
    json j = doc("solve");
    j["system"] = json::parse(system::emit_system_spec(sys));
    j["ansatz"] = json::parse(ansatz::emit_ansatz_spec(z));
    j["seed"] = seed;
    j["solutions"] = json::array();
    bool any = false;
    std::cout << "system " << sys.name << ", B = " << B_text(sys) << ", unknowns";
    for (const auto& u : z.unknowns) std::cout << ' ' << u;
    std::cout << '\n';
    for (const auto& r : results) {
        json num = json::object();
        for (std::size_t i = 0; i < z.unknowns.size(); ++i) num[z.unknowns[i]] = r.numeric.x[i];
        json exact = json::object();
        for (const auto& [k, v] : r.exact.values) exact[k] = v.to_string();
        j["solutions"].push_back({{"numeric", num},
                                  {"residual", r.numeric.residual},
                                  {"min_singular_value", r.numeric.min_singular},
                                  {"exact", exact},
                                  {"free", r.exact.free},
                                  {"unreconstructed", r.exact.unreconstructed},
                                  {"surds", surds_json(r.exact.surds)},
                                  {"verified", r.verdict.ok},
                                  {"first_nonzero", r.verdict.first_nonzero}});
        any = any || r.verdict.ok;
        std::cout << (r.verdict.ok ? "  verified  " : "  rejected  ") << r.exact.to_string();
        if (!r.verdict.ok) std::cout << "  [" << r.verdict.first_nonzero << "]";
        std::cout << '\n';
    }
    if (results.empty()) std::cout << "  no real solutions found\n";
    emit(j, out_dir(out), "solve.json");
    return any ? 0 : 1;
}

// ---- verify

int cmd_verify(const std::string& id, bool all, const std::string& out) {
    if (all == !id.empty()) throw Usage("verify takes exactly one of an entry id or --all");
    std::vector<const catalog::ClosedFormSolution*> entries;
    if (all)
        for (const auto& s : catalog::catalog_list()) entries.push_back(&s);
    else
        entries.push_back(&catalog::catalog_get(id));
    json j = doc("verify");
    j["entries"] = json::array();
    bool ok = true;
    for (const auto* s : entries) {
        const auto r = catalog::verify_closed_form(*s);
        ok = ok && r.ok();
        auto checks = [](const std::vector<catalog::ReadingCheck>& v) {
            json a = json::array();
            for (const auto& c : v)
                a.push_back({{"label", c.label}, {"residual_zero", c.residual_zero}, {"first_nonzero", c.first_nonzero}});
            return a;
        };
        json vel = json::array();
        for (const auto& v : s->velocities()) vel.push_back(v.to_string());
        j["entries"].push_back({{"id", s->id},
                                {"system", s->system},
                                {"B", s->B ? s->B->to_string() : "sym"},
                                {"provenance", s->provenance},
                                {"pass", r.ok()},
                                {"symbolic_ok", r.symbolic_ok},
                                {"first_nonzero", r.first_nonzero},
                                {"numeric_ok", r.numeric_ok},
                                {"max_residual", r.max_residual},
                                {"points", r.points},
                                {"skipped", r.skipped},
                                {"velocities", vel},
                                {"variants", checks(r.variants)},
                                {"rejected_readings", checks(r.rejected)},
                                {"notes", s->notes}});
        std::cout << (r.ok() ? "pass  " : "FAIL  ") << s->id << "  symbolic " << (r.symbolic_ok ? "zero" : r.first_nonzero)
                  << ", numeric max " << fmt(r.max_residual) << " over " << r.points << " points\n";
    }
    j["pass"] = ok;
    emit(j, out_dir(out), "verify.json");
    return ok ? 0 : 1;
}

// ---- simulate

simulate::Grid1D parse_grid(const std::string& text) {
    double x0 = 0, x1 = 0;
    int nx = 0;
    char c1 = 0, c2 = 0;
    std::stringstream ss(text);
    if (!(ss >> x0 >> c1 >> x1 >> c2 >> nx) || c1 != ',' || c2 != ',' || !ss.eof())
        throw Usage("--grid expects x0,x1,nx");
    return simulate::Grid1D(x0, x1, nx);
}

int cmd_simulate(const std::string& id, const std::string& B_arg, const std::string& grid_arg, double dt,
                 double t_end, const std::string& out) {
    if (id.empty()) throw Usage("simulate needs a catalog entry id");
    catalog::ClosedFormSolution sol = catalog::catalog_get(id);
    const auto B = system::parse_B(B_arg);
    if (B)
        sol = catalog::specialize(sol, *B);
    else if (!sol.B)
        throw Usage(id + " keeps B symbolic; pass a rational --B");
    const auto grid = grid_arg.empty() ? simulate::Grid1D(-25, 25, 1001) : parse_grid(grid_arg);

    simulate::SimConfig cfg;
    cfg.system = sol.pde();
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.boundary = simulate::Boundary::exact_dirichlet;
    cfg.exact = sol;
    cfg.record_every = std::max(1, static_cast<int>(t_end / dt / 100));
    const auto traj = simulate::run_simulation(simulate::init_from_exact(sol, grid, 0.0, t_end), grid, cfg);
    const double err = simulate::linf_error(traj.back(), grid, sol);

    json j = doc("simulate");
    j["id"] = id;
    j["B"] = sol.B ? sol.B->to_string() : "sym";
    j["grid"] = {{"x0", grid.x0}, {"x1", grid.x1}, {"nx", grid.nx}};
    j["dt"] = dt;
    j["t_end"] = t_end;
    j["frames"] = traj.size();
    j["linf_error_final"] = err;
    json predicted = json::array();
    const auto params = sol.evaluator().params();
    for (const auto& v : sol.velocities()) predicted.push_back(-v.evaluate(params));
    j["predicted_front_speeds"] = predicted;
    std::cout << id << ": " << traj.size() << " frames to t = " << fmt(t_end) << ", final L-inf error " << fmt(err)
              << '\n';
    double level = 0.5;
    if (!sol.pole) {
        level = simulate::front_level(sol, 0);
        try {
            const double v = simulate::measure_front_velocity(traj, grid, 0, level);
            j["measured_front_velocity"] = v;
            std::cout << "front velocity of U at level " << fmt(level) << ": " << fmt(v) << '\n';
        } catch (const Error& e) {
            j["measured_front_velocity"] = nullptr;
            j["front_note"] = e.what();
            std::cout << "front velocity not measured: " << e.what() << '\n';
        }
    }
    if (const auto dir = out_dir(out)) {
        fs::create_directories(*dir);
        simulate::write_csv((*dir / "fields.csv").string(), traj, grid);
        simulate::write_plot_script((*dir / "plot.py").string(), "fields.csv", level);
        std::cout << "wrote " << (*dir / "fields.csv").string() << " and plot.py\n";
    }
    emit(j, out_dir(out), "simulate.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinkforge: exact kinks and fronts of two-component reaction-diffusion systems"};
    app.require_subcommand(1, 1);

    std::string system_arg, B_arg = "sym", out, ansatz_path, id, grid_arg;
    int K = 0;
    std::uint64_t seed = 42;
    bool all = false;
    double dt = 1e-3, t_end = 5;

    auto common = [&](CLI::App* sc, bool with_system) {
        if (with_system) sc->add_option("--system", system_arg, "builtin alias or path to a system spec")->required();
        sc->add_option("--out", out, "output directory (default: $KINKFORGE_OUT)");
    };
    auto* painleve_cmd = app.add_subcommand("painleve", "Laurent expansion, resonances and dispersion relation");
    common(painleve_cmd, true);
    painleve_cmd->add_option("--B", B_arg, "rational value or sym")->capture_default_str();
    painleve_cmd->add_option("--K", K, "expansion order (default q1 + q2 + 8)");

    auto* vel_cmd = app.add_subcommand("velocities", "admissible front velocities at a rational B");
    common(vel_cmd, true);
    vel_cmd->add_option("--B", B_arg, "rational value")->required();
    vel_cmd->add_option("--K", K, "expansion order");

    auto* solve_cmd = app.add_subcommand("solve", "solve an ansatz for its unknown constants");
    common(solve_cmd, true);
    solve_cmd->add_option("--B", B_arg, "rational value or sym")->capture_default_str();
    solve_cmd->add_option("--ansatz", ansatz_path, "path to an ansatz spec, or poly_times_exp / double_exp for the two-phase templates")->required();
    solve_cmd->add_option("--seed", seed, "multistart seed")->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "verify catalog entries by substitution");
    common(verify_cmd, false);
    verify_cmd->add_option("id", id, "catalog entry id");
    verify_cmd->add_flag("--all", all, "verify every entry");

    auto* sim_cmd = app.add_subcommand("simulate", "integrate a catalog entry from its exact initial data");
    common(sim_cmd, false);
    sim_cmd->add_option("id", id, "catalog entry id")->required();
    sim_cmd->add_option("--B", B_arg, "rational value for entries with symbolic B");
    sim_cmd->add_option("--grid", grid_arg, "x0,x1,nx (default -25,25,1001)");
    sim_cmd->add_option("--dt", dt, "time step")->capture_default_str();
    sim_cmd->add_option("--t-end", t_end, "final time")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "velocities over a list of B values");
    common(sweep_cmd, true);
    sweep_cmd->add_option("--B", B_arg, "comma-separated rational values")->required();
    sweep_cmd->add_option("--K", K, "expansion order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    const std::optional<int> K_opt = K > 0 ? std::optional<int>(K) : std::nullopt;
    try {
        if (*painleve_cmd) return cmd_painleve(system_arg, B_arg, K_opt, out, false);
        if (*vel_cmd) return cmd_painleve(system_arg, B_arg, K_opt, out, true);
        if (*sweep_cmd) return cmd_sweep(system_arg, B_arg, K_opt, out);
        if (*solve_cmd) return cmd_solve(system_arg, B_arg, ansatz_path, seed, out);
        if (*verify_cmd) return cmd_verify(id, all, out);
        if (*sim_cmd) {
            if (sim_cmd->count("--B") == 0) B_arg = "sym";
            return cmd_simulate(id, B_arg, grid_arg, dt, t_end, out);
        }
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UnknownEntry& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
