#include "rstop/cli_commands.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rstop/errors.hpp"
#include "rstop/scenario.hpp"
#include "rstop/simulation.hpp"
#include "rstop/value_function.hpp"

namespace rstop {

namespace {

using ordered_json = nlohmann::ordered_json;

// every number in an artifact goes through the 12-significant-digit filter
double j12(double x) { return round12(x); }

void write_output(const std::string& out_path, const std::string& content,
                  std::ostream& out) {
    if (out_path.empty()) {
        out << content;
        if (content.empty() || content.back() != '\n') out << "\n";
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw scenario_error("cannot write output file: " + out_path);
    f << content;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---------- shared document pieces ----------

ordered_json scenario_json(const Scenario& s) {
    ordered_json j;
    j["family"] = family_name(s.family);
    switch (s.family) {
        case Family::Ellsberg:
            j["alpha"] = j12(s.alpha);
            j["eps"] = j12(s.eps);
            j["c"] = j12(s.c);
            j["sigma"] = j12(s.sigma);
            break;
        case Family::Test:
            j["beta"] = j12(s.beta);
            j["a"] = j12(s.a);
            j["b"] = j12(s.b);
            j["m_lo"] = j12(s.m_lo);
            j["m_hi"] = j12(s.m_hi);
            j["c"] = j12(s.c);
            j["sigma"] = j12(s.sigma);
            j["u2"] = j12(s.u2);
            break;
        case Family::General:
            j["theta0"] = j12(s.theta0);
            j["theta1"] = j12(s.theta1);
            j["sigma"] = j12(s.sigma);
            j["c"] = j12(s.c);
            j["u00"] = j12(s.u00);
            j["u01"] = j12(s.u01);
            j["u10"] = j12(s.u10);
            j["u11"] = j12(s.u11);
            j["u2"] = j12(s.u2);
            j["m_lo"] = j12(s.m_lo);
            j["m_hi"] = j12(s.m_hi);
            break;
    }
    return j;
}

ordered_json thresholds_json(const Thresholds& th) {
    ordered_json j;
    if (th.ai) {
        j["r2l"] = j12(th.ai->r2l);
        j["r1l"] = j12(th.ai->r1l);
        j["r1R"] = j12(th.ai->r1R);
        j["r2R"] = j12(th.ai->r2R);
    }
    if (th.aii) {
        j["rl"] = j12(th.aii->rl);
        j["rR"] = j12(th.aii->rR);
    }
    if (th.b) {
        j["rtl"] = j12(th.b->rtl);
        j["rtR"] = j12(th.b->rtR);
    }
    return j;
}

struct KvRows {
    std::vector<std::pair<std::string, std::string>> rows;

    void add(const std::string& k, const std::string& v) {
        rows.emplace_back(k, v);
    }
    void add(const std::string& k, double v) { add(k, fmt12(v)); }

    // flatten a (non-nested) json object
    void add_object(const std::string& prefix, const ordered_json& j) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& v = *it;
            std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
            if (v.is_string()) add(key, v.get<std::string>());
            else if (v.is_number()) add(key, fmt12(v.get<double>()));
            else if (v.is_boolean()) add(key, v.get<bool>() ? "true" : "false");
            else if (v.is_null()) add(key, "na");
        }
    }

    std::string str() const {
        std::ostringstream out;
        out << "key,value\n";
        for (const auto& [k, v] : rows) out << k << "," << v << "\n";
        return out.str();
    }
};

// ---------- solve ----------

int cmd_solve(const Scenario& sc, const std::string& out_path,
              const std::string& format, std::ostream& out) {
    Problem prob = sc.problem();
    Thresholds th = classify(prob);
    StoppingPolicy policy{prob, th};
    RegionReport rep = region_report(policy, 0.0);

    ordered_json j;
    j["scenario"] = scenario_json(sc);
    ordered_json cls;
    cls["case"] = case_name(th.case_tag);
    cls["solved_case"] = case_name(th.solved_case);
    cls["c_hat"] = j12(th.c_hat);
    cls["pi_lo"] = j12(th.ind.pi_lo);
    cls["pi_hi"] = j12(th.ind.pi_hi);
    cls["u2_star"] = j12(th.u2_star);
    cls["u2_dstar"] = j12(th.u2_dstar);
    j["classification"] = cls;
    j["thresholds"] = thresholds_json(th);
    ordered_json reg;
    reg["z_breaks"] = ordered_json::array();
    for (double z : rep.z_breaks) reg["z_breaks"].push_back(j12(z));
    reg["regions"] = ordered_json::array();
    for (Region r : rep.regions) reg["regions"].push_back(region_name(r));
    j["regions_t0"] = reg;

    if (sc.is_ellsberg()) {
        EllsbergParams e = sc.ellsberg();
        ordered_json ell;
        double rhat = solve_rhat(e);
        ell["rhat"] = j12(rhat);
        ell["no_learning_cutoff"] = j12(no_learning_cutoff(e));
        ell["value0"] = j12(ellsberg_value0(e));
        if (0.5 * (1.0 + e.eps) < rhat) {
            RbarResult rb = solve_rbar(e);
            ell["rbar"] = j12(rb.rbar);
            ell["z_bar"] = j12(rb.z_bar);
        } else {
            ell["rbar"] = nullptr;
            ell["z_bar"] = nullptr;
        }
        j["two_urn"] = ell;
    }

    if (format == "csv") {
        KvRows rows;
        rows.add_object("", j["classification"]);
        rows.add_object("thresholds", j["thresholds"]);
        for (std::size_t i = 0; i < rep.z_breaks.size(); ++i)
            rows.add("z_break_" + std::to_string(i), rep.z_breaks[i]);
        for (std::size_t i = 0; i < rep.regions.size(); ++i)
            rows.add("region_" + std::to_string(i), region_name(rep.regions[i]));
        if (j.contains("two_urn")) rows.add_object("two_urn", j["two_urn"]);
        write_output(out_path, rows.str(), out);
    } else {
        write_output(out_path, dump_json(j), out);
    }
    return EXIT_OK;
}

// ---------- value ----------

int cmd_value(const Scenario& sc, const std::string& out_path,
              const std::string& format, std::ostream& out) {
    Problem prob = sc.problem();
    Thresholds th = classify(prob);
    ValueFunction vf = build_value_function(prob, th);
    StoppingPolicy policy{prob, th};

    double t_scale = default_horizon(policy) / 50.0;
    std::vector<double> ts = {0.0, 0.5 * t_scale, t_scale};
    const int nz = 161;

    struct Row {
        double t, z, value, immediate;
    };
    std::vector<Row> grid;
    for (double t : ts) {
        RegionReport rep = region_report(policy, t);
        double lo = rep.z_breaks.front();
        double hi = rep.z_breaks.back();
        double span = hi - lo;
        lo -= 0.75 * span;
        hi += 0.75 * span;
        for (int i = 0; i < nz; ++i) {
            double z = lo + (hi - lo) * i / (nz - 1);
            grid.push_back({t, z, evaluate(vf, t, z),
                            immediate_payoff(t, z, prob.payoffs, prob.prior,
                                             prob.model)});
        }
    }

    double v00 = evaluate(vf, 0.0, 0.0);
    SmoothContactReport contact = check_smooth_contact(vf, 0.0);

    if (format == "csv") {
        std::ostringstream csv;
        csv << "t,z,value,immediate\n";
        for (const Row& r : grid)
            csv << fmt12(r.t) << "," << fmt12(r.z) << "," << fmt12(r.value)
                << "," << fmt12(r.immediate) << "\n";
        write_output(out_path, csv.str(), out);
        if (!out_path.empty())
            out << "v(0,0) = " << fmt12(v00) << ", smooth contact at t=0: "
                << (contact.ok() ? "ok" : "VIOLATED") << "\n";
    } else {
        ordered_json j;
        j["scenario"] = scenario_json(sc);
        j["v00"] = j12(v00);
        ordered_json sm;
        sm["ok"] = contact.ok();
        sm["checks"] = ordered_json::array();
        for (const ContactCheck& c : contact.checks) {
            ordered_json e;
            e["z"] = j12(c.z);
            e["where"] = c.where;
            e["value_gap"] = j12(c.value_gap);
            e["slope_gap"] = j12(c.slope_gap);
            e["pass"] = c.pass;
            sm["checks"].push_back(e);
        }
        j["smooth_contact_t0"] = sm;
        j["grid"] = ordered_json::array();
        for (const Row& r : grid) {
            ordered_json e;
            e["t"] = j12(r.t);
            e["z"] = j12(r.z);
            e["value"] = j12(r.value);
            e["immediate"] = j12(r.immediate);
            j["grid"].push_back(e);
        }
        write_output(out_path, dump_json(j), out);
    }
    return EXIT_OK;
}

// ---------- simulate ----------

int cmd_simulate(const Scenario& sc, const std::string& out_path,
                 const std::string& format, const std::string& trace_path,
                 std::ostream& out, std::ostream& err) {
    Problem prob = sc.problem();
    StoppingPolicy policy = make_policy(prob);
    SimConfig cfg = sc.sim;
    double t_max_eff = cfg.t_max > 0.0 ? cfg.t_max : default_horizon(policy);

    if (!trace_path.empty()) {
        std::vector<TraceRow> rows;
        simulate_path(policy, cfg, 0, &rows);
        std::ostringstream csv;
        csv << "t,z,m_lo,m_hi,decision\n";
        for (const TraceRow& r : rows) {
            Decision d = decide(policy, r.t, r.z);
            csv << fmt12(r.t) << "," << fmt12(r.z) << "," << fmt12(r.m_lo)
                << "," << fmt12(r.m_hi) << ","
                << (d.stop ? action_name(d.action) : "continue") << "\n";
        }
        std::ofstream f(trace_path, std::ios::binary);
        if (!f) throw scenario_error("cannot write trace file: " + trace_path);
        f << csv.str();
    }

    SimStats st = estimate(policy, cfg);
    double censored_frac =
        static_cast<double>(st.n_censored) / static_cast<double>(st.n_paths);

    ordered_json j;
    j["scenario"] = scenario_json(sc);
    ordered_json conf;
    conf["measure"] = measure_name(cfg.measure.kind);
    conf["theta"] = j12(cfg.measure.theta);
    conf["dt"] = j12(cfg.dt);
    conf["t_max_effective"] = j12(t_max_eff);
    conf["n_paths"] = cfg.n_paths;
    conf["seed"] = cfg.seed;
    j["config"] = conf;
    ordered_json stats;
    stats["n_paths"] = st.n_paths;
    stats["n_decided"] = st.n_decided;
    stats["n_censored"] = st.n_censored;
    stats["censored_frac"] = j12(censored_frac);
    stats["mean_tau"] = j12(st.mean_tau);
    stats["se_tau"] = j12(st.se_tau);
    stats["freq_a0"] = j12(st.freq_a0);
    stats["freq_a1"] = j12(st.freq_a1);
    stats["freq_a2"] = j12(st.freq_a2);
    if (st.correct_defined) {
        stats["correct_rate"] = j12(st.correct_rate);
        stats["se_correct"] = j12(st.se_correct);
    } else {
        stats["correct_rate"] = nullptr;
        stats["se_correct"] = nullptr;
    }
    j["stats"] = stats;

    j["analytic"] = nullptr;
    if (sc.is_ellsberg()) {
        try {
            AnalyticStats an = analytic_stats(sc.ellsberg(), cfg.measure.theta);
            ordered_json a;
            a["mean_tau"] = j12(an.mean_tau);
            a["correct_prob"] = j12(an.correct_prob);
            j["analytic"] = a;
        } catch (const solver_error&) {
            // no-learning regime: no analytic exit law to report
        }
    }

    if (format == "csv") {
        KvRows rows;
        rows.add_object("config", j["config"]);
        rows.add_object("stats", j["stats"]);
        if (!j["analytic"].is_null()) rows.add_object("analytic", j["analytic"]);
        write_output(out_path, rows.str(), out);
    } else {
        write_output(out_path, dump_json(j), out);
    }

    if (censored_frac > 1e-3) {
        err << "warning: " << st.n_censored << " of " << st.n_paths
            << " paths were censored at the horizon (fraction "
            << fmt12(censored_frac) << " exceeds 0.001)\n";
        return EXIT_CENSORED;
    }
    return EXIT_OK;
}

// ---------- sweep ----------

void apply_sweep_param(Scenario& sc, const std::string& name, double value) {
    auto is = [&name](const char* k) { return name == k; };
    if (is("c")) { sc.c = value; return; }
    if (is("sigma")) { sc.sigma = value; return; }
    switch (sc.family) {
        case Family::Ellsberg:
            if (is("alpha")) { sc.alpha = value; return; }
            if (is("eps")) { sc.eps = value; return; }
            break;
        case Family::Test:
            if (is("beta")) { sc.beta = value; return; }
            if (is("a")) { sc.a = value; return; }
            if (is("b")) { sc.b = value; return; }
            if (is("m_lo")) { sc.m_lo = value; return; }
            if (is("m_hi")) { sc.m_hi = value; return; }
            if (is("u2")) { sc.u2 = value; return; }
            break;
        case Family::General:
            if (is("theta0")) { sc.theta0 = value; return; }
            if (is("theta1")) { sc.theta1 = value; return; }
            if (is("u00")) { sc.u00 = value; return; }
            if (is("u01")) { sc.u01 = value; return; }
            if (is("u10")) { sc.u10 = value; return; }
            if (is("u11")) { sc.u11 = value; return; }
            if (is("u2")) { sc.u2 = value; return; }
            if (is("m_lo")) { sc.m_lo = value; return; }
            if (is("m_hi")) { sc.m_hi = value; return; }
            break;
    }
    throw scenario_error("sweep: parameter '" + name +
                         "' is not sweepable for family " +
                         family_name(sc.family));
}

std::string sanitize_note(std::string msg) {
    for (char& ch : msg)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    return msg;
}

int cmd_sweep(const Scenario& base, const std::string& param, double from,
              double to, int steps, const std::string& out_path,
              const std::string& format, std::ostream& out) {
    // validate the name once up front so typos fail fast
    {
        Scenario probe = base;
        apply_sweep_param(probe, param, from);
    }

    struct SweepRow {
        double value = 0.0;
        bool ok = false;
        std::string note;
        ordered_json fields;  // numeric/string fields in column order
    };

    const std::vector<std::string> columns = {
        "case",     "solved_case", "pi_lo",      "pi_hi",        "c_hat",
        "u2_star",  "u2_dstar",    "stop_a0_r",  "stop_a1_r",    "a2_band_lo",
        "a2_band_hi", "z_break_first", "z_break_last", "v00",    "z_bar",
        "mean_tau", "correct_prob"};

    std::vector<SweepRow> rows;
    for (int i = 0; i < steps; ++i) {
        double value =
            steps == 1 ? from : from + (to - from) * i / (steps - 1.0);
        SweepRow row;
        row.value = value;
        for (const std::string& c : columns) row.fields[c] = nullptr;
        try {
            Scenario sc = base;
            apply_sweep_param(sc, param, value);
            Problem prob = sc.problem();
            Thresholds th = classify(prob);
            ValueFunction vf = build_value_function(prob, th);
            StoppingPolicy policy{prob, th};
            RegionReport rep = region_report(policy, 0.0);

            row.fields["case"] = case_name(th.case_tag);
            row.fields["solved_case"] = case_name(th.solved_case);
            row.fields["pi_lo"] = j12(th.ind.pi_lo);
            row.fields["pi_hi"] = j12(th.ind.pi_hi);
            row.fields["c_hat"] = j12(th.c_hat);
            row.fields["u2_star"] = j12(th.u2_star);
            row.fields["u2_dstar"] = j12(th.u2_dstar);
            row.fields["stop_a0_r"] = j12(th.stop_a0_r());
            row.fields["stop_a1_r"] = j12(th.stop_a1_r());
            if (th.ai) {
                row.fields["a2_band_lo"] = j12(th.ai->r1l);
                row.fields["a2_band_hi"] = j12(th.ai->r1R);
            }
            row.fields["z_break_first"] = j12(rep.z_breaks.front());
            row.fields["z_break_last"] = j12(rep.z_breaks.back());
            row.fields["v00"] = j12(evaluate(vf, 0.0, 0.0));
            if (sc.is_ellsberg()) {
                EllsbergParams e = sc.ellsberg();
                if (0.5 * (1.0 + e.eps) < solve_rhat(e)) {
                    RbarResult rb = solve_rbar(e);
                    row.fields["z_bar"] = j12(rb.z_bar);
                    AnalyticStats an = analytic_stats(e, sc.sim.measure.theta);
                    row.fields["mean_tau"] = j12(an.mean_tau);
                    row.fields["correct_prob"] = j12(an.correct_prob);
                }
            }
            row.ok = true;
        } catch (const std::domain_error& e) {
            row.note = e.what();
        } catch (const solver_error& e) {
            row.note = e.what();
        } catch (const scenario_error& e) {
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }

    if (format == "csv") {
        std::ostringstream csv;
        csv << "param,value,status";
        for (const std::string& c : columns) csv << "," << c;
        csv << ",note\n";
        for (const SweepRow& r : rows) {
            csv << param << "," << fmt12(r.value) << ","
                << (r.ok ? "ok" : "error");
            for (const std::string& c : columns) {
                const auto& v = r.fields[c];
                csv << ",";
                if (v.is_null()) csv << "na";
                else if (v.is_string()) csv << v.get<std::string>();
                else csv << fmt12(v.get<double>());
            }
            csv << "," << sanitize_note(r.note) << "\n";
        }
        write_output(out_path, csv.str(), out);
    } else {
        ordered_json j;
        j["scenario"] = scenario_json(base);
        j["param"] = param;
        j["rows"] = ordered_json::array();
        for (const SweepRow& r : rows) {
            ordered_json e;
            e["value"] = j12(r.value);
            e["status"] = r.ok ? "ok" : "error";
            for (const std::string& c : columns) e[c] = r.fields[c];
            e["note"] = r.note;
            j["rows"].push_back(e);
        }
        write_output(out_path, dump_json(j), out);
    }
    return EXIT_OK;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Robust sequential learning: thresholds, value functions, "
                 "first-passage simulation"};
    app.name("rstop");
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string format = "json";
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "Scenario file (TOML subset)")
            ->required();
        cmd->add_option("--out", out_path, "Output path (default: stdout)");
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* solve = app.add_subcommand(
        "solve", "Classify the policy and report every threshold");
    add_common(solve);

    CLI::App* value = app.add_subcommand(
        "value", "Tabulate the value function against the stop payoff");
    add_common(value);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo first-passage statistics under the policy");
    add_common(simulate);
    std::uint64_t paths_override = 0;
    double dt_override = 0.0;
    std::uint64_t seed_override = 0;
    std::string trace_path;
    CLI::Option* opt_paths =
        simulate->add_option("--paths", paths_override, "Override sim n_paths");
    CLI::Option* opt_dt =
        simulate->add_option("--dt", dt_override, "Override sim dt");
    CLI::Option* opt_seed =
        simulate->add_option("--seed", seed_override, "Override sim seed");
    simulate->add_option("--trace", trace_path,
                         "Write the first path as CSV to this file");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Re-solve along a parameter grid and tabulate the results");
    add_common(sweep);
    std::string sweep_param;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_steps = 21;
    sweep->add_option("--param", sweep_param, "Scenario field to sweep")
        ->required();
    sweep->add_option("--from", sweep_from, "First grid value")->required();
    sweep->add_option("--to", sweep_to, "Last grid value")->required();
    sweep->add_option("--steps", sweep_steps, "Grid size")
        ->check(CLI::Range(1, 1000000));

    std::vector<std::string> argv_store;
    argv_store.push_back("rstop");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return EXIT_OK;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return EXIT_OK;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_SCENARIO;
    }

    try {
        Scenario sc = load_scenario(scenario_path);
        if (solve->parsed()) return cmd_solve(sc, out_path, format, out);
        if (value->parsed()) return cmd_value(sc, out_path, format, out);
        if (simulate->parsed()) {
            if (opt_paths->count() > 0) sc.sim.n_paths = paths_override;
            if (opt_dt->count() > 0) sc.sim.dt = dt_override;
            if (opt_seed->count() > 0) sc.sim.seed = seed_override;
            if (sc.sim.n_paths == 0)
                throw scenario_error("simulate: n_paths must be at least 1");
            if (!(sc.sim.dt > 0.0))
                throw scenario_error("simulate: dt must be positive");
            return cmd_simulate(sc, out_path, format, trace_path, out, err);
        }
        if (sweep->parsed())
            return cmd_sweep(sc, sweep_param, sweep_from, sweep_to, sweep_steps,
                             out_path, format, out);
        err << "error: no subcommand\n";
        return EXIT_SCENARIO;
    } catch (const scenario_error& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_SCENARIO;
    } catch (const solver_error& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_SOLVER;
    } catch (const region_error& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_SOLVER;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_SOLVER;
    }
}

} // namespace rstop
