#include "lqgwalk/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "lqgwalk/config.hpp"
#include "lqgwalk/csv.hpp"
#include "lqgwalk/numfmt.hpp"
#include "lqgwalk/svg.hpp"

namespace lqgwalk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(quantize(v)) : json(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_table(const fs::path& path, const CsvTable& table) {
    std::ostringstream o;
    write_csv(o, table);
    write_text(path, o.str());
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
}

RunManifest manifest_for(const ScenarioConfig& cfg) {
    RunManifest m;
    m.scenario_id = cfg.id;
    m.config_hash = config_hash(cfg);
    m.seed = cfg.noise.seed;
    return m;
}

} // namespace

json RunManifest::to_json() const {
    return {{"scenario_id", scenario_id},
            {"config_hash", config_hash},
            {"seed", seed},
            {"outputs", outputs},
            {"tool_version", tool_version}};
}

json metrics_json(const SimulationResult& result) {
    const Metrics& m = result.metrics;
    return {{"id", result.id},
            {"fell", result.fell},
            {"fall_time", number(result.fall_time)},
            {"rms_error", {{"x", number(m.rms_dcm_error.x())}, {"y", number(m.rms_dcm_error.y())}}},
            {"max_dcm_error", number(m.max_dcm_error)},
            {"zmp_in_polygon_fraction", number(m.zmp_in_polygon_fraction)},
            {"steps_completed", m.steps_completed},
            {"adjustments", result.adjustments.size()}};
}

json push_limit_json(const PushLimitReport& report) {
    json trace = json::array();
    for (const auto& t : report.trace) trace.push_back({{"force", number(t.force)}, {"survived", t.survived}});
    return {{"direction", to_string(report.direction)},
            {"limit", number(report.limit)},
            {"tolerance", number(report.tolerance)},
            {"trace", trace}};
}

RunManifest cmd_plan(const ScenarioConfig& cfg, const fs::path& out_dir, bool plots) {
    cfg.validate();
    prepare_dir(out_dir);
    const FootstepPlan plan = scenario_footsteps(cfg);
    ReferenceOptions opts;
    opts.dt = cfg.dt_ctrl;
    opts.swing_apex = cfg.swing_apex;
    opts.boundary = cfg.com_boundary;
    const ReferenceTrajectory ref = build_reference(plan, cfg.steps, cfg.robot, opts);

    RunManifest m = manifest_for(cfg);
    write_table(out_dir / "reference.csv", reference_table(ref));
    write_table(out_dir / "footsteps.csv", footstep_table(plan));
    m.outputs = {"reference.csv", "footsteps.csv"};
    if (plots) {
        write_text(out_dir / "reference_x.svg", reference_svg(ref, 0));
        write_text(out_dir / "reference_y.svg", reference_svg(ref, 1));
        m.outputs.insert(m.outputs.end(), {"reference_x.svg", "reference_y.svg"});
    }
    m.outputs.push_back("manifest.json");
    write_text(out_dir / "manifest.json", m.to_json().dump(2) + "\n");
    return m;
}

SimulationResult cmd_simulate(const ScenarioConfig& cfg, const fs::path& out_dir, bool plots, RunManifest* manifest) {
    prepare_dir(out_dir);
    SimulationResult result = run_scenario(cfg);

    RunManifest m = manifest_for(cfg);
    write_table(out_dir / "log.csv", log_table(result.log));
    write_text(out_dir / "metrics.json", metrics_json(result).dump(2) + "\n");
    write_table(out_dir / "footsteps_planned.csv", footstep_table(result.planned));
    write_table(out_dir / "footsteps_executed.csv", footstep_table(result.executed));
    m.outputs = {"log.csv", "metrics.json", "footsteps_planned.csv", "footsteps_executed.csv"};
    if (plots) {
        write_text(out_dir / "tracking_x.svg", tracking_svg(result, 0));
        write_text(out_dir / "tracking_y.svg", tracking_svg(result, 1));
        write_text(out_dir / "top_view.svg", footsteps_svg(result, cfg.robot));
        m.outputs.insert(m.outputs.end(), {"tracking_x.svg", "tracking_y.svg", "top_view.svg"});
    }
    m.outputs.push_back("manifest.json");
    write_text(out_dir / "manifest.json", m.to_json().dump(2) + "\n");
    if (manifest) *manifest = m;
    return result;
}

namespace {

struct CommonOptions {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    bool allow_fall = false;
    bool no_plots = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config, "Scenario config (YAML or .json)")->required();
    cmd->add_option("-o,--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Noise seed (overrides the config)");
    cmd->add_flag("--allow-fall", o.allow_fall, "Exit 0 even if the robot falls");
    cmd->add_flag("--no-plots", o.no_plots, "Skip SVG output");
}

ScenarioConfig load(const CommonOptions& o) {
    ScenarioConfig cfg = load_scenario_config(o.config);
    if (o.seed) cfg.noise.seed = *o.seed;
    return cfg;
}

std::string fmt_force(double f) { return format_number(f); }

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"LIPM/DCM walking simulator with LQG tracking and footstep adjustment", "lqgwalk"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CommonOptions plan_o, sim_o, push_o, sweep_o;
    auto* plan_cmd = app.add_subcommand("plan", "Write the reference trajectory and footsteps");
    add_common(plan_cmd, plan_o);

    auto* sim_cmd = app.add_subcommand("simulate", "Run one closed-loop scenario");
    add_common(sim_cmd, sim_o);

    auto* push_cmd = app.add_subcommand("push-limit", "Bisect the largest survivable push");
    add_common(push_cmd, push_o);
    std::string direction = "forward";
    double low = 10.0, tol = 0.5, cap = 5000.0, t_push = 2.5, duration = 0.01;
    std::optional<double> high;
    push_cmd->add_option("--direction", direction, "forward|backward|left|right (or +x|-x|+y|-y)")
        ->capture_default_str();
    push_cmd->add_option("--low", low, "Surviving lower bracket [N]")->capture_default_str();
    push_cmd->add_option("--high", high, "Falling upper bracket [N]; searched by doubling when omitted");
    push_cmd->add_option("--cap", cap, "Largest force tried by the doubling search [N]")->capture_default_str();
    push_cmd->add_option("--tol", tol, "Bisection tolerance [N]")->capture_default_str();
    push_cmd->add_option("--t-start", t_push, "Push onset [s]")->capture_default_str();
    push_cmd->add_option("--duration", duration, "Push duration [s]")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a force x time x axis grid of pushes");
    add_common(sweep_cmd, sweep_o);
    SweepGrid grid;
    std::vector<std::string> axes{"x"};
    sweep_cmd->add_option("--forces", grid.forces, "Signed push forces [N]")->delimiter(',');
    sweep_cmd->add_option("--times", grid.times, "Push onsets [s]")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--axes", axes, "x and/or y")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--duration", grid.duration, "Push duration [s]")->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*plan_cmd) {
            const RunManifest m = cmd_plan(load(plan_o), plan_o.out, !plan_o.no_plots);
            std::cout << "plan " << m.scenario_id << " -> " << plan_o.out << '\n';
            return kExitOk;
        }
        if (*sim_cmd) {
            const ScenarioConfig cfg = load(sim_o);
            const SimulationResult r = cmd_simulate(cfg, sim_o.out, !sim_o.no_plots);
            std::cout << metrics_json(r).dump() << '\n';
            return r.fell && !sim_o.allow_fall ? kExitFell : kExitOk;
        }
        if (*push_cmd) {
            const ScenarioConfig cfg = load(push_o);
            const PushDirection dir = parse_direction(direction);
            const PushLimitReport report = high ? find_push_limit(cfg, dir, low, *high, tol, t_push, duration)
                                                : find_push_limit_auto(cfg, dir, low, cap, tol, t_push, duration);
            prepare_dir(push_o.out);
            RunManifest m = manifest_for(cfg);
            m.outputs = {"push_limit.json", "manifest.json"};
            write_text(fs::path(push_o.out) / "push_limit.json", push_limit_json(report).dump(2) + "\n");
            write_text(fs::path(push_o.out) / "manifest.json", m.to_json().dump(2) + "\n");
            std::cout << to_string(dir) << " push limit: " << fmt_force(report.limit) << " N (tol "
                      << fmt_force(tol) << " N, " << report.trace.size() << " trials)\n";
            return kExitOk;
        }
        if (*sweep_cmd) {
            const ScenarioConfig cfg = load(sweep_o);
            grid.axes.clear();
            for (const auto& a : axes) {
                if (a.size() != 1) throw std::invalid_argument("axis must be 'x' or 'y', got '" + a + "'");
                grid.axes.push_back(a[0]);
            }
            const auto points = sweep_points(grid);
            const auto configs = sweep_scenarios(cfg, grid);
            const auto results = run_batch(configs);
            const fs::path out(sweep_o.out);
            prepare_dir(out);
            RunManifest m = manifest_for(cfg);
            for (std::size_t i = 0; i < results.size(); ++i) {
                const fs::path dir = out / configs[i].id;
                prepare_dir(dir);
                write_table(dir / "log.csv", log_table(results[i].log));
                write_text(dir / "metrics.json", metrics_json(results[i]).dump(2) + "\n");
                m.outputs.push_back(configs[i].id + "/log.csv");
                m.outputs.push_back(configs[i].id + "/metrics.json");
                if (!sweep_o.no_plots) {
                    write_text(dir / "tracking_x.svg", tracking_svg(results[i], 0));
                    m.outputs.push_back(configs[i].id + "/tracking_x.svg");
                }
            }
            write_table(out / "survival.csv", survival_table(points, results));
            m.outputs.push_back("survival.csv");
            m.outputs.push_back("manifest.json");
            write_text(out / "manifest.json", m.to_json().dump(2) + "\n");
            int survived = 0;
            for (const auto& r : results) survived += r.fell ? 0 : 1;
            std::cout << "sweep: " << survived << "/" << results.size() << " survived\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace lqgwalk
