#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "spinrestore/control.hpp"
#include "spinrestore/diagnostics.hpp"
#include "spinrestore/entanglement.hpp"
#include "spinrestore/io.hpp"
#include "spinrestore/protocols.hpp"

namespace spinrestore::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* default_out_dir = "out";

class IoFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoSolution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::pair<Command, std::string>>& command_table() {
    static const std::vector<std::pair<Command, std::string>> table{
        {Command::scan_lambda, "scan-lambda"},
        {Command::solve, "solve"},
        {Command::restore_demo, "restore-demo"},
        {Command::ratio_table, "ratio-table"},
        {Command::negativity_profile, "negativity-profile"},
    };
    return table;
}

// Raw flag values; unset options stay empty so config-file values can fill them.
struct FlagValues {
    std::string n;
    int n_s = 0, n_r = 0, n_er = 0;
    double tau = 0, tau_max = 0, tau_step = 0;
    int starts = 0, n_states = 0, threads = 0;
    std::uint64_t seed = 0;
    std::string out, config;
    std::map<std::string, CLI::Option*> opts;

    bool given(const std::string& key) const { return opts.at(key)->count() > 0; }
};

void add_flags(CLI::App& sub, FlagValues& v) {
    v.opts["N"] = sub.add_option("--N", v.n, "Chain length: 10, or a range 5..12 for scan-lambda");
    v.opts["N_S"] = sub.add_option("--NS", v.n_s, "Sender size");
    v.opts["N_R"] = sub.add_option("--NR", v.n_r, "Receiver size (default: NS)");
    v.opts["N_ER"] = sub.add_option("--NER", v.n_er, "Extended receiver size");
    v.opts["tau"] = sub.add_option("--tau", v.tau, "Time instant");
    v.opts["tau_max"] = sub.add_option("--tau-max", v.tau_max, "Upper end of the time grid");
    v.opts["tau_step"] = sub.add_option("--tau-step", v.tau_step, "Time grid step (default 0.25)");
    v.opts["starts"] = sub.add_option("--starts", v.starts, "Solver starts per time instant (default 50)");
    v.opts["n_states"] = sub.add_option("--n-states", v.n_states, "Random sender states (default 50)");
    v.opts["seed"] = sub.add_option("--seed", v.seed, "RNG seed (required)");
    v.opts["threads"] = sub.add_option("--threads", v.threads, "Worker threads (default: hardware concurrency)");
    v.opts["out"] = sub.add_option("--out", v.out, "Output directory (default: $SPINRESTORE_OUT or ./out)");
    v.opts["config"] = sub.add_option("--config", v.config, "JSON config file or a previous manifest.json");
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("config: cannot open '{}'", path));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(fmt::format("config: malformed JSON in '{}': {}", path, e.what()));
    }
    if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
    if (!doc.is_object()) throw UsageError(fmt::format("config: '{}' must hold a JSON object", path));
    return doc;
}

template <class T>
T file_value(const json& doc, const std::string& key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError(fmt::format("config: field '{}' has the wrong type", key));
    }
}

std::string n_field_text(const json& value) {
    if (value.is_number_integer()) return std::to_string(value.get<int>());
    if (value.is_string()) return value.get<std::string>();
    if (value.is_array()) {
        std::string out;
        for (const auto& v : value) {
            if (!v.is_number_integer()) throw UsageError("config: field 'N' must hold integers");
            if (!out.empty()) out += ',';
            out += std::to_string(v.get<int>());
        }
        return out;
    }
    throw UsageError("config: field 'N' must be an integer, a range string or an array");
}

RunConfig resolve(Command command, const FlagValues& v, const EnvLookup& env) {
    json file = json::object();
    if (v.given("config")) {
        file = load_config_file(v.config);
        static const std::set<std::string> known{"command", "N", "N_S", "N_R", "N_ER", "tau", "tau_max", "tau_step",
                                                 "starts", "n_states", "seed", "threads", "out"};
        for (const auto& [key, _] : file.items())
            if (!known.contains(key)) throw UsageError(fmt::format("config: unknown field '{}'", key));
        if (file.contains("command") && file["command"] != command_name(command))
            throw UsageError(fmt::format("config: field 'command' is '{}' but '{}' was requested",
                                         file["command"].dump(), command_name(command)));
    }

    auto pick = [&]<class T>(const std::string& key, T flag_value) -> std::optional<T> {
        if (v.given(key)) return flag_value;
        if (file.contains(key) && !file[key].is_null()) return file_value<T>(file, key);
        return std::nullopt;
    };

    RunConfig cfg;
    cfg.command = command;

    std::optional<std::string> n_text;
    if (v.given("N")) n_text = v.n;
    else if (file.contains("N")) n_text = n_field_text(file["N"]);
    if (!n_text) throw UsageError("missing --N (chain length)");
    cfg.n_values = parse_n_values(*n_text);
    if (command != Command::scan_lambda && cfg.n_values.size() != 1)
        throw UsageError(fmt::format("--N: {} takes a single chain length", command_name(command)));

    const auto n_s = pick("N_S", v.n_s);
    if (!n_s) throw UsageError("missing --NS (sender size)");
    cfg.n_s = *n_s;
    cfg.n_r = pick("N_R", v.n_r).value_or(cfg.n_s);
    const auto n_er = pick("N_ER", v.n_er);
    if (!n_er) throw UsageError("missing --NER (extended receiver size)");
    cfg.n_er = *n_er;

    cfg.tau = pick("tau", v.tau);
    cfg.tau_max = pick("tau_max", v.tau_max);
    cfg.tau_step = pick("tau_step", v.tau_step).value_or(0.25);
    cfg.starts = pick("starts", v.starts).value_or(50);
    cfg.n_states = pick("n_states", v.n_states).value_or(50);
    const unsigned hw = std::thread::hardware_concurrency();
    cfg.threads = pick("threads", v.threads).value_or(hw == 0 ? 1 : static_cast<int>(hw));

    const auto seed = pick("seed", v.seed);
    if (!seed) throw UsageError(fmt::format("missing --seed: {} draws random starts and needs an explicit seed", command_name(command)));
    cfg.seed = *seed;

    if (auto out = pick("out", v.out)) cfg.out_dir = *out;
    else if (auto from_env = env("SPINRESTORE_OUT")) cfg.out_dir = *from_env;
    else cfg.out_dir = default_out_dir;

    if (cfg.tau && !std::isfinite(*cfg.tau)) throw UsageError("--tau must be finite");
    if (cfg.tau_max && !(*cfg.tau_max >= 0)) throw UsageError("--tau-max must be non-negative");
    if (!(cfg.tau_step > 0)) throw UsageError("--tau-step must be positive");
    if (cfg.starts < 1) throw UsageError("--starts must be at least 1");
    if (cfg.n_states < 1) throw UsageError("--n-states must be at least 1");
    if (cfg.threads < 1) throw UsageError("--threads must be at least 1");
    if ((command == Command::solve || command == Command::restore_demo) && !cfg.tau)
        throw UsageError(fmt::format("missing --tau: {} works at a single time instant", command_name(command)));
    if (command == Command::ratio_table && cfg.n_s < 2) throw UsageError("--NS: ratio-table needs at least two sender spins");

    for (int n : cfg.n_values) {
        try {
            Layout{n, cfg.n_s, cfg.n_r, cfg.n_er}.validate();
        } catch (const ConfigError& e) {
            throw UsageError(fmt::format("layout: {}", e.what()));
        }
    }
    return cfg;
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = command_name(c.command);
    if (c.n_values.size() == 1) j["N"] = c.n_values.front();
    else j["N"] = c.n_values;
    j["N_S"] = c.n_s;
    j["N_R"] = c.n_r;
    j["N_ER"] = c.n_er;
    if (c.tau) j["tau"] = *c.tau;
    if (c.tau_max) j["tau_max"] = *c.tau_max;
    j["tau_step"] = c.tau_step;
    j["starts"] = c.starts;
    j["n_states"] = c.n_states;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out"] = c.out_dir;
    return j;
}

// Writes files into the output directory and deletes them again unless the run commits.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoFailure(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
    }
    ~OutputSet() {
        if (committed_) return;
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) throw IoFailure(fmt::format("cannot write '{}'", path.string()));
        names_.push_back(name);
    }
    const std::vector<std::string>& names() const { return names_; }
    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    std::vector<std::string> names_;
    bool committed_ = false;
};

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

std::string polar_text(cplx z) {
    const double arg = std::abs(z) == 0.0 ? 0.0 : std::arg(z);
    return fmt::format("{:.3f} e^{{{}i{:.3f}}}", std::abs(z), arg < 0 ? "-" : "", std::abs(arg));
}

std::string plot_script(const std::string& csv, const std::string& body) {
    return fmt::format(R"PY(# Generated by spinrestore; run with: python3 plot_{0}.py
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

with open("{1}") as fh:
    rows = list(csv.DictReader(fh))

{2}
)PY", csv.substr(0, csv.find('.')), csv, body);
}

void run_scan_lambda(const RunConfig& c, OutputSet& out, std::ostream& console) {
    ScanConfig scan{c.n_values, 1.5, c.tau_step, c.starts, c.seed};
    std::vector<LambdaCurvePoint> curve;
    if (c.tau_max) {
        // Fixed absolute window: scan each N separately with its own factor.
        for (int n : c.n_values) {
            ScanConfig one = scan;
            one.n_range = {n};
            one.tau_max_factor = *c.tau_max / n;
            auto part = lambda_scan(one, {c.n_s, c.n_r, c.n_er}, c.threads);
            curve.insert(curve.end(), part.begin(), part.end());
        }
    } else {
        curve = lambda_scan(scan, {c.n_s, c.n_r, c.n_er}, c.threads);
    }
    out.write("lambda_curve.csv", render([&](std::ostream& os) { io::write_lambda_curve(os, curve); }));
    out.write("plot_lambda_curve.py", plot_script("lambda_curve.csv", R"PY(rows = [r for r in rows if r["lambda_N"] != "nan"]
n = [int(r["N"]) for r in rows]
fig, (a, b) = plt.subplots(1, 2, figsize=(9, 3.5))
a.plot(n, [float(r["lambda_N"]) for r in rows], "o-")
a.set_xlabel("N"); a.set_ylabel("lambda(N)")
b.plot(n, [float(r["tau_N"]) for r in rows], "o-")
b.set_xlabel("N"); b.set_ylabel("tau(N)")
fig.tight_layout()
fig.savefig("lambda_curve.png", dpi=150))PY"));
    for (const auto& p : curve)
        console << fmt::format("N={:<3} lambda={}  tau={}  start={}\n", p.n, io::csv_number(p.lambda_n), io::csv_number(p.tau_n),
                               p.best_start);
    if (std::none_of(curve.begin(), curve.end(), [](const auto& p) { return p.found; }))
        throw NoSolution("no converged restoring solution for any chain length");
}

void run_solve(const RunConfig& c, OutputSet& out, std::ostream& console) {
    const auto results = solve_restoring(*c.tau, c.layout(), c.starts, c.seed, {}, c.threads);
    out.write("solutions.jsonl", render([&](std::ostream& os) { io::write_solutions(os, results); }));
    const auto converged = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.converged; });
    console << fmt::format("tau={}  converged {}/{}  best residual {:.3e}\n", *c.tau, converged, results.size(),
                           results.front().residual_norm);
    if (converged == 0) throw NoSolution(fmt::format("no start converged at tau={}", *c.tau));
}

std::string restore_report(const RunConfig& c, const SolveResult& best) {
    const Layout layout = c.layout();
    const auto u1 = control_unitary(best.phi, layout.n_er);
    const auto& lam = best.scale.lambda1;
    std::ostringstream os;
    os << fmt::format("Restoring solution: N={} N_S={} N_R={} N_ER={} tau={} seed={} start={}\n", layout.n, layout.n_s,
                      layout.n_r, layout.n_er, io::csv_number(best.tau), best.seed, best.start_index);
    os << fmt::format("residual norm: {:.3e}\n\n", best.residual_norm);
    os << "U1 (entries |u| e^{i arg u}):\n";
    for (Eigen::Index r = 0; r < u1.rows(); ++r) {
        os << "  ";
        for (Eigen::Index k = 0; k < u1.cols(); ++k) os << fmt::format("{:<20}", polar_text(u1(r, k)));
        os << '\n';
    }
    os << "\nScale factors:\n";
    for (Eigen::Index n = 0; n < lam.size(); ++n) os << fmt::format("  lambda1_{} = {}\n", n + 1, polar_text(lam(n)));
    os << fmt::format("  lambda_min = {:.3f}\n", best.scale.min_abs());

    // r_0n = conj(lambda_n) s_0n, r_nm = lambda_n conj(lambda_m) s_nm.
    const auto size = lam.size() + 1;
    std::vector<std::vector<std::string>> cells(size, std::vector<std::string>(size));
    cells[0][0] = "r00";
    for (Eigen::Index n = 1; n < size; ++n) {
        cells[0][n] = fmt::format("{} s0{}", polar_text(std::conj(lam(n - 1))), n);
        cells[n][0] = fmt::format("{} s0{}*", polar_text(lam(n - 1)), n);
        for (Eigen::Index m = 1; m < size; ++m) {
            const cplx f = lam(n - 1) * std::conj(lam(m - 1));
            cells[n][m] = n == m ? fmt::format("{:.3f} s{}{}", f.real(), n, n)
                                 : fmt::format("{} s{}{}{}", polar_text(f), std::min(n, m),
                                               std::max(n, m), n < m ? "" : "*");
        }
    }
    os << "\nReceiver state in terms of the sender state:\nr =\n";
    for (const auto& row : cells) {
        os << "  ";
        for (const auto& cell : row) os << fmt::format("{:<28}", cell);
        os << '\n';
    }
    os << "r00 = s00";
    for (Eigen::Index n = 0; n < lam.size(); ++n) os << fmt::format(" + {:.3f} s{}{}", 1.0 - std::norm(lam(n)), n + 1, n + 1);
    os << '\n';
    if (layout.n_s >= 2) {
        os << "\nConcurrence ratios C(r)_ij / C(s)_ij = |lambda0_ij| (2|lambda0_ij| in brackets):\n";
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            for (Eigen::Index j = i + 1; j < lam.size(); ++j) {
                const double ratio = std::abs(best.scale.lambda0(i, j));
                os << fmt::format("  {{{},{}}}: {:.3f} [{:.3f}]\n", i + 1, j + 1, ratio, 2.0 * ratio);
            }
    }
    return os.str();
}

void run_restore_demo(const RunConfig& c, OutputSet& out, std::ostream& console) {
    const auto results = solve_restoring(*c.tau, c.layout(), c.starts, c.seed, {}, c.threads);
    const auto best = best_by_min_lambda(results);
    if (!best) throw NoSolution(fmt::format("no start converged at tau={}", *c.tau));
    const auto report = restore_report(c, *best);
    out.write("restore_demo.txt", report);
    out.write("solution.jsonl", io::solve_result_json(*best) + "\n");
    console << report;
}

void run_ratio_table(const RunConfig& c, OutputSet& out, std::ostream& console) {
    const Layout layout = c.layout();
    const auto taus = tau_grid(c.tau_limit(layout.n), c.tau_step);
    const auto rows = ratio_optimize(layout, taus, c.starts, c.seed, c.threads);
    out.write("ratio_table.csv", render([&](std::ostream& os) { io::write_ratio_table(os, rows); }));
    if (!rows.front().found) throw NoSolution("no converged restoring solution on the tau grid");
    // Spread of the {1,2} ratio over all starts at its optimal time.
    const auto dist = ratio_distribution(layout, rows.front().tau, 1, 2, c.starts, c.seed, c.threads);
    out.write("ratio_distribution.csv", render([&](std::ostream& os) { io::write_ratio_distribution(os, dist); }));
    out.write("plot_ratio_distribution.py", plot_script("ratio_distribution.csv", R"PY(fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot([int(r["start_index"]) for r in rows], [float(r["ratio"]) for r in rows], ".")
ax.set_xlabel("solution"); ax.set_ylabel("C(r)_12 / C(s)_12")
fig.tight_layout()
fig.savefig("ratio_distribution.png", dpi=150))PY"));
    for (const auto& r : rows)
        console << fmt::format("{{{},{}}}  tau={}  ratio={}  2x={}\n", r.i, r.j, io::csv_number(r.tau), io::csv_number(r.ratio),
                               io::csv_number(r.ratio_x2));
}

void run_negativity_profile(const RunConfig& c, OutputSet& out, std::ostream& console) {
    const Layout layout = c.layout();
    const auto taus = tau_grid(c.tau_limit(layout.n), c.tau_step);
    const auto profile = negativity_profile(layout, taus, c.starts, c.n_states, c.seed, c.threads);
    out.write("negativity_profile.csv", render([&](std::ostream& os) { io::write_negativity_profile(os, profile); }));
    const NegativityPoint* peak = nullptr;
    for (const auto& p : profile)
        if (p.found && (!peak || p.mean_nsr > peak->mean_nsr)) peak = &p;
    if (!peak) throw NoSolution("no converged restoring solution on the tau grid");
    const auto samples = negativity_samples(layout, peak->tau, c.starts, c.n_states, c.seed);
    out.write("negativity_samples.csv", render([&](std::ostream& os) { io::write_negativity_samples(os, peak->tau, samples); }));
    out.write("plot_negativity_profile.py", plot_script("negativity_profile.csv", R"PY(rows = [r for r in rows if r["mean_nsr"] != "nan"]
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot([float(r["tau"]) for r in rows], [float(r["mean_nsr"]) for r in rows], "-")
ax.set_xlabel("tau"); ax.set_ylabel("mean N_SR")
fig.tight_layout()
fig.savefig("negativity_profile.png", dpi=150)

with open("negativity_samples.csv") as fh:
    samples = list(csv.DictReader(fh))
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot([int(r["state"]) for r in samples], [float(r["nsr"]) for r in samples], "o")
ax.set_xlabel("sender state"); ax.set_ylabel("N_SR")
fig.tight_layout()
fig.savefig("negativity_samples.png", dpi=150))PY"));
    console << fmt::format("{} time points, peak mean N_SR {} at tau={}\n", profile.size(), io::csv_number(peak->mean_nsr),
                           io::csv_number(peak->tau));
}

} // namespace

std::string command_name(Command c) {
    for (const auto& [cmd, name] : command_table())
        if (cmd == c) return name;
    return "?";
}

double RunConfig::tau_limit(int n) const {
    if (tau_max) return *tau_max;
    return command == Command::scan_lambda ? 1.5 * n : 2.0 * n;
}

std::vector<int> parse_n_values(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw UsageError(fmt::format("--N: cannot read '{}' as a chain length", text));
        return v;
    };
    std::vector<int> out;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const int lo = to_int(text.substr(0, dots)), hi = to_int(text.substr(dots + 2));
        if (hi < lo) throw UsageError(fmt::format("--N: empty range '{}'", text));
        for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
        std::size_t from = 0;
        for (auto comma = text.find(','); ; comma = text.find(',', from)) {
            out.push_back(to_int(text.substr(from, comma - from)));
            if (comma == std::string::npos) break;
            from = comma + 1;
        }
    }
    if (out.empty()) throw UsageError("--N: no chain length given");
    return out;
}

RunConfig parse_config(const std::vector<std::string>& args, const EnvLookup& env) {
    CLI::App app{"Remote restoring of (0,1)-excitation states on dipolar XX spin chains", "spinrestore"};
    app.require_subcommand(1);
    std::vector<std::unique_ptr<FlagValues>> values;
    std::vector<std::pair<Command, CLI::App*>> subs;
    const std::map<Command, std::string> help{
        {Command::scan_lambda, "lambda(N) and tau(N) over a range of chain lengths"},
        {Command::solve, "multi-start restoring solve at one time instant (JSON lines)"},
        {Command::restore_demo, "best restoring solution at one time with the symbolic receiver state"},
        {Command::ratio_table, "maximized concurrence ratios for every sender pair"},
        {Command::negativity_profile, "sender-receiver double negativity versus time"},
    };
    for (const auto& [cmd, name] : command_table()) {
        auto* sub = app.add_subcommand(name, help.at(cmd));
        values.push_back(std::make_unique<FlagValues>());
        add_flags(*sub, *values.back());
        subs.emplace_back(cmd, sub);
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back(); // program name
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    for (std::size_t k = 0; k < subs.size(); ++k)
        if (subs[k].second->parsed()) return resolve(subs[k].first, *values[k], env);
    throw UsageError("a subcommand is required");
}

RunConfig parse_config(const std::vector<std::string>& args) {
    return parse_config(args, [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    });
}

int run(const RunConfig& config, std::ostream& console) {
    const auto started = std::chrono::steady_clock::now();
    try {
        OutputSet out(config.out_dir);
        switch (config.command) {
        case Command::scan_lambda: run_scan_lambda(config, out, console); break;
        case Command::solve: run_solve(config, out, console); break;
        case Command::restore_demo: run_restore_demo(config, out, console); break;
        case Command::ratio_table: run_ratio_table(config, out, console); break;
        case Command::negativity_profile: run_negativity_profile(config, out, console); break;
        }
        json manifest;
        manifest["tool"] = "spinrestore";
        manifest["version"] = SPINRESTORE_VERSION;
        manifest["command"] = command_name(config.command);
        manifest["config"] = config_json(config);
        manifest["outputs"] = out.names();
        manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        out.write("manifest.json", manifest.dump(2) + "\n");
        out.commit();
        return 0;
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NoSolution& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& h) {
        std::cout << h.what();
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 1;
    }
    try {
        return run(config, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace spinrestore::cli
