#include "macbounds/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <system_error>

#include <CLI11.hpp>

#include "macbounds/dm_region.hpp"
#include "macbounds/verify.hpp"

namespace fs = std::filesystem;

namespace macbounds {

namespace {

std::string fixed6(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    return std::string(buf, res.ptr);
}

void atomic_write(const std::string& path, const std::string& contents) {
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << contents;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string plot_script(const std::string& title) {
    std::string s;
    s += "#!/usr/bin/env python3\n";
    s += "\"\"\"Plots the exported region boundaries: dashed inner, solid outer.\"\"\"\n";
    s += "import csv\nimport os\n\nimport matplotlib\nmatplotlib.use(\"Agg\")\n";
    s += "import matplotlib.pyplot as plt\n\n";
    s += "HERE = os.path.dirname(os.path.abspath(__file__))\n\n\n";
    s += "def read(name):\n";
    s += "    with open(os.path.join(HERE, name), newline=\"\") as f:\n";
    s += "        rows = list(csv.DictReader(f))\n";
    s += "    return [float(r[\"rc\"]) for r in rows], [float(r[\"r1\"]) for r in rows]\n\n\n";
    s += "inner_rc, inner_r1 = read(\"inner.csv\")\n";
    s += "outer_rc, outer_r1 = read(\"outer.csv\")\n";
    s += "plt.figure(figsize=(6, 4.2))\n";
    s += "plt.plot(inner_rc, inner_r1, \"--\", label=\"inner bound\")\n";
    s += "plt.plot(outer_rc, outer_r1, \"-\", label=\"outer bound\")\n";
    s += "plt.xlabel(\"$R_c$ [bits/channel use]\")\n";
    s += "plt.ylabel(\"$R_1$ [bits/channel use]\")\n";
    s += "plt.title(\"" + title + "\")\n";
    s += "plt.legend()\nplt.grid(True, alpha=0.3)\nplt.tight_layout()\n";
    s += "plt.savefig(os.path.join(HERE, \"region.png\"), dpi=160)\n";
    s += "print(\"wrote\", os.path.join(HERE, \"region.png\"))\n";
    return s;
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = {
        {"fig2", ChannelParams{2.5, 2.0, 1.5, 2.0}},
        {"fig3", ChannelParams{1.0, 2.0, 1.5, 2.0}},
        {"fig4", ChannelParams{1.5, 1.0, 2.5, 1.0}},
    };
    return presets;
}

void write_boundary_csv(const RegionBoundary& b, const std::string& path) {
    std::string out = "rc,r1\n";
    for (std::size_t i = 0; i < b.rc_grid.size(); ++i) {
        if (!b.r1_max[i]) continue;
        out += fixed6(b.rc_grid[i]);
        out += ',';
        out += fixed6(*b.r1_max[i]);
        out += '\n';
    }
    atomic_write(path, out);
}

void write_region_files(const ChannelParams& ch, const GridSpec& g, bool envelope,
                        const std::string& out_dir, const std::string& title) {
    const auto inner_cs = inner_region_constraints(ch, g);
    const auto outer_cs = outer_region_constraints(ch, g);
    auto merged = inner_cs;
    merged.insert(merged.end(), outer_cs.begin(), outer_cs.end());
    const std::vector<double> grid = default_rc_grid(merged);

    RegionBoundary inner = boundary_of_constraints(inner_cs, grid);
    RegionBoundary outer = boundary_of_constraints(outer_cs, grid);
    if (envelope) {
        inner = upper_concave_envelope(inner);
        outer = upper_concave_envelope(outer);
    }

    fs::create_directories(out_dir);
    write_boundary_csv(inner, (fs::path(out_dir) / "inner.csv").string());
    write_boundary_csv(outer, (fs::path(out_dir) / "outer.csv").string());
    atomic_write((fs::path(out_dir) / "plot.py").string(), plot_script(title));
}

int run_figure(const std::string& preset, const std::string& out_dir, bool envelope,
               const GridSpec& g) {
    const auto& presets = figure_presets();
    const auto it = std::find_if(presets.begin(), presets.end(),
                                 [&](const FigurePreset& p) { return p.name == preset; });
    if (it == presets.end()) {
        std::cerr << "unknown preset '" << preset << "'; expected one of:";
        for (const auto& p : presets) std::cerr << ' ' << p.name;
        std::cerr << "\nusage: macbounds figure {fig2|fig3|fig4} [--out DIR] [--envelope]\n";
        return 2;
    }
    try {
        char title[128];
        std::snprintf(title, sizeof(title), "%s: P1=%g, P2=%g, Q=%g, N=%g", it->name.c_str(),
                      it->ch.p1, it->ch.p2, it->ch.q, it->ch.n0);
        write_region_files(it->ch, g, envelope, out_dir, title);
    } catch (const std::exception& e) {
        std::cerr << "figure failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run_sweep(const ChannelParams& ch, const GridSpec& g, bool envelope,
              const std::string& out_dir) {
    try {
        validate(ch);
        validate(g);
    } catch (const std::exception& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return 2;
    }
    try {
        char title[128];
        std::snprintf(title, sizeof(title), "P1=%g, P2=%g, Q=%g, N=%g", ch.p1, ch.p2, ch.q, ch.n0);
        write_region_files(ch, g, envelope, out_dir, title);
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run_dm_sweep(const std::string& channel_path, std::size_t u1_size, std::size_t u2_size,
                 int budget, std::uint64_t seed, bool envelope, const std::string& out_dir) {
    DmChannel ch;
    try {
        ch = load_dm_channel(channel_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid channel file: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cannot load channel: " << e.what() << '\n';
        return 1;
    }
    try {
        const auto inner_cs = dm_inner_search_constraints(ch, u1_size, u2_size, budget, seed);
        const auto outer_cs = dm_outer_search_constraints(ch, budget, seed + 1);
        auto merged = inner_cs;
        merged.insert(merged.end(), outer_cs.begin(), outer_cs.end());
        const std::vector<double> grid = default_rc_grid(merged);
        RegionBoundary inner = boundary_of_constraints(inner_cs, grid);
        RegionBoundary outer = boundary_of_constraints(outer_cs, grid);
        if (envelope) {
            inner = upper_concave_envelope(inner);
            outer = upper_concave_envelope(outer);
        }
        fs::create_directories(out_dir);
        write_boundary_csv(inner, (fs::path(out_dir) / "inner.csv").string());
        write_boundary_csv(outer, (fs::path(out_dir) / "outer.csv").string());
        atomic_write((fs::path(out_dir) / "plot.py").string(),
                     plot_script("discrete channel " + fs::path(channel_path).filename().string()));
    } catch (const std::exception& e) {
        std::cerr << "dm sweep failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run_verify(const std::string& suite, int trials, std::uint64_t seed, double tol) {
    std::vector<CheckResult> results;
    try {
        if (suite == "oracle") {
            results.push_back(check_oracle_inner(trials, seed, tol));
            results.push_back(check_oracle_outer(trials, seed + 1, tol));
        } else if (suite == "special-cases") {
            for (auto& r : check_containment(1e-6)) results.push_back(std::move(r));
            for (auto& r : check_zero_state(0.02)) results.push_back(std::move(r));
            for (auto& r : check_common_message(0.02)) results.push_back(std::move(r));
            for (auto& r : check_helper(0.01)) results.push_back(std::move(r));
            results.push_back(check_strong_interference_trend());
        } else if (suite == "dm") {
            for (auto& r : check_dm_sanity()) results.push_back(std::move(r));
        } else if (suite == "fm") {
            results.push_back(check_fm_grid());
        } else {
            std::cerr << "unknown suite '" << suite
                      << "'; expected one of: oracle special-cases dm fm\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "verify failed to run: " << e.what() << '\n';
        return 1;
    }
    return report(results) ? 0 : 1;
}

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Inner and outer capacity-region bounds for the two-user state-dependent MAC "
                 "with one informed encoder and degraded message sets"};
    app.require_subcommand(1);

    GridSpec grid;
    int grid_n = 0;
    std::string alpha_range;
    std::string out_dir = ".";
    bool envelope = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--grid", grid_n, "points per sweep axis (theta/xi/rho; outer axes 2N-1)")
            ->check(CLI::Range(2, 2001));
        cmd->add_option("--alpha-range", alpha_range, "alpha sweep range as LO:HI (default -2:3)");
        cmd->add_option("--out", out_dir, "output directory (default .)");
        cmd->add_flag("--envelope", envelope, "write the concave (time-sharing) envelope");
    };

    std::string preset;
    CLI::App* figure = app.add_subcommand("figure", "reproduce a preset region figure");
    figure->add_option("preset", preset, "fig2, fig3 or fig4")->required();
    add_common(figure);

    ChannelParams ch{1.0, 1.0, 1.0, 1.0};
    std::string dm_path;
    std::uint64_t seed = 1;
    int budget = 2000;
    std::size_t u1_size = 2, u2_size = 2;
    CLI::App* sweep = app.add_subcommand("sweep", "compute boundaries for a channel");
    sweep->add_option("--p1", ch.p1, "uninformed encoder power");
    sweep->add_option("--p2", ch.p2, "informed encoder power");
    sweep->add_option("--q", ch.q, "state variance");
    sweep->add_option("--n0", ch.n0, "noise variance");
    sweep->add_option("--dm-channel", dm_path, "discrete channel file (overrides --p1/--p2/--q/--n0)");
    sweep->add_option("--u1", u1_size, "auxiliary alphabet size |U1| for --dm-channel");
    sweep->add_option("--u2", u2_size, "auxiliary alphabet size |U2| for --dm-channel");
    sweep->add_option("--budget", budget, "sampled factorizations for --dm-channel")
        ->check(CLI::NonNegativeNumber);
    sweep->add_option("--seed", seed, "search seed for --dm-channel");
    add_common(sweep);

    std::string suite;
    int trials = 1000;
    std::uint64_t vseed = 42;
    double tol = 1e-9;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "oracle, special-cases, dm or fm")->required();
    verify->add_option("--trials", trials, "random draws for the oracle suite")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", vseed, "draw seed");
    verify->add_option("--tol", tol, "agreement tolerance in bits")->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    argv.push_back("macbounds");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // 0 covers --help and --version
    }

    if (grid_n >= 2) {
        grid.theta_points = grid.xi_points = grid.rho_points = grid_n;
        grid.rho12_points = grid.rho2s_points = 2 * grid_n - 1;
    }
    if (!alpha_range.empty()) {
        const auto colon = alpha_range.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
            grid.alpha_lo = std::stod(alpha_range.substr(0, colon));
            grid.alpha_hi = std::stod(alpha_range.substr(colon + 1));
            if (!(grid.alpha_lo <= grid.alpha_hi)) throw std::invalid_argument("empty range");
        } catch (const std::exception&) {
            std::cerr << "bad --alpha-range '" << alpha_range << "'; expected LO:HI\n";
            return 2;
        }
    }

    if (figure->parsed()) return run_figure(preset, out_dir, envelope, grid);
    if (sweep->parsed()) {
        if (!dm_path.empty()) return run_dm_sweep(dm_path, u1_size, u2_size, budget, seed, envelope, out_dir);
        return run_sweep(ch, grid, envelope, out_dir);
    }
    return run_verify(suite, trials, vseed, tol);
}

}  // namespace macbounds
