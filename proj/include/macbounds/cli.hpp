#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macbounds/gauss_region.hpp"
#include "macbounds/region_geom.hpp"

namespace macbounds {

struct FigurePreset {
    std::string name;
    ChannelParams ch;
};

const std::vector<FigurePreset>& figure_presets();

/// Writes header "rc,r1" and one 6-decimal row per non-empty cell.
/// Locale-independent; the file is replaced atomically (temp then rename).
void write_boundary_csv(const RegionBoundary& b, const std::string& path);

/// Computes both boundaries on one shared default grid and writes
/// inner.csv, outer.csv and plot.py under out_dir.
void write_region_files(const ChannelParams& ch, const GridSpec& g, bool envelope,
                        const std::string& out_dir, const std::string& title);

int run_figure(const std::string& preset, const std::string& out_dir, bool envelope,
               const GridSpec& g);
int run_sweep(const ChannelParams& ch, const GridSpec& g, bool envelope,
              const std::string& out_dir);
int run_dm_sweep(const std::string& channel_path, std::size_t u1_size, std::size_t u2_size,
                 int budget, std::uint64_t seed, bool envelope, const std::string& out_dir);
int run_verify(const std::string& suite, int trials, std::uint64_t seed, double tol);

/// argv-level entry point. Exit codes: 0 success, 1 verification or
/// runtime failure, 2 usage/parse errors.
int cli_main(const std::vector<std::string>& args);

}  // namespace macbounds
