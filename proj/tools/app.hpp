/**
 * @file app.hpp
 * @brief Run and study drivers behind the `mdgice` command-line tool.
 *
 * A run directory holds:
 *   config.txt         effective problem configuration
 *   mesh_initial.txt   slab mesh before the solve (first slab)
 *   mesh_final.txt     converged slab mesh (last slab)
 *   profiles.csv       top-edge samples, p+1 per element
 *   history.csv        per-iteration residual norms
 *   summary.json       iterations, residual split, errors, DOF count
 *   run.log            timestamped log with removal events and sign flags
 */
#pragma once

#include "mdgice/problems.hpp"
#include "mdgice/slab_solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mdg::cli {

inline constexpr const char* output_root_env = "MDGICE_OUTPUT_ROOT";

enum ExitCode { exit_converged = 0, exit_usage = 1, exit_nonconverged = 2 };

struct Overrides {
    std::optional<int> degree;
    std::optional<int> max_iter;
    std::optional<double> tol;
    std::optional<int> slabs;
    std::optional<BasisFamily> basis;
    std::optional<InitMode> init;
    bool no_mesh_management = false;
};

/// Loads `problem` (builtin name or config path), then `config` if given
/// (config replaces the problem entirely), then applies the overrides.
ProblemSpec resolve_spec(const std::string& problem, const std::string& config, const Overrides& o);

struct FieldErrors {
    std::string field;
    double l2 = 0.0;
};

struct RunReport {
    ProblemSpec spec;
    RunOutcome outcome;
    long dofs = 0;
    std::vector<FieldErrors> errors;
    nlohmann::json summary;
};

/// Total unknown count over all slabs.
long count_dofs(const RunOutcome& run);

/// L2 space-time errors summed over slabs; empty without an oracle.
std::vector<FieldErrors> compute_errors(const ProblemSpec& spec, const RunOutcome& run);

/// Solves and writes the full file set into `dir` (created if needed).
RunReport run_to_directory(const ProblemSpec& spec, const std::filesystem::path& dir);

/// Directory used when --out is absent: $MDGICE_OUTPUT_ROOT (or ./runs)
/// joined with `leaf`.
std::filesystem::path default_directory(const std::string& leaf);

struct StudyRow {
    int degree = 0;
    long dofs = 0;
    double log_inv_sqrt_dofs = 0.0;
    double log_error = 0.0;
    std::optional<double> slope;
    bool converged = false;
};

/// Slopes Δlog(error)/Δlog(1/sqrt(DOFs)) between consecutive rows.
void fill_slopes(std::vector<StudyRow>& rows);

/// Runs every degree into dir/p<k> and writes dir/study.csv.
std::vector<StudyRow> run_study(const ProblemSpec& base, const std::vector<int>& degrees,
                                const std::filesystem::path& dir);

/// Entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace mdg::cli
