#pragma once

#include <complex>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperlac/errors.hpp"
#include "hyperlac/quadrature.hpp"

namespace hyperlac {

/// An alpha entry in a config list. `edge` stands for (2-n)/2 + 0.1, resolved per dimension.
struct AlphaEntry {
    cplx value;
    bool edge = false;

    cplx resolve(int n) const { return edge ? cplx((2.0 - n) / 2 + 0.1) : value; }
    std::string text() const;
};

/// Parses "1", "-0.4", "0.5+1i", "0.5-i", "2i" or "edge".
AlphaEntry parse_alpha(const std::string& s);

struct FamilySpec {
    std::string kind;
    double parameter;
};

struct ExperimentConfig {
    struct Grid {
        double r_max = 12;
        int n_r = 2048;
        int order = 32;
        double lambda_max = 256;
        int n_lambda = 4096;
    } grid;

    std::vector<int> dimensions{2, 3};
    std::optional<std::vector<FamilySpec>> family;  // empty optional: default family for each n

    struct {
        std::vector<int> dimensions{2, 3, 4};
        double tolerance = 1e-3;
        int refinement_steps = 5;
    } plancherel;

    struct {
        std::vector<AlphaEntry> alphas{{0.0}, {{0.5, 1.0}}, {1.0}, {0.0, true}};
        int t_min_log2 = -10;
        int t_max_log2 = 3;
        double lambda_max = 200;
        double slack = 1.2;
        double normalization_tolerance = 1e-8;
    } estimates;

    struct {
        std::vector<AlphaEntry> alphas{{0.0}, {0.0, true}};
        double lambda_max = 200;
        int lambda_points = 2001;
        int J = 20;
        int J_check = 40;
        double tolerance = 1e-3;
    } i3;

    struct {
        std::vector<double> ps{1.2, 1.5, 1.8};
        double slack = 1.5;
        double ratio_tolerance = 0.01;
        int series_terms = 12;
        std::vector<AlphaEntry> summability_alphas{{0.0}, {1.0}};
        int summability_K = 20;
        double summability_slack = 1.2;
    } kunze_stein;

    struct {
        std::vector<double> alphas{0.5, 1.0, 2.0};
        int j = 8;
        int log2_r_min = -60;
        int log2_r_max = -20;
        double slope_tolerance = 0.05;
        double drift_threshold = 0.02;
    } cz;

    struct {
        std::vector<AlphaEntry> alphas{{0.0}};
        std::vector<double> ps{1.25, 1.5, 2.0};
        int J = 20;
        int K = 20;
        double tolerance = 0.05;
        std::string golden;  // optional CSV of recorded norms to regress against
        std::vector<int> route_dimensions{2, 3, 4};
        int route_n_r = 256;
        std::vector<double> route_ts{0.25, 1.0, 3.0};
        std::vector<AlphaEntry> route_alphas{{1.0}, {{0.5, 1.0}}};
        double route_tolerance = 1e-3;
    } maximal;

    struct {
        std::vector<int> dimensions{2, 3, 4};
        int points = 100;
        double p_max = 32;
        double interpolation_tolerance = 1e-3;
    } region;

    std::string output_dir = "results";

    /// key -> value text of every setting, for the metadata file.
    std::map<std::string, std::string> echo() const;
};

/// Parses flat `key = value` text ('#' starts a comment) and checks every invariant.
/// Throws ConfigError naming the offending key.
ExperimentConfig validate_config(const std::string& raw);

ExperimentConfig load_config(const std::filesystem::path& path);

/// "default" leaves the grids alone; "fine" doubles N_r, N_lambda and the I3 lambda sampling.
void apply_seed_grids(ExperimentConfig& cfg, const std::string& seed);

enum class Command { plancherel, symbol_estimates, i3, kunze_stein, cz_tails, maximal_sweep, region, all };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

/// A computation failed outright (not merely a check). Carries the parameter tuple.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, std::string context)
        : Error(what + " at " + context), context_(std::move(context)) {}
    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

/// One line of a result CSV. Unset numeric fields are written empty.
struct CheckRow {
    std::string experiment_id;
    std::optional<int> n;
    std::optional<cplx> alpha;
    std::optional<double> p;
    std::optional<double> t;
    std::optional<double> lambda;
    std::optional<int> J;
    std::optional<int> K;
    std::string family;
    double value = 0;
    double tolerance = 0;
    bool pass = false;
    std::string check;

    static std::string csv_header();
    std::string csv_row() const;
};

struct ExperimentResult {
    Command command;
    std::vector<CheckRow> rows;
    std::vector<std::pair<std::string, std::string>> extra_outputs;  // file name, contents
    std::vector<std::filesystem::path> files;                        // filled in by run()
    double seconds = 0;
    bool pass = false;
};

struct RunReport {
    std::vector<ExperimentResult> experiments;
    bool pass = false;
    double seconds = 0;
};

/// Computes the rows of one command without writing anything.
ExperimentResult run_experiment(Command c, const ExperimentConfig& cfg);

/// Runs a command (or all of them), writing `<command>.csv` plus `<command>.meta.json` into the output directory.
RunReport run(Command c, const ExperimentConfig& cfg);

/// Polyline vertices of both region boundaries as (inv_p, re_alpha, curve) rows.
std::vector<std::vector<std::string>> region_polyline_rows(int n);

/// Writes `text` to `path` through a temporary file and a rename.
void write_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace hyperlac
