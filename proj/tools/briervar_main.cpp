// Command-line front end: decompose forecast archives, run the simulation
// lab, run the AR(1) exceedance demo. JSON or CSV out; exit codes are
// 0 success, 2 input/usage error, 1 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "briervar/ar1.hpp"
#include "briervar/csv.hpp"
#include "briervar/result.hpp"
#include "briervar/simlab.hpp"

namespace {

using briervar::format_full;
using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
}

std::vector<double> parse_number_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw UsageError("empty entry in list '" + spec + "'");
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw UsageError("empty list '" + spec + "'");
    return out;
}

// Accepts either a comma list (0,2.5,5) or a start:stop:step range (0:10:1),
// stop inclusive.
std::vector<double> parse_thresholds(const std::string& spec) {
    if (spec.find(':') == std::string::npos) return parse_number_list(spec);
    double start = 0.0, stop = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !ss.eof())
        throw UsageError("cannot parse threshold range '" + spec + "' (want start:stop:step)");
    if (!(step > 0.0) || stop < start)
        throw UsageError("threshold range needs step > 0 and stop >= start");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + 1e-9 * step) break;
        out.push_back(v);
    }
    return out;
}

json sweep_to_json(const briervar::SweepResult& sweep) {
    json j;
    j["schema_version"] = briervar::kSchemaVersion;
    j["fitted"] = json{{"alpha", sweep.ar1.alpha},
                       {"sigma", sweep.ar1.sigma},
                       {"beta", sweep.seasonal.beta},
                       {"n_train", sweep.n_train}};
    json rows = json::array();
    for (const auto& r : sweep.rows) {
        json row;
        row["threshold"] = r.threshold;
        row["brier"] = r.brier.score;
        row["brier_se"] = r.brier.standard_error ? json(*r.brier.standard_error) : json(nullptr);
        row["rel"] = r.traditional.reliability;
        row["res"] = r.traditional.resolution;
        row["unc"] = r.traditional.uncertainty;
        row["rel_bc"] = r.bias_corrected.reliability;
        row["res_bc"] = r.bias_corrected.resolution;
        row["unc_bc"] = r.bias_corrected.uncertainty;
        row["rel_cc"] = r.consistency_corrected.reliability;
        row["res_cc"] = r.consistency_corrected.resolution;
        row["unc_cc"] = r.consistency_corrected.uncertainty;
        row["gamma"] = *r.consistency_corrected.gamma;
        row["var_rel"] = r.variances.reliability;
        row["var_res"] = r.variances.resolution;
        row["var_unc"] = r.variances.uncertainty;
        row["var_rel_bc"] = *r.variances.reliability_bc;
        row["var_res_bc"] = *r.variances.resolution_bc;
        row["var_unc_bc"] = *r.variances.uncertainty_bc;
        row["n_used"] = r.n_used;
        row["n_skipped"] = r.n_skipped;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string sweep_to_csv(const briervar::SweepResult& sweep) {
    std::string out;
    out += "# alpha=" + format_full(sweep.ar1.alpha) + " sigma=" + format_full(sweep.ar1.sigma);
    out += " beta=";
    for (std::size_t i = 0; i < sweep.seasonal.beta.size(); ++i)
        out += (i ? ";" : "") + format_full(sweep.seasonal.beta[i]);
    out += " n_train=" + std::to_string(sweep.n_train) + "\n";
    out +=
        "threshold,brier,brier_se,rel,res,unc,rel_bc,res_bc,unc_bc,"
        "rel_cc,res_cc,unc_cc,gamma,var_rel,var_res,var_unc,"
        "var_rel_bc,var_res_bc,var_unc_bc,n_used,n_skipped\n";
    for (const auto& r : sweep.rows) {
        out += format_full(r.threshold) + "," + format_full(r.brier.score) + "," +
               (r.brier.standard_error ? format_full(*r.brier.standard_error) : "") + "," +
               format_full(r.traditional.reliability) + "," +
               format_full(r.traditional.resolution) + "," +
               format_full(r.traditional.uncertainty) + "," +
               format_full(r.bias_corrected.reliability) + "," +
               format_full(r.bias_corrected.resolution) + "," +
               format_full(r.bias_corrected.uncertainty) + "," +
               format_full(r.consistency_corrected.reliability) + "," +
               format_full(r.consistency_corrected.resolution) + "," +
               format_full(r.consistency_corrected.uncertainty) + "," +
               format_full(*r.consistency_corrected.gamma) + "," +
               format_full(r.variances.reliability) + "," + format_full(r.variances.resolution) +
               "," + format_full(r.variances.uncertainty) + "," +
               format_full(*r.variances.reliability_bc) + "," +
               format_full(*r.variances.resolution_bc) + "," +
               format_full(*r.variances.uncertainty_bc) + "," + std::to_string(r.n_used) + "," +
               std::to_string(r.n_skipped) + "\n";
    }
    return out;
}

struct DecomposeOptions {
    std::string input;
    std::size_t bins = 10;
    std::string edges;
    std::string format = "json";
    std::string output;
};

int run_decompose(const DecomposeOptions& opt) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (opt.input != "-") {
        file.open(opt.input);
        if (!file) throw UsageError("cannot open input file " + opt.input);
        in = &file;
    }
    const briervar::ForecastSeries series = briervar::read_forecast_csv(*in);
    const briervar::BinningScheme scheme =
        opt.edges.empty() ? briervar::BinningScheme::equal_width(opt.bins)
                          : briervar::BinningScheme(parse_number_list(opt.edges));
    const briervar::ResultDocument doc = briervar::make_result_document(series, scheme);
    if (opt.format == "csv")
        write_output(opt.output, briervar::to_csv(doc));
    else
        write_output(opt.output, briervar::to_json(doc).dump(2) + "\n");
    return 0;
}

struct SimulateOptions {
    std::size_t trials = 100;
    std::size_t n = 250;
    std::uint64_t seed = 1;
    std::string mode = "table1";
    double k = 2.0;
    std::string grid = "100,250,500,1000,2500";
    std::string format = "json";
    std::string output;
};

int run_simulate(const SimulateOptions& opt) {
    const briervar::TrueComponents truth = briervar::true_components();
    json j;
    j["schema_version"] = briervar::kSchemaVersion;
    j["mode"] = opt.mode;
    j["seed"] = opt.seed;
    std::string csv;

    if (opt.mode == "table1" || opt.mode == "coverage") {
        const auto records = briervar::run_experiment(opt.trials, opt.n, opt.seed);
        j["trials"] = opt.trials;
        j["n"] = opt.n;
        j["truth"] = json{{"reliability", truth.reliability},
                          {"resolution", truth.resolution},
                          {"uncertainty", truth.uncertainty}};
        if (opt.mode == "table1") {
            const briervar::TrialSummary summary = briervar::summarize_trials(records, truth);
            json comps;
            csv =
                "component,truth,sample_variance,mean_estimated_variance,"
                "mean_squared_error,mean_bias\n";
            const double truths[6] = {truth.reliability, truth.resolution, truth.uncertainty,
                                      truth.reliability, truth.resolution, truth.uncertainty};
            for (std::size_t c = 0; c < briervar::kComponents; ++c) {
                const auto& s = summary.stats[c];
                comps[briervar::kComponentNames[c]] =
                    json{{"sample_variance", s.sample_variance},
                         {"mean_estimated_variance", s.mean_estimated_variance},
                         {"mean_squared_error", s.mean_squared_error},
                         {"mean_bias", s.mean_bias}};
                csv += std::string(briervar::kComponentNames[c]) + "," + format_full(truths[c]) +
                       "," + format_full(s.sample_variance) + "," +
                       format_full(s.mean_estimated_variance) + "," +
                       format_full(s.mean_squared_error) + "," + format_full(s.mean_bias) + "\n";
            }
            j["components"] = std::move(comps);
        } else {
            j["k"] = opt.k;
            const auto counts = briervar::coverage(records, truth, opt.k);
            json jc, jf;
            csv = "component,count,fraction\n";
            for (std::size_t c = 0; c < briervar::kComponents; ++c) {
                const double frac =
                    static_cast<double>(counts[c]) / static_cast<double>(records.size());
                jc[briervar::kComponentNames[c]] = counts[c];
                jf[briervar::kComponentNames[c]] = frac;
                csv += std::string(briervar::kComponentNames[c]) + "," +
                       std::to_string(counts[c]) + "," + format_full(frac) + "\n";
            }
            j["counts"] = std::move(jc);
            j["fractions"] = std::move(jf);
        }
    } else if (opt.mode == "convergence") {
        const std::vector<double> grid_values = parse_number_list(opt.grid);
        std::vector<std::size_t> grid;
        for (double g : grid_values) {
            if (!(g >= 2.0)) throw UsageError("convergence grid entries must be >= 2");
            grid.push_back(static_cast<std::size_t>(g));
        }
        const briervar::ConvergenceResult result =
            briervar::convergence_study(grid, opt.trials, opt.seed);
        j["trials"] = opt.trials;
        j["grid"] = result.n_grid;
        json diffs, slopes;
        for (std::size_t c = 0; c < briervar::kComponents; ++c) {
            std::vector<double> column(result.n_grid.size());
            for (std::size_t g = 0; g < result.n_grid.size(); ++g)
                column[g] = result.mean_abs_diff[g][c];
            diffs[briervar::kComponentNames[c]] = column;
            slopes[briervar::kComponentNames[c]] = result.slopes[c];
        }
        j["mean_abs_diff"] = std::move(diffs);
        j["slopes"] = std::move(slopes);
        csv = "n,rel,res,unc,rel_bc,res_bc,unc_bc\n";
        for (std::size_t g = 0; g < result.n_grid.size(); ++g) {
            csv += std::to_string(result.n_grid[g]);
            for (std::size_t c = 0; c < briervar::kComponents; ++c)
                csv += "," + format_full(result.mean_abs_diff[g][c]);
            csv += "\n";
        }
        csv += "slope";
        for (std::size_t c = 0; c < briervar::kComponents; ++c)
            csv += "," + format_full(result.slopes[c]);
        csv += "\n";
    } else {
        throw UsageError("unknown mode '" + opt.mode + "'");
    }

    if (opt.format == "csv")
        write_output(opt.output, csv);
    else
        write_output(opt.output, j.dump(2) + "\n");
    return 0;
}

struct Ar1Options {
    std::string train, test;
    std::string input;
    std::optional<std::int64_t> split_day;
    bool synthetic = false;
    double alpha = 0.77;
    double sigma = 2.97;
    std::string beta = "13.2,-10.7,-3.1,-0.6,0.03";
    std::int64_t days = 0;
    std::int64_t start_day = 0;
    std::uint64_t seed = 1;
    std::string thresholds;
    std::size_t bins = 10;
    std::string format = "json";
    std::string output;
};

briervar::DailySeries load_daily(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw UsageError("cannot open input file " + path);
    return briervar::read_daily_csv(file);
}

briervar::DailySeries slice_daily(const briervar::DailySeries& full, std::int64_t from,
                                  std::int64_t to_exclusive) {
    std::vector<std::int64_t> days;
    std::vector<double> temps;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (full.days()[i] >= from && full.days()[i] < to_exclusive) {
            days.push_back(full.days()[i]);
            temps.push_back(full.temps()[i]);
        }
    }
    if (days.empty()) throw UsageError("empty train/test split");
    return briervar::DailySeries(std::move(days), std::move(temps));
}

int run_ar1(const Ar1Options& opt) {
    const bool file_pair = !opt.train.empty() || !opt.test.empty();
    const bool file_split = !opt.input.empty() || opt.split_day.has_value();
    const int modes = int(file_pair) + int(file_split) + int(opt.synthetic);
    if (modes != 1)
        throw UsageError(
            "choose exactly one mode: --train/--test, --input/--split-day, or --synthetic");

    std::optional<briervar::DailySeries> train, test;
    if (opt.synthetic) {
        if (opt.days < 10) throw UsageError("--synthetic needs --days >= 10");
        const std::vector<double> beta = parse_number_list(opt.beta);
        if (beta.size() != 5) throw UsageError("--beta needs exactly five coefficients");
        briervar::SeasonalModel seasonal;
        std::copy(beta.begin(), beta.end(), seasonal.beta.begin());
        const briervar::Ar1Model model{opt.alpha, opt.sigma};
        // First half trains, second half is scored, mirroring the two-period
        // observational layout.
        const briervar::DailySeries full =
            briervar::generate_synthetic(seasonal, model, opt.days, opt.seed, opt.start_day);
        const std::int64_t mid = opt.start_day + opt.days / 2;
        train = slice_daily(full, opt.start_day, mid);
        test = slice_daily(full, mid, opt.start_day + opt.days);
    } else if (file_pair) {
        if (opt.train.empty() || opt.test.empty())
            throw UsageError("file mode needs both --train and --test");
        train = load_daily(opt.train);
        test = load_daily(opt.test);
    } else {
        if (opt.input.empty() || !opt.split_day)
            throw UsageError("split mode needs both --input and --split-day");
        const briervar::DailySeries full = load_daily(opt.input);
        train = slice_daily(full, full.days().front(), *opt.split_day);
        test = slice_daily(full, *opt.split_day, full.days().back() + 1);
    }

    const std::vector<double> thresholds = parse_thresholds(opt.thresholds);
    const briervar::SweepResult sweep =
        briervar::threshold_sweep(*train, *test, thresholds, opt.bins);
    if (opt.format == "csv")
        write_output(opt.output, sweep_to_csv(sweep));
    else
        write_output(opt.output, sweep_to_json(sweep).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brier score decomposition with sampling-variance estimates"};
    app.require_subcommand(1);

    DecomposeOptions dec;
    auto* cmd_dec = app.add_subcommand("decompose", "Decompose a p,y forecast archive");
    cmd_dec->add_option("--input", dec.input, "CSV file with header p,y ('-' for stdin)")
        ->required();
    auto* bins_opt = cmd_dec->add_option("--bins", dec.bins, "Number of equal-width bins")
                         ->default_val(10)
                         ->check(CLI::PositiveNumber);
    cmd_dec->add_option("--edges", dec.edges, "Explicit bin edges, e.g. 0,0.3,1")
        ->excludes(bins_opt);
    cmd_dec->add_option("--format", dec.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd_dec->add_option("--output", dec.output, "Output path (default stdout)");

    SimulateOptions sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Seeded Monte Carlo laboratory");
    cmd_sim->add_option("--trials", sim.trials)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--n", sim.n, "Forecasts per trial")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--seed", sim.seed, "Master seed");
    cmd_sim->add_option("--mode", sim.mode, "table1, coverage, or convergence")
        ->check(CLI::IsMember({"table1", "coverage", "convergence"}));
    cmd_sim->add_option("--k", sim.k, "Interval half-width in standard deviations")
        ->check(CLI::PositiveNumber);
    cmd_sim->add_option("--grid", sim.grid, "Comma list of N values (convergence mode)");
    cmd_sim->add_option("--format", sim.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd_sim->add_option("--output", sim.output, "Output path (default stdout)");

    Ar1Options ar;
    auto* cmd_ar1 = app.add_subcommand("ar1", "AR(1) exceedance forecast threshold sweep");
    cmd_ar1->add_option("--train", ar.train, "Training CSV with header day,temp");
    cmd_ar1->add_option("--test", ar.test, "Test CSV with header day,temp");
    cmd_ar1->add_option("--input", ar.input, "Single CSV, split by --split-day");
    std::int64_t split_day = 0;
    auto* split_opt =
        cmd_ar1->add_option("--split-day", split_day, "First day of the test period");
    cmd_ar1->add_flag("--synthetic", ar.synthetic, "Generate train/test data instead");
    cmd_ar1->add_option("--alpha", ar.alpha, "AR(1) coefficient (synthetic mode)");
    cmd_ar1->add_option("--sigma", ar.sigma, "Residual standard deviation (synthetic mode)");
    cmd_ar1->add_option("--beta", ar.beta, "Seasonal coefficients b0,...,b4 (synthetic mode)");
    cmd_ar1->add_option("--days", ar.days, "Total days to generate; halves train/test");
    cmd_ar1->add_option("--start-day", ar.start_day, "First generated day index");
    cmd_ar1->add_option("--seed", ar.seed, "Generator seed (synthetic mode)");
    cmd_ar1->add_option("--thresholds", ar.thresholds, "Comma list or start:stop:step")
        ->required();
    cmd_ar1->add_option("--bins", ar.bins, "Equal-width bins for the decomposition")
        ->check(CLI::PositiveNumber);
    cmd_ar1->add_option("--format", ar.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd_ar1->add_option("--output", ar.output, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (split_opt->count() > 0) ar.split_day = split_day;

    try {
        if (cmd_dec->parsed()) return run_decompose(dec);
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_ar1->parsed()) return run_ar1(ar);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const briervar::CsvError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
