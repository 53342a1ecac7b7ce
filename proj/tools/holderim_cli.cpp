// Command-line front end: fit pointwise plausibility intervals from a CSV
// dataset, run the two-point / n-point width experiments, and estimate
// empirical coverage. All output is CSV with 12 significant digits.
//
// Exit codes: 0 success, 2 usage or CSV parse error, 3 domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holderim/harness.hpp"
#include "holderim/im_core.hpp"
#include "holderim/model.hpp"
#include "holderim/partial_cond.hpp"

namespace {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct CsvRow {
    double t;
    std::optional<double> y;
    int line; // 1-based line number in the input file
};

std::vector<CsvRow> read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open input file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw CsvError("empty input file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,y") throw CsvError("line 1: expected header 't,y', got '" + line + "'");

    std::vector<CsvRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw CsvError("line " + std::to_string(lineno) + ": expected two fields");
        std::string t_str = line.substr(0, comma);
        std::string y_str = line.substr(comma + 1);

        auto parse_num = [&](const std::string& s, const char* what) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(s, &pos);
            } catch (const std::exception&) {
                throw CsvError("line " + std::to_string(lineno) + ": malformed " + what +
                               " '" + s + "'");
            }
            if (pos != s.size())
                throw CsvError("line " + std::to_string(lineno) + ": malformed " + what +
                               " '" + s + "'");
            return v;
        };

        CsvRow row;
        row.t = parse_num(t_str, "t");
        row.y = y_str.empty() ? std::optional<double>{}
                              : std::optional<double>{parse_num(y_str, "y")};
        row.line = lineno;
        rows.push_back(row);
    }
    if (rows.empty()) throw CsvError("no data rows in " + path);
    return rows;
}

holderim::Dataset to_dataset(const std::vector<CsvRow>& rows) {
    std::map<double, int> seen;
    for (const auto& r : rows) {
        auto [it, inserted] = seen.emplace(r.t, r.line);
        if (!inserted)
            throw DomainError("line " + std::to_string(r.line) + ": duplicate t = " +
                              fmt12(r.t) + " (first at line " + std::to_string(it->second) +
                              ")");
    }
    std::vector<holderim::DataPoint> pts;
    pts.reserve(rows.size());
    bool any_observed = false;
    for (const auto& r : rows) {
        pts.push_back({r.t, r.y});
        any_observed |= r.y.has_value();
    }
    if (!any_observed) throw DomainError("no observed points in input");
    return holderim::Dataset(std::move(pts));
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw CsvError("cannot open output file: " + path);
    return file;
}

struct CommonFlags {
    double M = 1.0, gamma = 0.5, sigma = 1.0, alpha = 0.05;
    holderim::HolderConfig cfg() const { return {M, gamma, sigma, alpha}; }
    void attach(CLI::App* app) {
        app->add_option("--M", M, "Holder constant");
        app->add_option("--gamma", gamma, "Holder exponent in (0,1]");
        app->add_option("--sigma", sigma, "noise SD");
        app->add_option("--alpha", alpha, "significance level");
    }
};

holderim::TruthFn parse_truth(const std::string& s) {
    if (s == "sqrt") return holderim::TruthFn::sqrt_fn;
    if (s == "zero") return holderim::TruthFn::zero_fn;
    throw CsvError("unknown truth '" + s + "' (expected sqrt|zero)");
}

holderim::Design parse_design(const std::string& s) {
    if (s == "uniform") return holderim::Design::uniform_random;
    if (s == "equispaced") return holderim::Design::equally_spaced;
    throw CsvError("unknown design '" + s + "' (expected uniform|equispaced)");
}

void cmd_fit(const std::string& input, const std::string& output, const CommonFlags& flags) {
    auto rows = read_dataset_csv(input);
    holderim::Dataset data = to_dataset(rows);
    auto curve = holderim::fit_curve(data, flags.cfg());

    std::ofstream file;
    std::ostream& out = open_output(output, file);
    out << "t,y,lower,upper\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& p = data[i];
        out << fmt12(p.t) << ',' << (p.y ? fmt12(*p.y) : std::string{}) << ','
            << fmt12(curve[i].second.lower) << ',' << fmt12(curve[i].second.upper) << '\n';
    }
}

void cmd_experiment_two_point(const holderim::ExperimentConfig& ec,
                              const std::string& output) {
    auto records = holderim::run_two_point(ec);
    std::ofstream file;
    std::ostream& out = open_output(output, file);
    out << "trial,B,marginal,mixture,conservative\n";
    for (const auto& r : records) {
        out << r.trial << ',' << fmt12(r.bounds[0]) << ',' << fmt12(r.width_marginal) << ','
            << fmt12(r.width_mixture) << ',' << fmt12(r.width_cond_nearest) << '\n';
    }
}

void cmd_experiment_n_point(const holderim::ExperimentConfig& ec, const std::string& output) {
    auto records = holderim::run_n_point(ec);
    std::ofstream file;
    std::ostream& out = open_output(output, file);
    out << "trial,point,B_sum,marginal,mixture,cond_1pt,cond_all,covered_mixture\n";
    for (const auto& r : records) {
        double b_sum = 0.0;
        for (double b : r.bounds) b_sum += b;
        out << r.trial << ',' << r.point_index << ',' << fmt12(b_sum) << ','
            << fmt12(r.width_marginal) << ',' << fmt12(r.width_mixture) << ','
            << fmt12(r.width_cond_nearest) << ',' << fmt12(r.width_cond_all) << ','
            << (r.covered_mixture ? 1 : 0) << '\n';
    }
}

void cmd_coverage(const holderim::ExperimentConfig& ec, const std::string& method,
                  const std::string& output) {
    static const std::vector<std::pair<std::string, holderim::Method>> known = {
        {"one-point", holderim::Method::one_point},
        {"marginal", holderim::Method::marginal},
        {"partial", holderim::Method::partial_conditioning},
        {"cond-nearest", holderim::Method::conservative_conditional},
        {"cond-all", holderim::Method::conditional_full},
    };
    std::vector<std::pair<std::string, holderim::Method>> selected;
    if (method == "all") {
        selected = known;
    } else {
        for (const auto& k : known)
            if (k.first == method) selected.push_back(k);
        if (selected.empty()) throw CsvError("unknown method '" + method + "'");
    }

    std::ofstream file;
    std::ostream& out = open_output(output, file);
    out << "method,rate,se,trials,alpha\n";
    for (const auto& [name, m] : selected) {
        auto res = holderim::coverage_estimate(ec, m);
        out << name << ',' << fmt12(res.rate) << ',' << fmt12(res.se) << ',' << res.trials
            << ',' << fmt12(ec.cfg.alpha) << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pointwise plausibility intervals for Holder-constrained normal means"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string output;
    std::string input;
    int n = 3;
    int trials = -1; // -1 = per-subcommand default
    std::uint64_t seed = 1234;
    std::string truth = "sqrt";
    std::string design = "uniform";
    std::string method = "all";
    std::string kind;

    auto* fit = app.add_subcommand("fit", "fit intervals from a t,y CSV file");
    fit->add_option("input", input, "input CSV with header t,y")->required();
    fit->add_option("-o,--output", output, "output CSV path (default stdout)");
    flags.attach(fit);

    auto* exp = app.add_subcommand("experiment", "run a width-comparison experiment");
    exp->add_option("kind", kind, "two-point | n-point")->required();
    exp->add_option("-o,--output", output, "output CSV path (default stdout)");
    exp->add_option("--n", n, "number of design points (n-point only)");
    exp->add_option("--trials", trials, "number of Monte Carlo trials");
    exp->add_option("--seed", seed, "RNG seed");
    exp->add_option("--truth", truth, "truth function: sqrt | zero");
    exp->add_option("--design", design, "design: uniform | equispaced");
    flags.attach(exp);

    auto* cov = app.add_subcommand("coverage", "estimate empirical coverage");
    cov->add_option("-o,--output", output, "output CSV path (default stdout)");
    cov->add_option("--n", n, "number of design points");
    cov->add_option("--trials", trials, "number of Monte Carlo trials");
    cov->add_option("--seed", seed, "RNG seed");
    cov->add_option("--truth", truth, "truth function: sqrt | zero");
    cov->add_option("--design", design, "design: uniform | equispaced");
    cov->add_option("--method", method,
                    "one-point | marginal | partial | cond-nearest | cond-all | all");
    flags.attach(cov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (fit->parsed()) {
            cmd_fit(input, output, flags);
        } else if (exp->parsed()) {
            holderim::ExperimentConfig ec;
            ec.seed = seed;
            ec.truth = parse_truth(truth);
            ec.design = parse_design(design);
            ec.cfg = flags.cfg();
            if (kind == "two-point") {
                ec.n_points = 2;
                ec.trials = trials < 0 ? 100 : trials;
                cmd_experiment_two_point(ec, output);
            } else if (kind == "n-point") {
                ec.n_points = n;
                ec.trials = trials < 0 ? 500 : trials;
                cmd_experiment_n_point(ec, output);
            } else {
                throw CsvError("unknown experiment kind '" + kind +
                               "' (expected two-point|n-point)");
            }
        } else if (cov->parsed()) {
            holderim::ExperimentConfig ec;
            ec.n_points = n;
            ec.trials = trials < 0 ? 10000 : trials;
            ec.seed = seed;
            ec.truth = parse_truth(truth);
            ec.design = parse_design(design);
            ec.cfg = flags.cfg();
            cmd_coverage(ec, method, output);
        }
    } catch (const CsvError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
