// Batch front-end: generate or load instances, run theorem verifications and
// alpha scans, compute set-radius brackets, discretize catalog kernels.
// Outputs are deterministic functions of (flags, seed, input bytes); wall
// times go to stderr only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hjsr/harness.hpp"
#include "hjsr/jsr.hpp"
#include "hjsr/kernel.hpp"
#include "hjsr/matrix_set.hpp"

namespace {

using hjsr::TrialStatus;

struct CommonOpts {
    std::string out;
    std::string format;
};

void write_output(const CommonOpts& opts, const std::string& text) {
    if (opts.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(opts.out, std::ios::binary);
    if (!f) throw hjsr::InvalidInput("cannot open output file: " + opts.out);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::vector<std::size_t> parse_grid_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        out.push_back(static_cast<std::size_t>(std::stoull(token)));
    }
    if (out.empty()) throw hjsr::InvalidInput("--grid needs a comma-separated list of sizes");
    return out;
}

int exit_code_for(const hjsr::VerificationReport& report) {
    if (report.violations > 0) return 2;
    if (report.errors > 0) return 1;
    if (report.passed == 0 && report.inconclusive > 0) return 3;
    return 0;
}

int run_verify(const hjsr::TrialConfig& cfg, const std::string& theorem,
               const CommonOpts& opts) {
    if (!opts.format.empty() && opts.format != "json")
        throw hjsr::InvalidInput("verify reports are JSON only");
    const hjsr::TheoremId id = hjsr::parse_theorem(theorem);
    const hjsr::VerificationReport report = hjsr::run_verification(id, cfg);
    write_output(opts, hjsr::report_to_json(report));
    std::fprintf(stderr, "verify %s: %d pass, %d violation, %d inconclusive, %d error (%.0f ms)\n",
                 theorem.c_str(), report.passed, report.violations, report.inconclusive,
                 report.errors, report.wall_ms);
    return exit_code_for(report);
}

std::vector<hjsr::MatrixSet> scan_factors(const std::vector<std::string>& inputs,
                                          const hjsr::TrialConfig& cfg) {
    std::vector<hjsr::MatrixSet> factors;
    if (!inputs.empty()) {
        for (const auto& path : inputs) factors.push_back(hjsr::load_matrix_set(path));
        return factors;
    }
    hjsr::SampleStream rng(hjsr::trial_seed(cfg.seed, 0));
    for (int i = 0; i < cfg.n_factors; ++i)
        factors.push_back(hjsr::random_set(rng, cfg.dim, cfg.set_size, cfg.density));
    return factors;
}

int run_scan(const hjsr::TrialConfig& cfg, const std::string& theorem, const std::string& rho,
             const std::vector<std::string>& inputs, const CommonOpts& opts) {
    const hjsr::TheoremId id = hjsr::parse_theorem(theorem);
    const hjsr::RhoSelector sel = hjsr::parse_rho(rho);
    hjsr::AlphaCurve curve;
    if (id == hjsr::TheoremId::RhoN || id == hjsr::TheoremId::RhoTildeN) {
        const auto factors = scan_factors(inputs, cfg);
        curve = id == hjsr::TheoremId::RhoN ? hjsr::scan_rho_n(factors, sel, cfg)
                                            : hjsr::scan_rho_tilde_n(factors, sel, cfg);
    } else if (id == hjsr::TheoremId::RhoBarN) {
        std::vector<std::vector<hjsr::MatrixSet>> grid;
        if (!inputs.empty()) {
            for (const auto& path : inputs)
                grid.push_back({hjsr::load_matrix_set(path)}); // n x 1 grid from files
        } else {
            hjsr::SampleStream rng(hjsr::trial_seed(cfg.seed, 0));
            for (int i = 0; i < cfg.n_factors; ++i) {
                std::vector<hjsr::MatrixSet> row;
                for (int j = 0; j < cfg.m_cols; ++j)
                    row.push_back(hjsr::random_set(rng, cfg.dim, cfg.set_size, cfg.density));
                grid.push_back(std::move(row));
            }
        }
        curve = hjsr::scan_rho_bar_n(grid, sel, cfg);
    } else {
        throw hjsr::InvalidInput("scan supports rho-n, rho-tilde-n and rho-bar-n");
    }
    write_output(opts, opts.format == "json" ? hjsr::curve_to_json(curve)
                                             : hjsr::curve_to_csv(curve));
    std::fprintf(stderr, "scan %s/%s: %s%s\n", theorem.c_str(), rho.c_str(),
                 curve.monotone_ok ? "MONOTONE_OK" : "VIOLATION",
                 curve.inconclusive_pairs > 0 ? " (with inconclusive pairs)" : "");
    return curve.monotone_ok ? 0 : 2;
}

int run_bracket(const hjsr::TrialConfig& cfg, const std::string& rho, const std::string& input,
                const CommonOpts& opts) {
    if (!opts.format.empty() && opts.format != "json")
        throw hjsr::InvalidInput("bracket output is JSON only");
    if (input.empty()) throw hjsr::InvalidInput("bracket needs --input matrix-set JSON");
    const hjsr::MatrixSet set = hjsr::load_matrix_set(input);
    const hjsr::RhoSelector sel = hjsr::parse_rho(rho);
    const auto kind = sel == hjsr::RhoSelector::Jsr ? hjsr::SetRadiusKind::Joint
                                                    : hjsr::SetRadiusKind::Generalized;
    const hjsr::RadiusBracket b = hjsr::radius_bracket(set, kind, cfg.budget);
    nlohmann::json doc;
    doc["lower"] = b.lower;
    doc["upper"] = b.upper;
    doc["depth_used"] = b.depth_used;
    doc["partial"] = b.partial;
    doc["functional"] = sel == hjsr::RhoSelector::Jsr ? "joint" : "generalized";
    write_output(opts, doc.dump(2) + "\n");
    return 0;
}

int run_kernel(const hjsr::TrialConfig& cfg, const std::string& kernel_id,
               const std::vector<double>& params, const std::string& grid_list,
               const std::string& theorem, const std::string& rho, const CommonOpts& opts) {
    if (!opts.format.empty() && opts.format != "json")
        throw hjsr::InvalidInput("kernel reports are JSON only");
    const hjsr::KernelSpec spec = hjsr::KernelSpec::make(kernel_id, params);
    const std::vector<std::size_t> grids = parse_grid_list(grid_list);
    if (!theorem.empty()) {
        const hjsr::RefinementReport report = hjsr::refinement_study(
            spec, hjsr::parse_theorem(theorem), grids, hjsr::parse_rho(rho), cfg);
        write_output(opts, hjsr::refinement_to_json(report));
        return report.verdicts_invariant ? 0 : 2;
    }
    nlohmann::json doc;
    doc["kernel"] = spec.name();
    auto entries = nlohmann::json::array();
    for (std::size_t n : grids) {
        const hjsr::Discretization d = hjsr::discretize(spec, n);
        entries.push_back({{"grid", n},
                           {"r", hjsr::spectral_radius(d.matrix, 1e-12)},
                           {"norm", hjsr::operator_norm(d.matrix, 1e-12)},
                           {"w", hjsr::numerical_radius(d.matrix, 1e-12)}});
    }
    doc["functionals"] = std::move(entries);
    write_output(opts, doc.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hadamard algebra of nonnegative matrix sets: bracketed set radii and "
                 "machine verification of weighted-symmetrization inequalities"};
    app.require_subcommand(1);

    hjsr::TrialConfig cfg;
    CommonOpts opts;
    std::string theorem = "ejs-mean";
    std::string rho = "norm";
    std::vector<std::string> inputs;
    std::string input;
    std::string kernel_id = "constant";
    std::vector<double> kernel_params;
    std::string grid_list = "16,32,64";

    auto add_config_flags = [&](CLI::App* cmd) {
        cmd->add_option("--dim", cfg.dim, "matrix dimension");
        cmd->add_option("--set-size", cfg.set_size, "elements per generated set");
        cmd->add_option("--n-factors", cfg.n_factors, "factor count for chains and scans");
        cmd->add_option("--rows", cfg.k_rows, "grid rows (product chain length)");
        cmd->add_option("--cols", cfg.m_cols, "grid columns (mean width)");
        cmd->add_option("--density", cfg.density, "fraction of nonzero entries");
        cmd->add_option("--trials", cfg.trials, "number of seeded trials");
        cmd->add_option("--seed", cfg.seed, "master seed");
        cmd->add_option("--alpha-steps", cfg.alpha_steps, "alpha grid size");
        cmd->add_option("--tol", cfg.tol, "relative tolerance override");
        cmd->add_option("--depth", cfg.budget.max_depth, "enumeration depth");
        cmd->add_option("--max-products", cfg.budget.max_products, "product cap");
        cmd->add_option("--out", opts.out, "output file (stdout when absent)");
        cmd->add_option("--format", opts.format, "output format: json or csv");
    };

    CLI::App* verify = app.add_subcommand("verify", "randomized theorem verification");
    add_config_flags(verify);
    verify->add_option("--theorem", theorem, "theorem id (kebab-case)");

    CLI::App* scan = app.add_subcommand("scan", "alpha scan of a curve family");
    add_config_flags(scan);
    scan->add_option("--theorem", theorem, "rho-n, rho-tilde-n or rho-bar-n")
        ->default_val("rho-n");
    scan->add_option("--rho", rho, "functional: r, gsr, jsr, norm, w");
    scan->add_option("--input", inputs, "matrix-set JSON file per factor (repeatable)");

    CLI::App* bracket = app.add_subcommand("bracket", "set-radius bracket of a matrix set");
    add_config_flags(bracket);
    bracket->add_option("--rho", rho, "functional: gsr or jsr")->default_val("gsr");
    bracket->add_option("--input", input, "matrix-set JSON file");

    CLI::App* kernel = app.add_subcommand("kernel", "discretize catalog kernels");
    add_config_flags(kernel);
    kernel->add_option("--kernel", kernel_id, "constant, exp-diff, rank-one or poly");
    kernel->add_option("--kernel-param", kernel_params, "kernel parameters (repeatable)");
    kernel->add_option("--grid", grid_list, "comma-separated grid sizes");
    kernel->add_option("--theorem", theorem, "optional refinement-study theorem")
        ->default_val("");
    kernel->add_option("--rho", rho, "functional for refinement scans");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (verify->parsed()) return run_verify(cfg, theorem, opts);
        if (scan->parsed()) return run_scan(cfg, theorem, rho, inputs, opts);
        if (bracket->parsed()) return run_bracket(cfg, rho, input, opts);
        if (kernel->parsed())
            return run_kernel(cfg, kernel_id, kernel_params, grid_list, theorem, rho, opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
