#include "modlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "modlab/bvsymbol.hpp"
#include "modlab/harness.hpp"
#include "modlab/lpspace.hpp"
#include "modlab/maximal.hpp"
#include "modlab/pdo.hpp"
#include "modlab/singular.hpp"

namespace modlab::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SampledFunction load_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return read_csv(in);
}

void save_function(const std::string& path, const SampledFunction& f) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    write_csv(out, f);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json load_json(const std::string& path) {
    try {
        return nlohmann::json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("invalid JSON in '" + path + "': " + e.what());
    }
}

Grid parse_grid(const std::vector<double>& spec) {
    if (spec.size() != 3) throw UsageError("--grid expects x_min,x_max,n");
    if (!(spec[2] >= 1.0) || spec[2] != std::floor(spec[2])) throw UsageError("--grid node count must be a positive integer");
    return Grid(spec[0], spec[1], static_cast<std::size_t>(spec[2]));
}

struct TransformArgs {
    std::string op, in, out;
    std::optional<double> eps, a, b;
    std::vector<double> alphas;
    double r = 2.0;
};

SampledFunction run_transform(const TransformArgs& t, const SampledFunction& f) {
    auto family = [&](bool cuts) {
        if (!t.alphas.empty()) return ModulationFamily(t.alphas, f.grid());
        return cuts ? ModulationFamily::all_cuts(f.grid()) : ModulationFamily::frequency_grid(f.grid());
    };
    if (t.op == "hilbert") return hilbert_multiplier(f);
    if (t.op == "hilbert-pv") return hilbert_quadrature(f, t.eps.value_or(0.5 * f.grid().spacing()));
    if (t.op == "hstar") return maximal_hilbert(f);
    if (t.op == "sab") {
        if (!t.a || !t.b) throw UsageError("sab needs --a and --b");
        return partial_fourier_integral(f, *t.a, *t.b);
    }
    if (t.op == "sstar") return s_star(f, family(true));
    if (t.op == "carleson") return carleson(f, family(false));
    if (t.op == "cstar") return maximal_carleson(f, family(false));
    if (t.op == "maximal") return hardy_littlewood(f);
    if (t.op == "sharp") return sharp_maximal(f, default_sharp_family(f.size()));
    if (t.op == "mr") return r_maximal(f, t.r);
    throw UsageError("unknown transform '" + t.op + "'");
}

void print_condition(std::ostream& out, const char* label, const CompactnessCondition& c) {
    out << label << ": " << (c.pass ? "pass" : "fail") << " (" << c.evidence << ")\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical lab for maximally modulated singular integrals and BV-symbol operators", "modlab"};
    app.require_subcommand(1);

    TransformArgs targs;
    auto* transform = app.add_subcommand("transform", "Apply a transform to a sampled function");
    transform->add_option("op", targs.op, "hilbert, hilbert-pv, hstar, sab, sstar, carleson, cstar, maximal, sharp, mr")
        ->required()
        ->check(CLI::IsMember(
            {"hilbert", "hilbert-pv", "hstar", "sab", "sstar", "carleson", "cstar", "maximal", "sharp", "mr"}));
    transform->add_option("--in", targs.in, "Input CSV (x,re,im)")->required();
    transform->add_option("--out", targs.out, "Output CSV")->required();
    transform->add_option("--eps", targs.eps, "Truncation for hilbert-pv (default h/2)");
    transform->add_option("--a", targs.a, "Lower band edge for sab");
    transform->add_option("--b", targs.b, "Upper band edge for sab");
    transform->add_option("--alphas", targs.alphas, "Modulation frequencies (default: frequency grid; every band cut for sstar)")
        ->delimiter(',');
    transform->add_option("--r", targs.r, "Exponent for mr")->check(CLI::Range(1.0, 1e300));

    std::string norm_in, norm_exponent;
    auto* norm = app.add_subcommand("norm", "Luxemburg norm of a sampled function");
    norm->add_option("--in", norm_in, "Input CSV")->required();
    norm->add_option("--exponent", norm_exponent, "Exponent JSON")->required();

    auto* symbol = app.add_subcommand("symbol", "Symbol analysis");
    symbol->require_subcommand(1);
    std::string sym_path;
    bool compactness = false;
    std::vector<double> sym_grid{-8.0, 8.0, 256};
    std::vector<double> n_list{1, 2, 4, 8};
    std::vector<double> l_ladder{1, 2, 4, 8, 16, 32};
    auto* check = symbol->add_subcommand("check", "Parse, print, and measure a symbol");
    check->add_option("file", sym_path, "Symbol file (.sym)")->required();
    check->add_flag("--compactness", compactness, "Also report the compactness conditions");
    check->add_option("--grid", sym_grid, "Probe grid x_min,x_max,n")->delimiter(',');
    check->add_option("--n-list", n_list, "Windows |x| <= N for the tail-variation condition")->delimiter(',');
    check->add_option("--l-ladder", l_ladder, "Tail cut-offs L")->delimiter(',');

    auto* pdo = app.add_subcommand("pdo", "Pseudodifferential operators");
    pdo->require_subcommand(1);
    std::string pdo_sym, pdo_in, pdo_out;
    auto* apply = pdo->add_subcommand("apply", "Apply a(x,D) to a sampled function");
    apply->add_option("file", pdo_sym, "Symbol file")->required();
    apply->add_option("--in", pdo_in, "Input CSV")->required();
    apply->add_option("--out", pdo_out, "Output CSV")->required();
    std::string spec_sym, matrix_out;
    std::vector<double> spec_grid;
    std::size_t k = 50;
    auto* spectrum = pdo->add_subcommand("spectrum", "Leading singular values of the operator matrix");
    spectrum->add_option("file", spec_sym, "Symbol file")->required();
    spectrum->add_option("--grid", spec_grid, "x_min,x_max,n")->delimiter(',')->required();
    spectrum->add_option("--k", k, "Number of singular values");
    spectrum->add_option("--matrix-out", matrix_out, "Also export the matrix as CSV");

    std::string suite, config_path, report_path;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("suite", suite, "inequalities, norm-ratio, fefferman-stein, self-improvement, interpolation")
        ->required();
    verify->add_option("--config", config_path, "Experiment config JSON")->required();
    verify->add_option("--out", report_path, "Report JSON (default: the config's output path)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (*transform) {
            const auto f = load_function(targs.in);
            save_function(targs.out, run_transform(targs, f));
            return kSuccess;
        }
        if (*norm) {
            const auto f = load_function(norm_in);
            const auto p = VariableExponent::from_json(load_json(norm_exponent));
            const auto r = luxemburg_norm(f, p);
            out << std::setprecision(17) << r.value << '\n';
            return kSuccess;
        }
        if (*check) {
            const Symbol a = Symbol::parse(slurp(sym_path));
            const Grid g = parse_grid(sym_grid);
            const auto probes = g.nodes();
            out << a.to_string() << '\n';
            out << std::setprecision(17) << "linf_v_norm: " << linf_v_norm(a, probes) << '\n';
            if (compactness) {
                const auto rep = compactness_report(a, n_list, l_ladder);
                print_condition(out, "(a) vanishing at lambda = +-inf", rep.vanishing_at_infinity);
                print_condition(out, "(b) section variation decays in |x|", rep.variation_decay_in_x);
                print_condition(out, "(c) uniform tail variation", rep.uniform_tail_variation);
            }
            return kSuccess;
        }
        if (*apply) {
            const Symbol a = Symbol::parse(slurp(pdo_sym));
            save_function(pdo_out, apply_pdo(a, load_function(pdo_in)));
            return kSuccess;
        }
        if (*spectrum) {
            const Symbol a = Symbol::parse(slurp(spec_sym));
            const Grid g = parse_grid(spec_grid);
            const auto m = pdo_matrix(a, g);
            if (!matrix_out.empty()) {
                std::ofstream mo(matrix_out);
                if (!mo) throw UsageError("cannot write '" + matrix_out + "'");
                m.write_csv(mo);
            }
            out << std::setprecision(17);
            for (double s : singular_value_profile(m, std::min(k, g.size()))) out << s << '\n';
            return kSuccess;
        }
        if (*verify) {
            auto cfg = ExperimentConfig::from_json(load_json(config_path));
            cfg.suite = suite;
            const auto report = run_suite(cfg);
            const std::string path = report_path.empty() ? cfg.output : report_path;
            const std::string text = report.to_json().dump(2) + "\n";
            if (path.empty()) {
                out << text;
            } else {
                std::ofstream ro(path);
                if (!ro) throw UsageError("cannot write '" + path + "'");
                ro << text;
                out << report.suite << ": " << report.n_pass() << " passed, " << report.n_fail() << " failed\n";
            }
            return report.n_fail() == 0 ? kSuccess : kVerificationFailure;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace modlab::cli
