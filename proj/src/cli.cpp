#include "copulas/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "copulas/dsl.hpp"
#include "copulas/format.hpp"
#include "copulas/grid.hpp"
#include "copulas/verify.hpp"

namespace copulas {

namespace {

constexpr long long kMaxGridSize = 4096;

struct CommonFlags {
    QuadratureConfig quadrature;
    bool no_fast_path = false;

    BuildOptions build() const {
        return {quadrature, no_fast_path ? FastPathPolicy::ForceQuadrature : FastPathPolicy::Allow, {}};
    }
};

int write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    f.close();
    if (!f) {
        err << "error: cannot write " << path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

// Runs `body`, mapping library exceptions to exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const DslError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const InputFileError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_eval(const std::string& text, double u, double v, const CommonFlags& flags, std::ostream& out,
             std::ostream& err) {
    return guarded(err, [&] {
        const Expr e = parse(text);
        const Copula c = build(e, flags.build());
        out << format_significant12(c.eval(u, v)) << "\n";
        return kExitOk;
    });
}

int cmd_grid(const std::string& text, long long n, const std::string& path, const CommonFlags& flags,
             std::ostream& err) {
    return guarded(err, [&] {
        const Expr e = parse(text);
        if (n < 1 || n > kMaxGridSize) {
            err << "error: grid size must be in [1, " << kMaxGridSize << "], got " << n << "\n";
            return kExitConfig;
        }
        const Copula c = build(e, flags.build());
        const GridCopula g = grid_from_copula(c, static_cast<std::size_t>(n));
        std::ostringstream csv;
        write_grid_csv(g, csv);
        return write_file(path, csv.str(), err);
    });
}

struct VerifyFlags {
    std::string suite;
    std::optional<double> theta;
    std::vector<std::string> families;
    std::vector<std::string> candidates;
    std::size_t lattice = 33;
    std::string out_path;
    bool json = false;
};

int cmd_verify(const VerifyFlags& vf, const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (std::find(std::begin(kSuiteNames), std::end(kSuiteNames), vf.suite) == std::end(kSuiteNames)) {
            err << "error: unknown suite '" << vf.suite << "'\n";
            return kExitConfig;
        }
        const BuildOptions b = flags.build();
        SuiteOptions opts;
        opts.verify.quadrature = b.quadrature;
        opts.verify.policy = b.policy;
        opts.verify.lattice = vf.lattice;
        if (vf.theta) opts.theta = *vf.theta;
        for (const auto& f : vf.families) opts.families.push_back(build_family(parse_family(f), b));
        for (const auto& c : vf.candidates) opts.candidates.push_back(build(parse(c), b));

        const auto reports = run_suite(vf.suite, opts);
        const std::string text = format_text(reports);
        const std::string json = format_json(reports);
        out << (vf.json ? json : text);
        if (!vf.out_path.empty()) {
            if (int rc = write_file(vf.out_path + ".txt", text, err); rc != kExitOk) return rc;
            if (int rc = write_file(vf.out_path + ".json", json, err); rc != kExitOk) return rc;
        }
        const bool all_pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
        return all_pass ? kExitOk : kExitFailure;
    });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Copula algebra: evaluate expressions, export grids, run verification suites", "copula"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonFlags flags;
    app.add_option("--subintervals", flags.quadrature.base_subintervals, "Base quadrature subintervals")
        ->capture_default_str();
    app.add_option("--nodes", flags.quadrature.nodes_per_subinterval, "Gauss-Legendre nodes per subinterval")
        ->capture_default_str();
    app.add_option("--qtol", flags.quadrature.adaptive_tol, "Adaptive quadrature tolerance")->capture_default_str();
    app.add_flag("--no-fast-path", flags.no_fast_path, "Always integrate numerically");

    std::string expr_text;
    double u = 0.0;
    double v = 0.0;
    auto* eval = app.add_subcommand("eval", "Evaluate an expression at (u, v)");
    eval->add_option("expr", expr_text, "Copula expression")->required();
    eval->add_option("u", u)->required();
    eval->add_option("v", v)->required();

    long long n = 0;
    std::string grid_out;
    auto* grid = app.add_subcommand("grid", "Write the N x N checkerboard of an expression as CSV");
    grid->add_option("expr", expr_text, "Copula expression")->required();
    grid->add_option("N", n)->required();
    grid->add_option("out", grid_out, "Output CSV path")->required();

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("suite", vf.suite, "identity, zero-necessary, zero-candidate, fgm, convergence or all")
        ->required();
    verify->add_option("--theta", vf.theta, "FGM parameter of the counterexample");
    verify->add_option("--family", vf.families, "Family expression replacing the defaults");
    verify->add_option("--candidate", vf.candidates, "Zero candidate replacing Pi");
    verify->add_option("--lattice", vf.lattice, "Lattice points per axis")->capture_default_str();
    verify->add_option("--out", vf.out_path, "Write <out>.txt and <out>.json");
    verify->add_flag("--json", vf.json, "Print JSON instead of text");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        flags.quadrature.check();
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (eval->parsed()) return cmd_eval(expr_text, u, v, flags, out, err);
    if (grid->parsed()) return cmd_grid(expr_text, n, grid_out, flags, err);
    return cmd_verify(vf, flags, out, err);
}

}  // namespace copulas
