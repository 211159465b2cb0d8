#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlop/cli.hpp"
#include "nlop/version.hpp"

int main(int argc, char** argv) {
    nlop::RunConfig cfg;

    // --config is applied first; explicit flags override its values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) {
                std::fprintf(stderr, "cannot open config file %s\n", argv[i + 1]);
                return nlop::kExitUsage;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                cfg = nlop::config_from_json(ss.str());
            } catch (const std::exception& e) {
                std::fprintf(stderr, "bad config file: %s\n", e.what());
                return nlop::kExitUsage;
            }
        }
    }

    CLI::App app{"Nonlocal-operator verification suites (fractional Hessians, Pucci "
                 "extremal operators, Riesz potentials, critical-exponent ABP checks)"};
    app.set_version_flag("--version", nlop::kVersion);
    std::string config_path;
    app.add_option("command", cfg.command,
                   "one of: constants, verify-hessian, verify-riesz, verify-infconv, "
                   "counterexample, abp-check")
        ->required();
    app.add_option("--config", config_path, "JSON config file (flags override)");
    app.add_option("--n", cfg.params.n, "dimension")->capture_default_str();
    app.add_option("--sigma", cfg.params.sigma, "operator order in (0,2)")
        ->capture_default_str();
    app.add_option("--lambda", cfg.params.lambda, "ellipticity lower constant")
        ->capture_default_str();
    app.add_option("--Lambda", cfg.params.Lambda, "ellipticity upper constant")
        ->capture_default_str();
    app.add_option("--eta", cfg.params.eta, "lower matrix cutoff")->capture_default_str();
    app.add_option("--tol", cfg.spec.tol, "quadrature tolerance")->capture_default_str();
    app.add_option("--r-inner", cfg.spec.r_inner, "inner quadrature radius cap")
        ->capture_default_str();
    app.add_option("--r-outer", cfg.spec.r_outer, "outer truncation radius (0 = auto)")
        ->capture_default_str();
    app.add_option("--radial-levels", cfg.spec.radial_levels,
                   "geometric radial segments per e-fold")
        ->capture_default_str();
    app.add_option("--angular-points", cfg.spec.angular_points, "sphere rule size (0 = auto)")
        ->capture_default_str();
    app.add_option("--N", cfg.N_ladder, "counterexample N ladder")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--p", cfg.p, "ABP exponent p (0 = p0 + 0.3)")->capture_default_str();
    app.add_option("--out", cfg.output_path, "output path stem")->capture_default_str();
    app.add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : nlop::kExitUsage;
    }
    return nlop::run(cfg);
}
