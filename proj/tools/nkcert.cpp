#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nkcert/error.hpp"
#include "nkcert/pipeline.hpp"

using namespace nkcert;

namespace {

void add_overrides(CLI::App * cmd, Overrides & o)
{
    cmd->add_option("--window", o.window, "exponent window for orbit enumeration");
    cmd->add_option("--samples", o.samples, "sample count for the randomized checks");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--tol", o.tol, "zero tolerance (imaginary parts, invariant pairs)");
    cmd->add_option("--out", o.out, "output path");
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Certificates for compact non-Kaehler manifolds built from number fields"};
    app.require_subcommand(1);

    std::string config;
    Overrides vo, po;
    auto * verify = app.add_subcommand("verify", "run every check and write the certificate");
    verify->add_option("config", config, "TOML configuration")->required();
    add_overrides(verify, vo);

    auto * plot_cmd = app.add_subcommand("plot", "draw the fan and the fundamental domain (s = 2)");
    plot_cmd->add_option("config", config, "TOML configuration")->required();
    add_overrides(plot_cmd, po);

    long q1_min = -10, q1_max = 10;
    auto * salem = app.add_subcommand("salem4", "list X^4 + q1 X^3 + q2 X^2 + q1 X + 1 with the Salem root pattern");
    salem->add_option("--q1-min", q1_min);
    salem->add_option("--q1-max", q1_max);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        int const rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            auto const res = run(config, vo);
            auto const & c = res.certificate;
            std::cout << fmt::format("{}: {}\n", c.status, res.certificate_path.string());
            if (c.error)
                std::cerr << *c.error << "\n";
            for (auto const & [name, chk] : c.checks)
                if (chk.mandatory && !chk.pass)
                    std::cerr << fmt::format("check {} failed: {}\n", name, chk.witness);
            for (auto const & w : c.warnings)
                std::cerr << "warning: " << w << "\n";
            return res.exit_code;
        }
        if (*plot_cmd) {
            std::cout << plot(config, po).string() << "\n";
            return 0;
        }
        if (*salem) {
            if (q1_min > q1_max) {
                std::cerr << "--q1-min exceeds --q1-max\n";
                return 2;
            }
            for (auto const & s : enum_salem4(q1_min, q1_max))
                std::cout << fmt::format("{:>4} {:>4}  {}{}\n", s.q1, s.q2, to_string(s.poly),
                                         s.irreducible ? "" : "  (reducible)");
            return 0;
        }
    } catch (Error const & err) {
        std::cerr << err.what() << "\n";
        return err.code() == ErrorCode::ConfigError ? 2 : 1;
    }
    return 0;
}
