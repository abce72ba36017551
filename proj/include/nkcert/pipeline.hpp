#pragma once

// End-to-end runs: config -> checks -> certificate, the s = 2 plot, and the
// degree-4 Salem polynomial enumeration.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nkcert/certificate.hpp"
#include "nkcert/config.hpp"

namespace nkcert {

// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<int> window;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    // replaces tolerances.zero
    std::optional<double> tol;
    std::optional<std::filesystem::path> out;
};

void apply(Overrides const & o, RunConfig & cfg, bool svg = false);

// Runs every check of the configured mode. Check failures and mathematical
// errors yield a "failed" certificate; structural problems of the
// configuration throw ConfigError.
Certificate verify(RunConfig const & cfg);

struct RunResult {
    // 0 certified, 1 check failure, 2 configuration error
    int exit_code = 0;
    Certificate certificate;
    std::filesystem::path certificate_path;
};

// Loads, verifies and always writes the certificate.
RunResult run(std::filesystem::path const & config, Overrides const & o = {});

// Temp file in the target directory, then rename.
void write_atomic(std::filesystem::path const & path, std::string const & content);

// Rays g^k r for |k| <= window through the first ray r of every cone, the
// strip B and, for window >= 1, the pieces D1 and D2. Throws
// UnsupportedDimension unless s = 2.
std::string render_svg(RunConfig const & cfg);
std::filesystem::path plot(std::filesystem::path const & config, Overrides const & o = {});

struct Salem4 {
    long q1 = 0;
    long q2 = 0;
    IntPoly poly;
    // X + 1/X has an irrational value at the large root
    bool irreducible = false;
};

// One real root > 1, one in (0, 1), two non-real roots with ||z| - 1| < tol.
bool salem_root_pattern(IntPoly const & p, double tol = 1e-9);

// X^4 + q1 X^3 + q2 X^2 + q1 X + 1 for q1 in [q1_min, q1_max] and
// 2(q1 - 1) < q2 < -2(q1 + 1), keeping those with the Salem root pattern.
std::vector<Salem4> enum_salem4(long q1_min, long q1_max);

} // namespace nkcert
