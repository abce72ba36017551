#include <doctest.h>

#include "nkcert/config.hpp"
#include "nkcert/error.hpp"

using namespace nkcert;

namespace {

std::string const base = R"(
[field]
min_poly = [1, -1, -1, -1, 1]

[units]
candidates = [[0, 1, 0, 0], [1, -1, 0, 0]]

[subgroup]
b = 1
)";

ErrorCode code_of(std::string const & text)
{
    try {
        parse_config(text);
    } catch (Error const & err) {
        return err.code();
    }
    FAIL("expected an error");
    return ErrorCode::NotFound;
}

} // namespace

TEST_CASE("minimal config and defaults")
{
    auto const c = parse_config(base, "salem");
    CHECK(c.min_poly == IntPoly{1, -1, -1, -1, 1});
    CHECK_FALSE(c.basis.has_value());
    CHECK(c.candidates.size() == 2);
    CHECK(c.mode == Mode::Construction);
    CHECK(c.b == 1);
    CHECK_FALSE(c.words.has_value());
    CHECK(c.window == 64);
    CHECK(c.samples == 1000);
    CHECK(c.seed == 42);
    CHECK(c.tol.zero == 1e-9);
    CHECK(c.certificate_path == "salem.cert.json");
    CHECK(c.svg_path == "salem.svg");
}

TEST_CASE("full config")
{
    auto const c = parse_config(R"(
[field]
min_poly = [1, -1, -1, -1, 1]
basis = [[1, 0, 0, 0], [0, 1, 0, 0], ["1/2", "1/2", 0, 0], [0, 0, 0, 1]]

[units]
candidates = [[0, 1, 0, 0]]

[subgroup]
mode = "ot"
b = 2
words = [[1], [2]]

[checks]
window = 8
samples = 50
seed = 7
assumption_c_window = 4
candidate_window = 3
injectivity_samples = 100
injectivity_height = 5

[tolerances]
zero = 1e-10
separation = 1e-5
tiling = 1e-6

[fan]
cones = [[[1.0, 1.0], [2, 0.5]], [[1, -1]]]

[output]
certificate = "out/c.json"
svg = "out/p.svg"
)");
    REQUIRE(c.basis.has_value());
    CHECK((*c.basis)[2][0] == Rational(1, 2));
    CHECK(c.mode == Mode::OT);
    CHECK(c.words->size() == 2);
    CHECK(c.window == 8);
    CHECK(c.samples == 50);
    CHECK(c.seed == 7);
    CHECK(c.assumption_c_window == 4);
    CHECK(c.candidate_window == 3);
    CHECK(c.injectivity_samples == 100);
    CHECK(c.injectivity_height == 5);
    CHECK(c.tol.zero == 1e-10);
    CHECK(c.tol.separation == 1e-5);
    CHECK(c.tol.tiling == 1e-6);
    REQUIRE(c.cones.has_value());
    CHECK((*c.cones)[0][1] == std::vector<double>{2.0, 0.5});
    CHECK((*c.cones)[1].size() == 1);
    CHECK(c.certificate_path == "out/c.json");
}

TEST_CASE("unknown keys and bad values are rejected")
{
    CHECK(code_of(base + "verbose = true\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[checks]\nwindw = 3\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[extra]\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[checks]\nwindow = -1\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[checks]\nsamples = 1.5\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[tolerances]\nzero = 0\n") == ErrorCode::ConfigError);
    CHECK(code_of("[field]\nmin_poly = [1, -1, -1, -1, 1]\n") == ErrorCode::ConfigError);
    CHECK(code_of("[subgroup]\nb = 1\n") == ErrorCode::ConfigError);
    CHECK(code_of("[field]\nmin_poly = [1, -1, -1, -1, 1]\nbasis = \"lll\"\n[subgroup]\nb = 1\n")
          == ErrorCode::ConfigError);
    CHECK(code_of("[field]\nmin_poly = [1, 0]\n[units]\ncandidates = [[1, 0, 0]]\n[subgroup]\nb = 1\n")
          == ErrorCode::ConfigError);
    CHECK(code_of(base + "words = [[1, 0], [0, 1]]\n") == ErrorCode::ConfigError);
    CHECK(code_of("[field]\nmin_poly = [1, -1, -1, -1, 1]\n[subgroup]\nb = 1\nmode = \"hopf\"\n")
          == ErrorCode::ConfigError);
    CHECK(code_of("[field\nmin_poly = 1") == ErrorCode::ConfigError);
}

TEST_CASE("missing config file")
{
    CHECK_THROWS_AS(load_config("/nonexistent/x.toml"), Error);
}
