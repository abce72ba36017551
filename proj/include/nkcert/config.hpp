#pragma once

// Run configuration, read from TOML. Unknown tables and keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nkcert/poly.hpp"
#include "nkcert/units.hpp"

namespace nkcert {

struct Tolerances {
    // imaginary parts, invariant pairs, elliptic residual
    double zero = 1e-9;
    // minimum separation of projected lattice points
    double separation = 1e-6;
    // slack of the tiling witnesses
    double tiling = 1e-7;
};

struct RunConfig {
    IntPoly min_poly;
    // integral basis as power-basis coordinate columns; nullopt = power basis
    std::optional<std::vector<std::vector<Rational>>> basis;
    // integral-basis coordinates of unit candidates
    std::vector<std::vector<long>> candidates;

    Mode mode = Mode::Construction;
    int b = 1;
    // explicit generator words over the candidates; otherwise searched
    std::optional<std::vector<std::vector<long>>> words;

    int window = 64;
    std::size_t samples = 1000;
    std::uint64_t seed = 42;
    int assumption_c_window = 10;
    int candidate_window = 2;
    std::size_t injectivity_samples = 1000;
    long injectivity_height = 20;
    Tolerances tol;

    // Sigma as lists of rays in R^s; generated when absent (s = 2, b = 1)
    std::optional<std::vector<std::vector<std::vector<double>>>> cones;

    std::filesystem::path certificate_path;
    std::filesystem::path svg_path;
};

// Throws ConfigError. `name` is used for default output paths and messages.
RunConfig parse_config(std::string const & text, std::string const & name = "run");
RunConfig load_config(std::filesystem::path const & path);

} // namespace nkcert
