#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nkcert {

struct RootFinderOptions {
    int max_iterations = 1000;
    double step_tolerance = 1e-13;
    int polish_steps = 3;
};

// Simultaneous Weierstrass (Durand-Kerner) iteration on a polynomial with
// coefficients low degree first. Initial guesses sit on the circle of radius
// 1 + max|a_k / a_n|. Throws RootFindingFailed when the step size does not
// drop below tolerance (relative to max(1, |z|)) within max_iterations.
std::vector<std::complex<double>> durand_kerner(std::span<double const> coeffs,
                                                RootFinderOptions const & opts = {});

std::complex<double> horner(std::span<double const> coeffs, std::complex<double> z);

} // namespace nkcert
