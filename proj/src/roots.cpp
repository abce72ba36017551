#include "nkcert/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nkcert/error.hpp"

namespace nkcert {

std::complex<double> horner(std::span<double const> coeffs, std::complex<double> z)
{
    std::complex<double> acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

namespace {

std::complex<double> horner_derivative(std::span<double const> c, std::complex<double> z)
{
    std::complex<double> acc = 0;
    for (std::size_t k = c.size() - 1; k >= 1; --k)
        acc = acc * z + static_cast<double>(k) * c[k];
    return acc;
}

} // namespace

std::vector<std::complex<double>> durand_kerner(std::span<double const> coeffs,
                                                RootFinderOptions const & opts)
{
    using cplx = std::complex<double>;
    if (coeffs.size() < 2 || coeffs.back() == 0.0)
        throw Error(ErrorCode::RootFindingFailed, "polynomial must have degree >= 1");
    int const n = static_cast<int>(coeffs.size()) - 1;

    std::vector<double> a(coeffs.begin(), coeffs.end());
    double const lead = a.back();
    for (auto & c : a)
        c /= lead;

    double radius = 0.0;
    for (int k = 0; k < n; ++k)
        radius = std::max(radius, std::abs(a[k]));
    radius += 1.0;

    std::vector<cplx> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

    bool converged = false;
    for (int iter = 0; iter < opts.max_iterations && !converged; ++iter) {
        double max_step = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != k)
                    den *= z[k] - z[j];
            if (den == cplx(0.0))
                den = cplx(1e-300);
            cplx const step = horner(a, z[k]) / den;
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
        }
        if (!std::isfinite(max_step))
            break;
        converged = max_step < opts.step_tolerance;
    }
    if (!converged)
        throw Error(ErrorCode::RootFindingFailed,
                    "Durand-Kerner iteration did not converge within "
                    + std::to_string(opts.max_iterations) + " iterations");

    for (auto & r : z) {
        for (int i = 0; i < opts.polish_steps; ++i) {
            cplx const d = horner_derivative(a, r);
            if (d == cplx(0.0))
                break;
            r -= horner(a, r) / d;
        }
    }
    return z;
}

} // namespace nkcert
