#pragma once

// Linear algebra on C^n around the lattice sigma_K(O_K): the bases B_K and B',
// the subspaces H and H~, the iota exponent data and the ord map.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nkcert/number_field.hpp"
#include "nkcert/units.hpp"

namespace nkcert {

struct AmbientFrame {
    int s = 0;
    int t = 0;
    // columns: sigma_K of the integral basis
    Eigen::MatrixXcd BK;
    // columns e_1..e_s, e_{s+j} + e_{s+t+j}, -i (e_{s+j} - e_{s+t+j})
    Eigen::MatrixXcd Bprime;
    // B_K^{-1} B'
    Eigen::MatrixXcd P;
    // column i solves B_K h = e_{s+t+i}
    Eigen::MatrixXcd H;
    // Re h_1, Im h_1, Re h_2, ...
    Eigen::MatrixXd Htilde;
    double condition = 0.0;
    double max_imag_P = 0.0;

    int degree() const { return s + 2 * t; }
};

// Throws TrivialH (t = 0) and IllConditioned (condition number > 1e8).
AmbientFrame build_frame(NumberField const & f, EmbeddingTable const & e);

struct SeparationReport {
    std::size_t samples = 0;
    double min_separation = 0.0;
    // indices of the closest pair, if any
    std::optional<std::pair<std::size_t, std::size_t>> closest;
};

enum class Projection { H, Htilde };

// Minimum pairwise distance of the projections of the given lattice points
// (integral-basis coordinates). Throws InjectivityViolation below 1e-6.
SeparationReport check_projection_injective(AmbientFrame const & fr, std::vector<std::vector<long>> const & points,
                                            Projection which);

// N distinct random lattice points with coordinates in [-height, height].
std::vector<std::vector<long>> sample_lattice_points(int n, std::size_t count, long height, std::uint64_t seed);

SeparationReport check_pi_h_injective(AmbientFrame const & fr, std::size_t samples = 1000, long height = 20,
                                      std::uint64_t seed = 1);
SeparationReport check_pi_htilde_injective(AmbientFrame const & fr, std::size_t samples = 1000, long height = 20,
                                           std::uint64_t seed = 1);

// -(1/2 pi) (ln|z_1|, ..., ln|z_n|). Throws ZeroCoordinate.
Eigen::VectorXd ord_map(Eigen::VectorXcd const & z);

// iota(w)_k = exp(2 pi i sum_i w_i h_{i,k}) for w in C^t.
Eigen::VectorXcd iota(AmbientFrame const & fr, Eigen::VectorXcd const & w);

// Distance of v from span(H~), relative to max(1, |v|).
double distance_to_htilde(AmbientFrame const & fr, Eigen::VectorXd const & v);

struct IotaParams {
    // t x n, row i = coordinates of h_i
    Eigen::MatrixXcd exponents;
    // worst |M_g h_i - sigma_{s+t+i}(g) h_i| over the checked generators
    double conjugation_residual = 0.0;
};

// Throws ConjugationCheckFailed when the residual exceeds 1e-9.
IotaParams iota_params(AmbientFrame const & fr, NumberField const & f, std::vector<UnitElt> const & generators = {});

struct BlockReport {
    double off_block = 0.0;
    double imag = 0.0;
    // deviation of the E/H~ block from diag(sigma_1(g), ..., sigma_s(g))
    double quotient_diag = 0.0;
};

// Matrix of multiplication by g in basis B'.
Eigen::MatrixXcd matrix_in_bprime(AmbientFrame const & fr, NumberField const & f, UnitElt const & g);
BlockReport block_structure(AmbientFrame const & fr, NumberField const & f, UnitElt const & g);

// Dimension of {x real : B_K x has vanishing first s + t coordinates}.
int s1_intersection_nullity(AmbientFrame const & fr);

struct HComparison {
    bool proportional = false;
    bool normalized = false;
    std::complex<double> ratio;
    double residual = 0.0;
};

// Compares a candidate coordinate vector with h_i.
HComparison compare_to_h(AmbientFrame const & fr, Eigen::VectorXcd const & candidate, int i = 0);

// Numeric rank with tolerance 1e-9 scaled by the largest singular value.
int numeric_rank(Eigen::MatrixXd const & m);

} // namespace nkcert
