#pragma once

// Rational cones in R^s = E / H~, the action of W on them, quotient fans and
// their checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nkcert/ambient.hpp"
#include "nkcert/number_field.hpp"
#include "nkcert/units.hpp"

namespace nkcert {

struct Ray {
    std::vector<double> dir;
    // lattice preimage, positively proportional to dir under the real embeddings
    std::optional<FieldElement> tag;
};

struct Cone {
    std::vector<Ray> rays;

    int size() const { return static_cast<int>(rays.size()); }
};

// Rays compared after scaling each to max-abs 1, componentwise relative tolerance.
bool same_direction(std::vector<double> const & a, std::vector<double> const & b, double tol = 1e-9);
bool same_cone(Cone const & a, Cone const & b, double tol = 1e-9);

// Nonnegative coefficients expressing x in the cone, or nullopt.
std::optional<std::vector<double>> cone_coefficients(Cone const & c, std::vector<double> const & x,
                                                     double tol = 1e-9);
bool cone_contains(Cone const & c, std::vector<double> const & x, double tol = 1e-9);

// (a intersect b) \ {0} nonempty.
bool cones_overlap(Cone const & a, Cone const & b);

// a intersect b is the cone over their shared rays, and a face of both.
bool meet_in_common_face(Cone const & a, Cone const & b);

struct OmegaCone {
    int s = 0;
    // coordinates spanning L; N is cut out by their vanishing
    std::vector<int> l_coords;
    // orientation of L_+ per L coordinate
    std::vector<int> signs;

    int h() const { return s - static_cast<int>(l_coords.size()); }
    bool in_omega(std::vector<double> const & x, double tol = 0.0) const;
    bool in_l_plus(std::vector<double> const & x, double tol = 0.0) const;
    // Omega \ L_+
    bool in_support_region(std::vector<double> const & x, double tol = 0.0) const;
};

OmegaCone omega_for(SubgroupW const & w, int s);

// Diagonal action of g on R^s; tags multiplied exactly.
Ray act(NumberField const & f, UnitElt const & g, Ray const & r);
Cone act(NumberField const & f, UnitElt const & g, Cone const & c);

// Diagonal factors (sigma_1(g), ..., sigma_s(g)) of a word in the generators.
std::vector<double> word_factors(SubgroupW const & w, std::vector<long> const & word, int s);
Cone act_word(SubgroupW const & w, std::vector<long> const & word, Cone const & c, int s);

struct OrbitCone {
    int base = 0;
    std::vector<long> word;
    Cone cone;
};

struct QuotientFan {
    int s = 0;
    std::vector<Cone> sigma;
    SubgroupW w;
    OmegaCone omega;
    int window = 64;

    // all g.sigma_i with exponents in [-window, window] (untagged)
    std::vector<OrbitCone> orbit() const;
    std::vector<std::vector<long>> words() const;
};

// Element with small integral coordinates whose first s embeddings are
// positively proportional to dir.
std::optional<FieldElement> find_tag(NumberField const & f, EmbeddingTable const & e, std::vector<double> const & dir,
                                     int window = 2);

// Sigma = {cone{r, g r}, cone{r', g r'}} for r = (1, 1) and r' with the N
// coordinate negated. Throws WrongSignature.
QuotientFan build_fan_s2(NumberField const & f, EmbeddingTable const & e, SubgroupW const & w, int window = 64);

struct ActionReport {
    bool free = false;
    bool properly_discontinuous = false;
    bool invariant = false;
    bool fan_property = false;
    // words g != 1 with g sigma_i meeting sigma_j away from 0
    std::vector<std::vector<long>> overlap_words;
    std::vector<std::string> witnesses;
};

ActionReport check_action(QuotientFan const & fan);

struct Location {
    OrbitCone cone;
    bool interior = false;
};

// Every enumerated cone containing x.
std::vector<Location> locate(QuotientFan const & fan, std::vector<double> const & x);

struct SupportReport {
    std::size_t samples = 0;
    std::size_t covered = 0;
    // points lying in two relative interiors, or in several cones without a shared face
    std::size_t conflicts = 0;
    std::size_t outside_region = 0;
};

// Uniform points in [-1, 1]^s restricted to Omega \ L_+.
SupportReport support_check(QuotientFan const & fan, std::size_t samples, std::uint64_t seed);

struct CollapseReport {
    double fitted_n = 0.0;
    // min over samples and k of ln(r_k) - ln(N^k delta)
    double min_margin = 0.0;
    int k_max = 0;
    std::size_t samples = 0;
};

// Fits N with g^k C_delta inside C_{N^k delta}, C_delta = {sum_L v^2 >= delta sum_N v^2}.
// Throws CollapseFailed when N <= 1.
CollapseReport cone_collapse_check(OmegaCone const & omega, double delta, UnitElt const & g, int k_max,
                                   std::size_t samples = 200, std::uint64_t seed = 1);

struct DivisorReport {
    int quotient_dimension = 0;
    std::size_t star_cones = 0;
    std::vector<std::vector<double>> quotient_rays;
    bool complete = false;
    std::string kind;
    std::optional<double> elliptic_residual;
    std::vector<std::complex<double>> tag_embedding;
};

// Star of the ray in the enumerated fan, projected along the ray. Throws RayNotInFan.
DivisorReport divisor_certificate(QuotientFan const & fan, Ray const & ray, NumberField const & f,
                                  EmbeddingTable const & e, std::size_t directions = 200, std::uint64_t seed = 1);

} // namespace nkcert
