#pragma once

// Exact arithmetic in K = Q[X]/<P> with respect to a chosen integral basis,
// plus the numeric embeddings of K into C.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "nkcert/poly.hpp"

namespace nkcert {

// Row-major exact matrix.
using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix identity_matrix(int n);
RatMatrix multiply(RatMatrix const & a, RatMatrix const & b);
std::vector<Rational> multiply(RatMatrix const & a, std::vector<Rational> const & v);
std::optional<RatMatrix> invert(RatMatrix const & a);

// Some solution x of a x = b, or nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve_exact(RatMatrix const & a, std::vector<Rational> const & b);

// Faddeev-LeVerrier characteristic polynomial det(X I - a), monic.
RatPoly characteristic_polynomial(RatMatrix const & a);

struct NumberField {
    IntPoly min_poly;
    // column j holds the power-basis coordinates of the j-th integral basis element
    RatMatrix basis;
    RatMatrix basis_inv;
    bool power_basis = true;
    // signature from an exact Sturm count
    int s = 0;
    int t = 0;
    std::optional<std::int64_t> irreducibility_witness;

    int degree() const { return min_poly.degree(); }
    bool certified_irreducible() const { return irreducibility_witness.has_value(); }
};

struct FieldElement {
    std::vector<Rational> coords;

    bool is_integral() const;
    bool operator==(FieldElement const & o) const { return coords == o.coords; }
};

// Basis elements are given as power-basis coordinate vectors; nullopt means the
// power basis. Throws DegreeTooSmall, NonMonic, NotSquarefree, SingularBasis,
// BasisMissingOne, BasisNotRing.
NumberField validate_field(IntPoly const & p, std::optional<std::vector<std::vector<Rational>>> const & basis = std::nullopt);

FieldElement field_one(NumberField const & f);
FieldElement field_generator(NumberField const & f);
FieldElement from_integer(NumberField const & f, long v);
FieldElement from_power(NumberField const & f, RatPoly const & p);
FieldElement from_coords(std::vector<long> const & coords);
RatPoly to_power(NumberField const & f, FieldElement const & x);

FieldElement add(FieldElement const & a, FieldElement const & b);
FieldElement sub(FieldElement const & a, FieldElement const & b);
FieldElement mul(FieldElement const & a, FieldElement const & b, NumberField const & f);
FieldElement inverse(FieldElement const & a, NumberField const & f);
FieldElement power(FieldElement const & a, long e, NumberField const & f);

// Column j = coordinates of x * b_j in the integral basis.
RatMatrix multiplication_matrix(FieldElement const & x, NumberField const & f);
RatPoly char_poly_mult(FieldElement const & x, NumberField const & f);
Rational field_norm(FieldElement const & x, NumberField const & f);

// Squarefree part of the characteristic polynomial, cross-checked against the
// first linear dependency among 1, x, x^2, ... (OracleMismatch on disagreement).
RatPoly min_poly_elt(FieldElement const & x, NumberField const & f);
RatPoly min_poly_by_dependency(FieldElement const & x, NumberField const & f);

struct EmbeddingTable {
    // sigma_1 .. sigma_s real, descending; sigma_{s+1} .. sigma_{s+t} with Im > 0
    // by ascending real part; sigma_{s+t+i} = conj(sigma_{s+i}).
    std::vector<std::complex<double>> values;
    int s = 0;
    int t = 0;
    double tol = 1e-9;
    double max_residual = 0.0;

    int degree() const { return static_cast<int>(values.size()); }
};

// Throws RootFindingFailed, AmbiguousRealComplexSplit.
EmbeddingTable embeddings(NumberField const & f, double tol = 1e-9);

std::vector<std::complex<double>> sigma_K(NumberField const & f, FieldElement const & x, EmbeddingTable const & e);

} // namespace nkcert
