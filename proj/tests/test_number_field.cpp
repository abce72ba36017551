#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "nkcert/error.hpp"

using namespace nkcert;
using namespace nkcert::testing;

namespace {

FieldElement random_element(std::mt19937_64 & rng, int n, int height)
{
    std::uniform_int_distribution<long> d(-height, height);
    std::vector<long> c(n);
    for (auto & x : c)
        x = d(rng);
    return from_coords(c);
}

} // namespace

TEST_CASE("validate_field accepts the Salem quartic with power basis")
{
    NumberField f = salem_field();
    CHECK(f.degree() == 4);
    CHECK(f.s == 2);
    CHECK(f.t == 1);
    CHECK(f.power_basis);
    CHECK(f.certified_irreducible());
}

TEST_CASE("validate_field flags reducible polynomials without a witness")
{
    NumberField f = validate_field(IntPoly{-1, 0, 1});
    CHECK_FALSE(f.certified_irreducible());
    CHECK(f.s == 2);
}

TEST_CASE("validate_field cubic witness")
{
    NumberField f = validate_field(IntPoly{-1, -1, 0, 1});
    CHECK(f.irreducibility_witness == 2);
    CHECK(f.s == 1);
    CHECK(f.t == 1);
}

TEST_CASE("validate_field errors")
{
    auto code_of = [](auto && fn) {
        try {
            fn();
        } catch (Error const & e) {
            return e.code();
        }
        return ErrorCode::ConfigError;
    };
    CHECK(code_of([] { validate_field(IntPoly{1, 0, 2}); }) == ErrorCode::NonMonic);
    CHECK(code_of([] { validate_field(IntPoly{1, 2, 1}); }) == ErrorCode::NotSquarefree);
    CHECK(code_of([] { validate_field(IntPoly{1, 1}); }) == ErrorCode::DegreeTooSmall);

    using Basis = std::vector<std::vector<Rational>>;
    Basis no_one{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 0, 0}};
    CHECK(code_of([&] { validate_field(salem_poly(), no_one); }) == ErrorCode::BasisMissingOne);
    Basis half{{1, 0, 0, 0}, {0, Rational(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    CHECK(code_of([&] { validate_field(salem_poly(), half); }) == ErrorCode::BasisNotRing);
    Basis singular{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
    CHECK(code_of([&] { validate_field(salem_poly(), singular); }) == ErrorCode::SingularBasis);

    Basis shifted{{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    NumberField f = validate_field(salem_poly(), shifted);
    CHECK_FALSE(f.power_basis);
    // alpha = (alpha + 1) - 1
    CHECK(field_generator(f) == from_coords({-1, 1, 0, 0}));
}

TEST_CASE("multiplication")
{
    NumberField f = salem_field();
    FieldElement alpha = field_generator(f);
    FieldElement alpha_inv = from_coords({1, 1, 1, -1});
    CHECK(mul(alpha, alpha_inv, f) == field_one(f));
    CHECK(inverse(alpha, f) == alpha_inv);
    CHECK(mul(alpha, alpha, f) == from_coords({0, 0, 1, 0}));
    FieldElement x = from_coords({3, -2, 7, 1});
    CHECK(mul(field_one(f), x, f) == x);
    CHECK(power(alpha, -3, f) == mul(mul(alpha_inv, alpha_inv, f), alpha_inv, f));
}

TEST_CASE("multiplication matrix of alpha is the companion matrix")
{
    NumberField f = salem_field();
    RatMatrix m = multiplication_matrix(field_generator(f), f);
    RatMatrix companion{{0, 0, 0, -1}, {1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}};
    CHECK(m == companion);
}

TEST_CASE("characteristic and minimal polynomials")
{
    NumberField f = salem_field();
    FieldElement alpha = field_generator(f);
    CHECK(char_poly_mult(alpha, f) == f.min_poly.to_rat());
    CHECK(min_poly_elt(alpha, f) == f.min_poly.to_rat());

    // P(1 - X) expanded: X^4 - 3X^3 + 2X^2 + 2X - 1
    FieldElement one_minus = sub(field_one(f), alpha);
    RatPoly expected{-1, 2, 2, -3, 1};
    CHECK(char_poly_mult(one_minus, f) == expected);
    CHECK(min_poly_elt(one_minus, f) == expected);

    FieldElement five = from_integer(f, 5);
    CHECK(char_poly_mult(five, f) == RatPoly{-5, 1} * RatPoly{-5, 1} * RatPoly{-5, 1} * RatPoly{-5, 1});
    CHECK(min_poly_elt(five, f) == RatPoly{-5, 1});
    CHECK(field_norm(alpha, f) == 1);
    CHECK(field_norm(one_minus, f) == -1);
}

TEST_CASE("minimal polynomial divides the characteristic polynomial")
{
    std::mt19937_64 rng(7);
    for (NumberField const & f : {salem_field(), quintic_field()}) {
        for (int i = 0; i < 40; ++i) {
            FieldElement x = random_element(rng, f.degree(), 4);
            RatPoly m = min_poly_elt(x, f);
            CHECK((char_poly_mult(x, f) % m).is_zero());
            CHECK(m == min_poly_by_dependency(x, f));
        }
    }
}

TEST_CASE("embeddings of the Salem quartic")
{
    NumberField f = salem_field();
    EmbeddingTable e = embeddings(f);
    REQUIRE(e.s == 2);
    REQUIRE(e.t == 1);
    double const s1 = e.values[0].real();
    CHECK(s1 >= 1.722);
    CHECK(s1 < 1.723);
    CHECK(std::abs(std::abs(e.values[2]) - 1.0) < 1e-9);
    CHECK(std::abs(e.values[2].real() - (1.0 - e.values[0].real() - e.values[1].real()) / 2.0) < 1e-9);
    CHECK(e.values[2].imag() > 0);
    CHECK(e.values[3] == std::conj(e.values[2]));

    std::complex<double> prod = 1.0;
    for (auto const & z : e.values)
        prod *= z;
    CHECK(std::abs(prod - 1.0) < 1e-9);
}

TEST_CASE("embeddings of the quintic and the cubic")
{
    EmbeddingTable q = embeddings(quintic_field());
    CHECK(q.s == 3);
    CHECK(q.t == 1);
    CHECK(q.values[0].real() > q.values[1].real());
    CHECK(q.values[1].real() > q.values[2].real());
    std::complex<double> prod = 1.0;
    for (auto const & z : q.values)
        prod *= z;
    // (-1)^5 * constant term
    CHECK(std::abs(prod + 1.0) < 1e-9);

    EmbeddingTable c = embeddings(validate_field(IntPoly{-1, -1, 0, 1}));
    CHECK(c.s == 1);
    CHECK(c.t == 1);
}

TEST_CASE("sigma_K")
{
    NumberField f = salem_field();
    EmbeddingTable e = embeddings(f);
    auto ones = sigma_K(f, field_one(f), e);
    for (auto const & z : ones)
        CHECK(std::abs(z - 1.0) < 1e-15);
    auto a = sigma_K(f, field_generator(f), e);
    auto a1 = sigma_K(f, add(field_generator(f), field_one(f)), e);
    for (int i = 0; i < 4; ++i) {
        CHECK(a[i] == e.values[i]);
        CHECK(std::abs(a1[i] - (a[i] + 1.0)) < 1e-12);
    }
}

TEST_CASE("sigma_K is multiplicative on random elements")
{
    std::mt19937_64 rng(11);
    for (NumberField const & f : {salem_field(), quintic_field()}) {
        EmbeddingTable e = embeddings(f);
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            FieldElement x = random_element(rng, f.degree(), 10);
            FieldElement y = random_element(rng, f.degree(), 10);
            auto sx = sigma_K(f, x, e), sy = sigma_K(f, y, e), sxy = sigma_K(f, mul(x, y, f), e);
            for (int k = 0; k < f.degree(); ++k) {
                double const scale = std::max(1.0, std::abs(sxy[k]));
                worst = std::max(worst, std::abs(sxy[k] - sx[k] * sy[k]) / scale);
            }
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("images of the integral basis are independent")
{
    NumberField f = salem_field();
    EmbeddingTable e = embeddings(f);
    Eigen::MatrixXcd bk(4, 4);
    for (int j = 0; j < 4; ++j) {
        FieldElement bj{std::vector<Rational>(4)};
        bj.coords[j] = 1;
        auto col = sigma_K(f, bj, e);
        for (int i = 0; i < 4; ++i)
            bk(i, j) = col[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(bk);
    auto sv = svd.singularValues();
    MESSAGE("condition number of B_K: " << sv(0) / sv(3));
    CHECK(sv(3) > 1e-6);
}
