#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "nkcert/ambient.hpp"
#include "nkcert/error.hpp"

using namespace nkcert;
using cplx = std::complex<double>;

namespace {

struct Ctx {
    NumberField f;
    EmbeddingTable e;
    AmbientFrame fr;
};

Ctx make(IntPoly const & p)
{
    auto f = validate_field(p);
    auto e = embeddings(f);
    auto fr = build_frame(f, e);
    return {f, e, fr};
}

cplx salem_beta()
{
    double const gp = (1.0 - std::sqrt(13.0)) / 2.0;
    return {gp / 2.0, std::sqrt(4.0 - gp * gp) / 2.0};
}

// Power coordinates of the Lagrange element P(X) / ((X - r) P'(r)), which
// takes the value 1 at r and 0 at the other roots.
std::vector<cplx> lagrange_coords(std::vector<double> const & p, cplx r)
{
    int const n = static_cast<int>(p.size()) - 1;
    std::vector<cplx> q(n);
    cplx acc = p[n];
    for (int k = n - 1; k >= 0; --k) {
        q[k] = acc;
        acc = acc * r + p[k];
    }
    cplx d = 0;
    for (int k = n - 1; k >= 0; --k)
        d = d * r + q[k];
    for (auto & c : q)
        c /= d;
    return q;
}

} // namespace

TEST_CASE("h solves B_K h = e_n and agrees with the Lagrange element")
{
    auto c = make(testing::salem_poly());
    Eigen::VectorXcd e4 = Eigen::VectorXcd::Zero(4);
    e4(3) = 1.0;
    CHECK((c.fr.BK * c.fr.H.col(0) - e4).norm() < 1e-9);

    auto const oracle = lagrange_coords({1, -1, -1, -1, 1}, std::conj(salem_beta()));
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(c.fr.H(k, 0) - oracle[k]) < 1e-9);
}

TEST_CASE("candidate tuple (-b, b(1-b), conj(b)-1, 1) is proportional to h but not normalized")
{
    auto c = make(testing::salem_poly());
    cplx const b = salem_beta();
    Eigen::VectorXcd cand(4);
    cand << -b, b * (1.0 - b), std::conj(b) - 1.0, 1.0;
    auto const cmp = compare_to_h(c.fr, cand);
    CHECK(cmp.proportional);
    CHECK_FALSE(cmp.normalized);
    // the ratio is forced by the last coordinate
    CHECK(std::abs(cmp.ratio - c.fr.H(3, 0)) < 1e-9);
    CHECK(std::abs(c.fr.H(3, 0) - 1.0) > 0.1);
}

TEST_CASE("change of basis to B' is real")
{
    for (auto const & p : {testing::salem_poly(), testing::quintic_poly(), IntPoly{-1, -1, 0, 1}, IntPoly{2, 0, 0, 0, 0, 0, 1}}) {
        auto c = make(p);
        CHECK(c.fr.max_imag_P < 1e-9);
        for (int j = 0; j < c.fr.s; ++j)
            CHECK(c.fr.P.col(j).imag().cwiseAbs().maxCoeff() < 1e-9);
        CHECK(c.fr.condition < 1e8);
        CHECK(s1_intersection_nullity(c.fr) == 0);
    }
}

TEST_CASE("degenerate frames are rejected")
{
    auto f = validate_field(IntPoly{-1, -1, 1});
    auto e = embeddings(f);
    try {
        build_frame(f, e);
        FAIL("expected TrivialH");
    } catch (Error const & err) {
        CHECK(err.code() == ErrorCode::TrivialH);
    }

    auto g = validate_field(IntPoly{1, 10000000000L, 0, 1});
    auto eg = embeddings(g);
    try {
        build_frame(g, eg);
        FAIL("expected IllConditioned");
    } catch (Error const & err) {
        CHECK(err.code() == ErrorCode::IllConditioned);
    }
}

TEST_CASE("projections along H and H~ separate lattice points")
{
    for (auto const & p : {testing::salem_poly(), testing::quintic_poly()}) {
        auto c = make(p);
        auto const a = check_pi_h_injective(c.fr, 1000, 20, 11);
        CHECK(a.samples == 1000);
        CHECK(a.min_separation > 1e-6);
        auto const b = check_pi_htilde_injective(c.fr, 1000, 20, 12);
        CHECK(b.min_separation > 1e-6);
    }
    auto c = make(testing::salem_poly());
    auto const zero = check_projection_injective(c.fr, {{0, 0, 0, 0}}, Projection::H);
    CHECK(zero.samples == 1);
    CHECK_FALSE(zero.closest.has_value());
    try {
        check_projection_injective(c.fr, {{1, 2, 3, 4}, {1, 2, 3, 4}}, Projection::Htilde);
        FAIL("expected InjectivityViolation");
    } catch (Error const & err) {
        CHECK(err.code() == ErrorCode::InjectivityViolation);
    }
}

TEST_CASE("H~ is spanned by the last 2t columns of B'")
{
    auto c = make(testing::salem_poly());
    Eigen::MatrixXcd const img = c.fr.BK * c.fr.Htilde.cast<cplx>();
    // B' columns 3 and 4, up to a real change of basis
    Eigen::MatrixXcd const target = c.fr.Bprime.rightCols(2);
    Eigen::MatrixXcd const coef = target.colPivHouseholderQr().solve(img);
    CHECK((target * coef - img).norm() < 1e-9);
    CHECK(coef.imag().cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ord map")
{
    auto c = make(testing::salem_poly());
    CHECK(ord_map(Eigen::VectorXcd::Ones(4)).norm() == 0.0);
    CHECK((iota(c.fr, Eigen::VectorXcd::Zero(1)) - Eigen::VectorXcd::Ones(4)).norm() < 1e-15);
    CHECK(distance_to_htilde(c.fr, ord_map(iota(c.fr, Eigen::VectorXcd::Ones(1)))) < 1e-9);

    Eigen::VectorXcd z(2);
    z << 1.0, 0.0;
    CHECK_THROWS_AS(ord_map(z), Error);

    std::mt19937 rng(5);
    std::normal_distribution<double> d;
    Eigen::MatrixXd span(4, 60);
    for (int k = 0; k < 60; ++k) {
        Eigen::VectorXcd w(1);
        w << cplx(d(rng), d(rng));
        Eigen::VectorXcd const a = iota(c.fr, w);
        Eigen::VectorXcd b(4);
        for (int i = 0; i < 4; ++i)
            b(i) = cplx(d(rng), d(rng));
        Eigen::VectorXd const oa = ord_map(a);
        CHECK(distance_to_htilde(c.fr, oa) < 1e-9);
        CHECK((ord_map(a.cwiseProduct(b)) - oa - ord_map(b)).norm() < 1e-12);
        span.col(k) = oa;
    }
    CHECK(numeric_rank(span) == 2);
}

TEST_CASE("iota exponents and the conjugation check")
{
    auto c = make(testing::salem_poly());
    auto a = make_unit(c.f, c.e, field_generator(c.f));
    auto u = make_unit(c.f, c.e, sub(field_one(c.f), field_generator(c.f)));
    auto p = iota_params(c.fr, c.f, {a, u});
    CHECK(p.exponents.rows() == 1);
    CHECK((p.exponents.row(0).transpose() - c.fr.H.col(0)).norm() == 0.0);
    CHECK(p.conjugation_residual < 1e-9);
    CHECK(std::abs(a.sigma[3] - std::conj(salem_beta())) < 1e-9);

    UnitElt bad = a;
    std::swap(bad.sigma[2], bad.sigma[3]);
    try {
        iota_params(c.fr, c.f, {bad});
        FAIL("expected ConjugationCheckFailed");
    } catch (Error const & err) {
        CHECK(err.code() == ErrorCode::ConjugationCheckFailed);
    }
}

TEST_CASE("multiplication by units is block diagonal in B'")
{
    for (auto const & p : {testing::salem_poly(), testing::quintic_poly()}) {
        auto c = make(p);
        std::vector<UnitElt> units;
        for (long k : {0L, -1L, 1L}) {
            try {
                units.push_back(make_unit(c.f, c.e, add(field_generator(c.f), from_integer(c.f, k))));
            } catch (Error const &) {
            }
        }
        REQUIRE(units.size() >= 2);
        std::mt19937 rng(9);
        std::uniform_int_distribution<long> d(-3, 3);
        for (int it = 0; it < 20; ++it) {
            std::vector<long> ex;
            for (std::size_t k = 0; k < units.size(); ++k)
                ex.push_back(d(rng));
            auto g = unit_word(c.f, c.e, units, ex);
            auto r = block_structure(c.fr, c.f, g);
            double const scale = std::max(1.0, matrix_in_bprime(c.fr, c.f, g).cwiseAbs().maxCoeff());
            CHECK(r.off_block < 1e-9 * scale);
            CHECK(r.imag < 1e-9 * scale);
            CHECK(r.quotient_diag < 1e-9 * scale);
        }
    }
}
