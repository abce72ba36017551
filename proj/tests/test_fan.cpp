#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "nkcert/error.hpp"
#include "nkcert/fan.hpp"

using namespace nkcert;

namespace {

double alpha_closed_form()
{
    double const g = (1.0 + std::sqrt(13.0)) / 2.0;
    return (g + std::sqrt(g * g - 4.0)) / 2.0;
}

struct Setup {
    NumberField f;
    EmbeddingTable e;
    SubgroupW w;
};

Setup salem_setup()
{
    auto f = testing::salem_field();
    auto e = embeddings(f);
    SubgroupW w;
    w.generators.push_back(make_unit(f, e, field_generator(f)));
    w.words.push_back({1, 0});
    w.labeling = identity_labeling(2);
    return {f, e, w};
}

Cone cone2(double x1, double y1, double x2, double y2)
{
    return Cone{{Ray{{x1, y1}, std::nullopt}, Ray{{x2, y2}, std::nullopt}}};
}

} // namespace

TEST_CASE("act on cones")
{
    auto st = salem_setup();
    double const a = alpha_closed_form();
    auto const & g = st.w.generators[0];
    Cone const c{{Ray{{1, 1}, field_one(st.f)}, Ray{{a, 1 / a}, field_generator(st.f)}}};

    auto one = make_unit(st.f, st.e, field_one(st.f));
    CHECK(same_cone(act(st.f, one, c), c));

    auto const moved = act(st.f, g, c);
    CHECK(same_cone(moved, cone2(a, 1 / a, a * a, 1 / (a * a))));
    CHECK(*moved.rays[1].tag == power(field_generator(st.f), 2, st.f));
    CHECK(moved.rays[1].tag->is_integral());

    auto const back = act(st.f, unit_inverse(st.f, st.e, g), moved);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(back.rays[j].dir[i] - c.rays[j].dir[i]) < 1e-9);
}

TEST_CASE("orbit consistency over words")
{
    auto st = salem_setup();
    auto u = make_unit(st.f, st.e, sub(field_one(st.f), field_generator(st.f)));
    SubgroupW two;
    two.generators = {st.w.generators[0], unit_word(st.f, st.e, std::vector<UnitElt>{u}, std::vector<long>{2})};
    Cone const c = cone2(1, 1, 2, -0.5);
    std::mt19937 rng(17);
    std::uniform_int_distribution<long> d(-5, 5);
    for (int it = 0; it < 60; ++it) {
        std::vector<long> w1{d(rng), d(rng)}, w2{d(rng), d(rng)}, w12{w1[0] + w2[0], w1[1] + w2[1]};
        auto const lhs = act_word(two, w1, act_word(two, w2, c, 2), 2);
        CHECK(same_cone(lhs, act_word(two, w12, c, 2)));
        // the exact product acts the same way
        auto const g = unit_word(st.f, st.e, two.generators, w12);
        Cone tagged{{Ray{{1, 1}, field_one(st.f)}}};
        auto const t = act(st.f, g, tagged);
        CHECK(t.rays[0].tag->is_integral());
        // power-basis evaluation of a large element: error bounded by eps * sum |c_k| |z|^k
        auto const sig = sigma_K(st.f, *t.rays[0].tag, st.e);
        auto const pw = to_power(st.f, *t.rays[0].tag);
        double bound = 0;
        for (int k = 0; k <= pw.degree(); ++k)
            bound += std::abs(pw.coeff(k).get_d()) * std::pow(alpha_closed_form(), k);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(sig[i].real() - t.rays[0].dir[i]) < 1e-13 * bound + 1e-9 * std::abs(sig[i]));
    }
}

TEST_CASE("overlap and face tests against angular intervals")
{
    // cones spanned by two of 16 directions on the circle, angular width < pi
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> pick(0, 15);
    auto dir = [](int k) {
        double const th = 2 * std::numbers::pi * k / 16.0;
        auto snap = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
        return std::vector<double>{snap(std::cos(th)), snap(std::sin(th))};
    };
    int tested = 0;
    while (tested < 300) {
        int a0 = pick(rng), wa = 1 + pick(rng) % 7, b0 = pick(rng), wb = 1 + pick(rng) % 7;
        Cone a{{Ray{dir(a0), std::nullopt}, Ray{dir(a0 + wa), std::nullopt}}};
        Cone b{{Ray{dir(b0), std::nullopt}, Ray{dir(b0 + wb), std::nullopt}}};
        // oracle on the discrete circle: positions covered by each closed interval
        std::vector<int> ca(16, 0), cb(16, 0);
        for (int k = 0; k <= wa; ++k)
            ca[(a0 + k) % 16] = 1;
        for (int k = 0; k <= wb; ++k)
            cb[(b0 + k) % 16] = 1;
        int common_pts = 0;
        for (int k = 0; k < 16; ++k)
            common_pts += ca[k] && cb[k];
        // interiors overlap iff they share an open arc between consecutive grid points
        bool arc = false;
        for (int k = 0; k < 16; ++k) {
            bool in_a = false, in_b = false;
            for (int j = 0; j < wa; ++j)
                in_a = in_a || (a0 + j) % 16 == k;
            for (int j = 0; j < wb; ++j)
                in_b = in_b || (b0 + j) % 16 == k;
            arc = arc || (in_a && in_b);
        }
        bool const identical = (a0 % 16 == b0 % 16) && wa == wb;
        CHECK(cones_overlap(a, b) == (common_pts > 0));
        if (common_pts > 0)
            CHECK(meet_in_common_face(a, b) == (!arc || identical));
        ++tested;
    }
}

TEST_CASE("fan for the degree-4 Salem field")
{
    auto st = salem_setup();
    double const a = alpha_closed_form();
    auto fan = build_fan_s2(st.f, st.e, st.w);
    REQUIRE(fan.sigma.size() == 2);
    CHECK(same_cone(fan.sigma[0], cone2(1, 1, a, 1 / a)));
    CHECK(same_cone(fan.sigma[1], cone2(1, -1, a, -1 / a)));
    REQUIRE(fan.sigma[1].rays[0].tag.has_value());
    auto const sig = sigma_K(st.f, *fan.sigma[1].rays[0].tag, st.e);
    CHECK(sig[0].real() > 0);
    CHECK(std::abs(sig[0].real() + sig[1].real()) < 1e-9);

    // ray-ratio bracketing: x/|y| in [a^{2k}, a^{2k+2}] puts (x, y) in g^k sigma_{sign y}
    auto const locs = locate(fan, {1.0, 0.5});
    REQUIRE(locs.size() == 1);
    CHECK(locs[0].cone.base == 0);
    CHECK(locs[0].cone.word == std::vector<long>{0});
    CHECK(locs[0].interior);

    CHECK(locate(fan, {1.0, 0.0}).empty());
    CHECK_FALSE(fan.omega.in_support_region({1.0, 0.0}));

    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int it = 0; it < 200; ++it) {
        double const x = std::abs(u(rng)) + 1e-3, y = u(rng);
        double const k = std::floor(std::log(x / std::abs(y)) / std::log(a * a));
        auto const l = locate(fan, {x, y});
        REQUIRE(l.size() >= 1);
        CHECK(l[0].cone.base == (y > 0 ? 0 : 1));
        if (l.size() == 1)
            CHECK(l[0].cone.word[0] == static_cast<long>(k));
    }
}

TEST_CASE("action checks")
{
    auto st = salem_setup();
    auto fan = build_fan_s2(st.f, st.e, st.w, 64);
    auto const rep = check_action(fan);
    CHECK(rep.free);
    CHECK(rep.properly_discontinuous);
    CHECK(rep.invariant);
    CHECK(rep.fan_property);
    CHECK(rep.overlap_words.size() == 4);
    for (auto const & w : rep.overlap_words)
        CHECK(std::abs(w[0]) == 1);

    QuotientFan axis = fan;
    axis.sigma = {Cone{{Ray{{1, 0}, std::nullopt}}}};
    auto const bad = check_action(axis);
    CHECK_FALSE(bad.invariant);
    CHECK_FALSE(bad.witnesses.empty());

    QuotientFan trivial = fan;
    trivial.w = SubgroupW{};
    trivial.omega = omega_for(trivial.w, 2);
    CHECK(check_action(trivial).free);

    auto const sup = support_check(fan, 1000, 42);
    CHECK(sup.covered == 1000);
    CHECK(sup.conflicts == 0);
    CHECK(sup.outside_region == 0);
}

TEST_CASE("fan generation preconditions")
{
    auto st = salem_setup();
    SubgroupW inv = st.w;
    inv.generators[0] = unit_inverse(st.f, st.e, st.w.generators[0]);
    CHECK_THROWS_AS(build_fan_s2(st.f, st.e, inv), Error);

    auto q = testing::quintic_field();
    auto qe = embeddings(q);
    try {
        build_fan_s2(q, qe, st.w);
        FAIL("expected WrongSignature");
    } catch (Error const & err) {
        CHECK(err.code() == ErrorCode::WrongSignature);
    }
}

TEST_CASE("C_delta collapse")
{
    auto st = salem_setup();
    double const a = alpha_closed_form();
    auto const omega = omega_for(st.w, 2);
    auto const rep = cone_collapse_check(omega, 1.0, st.w.generators[0], 8);
    CHECK(rep.fitted_n >= 0.95 * a * a);
    CHECK(rep.min_margin >= -1e-9);

    auto const k0 = cone_collapse_check(omega, 1.0, st.w.generators[0], 0);
    CHECK(k0.min_margin >= 0);

    try {
        cone_collapse_check(omega, 1.0, unit_inverse(st.f, st.e, st.w.generators[0]), 8);
        FAIL("expected CollapseFailed");
    } catch (Error const & err) {
        CHECK(err.code() == ErrorCode::CollapseFailed);
    }
}

TEST_CASE("divisor of a ray")
{
    auto st = salem_setup();
    double const a = alpha_closed_form();
    auto fan = build_fan_s2(st.f, st.e, st.w, 16);
    auto const rep = divisor_certificate(fan, Ray{{a, 1 / a}, std::nullopt}, st.f, st.e);
    CHECK(rep.star_cones == 2);
    CHECK(rep.quotient_dimension == 1);
    CHECK(rep.complete);
    CHECK(rep.quotient_rays.size() == 2);
    CHECK(rep.kind == "Hopf surface");
    REQUIRE(rep.elliptic_residual.has_value());
    CHECK(*rep.elliptic_residual < 1e-9);
    REQUIRE(rep.tag_embedding.size() == 4);
    CHECK(std::abs(rep.tag_embedding[0] - a) < 1e-9);
    CHECK(std::abs(rep.tag_embedding[1] - 1 / a) < 1e-9);
    CHECK(std::abs(rep.tag_embedding[3] - std::conj(rep.tag_embedding[2])) < 1e-12);

    try {
        divisor_certificate(fan, Ray{{1, 0.3}, std::nullopt}, st.f, st.e);
        FAIL("expected RayNotInFan");
    } catch (Error const & err) {
        CHECK(err.code() == ErrorCode::RayNotInFan);
    }
}
