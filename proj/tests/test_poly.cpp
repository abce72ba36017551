#include "doctest.h"

#include "nkcert/error.hpp"
#include "nkcert/poly.hpp"

using namespace nkcert;

namespace {

// Counts sign changes of p on a fine rational grid inside the Cauchy bound.
int grid_real_roots(RatPoly const & p)
{
    Rational bound = 1;
    for (int k = 0; k < p.degree(); ++k)
        bound += abs(p.coeff(k) / p.leading());
    int changes = 0;
    int const steps = 20000;
    int last = sgn(p.eval(-bound));
    for (int i = 1; i <= steps; ++i) {
        Rational x = -bound + 2 * bound * Rational(i, steps);
        int s = sgn(p.eval(x));
        if (s != 0 && last != 0 && s != last)
            ++changes;
        if (s != 0)
            last = s;
    }
    return changes;
}

bool has_root_mod(IntPoly const & p, long prime)
{
    for (long x = 0; x < prime; ++x) {
        Integer acc = 0;
        for (int k = p.degree(); k >= 0; --k)
            acc = acc * x + p[k];
        if (acc % prime == 0)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("division and gcd")
{
    RatPoly a{-1, 0, 1};  // X^2 - 1
    RatPoly b{1, 1};      // X + 1
    auto [q, r] = divmod(a, b);
    CHECK(q == RatPoly{-1, 1});
    CHECK(r.is_zero());
    CHECK(gcd(a, RatPoly{-1, 1} * RatPoly{2, 1}) == RatPoly{-1, 1});
    CHECK(gcd(RatPoly{1, 0, 1}, RatPoly{0, 1}).degree() == 0);
}

TEST_CASE("inverse modulo a polynomial")
{
    RatPoly m{1, -1, -1, -1, 1};
    RatPoly x{0, 1};
    RatPoly inv = inverse_mod(x, m);
    CHECK(inv == RatPoly{1, 1, 1, -1});
    CHECK((x * inv) % m == RatPoly{1});
}

TEST_CASE("squarefree detection")
{
    CHECK(is_squarefree(RatPoly{-1, 0, 1}));
    CHECK_FALSE(is_squarefree(RatPoly{1, 2, 1}));
    CHECK(squarefree_part(RatPoly{1, 2, 1} * RatPoly{0, 1}) == RatPoly{0, 1, 1});
}

TEST_CASE("Sturm count agrees with a sign-change grid")
{
    for (RatPoly const & p : {RatPoly{-1, -1, 0, 1}, RatPoly{1, -1, -1, -1, 1}, RatPoly{1, 0, -1, -1, -1, 1},
                              RatPoly{-1, 0, 1}, RatPoly{1, 0, 1}}) {
        CAPTURE(to_string(p));
        CHECK(count_real_roots(p) == grid_real_roots(p));
    }
    CHECK(count_real_roots(RatPoly{1, -1, -1, -1, 1}) == 2);
    CHECK(count_real_roots(RatPoly{1, 0, -1, -1, -1, 1}) == 3);
}

TEST_CASE("irreducibility witnesses")
{
    IntPoly cubic{-1, -1, 0, 1};
    // a cubic over F_2 is irreducible iff it has no root there
    CHECK_FALSE(has_root_mod(cubic, 2));
    CHECK(irreducible_mod_p(cubic, 2));
    CHECK(irreducibility_witness(cubic) == 2);

    IntPoly reducible{-1, 0, 1};
    CHECK_FALSE(irreducibility_witness(reducible).has_value());

    // (X^2 + 1)^2 mod 3 stays a square
    CHECK_FALSE(irreducible_mod_p(IntPoly{1, 0, 2, 0, 1}, 3));
    CHECK_THROWS_AS(irreducible_mod_p(IntPoly{1, 2}, 3), Error);
}

TEST_CASE("printing")
{
    CHECK(to_string(RatPoly{-1, 2, 2, -3, 1}) == "X^4 - 3*X^3 + 2*X^2 + 2*X - 1");
    CHECK(to_string(RatPoly{}) == "0");
}
