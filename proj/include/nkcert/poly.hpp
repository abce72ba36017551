#pragma once

// Exact univariate polynomials over Z and Q, stored low degree first.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace nkcert {

using Integer = mpz_class;
using Rational = mpq_class;

class RatPoly;

class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Integer> coeffs);
    IntPoly(std::initializer_list<long> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::vector<Integer> const & coeffs() const { return coeffs_; }
    Integer const & operator[](int i) const { return coeffs_[i]; }
    Integer const & leading() const { return coeffs_.back(); }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

    RatPoly to_rat() const;
    std::vector<double> to_double() const;

    bool operator==(IntPoly const & o) const { return coeffs_ == o.coeffs_; }

private:
    std::vector<Integer> coeffs_;
};

class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coeffs);
    RatPoly(std::initializer_list<long> coeffs);

    static RatPoly monomial(Rational c, int deg);

    // -1 for the zero polynomial
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    std::vector<Rational> const & coeffs() const { return coeffs_; }
    Rational coeff(int i) const { return i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : Rational(0); }
    Rational const & leading() const { return coeffs_.back(); }

    RatPoly monic() const;
    RatPoly derivative() const;
    Rational eval(Rational const & x) const;
    std::complex<double> eval(std::complex<double> z) const;

    bool is_integral() const;
    std::optional<IntPoly> to_int() const;

    RatPoly & operator+=(RatPoly const & o);
    RatPoly & operator-=(RatPoly const & o);
    RatPoly & operator*=(Rational const & c);
    friend RatPoly operator+(RatPoly a, RatPoly const & b) { return a += b; }
    friend RatPoly operator-(RatPoly a, RatPoly const & b) { return a -= b; }
    friend RatPoly operator*(RatPoly a, Rational const & c) { return a *= c; }
    friend RatPoly operator*(RatPoly const & a, RatPoly const & b);
    friend RatPoly operator-(RatPoly a) { return a *= Rational(-1); }

    bool operator==(RatPoly const & o) const { return coeffs_ == o.coeffs_; }

private:
    void trim();
    std::vector<Rational> coeffs_;
};

struct PolyDivision {
    RatPoly quotient;
    RatPoly remainder;
};

PolyDivision divmod(RatPoly const & a, RatPoly const & b);
RatPoly operator%(RatPoly const & a, RatPoly const & b);

// Monic gcd; gcd(0, 0) = 0.
RatPoly gcd(RatPoly a, RatPoly b);

// Returns u with u*a = 1 mod m. Requires gcd(a, m) = 1.
RatPoly inverse_mod(RatPoly const & a, RatPoly const & m);

bool is_squarefree(RatPoly const & p);
RatPoly squarefree_part(RatPoly const & p);

// Exact count of distinct real roots by a Sturm chain.
int count_real_roots(RatPoly const & p);

// Ben-Or test over F_p for a monic integer polynomial.
bool irreducible_mod_p(IntPoly const & p, std::int64_t prime);

// Smallest prime <= max_prime modulo which p stays irreducible.
std::optional<std::int64_t> irreducibility_witness(IntPoly const & p, std::int64_t max_prime = 101);

// "X^4 - 3*X^3 + 2*X^2 + 2*X - 1"
std::string to_string(RatPoly const & p);
std::string to_string(IntPoly const & p);

} // namespace nkcert
