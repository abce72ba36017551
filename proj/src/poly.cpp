#include "nkcert/poly.hpp"

#include <algorithm>
#include <sstream>

#include "nkcert/error.hpp"

namespace nkcert {

IntPoly::IntPoly(std::vector<Integer> coeffs)
    : coeffs_(std::move(coeffs))
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

IntPoly::IntPoly(std::initializer_list<long> coeffs)
{
    for (long c : coeffs)
        coeffs_.emplace_back(c);
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

RatPoly IntPoly::to_rat() const
{
    std::vector<Rational> r;
    r.reserve(coeffs_.size());
    for (auto const & c : coeffs_)
        r.emplace_back(c);
    return RatPoly(std::move(r));
}

std::vector<double> IntPoly::to_double() const
{
    std::vector<double> r;
    r.reserve(coeffs_.size());
    for (auto const & c : coeffs_)
        r.push_back(c.get_d());
    return r;
}

RatPoly::RatPoly(std::vector<Rational> coeffs)
    : coeffs_(std::move(coeffs))
{
    trim();
}

RatPoly::RatPoly(std::initializer_list<long> coeffs)
{
    for (long c : coeffs)
        coeffs_.emplace_back(c);
    trim();
}

RatPoly RatPoly::monomial(Rational c, int deg)
{
    std::vector<Rational> r(deg + 1);
    r[deg] = std::move(c);
    return RatPoly(std::move(r));
}

void RatPoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

RatPoly RatPoly::monic() const
{
    if (is_zero())
        return *this;
    RatPoly r = *this;
    Rational inv = 1 / leading();
    for (auto & c : r.coeffs_)
        c *= inv;
    return r;
}

RatPoly RatPoly::derivative() const
{
    std::vector<Rational> r;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        r.push_back(coeffs_[i] * static_cast<long>(i));
    return RatPoly(std::move(r));
}

Rational RatPoly::eval(Rational const & x) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

std::complex<double> RatPoly::eval(std::complex<double> z) const
{
    std::complex<double> acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * z + it->get_d();
    return acc;
}

bool RatPoly::is_integral() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](Rational const & c) { return c.get_den() == 1; });
}

std::optional<IntPoly> RatPoly::to_int() const
{
    if (!is_integral())
        return std::nullopt;
    std::vector<Integer> r;
    for (auto const & c : coeffs_)
        r.push_back(c.get_num());
    return IntPoly(std::move(r));
}

RatPoly & RatPoly::operator+=(RatPoly const & o)
{
    if (o.coeffs_.size() > coeffs_.size())
        coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
        coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

RatPoly & RatPoly::operator-=(RatPoly const & o)
{
    if (o.coeffs_.size() > coeffs_.size())
        coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
        coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

RatPoly & RatPoly::operator*=(Rational const & c)
{
    for (auto & x : coeffs_)
        x *= c;
    trim();
    return *this;
}

RatPoly operator*(RatPoly const & a, RatPoly const & b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return RatPoly(std::move(r));
}

PolyDivision divmod(RatPoly const & a, RatPoly const & b)
{
    if (b.is_zero())
        throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem = a.coeffs();
    int const db = b.degree();
    int const da = a.degree();
    if (da < db)
        return {RatPoly{}, a};
    std::vector<Rational> quo(da - db + 1);
    Rational const lead_inv = 1 / b.leading();
    for (int k = da - db; k >= 0; --k) {
        Rational q = rem[k + db] * lead_inv;
        if (q == 0)
            continue;
        for (int j = 0; j <= db; ++j)
            rem[k + j] -= q * b.coeff(j);
        quo[k] = q;
    }
    rem.resize(db);
    return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

RatPoly operator%(RatPoly const & a, RatPoly const & b)
{
    return divmod(a, b).remainder;
}

RatPoly gcd(RatPoly a, RatPoly b)
{
    while (!b.is_zero()) {
        RatPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

RatPoly inverse_mod(RatPoly const & a, RatPoly const & m)
{
    // extended Euclid: keep s with s*a = r (mod m)
    RatPoly r0 = m, r1 = a % m;
    RatPoly s0, s1 = RatPoly{1};
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        RatPoly s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.degree() != 0)
        throw std::domain_error("polynomial is not invertible modulo m");
    return (s0 * (1 / r0.leading())) % m;
}

bool is_squarefree(RatPoly const & p)
{
    return gcd(p, p.derivative()).degree() == 0;
}

RatPoly squarefree_part(RatPoly const & p)
{
    RatPoly g = gcd(p, p.derivative());
    if (g.degree() <= 0)
        return p.monic();
    return divmod(p, g).quotient.monic();
}

namespace {

int sign_at_infinity(RatPoly const & p, bool positive)
{
    int s = sgn(p.leading());
    if (!positive && (p.degree() % 2 == 1))
        s = -s;
    return s;
}

int sign_changes(std::vector<int> const & signs)
{
    int changes = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

} // namespace

int count_real_roots(RatPoly const & p)
{
    RatPoly sq = squarefree_part(p);
    if (sq.degree() <= 0)
        return 0;
    std::vector<RatPoly> chain{sq, sq.derivative()};
    while (chain.back().degree() > 0) {
        RatPoly r = chain[chain.size() - 2] % chain.back();
        if (r.is_zero())
            break;
        chain.push_back(-r);
    }
    std::vector<int> at_minus, at_plus;
    for (auto const & q : chain) {
        at_minus.push_back(sign_at_infinity(q, false));
        at_plus.push_back(sign_at_infinity(q, true));
    }
    return sign_changes(at_minus) - sign_changes(at_plus);
}

namespace {

using ModPoly = std::vector<std::int64_t>;

void trim(ModPoly & a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p)
{
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e > 0) {
        if (e & 1)
            r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

ModPoly mod_rem(ModPoly a, ModPoly const & b, std::int64_t p)
{
    trim(a);
    int const db = static_cast<int>(b.size()) - 1;
    std::int64_t const li = inv_mod(b.back(), p);
    while (static_cast<int>(a.size()) - 1 >= db) {
        std::int64_t q = a.back() * li % p;
        int shift = static_cast<int>(a.size()) - 1 - db;
        for (int j = 0; j <= db; ++j)
            a[shift + j] = ((a[shift + j] - q * b[j]) % p + p) % p;
        trim(a);
    }
    return a;
}

ModPoly mod_mul(ModPoly const & a, ModPoly const & b, ModPoly const & m, std::int64_t p)
{
    if (a.empty() || b.empty())
        return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return mod_rem(std::move(r), m, p);
}

ModPoly mod_gcd(ModPoly a, ModPoly b, std::int64_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        ModPoly r = mod_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

ModPoly mod_pow(ModPoly base, std::int64_t e, ModPoly const & m, std::int64_t p)
{
    ModPoly r{1};
    while (e > 0) {
        if (e & 1)
            r = mod_mul(r, base, m, p);
        base = mod_mul(base, base, m, p);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace

bool irreducible_mod_p(IntPoly const & poly, std::int64_t prime)
{
    if (!poly.is_monic())
        throw Error(ErrorCode::NonMonic, "irreducibility test needs a monic polynomial");
    int const n = poly.degree();
    if (n <= 1)
        return n == 1;
    ModPoly f;
    for (auto const & c : poly.coeffs()) {
        Integer r = c % prime;
        if (r < 0)
            r += prime;
        f.push_back(r.get_si());
    }
    ModPoly const x{0, 1};
    ModPoly g = x;
    for (int i = 1; i <= n / 2; ++i) {
        g = mod_pow(g, prime, f, prime);
        ModPoly d = g;
        d.resize(std::max<std::size_t>(d.size(), 2), 0);
        d[1] = (d[1] - 1 + prime) % prime;
        if (mod_gcd(f, d, prime).size() > 1)
            return false;
    }
    return true;
}

std::optional<std::int64_t> irreducibility_witness(IntPoly const & p, std::int64_t max_prime)
{
    for (std::int64_t q = 2; q <= max_prime; ++q)
        if (is_prime(q) && irreducible_mod_p(p, q))
            return q;
    return std::nullopt;
}

std::string to_string(RatPoly const & p)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        Rational c = p.coeff(k);
        if (c == 0)
            continue;
        bool const neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool const unit = (a == 1);
        if (!unit || k == 0)
            os << a.get_str();
        if (k > 0) {
            if (!unit)
                os << "*";
            os << "X";
            if (k > 1)
                os << "^" << k;
        }
    }
    return os.str();
}

std::string to_string(IntPoly const & p)
{
    return to_string(p.to_rat());
}

} // namespace nkcert
