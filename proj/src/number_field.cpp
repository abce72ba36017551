#include "nkcert/number_field.hpp"

#include <algorithm>
#include <cmath>

#include "nkcert/error.hpp"
#include "nkcert/roots.hpp"

namespace nkcert {

RatMatrix identity_matrix(int n)
{
    RatMatrix m(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

RatMatrix multiply(RatMatrix const & a, RatMatrix const & b)
{
    std::size_t const rows = a.size(), inner = b.size(), cols = b.empty() ? 0 : b[0].size();
    RatMatrix r(rows, std::vector<Rational>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0)
                continue;
            for (std::size_t j = 0; j < cols; ++j)
                r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

std::vector<Rational> multiply(RatMatrix const & a, std::vector<Rational> const & v)
{
    std::vector<Rational> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k)
            r[i] += a[i][k] * v[k];
    return r;
}

std::optional<RatMatrix> invert(RatMatrix const & a)
{
    int const n = static_cast<int>(a.size());
    RatMatrix m = a;
    RatMatrix inv = identity_matrix(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rational const d = 1 / m[col][col];
        for (int j = 0; j < n; ++j) {
            m[col][j] *= d;
            inv[col][j] *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0)
                continue;
            Rational const f = m[r][col];
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

std::optional<std::vector<Rational>> solve_exact(RatMatrix const & a, std::vector<Rational> const & b)
{
    int const rows = static_cast<int>(a.size());
    int const cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
    RatMatrix m = a;
    for (int i = 0; i < rows; ++i)
        m[i].push_back(b[i]);
    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int piv = -1;
        for (int r = row; r < rows; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(m[piv], m[row]);
        Rational const d = 1 / m[row][col];
        for (auto & x : m[row])
            x *= d;
        for (int r = 0; r < rows; ++r) {
            if (r == row || m[r][col] == 0)
                continue;
            Rational const f = m[r][col];
            for (int j = col; j <= cols; ++j)
                m[r][j] -= f * m[row][j];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    for (int r = row; r < rows; ++r)
        if (m[r][cols] != 0)
            return std::nullopt;
    std::vector<Rational> x(cols);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k)
        x[pivot_cols[k]] = m[k][cols];
    return x;
}

RatPoly characteristic_polynomial(RatMatrix const & a)
{
    int const n = static_cast<int>(a.size());
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    RatMatrix mk(n, std::vector<Rational>(n));
    for (int k = 1; k <= n; ++k) {
        RatMatrix next = multiply(a, mk);
        for (int i = 0; i < n; ++i)
            next[i][i] += c[n - k + 1];
        mk = std::move(next);
        RatMatrix amk = multiply(a, mk);
        Rational tr = 0;
        for (int i = 0; i < n; ++i)
            tr += amk[i][i];
        c[n - k] = -tr / k;
    }
    return RatPoly(std::move(c));
}

bool FieldElement::is_integral() const
{
    return std::all_of(coords.begin(), coords.end(),
                       [](Rational const & c) { return c.get_den() == 1; });
}

namespace {

std::vector<Rational> column(RatMatrix const & m, int j)
{
    std::vector<Rational> c;
    for (auto const & row : m)
        c.push_back(row[j]);
    return c;
}

RatPoly reduce(RatPoly const & p, NumberField const & f)
{
    return p % f.min_poly.to_rat();
}

} // namespace

NumberField validate_field(IntPoly const & p, std::optional<std::vector<std::vector<Rational>>> const & basis)
{
    if (p.degree() < 2)
        throw Error(ErrorCode::DegreeTooSmall, "minimal polynomial must have degree >= 2, got " + to_string(p));
    if (!p.is_monic())
        throw Error(ErrorCode::NonMonic, to_string(p) + " is not monic");
    RatPoly const pr = p.to_rat();
    if (!is_squarefree(pr))
        throw Error(ErrorCode::NotSquarefree, to_string(p) + " has a repeated factor");

    int const n = p.degree();
    NumberField f;
    f.min_poly = p;

    if (basis) {
        if (static_cast<int>(basis->size()) != n)
            throw Error(ErrorCode::SingularBasis, "integral basis must have exactly n elements");
        f.basis.assign(n, std::vector<Rational>(n));
        for (int j = 0; j < n; ++j) {
            if (static_cast<int>((*basis)[j].size()) != n)
                throw Error(ErrorCode::SingularBasis, "basis element " + std::to_string(j) + " has wrong length");
            for (int i = 0; i < n; ++i)
                f.basis[i][j] = (*basis)[j][i];
        }
        f.power_basis = f.basis == identity_matrix(n);
    } else {
        f.basis = identity_matrix(n);
        f.power_basis = true;
    }

    auto inv = invert(f.basis);
    if (!inv)
        throw Error(ErrorCode::SingularBasis, "integral basis is linearly dependent");
    f.basis_inv = std::move(*inv);

    std::vector<Rational> one(n);
    one[0] = 1;
    bool has_one = false;
    for (int j = 0; j < n && !has_one; ++j)
        has_one = column(f.basis, j) == one;
    if (!has_one)
        throw Error(ErrorCode::BasisMissingOne, "1 is not among the integral basis elements");

    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            RatPoly bi(column(f.basis, i)), bj(column(f.basis, j));
            RatPoly prod = reduce(bi * bj, f);
            std::vector<Rational> pc(n);
            for (int k = 0; k < n; ++k)
                pc[k] = prod.coeff(k);
            for (auto const & c : multiply(f.basis_inv, pc))
                if (c.get_den() != 1)
                    throw Error(ErrorCode::BasisNotRing,
                                "product of basis elements " + std::to_string(i) + " and " + std::to_string(j)
                                    + " has non-integral coordinates");
        }

    f.s = count_real_roots(pr);
    f.t = (n - f.s) / 2;
    f.irreducibility_witness = irreducibility_witness(p);
    return f;
}

FieldElement from_power(NumberField const & f, RatPoly const & p)
{
    int const n = f.degree();
    RatPoly r = reduce(p, f);
    std::vector<Rational> pc(n);
    for (int k = 0; k < n; ++k)
        pc[k] = r.coeff(k);
    return {multiply(f.basis_inv, pc)};
}

RatPoly to_power(NumberField const & f, FieldElement const & x)
{
    return RatPoly(multiply(f.basis, x.coords));
}

FieldElement field_one(NumberField const & f)
{
    return from_power(f, RatPoly{1});
}

FieldElement field_generator(NumberField const & f)
{
    return from_power(f, RatPoly{0, 1});
}

FieldElement from_integer(NumberField const & f, long v)
{
    return from_power(f, RatPoly{v});
}

FieldElement from_coords(std::vector<long> const & coords)
{
    FieldElement x;
    for (long c : coords)
        x.coords.emplace_back(c);
    return x;
}

FieldElement add(FieldElement const & a, FieldElement const & b)
{
    FieldElement r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i)
        r.coords[i] += b.coords[i];
    return r;
}

FieldElement sub(FieldElement const & a, FieldElement const & b)
{
    FieldElement r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i)
        r.coords[i] -= b.coords[i];
    return r;
}

FieldElement mul(FieldElement const & a, FieldElement const & b, NumberField const & f)
{
    return from_power(f, to_power(f, a) * to_power(f, b));
}

FieldElement inverse(FieldElement const & a, NumberField const & f)
{
    RatPoly pa = to_power(f, a);
    if (pa.is_zero())
        throw std::domain_error("inverse of zero field element");
    return from_power(f, inverse_mod(pa, f.min_poly.to_rat()));
}

FieldElement power(FieldElement const & a, long e, NumberField const & f)
{
    FieldElement base = e < 0 ? inverse(a, f) : a;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    FieldElement r = field_one(f);
    while (k > 0) {
        if (k & 1)
            r = mul(r, base, f);
        k >>= 1;
        if (k)
            base = mul(base, base, f);
    }
    return r;
}

RatMatrix multiplication_matrix(FieldElement const & x, NumberField const & f)
{
    int const n = f.degree();
    RatMatrix m(n, std::vector<Rational>(n));
    for (int j = 0; j < n; ++j) {
        FieldElement bj{std::vector<Rational>(n)};
        bj.coords[j] = 1;
        FieldElement prod = mul(x, bj, f);
        for (int i = 0; i < n; ++i)
            m[i][j] = prod.coords[i];
    }
    return m;
}

RatPoly char_poly_mult(FieldElement const & x, NumberField const & f)
{
    return characteristic_polynomial(multiplication_matrix(x, f));
}

Rational field_norm(FieldElement const & x, NumberField const & f)
{
    RatPoly cp = char_poly_mult(x, f);
    Rational c0 = cp.coeff(0);
    return f.degree() % 2 == 0 ? c0 : Rational(-c0);
}

RatPoly min_poly_by_dependency(FieldElement const & x, NumberField const & f)
{
    int const n = f.degree();
    std::vector<std::vector<Rational>> powers{field_one(f).coords};
    FieldElement cur = field_one(f);
    for (int k = 1; k <= n; ++k) {
        cur = mul(cur, x, f);
        RatMatrix a(n, std::vector<Rational>(k));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j)
                a[i][j] = powers[j][i];
        if (auto c = solve_exact(a, cur.coords)) {
            std::vector<Rational> m(k + 1);
            for (int j = 0; j < k; ++j)
                m[j] = -(*c)[j];
            m[k] = 1;
            return RatPoly(std::move(m));
        }
        powers.push_back(cur.coords);
    }
    // unreachable: 1, x, ..., x^n are always dependent in an n-dimensional algebra
    throw Error(ErrorCode::OracleMismatch, "no linear dependency found among powers");
}

RatPoly min_poly_elt(FieldElement const & x, NumberField const & f)
{
    RatPoly const from_char = squarefree_part(char_poly_mult(x, f));
    RatPoly const from_dep = min_poly_by_dependency(x, f);
    if (!(from_char == from_dep))
        throw Error(ErrorCode::OracleMismatch,
                    "squarefree char poly " + to_string(from_char) + " vs dependency " + to_string(from_dep));
    return from_char;
}

EmbeddingTable embeddings(NumberField const & f, double tol)
{
    using cplx = std::complex<double>;
    std::vector<double> const c = f.min_poly.to_double();
    std::vector<cplx> roots = durand_kerner(c);
    int const n = f.degree();

    EmbeddingTable e;
    e.tol = tol;
    for (auto const & z : roots) {
        double scale = 0.0;
        for (int k = 0; k <= n; ++k)
            scale += std::abs(c[k]) * std::pow(std::abs(z), k);
        double const res = std::abs(horner(c, z)) / scale;
        e.max_residual = std::max(e.max_residual, res);
        if (res >= tol)
            throw Error(ErrorCode::RootFindingFailed, "root residual above tolerance");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(roots[i] - roots[j]) <= tol)
                throw Error(ErrorCode::RootFindingFailed, "roots are not separated at the requested tolerance");

    std::vector<double> reals;
    std::vector<cplx> upper, lower;
    for (auto const & z : roots) {
        double const thr = 1e-8 * (1.0 + std::abs(z));
        double const im = std::abs(z.imag());
        if (im < thr)
            reals.push_back(z.real());
        else if (im < 10.0 * thr)
            throw Error(ErrorCode::AmbiguousRealComplexSplit, "root with imaginary part inside the guard band");
        else if (z.imag() > 0)
            upper.push_back(z);
        else
            lower.push_back(z);
    }
    if (static_cast<int>(reals.size()) != f.s || upper.size() != lower.size())
        throw Error(ErrorCode::AmbiguousRealComplexSplit,
                    "numeric real root count " + std::to_string(reals.size()) + " disagrees with Sturm count "
                        + std::to_string(f.s));

    std::sort(reals.begin(), reals.end(), std::greater<>());
    std::sort(upper.begin(), upper.end(), [](cplx const & a, cplx const & b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (auto const & z : upper) {
        auto it = std::min_element(lower.begin(), lower.end(), [&](cplx const & a, cplx const & b) {
            return std::abs(a - std::conj(z)) < std::abs(b - std::conj(z));
        });
        if (std::abs(*it - std::conj(z)) > 1e-6 * (1.0 + std::abs(z)))
            throw Error(ErrorCode::AmbiguousRealComplexSplit, "complex roots do not pair up under conjugation");
        lower.erase(it);
    }

    e.s = static_cast<int>(reals.size());
    e.t = static_cast<int>(upper.size());
    for (double r : reals)
        e.values.emplace_back(r, 0.0);
    for (auto const & z : upper)
        e.values.push_back(z);
    for (auto const & z : upper)
        e.values.push_back(std::conj(z));
    return e;
}

std::vector<std::complex<double>> sigma_K(NumberField const & f, FieldElement const & x, EmbeddingTable const & e)
{
    RatPoly const p = to_power(f, x);
    std::vector<std::complex<double>> r;
    r.reserve(e.values.size());
    for (auto const & z : e.values)
        r.push_back(p.eval(z));
    return r;
}

} // namespace nkcert
