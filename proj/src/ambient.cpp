#include "nkcert/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

using cplx = std::complex<double>;

Eigen::MatrixXd to_real(RatMatrix const & m)
{
    Eigen::MatrixXd r(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            r(i, j) = m[i][j].get_d();
    return r;
}

double condition_number(Eigen::MatrixXcd const & m)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    auto const & sv = svd.singularValues();
    double const lo = sv(sv.size() - 1);
    return lo > 0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
}

} // namespace

int numeric_rank(Eigen::MatrixXd const & m)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    auto const & sv = svd.singularValues();
    double const thr = 1e-9 * std::max(1.0, sv(0));
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        r += sv(i) > thr;
    return r;
}

AmbientFrame build_frame(NumberField const & f, EmbeddingTable const & e)
{
    AmbientFrame fr;
    fr.s = e.s;
    fr.t = e.t;
    int const n = e.degree();
    if (e.t == 0)
        throw Error(ErrorCode::TrivialH, "field is totally real, H would be trivial");

    fr.BK.resize(n, n);
    for (int j = 0; j < n; ++j) {
        FieldElement bj;
        bj.coords.assign(n, Rational(0));
        bj.coords[j] = 1;
        auto const sig = sigma_K(f, bj, e);
        for (int i = 0; i < n; ++i)
            fr.BK(i, j) = sig[i];
    }
    fr.condition = condition_number(fr.BK);
    if (!(fr.condition <= 1e8))
        throw Error(ErrorCode::IllConditioned, "condition number of B_K is " + std::to_string(fr.condition));

    int const s = e.s, t = e.t;
    fr.Bprime = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < s; ++i)
        fr.Bprime(i, i) = 1.0;
    for (int j = 0; j < t; ++j) {
        int const c = s + 2 * j;
        fr.Bprime(s + j, c) = 1.0;
        fr.Bprime(s + t + j, c) = 1.0;
        fr.Bprime(s + j, c + 1) = cplx(0, -1);
        fr.Bprime(s + t + j, c + 1) = cplx(0, 1);
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(fr.BK);
    fr.P = lu.solve(fr.Bprime);
    fr.max_imag_P = fr.P.imag().cwiseAbs().maxCoeff();

    fr.H.resize(n, t);
    fr.Htilde.resize(n, 2 * t);
    for (int i = 0; i < t; ++i) {
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
        rhs(s + t + i) = 1.0;
        fr.H.col(i) = lu.solve(rhs);
        fr.Htilde.col(2 * i) = fr.H.col(i).real();
        fr.Htilde.col(2 * i + 1) = fr.H.col(i).imag();
    }
    return fr;
}

std::vector<std::vector<long>> sample_lattice_points(int n, std::size_t count, long height, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> d(-height, height);
    std::set<std::vector<long>> seen;
    std::vector<std::vector<long>> out;
    double const available = std::pow(2.0 * height + 1.0, n);
    count = std::min<std::size_t>(count, static_cast<std::size_t>(std::min(available, 1e12)));
    while (out.size() < count) {
        std::vector<long> p(n);
        for (auto & x : p)
            x = d(rng);
        if (seen.insert(p).second)
            out.push_back(std::move(p));
    }
    return out;
}

SeparationReport check_projection_injective(AmbientFrame const & fr, std::vector<std::vector<long>> const & points,
                                            Projection which)
{
    int const n = fr.degree();
    int const keep = fr.s + fr.t;
    std::vector<Eigen::VectorXd> proj;
    proj.reserve(points.size());
    for (auto const & p : points) {
        Eigen::VectorXd c(n);
        for (int k = 0; k < n; ++k)
            c(k) = static_cast<double>(p[k]);
        Eigen::VectorXcd const x = fr.BK * c;
        if (which == Projection::H) {
            // along H = span(e_{s+t+1}, ...): keep the first s + t complex coordinates
            Eigen::VectorXd v(2 * keep);
            for (int k = 0; k < keep; ++k) {
                v(2 * k) = x(k).real();
                v(2 * k + 1) = x(k).imag();
            }
            proj.push_back(std::move(v));
        } else {
            // along H~: the B' coordinates beyond s span H~
            Eigen::VectorXd v(fr.s);
            for (int k = 0; k < fr.s; ++k)
                v(k) = x(k).real();
            proj.push_back(std::move(v));
        }
    }

    SeparationReport rep;
    rep.samples = points.size();
    rep.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < proj.size(); ++i)
        for (std::size_t j = i + 1; j < proj.size(); ++j) {
            double const d = (proj[i] - proj[j]).norm();
            if (d < rep.min_separation) {
                rep.min_separation = d;
                rep.closest = std::pair{i, j};
            }
        }
    if (rep.closest && rep.min_separation <= 1e-6) {
        auto fmt = [](std::vector<long> const & v) {
            std::string s = "(";
            for (std::size_t k = 0; k < v.size(); ++k)
                s += (k ? ", " : "") + std::to_string(v[k]);
            return s + ")";
        };
        throw Error(ErrorCode::InjectivityViolation,
                    "projections of " + fmt(points[rep.closest->first]) + " and "
                        + fmt(points[rep.closest->second]) + " are " + std::to_string(rep.min_separation)
                        + " apart");
    }
    return rep;
}

SeparationReport check_pi_h_injective(AmbientFrame const & fr, std::size_t samples, long height, std::uint64_t seed)
{
    return check_projection_injective(fr, sample_lattice_points(fr.degree(), samples, height, seed), Projection::H);
}

SeparationReport check_pi_htilde_injective(AmbientFrame const & fr, std::size_t samples, long height,
                                           std::uint64_t seed)
{
    return check_projection_injective(fr, sample_lattice_points(fr.degree(), samples, height, seed),
                                      Projection::Htilde);
}

Eigen::VectorXd ord_map(Eigen::VectorXcd const & z)
{
    Eigen::VectorXd r(z.size());
    for (int k = 0; k < z.size(); ++k) {
        double const a = std::abs(z(k));
        if (a == 0.0)
            throw Error(ErrorCode::ZeroCoordinate, "coordinate " + std::to_string(k + 1) + " vanishes");
        r(k) = -std::log(a) / (2.0 * std::numbers::pi);
    }
    return r;
}

Eigen::VectorXcd iota(AmbientFrame const & fr, Eigen::VectorXcd const & w)
{
    Eigen::VectorXcd const c = fr.H * w;
    Eigen::VectorXcd r(c.size());
    for (int k = 0; k < c.size(); ++k)
        r(k) = std::exp(cplx(0, 2.0 * std::numbers::pi) * c(k));
    return r;
}

double distance_to_htilde(AmbientFrame const & fr, Eigen::VectorXd const & v)
{
    Eigen::VectorXd const coef = fr.Htilde.colPivHouseholderQr().solve(v);
    return (fr.Htilde * coef - v).norm() / std::max(1.0, v.norm());
}

IotaParams iota_params(AmbientFrame const & fr, NumberField const & f, std::vector<UnitElt> const & generators)
{
    IotaParams p;
    p.exponents = fr.H.transpose();
    for (auto const & g : generators) {
        Eigen::MatrixXd const m = to_real(multiplication_matrix(g.elt, f));
        for (int i = 0; i < fr.t; ++i) {
            Eigen::VectorXcd const h = fr.H.col(i);
            cplx const lambda = g.sigma[fr.s + fr.t + i];
            double const r = (m.cast<cplx>() * h - lambda * h).norm() / std::max(1.0, h.norm());
            p.conjugation_residual = std::max(p.conjugation_residual, r);
        }
    }
    if (p.conjugation_residual > 1e-9)
        throw Error(ErrorCode::ConjugationCheckFailed,
                    "multiplication does not scale h by the conjugate embedding (residual "
                        + std::to_string(p.conjugation_residual) + ")");
    return p;
}

Eigen::MatrixXcd matrix_in_bprime(AmbientFrame const & fr, NumberField const & f, UnitElt const & g)
{
    Eigen::MatrixXcd const m = to_real(multiplication_matrix(g.elt, f)).cast<cplx>();
    return fr.P.partialPivLu().solve(m * fr.P);
}

BlockReport block_structure(AmbientFrame const & fr, NumberField const & f, UnitElt const & g)
{
    Eigen::MatrixXcd const m = matrix_in_bprime(fr, f, g);
    int const n = fr.degree();
    auto block_of = [&](int k) { return k < fr.s ? k : fr.s + (k - fr.s) / 2; };
    BlockReport r;
    r.imag = m.imag().cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (block_of(i) != block_of(j))
                r.off_block = std::max(r.off_block, std::abs(m(i, j)));
    for (int i = 0; i < fr.s; ++i)
        r.quotient_diag = std::max(r.quotient_diag, std::abs(m(i, i) - g.sigma[i]));
    return r;
}

int s1_intersection_nullity(AmbientFrame const & fr)
{
    int const n = fr.degree();
    // real parts of all s + t rows, imaginary parts of the complex ones
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < fr.s; ++i)
        a.row(i) = fr.BK.row(i).real();
    for (int j = 0; j < fr.t; ++j) {
        a.row(fr.s + 2 * j) = fr.BK.row(fr.s + j).real();
        a.row(fr.s + 2 * j + 1) = fr.BK.row(fr.s + j).imag();
    }
    return n - numeric_rank(a);
}

HComparison compare_to_h(AmbientFrame const & fr, Eigen::VectorXcd const & candidate, int i)
{
    HComparison c;
    Eigen::VectorXcd const h = fr.H.col(i);
    int pivot = 0;
    h.cwiseAbs().maxCoeff(&pivot);
    if (std::abs(candidate(pivot)) > 0)
        c.ratio = h(pivot) / candidate(pivot);
    c.proportional = std::abs(c.ratio) > 0
                     && (c.ratio * candidate - h).norm() <= 1e-9 * std::max(1.0, h.norm());
    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(fr.degree());
    target(fr.s + fr.t + i) = 1.0;
    c.residual = (fr.BK * candidate - target).norm();
    c.normalized = c.residual <= 1e-9;
    return c;
}

} // namespace nkcert
