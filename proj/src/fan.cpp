#include "nkcert/fan.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nkcert/error.hpp"
#include "nkcert/lp.hpp"

namespace nkcert {

namespace {

std::vector<double> normalized(std::vector<double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    if (m > 0)
        for (auto & x : v)
            x /= m;
    return v;
}

std::string word_str(std::vector<long> const & w)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < w.size(); ++k)
        os << (k ? "," : "") << w[k];
    os << ')';
    return os.str();
}

std::vector<std::vector<long>> all_words(int b, int window)
{
    std::vector<std::vector<long>> out;
    if (b == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<long> e(b, -window);
    while (true) {
        out.push_back(e);
        int i = b - 1;
        while (i >= 0 && e[i] == window) {
            e[i] = -window;
            --i;
        }
        if (i < 0)
            break;
        ++e[i];
    }
    return out;
}

bool is_zero_word(std::vector<long> const & w)
{
    return std::all_of(w.begin(), w.end(), [](long x) { return x == 0; });
}

// Some coordinate is strictly positive on a and strictly negative on b (or vice versa).
bool sign_separated(Cone const & a, Cone const & b, int s)
{
    for (int i = 0; i < s; ++i) {
        auto sign_of = [i](Cone const & c) {
            int sg = 0;
            for (auto const & r : c.rays) {
                int const x = r.dir[i] > 0 ? 1 : (r.dir[i] < 0 ? -1 : 0);
                if (x == 0 || (sg != 0 && x != sg))
                    return 0;
                sg = x;
            }
            return sg;
        };
        int const sa = sign_of(a), sb = sign_of(b);
        if (sa != 0 && sb == -sa)
            return true;
    }
    return false;
}

int dim_of(Cone const & c)
{
    return c.rays.empty() ? 0 : static_cast<int>(c.rays[0].dir.size());
}

} // namespace

bool same_direction(std::vector<double> const & a, std::vector<double> const & b, double tol)
{
    if (a.size() != b.size())
        return false;
    auto const na = normalized(a), nb = normalized(b);
    for (std::size_t i = 0; i < na.size(); ++i) {
        double const scale = std::max(std::abs(na[i]), std::abs(nb[i]));
        if (std::abs(na[i] - nb[i]) > tol * scale)
            return false;
    }
    return true;
}

bool same_cone(Cone const & a, Cone const & b, double tol)
{
    if (a.size() != b.size())
        return false;
    for (auto const & r : a.rays) {
        bool found = false;
        for (auto const & q : b.rays)
            if (same_direction(r.dir, q.dir, tol)) {
                found = true;
                break;
            }
        if (!found)
            return false;
    }
    return true;
}

std::optional<std::vector<double>> cone_coefficients(Cone const & c, std::vector<double> const & x, double tol)
{
    int const s = static_cast<int>(x.size());
    int const k = c.size();
    if (k == 0)
        return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })
                   ? std::optional<std::vector<double>>(std::vector<double>{})
                   : std::nullopt;
    auto const xn = normalized(x);
    Eigen::MatrixXd r(s, k);
    for (int j = 0; j < k; ++j) {
        auto const d = normalized(c.rays[j].dir);
        for (int i = 0; i < s; ++i)
            r(i, j) = d[i];
    }
    Eigen::VectorXd xv = Eigen::Map<Eigen::VectorXd const>(xn.data(), s);

    if (k == s) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
        if (lu.isInvertible()) {
            Eigen::VectorXd const lam = lu.solve(xv);
            for (int j = 0; j < k; ++j)
                if (lam(j) < -tol)
                    return std::nullopt;
            return std::vector<double>(lam.data(), lam.data() + k);
        }
    }

    // min sum |residual| over lambda >= 0
    LinearProgram lp;
    lp.c.assign(k + 2 * s, 0.0);
    for (int i = 0; i < 2 * s; ++i)
        lp.c[k + i] = -1.0;
    for (int i = 0; i < s; ++i) {
        std::vector<double> row(k + 2 * s, 0.0);
        for (int j = 0; j < k; ++j)
            row[j] = r(i, j);
        row[k + i] = 1.0;
        row[k + s + i] = -1.0;
        lp.add(std::move(row), Sense::Eq, xv(i));
    }
    auto const res = solve_lp(lp);
    if (!res.feasible || -res.value > tol)
        return std::nullopt;
    return std::vector<double>(res.x.begin(), res.x.begin() + k);
}

bool cone_contains(Cone const & c, std::vector<double> const & x, double tol)
{
    return cone_coefficients(c, x, tol).has_value();
}

bool cones_overlap(Cone const & a, Cone const & b)
{
    int const s = dim_of(a);
    if (a.size() == 0 || b.size() == 0)
        return false;
    if (sign_separated(a, b, s))
        return false;
    int const ka = a.size(), kb = b.size();
    LinearProgram lp;
    lp.c.assign(ka + kb, 0.0);
    for (int i = 0; i < s; ++i) {
        std::vector<double> row(ka + kb);
        for (int j = 0; j < ka; ++j)
            row[j] = normalized(a.rays[j].dir)[i];
        for (int j = 0; j < kb; ++j)
            row[ka + j] = -normalized(b.rays[j].dir)[i];
        lp.add(std::move(row), Sense::Eq, 0.0);
    }
    std::vector<double> norm(ka + kb, 0.0);
    std::fill(norm.begin(), norm.begin() + ka, 1.0);
    lp.add(std::move(norm), Sense::Eq, 1.0);
    return solve_lp(lp).feasible;
}

bool meet_in_common_face(Cone const & a, Cone const & b)
{
    int const s = dim_of(a);
    std::vector<std::vector<double>> shared, only_a, only_b;
    for (auto const & r : a.rays) {
        bool in_b = false;
        for (auto const & q : b.rays)
            in_b = in_b || same_direction(r.dir, q.dir);
        (in_b ? shared : only_a).push_back(normalized(r.dir));
    }
    for (auto const & q : b.rays) {
        bool in_a = false;
        for (auto const & r : a.rays)
            in_a = in_a || same_direction(r.dir, q.dir);
        if (!in_a)
            only_b.push_back(normalized(q.dir));
    }
    if (only_a.empty() && only_b.empty())
        return true;

    // variables u+ (s), u- (s), eps; maximize eps
    int const nv = 2 * s + 1;
    LinearProgram lp;
    lp.c.assign(nv, 0.0);
    lp.c[2 * s] = 1.0;
    auto row_for = [&](std::vector<double> const & d, double eps_coef) {
        std::vector<double> row(nv, 0.0);
        for (int i = 0; i < s; ++i) {
            row[i] = d[i];
            row[s + i] = -d[i];
        }
        row[2 * s] = eps_coef;
        return row;
    };
    for (auto const & d : shared)
        lp.add(row_for(d, 0.0), Sense::Eq, 0.0);
    for (auto const & d : only_a)
        lp.add(row_for(d, -1.0), Sense::Ge, 0.0);
    for (auto const & d : only_b)
        lp.add(row_for(d, 1.0), Sense::Le, 0.0);
    for (int i = 0; i < nv; ++i) {
        std::vector<double> row(nv, 0.0);
        row[i] = 1.0;
        lp.add(std::move(row), Sense::Le, 1.0);
    }
    auto const res = solve_lp(lp);
    return res.feasible && res.value > 1e-9;
}

bool OmegaCone::in_omega(std::vector<double> const & x, double tol) const
{
    double scale = 0.0;
    for (double v : x)
        scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < l_coords.size(); ++k)
        if (!(signs[k] * x[l_coords[k]] > tol * scale))
            return false;
    return scale > 0;
}

bool OmegaCone::in_l_plus(std::vector<double> const & x, double tol) const
{
    if (!in_omega(x, tol))
        return false;
    double scale = 0.0;
    for (double v : x)
        scale = std::max(scale, std::abs(v));
    for (int i = 0; i < s; ++i)
        if (std::find(l_coords.begin(), l_coords.end(), i) == l_coords.end() && std::abs(x[i]) > tol * scale)
            return false;
    return true;
}

bool OmegaCone::in_support_region(std::vector<double> const & x, double tol) const
{
    return in_omega(x, tol) && !in_l_plus(x, tol);
}

OmegaCone omega_for(SubgroupW const & w, int s)
{
    OmegaCone o;
    o.s = s;
    Labeling const lab = w.labeling.empty() ? identity_labeling(s) : w.labeling;
    for (int k = 0; k < w.rank(); ++k) {
        o.l_coords.push_back(lab[k]);
        o.signs.push_back(1);
    }
    return o;
}

Ray act(NumberField const & f, UnitElt const & g, Ray const & r)
{
    Ray out = r;
    for (std::size_t i = 0; i < out.dir.size(); ++i)
        out.dir[i] *= g.sigma[i].real();
    if (out.tag)
        out.tag = mul(*out.tag, g.elt, f);
    return out;
}

Cone act(NumberField const & f, UnitElt const & g, Cone const & c)
{
    Cone out;
    for (auto const & r : c.rays)
        out.rays.push_back(act(f, g, r));
    return out;
}

std::vector<double> word_factors(SubgroupW const & w, std::vector<long> const & word, int s)
{
    std::vector<double> fac(s, 1.0);
    for (std::size_t k = 0; k < word.size(); ++k)
        if (word[k] != 0)
            for (int i = 0; i < s; ++i)
                fac[i] *= std::pow(w.generators[k].sigma[i].real(), static_cast<double>(word[k]));
    return fac;
}

Cone act_word(SubgroupW const & w, std::vector<long> const & word, Cone const & c, int s)
{
    auto const fac = word_factors(w, word, s);
    Cone out;
    for (auto const & r : c.rays) {
        Ray q{r.dir, std::nullopt};
        for (int i = 0; i < s; ++i)
            q.dir[i] *= fac[i];
        out.rays.push_back(std::move(q));
    }
    return out;
}

std::vector<std::vector<long>> QuotientFan::words() const { return all_words(w.rank(), window); }

std::vector<OrbitCone> QuotientFan::orbit() const
{
    std::vector<OrbitCone> out;
    for (auto const & word : words())
        for (std::size_t i = 0; i < sigma.size(); ++i)
            out.push_back({static_cast<int>(i), word, act_word(w, word, sigma[i], s)});
    return out;
}

std::optional<FieldElement> find_tag(NumberField const & f, EmbeddingTable const & e, std::vector<double> const & dir,
                                     int window)
{
    int const n = f.degree();
    int const s = e.s;
    std::optional<FieldElement> best;
    long best_len = 0;
    for (auto const & c : all_words(n, window)) {
        if (is_zero_word(c))
            continue;
        long len = 0;
        for (long x : c)
            len += std::abs(x);
        if (best && len >= best_len)
            continue;
        FieldElement x = from_coords(c);
        auto const sig = sigma_K(f, x, e);
        double dot = 0, dd = 0, nn = 0;
        for (int i = 0; i < s; ++i) {
            dot += sig[i].real() * dir[i];
            dd += dir[i] * dir[i];
            nn += std::norm(sig[i]);
        }
        double const lam = dot / dd;
        if (!(lam > 0))
            continue;
        double res = 0;
        for (int i = 0; i < s; ++i)
            res += std::pow(sig[i].real() - lam * dir[i], 2);
        if (std::sqrt(res) <= 1e-9 * std::sqrt(nn)) {
            best = x;
            best_len = len;
        }
    }
    return best;
}

QuotientFan build_fan_s2(NumberField const & f, EmbeddingTable const & e, SubgroupW const & w, int window)
{
    if (e.s != 2)
        throw Error(ErrorCode::WrongSignature, "fan generation needs exactly two real places, got "
                                                   + std::to_string(e.s));
    if (w.rank() != 1)
        throw Error(ErrorCode::WrongSignature, "fan generation needs a rank-1 subgroup, got rank "
                                                   + std::to_string(w.rank()));
    Labeling const lab = w.labeling.empty() ? identity_labeling(2) : w.labeling;
    int const l = lab[0], m = lab[1];
    UnitElt const & g = w.generators[0];
    if (!(g.sigma[l].real() > 1.0) || !(g.sigma[m].real() > 0.0))
        throw Error(ErrorCode::WrongSignature, "generator must be totally positive and expanding on L");

    QuotientFan fan;
    fan.s = 2;
    fan.w = w;
    fan.w.labeling = lab;
    fan.omega = omega_for(fan.w, 2);
    fan.window = window;

    Ray r1{{1.0, 1.0}, field_one(f)};
    std::vector<double> d3(2);
    d3[l] = 1.0;
    d3[m] = -1.0;
    Ray r3{d3, find_tag(f, e, d3)};
    fan.sigma.push_back(Cone{{r1, act(f, g, r1)}});
    fan.sigma.push_back(Cone{{r3, act(f, g, r3)}});
    return fan;
}

ActionReport check_action(QuotientFan const & fan)
{
    ActionReport rep;
    int const s = fan.s;
    int const b = fan.w.rank();
    auto const words = fan.words();
    auto const orbit = fan.orbit();
    std::size_t const nsig = fan.sigma.size();
    auto index_of = [&](std::vector<long> const & word) {
        // words are enumerated lexicographically over [-window, window]^b
        std::size_t idx = 0;
        for (long e : word)
            idx = idx * (2 * fan.window + 1) + static_cast<std::size_t>(e + fan.window);
        return idx;
    };

    // invariance: support, and g_k (g sigma_i) re-identified as (g + e_k) sigma_i
    rep.invariant = true;
    for (auto const & oc : orbit)
        for (auto const & r : oc.cone.rays)
            if (!fan.omega.in_support_region(r.dir)) {
                if (rep.invariant)
                    rep.witnesses.push_back("ray of cone " + std::to_string(oc.base) + " under word "
                                            + word_str(oc.word) + " leaves Omega \\ L+");
                rep.invariant = false;
            }
    for (auto const & oc : orbit)
        for (int k = 0; k < b; ++k) {
            auto next = oc.word;
            ++next[k];
            if (next[k] > fan.window)
                continue;
            std::vector<long> unit(b, 0);
            unit[k] = 1;
            Cone const acted = act_word(fan.w, unit, oc.cone, s);
            auto const & expected = orbit[index_of(next) * nsig + oc.base].cone;
            if (same_cone(acted, expected))
                continue;
            bool found = std::any_of(orbit.begin(), orbit.end(),
                                     [&](OrbitCone const & o) { return same_cone(acted, o.cone); });
            if (!found) {
                rep.invariant = false;
                rep.witnesses.push_back("acted cone " + std::to_string(oc.base) + word_str(next) + " not in orbit");
            }
        }

    // freeness: no g != 1 fixes a cone of Sigma or one of its rays
    rep.free = true;
    for (auto const & word : words) {
        if (is_zero_word(word))
            continue;
        for (std::size_t i = 0; i < nsig; ++i) {
            Cone const moved = act_word(fan.w, word, fan.sigma[i], s);
            bool fixed = same_cone(moved, fan.sigma[i]);
            for (int j = 0; j < moved.size() && !fixed; ++j)
                fixed = same_direction(moved.rays[j].dir, fan.sigma[i].rays[j].dir);
            if (fixed) {
                rep.free = false;
                rep.witnesses.push_back("word " + word_str(word) + " fixes (a ray of) cone " + std::to_string(i));
            }
        }
    }

    // overlaps of sigma_i with g sigma_j
    rep.properly_discontinuous = true;
    rep.fan_property = true;
    for (std::size_t i = 0; i < nsig; ++i)
        for (auto const & oc : orbit) {
            bool const self = oc.base == static_cast<int>(i);
            bool const trivial = is_zero_word(oc.word);
            if (self && trivial)
                continue;
            if (!cones_overlap(fan.sigma[i], oc.cone))
                continue;
            bool const face = meet_in_common_face(fan.sigma[i], oc.cone);
            if (!face) {
                rep.fan_property = false;
                rep.witnesses.push_back("cone " + std::to_string(i) + " and cone " + std::to_string(oc.base)
                                        + word_str(oc.word) + " overlap outside a common face");
            }
            if (self) {
                rep.overlap_words.push_back(oc.word);
                bool at_edge = std::any_of(oc.word.begin(), oc.word.end(),
                                           [&](long e) { return std::abs(e) >= fan.window; });
                if (at_edge || !face)
                    rep.properly_discontinuous = false;
            }
        }
    return rep;
}

std::vector<Location> locate(QuotientFan const & fan, std::vector<double> const & x)
{
    std::vector<Location> out;
    for (auto const & word : fan.words()) {
        auto const fac = word_factors(fan.w, word, fan.s);
        std::vector<double> y(x);
        for (int i = 0; i < fan.s; ++i)
            y[i] /= fac[i];
        for (std::size_t i = 0; i < fan.sigma.size(); ++i) {
            auto const coef = cone_coefficients(fan.sigma[i], y);
            if (!coef)
                continue;
            bool interior = fan.sigma[i].size() == fan.s;
            for (double c : *coef)
                interior = interior && c > 1e-9;
            out.push_back({{static_cast<int>(i), word, act_word(fan.w, word, fan.sigma[i], fan.s)}, interior});
        }
    }
    return out;
}

SupportReport support_check(QuotientFan const & fan, std::size_t samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    SupportReport rep;
    rep.samples = samples;
    for (std::size_t it = 0; it < samples; ++it) {
        std::vector<double> x(fan.s);
        for (int i = 0; i < fan.s; ++i)
            x[i] = u(rng);
        for (std::size_t k = 0; k < fan.omega.l_coords.size(); ++k)
            x[fan.omega.l_coords[k]] = fan.omega.signs[k] * pos(rng);
        if (!fan.omega.in_support_region(x)) {
            ++rep.outside_region;
            continue;
        }
        auto const locs = locate(fan, x);
        if (locs.empty())
            continue;
        ++rep.covered;
        std::size_t interior = 0;
        for (auto const & l : locs)
            interior += l.interior;
        if (interior > 1 || (interior == 1 && locs.size() > 1))
            ++rep.conflicts;
    }
    return rep;
}

CollapseReport cone_collapse_check(OmegaCone const & omega, double delta, UnitElt const & g, int k_max,
                                   std::size_t samples, std::uint64_t seed)
{
    int const s = omega.s;
    if (omega.l_coords.empty() || omega.h() == 0)
        throw Error(ErrorCode::CollapseFailed, "both L and N must be nontrivial");
    std::vector<bool> is_l(s, false);
    for (int c : omega.l_coords)
        is_l[c] = true;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.05, 1.0);
    auto ratio = [&](std::vector<double> const & v) {
        double l = 0, n = 0;
        for (int i = 0; i < s; ++i)
            (is_l[i] ? l : n) += v[i] * v[i];
        return l / n;
    };

    std::vector<std::vector<double>> pts;
    for (std::size_t it = 0; it < samples; ++it) {
        std::vector<double> v(s);
        for (auto & x : v)
            x = nd(rng);
        double const r = ratio(v);
        if (r < delta) {
            double const scale = std::sqrt(r / delta) * ud(rng);
            for (int i = 0; i < s; ++i)
                if (!is_l[i])
                    v[i] *= scale;
        }
        pts.push_back(std::move(v));
    }

    CollapseReport rep;
    rep.k_max = k_max;
    rep.samples = samples;
    double fitted = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> ratios(pts.size());
    for (std::size_t p = 0; p < pts.size(); ++p) {
        auto v = pts[p];
        ratios[p].push_back(ratio(v));
        for (int k = 1; k <= k_max; ++k) {
            for (int i = 0; i < s; ++i)
                v[i] *= g.sigma[i].real();
            double const rk = ratio(v);
            ratios[p].push_back(rk);
            fitted = std::min(fitted, std::pow(rk / ratios[p][0], 1.0 / k));
        }
    }
    if (!(fitted > 1.0))
        throw Error(ErrorCode::CollapseFailed, "g does not push C_delta towards L_+ (fitted N = "
                                                   + std::to_string(fitted) + ")");
    rep.fitted_n = fitted;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (auto const & rs : ratios)
        for (int k = 0; k <= k_max; ++k)
            rep.min_margin = std::min(rep.min_margin, std::log(rs[k]) - k * std::log(fitted) - std::log(delta));
    return rep;
}

DivisorReport divisor_certificate(QuotientFan const & fan, Ray const & ray, NumberField const & f,
                                  EmbeddingTable const & e, std::size_t directions, std::uint64_t seed)
{
    int const s = fan.s;
    DivisorReport rep;
    std::vector<Cone> star;
    std::optional<FieldElement> tag = ray.tag;
    for (auto const & oc : fan.orbit()) {
        for (int j = 0; j < oc.cone.size(); ++j) {
            if (!same_direction(oc.cone.rays[j].dir, ray.dir))
                continue;
            star.push_back(oc.cone);
            auto const & base_ray = fan.sigma[oc.base].rays[j];
            if (!tag && base_ray.tag) {
                FieldElement t = *base_ray.tag;
                for (std::size_t k = 0; k < oc.word.size(); ++k)
                    t = mul(t, power(fan.w.generators[k].elt, oc.word[k], f), f);
                tag = t;
            }
            break;
        }
    }
    if (star.empty())
        throw Error(ErrorCode::RayNotInFan, "ray is not a ray of any enumerated cone");
    rep.star_cones = star.size();
    rep.quotient_dimension = s - 1;

    // orthonormal complement of the ray
    Eigen::VectorXd r = Eigen::Map<Eigen::VectorXd const>(ray.dir.data(), s).normalized();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r.transpose(), Eigen::ComputeFullV);
    Eigen::MatrixXd const q = svd.matrixV().rightCols(s - 1);

    std::vector<Cone> images;
    for (auto const & c : star) {
        Cone img;
        for (auto const & x : c.rays) {
            if (same_direction(x.dir, ray.dir))
                continue;
            Eigen::VectorXd const v = q.transpose() * Eigen::Map<Eigen::VectorXd const>(x.dir.data(), s);
            std::vector<double> d(v.data(), v.data() + v.size());
            img.rays.push_back({d, std::nullopt});
            bool seen = std::any_of(rep.quotient_rays.begin(), rep.quotient_rays.end(),
                                    [&](auto const & y) { return same_direction(y, d); });
            if (!seen)
                rep.quotient_rays.push_back(normalized(d));
        }
        images.push_back(std::move(img));
    }

    if (s - 1 == 0) {
        rep.complete = true;
    } else {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        rep.complete = true;
        for (std::size_t it = 0; it < directions && rep.complete; ++it) {
            std::vector<double> d(s - 1);
            for (auto & x : d)
                x = nd(rng);
            // always include both signs of the first axis
            if (it < 2) {
                std::fill(d.begin(), d.end(), 0.0);
                d[0] = it == 0 ? 1.0 : -1.0;
            }
            rep.complete = std::any_of(images.begin(), images.end(),
                                       [&](Cone const & c) { return cone_contains(c, d); });
        }
    }
    if (rep.complete && rep.quotient_dimension == 1 && rep.quotient_rays.size() == 2)
        rep.kind = "Hopf surface";
    else if (rep.complete)
        rep.kind = "complete quotient fan";
    else
        rep.kind = "incomplete";

    if (tag)
        rep.tag_embedding = sigma_K(f, *tag, e);
    if (e.t >= 1) {
        auto const beta = e.values[e.s];
        rep.elliptic_residual = std::abs((1.0 - std::conj(beta)) - (beta - 1.0) / beta);
    }
    return rep;
}

} // namespace nkcert
