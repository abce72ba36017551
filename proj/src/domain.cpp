#include "nkcert/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

using Word = std::vector<long>;

long word_length(Word const & w)
{
    long n = 0;
    for (long x : w)
        n += std::abs(x);
    return n;
}

std::vector<Word> ordered_words(QuotientFan const & fan)
{
    auto words = fan.words();
    std::stable_sort(words.begin(), words.end(), [](Word const & a, Word const & b) {
        long const la = word_length(a), lb = word_length(b);
        return la != lb ? la < lb : a < b;
    });
    return words;
}

Word add(Word a, Word const & b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] += b[k];
    return a;
}

Word sub(Word a, Word const & b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] -= b[k];
    return a;
}

bool in_support(QuotientFan const & fan, std::vector<double> const & y, double tol)
{
    return std::any_of(fan.sigma.begin(), fan.sigma.end(), [&](Cone const & c) { return cone_coefficients(c, y, tol).has_value(); });
}

// A = {g : g(x) in B},  S = {h : x in h(|Sigma|)}
struct WordSets {
    std::set<Word> a;
    std::set<Word> s;
};

WordSets word_sets(std::vector<double> const & x, DomainSpec const & spec, double tol)
{
    auto const & fan = spec.fan();
    WordSets ws;
    for (auto const & w : fan.words()) {
        auto const fac = word_factors(fan.w, w, fan.s);
        std::vector<double> gx(x), hinv(x);
        for (int i = 0; i < fan.s; ++i) {
            gx[i] *= fac[i];
            hinv[i] /= fac[i];
        }
        auto const bary = spec.barycentric(spec.l_part(gx));
        if (std::all_of(bary.begin(), bary.end(), [&](double v) { return v >= -tol; }))
            ws.a.insert(w);
        if (in_support(fan, hinv, tol))
            ws.s.insert(w);
    }
    return ws;
}

int complex_places(QuotientFan const & fan)
{
    if (fan.w.generators.empty())
        return 0;
    return (static_cast<int>(fan.w.generators[0].sigma.size()) - fan.s) / 2;
}

bool is_zero(std::vector<double> const & x)
{
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

} // namespace

DomainSpec::DomainSpec(QuotientFan fan)
{
    b_ = fan.w.rank();
    if (b_ == 0)
        throw Error(ErrorCode::DegenerateSimplex, "the simplex B_b needs b >= 1");
    vertices_.push_back(std::vector<double>(b_, 1.0));
    for (int i = 0; i < b_; ++i) {
        std::vector<double> c(b_);
        for (int j = 0; j < b_; ++j)
            c[j] = fan.w.generators[i].sigma[fan.omega.l_coords[j]].real();
        vertices_.push_back(std::move(c));
    }
    fan_ = std::move(fan);
    init();
}

DomainSpec::DomainSpec(std::vector<std::vector<double>> vertices) : vertices_(std::move(vertices))
{
    b_ = static_cast<int>(vertices_.size()) - 1;
    init();
}

void DomainSpec::init()
{
    if (b_ < 1)
        throw Error(ErrorCode::DegenerateSimplex, "need at least two vertices");
    for (auto const & v : vertices_) {
        if (static_cast<int>(v.size()) != b_)
            throw Error(ErrorCode::DegenerateSimplex, "vertex dimension does not match");
        for (double x : v)
            if (!(x > 0))
                throw Error(ErrorCode::DegenerateSimplex, "vertex coordinates must be positive");
    }
    Eigen::MatrixXd m(b_, b_);
    for (int i = 0; i < b_; ++i)
        for (int j = 0; j < b_; ++j)
            m(j, i) = vertices_[i + 1][j] - vertices_[0][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    auto const & sv = svd.singularValues();
    if (!(sv(b_ - 1) > 1e-9 * std::max(1.0, sv(0))))
        throw Error(ErrorCode::DegenerateSimplex, "vertices are affinely dependent");
    bary_inv_ = m.inverse();
}

std::vector<double> DomainSpec::barycentric(std::vector<double> const & y) const
{
    Eigen::VectorXd d(b_);
    for (int j = 0; j < b_; ++j)
        d(j) = y[j] - vertices_[0][j];
    Eigen::VectorXd const mu = bary_inv_ * d;
    std::vector<double> out(b_ + 1);
    out[0] = 1.0 - mu.sum();
    for (int i = 0; i < b_; ++i)
        out[i + 1] = mu(i);
    return out;
}

std::vector<double> DomainSpec::l_part(std::vector<double> const & x) const
{
    std::vector<double> y(b_);
    for (int j = 0; j < b_; ++j)
        y[j] = fan_ ? x[fan_->omega.l_coords[j]] : x[j];
    return y;
}

double DomainSpec::lower_bound_c() const
{
    double c = std::numeric_limits<double>::infinity();
    for (auto const & v : vertices_)
        for (double x : v)
            c = std::min(c, x);
    return c;
}

double DomainSpec::r_fit() const
{
    double vmax = 0.0;
    for (auto const & v : vertices_) {
        double n = 0;
        for (double x : v)
            n += x * x;
        vmax = std::max(vmax, std::sqrt(n));
    }
    if (!fan_)
        return vmax;
    // |x_N| <= rho * min_j x_{L_j} on |Sigma|, and W+ only shrinks that ratio
    double rho = 0.0;
    auto const & om = fan_->omega;
    for (auto const & c : fan_->sigma)
        for (auto const & r : c.rays) {
            double lmin = std::numeric_limits<double>::infinity(), nn = 0;
            for (int i = 0; i < fan_->s; ++i) {
                auto it = std::find(om.l_coords.begin(), om.l_coords.end(), i);
                if (it != om.l_coords.end())
                    lmin = std::min(lmin, om.signs[it - om.l_coords.begin()] * r.dir[i]);
                else
                    nn += r.dir[i] * r.dir[i];
            }
            if (!(lmin > 0))
                return std::numeric_limits<double>::infinity();
            rho = std::max(rho, std::sqrt(nn) / lmin);
        }
    return vmax * std::sqrt(1.0 + rho * rho);
}

bool in_B(std::vector<double> const & x, DomainSpec const & spec, double tol)
{
    auto const bary = spec.barycentric(spec.l_part(x));
    return std::all_of(bary.begin(), bary.end(), [&](double v) { return v >= -tol; });
}

std::vector<double> word_log_profile(SubgroupW const & w, std::vector<long> const & word, int s, int t)
{
    Labeling const lab = w.labeling.empty() ? identity_labeling(s) : w.labeling;
    std::vector<double> p(s + t, 0.0);
    for (std::size_t k = 0; k < word.size(); ++k) {
        if (word[k] == 0)
            continue;
        auto const & g = w.generators[k];
        for (int i = 0; i < s; ++i)
            p[i] += word[k] * std::log(std::abs(g.sigma[lab[i]]));
        for (int j = 0; j < t; ++j)
            p[s + j] += word[k] * std::log(std::abs(g.sigma[s + j]));
    }
    return p;
}

namespace {

WClass classify_profile(std::vector<double> const & p, int b)
{
    constexpr double eps = 1e-12;
    WClass c;
    bool const identity = std::all_of(p.begin(), p.end(), [](double v) { return std::abs(v) <= eps; });
    if (identity)
        return {true, true};
    for (int i = 0; i < b; ++i)
        c.in_w_gt1 = c.in_w_gt1 || p[i] >= -eps;
    c.in_w_plus = b > 0;
    for (int i = 0; i < b; ++i)
        for (std::size_t j = b; j < p.size(); ++j)
            c.in_w_plus = c.in_w_plus && p[i] - p[j] > eps;
    return c;
}

} // namespace

WClass classify_w(UnitElt const & g, SubgroupW const & w, int s, int t)
{
    Labeling const lab = w.labeling.empty() ? identity_labeling(s) : w.labeling;
    std::vector<double> p(s + t);
    for (int i = 0; i < s; ++i)
        p[i] = std::log(std::abs(g.sigma[lab[i]]));
    for (int j = 0; j < t; ++j)
        p[s + j] = std::log(std::abs(g.sigma[s + j]));
    return classify_profile(p, w.rank());
}

WClass classify_word(SubgroupW const & w, std::vector<long> const & word, int s, int t)
{
    return classify_profile(word_log_profile(w, word, s, t), w.rank());
}

char const * to_string(DPart p)
{
    switch (p) {
    case DPart::None: return "none";
    case DPart::D1: return "D1";
    case DPart::D2: return "D2";
    }
    return "?";
}

DMembership in_D(std::vector<double> const & x, DomainSpec const & spec, double tol)
{
    DMembership m;
    if (is_zero(x) || !spec.has_fan())
        return m;
    auto const & fan = spec.fan();
    int const t = complex_places(fan);
    auto const ws = word_sets(x, spec, tol);
    Word const zero(spec.b(), 0);
    for (auto const & h : ordered_words(fan)) {
        if (ws.a.count(zero) && ws.s.count(h) && classify_word(fan.w, h, fan.s, t).in_w_plus) {
            m.part = DPart::D1;
            m.eta = h;
            return m;
        }
    }
    if (ws.s.count(zero))
        for (auto const & a : ordered_words(fan)) {
            if (!ws.a.count(a))
                continue;
            Word const eta = sub(zero, a);
            if (classify_word(fan.w, eta, fan.s, t).in_w_gt1) {
                m.part = DPart::D2;
                m.eta = eta;
                return m;
            }
        }
    return m;
}

std::vector<std::vector<long>> tiling_witnesses(std::vector<double> const & x, DomainSpec const & spec, double tol,
                                                bool first_only)
{
    std::vector<Word> out;
    if (is_zero(x) || !spec.has_fan())
        return out;
    auto const & fan = spec.fan();
    int const t = complex_places(fan);
    auto const ws = word_sets(x, spec, tol);
    Word const zero(spec.b(), 0);
    for (auto const & g : ordered_words(fan)) {
        bool hit = false;
        // g(x) in D1: g in A and g + h in W+ for some h in S
        if (ws.a.count(g))
            for (auto const & h : ws.s)
                if (classify_word(fan.w, add(g, h), fan.s, t).in_w_plus) {
                    hit = true;
                    break;
                }
        // g(x) in D2: -g in S and g - a in W_{>1} for some a in A
        if (!hit && ws.s.count(sub(zero, g)))
            for (auto const & a : ws.a)
                if (classify_word(fan.w, sub(g, a), fan.s, t).in_w_gt1) {
                    hit = true;
                    break;
                }
        if (hit) {
            out.push_back(g);
            if (first_only)
                break;
        }
    }
    return out;
}

TilingReport tiling_check(DomainSpec const & spec, std::size_t samples, std::uint64_t seed, double tol)
{
    TilingReport rep;
    rep.samples = samples;
    rep.c = spec.lower_bound_c();
    rep.r_fit = spec.r_fit();
    if (!spec.has_fan())
        return rep;
    auto const & fan = spec.fan();
    auto const & om = fan.omega;
    int const s = fan.s;
    double const hi = 10.0 * rep.r_fit;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lu(std::log(rep.c / 10.0), std::log(hi));
    std::uniform_real_distribution<double> nu(std::log(1e-6), std::log(hi));
    std::bernoulli_distribution coin;
    for (std::size_t it = 0; it < samples; ++it) {
        std::vector<double> x(s);
        for (int i = 0; i < s; ++i)
            x[i] = (coin(rng) ? 1.0 : -1.0) * std::exp(nu(rng));
        for (std::size_t k = 0; k < om.l_coords.size(); ++k)
            x[om.l_coords[k]] = om.signs[k] * std::exp(lu(rng));
        auto const w = tiling_witnesses(x, spec, tol, true);
        if (w.empty()) {
            rep.gaps.push_back(x);
            continue;
        }
        ++rep.tiled;
        auto const fac = word_factors(fan.w, w[0], s);
        std::vector<double> gx(x);
        double norm = 0;
        for (int i = 0; i < s; ++i) {
            gx[i] *= fac[i];
            norm += gx[i] * gx[i];
        }
        if (in_D(gx, spec, tol).part == DPart::D1)
            rep.max_d1_norm = std::max(rep.max_d1_norm, std::sqrt(norm));
    }
    rep.d1_bounded = rep.max_d1_norm <= rep.r_fit * (1.0 + tol);

    // |eta(x)| >= C for x in B and eta in W_{>1}
    int const t = complex_places(fan);
    std::exponential_distribution<double> ex;
    std::uniform_int_distribution<long> wd(-fan.window, fan.window);
    std::uniform_real_distribution<double> box(-rep.r_fit, rep.r_fit);
    rep.min_norm = std::numeric_limits<double>::infinity();
    int const b = spec.b();
    for (std::size_t it = 0; it < samples; ++it) {
        std::vector<double> lam(b + 1);
        double tot = 0;
        for (auto & l : lam)
            tot += (l = ex(rng));
        std::vector<double> x(s);
        for (int i = 0; i < s; ++i)
            x[i] = box(rng);
        for (int j = 0; j < b; ++j) {
            double v = 0;
            for (int k = 0; k <= b; ++k)
                v += lam[k] / tot * spec.vertices()[k][j];
            x[om.l_coords[j]] = om.signs[j] * v;
        }
        Word eta(b);
        for (int tries = 0; tries < 100; ++tries) {
            for (auto & e : eta)
                e = wd(rng);
            if (classify_word(fan.w, eta, s, t).in_w_gt1)
                break;
        }
        if (!classify_word(fan.w, eta, s, t).in_w_gt1)
            continue;
        auto const fac = word_factors(fan.w, eta, s);
        double norm = 0;
        for (int i = 0; i < s; ++i)
            norm += std::pow(x[i] * fac[i], 2);
        rep.min_norm = std::min(rep.min_norm, std::sqrt(norm));
    }
    rep.norm_bound_ok = rep.min_norm >= rep.c - 1e-9;
    return rep;
}

BbTilingReport tiling_of_Bb(DomainSpec const & spec, std::size_t samples, std::uint64_t seed, int search)
{
    int const b = spec.b();
    auto const & v = spec.vertices();
    Eigen::MatrixXd lat(b, b);
    Eigen::VectorXd base(b);
    for (int j = 0; j < b; ++j) {
        base(j) = std::log(v[0][j]);
        for (int i = 0; i < b; ++i)
            lat(j, i) = std::log(v[i + 1][j]) - base(j);
    }
    BbTilingReport rep;
    rep.samples = samples;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lat);
    if (!(svd.singularValues()(b - 1) > 1e-9))
        return rep;

    std::vector<Word> shifts;
    {
        Word e(b, -search);
        while (true) {
            shifts.push_back(e);
            int i = b - 1;
            while (i >= 0 && e[i] == search) {
                e[i] = -search;
                --i;
            }
            if (i < 0)
                break;
            ++e[i];
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t it = 0; it < samples; ++it) {
        Eigen::VectorXd tt(b);
        for (int i = 0; i < b; ++i)
            tt(i) = u(rng);
        Eigen::VectorXd const p = base + lat * tt;
        for (auto const & e : shifts) {
            Eigen::VectorXd q = p;
            for (int i = 0; i < b; ++i)
                q -= static_cast<double>(e[i]) * lat.col(i);
            std::vector<double> y(b);
            for (int j = 0; j < b; ++j)
                y[j] = std::exp(q(j));
            auto const bary = spec.barycentric(y);
            if (std::all_of(bary.begin(), bary.end(), [](double x) { return x >= -1e-9; })) {
                ++rep.covered;
                break;
            }
        }
    }
    rep.tiles = rep.covered == rep.samples;
    return rep;
}

} // namespace nkcert
