#include "nkcert/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/Dense>

#include "nkcert/error.hpp"

namespace nkcert {

bool UnitElt::totally_positive(int s) const
{
    for (int i = 0; i < s; ++i)
        if (!(sigma[i].real() > 0.0))
            return false;
    return true;
}

namespace {

std::vector<double> profile_of(std::vector<std::complex<double>> const & sigma, int s, int t)
{
    std::vector<double> p(s + t);
    for (int i = 0; i < s; ++i)
        p[i] = sigma[i].real();
    for (int j = 0; j < t; ++j)
        p[s + j] = std::abs(sigma[s + j]);
    return p;
}

UnitElt assemble(FieldElement x, std::vector<std::complex<double>> sigma, EmbeddingTable const & e)
{
    // real places carry exactly real values
    for (int i = 0; i < e.s; ++i)
        sigma[i] = {sigma[i].real(), 0.0};
    UnitElt u{std::move(x), std::move(sigma), {}};
    u.eta_profile = profile_of(u.sigma, e.s, e.t);
    return u;
}

std::vector<std::vector<int>> subsets(int n, int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto && self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

Labeling labeling_from_subset(std::vector<int> const & first, int s)
{
    Labeling lab = first;
    for (int i = 0; i < s; ++i)
        if (std::find(first.begin(), first.end(), i) == first.end())
            lab.push_back(i);
    return lab;
}

// Calls fn on every nonzero vector of [-w, w]^k in lexicographic order; stops when fn returns false.
template <class Fn>
void for_each_word(int k, int w, Fn && fn)
{
    std::vector<long> e(k, -w);
    while (true) {
        if (std::any_of(e.begin(), e.end(), [](long x) { return x != 0; }))
            if (!fn(e))
                return;
        int i = k - 1;
        while (i >= 0 && e[i] == w) {
            e[i] = -w;
            --i;
        }
        if (i < 0)
            return;
        ++e[i];
    }
}

// Max margin over rows of m lying in Q_b, or nullopt when no row does.
std::optional<double> qualifying_margin(PhiMatrix const & m)
{
    std::optional<double> best;
    for (int i = 0; i < m.rows(); ++i)
        if (m.row_in_q(i))
            best = std::max(best.value_or(0.0), m.row_margin(i));
    return best;
}

bool is_trivial(SubgroupW const & w, int s, int t)
{
    for (auto const & g : w.generators)
        for (double v : log_embedding(g, s, t))
            if (std::abs(v) > 1e-12)
                return false;
    return true;
}

} // namespace

UnitElt make_unit(NumberField const & f, EmbeddingTable const & e, FieldElement x)
{
    if (!x.is_integral())
        throw Error(ErrorCode::NotAUnit, "element is not integral");
    Rational const nm = field_norm(x, f);
    if (abs(nm) != 1)
        throw Error(ErrorCode::NotAUnit, "norm is " + nm.get_str() + ", not +-1");
    auto sigma = sigma_K(f, x, e);
    return assemble(std::move(x), std::move(sigma), e);
}

UnitElt unit_word(NumberField const & f, EmbeddingTable const & e, std::span<UnitElt const> base,
                  std::span<long const> exps)
{
    if (base.size() != exps.size())
        throw Error(ErrorCode::NotIndependent, "word length does not match generator count");
    FieldElement x = field_one(f);
    std::vector<std::complex<double>> sigma(e.degree(), 1.0);
    for (std::size_t k = 0; k < base.size(); ++k) {
        if (exps[k] == 0)
            continue;
        x = mul(x, power(base[k].elt, exps[k], f), f);
        for (int i = 0; i < e.degree(); ++i)
            sigma[i] *= std::pow(base[k].sigma[i], static_cast<double>(exps[k]));
    }
    return assemble(std::move(x), std::move(sigma), e);
}

UnitElt unit_inverse(NumberField const & f, EmbeddingTable const & e, UnitElt const & u)
{
    std::vector<std::complex<double>> sigma;
    for (auto z : u.sigma)
        sigma.push_back(1.0 / z);
    return assemble(inverse(u.elt, f), std::move(sigma), e);
}

std::vector<double> log_embedding(UnitElt const & u, int s, int t)
{
    std::vector<double> l(s + t);
    for (int i = 0; i < s; ++i)
        l[i] = std::log(std::abs(u.sigma[i]));
    for (int j = 0; j < t; ++j)
        l[s + j] = 2.0 * std::log(std::abs(u.sigma[s + j]));
    return l;
}

Labeling identity_labeling(int s)
{
    Labeling lab(s);
    std::iota(lab.begin(), lab.end(), 0);
    return lab;
}

std::vector<double> labeled_profile(UnitElt const & u, Labeling const & lab, int s, int t)
{
    std::vector<double> p(s + t);
    for (int i = 0; i < s; ++i)
        p[i] = u.eta_profile[lab[i]];
    for (int j = 0; j < t; ++j)
        p[s + j] = u.eta_profile[s + j];
    return p;
}

bool PhiMatrix::row_in_q(int i, double zero_tol) const { return row_sign(i, zero_tol) != 0; }

int PhiMatrix::row_sign(int i, double zero_tol) const
{
    if (cols_ == 0)
        return 0;
    int sign = 0;
    for (int j = 0; j < cols_; ++j) {
        double const v = (*this)(i, j);
        if (std::abs(v) < zero_tol)
            return 0;
        int const sj = v > 0 ? 1 : -1;
        if (sign != 0 && sj != sign)
            return 0;
        sign = sj;
    }
    return sign;
}

double PhiMatrix::row_margin(int i) const
{
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < cols_; ++j)
        m = std::min(m, std::abs((*this)(i, j)));
    return m;
}

PhiMatrix & PhiMatrix::operator+=(PhiMatrix const & o)
{
    for (std::size_t k = 0; k < entries_.size(); ++k)
        entries_[k] += o.entries_[k];
    return *this;
}

PhiMatrix PhiMatrix::scaled(double k) const
{
    PhiMatrix r = *this;
    for (auto & v : r.entries_)
        v *= k;
    return r;
}

PhiMatrix phi_b(UnitElt const & u, int b, Labeling const & lab, int s, int t)
{
    auto const p = labeled_profile(u, lab, s, t);
    for (double v : p)
        if (!(v > 0.0))
            throw Error(ErrorCode::NonPositiveProfile, "unit is not totally positive");
    int const g = s + t - b;
    PhiMatrix m(b, g);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < g; ++j)
            m(i, j) = std::log(p[i] / p[b + j]);
    return m;
}

char const * to_string(AssumptionCStatus s)
{
    switch (s) {
    case AssumptionCStatus::Exact: return "exact";
    case AssumptionCStatus::WindowVerified: return "window-verified";
    case AssumptionCStatus::Refuted: return "refuted";
    }
    return "?";
}

char const * to_string(Mode m)
{
    switch (m) {
    case Mode::Construction: return "construction";
    case Mode::OT: return "ot";
    case Mode::LVMB: return "lvmb";
    }
    return "?";
}

AssumptionCResult check_assumption_c(SubgroupW & w, int s, int t, int window)
{
    int const b = w.rank();
    AssumptionCResult res;
    if (b == 0 || is_trivial(w, s, t)) {
        res.status = AssumptionCStatus::Exact;
        res.labeling = w.labeling.empty() ? identity_labeling(s) : w.labeling;
        w.labeling = res.labeling;
        return res;
    }
    if (b >= s)
        throw Error(ErrorCode::RankTooLarge, "rank " + std::to_string(b) + " needs at least "
                                                 + std::to_string(b + 1) + " real places");

    std::optional<std::vector<long>> first_witness;
    for (auto const & sub : subsets(s, b)) {
        Labeling const lab = labeling_from_subset(sub, s);
        std::vector<PhiMatrix> phis;
        for (auto const & g : w.generators)
            phis.push_back(phi_b(g, b, lab, s, t));

        if (b == 1) {
            if (auto m = qualifying_margin(phis[0])) {
                res.status = AssumptionCStatus::Exact;
                res.labeling = lab;
                res.margin = *m;
                w.labeling = lab;
                return res;
            }
            if (!first_witness)
                first_witness = std::vector<long>{1};
            continue;
        }

        double margin = std::numeric_limits<double>::infinity();
        std::optional<std::vector<long>> fail;
        for_each_word(b, window, [&](std::vector<long> const & e) {
            PhiMatrix m(b, s + t - b);
            for (int k = 0; k < b; ++k)
                if (e[k] != 0)
                    m += phis[k].scaled(static_cast<double>(e[k]));
            auto q = qualifying_margin(m);
            if (!q) {
                fail = e;
                return false;
            }
            margin = std::min(margin, *q);
            return true;
        });
        if (!fail) {
            res.status = AssumptionCStatus::WindowVerified;
            res.labeling = lab;
            res.margin = margin;
            w.labeling = lab;
            return res;
        }
        if (!first_witness)
            first_witness = fail;
    }
    res.status = AssumptionCStatus::Refuted;
    res.labeling = identity_labeling(s);
    res.witness = first_witness.value_or(std::vector<long>{});
    return res;
}

int log_rank(std::vector<std::vector<double>> const & rows)
{
    if (rows.empty() || rows[0].empty())
        return 0;
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = rows[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    auto const & sv = svd.singularValues();
    double const thr = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thr)
            ++r;
    return r;
}

void normalize_generators(NumberField const & f, EmbeddingTable const & e, SubgroupW & w, int s, int t)
{
    if (w.labeling.empty())
        w.labeling = identity_labeling(s);
    int const b = w.rank();
    for (int k = 0; k < b; ++k) {
        auto const m = phi_b(w.generators[k], b, w.labeling, s, t);
        int pos = 0, neg = 0;
        for (int i = 0; i < m.rows(); ++i) {
            int const sg = m.row_sign(i);
            pos += sg > 0;
            neg += sg < 0;
        }
        if (neg > 0 && pos == 0) {
            w.generators[k] = unit_inverse(f, e, w.generators[k]);
            if (k < static_cast<int>(w.words.size()))
                for (auto & x : w.words[k])
                    x = -x;
        }
    }
}

SubgroupW search_w(NumberField const & f, EmbeddingTable const & e, std::vector<UnitElt> const & fundamental,
                   int b, Mode mode, SearchOptions const & opts)
{
    int const s = e.s, t = e.t;
    int const r = static_cast<int>(fundamental.size());
    SubgroupW w;
    w.labeling = identity_labeling(s);
    if (b < 0)
        throw Error(ErrorCode::RankTooLarge, "negative rank");
    if (mode == Mode::LVMB && b != 0)
        throw Error(ErrorCode::RankTooLarge, "LVMB mode uses the trivial subgroup");
    if (mode == Mode::Construction && b >= s)
        throw Error(ErrorCode::RankTooLarge,
                    "rank " + std::to_string(b) + " >= " + std::to_string(s) + " real places");
    if (mode == Mode::OT && b > s)
        throw Error(ErrorCode::RankTooLarge, "rank exceeds the number of real places");
    if (b == 0)
        return w;
    if (b > r)
        throw Error(ErrorCode::RankTooLarge, "rank exceeds the number of supplied units");

    std::vector<std::vector<double>> logs;
    for (auto const & u : fundamental)
        logs.push_back(log_embedding(u, s, t));
    if (log_rank(logs) < r)
        throw Error(ErrorCode::NotIndependent, "supplied units are multiplicatively dependent");

    struct Candidate {
        std::vector<long> word;
        UnitElt unit;
        long length;
    };
    std::vector<Candidate> cands;
    for_each_word(r, opts.candidate_window, [&](std::vector<long> const & ex) {
        auto const lead = std::find_if(ex.begin(), ex.end(), [](long x) { return x != 0; });
        if (*lead < 0)
            return true;
        long g = 0;
        for (long x : ex)
            g = std::gcd(g, x);
        if (g != 1)
            return true;
        std::vector<long> word = ex;
        UnitElt u = unit_word(f, e, fundamental, word);
        if (mode != Mode::LVMB && !u.totally_positive(s)) {
            for (auto & x : word)
                x *= 2;
            u = unit_word(f, e, fundamental, word);
        }
        long len = 0;
        for (long x : word)
            len += std::abs(x);
        cands.push_back({std::move(word), std::move(u), len});
        return true;
    });

    auto projected = [&](UnitElt const & u) {
        auto l = log_embedding(u, s, t);
        if (mode == Mode::OT)
            l.resize(s);
        return l;
    };

    std::vector<std::vector<double>> chosen_logs;
    for (int step = 0; step < b; ++step) {
        std::optional<std::tuple<long, double, std::vector<long>>> best_key;
        std::optional<std::size_t> best;
        Labeling best_lab;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            auto trial_logs = chosen_logs;
            trial_logs.push_back(projected(cands[c].unit));
            if (log_rank(trial_logs) != step + 1)
                continue;
            double margin = 0.0;
            Labeling lab = identity_labeling(s);
            if (mode == Mode::Construction) {
                SubgroupW trial = w;
                trial.generators.push_back(cands[c].unit);
                auto const res = check_assumption_c(trial, s, t, opts.assumption_c_window);
                if (res.status == AssumptionCStatus::Refuted)
                    continue;
                margin = res.margin;
                lab = res.labeling;
            }
            std::tuple<long, double, std::vector<long>> key{cands[c].length, -margin, cands[c].word};
            if (!best_key || key < *best_key) {
                best_key = key;
                best = c;
                best_lab = lab;
            }
        }
        if (!best)
            throw Error(ErrorCode::NotFound, "no admissible unit word of rank " + std::to_string(step + 1)
                                                 + " within window " + std::to_string(opts.candidate_window));
        w.generators.push_back(cands[*best].unit);
        w.words.push_back(cands[*best].word);
        w.labeling = best_lab;
        chosen_logs.push_back(projected(cands[*best].unit));
    }
    if (mode == Mode::Construction)
        normalize_generators(f, e, w, s, t);
    return w;
}

bool is_reciprocal(NumberField const & f, UnitElt const & u)
{
    RatPoly const m = min_poly_elt(u.elt, f);
    if (!m.is_integral())
        throw Error(ErrorCode::NotAUnit, "minimal polynomial is not integral");
    int const d = m.degree();
    Rational const c = m.coeff(0);
    if (abs(c) != 1)
        throw Error(ErrorCode::NotAUnit, "constant term is not +-1");
    for (int k = 0; k <= d; ++k)
        if (c * m.coeff(k) != m.coeff(d - k))
            return false;
    return true;
}

std::vector<std::pair<int, int>> invariant_pair_detector(SubgroupW const & w, int n, double tol)
{
    std::vector<std::pair<int, int>> out;
    if (w.generators.empty())
        return out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool all = true;
            for (auto const & g : w.generators)
                if (std::abs(g.sigma[i] * g.sigma[j] - 1.0) >= tol) {
                    all = false;
                    break;
                }
            if (all)
                out.emplace_back(i + 1, j + 1);
        }
    return out;
}

OtAdmissibility check_ot_admissible(SubgroupW const & a, int s, int t)
{
    if (a.rank() != s)
        throw Error(ErrorCode::WrongRank,
                    "subgroup has rank " + std::to_string(a.rank()) + ", expected " + std::to_string(s));
    OtAdmissibility res;
    std::vector<std::vector<double>> rows;
    Eigen::MatrixXd m(s, s);
    for (int i = 0; i < s; ++i) {
        auto l = log_embedding(a.generators[i], s, t);
        l.resize(s);
        for (int j = 0; j < s; ++j)
            m(i, j) = l[j];
        rows.push_back(std::move(l));
    }
    res.determinant = s > 0 ? m.determinant() : 1.0;
    res.rank = log_rank(rows);
    res.admissible = res.rank == s && std::abs(res.determinant) > 1e-9;
    return res;
}

} // namespace nkcert
