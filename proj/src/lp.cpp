#include "nkcert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nkcert {

void LinearProgram::add(std::vector<double> row, Sense s, double b)
{
    rows.push_back(std::move(row));
    sense.push_back(s);
    rhs.push_back(b);
}

namespace {

struct Tableau {
    int m = 0;
    int cols = 0;
    // m constraint rows then the objective row; column `cols` is the right-hand side
    std::vector<std::vector<double>> t;
    std::vector<int> basis;
    double eps = 1e-10;

    double & obj(int j) { return t[m][j]; }

    void pivot(int r, int c)
    {
        double const p = t[r][c];
        for (auto & v : t[r])
            v /= p;
        for (int i = 0; i <= m; ++i) {
            if (i == r)
                continue;
            double const f = t[i][c];
            if (f == 0.0)
                continue;
            for (int j = 0; j <= cols; ++j)
                t[i][j] -= f * t[r][j];
            t[i][c] = 0.0;
        }
        basis[r] = c;
    }

    // Maximizes the objective row over columns < limit. False when unbounded.
    bool run(int limit)
    {
        for (int guard = 0; guard < 50000; ++guard) {
            int enter = -1;
            for (int j = 0; j < limit; ++j)
                if (obj(j) < -eps) {
                    enter = j;
                    break;
                }
            if (enter < 0)
                return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] <= eps)
                    continue;
                double const ratio = t[i][cols] / t[i][enter];
                if (ratio < best - eps || (ratio <= best + eps && leave >= 0 && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
        }
        return true;
    }
};

} // namespace

LpResult solve_lp(LinearProgram const & lp, double eps)
{
    int const m = static_cast<int>(lp.rows.size());
    int const n = static_cast<int>(lp.c.size());

    // normalize rows, make right-hand sides nonnegative
    std::vector<std::vector<double>> a = lp.rows;
    std::vector<double> b = lp.rhs;
    std::vector<Sense> sense = lp.sense;
    for (int i = 0; i < m; ++i) {
        a[i].resize(n, 0.0);
        double scale = std::abs(b[i]);
        for (double v : a[i])
            scale = std::max(scale, std::abs(v));
        if (scale > 0) {
            for (auto & v : a[i])
                v /= scale;
            b[i] /= scale;
        }
        if (b[i] < 0) {
            for (auto & v : a[i])
                v = -v;
            b[i] = -b[i];
            if (sense[i] == Sense::Le)
                sense[i] = Sense::Ge;
            else if (sense[i] == Sense::Ge)
                sense[i] = Sense::Le;
        }
    }

    int n_slack = 0, n_art = 0;
    for (auto s : sense) {
        n_slack += s != Sense::Eq;
        n_art += s != Sense::Le;
    }
    int const art0 = n + n_slack;
    int const cols = art0 + n_art;

    Tableau tab;
    tab.m = m;
    tab.cols = cols;
    tab.eps = eps;
    tab.t.assign(m + 1, std::vector<double>(cols + 1, 0.0));
    tab.basis.assign(m, -1);
    int slack = n, art = art0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j)
            tab.t[i][j] = a[i][j];
        tab.t[i][cols] = b[i];
        if (sense[i] == Sense::Le) {
            tab.t[i][slack] = 1.0;
            tab.basis[i] = slack++;
        } else {
            if (sense[i] == Sense::Ge)
                tab.t[i][slack++] = -1.0;
            tab.t[i][art] = 1.0;
            tab.basis[i] = art++;
        }
    }

    LpResult res;
    // phase 1: maximize -sum(artificials)
    for (int j = art0; j < cols; ++j)
        tab.obj(j) = 1.0;
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] >= art0)
            for (int j = 0; j <= cols; ++j)
                tab.obj(j) -= tab.t[i][j];
    tab.run(cols);
    if (tab.obj(cols) < -1e-9)
        return res;
    res.feasible = true;

    // drive zero artificials out of the basis
    for (int i = 0; i < m; ++i) {
        if (tab.basis[i] < art0)
            continue;
        for (int j = 0; j < art0; ++j)
            if (std::abs(tab.t[i][j]) > 1e-9) {
                tab.pivot(i, j);
                break;
            }
    }

    // phase 2
    std::fill(tab.t[m].begin(), tab.t[m].end(), 0.0);
    for (int j = 0; j < n; ++j)
        tab.obj(j) = -lp.c[j];
    for (int i = 0; i < m; ++i) {
        int const bc = tab.basis[i];
        double const f = tab.obj(bc);
        if (f != 0.0)
            for (int j = 0; j <= cols; ++j)
                tab.obj(j) -= f * tab.t[i][j];
    }
    res.bounded = tab.run(art0);
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] < n)
            res.x[tab.basis[i]] = tab.t[i][cols];
    res.value = 0.0;
    for (int j = 0; j < n; ++j)
        res.value += lp.c[j] * res.x[j];
    return res;
}

} // namespace nkcert
