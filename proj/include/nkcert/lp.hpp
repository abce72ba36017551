#pragma once

// Small dense two-phase simplex (Bland's rule) for the cone tests.

#include <vector>

namespace nkcert {

enum class Sense { Le, Eq, Ge };

struct LinearProgram {
    // maximize c.x subject to rows[i].x (sense[i]) rhs[i], x >= 0
    std::vector<std::vector<double>> rows;
    std::vector<Sense> sense;
    std::vector<double> rhs;
    std::vector<double> c;

    void add(std::vector<double> row, Sense s, double b);
};

struct LpResult {
    bool feasible = false;
    bool bounded = true;
    double value = 0.0;
    std::vector<double> x;
};

LpResult solve_lp(LinearProgram const & lp, double eps = 1e-10);

} // namespace nkcert
