#pragma once

// The simplex B_b, the slab B = B_b x R^{s-b}, the pieces D1 and D2 of the
// fundamental domain, and sampled tiling checks.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nkcert/fan.hpp"

namespace nkcert {

class DomainSpec {
public:
    // Vertices c_0 = (1, ..., 1), c_i = L-coordinates of the i-th generator.
    // Throws DegenerateSimplex.
    explicit DomainSpec(QuotientFan fan);
    // Raw vertices in R^b (b + 1 of them), for a simplex without a fan.
    explicit DomainSpec(std::vector<std::vector<double>> vertices);

    int b() const { return b_; }
    std::vector<std::vector<double>> const & vertices() const { return vertices_; }
    bool has_fan() const { return fan_.has_value(); }
    QuotientFan const & fan() const { return *fan_; }

    std::vector<double> barycentric(std::vector<double> const & l_part) const;
    // L-coordinates of a point of R^s
    std::vector<double> l_part(std::vector<double> const & x) const;

    // C = min over vertices of the smallest coordinate
    double lower_bound_c() const;
    // bound on |x| over D1, from the ray slopes of Sigma
    double r_fit() const;

private:
    void init();

    int b_ = 0;
    std::vector<std::vector<double>> vertices_;
    std::optional<QuotientFan> fan_;
    Eigen::MatrixXd bary_inv_;
};

bool in_B(std::vector<double> const & x, DomainSpec const & spec, double tol = 1e-9);

struct WClass {
    bool in_w_gt1 = false;
    bool in_w_plus = false;
};

// Labeled log-profile (ln eta_1, ..., ln eta_s, ln|sigma_{s+1}|, ...) of a word.
std::vector<double> word_log_profile(SubgroupW const & w, std::vector<long> const & word, int s, int t);

WClass classify_w(UnitElt const & g, SubgroupW const & w, int s, int t);
WClass classify_word(SubgroupW const & w, std::vector<long> const & word, int s, int t);

enum class DPart { None, D1, D2 };

char const * to_string(DPart p);

struct DMembership {
    DPart part = DPart::None;
    // D1: x in eta(|Sigma|) with eta in W+;  D2: x in eta(B) with eta in W_{>1}
    std::vector<long> eta;
};

DMembership in_D(std::vector<double> const & x, DomainSpec const & spec, double tol = 1e-9);

// Every word g in the window with g(x) in the closure of D (slack tol),
// in witness order: increasing length, then lexicographic.
std::vector<std::vector<long>> tiling_witnesses(std::vector<double> const & x, DomainSpec const & spec,
                                                double tol = 1e-7, bool first_only = false);

struct TilingReport {
    std::size_t samples = 0;
    std::size_t tiled = 0;
    std::vector<std::vector<double>> gaps;
    double c = 0.0;
    double r_fit = 0.0;
    // min |eta(x)| over sampled x in B, eta in W_{>1}
    double min_norm = 0.0;
    bool norm_bound_ok = false;
    // max |g(x)| over tiled witnesses landing in D1
    double max_d1_norm = 0.0;
    bool d1_bounded = false;
};

TilingReport tiling_check(DomainSpec const & spec, std::size_t samples, std::uint64_t seed, double tol = 1e-7);

struct BbTilingReport {
    std::size_t samples = 0;
    std::size_t covered = 0;
    bool tiles = false;
};

// Coverage of the fundamental parallelepiped of the log lattice by ln(B_b).
BbTilingReport tiling_of_Bb(DomainSpec const & spec, std::size_t samples = 1000, std::uint64_t seed = 1,
                            int search = 4);

} // namespace nkcert
