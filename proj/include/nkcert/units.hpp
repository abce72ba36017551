#pragma once

// Units of O_K, their logarithmic and phi_b images, and the subgroup W with
// its sign condition ("Assumption C").

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nkcert/number_field.hpp"

namespace nkcert {

struct UnitElt {
    FieldElement elt;
    std::vector<std::complex<double>> sigma;
    // eta_i = sigma_i for real places, |sigma_i| for the first t complex places
    std::vector<double> eta_profile;

    bool totally_positive(int s) const;
};

// Throws NotAUnit unless x has integral coordinates and norm +-1.
UnitElt make_unit(NumberField const & f, EmbeddingTable const & e, FieldElement x);

// prod_k base[k]^exps[k], computed exactly.
UnitElt unit_word(NumberField const & f, EmbeddingTable const & e, std::span<UnitElt const> base,
                  std::span<long const> exps);

UnitElt unit_inverse(NumberField const & f, EmbeddingTable const & e, UnitElt const & u);

// (ln|s_1|, ..., ln|s_s|, 2 ln|s_{s+1}|, ..., 2 ln|s_{s+t}|)
std::vector<double> log_embedding(UnitElt const & u, int s, int t);

// Permutation of the real places: positions 0..b-1 carry the places paired
// with the L-coordinates, the rest keep ascending order.
using Labeling = std::vector<int>;

Labeling identity_labeling(int s);

// Profile reordered by a labeling, length s + t.
std::vector<double> labeled_profile(UnitElt const & u, Labeling const & lab, int s, int t);

class PhiMatrix {
public:
    PhiMatrix(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double & operator()(int i, int j) { return entries_[i * cols_ + j]; }
    double operator()(int i, int j) const { return entries_[i * cols_ + j]; }

    // Row i lies in Q_b: all entries nonzero (|x| >= zero_tol) with one sign.
    bool row_in_q(int i, double zero_tol = 1e-9) const;
    // +1 / -1 for a row in Q_b, 0 otherwise
    int row_sign(int i, double zero_tol = 1e-9) const;
    double row_margin(int i) const;

    PhiMatrix & operator+=(PhiMatrix const & o);
    PhiMatrix scaled(double k) const;

private:
    int rows_;
    int cols_;
    std::vector<double> entries_;
};

// Entry (i, j) = ln(eta_i / eta_{b+j}) in labeled order. Throws NonPositiveProfile.
PhiMatrix phi_b(UnitElt const & u, int b, Labeling const & lab, int s, int t);

struct SubgroupW {
    std::vector<UnitElt> generators;
    // exponent words over the fundamental units, when the generators came from a search
    std::vector<std::vector<long>> words;
    Labeling labeling;

    int rank() const { return static_cast<int>(generators.size()); }
};

enum class AssumptionCStatus { Exact, WindowVerified, Refuted };

char const * to_string(AssumptionCStatus s);

struct AssumptionCResult {
    AssumptionCStatus status = AssumptionCStatus::Refuted;
    Labeling labeling;
    // failing exponent word (Refuted only)
    std::vector<long> witness;
    // smallest |entry| of a qualifying row over all tested words
    double margin = 0.0;
};

// For rank 1 the answer is exact; for rank >= 2 every nontrivial word with
// exponents in [-window, window] is tested. On success the chosen labeling is
// stored into w.
AssumptionCResult check_assumption_c(SubgroupW & w, int s, int t, int window = 10);

enum class Mode { Construction, OT, LVMB };

char const * to_string(Mode m);

struct SearchOptions {
    int candidate_window = 2;
    int assumption_c_window = 10;
};

// Greedy extension of a generator set, one unit word at a time. Throws
// RankTooLarge (b >= s in construction mode, b > s otherwise), NotIndependent
// and NotFound.
SubgroupW search_w(NumberField const & f, EmbeddingTable const & e, std::vector<UnitElt> const & fundamental,
                   int b, Mode mode, SearchOptions const & opts = {});

// Replaces generators whose phi rows are all negative by their inverses, so
// that expanding generators act towards L_+.
void normalize_generators(NumberField const & f, EmbeddingTable const & e, SubgroupW & w, int s, int t);

// u^{-1} is a Galois conjugate of u. Throws NotAUnit.
bool is_reciprocal(NumberField const & f, UnitElt const & u);

// 1-based pairs i < j with |sigma_i(g) sigma_j(g) - 1| < tol for every generator.
std::vector<std::pair<int, int>> invariant_pair_detector(SubgroupW const & w, int n, double tol = 1e-9);

struct OtAdmissibility {
    bool admissible = false;
    double determinant = 0.0;
    int rank = 0;
};

// Throws WrongRank unless the subgroup has rank s.
OtAdmissibility check_ot_admissible(SubgroupW const & a, int s, int t);

// Numeric rank of a set of log vectors (relative tolerance 1e-9).
int log_rank(std::vector<std::vector<double>> const & rows);

} // namespace nkcert
