#pragma once

// Machine-readable certificate: field and subgroup summaries, every check
// with its tolerance, and the invariant claims for the quotient manifold Y,
// each gated on the checks and detectors it depends on.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nkcert/fan.hpp"
#include "nkcert/units.hpp"

namespace nkcert {

inline constexpr char const * kSchemaVersion = "1";

struct CheckRecord {
    bool pass = false;
    double tolerance = 0.0;
    // advisory checks only produce warnings
    bool mandatory = true;
    std::string witness;

    bool operator==(CheckRecord const &) const = default;
};

using InvariantValue = std::variant<bool, long, std::string>;

struct Invariant {
    InvariantValue value;
    // "by-theorem" or "uncertified"
    std::string basis;
    // checks and detectors the claim rests on
    std::vector<std::string> hypotheses;

    bool operator==(Invariant const &) const = default;
};

struct FieldSummary {
    // integer strings, low degree first
    std::vector<std::string> min_poly;
    int n = 0;
    int s = 0;
    int t = 0;
    // "power" or "user"
    std::string basis;
    std::optional<long> irreducibility_prime;

    bool operator==(FieldSummary const &) const = default;
};

struct WSummary {
    int b = 0;
    // integral-basis coordinates as rational strings
    std::vector<std::vector<std::string>> generators;
    std::vector<std::vector<long>> words;
    std::vector<int> labeling;
    std::string assumption_c;

    bool operator==(WSummary const &) const = default;
};

struct Detectors {
    // is_reciprocal per generator
    std::vector<bool> reciprocal;
    // 1-based index pairs from invariant_pair_detector
    std::vector<std::pair<int, int>> invariant_pairs;

    bool has_non_reciprocal() const;
    bool operator==(Detectors const &) const = default;
};

struct DivisorSummary {
    std::vector<double> ray;
    std::string kind;
    int quotient_dimension = 0;
    int quotient_rays = 0;
    bool complete = false;
    std::optional<double> elliptic_residual;

    bool operator==(DivisorSummary const &) const = default;
};

struct Certificate {
    std::string schema_version = kSchemaVersion;
    Mode mode = Mode::Construction;
    // "certified", "failed", "config-error"
    std::string status;
    std::optional<FieldSummary> field;
    std::optional<WSummary> w;
    std::optional<Detectors> detectors;
    std::map<std::string, CheckRecord> checks;
    std::map<std::string, Invariant> invariants;
    std::vector<DivisorSummary> divisors;
    std::vector<std::string> warnings;
    std::optional<std::string> error;

    bool mandatory_checks_pass() const;
    bool operator==(Certificate const &) const = default;
};

// Checks a construction-mode pipeline must have produced before assembly.
std::vector<std::string> const & required_construction_checks();

// Everything the pipeline hands to the certificate.
struct PipelineReports {
    Mode mode = Mode::Construction;
    NumberField const * field = nullptr;
    EmbeddingTable const * embeddings = nullptr;
    SubgroupW const * w = nullptr;
    std::optional<AssumptionCResult> assumption_c;
    std::map<std::string, CheckRecord> checks;
    std::vector<DivisorSummary> divisors;
    std::vector<std::string> warnings;
};

FieldSummary summarize(NumberField const & f);
WSummary summarize(SubgroupW const & w, std::optional<AssumptionCResult> const & c);
Detectors run_detectors(NumberField const & f, SubgroupW const & w);
DivisorSummary summarize(std::vector<double> const & ray, DivisorReport const & r);

// Invariant claims of Y from the numeric data alone. `ok` is the pipeline
// verdict; hypotheses lists the names of the checks that support it.
std::map<std::string, Invariant> construction_invariants(int s, int t, int b, Detectors const & d, bool ok,
                                                         std::vector<std::string> const & hypotheses);
std::map<std::string, Invariant> ot_invariants(int s, int t, Detectors const & d, bool ok,
                                               std::vector<std::string> const & hypotheses);
// Every invariant of the mode, explicitly uncertified.
std::map<std::string, Invariant> withheld_invariants(Mode m);

// Throws IncompletePipeline.
Certificate assemble(PipelineReports const & r);

// OT-mode certificate for a rank-s subgroup A. Throws NotAdmissible.
Certificate ot_certificate(NumberField const & f, EmbeddingTable const & e, SubgroupW const & a);

// Keys sorted, two-space indent, trailing newline.
std::string serialize(Certificate const & c);
Certificate parse_certificate(std::string const & text);

// Violations of the schema and of gating soundness in a serialized
// certificate; empty when valid.
std::vector<std::string> validate_certificate(std::string const & text);

} // namespace nkcert
