#include "nkcert/certificate.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "nkcert/error.hpp"

namespace nkcert {

using nlohmann::json;

namespace {

constexpr char const * kByTheorem = "by-theorem";
constexpr char const * kUncertified = "uncertified";
constexpr char const * kNonReciprocal = "detector:non_reciprocal";
constexpr char const * kNoPairs = "detector:invariant_pairs_empty";

long choose2(long b) { return b * (b - 1) / 2; }

Invariant claim(InvariantValue v, std::vector<std::string> const & hyp) { return {std::move(v), kByTheorem, hyp}; }
Invariant withheld(std::string v = kUncertified) { return {std::move(v), kUncertified, {}}; }

std::vector<std::string> with_detectors(std::vector<std::string> hyp)
{
    hyp.push_back(kNonReciprocal);
    hyp.push_back(kNoPairs);
    return hyp;
}

bool detector_gate(Detectors const & d) { return d.has_non_reciprocal() && d.invariant_pairs.empty(); }

std::vector<std::string> const & invariant_keys(Mode m)
{
    static std::vector<std::string> const full{"algebraic_dimension", "b1", "dim", "h1_lower_bound",
                                                "h2", "kodaira", "non_kahler"};
    static std::vector<std::string> const ot{"b2", "dim"};
    return m == Mode::OT ? ot : full;
}

std::map<std::string, Invariant> lvmb_invariants(int s, int t, bool ok, std::vector<std::string> const & hyp)
{
    std::map<std::string, Invariant> out;
    for (auto const & k : invariant_keys(Mode::LVMB))
        out[k] = withheld();
    out["algebraic_dimension"] = withheld("unknown");
    if (ok)
        out["dim"] = claim(static_cast<long>(s + t), hyp);
    return out;
}

std::vector<std::string> mandatory_names(std::map<std::string, CheckRecord> const & checks)
{
    std::vector<std::string> out;
    for (auto const & [name, c] : checks)
        if (c.mandatory)
            out.push_back(name);
    return out;
}

Mode mode_from(std::string const & s)
{
    if (s == "construction")
        return Mode::Construction;
    if (s == "ot")
        return Mode::OT;
    if (s == "lvmb")
        return Mode::LVMB;
    throw Error(ErrorCode::ConfigError, "unknown mode '" + s + "'");
}

json value_json(InvariantValue const & v)
{
    return std::visit([](auto const & x) { return json(x); }, v);
}

InvariantValue value_from(json const & j)
{
    if (j.is_boolean())
        return j.get<bool>();
    if (j.is_number_integer())
        return j.get<long>();
    return j.get<std::string>();
}

template <class T>
json opt(std::optional<T> const & v)
{
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(json const & j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<T>();
}

} // namespace

bool Detectors::has_non_reciprocal() const
{
    return std::any_of(reciprocal.begin(), reciprocal.end(), [](bool r) { return !r; });
}

bool Certificate::mandatory_checks_pass() const
{
    if (checks.empty())
        return false;
    return std::all_of(checks.begin(), checks.end(), [](auto const & kv) { return !kv.second.mandatory || kv.second.pass; });
}

std::vector<std::string> const & required_construction_checks()
{
    static std::vector<std::string> const names{
        "action_free",      "action_invariant", "action_properly_discontinuous",
        "assumption_c",     "cone_collapse",    "fan_property",
        "fan_support",      "iota_conjugation", "p_real",
        "pi_h_injective",   "pi_htilde_injective", "tiling",
        "tiling_bb",
    };
    return names;
}

FieldSummary summarize(NumberField const & f)
{
    FieldSummary out;
    for (auto const & c : f.min_poly.coeffs())
        out.min_poly.push_back(c.get_str());
    out.n = f.degree();
    out.s = f.s;
    out.t = f.t;
    out.basis = f.power_basis ? "power" : "user";
    if (f.irreducibility_witness)
        out.irreducibility_prime = static_cast<long>(*f.irreducibility_witness);
    return out;
}

WSummary summarize(SubgroupW const & w, std::optional<AssumptionCResult> const & c)
{
    WSummary out;
    out.b = w.rank();
    for (auto const & g : w.generators) {
        std::vector<std::string> coords;
        for (auto const & x : g.elt.coords)
            coords.push_back(x.get_str());
        out.generators.push_back(std::move(coords));
    }
    out.words = w.words;
    out.labeling = w.labeling;
    out.assumption_c = c ? to_string(c->status) : "not-applicable";
    return out;
}

Detectors run_detectors(NumberField const & f, SubgroupW const & w)
{
    Detectors d;
    for (auto const & g : w.generators)
        d.reciprocal.push_back(is_reciprocal(f, g));
    d.invariant_pairs = invariant_pair_detector(w, f.degree());
    return d;
}

DivisorSummary summarize(std::vector<double> const & ray, DivisorReport const & r)
{
    return {ray, r.kind, r.quotient_dimension, static_cast<int>(r.quotient_rays.size()), r.complete,
            r.elliptic_residual};
}

std::map<std::string, Invariant> construction_invariants(int s, int t, int b, Detectors const & d, bool ok,
                                                         std::vector<std::string> const & hyp)
{
    std::map<std::string, Invariant> out;
    for (auto const & k : invariant_keys(Mode::Construction))
        out[k] = withheld();
    out["algebraic_dimension"] = withheld("unknown");
    if (!ok)
        return out;
    out["dim"] = claim(static_cast<long>(s + t), hyp);
    out["b1"] = claim(static_cast<long>(b), hyp);
    out["h1_lower_bound"] = claim(static_cast<long>(b), hyp);
    out["kodaira"] = claim(std::string("-infinity"), hyp);
    if (b >= 1)
        out["non_kahler"] = claim(true, hyp);
    if (detector_gate(d)) {
        out["h2"] = claim(choose2(b), with_detectors(hyp));
        out["algebraic_dimension"] = claim(0L, with_detectors(hyp));
    }
    return out;
}

std::map<std::string, Invariant> ot_invariants(int s, int t, Detectors const & d, bool ok,
                                               std::vector<std::string> const & hyp)
{
    std::map<std::string, Invariant> out{{"b2", withheld()}, {"dim", withheld()}};
    if (!ok)
        return out;
    out["dim"] = claim(static_cast<long>(s + t), hyp);
    // for odd s no unit of the subgroup can be reciprocal
    if (s % 2 == 1)
        out["b2"] = claim(choose2(s), hyp);
    else if (detector_gate(d))
        out["b2"] = claim(choose2(s), with_detectors(hyp));
    return out;
}

std::map<std::string, Invariant> withheld_invariants(Mode m)
{
    if (m == Mode::OT)
        return ot_invariants(0, 0, {}, false, {});
    return construction_invariants(0, 0, 0, {}, false, {});
}

Certificate assemble(PipelineReports const & r)
{
    if (!r.field || !r.embeddings || !r.w)
        throw Error(ErrorCode::IncompletePipeline, "field, embeddings and subgroup are required");
    Certificate c;
    c.mode = r.mode;
    c.checks = r.checks;
    if (r.assumption_c) {
        auto const & a = *r.assumption_c;
        c.checks["assumption_c"] = CheckRecord{a.status != AssumptionCStatus::Refuted, 0.0, true,
                                               fmt::format("{} margin {:.6g}", to_string(a.status), a.margin)};
    }
    if (r.mode == Mode::Construction) {
        if (!r.assumption_c)
            throw Error(ErrorCode::IncompletePipeline, "Assumption C was not checked");
        for (auto const & name : required_construction_checks())
            if (!c.checks.count(name))
                throw Error(ErrorCode::IncompletePipeline, "missing check '" + name + "'");
    }
    auto const & f = *r.field;
    c.field = summarize(f);
    c.w = summarize(*r.w, r.assumption_c);
    c.detectors = run_detectors(f, *r.w);
    c.divisors = r.divisors;
    c.warnings = r.warnings;
    for (auto const & [name, chk] : c.checks)
        if (!chk.mandatory && !chk.pass)
            c.warnings.push_back(fmt::format("advisory check {} failed: {}", name, chk.witness));

    bool const ok = c.mandatory_checks_pass();
    c.status = ok ? "certified" : "failed";
    auto const hyp = mandatory_names(c.checks);
    switch (r.mode) {
    case Mode::Construction:
        c.invariants = construction_invariants(f.s, f.t, r.w->rank(), *c.detectors, ok, hyp);
        break;
    case Mode::OT:
        c.invariants = ot_invariants(f.s, f.t, *c.detectors, ok, hyp);
        break;
    case Mode::LVMB:
        c.invariants = lvmb_invariants(f.s, f.t, ok, hyp);
        break;
    }
    return c;
}

Certificate ot_certificate(NumberField const & f, EmbeddingTable const & e, SubgroupW const & a)
{
    if (a.rank() != f.s)
        throw Error(ErrorCode::NotAdmissible,
                    fmt::format("OT mode needs rank {} but the subgroup has rank {}", f.s, a.rank()));
    auto const adm = check_ot_admissible(a, f.s, f.t);
    if (!adm.admissible)
        throw Error(ErrorCode::NotAdmissible,
                    fmt::format("log projection is degenerate (det {:.6g}, rank {})", adm.determinant, adm.rank));
    bool positive = true;
    for (auto const & g : a.generators)
        positive = positive && g.totally_positive(f.s);
    if (!positive)
        throw Error(ErrorCode::NotAdmissible, "generators must be totally positive");

    PipelineReports r;
    r.mode = Mode::OT;
    r.field = &f;
    r.embeddings = &e;
    SubgroupW w = a;
    if (w.labeling.empty())
        w.labeling = identity_labeling(f.s);
    r.w = &w;
    r.checks["ot_admissible"] = CheckRecord{true, 1e-9, true,
                                            fmt::format("det {:.12g}, rank {}", adm.determinant, adm.rank)};
    r.checks["totally_positive"] = CheckRecord{true, 0.0, true, ""};
    return assemble(r);
}

namespace {

json to_json(Certificate const & c)
{
    json j;
    j["schema_version"] = c.schema_version;
    j["mode"] = to_string(c.mode);
    j["status"] = c.status;
    if (c.field) {
        auto const & f = *c.field;
        j["field"] = {{"min_poly", f.min_poly}, {"n", f.n}, {"s", f.s}, {"t", f.t}, {"basis", f.basis},
                      {"irreducibility_prime", opt(f.irreducibility_prime)}};
    } else {
        j["field"] = nullptr;
    }
    if (c.w) {
        auto const & w = *c.w;
        j["w"] = {{"b", w.b}, {"generators", w.generators}, {"words", w.words}, {"labeling", w.labeling},
                  {"assumption_c", w.assumption_c}};
    } else {
        j["w"] = nullptr;
    }
    if (c.detectors) {
        json pairs = json::array();
        for (auto const & [a, b] : c.detectors->invariant_pairs)
            pairs.push_back({a, b});
        j["detectors"] = {{"reciprocal", c.detectors->reciprocal}, {"invariant_pairs", pairs}};
    } else {
        j["detectors"] = nullptr;
    }
    j["checks"] = json::object();
    for (auto const & [name, chk] : c.checks)
        j["checks"][name] = {{"pass", chk.pass}, {"tolerance", chk.tolerance}, {"mandatory", chk.mandatory},
                             {"witness", chk.witness}};
    j["invariants"] = json::object();
    for (auto const & [name, inv] : c.invariants)
        j["invariants"][name] = {{"value", value_json(inv.value)}, {"basis", inv.basis},
                                 {"hypotheses", inv.hypotheses}};
    j["divisors"] = json::array();
    for (auto const & d : c.divisors)
        j["divisors"].push_back({{"ray", d.ray},
                                 {"kind", d.kind},
                                 {"quotient_dimension", d.quotient_dimension},
                                 {"quotient_rays", d.quotient_rays},
                                 {"complete", d.complete},
                                 {"elliptic_residual", opt(d.elliptic_residual)}});
    j["warnings"] = c.warnings;
    j["error"] = opt(c.error);
    return j;
}

Certificate from_json(json const & j)
{
    Certificate c;
    c.schema_version = j.at("schema_version").get<std::string>();
    c.mode = mode_from(j.at("mode").get<std::string>());
    c.status = j.at("status").get<std::string>();
    if (auto const & f = j.at("field"); !f.is_null()) {
        FieldSummary s;
        s.min_poly = f.at("min_poly").get<std::vector<std::string>>();
        s.n = f.at("n").get<int>();
        s.s = f.at("s").get<int>();
        s.t = f.at("t").get<int>();
        s.basis = f.at("basis").get<std::string>();
        s.irreducibility_prime = opt_from<long>(f.at("irreducibility_prime"));
        c.field = s;
    }
    if (auto const & w = j.at("w"); !w.is_null()) {
        WSummary s;
        s.b = w.at("b").get<int>();
        s.generators = w.at("generators").get<std::vector<std::vector<std::string>>>();
        s.words = w.at("words").get<std::vector<std::vector<long>>>();
        s.labeling = w.at("labeling").get<std::vector<int>>();
        s.assumption_c = w.at("assumption_c").get<std::string>();
        c.w = s;
    }
    if (auto const & d = j.at("detectors"); !d.is_null()) {
        Detectors s;
        s.reciprocal = d.at("reciprocal").get<std::vector<bool>>();
        for (auto const & p : d.at("invariant_pairs"))
            s.invariant_pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        c.detectors = s;
    }
    for (auto const & [name, chk] : j.at("checks").items())
        c.checks[name] = CheckRecord{chk.at("pass").get<bool>(), chk.at("tolerance").get<double>(),
                                     chk.at("mandatory").get<bool>(), chk.at("witness").get<std::string>()};
    for (auto const & [name, inv] : j.at("invariants").items())
        c.invariants[name] = Invariant{value_from(inv.at("value")), inv.at("basis").get<std::string>(),
                                       inv.at("hypotheses").get<std::vector<std::string>>()};
    for (auto const & d : j.at("divisors"))
        c.divisors.push_back(DivisorSummary{d.at("ray").get<std::vector<double>>(), d.at("kind").get<std::string>(),
                                            d.at("quotient_dimension").get<int>(), d.at("quotient_rays").get<int>(),
                                            d.at("complete").get<bool>(), opt_from<double>(d.at("elliptic_residual"))});
    c.warnings = j.at("warnings").get<std::vector<std::string>>();
    c.error = opt_from<std::string>(j.at("error"));
    return c;
}

} // namespace

std::string serialize(Certificate const & c) { return to_json(c).dump(2) + "\n"; }

Certificate parse_certificate(std::string const & text)
{
    try {
        return from_json(json::parse(text));
    } catch (json::exception const & ex) {
        throw Error(ErrorCode::ConfigError, std::string("malformed certificate: ") + ex.what());
    }
}

std::vector<std::string> validate_certificate(std::string const & text)
{
    std::vector<std::string> bad;
    Certificate c;
    try {
        c = parse_certificate(text);
    } catch (Error const & err) {
        return {err.what()};
    }
    if (c.schema_version != kSchemaVersion)
        bad.push_back("schema_version must be \"1\"");
    static std::set<std::string> const statuses{"certified", "failed", "config-error"};
    if (!statuses.count(c.status))
        bad.push_back("unknown status '" + c.status + "'");
    bool const passing = c.mandatory_checks_pass() && !c.error;
    if (c.status == "certified" && !passing)
        bad.push_back("certified although a mandatory check failed");
    if (c.status == "failed" && passing)
        bad.push_back("failed although every mandatory check passed");
    if (c.status == "config-error" && !c.error)
        bad.push_back("config-error without an error message");

    for (auto const & k : invariant_keys(c.mode))
        if (!c.invariants.count(k))
            bad.push_back("invariant '" + k + "' is absent");

    auto as_long = [](Invariant const & i) -> std::optional<long> {
        if (auto p = std::get_if<long>(&i.value))
            return *p;
        return std::nullopt;
    };
    bool const gate = c.detectors && detector_gate(*c.detectors);
    for (auto const & [name, inv] : c.invariants) {
        if (inv.basis == kUncertified) {
            if (!std::holds_alternative<std::string>(inv.value))
                bad.push_back("invariant '" + name + "' is uncertified but carries a value");
            continue;
        }
        if (inv.basis != kByTheorem) {
            bad.push_back("invariant '" + name + "' has unknown basis '" + inv.basis + "'");
            continue;
        }
        if (c.status != "certified")
            bad.push_back("invariant '" + name + "' is claimed by theorem without a certified pipeline");
        if (inv.hypotheses.empty())
            bad.push_back("invariant '" + name + "' lists no hypotheses");
        for (auto const & h : inv.hypotheses) {
            if (h == kNonReciprocal || h == kNoPairs) {
                if (!gate)
                    bad.push_back("invariant '" + name + "' relies on a failed detector");
                continue;
            }
            auto it = c.checks.find(h);
            if (it == c.checks.end() || !it->second.pass)
                bad.push_back("invariant '" + name + "' relies on missing or failed check '" + h + "'");
        }
    }

    auto claimed = [&](char const * k) {
        auto it = c.invariants.find(k);
        return it != c.invariants.end() && it->second.basis == kByTheorem ? &it->second : nullptr;
    };
    long const b = c.w ? c.w->b : -1;
    if (c.mode != Mode::OT) {
        for (char const * k : {"h2", "algebraic_dimension"})
            if (claimed(k) && !gate)
                bad.push_back(std::string("invariant '") + k + "' emitted while a detector records a failure");
        if (auto i = claimed("h2"); i && as_long(*i) != choose2(b))
            bad.push_back("h2 differs from C(b, 2)");
        if (auto i = claimed("algebraic_dimension"); i && as_long(*i) != 0L)
            bad.push_back("algebraic_dimension must be 0");
        if (auto i = claimed("b1"); i && as_long(*i) != b)
            bad.push_back("b1 differs from b");
        if (auto i = claimed("kodaira"); i && i->value != InvariantValue(std::string("-infinity")))
            bad.push_back("kodaira must be -infinity");
    } else if (auto i = claimed("b2"); i) {
        int const s = c.field ? c.field->s : -1;
        if (s % 2 == 0 && !gate)
            bad.push_back("b2 emitted for even s while a detector records a failure");
        if (as_long(*i) != choose2(s))
            bad.push_back("b2 differs from C(s, 2)");
    }
    if (auto i = claimed("dim"); i && (!c.field || as_long(*i) != c.field->s + c.field->t))
        bad.push_back("dim differs from s + t");
    return bad;
}

} // namespace nkcert
