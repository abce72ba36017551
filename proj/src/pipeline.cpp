#include "nkcert/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "nkcert/ambient.hpp"
#include "nkcert/domain.hpp"
#include "nkcert/error.hpp"
#include "nkcert/fan.hpp"
#include "nkcert/roots.hpp"

namespace nkcert {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(std::string const & msg) { throw Error(ErrorCode::ConfigError, msg); }

// Partial results, kept so that a failure still yields an informative certificate.
struct Progress {
    std::optional<NumberField> f;
    std::optional<EmbeddingTable> e;
    std::optional<SubgroupW> w;
    std::optional<AssumptionCResult> ac;
    std::map<std::string, CheckRecord> checks;
    std::vector<std::string> warnings;
};

void check_structure(RunConfig const & cfg, int s)
{
    switch (cfg.mode) {
    case Mode::Construction:
        if (cfg.b < 1 || cfg.b >= s)
            config_error(fmt::format("construction mode needs 1 <= b < s, got b = {} with s = {}", cfg.b, s));
        break;
    case Mode::OT:
        if (cfg.b != s)
            config_error(fmt::format("OT mode needs b = s = {}, got b = {}", s, cfg.b));
        break;
    case Mode::LVMB:
        if (cfg.b != 0)
            config_error(fmt::format("LVMB mode needs b = 0, got b = {}", cfg.b));
        break;
    }
    if (cfg.b > 0 && cfg.candidates.empty())
        config_error("[units] candidates are required when b > 0");
}

// Field, embeddings and the subgroup W.
void prepare(RunConfig const & cfg, Progress & p)
{
    p.f = validate_field(cfg.min_poly, cfg.basis);
    auto const & f = *p.f;
    p.checks["irreducibility_witness"] =
        CheckRecord{f.irreducibility_witness.has_value(), 0.0, false,
                    f.irreducibility_witness ? fmt::format("irreducible mod {}", *f.irreducibility_witness)
                                             : "no prime below 101 certifies irreducibility"};
    p.e = embeddings(f, cfg.tol.zero);
    auto const & e = *p.e;
    int const s = f.s, t = f.t;
    check_structure(cfg, s);

    std::vector<UnitElt> units;
    for (auto const & c : cfg.candidates)
        units.push_back(make_unit(f, e, from_coords(c)));

    SubgroupW w;
    if (cfg.words) {
        std::vector<std::vector<double>> logs;
        for (auto const & word : *cfg.words) {
            w.generators.push_back(unit_word(f, e, units, word));
            logs.push_back(log_embedding(w.generators.back(), s, t));
        }
        w.words = *cfg.words;
        w.labeling = identity_labeling(s);
        if (cfg.b > 0 && log_rank(logs) < cfg.b)
            throw Error(ErrorCode::NotIndependent, "subgroup.words generate a subgroup of smaller rank");
    } else {
        w = search_w(f, e, units, cfg.b, cfg.mode, SearchOptions{cfg.candidate_window, cfg.assumption_c_window});
    }
    p.w = std::move(w);
}

// Assumption C picks the labeling; generators are then oriented towards L_+.
void settle_labeling(RunConfig const & cfg, Progress & p)
{
    SubgroupW w = *p.w;
    p.ac = check_assumption_c(w, p.f->s, p.f->t, cfg.assumption_c_window);
    if (p.ac->status != AssumptionCStatus::Refuted)
        normalize_generators(*p.f, *p.e, w, p.f->s, p.f->t);
    p.w = std::move(w);
}

QuotientFan make_fan(RunConfig const & cfg, Progress const & p)
{
    int const s = p.f->s;
    if (cfg.cones) {
        QuotientFan fan;
        fan.s = s;
        for (auto const & rays : *cfg.cones) {
            Cone c;
            for (auto const & r : rays) {
                if (static_cast<int>(r.size()) != s)
                    config_error(fmt::format("fan.cones rays need {} coordinates", s));
                c.rays.push_back(Ray{r, std::nullopt});
            }
            fan.sigma.push_back(std::move(c));
        }
        fan.w = *p.w;
        fan.omega = omega_for(fan.w, s);
        fan.window = cfg.window;
        return fan;
    }
    if (s != 2 || p.w->rank() != 1)
        config_error("fan generation needs s = 2 and b = 1; give the cones in [fan]");
    return build_fan_s2(*p.f, *p.e, *p.w, cfg.window);
}

template <class F>
CheckRecord guarded(ErrorCode expected, double tol, F && body)
{
    try {
        return body();
    } catch (Error const & err) {
        if (err.code() != expected)
            throw;
        return CheckRecord{false, tol, true, err.what()};
    }
}

void ambient_checks(RunConfig const & cfg, Progress & p)
{
    auto const & f = *p.f;
    auto const fr = build_frame(f, *p.e);
    p.checks["condition_number"] =
        CheckRecord{fr.condition <= 1e6, 1e6, false, fmt::format("cond(B_K) = {:.6g}", fr.condition)};
    p.checks["p_real"] = CheckRecord{fr.max_imag_P < cfg.tol.zero, cfg.tol.zero, true,
                                     fmt::format("max |Im P| = {:.3g}", fr.max_imag_P)};

    auto separation = [&](auto check) {
        return guarded(ErrorCode::InjectivityViolation, cfg.tol.separation, [&] {
            auto const rep = check(fr, cfg.injectivity_samples, cfg.injectivity_height, cfg.seed);
            return CheckRecord{rep.min_separation > cfg.tol.separation, cfg.tol.separation, true,
                               fmt::format("{} points, min separation {:.6g}", rep.samples, rep.min_separation)};
        });
    };
    p.checks["pi_h_injective"] = separation(check_pi_h_injective);
    p.checks["pi_htilde_injective"] = separation(check_pi_htilde_injective);

    p.checks["iota_conjugation"] = guarded(ErrorCode::ConjugationCheckFailed, 1e-9, [&] {
        auto const ip = iota_params(fr, f, p.w->generators);
        return CheckRecord{true, 1e-9, true, fmt::format("residual {:.3g}", ip.conjugation_residual)};
    });

    double worst = 0.0;
    for (auto const & g : p.w->generators) {
        auto const r = block_structure(fr, f, g);
        double const scale = std::max(1.0, matrix_in_bprime(fr, f, g).cwiseAbs().maxCoeff());
        worst = std::max({worst, r.off_block / scale, r.imag / scale, r.quotient_diag / scale});
    }
    p.checks["block_structure"] =
        CheckRecord{worst < cfg.tol.zero, cfg.tol.zero, true, fmt::format("relative residual {:.3g}", worst)};
}

std::vector<DivisorSummary> fan_checks(RunConfig const & cfg, Progress & p)
{
    auto const fan = make_fan(cfg, p);
    auto const act = check_action(fan);
    std::string const first = act.witnesses.empty() ? "" : act.witnesses.front();
    p.checks["action_free"] = CheckRecord{act.free, 0.0, true, act.free ? "" : first};
    p.checks["action_properly_discontinuous"] =
        CheckRecord{act.properly_discontinuous, 0.0, true,
                    fmt::format("{} overlapping translates within window {}", act.overlap_words.size(), fan.window)};
    p.checks["action_invariant"] = CheckRecord{act.invariant, 0.0, true, act.invariant ? "" : first};
    p.checks["fan_property"] = CheckRecord{act.fan_property, 0.0, true, act.fan_property ? "" : first};

    auto const sup = support_check(fan, cfg.samples, cfg.seed);
    p.checks["fan_support"] =
        CheckRecord{sup.covered == sup.samples && sup.conflicts == 0, 1e-9, true,
                    fmt::format("{}/{} covered, {} conflicts", sup.covered, sup.samples, sup.conflicts)};

    p.checks["cone_collapse"] = guarded(ErrorCode::CollapseFailed, 1e-9, [&] {
        double n = INFINITY, margin = INFINITY;
        for (auto const & g : fan.w.generators) {
            auto const r = cone_collapse_check(fan.omega, 1.0, g, 8, 200, cfg.seed);
            n = std::min(n, r.fitted_n);
            margin = std::min(margin, r.min_margin);
        }
        return CheckRecord{margin >= -1e-9, 1e-9, true, fmt::format("N = {:.9g}, min margin {:.3g}", n, margin)};
    });

    DomainSpec const spec(fan);
    auto const til = tiling_check(spec, cfg.samples, cfg.seed, cfg.tol.tiling);
    std::string wit = fmt::format("{}/{} tiled, C = {:.12g}, R = {:.9g}, max |x| on D1 {:.9g}", til.tiled,
                                  til.samples, til.c, til.r_fit, til.max_d1_norm);
    if (!til.gaps.empty())
        wit += fmt::format(", gap at ({:.6g})", fmt::join(til.gaps.front(), ", "));
    p.checks["tiling"] =
        CheckRecord{til.tiled == til.samples && til.norm_bound_ok && til.d1_bounded, cfg.tol.tiling, true, wit};

    auto const bb = tiling_of_Bb(spec, cfg.samples, cfg.seed);
    p.checks["tiling_bb"] = CheckRecord{bb.tiles, 0.0, true, fmt::format("{}/{} covered", bb.covered, bb.samples)};

    std::vector<DivisorSummary> divisors;
    std::vector<std::vector<double>> seen;
    bool complete = true;
    double residual = 0.0;
    for (auto const & cone : fan.sigma)
        for (auto const & ray : cone.rays) {
            if (std::any_of(seen.begin(), seen.end(), [&](auto const & d) { return same_direction(d, ray.dir); }))
                continue;
            seen.push_back(ray.dir);
            auto const rep = divisor_certificate(fan, ray, *p.f, *p.e, 200, cfg.seed);
            divisors.push_back(summarize(ray.dir, rep));
            complete = complete && rep.complete;
            if (rep.elliptic_residual)
                residual = std::max(residual, *rep.elliptic_residual);
        }
    p.checks["divisors"] = CheckRecord{complete && residual < cfg.tol.zero, cfg.tol.zero, true,
                                       fmt::format("{} rays, elliptic residual {:.3g}", divisors.size(), residual)};
    return divisors;
}

void add_advisory(Certificate & c, std::map<std::string, CheckRecord> const & checks)
{
    for (auto const & [name, chk] : checks) {
        if (chk.mandatory)
            continue;
        c.checks[name] = chk;
        if (!chk.pass)
            c.warnings.push_back(fmt::format("advisory check {} failed: {}", name, chk.witness));
    }
}

Certificate verify_stages(RunConfig const & cfg, Progress & p)
{
    prepare(cfg, p);
    auto const & f = *p.f;

    if (cfg.mode == Mode::OT) {
        auto c = ot_certificate(f, *p.e, *p.w);
        add_advisory(c, p.checks);
        return c;
    }
    if (cfg.mode == Mode::Construction)
        settle_labeling(cfg, p);
    ambient_checks(cfg, p);

    PipelineReports r;
    r.mode = cfg.mode;
    if (cfg.mode == Mode::Construction)
        r.divisors = fan_checks(cfg, p);
    r.field = &*p.f;
    r.embeddings = &*p.e;
    r.w = &*p.w;
    r.assumption_c = p.ac;
    r.checks = p.checks;
    r.warnings = p.warnings;
    return assemble(r);
}

Certificate failure(Mode mode, Progress const & p, std::string const & what)
{
    Certificate c;
    c.mode = mode;
    c.status = "failed";
    c.error = what;
    if (p.f)
        c.field = summarize(*p.f);
    if (p.w)
        c.w = summarize(*p.w, p.ac);
    if (p.f && p.w) {
        try {
            c.detectors = run_detectors(*p.f, *p.w);
        } catch (Error const &) {
        }
    }
    c.checks = p.checks;
    c.checks["pipeline"] = CheckRecord{false, 0.0, true, what};
    c.invariants = withheld_invariants(mode);
    c.warnings = p.warnings;
    return c;
}

} // namespace

void apply(Overrides const & o, RunConfig & cfg, bool svg)
{
    if (o.window) {
        if (*o.window < 0)
            config_error("--window must be nonnegative");
        cfg.window = *o.window;
    }
    if (o.samples) {
        if (*o.samples == 0)
            config_error("--samples must be positive");
        cfg.samples = *o.samples;
    }
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.tol) {
        if (!(*o.tol > 0))
            config_error("--tol must be positive");
        cfg.tol.zero = *o.tol;
    }
    if (o.out)
        (svg ? cfg.svg_path : cfg.certificate_path) = *o.out;
}

Certificate verify(RunConfig const & cfg)
{
    Progress p;
    try {
        return verify_stages(cfg, p);
    } catch (Error const & err) {
        if (err.code() == ErrorCode::ConfigError)
            throw;
        return failure(cfg.mode, p, err.what());
    }
}

void write_atomic(fs::path const & path, std::string const & content)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

RunResult run(fs::path const & config, Overrides const & o)
{
    RunResult res;
    res.certificate_path = o.out ? *o.out : fs::path(config.stem().string() + ".cert.json");
    try {
        auto cfg = load_config(config);
        apply(o, cfg);
        res.certificate_path = cfg.certificate_path;
        res.certificate = verify(cfg);
        res.exit_code = res.certificate.status == "certified" ? 0 : 1;
    } catch (Error const & err) {
        if (err.code() != ErrorCode::ConfigError)
            throw;
        Certificate c;
        c.status = "config-error";
        c.error = err.what();
        c.invariants = withheld_invariants(c.mode);
        res.certificate = std::move(c);
        res.exit_code = 2;
    }
    write_atomic(res.certificate_path, serialize(res.certificate));
    return res;
}

// ---- plot

namespace {

struct Canvas {
    double u_max;
    double v_max;
    double scale;
    double margin = 30.0;

    double px(double u) const { return margin + u * scale; }
    double py(double v) const { return margin + (v_max - v) * scale; }
    double width() const { return 2 * margin + u_max * scale; }
    double height() const { return 2 * margin + 2 * v_max * scale; }
};

std::string polygon(Canvas const & cv, std::vector<std::pair<double, double>> const & pts)
{
    std::vector<std::string> xy;
    for (auto const & [u, v] : pts)
        xy.push_back(fmt::format("{:.3f},{:.3f}", cv.px(u), cv.py(v)));
    return fmt::format("<polygon points=\"{}\"/>\n", fmt::join(xy, " "));
}

} // namespace

std::string render_svg(RunConfig const & cfg)
{
    Progress p;
    p.f = validate_field(cfg.min_poly, cfg.basis);
    if (p.f->s != 2)
        throw Error(ErrorCode::UnsupportedDimension, fmt::format("plots need s = 2, the field has s = {}", p.f->s));
    if (cfg.mode != Mode::Construction)
        throw Error(ErrorCode::UnsupportedDimension, "plots need construction mode");
    prepare(cfg, p);
    settle_labeling(cfg, p);
    auto const fan = make_fan(cfg, p);
    DomainSpec const spec(fan);

    // horizontal axis: the L coordinate (oriented towards L_+), vertical: N
    int const l = fan.omega.l_coords[0], nc = 1 - l;
    double const sgn = fan.omega.signs[0];
    auto uv = [&](std::vector<double> const & x) { return std::pair{sgn * x[l], x[nc]}; };
    double const c0 = spec.vertices()[0][0], c1 = spec.vertices()[1][0];
    double const gl = std::abs(word_factors(fan.w, {1}, 2)[l]);
    double const extent = 1.15 * std::max(c0, c1) * gl * gl;
    Canvas const cv{extent, extent, 320.0 / extent};

    std::string out;
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
                       "viewBox=\"0 0 {0:.0f} {1:.0f}\">\n",
                       cv.width(), cv.height());
    out += fmt::format("<defs><clipPath id=\"view\"><rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" "
                       "height=\"{:.3f}\"/></clipPath></defs>\n",
                       cv.px(0), cv.py(extent), cv.px(extent) - cv.px(0), cv.py(-extent) - cv.py(extent));
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<g clip-path=\"url(#view)\">\n";
    out += fmt::format("<rect class=\"B\" x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" "
                       "fill=\"#dddddd\"/>\n",
                       cv.px(std::min(c0, c1)), cv.py(extent), std::abs(cv.px(c1) - cv.px(c0)),
                       cv.py(-extent) - cv.py(extent));

    // a cone with both rays in u > 0, cut to the strip a <= u <= b
    auto piece = [&](Cone const & c, double a, double b) {
        auto const [pu, pv] = uv(c.rays[0].dir);
        auto const [qu, qv] = uv(c.rays[1].dir);
        return polygon(cv, {{a, pv * a / pu}, {b, pv * b / pu}, {b, qv * b / qu}, {a, qv * a / qu}});
    };
    bool const two_rays = std::all_of(fan.sigma.begin(), fan.sigma.end(), [&](Cone const & c) {
        return c.size() == 2 && uv(c.rays[0].dir).first > 0 && uv(c.rays[1].dir).first > 0;
    });
    if (cfg.window >= 1 && two_rays) {
        out += "<g class=\"D1\" fill=\"#3b6ea8\" fill-opacity=\"0.5\">\n";
        for (long k = 0; k <= cfg.window; ++k)
            for (auto const & c : fan.sigma)
                out += piece(act_word(fan.w, {k}, c, 2), std::min(c0, c1), std::max(c0, c1));
        out += "</g>\n";
        out += "<g class=\"D2\" fill=\"#d2812a\" fill-opacity=\"0.5\">\n";
        double a = std::min(c0, c1), b = std::max(c0, c1);
        for (long k = 0; k <= cfg.window && a < extent; ++k) {
            for (auto const & c : fan.sigma)
                out += piece(c, a, std::min(b, extent));
            a *= gl;
            b *= gl;
        }
        out += "</g>\n";
    }

    for (auto const & c : fan.sigma)
        for (long k = -cfg.window; k <= cfg.window; ++k) {
            auto const r = act_word(fan.w, {k}, Cone{{c.rays[0]}}, 2).rays[0].dir;
            auto const [u, v] = uv(r);
            double const t = std::min(u != 0 ? extent / std::abs(u) : INFINITY, v != 0 ? extent / std::abs(v) : INFINITY);
            out += fmt::format("<line class=\"ray\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" "
                               "stroke=\"black\" stroke-width=\"0.6\"/>\n",
                               cv.px(0), cv.py(0), cv.px(u * t), cv.py(v * t));
        }
    out += "</g>\n";
    out += fmt::format("<line class=\"axis\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" "
                       "stroke=\"#888888\"/>\n",
                       cv.px(0), cv.py(0), cv.px(extent), cv.py(0));
    out += fmt::format("<line class=\"axis\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" "
                       "stroke=\"#888888\"/>\n",
                       cv.px(0), cv.py(extent), cv.px(0), cv.py(-extent));
    out += "</svg>\n";
    return out;
}

fs::path plot(fs::path const & config, Overrides const & o)
{
    auto cfg = load_config(config);
    apply(o, cfg, true);
    write_atomic(cfg.svg_path, render_svg(cfg));
    return cfg.svg_path;
}

// ---- degree-4 Salem polynomials

bool salem_root_pattern(IntPoly const & p, double tol)
{
    if (p.degree() != 4)
        return false;
    auto const c = p.to_double();
    auto const roots = durand_kerner(c);
    int big = 0, small = 0, circle = 0;
    for (auto const & z : roots) {
        bool const real = std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z));
        if (real && z.real() > 1 + tol)
            ++big;
        else if (real && z.real() > 0 && z.real() < 1 - tol)
            ++small;
        else if (!real && std::abs(std::abs(z) - 1) < tol)
            ++circle;
    }
    return big == 1 && small == 1 && circle == 2;
}

std::vector<Salem4> enum_salem4(long q1_min, long q1_max)
{
    std::vector<Salem4> out;
    for (long q1 = q1_min; q1 <= q1_max; ++q1)
        for (long q2 = 2 * (q1 - 1) + 1; q2 < -2 * (q1 + 1); ++q2) {
            IntPoly p{1, q1, q2, q1, 1};
            if (!salem_root_pattern(p))
                continue;
            // Y^2 + q1 Y + q2 - 2 with Y = X + 1/X
            long const disc = q1 * q1 - 4 * (q2 - 2);
            long const r = std::lround(std::sqrt(static_cast<double>(disc)));
            bool const square = disc >= 0 && r * r == disc;
            out.push_back(Salem4{q1, q2, p, !square});
        }
    return out;
}

} // namespace nkcert
