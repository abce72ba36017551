#include "nkcert/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "nkcert/error.hpp"

namespace nkcert {

namespace {

[[noreturn]] void fail(std::string const & msg) { throw Error(ErrorCode::ConfigError, msg); }

void only_keys(toml::table const & t, std::string const & where, std::set<std::string> const & allowed)
{
    for (auto const & [k, v] : t)
        if (!allowed.count(std::string(k.str())))
            fail("unknown key '" + std::string(k.str()) + "' in " + where);
}

toml::table const * table_at(toml::table const & root, char const * key, bool required)
{
    auto const * node = root.get(key);
    if (!node) {
        if (required)
            fail(std::string("missing table [") + key + "]");
        return nullptr;
    }
    auto const * t = node->as_table();
    if (!t)
        fail(std::string("'") + key + "' must be a table");
    return t;
}

long as_integer(toml::node const & n, std::string const & where)
{
    auto const v = n.value<std::int64_t>();
    if (!n.is_integer() || !v)
        fail(where + " must be an integer");
    return static_cast<long>(*v);
}

double as_number(toml::node const & n, std::string const & where)
{
    if (!n.is_number())
        fail(where + " must be a number");
    return *n.value<double>();
}

toml::array const & as_array(toml::node const & n, std::string const & where)
{
    auto const * a = n.as_array();
    if (!a)
        fail(where + " must be an array");
    return *a;
}

std::vector<long> integer_list(toml::node const & n, std::string const & where)
{
    std::vector<long> out;
    for (auto const & x : as_array(n, where))
        out.push_back(as_integer(x, where + " entry"));
    return out;
}

std::vector<std::vector<long>> integer_rows(toml::node const & n, std::string const & where)
{
    std::vector<std::vector<long>> out;
    for (auto const & row : as_array(n, where))
        out.push_back(integer_list(row, where + " row"));
    return out;
}

Rational as_rational(toml::node const & n, std::string const & where)
{
    if (n.is_integer())
        return Rational(as_integer(n, where));
    if (auto const s = n.value<std::string>()) {
        try {
            Rational q(*s);
            q.canonicalize();
            return q;
        } catch (std::invalid_argument const &) {
        }
    }
    fail(where + " must be an integer or a \"p/q\" string");
}

template <class T>
T positive(long v, std::string const & where)
{
    if (v <= 0)
        fail(where + " must be positive");
    return static_cast<T>(v);
}

} // namespace

RunConfig parse_config(std::string const & text, std::string const & name)
{
    toml::table root;
    try {
        root = toml::parse(text, name);
    } catch (toml::parse_error const & err) {
        std::ostringstream os;
        os << err;
        fail("cannot parse " + name + ": " + os.str());
    }
    only_keys(root, "the top level", {"field", "units", "subgroup", "checks", "tolerances", "fan", "output"});

    RunConfig cfg;
    auto const & field = *table_at(root, "field", true);
    only_keys(field, "[field]", {"min_poly", "basis"});
    if (!field.get("min_poly"))
        fail("[field] needs min_poly");
    {
        std::vector<Integer> coeffs;
        for (long c : integer_list(*field.get("min_poly"), "field.min_poly"))
            coeffs.emplace_back(c);
        if (coeffs.size() < 2 || coeffs.back() == 0)
            fail("field.min_poly needs a nonzero leading coefficient");
        cfg.min_poly = IntPoly(std::move(coeffs));
    }
    if (auto const * b = field.get("basis")) {
        if (auto const s = b->value<std::string>()) {
            if (*s != "power")
                fail("field.basis must be \"power\" or a list of columns");
        } else {
            std::vector<std::vector<Rational>> cols;
            for (auto const & col : as_array(*b, "field.basis")) {
                std::vector<Rational> c;
                for (auto const & x : as_array(col, "field.basis column"))
                    c.push_back(as_rational(x, "field.basis entry"));
                cols.push_back(std::move(c));
            }
            cfg.basis = std::move(cols);
        }
    }

    if (auto const * units = table_at(root, "units", false)) {
        only_keys(*units, "[units]", {"candidates"});
        if (auto const * c = units->get("candidates"))
            cfg.candidates = integer_rows(*c, "units.candidates");
    }
    int const n = cfg.min_poly.degree();
    for (auto const & c : cfg.candidates)
        if (static_cast<int>(c.size()) != n)
            fail("units.candidates rows need " + std::to_string(n) + " coordinates");

    auto const & sub = *table_at(root, "subgroup", true);
    only_keys(sub, "[subgroup]", {"mode", "b", "words"});
    if (auto const * m = sub.get("mode")) {
        auto const s = m->value<std::string>();
        if (!s)
            fail("subgroup.mode must be a string");
        if (*s == "construction")
            cfg.mode = Mode::Construction;
        else if (*s == "ot")
            cfg.mode = Mode::OT;
        else if (*s == "lvmb")
            cfg.mode = Mode::LVMB;
        else
            fail("subgroup.mode must be construction, ot or lvmb");
    }
    if (!sub.get("b"))
        fail("[subgroup] needs b");
    cfg.b = static_cast<int>(as_integer(*sub.get("b"), "subgroup.b"));
    if (cfg.b < 0)
        fail("subgroup.b must be nonnegative");
    if (auto const * w = sub.get("words")) {
        cfg.words = integer_rows(*w, "subgroup.words");
        if (static_cast<int>(cfg.words->size()) != cfg.b)
            fail("subgroup.words needs exactly b rows");
        for (auto const & row : *cfg.words)
            if (row.size() != cfg.candidates.size())
                fail("subgroup.words rows need one exponent per candidate");
    }

    if (auto const * chk = table_at(root, "checks", false)) {
        only_keys(*chk, "[checks]",
                  {"window", "samples", "seed", "assumption_c_window", "candidate_window", "injectivity_samples",
                   "injectivity_height"});
        if (auto const * v = chk->get("window")) {
            cfg.window = static_cast<int>(as_integer(*v, "checks.window"));
            if (cfg.window < 0)
                fail("checks.window must be nonnegative");
        }
        if (auto const * v = chk->get("samples"))
            cfg.samples = positive<std::size_t>(as_integer(*v, "checks.samples"), "checks.samples");
        if (auto const * v = chk->get("seed")) {
            long const s = as_integer(*v, "checks.seed");
            if (s < 0)
                fail("checks.seed must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        }
        if (auto const * v = chk->get("assumption_c_window"))
            cfg.assumption_c_window = positive<int>(as_integer(*v, "checks.assumption_c_window"), "checks.assumption_c_window");
        if (auto const * v = chk->get("candidate_window"))
            cfg.candidate_window = positive<int>(as_integer(*v, "checks.candidate_window"), "checks.candidate_window");
        if (auto const * v = chk->get("injectivity_samples"))
            cfg.injectivity_samples = positive<std::size_t>(as_integer(*v, "checks.injectivity_samples"),
                                                            "checks.injectivity_samples");
        if (auto const * v = chk->get("injectivity_height"))
            cfg.injectivity_height = positive<long>(as_integer(*v, "checks.injectivity_height"),
                                                    "checks.injectivity_height");
    }

    if (auto const * tol = table_at(root, "tolerances", false)) {
        only_keys(*tol, "[tolerances]", {"zero", "separation", "tiling"});
        auto get = [&](char const * k, double & dst) {
            if (auto const * v = tol->get(k)) {
                dst = as_number(*v, std::string("tolerances.") + k);
                if (!(dst > 0))
                    fail(std::string("tolerances.") + k + " must be positive");
            }
        };
        get("zero", cfg.tol.zero);
        get("separation", cfg.tol.separation);
        get("tiling", cfg.tol.tiling);
    }

    if (auto const * fan = table_at(root, "fan", false)) {
        only_keys(*fan, "[fan]", {"cones"});
        if (auto const * c = fan->get("cones")) {
            std::vector<std::vector<std::vector<double>>> cones;
            for (auto const & cone : as_array(*c, "fan.cones")) {
                std::vector<std::vector<double>> rays;
                for (auto const & ray : as_array(cone, "fan.cones cone")) {
                    std::vector<double> r;
                    for (auto const & x : as_array(ray, "fan.cones ray"))
                        r.push_back(as_number(x, "fan.cones entry"));
                    rays.push_back(std::move(r));
                }
                if (rays.empty())
                    fail("fan.cones entries need at least one ray");
                cones.push_back(std::move(rays));
            }
            cfg.cones = std::move(cones);
        }
    }

    cfg.certificate_path = name + ".cert.json";
    cfg.svg_path = name + ".svg";
    if (auto const * out = table_at(root, "output", false)) {
        only_keys(*out, "[output]", {"certificate", "svg"});
        if (auto const * v = out->get("certificate")) {
            auto const s = v->value<std::string>();
            if (!s || s->empty())
                fail("output.certificate must be a path");
            cfg.certificate_path = *s;
        }
        if (auto const * v = out->get("svg")) {
            auto const s = v->value<std::string>();
            if (!s || s->empty())
                fail("output.svg must be a path");
            cfg.svg_path = *s;
        }
    }
    return cfg;
}

RunConfig load_config(std::filesystem::path const & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str(), path.stem().string());
}

} // namespace nkcert
