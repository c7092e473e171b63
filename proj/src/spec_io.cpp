#include "worm/spec_io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "worm/error.hpp"

namespace worm {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.contains(key))
            throw ConfigError(where + ": unknown field '" + key + "'");
}

template <typename T>
T get(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key))
        throw ConfigError(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
void get_opt(const json& j, const char* key, const std::string& where, T& out)
{
    if (j.contains(key))
        out = get<T>(j, key, where);
}

BaseDomain base_from_json(const json& j)
{
    const std::string where = "base_domain";
    check_keys(j, {"kind", "lo", "hi", "log_r", "radial", "angular", "points"}, where);
    BaseDomain b;
    const auto kind = get<std::string>(j, "kind", where);
    if (kind == "box") {
        b.kind = BaseDomain::Kind::Box;
        if (j.contains("log_r") || j.contains("radial") || j.contains("angular"))
            throw ConfigError(where + ": annulus fields given for a box");
    } else if (kind == "annulus") {
        b.kind = BaseDomain::Kind::Annulus;
        const auto lr = get<std::vector<double>>(j, "log_r", where);
        if (lr.size() != 2)
            throw ConfigError(where + ": log_r must be [min, max]");
        b.log_r_min = lr[0];
        b.log_r_max = lr[1];
        get_opt(j, "radial", where, b.radial);
        get_opt(j, "angular", where, b.angular);
    } else {
        throw ConfigError(where + ": kind must be \"box\" or \"annulus\"");
    }
    get_opt(j, "lo", where, b.lo);
    get_opt(j, "hi", where, b.hi);
    get_opt(j, "points", where, b.points);
    return b;
}

json base_to_json(const BaseDomain& b)
{
    json j;
    if (b.kind == BaseDomain::Kind::Box) {
        j["kind"] = "box";
    } else {
        j["kind"] = "annulus";
        j["log_r"] = {b.log_r_min, b.log_r_max};
        j["radial"] = b.radial;
        j["angular"] = b.angular;
    }
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["points"] = b.points;
    return j;
}

} // namespace

WormSpec spec_from_json(const json& j)
{
    const std::string where = "spec";
    check_keys(j,
               {"kind", "n", "codim", "u", "sigma", "d_def", "chi", "K", "t", "params", "base_domain", "loops",
                "sampling", "tolerances", "constants"},
               where);
    WormSpec s;
    const auto kind = get<std::string>(j, "kind", where);
    if (kind == "general")
        s.kind = WormKind::General;
    else if (kind == "diederich_fornaess")
        s.kind = WormKind::DiederichFornaess;
    else
        throw ConfigError(where + ": kind must be \"general\" or \"diederich_fornaess\"");

    get_opt(j, "n", where, s.n);
    get_opt(j, "codim", where, s.codim);
    get_opt(j, "u", where, s.u);
    get_opt(j, "sigma", where, s.sigma);
    get_opt(j, "d_def", where, s.d_def);
    get_opt(j, "t", where, s.t);

    if (j.contains("chi")) {
        const json& c = j.at("chi");
        check_keys(c, {"a1", "b1", "a2", "b2", "M"}, "chi");
        ChiParams p;
        get_opt(c, "a1", "chi", p.a1);
        get_opt(c, "b1", "chi", p.b1);
        get_opt(c, "a2", "chi", p.a2);
        get_opt(c, "b2", "chi", p.b2);
        get_opt(c, "M", "chi", p.M);
        s.chi = p;
    }
    if (j.contains("K")) {
        const json& k = j.at("K");
        if (k.is_string()) {
            if (k.get<std::string>() != "auto")
                throw ConfigError(where + ": K must be a number or \"auto\"");
        } else if (k.is_number()) {
            s.K = k.get<double>();
        } else {
            throw ConfigError(where + ": K must be a number or \"auto\"");
        }
    }
    if (j.contains("params")) {
        const json& p = j.at("params");
        if (!p.is_object())
            throw ConfigError("params: expected an object");
        for (const auto& [name, value] : p.items()) {
            if (!value.is_number())
                throw ConfigError("params: '" + name + "' must be a number");
            s.params[name] = value.get<double>();
        }
    }
    if (!j.contains("base_domain"))
        throw ConfigError(where + ": missing field 'base_domain'");
    s.base_domain = base_from_json(j.at("base_domain"));

    if (j.contains("loops")) {
        const json& ls = j.at("loops");
        if (!ls.is_array())
            throw ConfigError("loops: expected an array");
        for (const json& l : ls) {
            check_keys(l, {"name", "z", "winding", "segments"}, "loop");
            LoopSpec loop;
            loop.name = get<std::string>(l, "name", "loop");
            loop.z = get<std::vector<std::string>>(l, "z", "loop");
            get_opt(l, "winding", "loop", loop.winding);
            get_opt(l, "segments", "loop", loop.segments);
            s.loops.push_back(std::move(loop));
        }
    }
    if (j.contains("sampling")) {
        const json& sm = j.at("sampling");
        check_keys(sm, {"sphere"}, "sampling");
        get_opt(sm, "sphere", "sampling", s.sampling.sphere);
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        const std::string w = "tolerances";
        check_keys(t,
                   {"tol_psc", "zero_tol", "strong_margin", "core_w", "core_eta", "cap_gradient", "period_oracle",
                    "period_expected"},
                   w);
        Tolerances& o = s.tolerances;
        get_opt(t, "tol_psc", w, o.tol_psc);
        get_opt(t, "zero_tol", w, o.zero_tol);
        get_opt(t, "strong_margin", w, o.strong_margin);
        get_opt(t, "core_w", w, o.core_w);
        get_opt(t, "core_eta", w, o.core_eta);
        get_opt(t, "cap_gradient", w, o.cap_gradient);
        get_opt(t, "period_oracle", w, o.period_oracle);
        get_opt(t, "period_expected", w, o.period_expected);
    }
    if (j.contains("constants")) {
        const json& c = j.at("constants");
        const std::string w = "constants";
        check_keys(c,
                   {"grid_points", "step_fraction", "max_attempts", "level_grid_points", "level_delta", "level_tol",
                    "k_start"},
                   w);
        ConstantSettings& o = s.constants;
        get_opt(c, "grid_points", w, o.grid_points);
        get_opt(c, "step_fraction", w, o.step_fraction);
        get_opt(c, "max_attempts", w, o.max_attempts);
        get_opt(c, "level_grid_points", w, o.level_grid_points);
        get_opt(c, "level_delta", w, o.level_delta);
        get_opt(c, "level_tol", w, o.level_tol);
        if (c.contains("k_start"))
            o.k_start = get<double>(c, "k_start", w);
    }
    s.validate();
    return s;
}

json spec_to_json(const WormSpec& s)
{
    json j;
    j["kind"] = s.kind == WormKind::General ? "general" : "diederich_fornaess";
    j["n"] = s.n;
    j["codim"] = s.codim;
    j["u"] = s.u;
    if (!s.sigma.empty())
        j["sigma"] = s.sigma;
    if (!s.d_def.empty())
        j["d_def"] = s.d_def;
    if (s.chi)
        j["chi"] = {{"a1", s.chi->a1}, {"b1", s.chi->b1}, {"a2", s.chi->a2}, {"b2", s.chi->b2}, {"M", s.chi->M}};
    if (s.K)
        j["K"] = *s.K;
    else
        j["K"] = "auto";
    j["t"] = s.t;
    j["params"] = json::object();
    for (const auto& [name, value] : s.params)
        j["params"][name] = value;
    j["base_domain"] = base_to_json(s.base_domain);
    j["loops"] = json::array();
    for (const auto& l : s.loops)
        j["loops"].push_back({{"name", l.name}, {"z", l.z}, {"winding", l.winding}, {"segments", l.segments}});
    j["sampling"] = {{"sphere", s.sampling.sphere}};
    const Tolerances& t = s.tolerances;
    j["tolerances"] = {{"tol_psc", t.tol_psc},
                       {"zero_tol", t.zero_tol},
                       {"strong_margin", t.strong_margin},
                       {"core_w", t.core_w},
                       {"core_eta", t.core_eta},
                       {"cap_gradient", t.cap_gradient},
                       {"period_oracle", t.period_oracle},
                       {"period_expected", t.period_expected}};
    const ConstantSettings& c = s.constants;
    j["constants"] = {{"grid_points", c.grid_points},
                      {"step_fraction", c.step_fraction},
                      {"max_attempts", c.max_attempts},
                      {"level_grid_points", c.level_grid_points},
                      {"level_delta", c.level_delta},
                      {"level_tol", c.level_tol}};
    if (c.k_start)
        j["constants"]["k_start"] = *c.k_start;
    return j;
}

WormSpec load_spec(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open spec file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("spec file '" + path.string() + "': " + e.what());
    }
    return spec_from_json(j);
}

} // namespace worm
