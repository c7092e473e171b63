#include "worm/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "worm/error.hpp"
#include "worm/spec_io.hpp"

namespace worm {

using nlohmann::json;

namespace {

constexpr std::size_t kListedFailures = 50;

json num(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

json failure_list(const std::vector<std::size_t>& v)
{
    json first = json::array();
    for (std::size_t i = 0; i < v.size() && i < kListedFailures; ++i)
        first.push_back(v[i]);
    return {{"count", v.size()}, {"first", first}};
}

const char* class_name(SampleClass c)
{
    switch (c) {
    case SampleClass::OnCore:
        return "on_core";
    case SampleClass::OffCore:
        return "off_core";
    case SampleClass::NearCap:
        return "near_cap";
    }
    return "?";
}

std::string iso_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

WormSpec apply_overrides(WormSpec spec, const RunConfig& cfg)
{
    if (cfg.tol_psc)
        spec.tolerances.tol_psc = *cfg.tol_psc;
    if (cfg.zero_tol)
        spec.tolerances.zero_tol = *cfg.zero_tol;
    if (cfg.strong_margin)
        spec.tolerances.strong_margin = *cfg.strong_margin;
    if (cfg.K)
        spec.K = *cfg.K;
    if (cfg.k_auto)
        spec.K.reset();
    if (cfg.sphere)
        spec.sampling.sphere = *cfg.sphere;
    if (cfg.segments)
        for (auto& l : spec.loops)
            l.segments = *cfg.segments;
    if (cfg.samples)
        spec.base_domain = spec.base_domain.with_resolution(*cfg.samples);
    spec.validate();
    return spec;
}

json error_report(const RunConfig& cfg, ExitCode code, const std::string& msg)
{
    return {{"schema_version", kSchemaVersion},
            {"command", command_name(cfg.command)},
            {"spec", nullptr},
            {"domain", nullptr},
            {"constants", nullptr},
            {"levi", nullptr},
            {"periods", nullptr},
            {"status", {{"pass", false}, {"exit_code", static_cast<int>(code)}, {"failures", {msg}}}}};
}

const json* resolve_ref(const json& root, const std::string& ref)
{
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0 || !root.contains("$defs"))
        return nullptr;
    const auto& defs = root.at("$defs");
    const auto it = defs.find(ref.substr(prefix.size()));
    return it == defs.end() ? nullptr : &*it;
}

bool type_matches(const json& doc, const std::string& type)
{
    if (type == "object")
        return doc.is_object();
    if (type == "array")
        return doc.is_array();
    if (type == "string")
        return doc.is_string();
    if (type == "boolean")
        return doc.is_boolean();
    if (type == "null")
        return doc.is_null();
    if (type == "integer")
        return doc.is_number_integer();
    if (type == "number")
        return doc.is_number();
    return false;
}

void validate_node(const json& doc, const json& schema, const json& root, bool strict, const std::string& path,
                   std::vector<std::string>& errors)
{
    if (schema.contains("$ref")) {
        const json* target = resolve_ref(root, schema.at("$ref").get<std::string>());
        if (!target) {
            errors.push_back(path + ": unresolved reference");
            return;
        }
        validate_node(doc, *target, root, strict, path, errors);
        return;
    }
    if (schema.contains("type")) {
        const json& t = schema.at("type");
        bool ok = false;
        if (t.is_string())
            ok = type_matches(doc, t.get<std::string>());
        else
            for (const auto& alt : t)
                ok = ok || type_matches(doc, alt.get<std::string>());
        if (!ok) {
            errors.push_back(path + ": wrong type");
            return;
        }
    }
    if (schema.contains("const") && doc != schema.at("const"))
        errors.push_back(path + ": expected " + schema.at("const").dump());
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema.at("enum"))
            found = found || doc == e;
        if (!found)
            errors.push_back(path + ": value not in enum");
    }
    if (schema.contains("minimum") && doc.is_number() && doc.get<double>() < schema.at("minimum").get<double>())
        errors.push_back(path + ": below minimum");
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema.at("required"))
                if (!doc.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing '" + key.get<std::string>() + "'");
        if (schema.contains("properties")) {
            const json& props = schema.at("properties");
            const bool extra_ok = schema.value("additionalProperties", !strict);
            for (const auto& [key, value] : doc.items()) {
                if (props.contains(key))
                    validate_node(value, props.at(key), root, strict, path + "/" + key, errors);
                else if (!extra_ok)
                    errors.push_back(path + ": unknown field '" + key + "'");
            }
        }
    }
    if (doc.is_array() && schema.contains("items"))
        for (std::size_t i = 0; i < doc.size(); ++i)
            validate_node(doc[i], schema.at("items"), root, strict, path + "/" + std::to_string(i), errors);
}

} // namespace

const char* command_name(Command c)
{
    switch (c) {
    case Command::Build:
        return "build";
    case Command::Certify:
        return "certify";
    case Command::Dangelo:
        return "dangelo";
    case Command::Constants:
        return "constants";
    case Command::All:
        return "all";
    }
    return "?";
}

void RunConfig::validate() const
{
    if (spec_path.empty())
        throw ConfigError("no spec file given");
    if (!std::filesystem::is_regular_file(spec_path))
        throw ConfigError("spec file '" + spec_path.string() + "' does not exist");
    if (samples && *samples < 2)
        throw ConfigError("--samples must be >= 2");
    if (sphere && *sphere < 1)
        throw ConfigError("--sphere must be >= 1");
    if (segments && (*segments < 16 || *segments % 2 != 0))
        throw ConfigError("--segments must be even and >= 16");
    if (K && !(*K > 0.0))
        throw ConfigError("--k must be positive or \"auto\"");
    for (const auto& t : {tol_psc, zero_tol, strong_margin})
        if (t && !(*t >= 0.0))
            throw ConfigError("tolerances must be non-negative");
}

json budget_to_json(const ConstantBudget& b)
{
    json attempts = json::array();
    for (const auto& a : b.attempts)
        attempts.push_back({{"K", a.K}, {"margin", num(a.margin)}, {"near_points", a.near_points}, {"pass", a.pass}});
    return {{"lemma1",
             {{"c", b.lemma1.c},
              {"C", b.lemma1.C},
              {"c_raw", b.lemma1.c_raw},
              {"C_raw", b.lemma1.C_raw},
              {"points", b.lemma1.points}}},
            {"K_L", b.K_L},
            {"lemma2", {{"c", b.lemma2.c}, {"eps0", b.lemma2.eps0}, {"points", b.lemma2.points}}},
            {"K_precompact", b.K_precompact},
            {"K_lower", b.K_lower},
            {"K_start", b.K_start},
            {"K_step", b.K_step},
            {"K_selected", b.found ? json(b.K_selected) : json(nullptr)},
            {"regular_value_margin", b.found ? num(b.regular_value_margin) : json(nullptr)},
            {"level_delta", b.level_delta},
            {"level_tol", b.level_tol},
            {"max_R", b.max_R},
            {"grid_points", b.grid_points},
            {"level_grid_points", b.level_grid_points},
            {"attempts", attempts},
            {"found", b.found}};
}

json levi_to_json(const LeviReport& r)
{
    return {{"samples", r.samples.size()},
            {"analysed", r.analysed},
            {"on_core", r.on_core},
            {"off_core", r.off_core},
            {"near_cap", r.near_cap},
            {"expected_zero_count", r.expected_zero_count},
            {"min_eigenvalue", num(r.min_eigenvalue)},
            {"min_off_core", num(r.min_off_core)},
            {"min_on_core_positive", num(r.min_on_core_positive)},
            {"max_alignment", r.max_alignment},
            {"max_residual", r.max_residual},
            {"pseudoconvex_failures", failure_list(r.pseudoconvex_failures)},
            {"strong_failures", failure_list(r.strong_failures)},
            {"zero_count_failures", failure_list(r.zero_count_failures)},
            {"pass", r.pass}};
}

json period_to_json(const PeriodReport& p)
{
    json centroid = json::array();
    for (Eigen::Index j = 0; j < p.centroid.size(); ++j)
        centroid.push_back({p.centroid[j].real(), p.centroid[j].imag()});
    return {{"name", p.name},
            {"winding", p.winding},
            {"segments", p.segments},
            {"centroid", centroid},
            {"mean_radius", p.mean_radius},
            {"integrated", p.integrated},
            {"oracle", p.oracle},
            {"expected", p.expected ? json(*p.expected) : json(nullptr)},
            {"oracle_discrepancy", p.oracle_discrepancy},
            {"expected_discrepancy", p.expected_discrepancy ? json(*p.expected_discrepancy) : json(nullptr)},
            {"max_imag_residual", p.max_imag_residual},
            {"max_eta", p.max_eta},
            {"pass", p.pass}};
}

void write_samples_csv(std::ostream& out, const WormDomain& dom, std::span<const BoundarySample> samples,
                       const LeviReport& levi)
{
    std::ostringstream os;
    os.precision(17);
    const int m = dom.dim() - 1;
    os << "index,base_index,direction,class";
    for (int j = 1; j <= dom.n(); ++j)
        os << ",re_z" << j << ",im_z" << j;
    for (int j = 1; j <= dom.codim(); ++j)
        os << ",re_w" << j << ",im_w" << j;
    os << ",residual,scale,eta";
    for (int k = 1; k <= m; ++k)
        os << ",eig" << k;
    os << ",pass\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const BoundarySample& s = samples[i];
        const SampleVerdict& v = levi.samples.at(i);
        os << i << ',' << s.base_index << ',' << s.direction << ',' << class_name(v.cls);
        for (Eigen::Index j = 0; j < s.z.size(); ++j)
            os << ',' << s.z[j].real() << ',' << s.z[j].imag();
        for (Eigen::Index j = 0; j < s.w.size(); ++j)
            os << ',' << s.w[j].real() << ',' << s.w[j].imag();
        os << ',' << s.residual << ',' << s.scale << ',' << s.eta;
        for (int k = 0; k < m; ++k) {
            os << ',';
            if (k < v.eigenvalues.size())
                os << v.eigenvalues[k];
        }
        os << ',' << (v.pass ? 1 : 0) << '\n';
    }
    out << os.str();
}

RunResult execute(const RunConfig& cfg)
{
    RunResult res;
    try {
        cfg.validate();
        const WormSpec spec = apply_overrides(load_spec(cfg.spec_path), cfg);
        const bool general = spec.kind == WormKind::General;
        if (cfg.command == Command::Constants && !general)
            throw ConfigError("the constants command applies to general worms");
        const bool want_budget = general && (cfg.command == Command::Constants || cfg.command == Command::All);
        const ResolvedWorm rw = build_worm(spec, want_budget);
        const WormDomain& dom = rw.domain;

        std::vector<std::string> failures;
        json report = {{"schema_version", kSchemaVersion},
                       {"command", command_name(cfg.command)},
                       {"spec", spec_to_json(spec)},
                       {"constants", nullptr},
                       {"levi", nullptr},
                       {"periods", nullptr}};
        json domain = {{"kind", general ? "general" : "diederich_fornaess"},
                       {"n", dom.n()},
                       {"codim", dom.codim()},
                       {"K", general ? json(dom.K) : json(nullptr)},
                       {"t", spec.t},
                       {"r", to_string(dom.r)},
                       {"base_points", nullptr},
                       {"samples", nullptr},
                       {"skipped", nullptr}};

        if (rw.budget) {
            report["constants"] = budget_to_json(*rw.budget);
            if (!rw.budget->found)
                failures.push_back("constants: no K passed the regular-value check");
        }

        const bool want_samples =
            cfg.command == Command::Build || cfg.command == Command::Certify || cfg.command == Command::All;
        if (want_samples) {
            const auto grid = spec.base_domain.grid(spec.n);
            const SampleSet set = sample_boundary(dom, grid, spec.sampling.sphere);
            domain["base_points"] = set.base_points;
            domain["samples"] = set.samples.size();
            domain["skipped"] = set.skipped;
            if (cfg.command != Command::Build) {
                const LeviReport levi = certify(dom, set.samples, spec.tolerances);
                report["levi"] = levi_to_json(levi);
                report["levi"]["tolerances"] = {{"tol_psc", spec.tolerances.tol_psc},
                                                {"zero_tol", spec.tolerances.zero_tol},
                                                {"strong_margin", spec.tolerances.strong_margin}};
                if (!levi.pass) {
                    std::ostringstream os;
                    os << "levi: " << levi.pseudoconvex_failures.size() << " pseudoconvexity, "
                       << levi.strong_failures.size() << " strong-margin and " << levi.zero_count_failures.size()
                       << " zero-count failures";
                    if (levi.analysed == 0)
                        os << " (no samples analysed)";
                    failures.push_back(os.str());
                }
                if (cfg.dump_csv) {
                    std::ostringstream csv;
                    write_samples_csv(csv, dom, set.samples, levi);
                    res.samples_csv = csv.str();
                }
            }
        }

        if (cfg.command == Command::Dangelo || cfg.command == Command::All) {
            if (spec.loops.empty() && cfg.command == Command::Dangelo)
                throw ConfigError("the spec defines no loops");
            json periods = json::array();
            for (const auto& loop : spec.loops) {
                const PeriodReport p = period(dom, loop);
                periods.push_back(period_to_json(p));
                if (!p.pass)
                    failures.push_back("period '" + p.name + "' outside tolerance");
            }
            report["periods"] = periods;
            res.periods = json{{"schema_version", kSchemaVersion}, {"periods", periods}};
        }

        report["domain"] = domain;
        res.code = failures.empty() ? ExitCode::Ok : ExitCode::CertificationFailure;
        report["status"] = {{"pass", failures.empty()}, {"exit_code", static_cast<int>(res.code)}, {"failures", failures}};
        res.report = std::move(report);
        res.message = failures.empty() ? "pass" : failures.front();
    } catch (const NumericalError& e) {
        res = {};
        res.code = ExitCode::NumericalError;
        res.message = e.what();
        res.report = error_report(cfg, res.code, res.message);
    } catch (const Error& e) {
        res = {};
        res.code = ExitCode::ConfigError;
        res.message = e.what();
        res.report = error_report(cfg, res.code, res.message);
    }
    return res;
}

int run(const RunConfig& cfg, std::ostream& log)
{
    RunResult res = execute(cfg);
    if (cfg.timestamp)
        res.report["timestamp"] = iso_timestamp();
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(cfg.out_dir / name, std::ios::binary);
        if (!out)
            throw ConfigError(std::string("cannot write ") + (cfg.out_dir / name).string());
        out << text;
    };
    try {
        write("report.json", res.report.dump(2) + "\n");
        if (res.periods)
            write("periods.json", res.periods->dump(2) + "\n");
        if (res.samples_csv)
            write("samples.csv", *res.samples_csv);
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::ConfigError);
    }
    log << command_name(cfg.command) << ": " << res.message << '\n';
    return static_cast<int>(res.code);
}

std::string report_schema()
{
    return R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "worm report",
  "type": "object",
  "required": ["schema_version", "command", "spec", "domain", "constants", "levi", "periods", "status"],
  "properties": {
    "schema_version": {"const": "1.0.0"},
    "command": {"enum": ["build", "certify", "dangelo", "constants", "all"]},
    "spec": {"type": ["object", "null"]},
    "domain": {"$ref": "#/$defs/domain_or_null"},
    "constants": {"$ref": "#/$defs/budget_or_null"},
    "levi": {"$ref": "#/$defs/levi_or_null"},
    "periods": {"type": ["array", "null"], "items": {"$ref": "#/$defs/period"}},
    "status": {
      "type": "object",
      "required": ["pass", "exit_code", "failures"],
      "properties": {
        "pass": {"type": "boolean"},
        "exit_code": {"enum": [0, 1, 2, 3]},
        "failures": {"type": "array", "items": {"type": "string"}}
      }
    },
    "timestamp": {"type": "string"}
  },
  "$defs": {
    "number_or_null": {"type": ["number", "null"]},
    "count": {"type": "integer", "minimum": 0},
    "domain_or_null": {
      "type": ["object", "null"],
      "required": ["kind", "n", "codim", "K", "t", "r", "base_points", "samples", "skipped"],
      "properties": {
        "kind": {"enum": ["general", "diederich_fornaess"]},
        "n": {"type": "integer", "minimum": 1},
        "codim": {"type": "integer", "minimum": 1},
        "K": {"type": ["number", "null"]},
        "t": {"type": "number"},
        "r": {"type": "string"},
        "base_points": {"type": ["integer", "null"]},
        "samples": {"type": ["integer", "null"]},
        "skipped": {"type": ["integer", "null"]}
      }
    },
    "budget_or_null": {
      "type": ["object", "null"],
      "required": ["lemma1", "K_L", "lemma2", "K_precompact", "K_lower", "K_start", "K_step", "K_selected",
                   "regular_value_margin", "level_delta", "level_tol", "max_R", "grid_points",
                   "level_grid_points", "attempts", "found"],
      "properties": {
        "lemma1": {
          "type": "object",
          "required": ["c", "C", "c_raw", "C_raw", "points"],
          "properties": {
            "c": {"type": "number"},
            "C": {"type": "number"},
            "c_raw": {"type": "number"},
            "C_raw": {"type": "number"},
            "points": {"$ref": "#/$defs/count"}
          }
        },
        "K_L": {"type": "number"},
        "lemma2": {
          "type": "object",
          "required": ["c", "eps0", "points"],
          "properties": {
            "c": {"type": "number"},
            "eps0": {"type": "number"},
            "points": {"$ref": "#/$defs/count"}
          }
        },
        "K_precompact": {"type": "number"},
        "K_lower": {"type": "number"},
        "K_start": {"type": "number"},
        "K_step": {"type": "number"},
        "K_selected": {"$ref": "#/$defs/number_or_null"},
        "regular_value_margin": {"$ref": "#/$defs/number_or_null"},
        "level_delta": {"type": "number"},
        "level_tol": {"type": "number"},
        "max_R": {"type": "number"},
        "grid_points": {"$ref": "#/$defs/count"},
        "level_grid_points": {"$ref": "#/$defs/count"},
        "attempts": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["K", "margin", "near_points", "pass"],
            "properties": {
              "K": {"type": "number"},
              "margin": {"$ref": "#/$defs/number_or_null"},
              "near_points": {"$ref": "#/$defs/count"},
              "pass": {"type": "boolean"}
            }
          }
        },
        "found": {"type": "boolean"}
      }
    },
    "failures": {
      "type": "object",
      "required": ["count", "first"],
      "properties": {
        "count": {"$ref": "#/$defs/count"},
        "first": {"type": "array", "items": {"$ref": "#/$defs/count"}}
      }
    },
    "levi_or_null": {
      "type": ["object", "null"],
      "required": ["samples", "analysed", "on_core", "off_core", "near_cap", "expected_zero_count",
                   "min_eigenvalue", "min_off_core", "min_on_core_positive", "max_alignment", "max_residual",
                   "pseudoconvex_failures", "strong_failures", "zero_count_failures", "tolerances", "pass"],
      "properties": {
        "samples": {"$ref": "#/$defs/count"},
        "analysed": {"$ref": "#/$defs/count"},
        "on_core": {"$ref": "#/$defs/count"},
        "off_core": {"$ref": "#/$defs/count"},
        "near_cap": {"$ref": "#/$defs/count"},
        "expected_zero_count": {"$ref": "#/$defs/count"},
        "min_eigenvalue": {"$ref": "#/$defs/number_or_null"},
        "min_off_core": {"$ref": "#/$defs/number_or_null"},
        "min_on_core_positive": {"$ref": "#/$defs/number_or_null"},
        "max_alignment": {"type": "number"},
        "max_residual": {"type": "number"},
        "pseudoconvex_failures": {"$ref": "#/$defs/failures"},
        "strong_failures": {"$ref": "#/$defs/failures"},
        "zero_count_failures": {"$ref": "#/$defs/failures"},
        "tolerances": {
          "type": "object",
          "required": ["tol_psc", "zero_tol", "strong_margin"],
          "properties": {
            "tol_psc": {"type": "number"},
            "zero_tol": {"type": "number"},
            "strong_margin": {"type": "number"}
          }
        },
        "pass": {"type": "boolean"}
      }
    },
    "period": {
      "type": "object",
      "required": ["name", "winding", "segments", "centroid", "mean_radius", "integrated", "oracle", "expected",
                   "oracle_discrepancy", "expected_discrepancy", "max_imag_residual", "max_eta", "pass"],
      "properties": {
        "name": {"type": "string"},
        "winding": {"type": "integer"},
        "segments": {"type": "integer", "minimum": 16},
        "centroid": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "mean_radius": {"type": "number"},
        "integrated": {"type": "number"},
        "oracle": {"type": "number"},
        "expected": {"$ref": "#/$defs/number_or_null"},
        "oracle_discrepancy": {"type": "number"},
        "expected_discrepancy": {"$ref": "#/$defs/number_or_null"},
        "max_imag_residual": {"type": "number"},
        "max_eta": {"type": "number"},
        "pass": {"type": "boolean"}
      }
    },
    "periods_file": {
      "type": "object",
      "required": ["schema_version", "periods"],
      "properties": {
        "schema_version": {"const": "1.0.0"},
        "periods": {"type": "array", "items": {"$ref": "#/$defs/period"}}
      }
    }
  }
}
)json";
}

std::vector<std::string> validate_json(const json& doc, const json& schema, bool strict)
{
    std::vector<std::string> errors;
    validate_node(doc, schema, schema, strict, "", errors);
    return errors;
}

} // namespace worm
