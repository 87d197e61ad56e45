#include "cli_app.hpp"

#include "lsde/catalog.hpp"
#include "lsde/errors.hpp"
#include "lsde/hamiltonian.hpp"
#include "lsde/integrator.hpp"
#include "lsde/lie.hpp"
#include "lsde/superposition.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>

namespace lsde::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string command;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> levels;
    std::optional<double> dt;
    std::string out_dir = ".";
    std::string check = "structure";
};

/// Parsed and validated experiment configuration.
struct Config {
    json raw;  // file contents, echoed into every artifact
    std::string system;
    ParamOverrides params;
    std::uint64_t seed = 0;
    double horizon = 1.0;
    double dt = 0.01;
    std::size_t base_steps = 100;
    std::size_t levels = 3;
    std::optional<std::size_t> seeds;
    Scheme scheme = Scheme::StratonovichHeun;
    std::optional<Vec> initial;
    std::optional<std::vector<Vec>> particulars;
    std::optional<std::vector<Vec>> copies;
    std::optional<double> threshold;
    std::size_t points = 100;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object()) {
        throw UsageError(where + " must be an object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw UsageError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double number(const json& obj, const std::string& key, const std::string& where)
{
    if (!obj.contains(key)) {
        throw UsageError(where + " needs '" + key + "'");
    }
    if (!obj.at(key).is_number()) {
        throw UsageError(where + "." + key + " must be a number");
    }
    return obj.at(key).get<double>();
}

std::size_t count(const json& value, const std::string& key)
{
    if (!value.is_number_integer() || value.get<long long>() < 0) {
        throw UsageError("'" + key + "' must be a non-negative integer");
    }
    return value.get<std::size_t>();
}

CoefficientFn coefficient(const json& v, const std::string& key)
{
    if (v.is_number()) {
        return CoefficientFn::constant(v.get<double>());
    }
    const std::string where = "params." + key;
    if (!v.is_object() || !v.contains("kind") || !v.at("kind").is_string()) {
        throw UsageError(where + " must be a number or an object with a 'kind'");
    }
    const std::string kind = v.at("kind").get<std::string>();
    if (kind == "constant") {
        require_keys(v, {"kind", "value"}, where);
        return CoefficientFn::constant(number(v, "value", where));
    }
    if (kind == "linear") {
        require_keys(v, {"kind", "offset", "slope"}, where);
        return CoefficientFn::linear(number(v, "offset", where), number(v, "slope", where));
    }
    if (kind == "sinusoid") {
        require_keys(v, {"kind", "offset", "amplitude", "frequency", "phase"}, where);
        return CoefficientFn::sinusoid(number(v, "offset", where), number(v, "amplitude", where),
                                       number(v, "frequency", where), number(v, "phase", where));
    }
    if (kind == "brownian") {
        require_keys(v, {"kind", "offset", "scale", "component"}, where);
        const std::size_t component = v.contains("component") ? count(v.at("component"), where + ".component") : 1;
        if (component < 1) {
            throw UsageError(where + ".component must be at least 1");
        }
        return CoefficientFn::brownian(number(v, "offset", where), number(v, "scale", where), component);
    }
    throw UsageError(where + ": unknown coefficient kind '" + kind + "'");
}

Vec vector(const json& v, const std::string& key)
{
    if (!v.is_array() || v.empty()) {
        throw UsageError("'" + key + "' must be a non-empty array of numbers");
    }
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            throw UsageError("'" + key + "' must be a non-empty array of numbers");
        }
        out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return out;
}

std::vector<Vec> vectors(const json& v, const std::string& key)
{
    if (!v.is_array()) {
        throw UsageError("'" + key + "' must be an array of states");
    }
    std::vector<Vec> out;
    for (const auto& item : v) {
        out.push_back(vector(item, key));
    }
    return out;
}

std::size_t steps_for(double horizon, double dt)
{
    if (!(dt > 0.0) || !(horizon > 0.0)) {
        throw UsageError("'T' and 'dt' must be positive");
    }
    const double ratio = horizon / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw UsageError("'T' must be an integer multiple of 'dt'");
    }
    return static_cast<std::size_t>(rounded);
}

Config load_config(const Options& opt)
{
    if (opt.config_path.empty()) {
        throw UsageError(opt.command + " needs --config");
    }
    std::ifstream in(opt.config_path);
    if (!in) {
        throw UsageError("cannot read config file " + opt.config_path);
    }
    Config c;
    try {
        c.raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config is not valid JSON: " + std::string(e.what()));
    }
    require_keys(c.raw,
                 {"format", "system", "params", "seed", "T", "dt", "levels", "seeds", "scheme", "initial",
                  "particulars", "copies", "threshold", "points"},
                 "config");
    if (!c.raw.contains("format") || c.raw.at("format") != kConfigFormat) {
        throw UsageError(std::string("config 'format' must be \"") + kConfigFormat + "\"");
    }
    if (!c.raw.contains("system") || !c.raw.at("system").is_string()) {
        throw UsageError("config needs a 'system' name");
    }
    c.system = c.raw.at("system").get<std::string>();
    if (c.raw.contains("params")) {
        const json& p = c.raw.at("params");
        if (!p.is_object()) {
            throw UsageError("'params' must be an object");
        }
        for (const auto& item : p.items()) {
            c.params[item.key()] = coefficient(item.value(), item.key());
        }
    }
    if (c.raw.contains("seed")) {
        c.seed = count(c.raw.at("seed"), "seed");
    }
    if (c.raw.contains("T")) {
        c.horizon = number(c.raw, "T", "config");
    }
    if (c.raw.contains("dt")) {
        c.dt = number(c.raw, "dt", "config");
    }
    if (c.raw.contains("levels")) {
        c.levels = count(c.raw.at("levels"), "levels");
    }
    if (c.raw.contains("seeds")) {
        c.seeds = count(c.raw.at("seeds"), "seeds");
        if (*c.seeds < 1) {
            throw UsageError("'seeds' must be at least 1");
        }
    }
    if (c.raw.contains("scheme")) {
        const json& s = c.raw.at("scheme");
        if (s == "stratonovich") {
            c.scheme = Scheme::StratonovichHeun;
        } else if (s == "ito") {
            c.scheme = Scheme::ItoEulerMaruyama;
        } else {
            throw UsageError("'scheme' must be \"stratonovich\" or \"ito\"");
        }
    }
    if (c.raw.contains("initial")) {
        c.initial = vector(c.raw.at("initial"), "initial");
    }
    if (c.raw.contains("particulars")) {
        c.particulars = vectors(c.raw.at("particulars"), "particulars");
    }
    if (c.raw.contains("copies")) {
        c.copies = vectors(c.raw.at("copies"), "copies");
    }
    if (c.raw.contains("threshold")) {
        c.threshold = number(c.raw, "threshold", "config");
    }
    if (c.raw.contains("points")) {
        c.points = count(c.raw.at("points"), "points");
    }

    if (opt.seed) {
        c.seed = *opt.seed;
    }
    if (opt.levels) {
        c.levels = *opt.levels;
    }
    if (opt.dt) {
        c.dt = *opt.dt;
    }
    c.base_steps = steps_for(c.horizon, c.dt);
    return c;
}

CatalogEntry load_entry(const Config& c)
{
    try {
        return make_entry(c.system, c.params);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
}

json to_json(const Vec& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

json to_json(const std::vector<Vec>& vs)
{
    json out = json::array();
    for (const auto& v : vs) {
        out.push_back(to_json(v));
    }
    return out;
}

// Provenance block shared by every artifact.
json metadata(const std::string& command, const Config& c)
{
    json m;
    m["software"] = "lie-sde";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = c.raw;
    m["config_format"] = kConfigFormat;
    m["system"] = c.system;
    m["seed"] = c.seed;
    m["T"] = c.horizon;
    m["dt"] = c.dt;
    m["base_steps"] = c.base_steps;
    m["rng"] = DriverPath::kRngAlgorithm;
    m["ito_correction_sign"] = kItoCorrectionSign;
    return m;
}

fs::path out_dir(const Options& opt)
{
    fs::path dir(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw UsageError("cannot create output directory " + opt.out_dir + ": " + ec.message());
    }
    return dir;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw UsageError("cannot write " + path.string());
    }
    os << text;
}

void write_json(const fs::path& path, const json& j)
{
    write_text(path, j.dump(2) + "\n");
}

StateVector initial_state(const CatalogEntry& e, const Config& c)
{
    const Vec x0 = c.initial.value_or(e.default_target);
    if (static_cast<std::size_t>(x0.size()) != e.sys.dim()) {
        throw UsageError("'initial' has " + std::to_string(x0.size()) + " coordinates, " + e.name + " needs " +
                         std::to_string(e.sys.dim()));
    }
    try {
        return StateVector::make(x0, e.sys.domain());
    } catch (const DomainError& ex) {
        throw UsageError(ex.what());
    }
}

void check_states(const CatalogEntry& e, const std::vector<Vec>& states, const std::string& key)
{
    for (const auto& s : states) {
        if (static_cast<std::size_t>(s.size()) != e.sys.dim() || !e.sys.domain().contains(s)) {
            throw UsageError("'" + key + "' holds a state outside " + e.sys.domain().describe());
        }
    }
}

int cmd_list(std::ostream& out)
{
    char line[128];
    std::snprintf(line, sizeof line, "%-14s %3s %3s %3s %3s %-8s %-8s\n", "system", "n", "r", "l", "m", "has-ham",
                  "has-rule");
    out << line;
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_entry(name);
        std::snprintf(line, sizeof line, "%-14s %3zu %3zu %3zu %3zu %-8s %-8s\n", name.c_str(), e.sys.dim(),
                      e.sys.rank(), e.sys.ell(), e.m, e.ham ? "true" : "false", e.rule ? "true" : "false");
        out << line;
    }
    return kPass;
}

int cmd_simulate(const Options& opt, std::ostream& out)
{
    const Config c = load_config(opt);
    const CatalogEntry e = load_entry(c);
    const StateVector x0 = initial_state(e, c);
    const DriverPath path = DriverPath::generate(c.seed, e.sys.ell(), c.horizon, c.base_steps, 0);
    const Trajectory tr = integrate(c.scheme, e.sys, x0, path);

    const fs::path dir = out_dir(opt);
    std::string csv = "t";
    for (std::size_t i = 0; i < e.sys.dim(); ++i) {
        csv += ",state_" + std::to_string(i + 1);
    }
    csv += "\n";
    std::vector<std::string> series(e.sys.dim());
    for (std::size_t k = 0; k <= tr.valid_steps(); ++k) {
        csv += fmt(tr.t[k]);
        for (std::size_t i = 0; i < e.sys.dim(); ++i) {
            const std::string v = fmt(tr.states(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)));
            csv += "," + v;
            series[i] += fmt(tr.t[k]) + " " + v + "\n";
        }
        csv += "\n";
    }
    write_text(dir / "trajectory.csv", csv);
    for (std::size_t i = 0; i < e.sys.dim(); ++i) {
        write_text(dir / ("state_" + std::to_string(i + 1) + ".dat"), series[i]);
    }

    json m = metadata("simulate", c);
    m["scheme"] = scheme_name(c.scheme);
    m["initial"] = to_json(x0.coords());
    m["status"] = tr.complete() ? "complete" : "truncated";
    m["t_last_valid"] = tr.t_last_valid;
    m["truncation_reason"] = tr.truncation_reason;
    m["steps"] = tr.valid_steps();
    write_json(dir / "metadata.json", m);
    out << "simulate " << e.name << ": " << tr.valid_steps() << " steps, " << m["status"].get<std::string>()
        << ", wrote " << (dir / "trajectory.csv").string() << "\n";
    return tr.complete() ? kPass : kInconclusive;
}

json level_json(const PathwiseLevel& l)
{
    json j;
    j["dt"] = l.dt;
    j["error"] = l.error;
    j["order"] = std::isnan(l.order) ? json(nullptr) : json(l.order);
    j["window"] = l.window;
    j["compared"] = l.compared;
    j["guarded"] = l.guarded;
    j["conclusive"] = l.conclusive;
    j["truncation"] = l.truncation;
    return j;
}

int combine(int a, int b)
{
    // FAIL dominates INCONCLUSIVE, which dominates PASS.
    if (a == kFail || b == kFail) {
        return kFail;
    }
    if (a == kInconclusive || b == kInconclusive) {
        return kInconclusive;
    }
    return kPass;
}

int code(VerifyStatus s)
{
    switch (s) {
    case VerifyStatus::Pass:
        return kPass;
    case VerifyStatus::Fail:
        return kFail;
    case VerifyStatus::Inconclusive:
        return kInconclusive;
    }
    return kFail;
}

int verify_rule(const CatalogEntry& e, const Config& c, json& report)
{
    if (!e.rule) {
        throw UnsupportedError(e.name + " has no superposition rule");
    }
    const Vec target = c.initial.value_or(e.default_target);
    const std::vector<Vec> particulars = c.particulars.value_or(e.default_particulars);
    check_states(e, {target}, "initial");
    check_states(e, particulars, "particulars");
    if (particulars.size() != e.rule->m) {
        throw UsageError(e.name + " rule needs " + std::to_string(e.rule->m) + " particular solutions");
    }
    int result = kPass;
    report["initial"] = to_json(target);
    report["particulars"] = to_json(particulars);
    report["runs"] = json::array();
    const std::size_t seeds = c.seeds.value_or(1);
    for (std::size_t s = 0; s < seeds; ++s) {
        PathwiseOptions o;
        o.seed = c.seed + s;
        o.levels = c.levels;
        o.base_steps = c.base_steps;
        o.horizon = c.horizon;
        o.threshold = c.threshold.value_or(o.threshold);
        json run;
        run["seed"] = o.seed;
        try {
            const PathwiseReport r = verify_pathwise(e, target, particulars, o);
            run["status"] = status_name(r.status);
            run["constants"] = to_json(r.constants);
            run["monotone"] = r.monotone;
            run["final_error"] = r.final_error;
            run["threshold"] = r.threshold;
            run["levels"] = json::array();
            for (const auto& l : r.levels) {
                run["levels"].push_back(level_json(l));
            }
            result = combine(result, code(r.status));
        } catch (const VerificationInconclusive& ex) {
            run["status"] = "INCONCLUSIVE";
            run["detail"] = ex.what();
            result = combine(result, kInconclusive);
        }
        report["runs"].push_back(run);
    }
    return result;
}

int verify_integrals(const CatalogEntry& e, const Config& c, json& report)
{
    if (e.integrals.empty()) {
        throw UnsupportedError(e.name + " has no first integrals");
    }
    const std::vector<Vec> copies = c.copies.value_or(e.default_integral_copies);
    check_states(e, copies, "copies");
    IntegralOptions o;
    o.seed = c.seed;
    o.steps = c.base_steps;
    o.horizon = c.horizon;
    o.threshold = c.threshold.value_or(o.threshold);
    const IntegralReport r = check_first_integrals_along_path(e, copies, o);
    report["copies"] = to_json(copies);
    report["dt"] = r.dt;
    report["threshold"] = r.threshold;
    report["window"] = r.window;
    report["truncation"] = r.truncation;
    report["integrals"] = json::array();
    for (const auto& d : r.integrals) {
        report["integrals"].push_back(
            {{"name", d.name}, {"copies", d.copies}, {"initial", d.initial}, {"drift", d.drift}, {"pass", d.pass}});
    }
    report["status"] = status_name(r.status);
    return code(r.status);
}

int verify_structure(const CatalogEntry& e, const Config& c, json& report)
{
    const double tol = c.threshold.value_or(1e-9);
    const StructureReport r = check_structure_constants(e.sys, sample_points(e.sys, c.points, c.seed), tol);
    report["points"] = r.points;
    report["tolerance"] = r.tolerance;
    report["max_residual"] = r.max_residual;
    report["worst_pair"] = {r.worst_alpha, r.worst_beta};
    report["status"] = r.pass ? "PASS" : "FAIL";
    return r.pass ? kPass : kFail;
}

int verify_brackets(const CatalogEntry& e, const Config& c, json& report)
{
    if (!e.ham) {
        throw UnsupportedError(e.name + " has no Hamiltonian structure");
    }
    const double tol = c.threshold.value_or(1e-8);
    const HamiltonianStructure& S = *e.ham;
    const std::vector<Vec> points = sample_points(S.box, c.points, c.seed);
    bool pass = true;
    report["structure"] = S.name;
    report["pairs"] = json::array();
    const std::vector<VectorField> fields = e.hamiltonian_fields();
    for (std::size_t a = 0; a < S.hams.size(); ++a) {
        const CheckReport r = check_hamiltonian_pair(S, fields[a], S.hams[a], points, tol);
        report["pairs"].push_back({{"field", fields[a].name},
                                   {"hamiltonian", S.hams[a].name},
                                   {"max_residual", r.max_residual},
                                   {"pass", r.pass}});
        pass = pass && r.pass;
    }
    const CheckReport table = check_bracket_table(S, points, tol);
    report["table"] = {{"max_residual", table.max_residual}, {"pass", table.pass}, {"detail", table.detail}};
    pass = pass && table.pass;
    // Bracket values at the first sample point, for reading off the table.
    json values = json::array();
    for (std::size_t a = 0; a < S.hams.size(); ++a) {
        for (std::size_t b = a + 1; b < S.hams.size(); ++b) {
            values.push_back({{"pair", S.hams[a].name + "," + S.hams[b].name},
                              {"value", poisson_bracket(S, S.hams[a], S.hams[b], points.front())}});
        }
    }
    report["at_point"] = to_json(points.front());
    report["brackets"] = values;
    report["tolerance"] = tol;
    report["points"] = points.size();
    report["status"] = pass ? "PASS" : "FAIL";
    return pass ? kPass : kFail;
}

int verify_jacobian(const CatalogEntry& e, const Config& c, json& report)
{
    if (e.integrals.size() < e.sys.dim()) {
        throw UnsupportedError(e.name + " supplies fewer first integrals than its dimension");
    }
    std::size_t copies = 0;
    for (const auto& f : e.integrals) {
        copies = std::max(copies, f.copies);
    }
    SampleBox box;
    const auto n = static_cast<Eigen::Index>(e.sys.dim());
    box.lo.resize(n * static_cast<Eigen::Index>(copies));
    box.hi.resize(box.lo.size());
    for (std::size_t k = 0; k < copies; ++k) {
        box.lo.segment(static_cast<Eigen::Index>(k) * n, n) = e.sys.box().lo;
        box.hi.segment(static_cast<Eigen::Index>(k) * n, n) = e.sys.box().hi;
    }
    const double tol = c.threshold.value_or(1e-6);
    double smallest = std::numeric_limits<double>::infinity();
    json dets = json::array();
    for (const Vec& p : sample_points(box, c.points, c.seed)) {
        const double d = check_jacobian_condition(e, p);
        smallest = std::min(smallest, std::abs(d));
        dets.push_back(d);
    }
    const bool pass = smallest > tol;
    report["copies"] = copies;
    report["determinants"] = dets;
    report["min_abs_determinant"] = smallest;
    report["tolerance"] = tol;
    report["status"] = pass ? "PASS" : "FAIL";
    return pass ? kPass : kFail;
}

int cmd_verify(const Options& opt, std::ostream& out)
{
    const Config c = load_config(opt);
    const CatalogEntry e = load_entry(c);
    if (opt.check == "rule" && c.levels < 3) {
        throw UsageError("'levels' must be at least 3");
    }
    json report;
    report["check"] = opt.check;
    int result = kFail;
    if (opt.check == "rule") {
        result = verify_rule(e, c, report);
    } else if (opt.check == "integrals") {
        result = verify_integrals(e, c, report);
    } else if (opt.check == "structure") {
        result = verify_structure(e, c, report);
    } else if (opt.check == "brackets") {
        result = verify_brackets(e, c, report);
    } else if (opt.check == "jacobian") {
        result = verify_jacobian(e, c, report);
    } else {
        throw UsageError("unknown check '" + opt.check + "'");
    }
    report["result"] = result == kPass ? "PASS" : result == kFail ? "FAIL" : "INCONCLUSIVE";
    json doc = metadata("verify", c);
    doc["report"] = report;
    write_json(out_dir(opt) / "verify.json", doc);
    out << doc.dump(2) << "\n";
    return result;
}

int cmd_convergence(const Options& opt, std::ostream& out)
{
    const Config c = load_config(opt);
    if (c.levels < 3) {
        throw UsageError("a convergence study needs at least 3 levels");
    }
    const CatalogEntry e = load_entry(c);
    const StateVector x0 = initial_state(e, c);
    ConvergenceOptions o;
    o.seed = c.seed;
    o.seeds = c.seeds.value_or(64);
    o.levels = c.levels;
    o.horizon = c.horizon;
    o.base_steps = c.base_steps;
    o.scheme = c.scheme;
    if (e.name == "gbm") {
        // Stratonovich closed form x0 exp(mu t + sigma W_t).
        const Vec probe = e.sys.coefficients(std::vector<double>{0.0, 0.0}).col(0);
        const double mu = probe[0];
        const double sigma = probe[1];
        const double start = x0.coords()[0];
        o.oracle = [=](const DriverPath& p, std::size_t k) {
            Vec v(1);
            v[0] = start * std::exp(mu * p.time(k) + sigma * p.value(k)[1]);
            return v;
        };
    }
    const ConvergenceTable t = convergence_study(e.sys, x0, o);

    const fs::path dir = out_dir(opt);
    std::string csv = "dt,error,order\n";
    json rows = json::array();
    for (const auto& r : t.rows) {
        csv += fmt(r.dt) + "," + fmt(r.error) + "," + (std::isnan(r.order) ? std::string("nan") : fmt(r.order)) + "\n";
        rows.push_back({{"dt", r.dt}, {"error", r.error}, {"order", std::isnan(r.order) ? json(nullptr) : json(r.order)}});
    }
    write_text(dir / "convergence.csv", csv);
    json m = metadata("convergence", c);
    m["scheme"] = scheme_name(c.scheme);
    m["initial"] = to_json(x0.coords());
    m["reference"] = t.against_oracle ? "analytic" : "finest level";
    m["seeds"] = o.seeds;
    m["seeds_used"] = t.seeds_used;
    m["seeds_truncated"] = t.seeds_truncated;
    m["mean_order"] = t.mean_order;
    m["rows"] = rows;
    write_json(dir / "convergence.json", m);
    out << csv;
    return kPass;
}

int cmd_ito_compare(const Options& opt, std::ostream& out)
{
    const Config c = load_config(opt);
    if (c.levels < 2) {
        throw UsageError("ito-compare needs at least 2 levels");
    }
    const CatalogEntry e = load_entry(c);
    if (e.sys.noise_uses_driver()) {
        throw UnsupportedError(e.name + ": noise coefficients depend on the Brownian driver");
    }
    const StateVector x0 = initial_state(e, c);
    const std::size_t seeds = c.seeds.value_or(64);
    const auto finest = static_cast<unsigned>(c.levels - 1);
    std::vector<std::vector<double>> gaps(seeds, std::vector<double>(c.levels, 0.0));
    std::vector<bool> usable(seeds, true);
    for_each_index(seeds, Execution::Parallel, [&](std::size_t s) {
        const DriverPath fine = DriverPath::generate(c.seed + s, e.sys.ell(), c.horizon, c.base_steps, finest);
        for (unsigned k = 0; k <= finest; ++k) {
            const DriverPath p = fine.at_level(k);
            const Trajectory a = integrate_stratonovich(e.sys, x0, p);
            const Trajectory b = integrate_ito(e.sys, x0, p);
            if (!a.complete() || !b.complete()) {
                usable[s] = false;
                return;
            }
            gaps[s][k] = (a.final_state() - b.final_state()).lpNorm<Eigen::Infinity>();
        }
    });
    std::size_t used = 0;
    std::vector<double> mean(c.levels, 0.0);
    for (std::size_t s = 0; s < seeds; ++s) {
        if (!usable[s]) {
            continue;
        }
        ++used;
        for (std::size_t k = 0; k < c.levels; ++k) {
            mean[k] += gaps[s][k];
        }
    }
    if (used == 0) {
        throw StudyFailed(e.name + ": every path was truncated");
    }
    std::string csv = "dt,gap,ratio\n";
    json rows = json::array();
    for (std::size_t k = 0; k < c.levels; ++k) {
        mean[k] /= static_cast<double>(used);
        const double dt = c.horizon / static_cast<double>(c.base_steps << k);
        const double ratio = k == 0 ? std::numeric_limits<double>::quiet_NaN() : mean[k] / mean[k - 1];
        csv += fmt(dt) + "," + fmt(mean[k]) + "," + (std::isnan(ratio) ? std::string("nan") : fmt(ratio)) + "\n";
        rows.push_back({{"dt", dt}, {"gap", mean[k]}, {"ratio", std::isnan(ratio) ? json(nullptr) : json(ratio)}});
    }
    const fs::path dir = out_dir(opt);
    write_text(dir / "ito_compare.csv", csv);
    json m = metadata("ito-compare", c);
    m["initial"] = to_json(x0.coords());
    m["seeds"] = seeds;
    m["seeds_used"] = used;
    m["rows"] = rows;
    write_json(dir / "ito_compare.json", m);
    out << csv;
    return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Stochastic Lie systems: simulation and verification"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);
    Options opt;
    std::uint64_t seed = 0;
    std::size_t levels = 0;
    double dt = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "experiment config (JSON, " + std::string(kConfigFormat) + ")");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--levels", levels, "override the number of refinement levels");
        sub->add_option("--dt", dt, "override the base step");
        sub->add_option("--out", opt.out_dir, "output directory");
    };
    app.add_subcommand("list-systems", "list catalog systems");
    add_common(app.add_subcommand("simulate", "integrate one trajectory"));
    CLI::App* verify = app.add_subcommand("verify", "run a verification check");
    add_common(verify);
    verify->add_option("--check", opt.check, "rule|integrals|brackets|structure|jacobian")
        ->check(CLI::IsMember({"rule", "integrals", "brackets", "structure", "jacobian"}));
    add_common(app.add_subcommand("convergence", "strong convergence study"));
    add_common(app.add_subcommand("ito-compare", "Ito vs Stratonovich gap under refinement"));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    for (CLI::App* sub : app.get_subcommands()) {
        opt.command = sub->get_name();
        auto given = [sub](const char* name) {
            const CLI::Option* o = sub->get_option_no_throw(name);
            return o != nullptr && o->count() > 0;
        };
        if (given("--seed")) {
            opt.seed = seed;
        }
        if (given("--levels")) {
            opt.levels = levels;
        }
        if (given("--dt")) {
            opt.dt = dt;
        }
    }

    try {
        if (opt.command == "list-systems") {
            return cmd_list(out);
        }
        if (opt.command == "simulate") {
            return cmd_simulate(opt, out);
        }
        if (opt.command == "verify") {
            return cmd_verify(opt, out);
        }
        if (opt.command == "convergence") {
            return cmd_convergence(opt, out);
        }
        return cmd_ito_compare(opt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return kUnsupported;
    } catch (const VerificationInconclusive& e) {
        err << "inconclusive: " << e.what() << "\n";
        return kInconclusive;
    } catch (const StudyFailed& e) {
        err << "inconclusive: " << e.what() << "\n";
        return kInconclusive;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFail;
    }
}

}  // namespace lsde::cli
