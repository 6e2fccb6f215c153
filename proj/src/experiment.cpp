#include "isingdual/experiment.hpp"

#include "isingdual/exact.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace isingdual {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues)
{
    std::string out = "invalid configuration:";
    for (const auto& issue : issues)
        out += "\n  " + (issue.path.empty() ? std::string("/") : issue.path) + ": " + issue.message;
    return out;
}

// Collects issues while walking a JSON document.
class Checker
{
public:
    void add(std::string path, std::string message)
    {
        issues_.push_back({std::move(path), std::move(message)});
    }

    [[nodiscard]] bool ok() const noexcept { return issues_.empty(); }
    [[nodiscard]] std::vector<ConfigIssue> take() { return std::move(issues_); }

    /// Reports members of `obj` not listed in `allowed`.
    void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed)
    {
        for (const auto& [key, value] : obj.items()) {
            bool known = false;
            for (auto k : allowed)
                known = known || key == k;
            if (!known)
                add(path + "/" + key, "unknown key");
        }
    }

    const json* object(const json& parent, const std::string& path, const char* key, bool required)
    {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                add(path + "/" + key, "missing required block");
            return nullptr;
        }
        if (!it->is_object()) {
            add(path + "/" + key, "must be an object");
            return nullptr;
        }
        return &*it;
    }

    std::optional<std::string> string(const json& parent, const std::string& path, const char* key,
                                      bool required)
    {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                add(path + "/" + key, "missing required field");
            return std::nullopt;
        }
        if (!it->is_string()) {
            add(path + "/" + key, "must be a string");
            return std::nullopt;
        }
        return it->get<std::string>();
    }

    std::optional<double> number(const json& parent, const std::string& path, const char* key,
                                 bool required)
    {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                add(path + "/" + key, "missing required field");
            return std::nullopt;
        }
        if (!it->is_number()) {
            add(path + "/" + key, "must be a number");
            return std::nullopt;
        }
        const double v = it->get<double>();
        if (!std::isfinite(v)) {
            add(path + "/" + key, "must be finite");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::uint64_t> count(const json& parent, const std::string& path, const char* key,
                                       bool required, std::uint64_t minimum)
    {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                add(path + "/" + key, "missing required field");
            return std::nullopt;
        }
        if (!it->is_number_integer() || (!it->is_number_unsigned() && it->get<long long>() < 0)) {
            add(path + "/" + key, "must be a non-negative integer");
            return std::nullopt;
        }
        const auto v = it->get<std::uint64_t>();
        if (v < minimum) {
            add(path + "/" + key, "must be at least " + std::to_string(minimum));
            return std::nullopt;
        }
        return v;
    }

private:
    std::vector<ConfigIssue> issues_;
};

std::optional<Topology> parse_topology(std::string_view s)
{
    if (s == "chain")
        return Topology::chain;
    if (s == "grid")
        return Topology::grid;
    return std::nullopt;
}

std::optional<ExactKind> parse_exact(std::string_view s)
{
    if (s == "brute")
        return ExactKind::brute;
    if (s == "brute-dual")
        return ExactKind::brute_dual;
    if (s == "transfer")
        return ExactKind::transfer;
    if (s == "closed-form")
        return ExactKind::closed_form;
    return std::nullopt;
}

std::optional<Estimator> parse_estimator(std::string_view s)
{
    if (s == "uniform")
        return Estimator::uniform;
    if (s == "gibbs-ot")
        return Estimator::gibbs_ot;
    return std::nullopt;
}

std::optional<Domain> parse_domain(std::string_view s)
{
    if (s == "primal")
        return Domain::primal;
    if (s == "dual")
        return Domain::dual;
    return std::nullopt;
}

std::size_t edge_count_of(const ModelSpec& m)
{
    if (m.type == Topology::grid)
        return grid_edge_count(m.size);
    return m.boundary == Boundary::periodic_1d ? m.size : m.size - 1;
}

std::size_t site_count_of(const ModelSpec& m)
{
    return m.type == Topology::grid ? m.size * m.size : m.size;
}

bool couplings_positive(const CouplingSpec& c)
{
    switch (c.kind) {
    case CouplingSpec::Kind::constant: return c.constant > 0.0;
    case CouplingSpec::Kind::uniform: return c.lo > 0.0;
    case CouplingSpec::Kind::values:
        for (double v : c.values)
            if (!(v > 0.0))
                return false;
        return true;
    }
    return false;
}

void parse_coupling(Checker& chk, const json& block, const std::string& path, CouplingSpec& out)
{
    chk.only_keys(block, path, {"constant", "uniform", "values"});
    const int present = int(block.contains("constant")) + int(block.contains("uniform")) +
                        int(block.contains("values"));
    if (present != 1) {
        chk.add(path, "exactly one of constant, uniform, values is required");
        return;
    }
    if (block.contains("constant")) {
        out.kind = CouplingSpec::Kind::constant;
        if (auto v = chk.number(block, path, "constant", true))
            out.constant = *v;
    } else if (block.contains("uniform")) {
        out.kind = CouplingSpec::Kind::uniform;
        const std::string up = path + "/uniform";
        if (const json* u = chk.object(block, path, "uniform", true)) {
            chk.only_keys(*u, up, {"lo", "hi", "seed"});
            const auto lo = chk.number(*u, up, "lo", true);
            const auto hi = chk.number(*u, up, "hi", true);
            const auto seed = chk.count(*u, up, "seed", true, 0);
            if (lo && hi && !(*lo < *hi))
                chk.add(up, "requires lo < hi");
            out.lo = lo.value_or(0.0);
            out.hi = hi.value_or(0.0);
            out.seed = seed.value_or(0);
        }
    } else {
        out.kind = CouplingSpec::Kind::values;
        const auto& arr = block["values"];
        if (!arr.is_array()) {
            chk.add(path + "/values", "must be an array of numbers");
            return;
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number() || !std::isfinite(arr[i].get<double>()))
                chk.add(path + "/values/" + std::to_string(i), "must be a finite number");
            else
                out.values.push_back(arr[i].get<double>());
        }
    }
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues))
{
}

ConfigError::ConfigError(std::string path, std::string message)
    : ConfigError(std::vector<ConfigIssue>{{std::move(path), std::move(message)}})
{
}

std::string_view to_string(ExactKind kind) noexcept
{
    switch (kind) {
    case ExactKind::brute: return "brute";
    case ExactKind::brute_dual: return "brute-dual";
    case ExactKind::transfer: return "transfer";
    case ExactKind::closed_form: return "closed-form";
    }
    return "?";
}

ExperimentConfig config_from_json(const json& input)
{
    const json& doc = input.contains("config") && input["config"].is_object() ? input["config"] : input;
    Checker chk;
    ExperimentConfig cfg;
    if (!doc.is_object())
        throw ConfigError("", "configuration must be an object");
    chk.only_keys(doc, "", {"model", "method", "output"});

    bool model_ok = false;
    if (const json* model = chk.object(doc, "", "model", true)) {
        const std::string mp = "/model";
        chk.only_keys(*model, mp, {"type", "size", "boundary", "coupling"});
        const auto type = chk.string(*model, mp, "type", true);
        const auto size = chk.count(*model, mp, "size", true, 2);
        std::optional<Topology> topo;
        if (type && !(topo = parse_topology(*type)))
            chk.add(mp + "/type", "must be \"chain\" or \"grid\"");
        const auto boundary = chk.string(*model, mp, "boundary", false);
        if (topo) {
            cfg.model.type = *topo;
            if (*topo == Topology::grid) {
                cfg.model.boundary = Boundary::free_2d;
                if (boundary && *boundary != "free")
                    chk.add(mp + "/boundary", "grid models only support \"free\"");
            } else {
                cfg.model.boundary = Boundary::periodic_1d;
                if (boundary && *boundary == "free")
                    cfg.model.boundary = Boundary::free_1d;
                else if (boundary && *boundary != "periodic")
                    chk.add(mp + "/boundary", "must be \"periodic\" or \"free\"");
            }
        }
        if (size)
            cfg.model.size = static_cast<std::size_t>(*size);
        if (const json* coupling = chk.object(*model, mp, "coupling", true))
            parse_coupling(chk, *coupling, mp + "/coupling", cfg.model.coupling);
        model_ok = chk.ok();
        if (model_ok && cfg.model.coupling.kind == CouplingSpec::Kind::values &&
            cfg.model.coupling.values.size() != edge_count_of(cfg.model))
            chk.add(mp + "/coupling/values", "needs " + std::to_string(edge_count_of(cfg.model)) +
                                                 " values, got " +
                                                 std::to_string(cfg.model.coupling.values.size()));
        model_ok = chk.ok();
    }

    if (const json* method = chk.object(doc, "", "method", true)) {
        const std::string mp = "/method";
        chk.only_keys(*method, mp, {"exact", "mc"});
        const bool has_exact = method->contains("exact");
        const bool has_mc = method->contains("mc");
        if (has_exact && has_mc) {
            chk.add(mp + "/exact", "conflicts with /method/mc; give exactly one");
            chk.add(mp + "/mc", "conflicts with /method/exact; give exactly one");
        } else if (!has_exact && !has_mc) {
            chk.add(mp, "needs one of exact or mc");
        } else if (has_exact) {
            if (auto name = chk.string(*method, mp, "exact", true)) {
                if (auto kind = parse_exact(*name))
                    cfg.exact = kind;
                else
                    chk.add(mp + "/exact", "must be brute, brute-dual, transfer or closed-form");
            }
        } else if (const json* mc = chk.object(*method, mp, "mc", true)) {
            const std::string cp = mp + "/mc";
            chk.only_keys(*mc, cp, {"estimator", "domain", "samples", "chains", "burn_in", "stride", "seed"});
            McSpec spec;
            if (auto e = chk.string(*mc, cp, "estimator", true)) {
                if (auto v = parse_estimator(*e))
                    spec.estimator = *v;
                else
                    chk.add(cp + "/estimator", "must be uniform or gibbs-ot");
            }
            if (auto d = chk.string(*mc, cp, "domain", true)) {
                if (auto v = parse_domain(*d))
                    spec.domain = *v;
                else
                    chk.add(cp + "/domain", "must be primal or dual");
            }
            spec.samples = chk.count(*mc, cp, "samples", true, 1).value_or(spec.samples);
            spec.chains = chk.count(*mc, cp, "chains", false, 1).value_or(spec.chains);
            spec.burn_in = chk.count(*mc, cp, "burn_in", false, 0).value_or(spec.burn_in);
            spec.stride = chk.count(*mc, cp, "stride", false, 1).value_or(spec.stride);
            spec.seed = chk.count(*mc, cp, "seed", false, 0).value_or(spec.seed);
            cfg.mc = spec;
        }
    }

    if (const json* output = chk.object(doc, "", "output", false)) {
        const std::string op = "/output";
        chk.only_keys(*output, op, {"path", "format"});
        if (auto p = chk.string(*output, op, "path", false)) {
            if (p->empty())
                chk.add(op + "/path", "must not be empty");
            cfg.output.path = *p;
        }
        if (auto f = chk.string(*output, op, "format", false)) {
            if (*f == "csv")
                cfg.output.format = OutputFormat::csv;
            else if (*f == "json")
                cfg.output.format = OutputFormat::json;
            else
                chk.add(op + "/format", "must be csv or json");
        }
    }

    // Size guards and estimator/model compatibility.
    if (model_ok) {
        const auto& m = cfg.model;
        const std::size_t sites = site_count_of(m);
        if (cfg.exact) {
            const std::string ep = "/method/exact";
            switch (*cfg.exact) {
            case ExactKind::brute:
                if (sites > default_max_brute_sites)
                    chk.add(ep, "brute force requires N <= 26 (model has N = " + std::to_string(sites) + ")");
                break;
            case ExactKind::brute_dual:
                if (m.type != Topology::grid)
                    chk.add(ep, "brute-dual applies to grid models only");
                else if ((m.size - 1) * (m.size - 1) > default_max_brute_faces)
                    chk.add(ep, "brute-dual requires (m-1)^2 <= 24 (model has " +
                                    std::to_string((m.size - 1) * (m.size - 1)) + " faces)");
                break;
            case ExactKind::transfer:
                if (m.type == Topology::grid && m.size > default_max_transfer_side)
                    chk.add(ep, "transfer requires m <= 20 for grids (model has m = " +
                                    std::to_string(m.size) + ")");
                break;
            case ExactKind::closed_form:
                if (m.type != Topology::chain)
                    chk.add(ep, "closed-form applies to chain models only");
                break;
            }
        }
        if (cfg.mc && cfg.mc->domain == Domain::dual) {
            if (m.type != Topology::grid)
                chk.add("/method/mc/domain", "dual sampling applies to grid models only");
            else if (!couplings_positive(m.coupling))
                chk.add("/model/coupling", "dual sampling requires every coupling J > 0");
        }
    }

    if (!chk.ok())
        throw ConfigError(chk.take());
    return cfg;
}

ExperimentConfig parse_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("not valid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json ExperimentConfig::to_json() const
{
    json model_j;
    model_j["type"] = std::string(isingdual::to_string(model.type));
    model_j["size"] = model.size;
    model_j["boundary"] = model.boundary == Boundary::periodic_1d ? "periodic" : "free";
    switch (model.coupling.kind) {
    case CouplingSpec::Kind::constant: model_j["coupling"] = {{"constant", model.coupling.constant}}; break;
    case CouplingSpec::Kind::uniform:
        model_j["coupling"] = {{"uniform",
                                {{"lo", model.coupling.lo}, {"hi", model.coupling.hi}, {"seed", model.coupling.seed}}}};
        break;
    case CouplingSpec::Kind::values: model_j["coupling"] = {{"values", model.coupling.values}}; break;
    }
    json method_j;
    if (exact)
        method_j["exact"] = std::string(isingdual::to_string(*exact));
    if (mc)
        method_j["mc"] = {{"estimator", std::string(isingdual::to_string(mc->estimator))},
                          {"domain", std::string(isingdual::to_string(mc->domain))},
                          {"samples", mc->samples},
                          {"chains", mc->chains},
                          {"burn_in", mc->burn_in},
                          {"stride", mc->stride},
                          {"seed", mc->seed}};
    return {{"model", model_j},
            {"method", method_j},
            {"output", {{"path", output.path}, {"format", output.format == OutputFormat::csv ? "csv" : "json"}}}};
}

std::vector<double> resolve_couplings(const ModelSpec& spec)
{
    const std::size_t count = edge_count_of(spec);
    switch (spec.coupling.kind) {
    case CouplingSpec::Kind::constant: return std::vector<double>(count, spec.coupling.constant);
    case CouplingSpec::Kind::uniform:
        return sample_uniform_values(count, spec.coupling.lo, spec.coupling.hi, spec.coupling.seed);
    case CouplingSpec::Kind::values: return spec.coupling.values;
    }
    return {};
}

IsingModel build_model(const ModelSpec& spec)
{
    auto couplings = resolve_couplings(spec);
    if (spec.type == Topology::grid)
        return IsingModel::grid(spec.size, std::move(couplings));
    return IsingModel::chain(spec.size, spec.boundary, std::move(couplings));
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_csv(const std::vector<SamplePath>& paths, std::optional<double> reference)
{
    std::string out(csv_header);
    out += '\n';
    if (reference)
        out += "-1,0," + format_number(*reference) + "\n";
    for (const auto& path : paths)
        for (const auto& pt : path.points) {
            out += std::to_string(path.chain_id);
            out += ',';
            out += std::to_string(pt.sample_index);
            out += ',';
            out += format_number(pt.per_site_log2_z);
            out += '\n';
        }
    return out;
}

namespace {

std::string format_json_rows(const std::vector<SamplePath>& paths, std::optional<double> reference)
{
    json rows = json::array();
    if (reference)
        rows.push_back({-1, 0, *reference});
    for (const auto& path : paths)
        for (const auto& pt : path.points)
            rows.push_back({static_cast<long long>(path.chain_id), pt.sample_index, pt.per_site_log2_z});
    json doc = {{"columns", {"chain_id", "sample_index", "per_site_log2_Z"}}, {"rows", rows}};
    return doc.dump(1) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + path.string() + " for writing");
    f << content;
    f.close();
    if (!f)
        throw IoError("failed writing " + path.string());
}

ExactResult run_exact(ExactKind kind, const IsingModel& model)
{
    switch (kind) {
    case ExactKind::brute: return brute_force_ln_Z(model);
    case ExactKind::brute_dual: return brute_force_dual_ln_Z(model);
    case ExactKind::transfer:
        return model.is_grid() ? transfer_matrix_2d_ln_Z(model) : transfer_matrix_1d_ln_Z(model);
    case ExactKind::closed_form: return closed_form_ln_Z(model);
    }
    throw std::logic_error("unknown exact method");
}

} // namespace

std::filesystem::path manifest_path(const std::filesystem::path& output)
{
    return std::filesystem::path(output.string() + ".manifest.json");
}

json RunManifest::to_json() const
{
    json results_j = json::array();
    for (const auto& r : results)
        results_j.push_back({{"chain_id", r.chain_id},
                             {"ln_Z", r.ln_z},
                             {"per_site_log2_Z", r.per_site_log2_z},
                             {"std_error_ln_Z", r.std_error_ln_z}});
    return {{"config", config},
            {"couplings", couplings},
            {"code_version", code_version},
            {"wall_seconds", wall_seconds},
            {"columns", {"chain_id", "sample_index", "per_site_log2_Z"}},
            {"results", results_j},
            {"notes", notes}};
}

RunManifest run_experiment(const ExperimentConfig& cfg, const RunOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const IsingModel model = build_model(cfg.model);

    RunManifest manifest;
    manifest.config = cfg.to_json();
    manifest.couplings.assign(model.couplings().begin(), model.couplings().end());
    manifest.code_version = std::string(version);

    std::vector<SamplePath> paths;
    std::optional<double> reference = options.reference_per_site;
    if (cfg.exact) {
        const ExactResult r = run_exact(*cfg.exact, model);
        const double per_site = per_site_log2(r.ln_Z, model.site_count());
        reference = per_site;
        manifest.results.push_back({-1, r.ln_Z, per_site, 0.0});
        manifest.notes["exact_method"] = std::string(to_string(r.method));
    } else {
        ChainSpec spec;
        spec.estimator = cfg.mc->estimator;
        spec.domain = cfg.mc->domain;
        spec.samples = cfg.mc->samples;
        spec.burn_in = cfg.mc->burn_in;
        spec.seed = cfg.mc->seed;
        spec.record_stride = cfg.mc->stride;
        spec.check_constraints = options.check_constraints;
        try {
            paths = run_chains(spec, model, cfg.mc->chains, options.threads);
        } catch (const std::domain_error& e) {
            throw ConfigError("/method/mc", e.what());
        }
        for (const auto& p : paths)
            manifest.results.push_back({static_cast<long long>(p.chain_id), p.ln_z, p.final_per_site(),
                                        p.std_error});
        manifest.notes["sample_definition"] =
            spec.estimator == Estimator::uniform
                ? "one sample = one independent uniform draw"
                : "one sample = one systematic Gibbs sweep after burn-in";
        manifest.notes["burn_in_sweeps"] = spec.estimator == Estimator::gibbs_ot ? spec.burn_in : 0;
        manifest.notes["record_stride"] = spec.record_stride;
        if (options.reference_per_site)
            manifest.notes["reference_per_site_log2_Z"] = *options.reference_per_site;
    }

    const std::string body = cfg.output.format == OutputFormat::csv ? format_csv(paths, reference)
                                                                    : format_json_rows(paths, reference);
    write_file(cfg.output.path, body);
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file(manifest_path(cfg.output.path), manifest.to_json().dump(2) + "\n");
    return manifest;
}

VerifyReport verify(const VerifyOptions& options)
{
    VerifyReport report;
    Rng rng(options.seed);

    auto compare = [&](const std::string& label, double a, double b) {
        ++report.comparisons;
        const double rel = std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
        if (report.worst_case.empty() || !(rel <= report.worst_relative)) {
            report.worst_relative = rel;
            report.worst_case = label;
        }
        if (!(rel <= options.tolerance)) {
            report.passed = false;
            std::ostringstream msg;
            msg.precision(17);
            msg << label << ": " << a << " vs " << b << " (relative " << rel << ")";
            report.failures.push_back(msg.str());
        }
    };

    auto draw = [&](std::size_t count, bool mixed_sign) {
        std::vector<double> j(count);
        for (auto& v : j)
            v = mixed_sign ? rng.uniform(-1.5, 1.5) : rng.uniform(0.1, 1.5);
        return j;
    };

    const double tamper = options.tamper_bits * std::numbers::ln2;
    for (std::size_t m = 2; m <= options.max_m; ++m) {
        for (std::size_t t = 0; t <= options.trials; ++t) {
            // t == 0 is the J = 0 corner; odd trials mix signs.
            const auto j = t == 0 ? std::vector<double>(grid_edge_count(m), 0.0) : draw(grid_edge_count(m), t % 2 == 1);
            const IsingModel model = IsingModel::grid(m, j);
            const std::string label = "grid m=" + std::to_string(m) + " trial " + std::to_string(t);
            const double brute = brute_force_ln_Z(model).ln_Z;
            const double dual = brute_force_dual_ln_Z(model).ln_Z + tamper;
            const double transfer = transfer_matrix_2d_ln_Z(model).ln_Z;
            compare(label + " brute-primal vs brute-dual", brute, dual);
            compare(label + " brute-primal vs transfer-2d", brute, transfer);
            compare(label + " brute-dual vs transfer-2d", dual, transfer);
            if (t == 0) {
                const double n_ln2 = static_cast<double>(m * m) * std::numbers::ln2;
                compare(label + " brute-primal vs N ln 2", brute, n_ln2);
                compare(label + " brute-dual vs N ln 2", dual, n_ln2);
                compare(label + " transfer-2d vs N ln 2", transfer, n_ln2);
            }
        }
    }
    for (std::size_t n = 2; n <= options.max_n; ++n) {
        for (const Boundary b : {Boundary::periodic_1d, Boundary::free_1d}) {
            const std::size_t edges = b == Boundary::periodic_1d ? n : n - 1;
            for (std::size_t t = 0; t <= options.trials; ++t) {
                const auto j = t == 0 ? std::vector<double>(edges, 0.0) : draw(edges, t % 2 == 1);
                const IsingModel model = IsingModel::chain(n, b, j);
                const std::string label = "chain n=" + std::to_string(n) + " " +
                                          std::string(to_string(b)) + " trial " + std::to_string(t);
                const double brute = brute_force_ln_Z(model).ln_Z;
                const double transfer = transfer_matrix_1d_ln_Z(model).ln_Z;
                const double closed = closed_form_ln_Z(model).ln_Z;
                compare(label + " brute vs transfer-1d", brute, transfer);
                compare(label + " brute vs closed-form", brute, closed);
                compare(label + " transfer-1d vs closed-form", transfer, closed);
                if (t == 0) {
                    const double n_ln2 = static_cast<double>(n) * std::numbers::ln2;
                    compare(label + " brute vs N ln 2", brute, n_ln2);
                    compare(label + " transfer-1d vs N ln 2", transfer, n_ln2);
                    compare(label + " closed-form vs N ln 2", closed, n_ln2);
                }
            }
        }
    }
    return report;
}

std::optional<Figure> figure_from_string(std::string_view name)
{
    for (Figure f : {Figure::fig6, Figure::fig7, Figure::fig8, Figure::fig9, Figure::fig10, Figure::fig11})
        if (to_string(f) == name)
            return f;
    return std::nullopt;
}

std::string_view to_string(Figure f) noexcept
{
    switch (f) {
    case Figure::fig6: return "fig6";
    case Figure::fig7: return "fig7";
    case Figure::fig8: return "fig8";
    case Figure::fig9: return "fig9";
    case Figure::fig10: return "fig10";
    case Figure::fig11: return "fig11";
    }
    return "?";
}

ExperimentConfig figure_preset(Figure figure, std::uint64_t samples)
{
    ExperimentConfig cfg;
    cfg.model.type = Topology::grid;
    cfg.model.boundary = Boundary::free_2d;
    McSpec mc;
    mc.samples = samples;
    mc.chains = 10;
    mc.burn_in = 1000;
    mc.stride = 100;
    mc.seed = 1;
    switch (figure) {
    case Figure::fig6:
    case Figure::fig7:
        cfg.model.size = 5;
        cfg.model.coupling = {CouplingSpec::Kind::constant, 0.75, 0.0, 0.0, 0, {}};
        mc.estimator = Estimator::gibbs_ot;
        mc.domain = figure == Figure::fig6 ? Domain::primal : Domain::dual;
        break;
    case Figure::fig8:
    case Figure::fig9:
        cfg.model.size = 5;
        cfg.model.coupling = {CouplingSpec::Kind::constant, 1.25, 0.0, 0.0, 0, {}};
        mc.estimator = Estimator::uniform;
        mc.domain = figure == Figure::fig8 ? Domain::primal : Domain::dual;
        break;
    case Figure::fig10:
    case Figure::fig11:
        cfg.model.size = figure == Figure::fig10 ? 10 : 20;
        cfg.model.coupling.kind = CouplingSpec::Kind::uniform;
        cfg.model.coupling.lo = 1.0;
        cfg.model.coupling.hi = 1.5;
        cfg.model.coupling.seed = figure == Figure::fig10 ? 10 : 20;
        mc.estimator = Estimator::uniform;
        mc.domain = Domain::dual;
        mc.chains = 15;
        break;
    }
    cfg.mc = mc;
    cfg.output.path = std::string(to_string(figure)) + ".csv";
    return cfg;
}

RunManifest reproduce(Figure figure, const std::filesystem::path& out_dir, const RunOptions& options,
                      std::uint64_t samples)
{
    ExperimentConfig cfg = figure_preset(figure, samples);
    cfg.output.path = (out_dir / (std::string(to_string(figure)) + ".csv")).string();
    RunOptions opts = options;
    const IsingModel model = build_model(cfg.model);
    const double exact_ln_z = transfer_matrix_2d_ln_Z(model).ln_Z;
    opts.reference_per_site = per_site_log2(exact_ln_z, model.site_count());
    RunManifest manifest = run_experiment(cfg, opts);
    manifest.notes["preset"] = std::string(to_string(figure));
    manifest.notes["exact_ln_Z"] = exact_ln_z;
    manifest.notes["artifact_choices"] = {"samples", "burn_in", "stride", "seed", "coupling seed"};
    write_file(manifest_path(cfg.output.path), manifest.to_json().dump(2) + "\n");
    return manifest;
}

} // namespace isingdual
