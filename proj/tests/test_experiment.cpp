#include "isingdual/exact.hpp"
#include "isingdual/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

using namespace isingdual;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "isingdual_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

bool has_issue(const ConfigError& e, const std::string& path)
{
    for (const auto& i : e.issues())
        if (i.path == path)
            return true;
    return false;
}

ConfigError config_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError");
    return ConfigError({});
}

std::string grid_config(int m, const std::string& coupling, const std::string& method,
                        const std::string& out)
{
    return R"({"model":{"type":"grid","size":)" + std::to_string(m) + R"(,"boundary":"free","coupling":)" +
           coupling + R"(},"method":)" + method + R"(,"output":{"path":")" + out + R"(","format":"csv"}})";
}

} // namespace

TEST_CASE("minimal configs parse")
{
    const auto cfg = parse_config(grid_config(5, R"({"constant":0.75})", R"({"exact":"transfer"})", "x.csv"));
    CHECK(cfg.model.type == Topology::grid);
    CHECK(cfg.model.size == 5);
    CHECK(cfg.model.coupling.constant == 0.75);
    REQUIRE(cfg.exact);
    CHECK(*cfg.exact == ExactKind::transfer);
    CHECK_FALSE(cfg.mc);

    const auto mc = parse_config(R"({"model":{"type":"chain","size":8,"boundary":"free",
        "coupling":{"uniform":{"lo":0.1,"hi":0.9,"seed":3}}},
        "method":{"mc":{"estimator":"gibbs-ot","domain":"primal","samples":500}}})");
    CHECK(mc.model.boundary == Boundary::free_1d);
    CHECK(mc.model.coupling.kind == CouplingSpec::Kind::uniform);
    REQUIRE(mc.mc);
    CHECK(mc.mc->estimator == Estimator::gibbs_ot);
    CHECK(mc.mc->samples == 500);
    CHECK(mc.mc->chains == 1);
    CHECK(mc.mc->burn_in == 1000);
    CHECK(mc.mc->stride == 100);
    CHECK(mc.output.path == "out.csv");

    // round trip through the serialized form
    const auto again = config_from_json(mc.to_json());
    CHECK(again.to_json() == mc.to_json());
}

TEST_CASE("config errors carry paths and are all reported")
{
    const auto both = config_error(grid_config(
        3, R"({"constant":1})", R"({"exact":"brute","mc":{"estimator":"uniform","domain":"primal","samples":10}})",
        "x.csv"));
    CHECK(has_issue(both, "/method/exact"));
    CHECK(has_issue(both, "/method/mc"));

    const auto big = config_error(grid_config(30, R"({"constant":1})", R"({"exact":"brute"})", "x.csv"));
    REQUIRE(has_issue(big, "/method/exact"));
    CHECK(std::string(big.what()).find("N <= 26") != std::string::npos);

    const auto many = config_error(R"({"model":{"type":"torus","size":1,"colour":2,"coupling":{"constant":"a"}},
        "method":{"mc":{"estimator":"metropolis","domain":"primal","samples":0}},"extra":1})");
    CHECK(has_issue(many, "/model/type"));
    CHECK(has_issue(many, "/model/size"));
    CHECK(has_issue(many, "/model/colour"));
    CHECK(has_issue(many, "/model/coupling/constant"));
    CHECK(has_issue(many, "/method/mc/estimator"));
    CHECK(has_issue(many, "/method/mc/samples"));
    CHECK(has_issue(many, "/extra"));
    CHECK(many.issues().size() >= 7);

    CHECK(has_issue(config_error(R"({"model":{"type":"grid","size":3,"coupling":{"constant":1}}})"), "/method"));
    CHECK(has_issue(config_error(R"({"method":{"exact":"brute"}})"), "/model"));
    CHECK(has_issue(config_error("{not json"), ""));

    CHECK(has_issue(config_error(grid_config(3, R"({"constant":-1})",
                                             R"({"mc":{"estimator":"uniform","domain":"dual","samples":10}})", "x")),
                    "/model/coupling"));
    CHECK(has_issue(config_error(grid_config(3, R"({"uniform":{"lo":1,"hi":1,"seed":1}})", R"({"exact":"brute"})", "x")),
                    "/model/coupling/uniform"));
    CHECK(has_issue(config_error(grid_config(3, R"({"values":[1,2]})", R"({"exact":"brute"})", "x")),
                    "/model/coupling/values"));
    CHECK(has_issue(config_error(grid_config(6, R"({"constant":1})", R"({"exact":"brute-dual"})", "x")),
                    "/method/exact"));
    CHECK(has_issue(config_error(grid_config(21, R"({"constant":1})", R"({"exact":"transfer"})", "x")),
                    "/method/exact"));
    CHECK(has_issue(config_error(grid_config(3, R"({"constant":1})", R"({"exact":"closed-form"})", "x")),
                    "/method/exact"));
    CHECK(has_issue(config_error(R"({"model":{"type":"grid","size":3,"boundary":"periodic","coupling":{"constant":1}},
        "method":{"exact":"brute"}})"), "/model/boundary"));
}

TEST_CASE("exact runs write a single reference row")
{
    const auto dir = scratch("exact");
    const auto out = (dir / "t.csv").string();
    const auto cfg = parse_config(grid_config(5, R"({"constant":0.75})", R"({"exact":"transfer"})", out));
    const auto manifest = run_experiment(cfg);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "chain_id,sample_index,per_site_log2_Z");
    CHECK(rows[1].rfind("-1,0,", 0) == 0);
    const double v = std::stod(rows[1].substr(5));
    CHECK(v == doctest::Approx(1.8023671706).epsilon(1e-10));
    REQUIRE(manifest.results.size() == 1);
    CHECK(manifest.results[0].chain_id == -1);
    CHECK(fs::exists(manifest_path(out)));
    CHECK(manifest.couplings.size() == 40);
}

TEST_CASE("chain closed form matches brute force row for row")
{
    const auto dir = scratch("closed");
    auto run = [&](const std::string& method, const std::string& name) {
        const auto out = (dir / name).string();
        run_experiment(parse_config(R"({"model":{"type":"chain","size":8,"boundary":"periodic",
            "coupling":{"constant":1}},"method":{"exact":")" + method + R"("},"output":{"path":")" + out + R"("}})"));
        return std::stod(lines(slurp(out)).at(1).substr(5));
    };
    const double closed = run("closed-form", "c.csv");
    const double brute = run("brute", "b.csv");
    CHECK(closed == doctest::Approx(brute).epsilon(1e-12));
    CHECK(run("closed-form", "c2.csv") == closed);
}

TEST_CASE("Monte Carlo runs: rows, determinism and manifest round trip")
{
    const auto dir = scratch("mc");
    const auto out = (dir / "mc.csv").string();
    const auto text = grid_config(
        4, R"({"uniform":{"lo":0.5,"hi":1.0,"seed":5}})",
        R"({"mc":{"estimator":"gibbs-ot","domain":"dual","samples":3000,"chains":4,"burn_in":100,"stride":500,"seed":8}})",
        out);
    const auto first = run_experiment(parse_config(text));
    const std::string csv = slurp(out);
    const auto rows = lines(csv);
    CHECK(rows.size() == 1 + 4 * 6);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto last = rows[i].rfind(',');
        CHECK(std::isfinite(std::stod(rows[i].substr(last + 1))));
    }
    REQUIRE(first.results.size() == 4);

    // same config again: byte-identical
    run_experiment(parse_config(text));
    CHECK(slurp(out) == csv);

    // from the manifest, with more threads, into another file
    auto from_manifest = parse_config(slurp(manifest_path(out)));
    from_manifest.output.path = (dir / "again.csv").string();
    RunOptions opts;
    opts.threads = 3;
    const auto second = run_experiment(from_manifest, opts);
    CHECK(slurp(dir / "again.csv") == csv);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(second.results[i].ln_z == first.results[i].ln_z);

    auto manifest_json = nlohmann::json::parse(slurp(manifest_path(out)));
    CHECK(manifest_json["code_version"] == std::string(version));
    CHECK(manifest_json["couplings"].size() == 24);
    CHECK(manifest_json["notes"].contains("sample_definition"));
}

TEST_CASE("json output and reference rows")
{
    const auto dir = scratch("json");
    auto cfg = parse_config(grid_config(
        3, R"({"constant":0.5})",
        R"({"mc":{"estimator":"uniform","domain":"primal","samples":100,"chains":2,"stride":50}})",
        (dir / "o.json").string()));
    cfg.output.format = OutputFormat::json;
    RunOptions opts;
    opts.reference_per_site = 1.25;
    run_experiment(cfg, opts);
    const auto doc = nlohmann::json::parse(slurp(dir / "o.json"));
    REQUIRE(doc["rows"].size() == 1 + 2 * 2);
    CHECK(doc["rows"][0][0] == -1);
    CHECK(doc["rows"][0][2] == 1.25);
    CHECK(doc["columns"][2] == "per_site_log2_Z");
}

TEST_CASE("run failures map to typed errors")
{
    const auto dir = scratch("errors");
    // dual sampler rejects a zero coupling even when parsed from values
    std::string zeros = "[";
    for (int i = 0; i < 4; ++i)
        zeros += std::string(i ? "," : "") + (i == 2 ? "0" : "1");
    zeros += "]";
    CHECK_THROWS_AS(parse_config(grid_config(2, R"({"values":)" + zeros + "}",
                                             R"({"mc":{"estimator":"uniform","domain":"dual","samples":10}})",
                                             (dir / "z.csv").string())),
                    ConfigError);

    fs::create_directories(dir / "blocked");
    const auto cfg = parse_config(grid_config(2, R"({"constant":1})", R"({"exact":"brute"})",
                                              (dir / "blocked").string()));
    CHECK_THROWS_AS(run_experiment(cfg), IoError);
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {1.8023671706152016, 0.1, 3.0, -1.0 / 3.0, 1e-300})
        CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("cross verification")
{
    VerifyOptions opts;
    opts.max_m = 4;
    opts.max_n = 16;
    opts.trials = 20;
    const auto report = verify(opts);
    CHECK(report.passed);
    CHECK(report.failures.empty());
    CHECK(report.comparisons > 1000);
    CHECK(report.worst_relative < 1e-9);

    opts.tamper_bits = 1.0;
    opts.max_n = 4;
    const auto tampered = verify(opts);
    CHECK_FALSE(tampered.passed);
    CHECK_FALSE(tampered.failures.empty());
    CHECK(tampered.worst_relative > 1e-3);
}

TEST_CASE("figure presets")
{
    CHECK(figure_from_string("fig7") == Figure::fig7);
    CHECK_FALSE(figure_from_string("fig12"));
    const auto f7 = figure_preset(Figure::fig7);
    CHECK(f7.model.size == 5);
    CHECK(f7.model.coupling.constant == 0.75);
    CHECK(f7.mc->estimator == Estimator::gibbs_ot);
    CHECK(f7.mc->domain == Domain::dual);
    CHECK(f7.mc->chains == 10);
    CHECK(f7.mc->samples == 100000);
    const auto f8 = figure_preset(Figure::fig8);
    CHECK(f8.mc->estimator == Estimator::uniform);
    CHECK(f8.mc->domain == Domain::primal);
    CHECK(f8.model.coupling.constant == 1.25);
    const auto f10 = figure_preset(Figure::fig10);
    CHECK(f10.model.size == 10);
    CHECK(f10.mc->chains == 15);
    CHECK(f10.model.coupling.kind == CouplingSpec::Kind::uniform);
    CHECK(f10.model.coupling.lo == 1.0);
    CHECK(f10.model.coupling.hi == 1.5);
    CHECK(figure_preset(Figure::fig11).model.size == 20);

    // presets are valid configs
    CHECK_NOTHROW(config_from_json(f10.to_json()));

    const auto dir = scratch("reproduce");
    const auto manifest = reproduce(Figure::fig9, dir, {}, 2000);
    const auto rows = lines(slurp(dir / "fig9.csv"));
    REQUIRE(rows.size() > 2);
    CHECK(rows[1].rfind("-1,0,", 0) == 0);
    CHECK(std::stod(rows[1].substr(5)) == doctest::Approx(2.9276774497).epsilon(1e-10));
    CHECK(manifest.results.size() == 10);
    CHECK(manifest.notes.contains("artifact_choices"));
}
