#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "commands.hpp"

using namespace lipsing;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = LIPSING_FIXTURE_DIR;

cli::RunConfig config(std::string command, std::string variety, std::string out)
{
    cli::RunConfig c;
    c.command = std::move(command);
    c.variety = kFixtures + "/" + variety;
    c.seed = 1;
    c.out = (fs::temp_directory_path() / "lipsing_cli_test" / out).string();
    return c;
}

}   // namespace

TEST_CASE("lne on the cusp reports a fitted slope")
{
    cli::RunConfig c = config("lne", "cusp.json", "lne");
    c.scales = {1e-1, 1e-2, 1e-3};
    c.count = 200;
    const cli::RunResult r = cli::run(c);
    CHECK(r.exit_code == cli::kCompleted);
    REQUIRE(r.document);
    const auto& result = (*r.document)["payload"]["result"];
    CHECK(result.contains("slope"));
    CHECK(result["slope"].get<double>() < 0.0);
    CHECK((*r.document)["schema_version"] == report::kSchemaVersion);
    CHECK(fs::exists(fs::path(c.out) / "lne.json"));
    CHECK(fs::exists(fs::path(c.out) / "lne_C.svg"));
}

TEST_CASE("transfer on the pinching circles is refused")
{
    cli::RunConfig c = config("transfer", "pinched_circles.json", "wedge");
    c.trials = 4;
    const cli::RunResult r = cli::run(c);
    CHECK(r.exit_code == cli::kInconclusive);
    REQUIRE(r.document);
    const auto& payload = (*r.document)["payload"];
    CHECK(payload["status"] == "hypothesis-violated");
    CHECK(payload["result"]["refusal"].get<std::string>().rfind("HypothesisViolated", 0) == 0);
    CHECK(payload["result"]["transfer"]["certificates"][0].contains("output_class") == false);
}

TEST_CASE("invalid input exits with 2")
{
    cli::RunConfig c = config("betti", "does_not_exist.json", "missing");
    CHECK(cli::run(c).exit_code == cli::kInvalidInput);

    c = config("nonsense", "cusp.json", "bad");
    CHECK(cli::run(c).exit_code == cli::kInvalidInput);

    c = config("smooth", "pinched_circles.json", "bad");
    CHECK(cli::run(c).exit_code == cli::kInvalidInput);

    c = config("lne", "cusp.json", "bad");
    c.scales = {0.1, -1.0};
    CHECK(cli::run(c).exit_code == cli::kInvalidInput);

    const fs::path broken = fs::temp_directory_path() / "lipsing_cli_test" / "broken.json";
    fs::create_directories(broken.parent_path());
    std::ofstream(broken) << R"({"name": "x", "field": "complex", "variables": ["x"], "polynomials": ["x x"]})";
    c = config("betti", "", "bad");
    c.variety = broken.string();
    CHECK(cli::run(c).exit_code == cli::kInvalidInput);
}

TEST_CASE("reports embed their config and keep timestamps out of the payload")
{
    cli::RunConfig c = config("systole", "concentric_polygons.json", "systole");
    const cli::RunResult a = cli::run(c);
    const cli::RunResult b = cli::run(c);
    REQUIRE(a.document);
    REQUIRE(b.document);
    const auto& cfg = (*a.document)["payload"]["config"];
    CHECK(cfg["seed"] == 1);
    CHECK(cfg["variety"]["generator"] == "concentric_polygons");
    CHECK((*a.document)["metadata"].contains("generated_at"));
    CHECK(report::payload_text(*a.document) == report::payload_text(*b.document));
    const double eps0 = (*a.document)["payload"]["result"]["x0"]["epsilon0"].get<double>();
    CHECK(eps0 == Catch::Approx(256 * 2 * std::sin(3.141592653589793 / 256)).epsilon(1e-9));

    cli::RunConfig s;
    s.command = "report";
    s.out = c.out;
    const cli::RunResult summary = cli::run(s);
    CHECK(summary.exit_code == cli::kCompleted);
    REQUIRE(summary.document);
    CHECK((*summary.document)["payload"]["result"]["reports"].size() == 1);
}
