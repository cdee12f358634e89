#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tentlab/experiment.hpp"

using namespace tentlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("tentlab_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

Json golden()
{
    return read_json(fs::path(TENTLAB_SOURCE_DIR) / "configs" / "golden.json");
}

}  // namespace

TEST_CASE("space, tent and grid documents round-trip")
{
    const auto s = fixtures::random_space(1, 9, 2, true);
    const auto back = space_from_json(space_to_json(s));
    CHECK(back.fingerprint() == s.fingerprint());

    const auto d = MetricMeasureSpace::from_distances(3, {0, 1, 2, 1, 0, 1, 2, 1, 0}, {1, 2, 3});
    CHECK(space_from_json(space_to_json(d)).fingerprint() == d.fingerprint());

    const auto g = TGrid::defaults(s);
    CHECK(grid_from_json(grid_to_json(g)) == g);
    const auto F = fixtures::bumps(s, g, 2);
    const auto F2 = tent_from_json(Json::parse(tent_to_json(F).dump()), s.size());
    for (std::size_t k = 0; k < F.values().size(); ++k) CHECK(F2.values()[k] == F.values()[k]);
    CHECK_THROWS_AS(tent_from_json(tent_to_json(F), s.size() + 1), InvalidInput);
}

TEST_CASE("dyadic systems round-trip")
{
    const auto s = fixtures::random_space(2, 15);
    const auto sys = build_dyadic_system(s);
    const auto back = dyadic_from_json(dyadic_to_json(sys));
    CHECK(dyadic_to_json(back) == dyadic_to_json(sys));
    CHECK(verify_dyadic(s, back).all_pass());
}

TEST_CASE("graph and weight documents")
{
    const auto g = graph_from_json(Json::parse(R"({"kind": "edges", "edges": [[0, 1], [1, 2, 0.5]]})"));
    REQUIRE(g.edges.size() == 2);
    CHECK(std::get<2>(g.edges[0]) == 1.0);
    CHECK(std::get<2>(g.edges[1]) == 0.5);
    CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"kind": "torus"})")), InvalidInput);
    CHECK_THROWS_AS(weight_from_json(Json::parse("[1, -2]"), 2), InvalidInput);
    CHECK_THROWS_AS(weight_from_json(Json::parse("[1, 2]"), 3), InvalidInput);
    CHECK(parse_mode(mode_name(DecompMode::Faithful)) == DecompMode::Faithful);
    CHECK_THROWS_AS(parse_mode("lenient"), InvalidInput);
}

TEST_CASE("missing inputs are configuration errors")
{
    const auto dir = scratch("missing");
    auto doc = golden();
    doc["weight"] = {{"file", "nowhere.json"}};
    doc["output"]["dir"] = (dir / "out").string();
    const auto cfg = ExperimentConfig::parse(doc, dir);
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    CHECK_THROWS_AS(read_json(dir / "nowhere.json"), InvalidInput);

    auto noseed = golden();
    noseed.erase("seed");
    noseed["output"]["dir"] = "out";
    CHECK_THROWS_AS(run_experiment(ExperimentConfig::parse(noseed, dir)), ConfigError);
    auto badp = golden();
    badp["params"]["p"] = 2.0;
    CHECK_THROWS_AS(ExperimentConfig::parse(badp, dir), ConfigError);
}

TEST_CASE("zero tent function runs cleanly")
{
    const auto dir = scratch("zero");
    auto doc = golden();
    doc["tent"] = {{"generator", "zero"}};
    doc["pipeline"] = {"space", "tent", "decompose"};
    doc["output"] = {{"dir", "out"}, {"plots", {"lambda"}}};
    const auto res = run_experiment(ExperimentConfig::parse(doc, dir));
    CHECK(res.exit_code == 0);
    CHECK(res.report.at("decompose").at("atoms") == 0);
    const auto csv = emit_plot_data(res.report, "lambda");
    CHECK(csv == "index,k,j,lambda\n");
    const auto dec = read_json(dir / "out" / "decomposition.json");
    CHECK(dec.at("atoms").empty());
}

TEST_CASE("plot data parses back exactly")
{
    const auto dir = scratch("plots");
    auto doc = golden();
    doc["output"]["dir"] = "out";
    const auto res = run_experiment(ExperimentConfig::parse(doc, dir));
    REQUIRE(res.exit_code == 0);

    const auto rows = parse_csv(emit_plot_data(res.report, "lambda"));
    const auto& lam = res.report.at("decompose").at("lambdas");
    REQUIRE(rows.size() == lam.size() + 1);
    CHECK(res.report.at("decompose").at("atoms") == lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const double v = std::stod(rows[i + 1][3]);
        const double ref = lam[i].at("lambda").get<double>();
        CHECK(std::abs(v - ref) <= 1e-15 * std::abs(ref));
    }
    const auto area = parse_csv(emit_plot_data(res.report, "area"));
    CHECK(area.size() == 25);
    for (const auto& k : plot_kinds()) {
        CHECK(fs::exists(dir / "out" / (k + ".csv")));
        CHECK(parse_csv(emit_plot_data(res.report, k)).front().size() >= 3 - (k == "area"));
    }
    CHECK_THROWS_AS(emit_plot_data(res.report, "histogram"), InvalidInput);
    CHECK_THROWS_AS(emit_plot_data(Json::object(), "hardy_lambda"), InvalidInput);
}
