#include "tentlab/io.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "tentlab/hash.hpp"

namespace tentlab {

namespace fs = std::filesystem;

namespace {

// nlohmann reports shape errors as its own exceptions; callers only see InvalidInput.
template <class Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string(what) + ": " + e.what());
    }
}

}  // namespace

Json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_atomic(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

void write_json(const fs::path& path, const Json& doc) { write_atomic(path, doc.dump(2) + "\n"); }

MetricMeasureSpace space_from_json(const Json& doc)
{
    return guarded("space document", [&] {
        std::vector<double> mass;
        if (doc.contains("measure")) mass = doc.at("measure").get<std::vector<double>>();
        const std::string metric = doc.value("metric", doc.contains("points") ? "euclidean" : "explicit");
        if (metric == "euclidean") {
            if (!doc.contains("points")) throw InvalidInput("space document: euclidean metric needs 'points'");
            return MetricMeasureSpace::from_coordinates(doc.at("points").get<MetricMeasureSpace::Coordinates>(),
                                                        std::move(mass));
        }
        if (metric != "explicit") throw InvalidInput("space document: unknown metric '" + metric + "'");
        if (!doc.contains("distances")) throw InvalidInput("space document: explicit metric needs 'distances'");
        const Json& d = doc.at("distances");
        std::vector<double> table;
        std::size_t n = 0;
        if (!d.empty() && d.front().is_array()) {
            n = d.size();
            for (const auto& row : d) {
                if (row.size() != n) throw InvalidInput("space document: distance table is not square");
                for (const auto& v : row) table.push_back(v.get<double>());
            }
        } else {
            table = d.get<std::vector<double>>();
            n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(table.size()))));
        }
        return MetricMeasureSpace::from_distances(n, std::move(table), std::move(mass));
    });
}

Json space_to_json(const MetricMeasureSpace& space)
{
    Json doc;
    if (space.has_coordinates() && space.is_euclidean()) {
        doc["metric"] = "euclidean";
        doc["points"] = space.coordinates();
    } else {
        doc["metric"] = "explicit";
        std::vector<double> t(space.size() * space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            for (std::size_t j = 0; j < space.size(); ++j) t[i * space.size() + j] = space.distance(i, j);
        doc["distances"] = t;
    }
    doc["measure"] = std::vector<double>(space.masses().begin(), space.masses().end());
    return doc;
}

std::vector<double> vector_from_json(const Json& doc, std::size_t points, const char* what)
{
    auto v = guarded(what, [&] { return doc.get<std::vector<double>>(); });
    if (v.size() != points)
        throw InvalidInput(std::string(what) + ": expected " + std::to_string(points) + " values, got " +
                           std::to_string(v.size()));
    for (double x : v)
        if (!std::isfinite(x)) throw InvalidInput(std::string(what) + ": non-finite value");
    return v;
}

std::vector<double> weight_from_json(const Json& doc, std::size_t points)
{
    auto w = vector_from_json(doc, points, "weight document");
    for (double x : w)
        if (!(x > 0.0)) throw InvalidInput("weight document: weights must be positive");
    return w;
}

TGrid grid_from_json(const Json& doc)
{
    return guarded("grid", [&] {
        TGrid g;
        g.t_min = doc.at("t_min").get<double>();
        g.ratio = doc.value("ratio", g.ratio);
        g.count = doc.at("count").get<std::size_t>();
        g.validate();
        return g;
    });
}

Json grid_to_json(const TGrid& g) { return {{"t_min", g.t_min}, {"ratio", g.ratio}, {"count", g.count}}; }

TentFunction tent_from_json(const Json& doc, std::size_t points)
{
    return guarded("tent document", [&] {
        const TGrid g = grid_from_json(doc.at("grid"));
        TentFunction f(points, g);
        const Json& v = doc.at("values");
        std::vector<double> flat;
        if (!v.empty() && v.front().is_array()) {
            for (const auto& row : v) {
                if (row.size() != g.count) throw InvalidInput("tent document: row length differs from grid count");
                for (const auto& x : row) flat.push_back(x.get<double>());
            }
        } else {
            flat = v.get<std::vector<double>>();
        }
        if (flat.size() != points * g.count)
            throw InvalidInput("tent document: expected " + std::to_string(points * g.count) + " values");
        auto dst = f.values();
        for (std::size_t k = 0; k < flat.size(); ++k) {
            if (!std::isfinite(flat[k])) throw InvalidInput("tent document: non-finite value");
            dst[k] = flat[k];
        }
        return f;
    });
}

Json tent_to_json(const TentFunction& f)
{
    auto v = f.values();
    return {{"grid", grid_to_json(f.grid())}, {"values", std::vector<double>(v.begin(), v.end())}};
}

GraphSpec graph_from_json(const Json& doc)
{
    return guarded("graph document", [&] {
        GraphSpec g;
        const std::string kind = doc.at("kind").get<std::string>();
        g.weight = doc.value("weight", 1.0);
        if (kind == "path") {
            g.kind = GraphSpec::Kind::Path;
        } else if (kind == "grid2d") {
            g.kind = GraphSpec::Kind::Grid2d;
            g.rows = doc.at("rows").get<std::size_t>();
            g.cols = doc.at("cols").get<std::size_t>();
        } else if (kind == "edges") {
            g.kind = GraphSpec::Kind::Edges;
            for (const auto& e : doc.at("edges")) {
                if (e.size() < 2 || e.size() > 3) throw InvalidInput("graph document: edges are [i, j] or [i, j, w]");
                g.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                                     e.size() == 3 ? e[2].get<double>() : 1.0);
            }
        } else {
            throw InvalidInput("graph document: unknown kind '" + kind + "'");
        }
        return g;
    });
}

Json dyadic_to_json(const DyadicCubeSystem& sys)
{
    Json gens = Json::array();
    for (const auto& g : sys.generations) {
        Json cubes = Json::array();
        for (const auto& c : g.cubes) {
            Json q = {{"center", c.center}, {"members", c.members}};
            q["parent"] = c.parent == kNoParent ? Json(nullptr) : Json(c.parent);
            cubes.push_back(std::move(q));
        }
        gens.push_back({{"k", g.k}, {"cubes", std::move(cubes)}});
    }
    const std::size_t n = sys.generations.empty() ? 0 : sys.generations.front().cube_of.size();
    return {{"delta", sys.delta}, {"k_min", sys.k_min}, {"k_max", sys.k_max}, {"points", n},
            {"generations", std::move(gens)}};
}

DyadicCubeSystem dyadic_from_json(const Json& doc)
{
    return guarded("dyadic document", [&] {
        DyadicCubeSystem sys;
        sys.delta = doc.at("delta").get<double>();
        sys.k_min = doc.at("k_min").get<int>();
        sys.k_max = doc.at("k_max").get<int>();
        const auto n = doc.at("points").get<std::size_t>();
        for (const auto& gj : doc.at("generations")) {
            DyadicGeneration g;
            g.k = gj.at("k").get<int>();
            g.cube_of.assign(n, kNoParent);
            for (const auto& cj : gj.at("cubes")) {
                DyadicCube c;
                c.center = cj.at("center").get<std::size_t>();
                c.members = cj.at("members").get<std::vector<std::size_t>>();
                c.parent = cj.at("parent").is_null() ? kNoParent : cj.at("parent").get<std::size_t>();
                for (std::size_t x : c.members) {
                    if (x >= n) throw InvalidInput("dyadic document: member index out of range");
                    g.cube_of[x] = g.cubes.size();
                }
                g.cubes.push_back(std::move(c));
            }
            sys.generations.push_back(std::move(g));
        }
        if (sys.generations.size() != static_cast<std::size_t>(sys.k_max - sys.k_min + 1))
            throw InvalidInput("dyadic document: generation count does not match k_min..k_max");
        return sys;
    });
}

Json dyadic_report_to_json(const DyadicReport& r)
{
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}, {"slack", c.slack}});
    return {{"checks", std::move(checks)}, {"max_children", r.max_children}, {"all_pass", r.all_pass()}};
}

std::string mode_name(DecompMode m) { return m == DecompMode::Strict ? "strict" : "faithful"; }

DecompMode parse_mode(const std::string& s)
{
    if (s == "strict") return DecompMode::Strict;
    if (s == "faithful") return DecompMode::Faithful;
    throw InvalidInput("unknown decomposition mode '" + s + "' (strict | faithful)");
}

Json decomposition_to_json(const AtomicDecomposition& d)
{
    Json atoms = Json::array();
    for (const auto& e : d.entries) {
        // Atoms are sparse: [point, sample, value] triples.
        Json vals = Json::array();
        for (std::size_t y = 0; y < e.atom.points(); ++y)
            for (std::size_t m = 0; m < e.atom.samples(); ++m)
                if (e.atom.at(y, m) != 0.0) vals.push_back({y, m, e.atom.at(y, m)});
        atoms.push_back({{"k", e.k},
                         {"j", e.j},
                         {"lambda", e.lambda},
                         {"ball", {{"center", e.ball.center}, {"radius", e.ball.radius}}},
                         {"cube", e.cube},
                         {"region_size", e.region.count()},
                         {"values", std::move(vals)}});
    }
    Json levels = Json::array();
    for (const auto& l : d.levels)
        levels.push_back({{"k", l.k},
                          {"omega", l.omega_count},
                          {"omega_star", l.omega_star_count},
                          {"w_omega", l.w_omega},
                          {"w_omega_star", l.w_omega_star},
                          {"atoms", l.atoms},
                          {"lambda_p_sum", l.lambda_p_sum}});
    return {{"p", d.p},
            {"q", d.q},
            {"mode", mode_name(d.params.mode)},
            {"delta", d.params.delta},
            {"gamma", d.params.gamma},
            {"kappa", d.params.kappa},
            {"c1", d.params.effective_c1()},
            {"grid", grid_to_json(d.grid)},
            {"points", d.points},
            {"space_hash", hex_digest(d.space_hash)},
            {"weight_hash", hex_digest(d.weight_hash)},
            {"levels", std::move(levels)},
            {"atoms", std::move(atoms)}};
}

Json coefficient_report_to_json(const CoefficientReport& r)
{
    return {{"lambda_p_sum", r.lambda_p_sum},
            {"norm_p", r.norm_p},
            {"ratio", r.ratio},
            {"degenerate", r.degenerate},
            {"atom_slack", r.atom_slack},
            {"support_failures", r.support_failures},
            {"min_slack", r.min_slack},
            {"max_slack", r.max_slack},
            {"converse_lhs", r.converse_lhs},
            {"converse_pass", r.converse_pass},
            {"max_w_star_ratio", r.max_w_star_ratio}};
}

Json hardy_to_json(const HardyDecomposition& d)
{
    Json atoms = Json::array();
    for (const auto& e : d.entries)
        atoms.push_back({{"k", e.k},
                         {"j", e.j},
                         {"lambda", e.lambda},
                         {"harmless", e.harmless},
                         {"M", e.atom.M},
                         {"ball", {{"center", e.atom.ball.center}, {"radius", e.atom.ball.radius}}},
                         {"a", e.atom.a},
                         {"b", e.atom.b}});
    return {{"atoms", std::move(atoms)},
            {"residual", d.residual},
            {"calderon_residual", d.calderon_residual},
            {"lambda_p_sum", d.lambda_p_sum},
            {"sl_norm_p", d.sl_norm_p},
            {"ratio", d.ratio}};
}

}  // namespace tentlab
