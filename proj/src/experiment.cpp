#include "tentlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "tentlab/hash.hpp"
#include "tentlab/rng.hpp"
#include "tentlab/weights.hpp"

namespace tentlab {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kStages{"space", "dyadic", "weights", "tent", "decompose", "hardy"};

template <class T>
T field(const Json& doc, const char* key, T fallback)
{
    if (!doc.is_object() || !doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

// Per-source seed: explicit "seed" wins, else the global seed mixed with a salt.
std::uint64_t source_seed(const ExperimentConfig& c, const Json& src, std::uint64_t salt, const char* what)
{
    if (src.is_object() && src.contains("seed")) return field<std::uint64_t>(src, "seed", 0);
    if (!c.seed) throw ConfigError(std::string("config: ") + what + " is randomized and needs a seed");
    return *c.seed ^ (salt * 0x9e3779b97f4a7c15ULL);
}

Json load_source(const ExperimentConfig& c, const Json& src)
{
    const fs::path p = c.base_dir / field<std::string>(src, "file", "");
    try {
        return read_json(p);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

template <class Fn>
auto as_config_error(Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

MetricMeasureSpace make_space(const ExperimentConfig& c)
{
    const Json& s = c.space;
    return as_config_error([&] {
        if (s.contains("file")) return space_from_json(load_source(c, s));
        const auto gen = field<std::string>(s, "generator", "");
        const double spacing = field(s, "spacing", 1.0);
        if (gen == "grid_1d") return grid_1d(field<std::size_t>(s, "n", 0), spacing);
        if (gen == "grid_2d") return grid_2d(field<std::size_t>(s, "rows", 0), field<std::size_t>(s, "cols", 0), spacing);
        if (gen == "random") {
            Rng rng(source_seed(c, s, 1, "space"));
            const auto n = field<std::size_t>(s, "n", 0);
            const auto dim = field<std::size_t>(s, "dim", 2);
            const double scale = field(s, "scale", 1.0);
            MetricMeasureSpace::Coordinates pts(n, std::vector<double>(dim));
            for (auto& p : pts)
                for (auto& x : p) x = scale * rng.uniform();
            return MetricMeasureSpace::from_coordinates(std::move(pts));
        }
        throw ConfigError("config: space needs 'file' or generator grid_1d | grid_2d | random");
    });
}

std::vector<double> make_weight(const ExperimentConfig& c, const MetricMeasureSpace& space)
{
    const Json& w = c.weight;
    if (w.is_null()) return {};
    return as_config_error([&] {
        if (w.contains("file")) return weight_from_json(load_source(c, w), space.size());
        const WeightKind kind = parse_weight_kind(field<std::string>(w, "kind", ""));
        WeightParams p;
        p.c = field(w, "c", p.c);
        p.a = field(w, "a", p.a);
        p.center = field(w, "center", p.center);
        p.high = field(w, "high", p.high);
        p.low = field(w, "low", p.low);
        p.cell = field(w, "cell", p.cell);
        p.p = field(w, "p", p.p);
        p.target = field(w, "target", p.target);
        p.sigma = field(w, "sigma", p.sigma);
        p.max_attempts = field(w, "max_attempts", p.max_attempts);
        const std::uint64_t seed = kind == WeightKind::RandomAp ? source_seed(c, w, 2, "weight") : 0;
        const WeightFunction wf = generate_weight(space, kind, p, seed);
        return std::vector<double>(wf.values().begin(), wf.values().end());
    });
}

TGrid make_grid(const ExperimentConfig& c, const MetricMeasureSpace& space)
{
    if (c.grid.is_null()) return TGrid::defaults(space);
    return as_config_error([&] { return grid_from_json(c.grid); });
}

GraphSpec make_graph(const ExperimentConfig& c)
{
    return as_config_error([&] {
        if (c.graph.is_null()) {
            const auto gen = field<std::string>(c.space, "generator", "");
            GraphSpec g;
            if (gen == "grid_1d") return g;
            if (gen == "grid_2d") {
                g.kind = GraphSpec::Kind::Grid2d;
                g.rows = field<std::size_t>(c.space, "rows", 0);
                g.cols = field<std::size_t>(c.space, "cols", 0);
                return g;
            }
            throw ConfigError("config: hardy stage needs a graph for this space");
        }
        if (c.graph.contains("file")) return graph_from_json(load_source(c, c.graph));
        return graph_from_json(c.graph);
    });
}

std::vector<double> make_f(const ExperimentConfig& c, const SpectralOperator& op)
{
    const Json& f = c.f;
    return as_config_error([&] {
        if (f.contains("file")) return vector_from_json(load_source(c, f), op.size(), "f document");
        const auto gen = field<std::string>(f, "generator", "random");
        if (gen == "random") {
            Rng rng(source_seed(c, f, 3, "f"));
            std::vector<double> v(op.size());
            for (auto& x : v) x = rng.normal();
            return v;
        }
        if (gen == "eigenvector") {
            const auto i = field<std::size_t>(f, "index", 1);
            if (i >= op.size()) throw ConfigError("config: eigenvector index out of range");
            std::vector<double> v(op.size());
            for (std::size_t x = 0; x < v.size(); ++x)
                v[x] = op.eigenvectors()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i));
            return v;
        }
        throw ConfigError("config: f generator must be random | eigenvector");
    });
}

double weighted_ball(const MetricMeasureSpace& space, std::span<const double> w, const BallSpec& b)
{
    const PointSet s = space.ball(b.center, b.radius);
    double acc = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (s.contains(i)) acc += (w.empty() ? 1.0 : w[i]) * space.mass(i);
    return acc;
}

TentFunction make_tent(const ExperimentConfig& c, const MetricMeasureSpace& space, std::span<const double> w,
                       const TGrid& grid, const SpectralOperator* op, std::span<const double> f)
{
    const Json& t = c.tent;
    return as_config_error([&] {
        if (t.contains("file")) return tent_from_json(load_source(c, t), space.size());
        const auto gen = field<std::string>(t, "generator", "zero");
        TentFunction F(space.size(), grid);
        if (gen == "zero") return F;
        if (gen == "random") {
            // Sum of noisy bumps over random tents, amplitudes spread over octaves.
            Rng rng(source_seed(c, t, 4, "tent"));
            const auto bumps = field<std::size_t>(t, "bumps", 4);
            const double octaves = field(t, "octaves", 6.0);
            for (std::size_t b = 0; b < bumps; ++b) {
                const BallSpec ball{rng.index(space.size()), space.diameter() * rng.uniform(0.1, 0.6) +
                                                                  space.min_positive_distance()};
                const double amp = std::exp2(octaves * (rng.uniform() - 0.5));
                const HalfSpaceRegion r = tent_over_ball(space, grid, ball);
                for (std::size_t y = 0; y < space.size(); ++y)
                    for (std::size_t m = 0; m < grid.count; ++m)
                        if (r.contains(y, m)) F.at(y, m) += amp * rng.normal();
            }
            return F;
        }
        if (gen == "atom") {
            Rng rng(source_seed(c, t, 5, "tent"));
            const BallSpec ball{field<std::size_t>(t, "center", 0), field(t, "radius", space.diameter())};
            if (ball.center >= space.size()) throw ConfigError("config: atom center out of range");
            const HalfSpaceRegion r = tent_over_ball(space, grid, ball);
            for (std::size_t y = 0; y < space.size(); ++y)
                for (std::size_t m = 0; m < grid.count; ++m)
                    if (r.contains(y, m)) F.at(y, m) = rng.normal();
            const double norm = tent_norm(space, F, c.params.q, w);
            if (norm > 0.0)
                F *= field(t, "scale", 1.0) * std::pow(weighted_ball(space, w, ball), 1.0 / c.params.q - 1.0 / c.params.p) /
                     norm;
            return F;
        }
        if (gen == "hardy") {
            if (!op) throw ConfigError("config: tent generator 'hardy' needs a graph and f");
            return heat_tent(*op, grid, op->null_complement(f));
        }
        throw ConfigError("config: tent generator must be zero | random | atom | hardy");
    });
}

double rel_max_error(const TentFunction& a, const TentFunction& b)
{
    double err = 0.0, scale = 0.0;
    auto va = a.values(), vb = b.values();
    for (std::size_t k = 0; k < va.size(); ++k) {
        err = std::max(err, std::abs(va[k] - vb[k]));
        scale = std::max(scale, std::abs(vb[k]));
    }
    return scale > 0.0 ? err / scale : err;
}

std::string csv_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const Json& doc, const fs::path& base_dir)
{
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    ExperimentConfig c;
    c.raw = doc;
    c.base_dir = base_dir;
    if (doc.contains("seed")) c.seed = field<std::uint64_t>(doc, "seed", 0);
    if (!doc.contains("space")) throw ConfigError("config: 'space' is required");
    c.space = doc.at("space");
    c.weight = doc.value("weight", Json());
    c.grid = doc.value("grid", Json());
    c.tent = doc.value("tent", Json::object());
    c.graph = doc.value("graph", Json());
    c.f = doc.value("f", Json::object());

    const Json pj = doc.value("params", Json::object());
    ExperimentParams& p = c.params;
    p.p = field(pj, "p", p.p);
    p.q = field(pj, "q", p.q);
    p.s = field(pj, "s", p.s);
    p.gamma = field(pj, "gamma", p.gamma);
    p.kappa = field(pj, "kappa", p.kappa);
    p.delta = field(pj, "delta", p.delta);
    p.c1 = field(pj, "c1", p.c1);
    p.M = field(pj, "M", p.M);
    p.nu = field(pj, "nu", p.nu);
    p.n_exp = field(pj, "n_exp", p.n_exp);
    p.c0 = field(pj, "c0", p.c0);
    p.leak_tol = field(pj, "leak_tol", p.leak_tol);
    try {
        p.mode = parse_mode(field<std::string>(pj, "mode", "strict"));
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    if (!(p.p > 0.0 && p.p <= 1.0)) throw ConfigError("config: need 0 < p <= 1");
    if (!(p.q > 1.0)) throw ConfigError("config: need q > 1");
    if (!(p.s >= 1.0)) throw ConfigError("config: need s >= 1");
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigError("config: need 0 < gamma < 1");
    if (!(p.kappa > 0.0)) throw ConfigError("config: need kappa > 0");
    if (!(p.delta > 0.0 && p.delta <= 1.0 / 12.0)) throw ConfigError("config: need 0 < delta <= 1/12");
    if (!(p.c1 >= 0.0)) throw ConfigError("config: need c1 >= 0");
    if (p.M < 0) throw ConfigError("config: need M >= 0");
    if (!(p.nu > 1.0)) throw ConfigError("config: need nu > 1");
    if (!(p.c0 > 0.0)) throw ConfigError("config: need c0 > 0");
    if (!(p.n_exp >= 0.0)) throw ConfigError("config: need n_exp >= 0");

    c.pipeline = field<std::vector<std::string>>(doc, "pipeline", {"space", "decompose"});
    for (const auto& s : c.pipeline)
        if (!kStages.count(s)) throw ConfigError("config: unknown pipeline stage '" + s + "'");

    const Json out = doc.value("output", Json::object());
    c.out_dir = base_dir / field<std::string>(out, "dir", "out");
    c.report_name = field<std::string>(out, "report", c.report_name);
    c.decomposition_name = field<std::string>(out, "decomposition", c.decomposition_name);
    c.plots = field<std::vector<std::string>>(out, "plots", {});
    for (const auto& k : c.plots)
        if (std::find(plot_kinds().begin(), plot_kinds().end(), k) == plot_kinds().end())
            throw ConfigError("config: unknown plot kind '" + k + "'");
    return c;
}

RunResult run_experiment(const ExperimentConfig& c)
{
    auto has = [&](const char* s) { return std::find(c.pipeline.begin(), c.pipeline.end(), s) != c.pipeline.end(); };
    RunResult res;
    Json& rep = res.report;
    auto fail = [&](const std::string& what) { res.failures.push_back(what); };
    const ExperimentParams& P = c.params;

    const MetricMeasureSpace space = make_space(c);
    const std::vector<double> w = make_weight(c, space);
    const TGrid grid = make_grid(c, space);
    Fnv1a wh;
    wh.values(w);

    rep["version"] = kVersion;
    rep["config_hash"] = hex_digest([&] {
        Fnv1a h;
        h.text(c.raw.dump());
        return h.digest();
    }());
    rep["space_hash"] = hex_digest(space.fingerprint());
    rep["weight_hash"] = hex_digest(wh.digest());
    rep["pipeline"] = c.pipeline;
    rep["grid"] = grid_to_json(grid);

    const DoublingReport dbl = doubling_report(space);
    if (has("space"))
        rep["space"] = {{"points", space.size()},
                        {"diameter", space.diameter()},
                        {"min_positive_distance", space.min_positive_distance()},
                        {"total_mass", space.total_mass()},
                        {"c_doubling", dbl.c_doubling},
                        {"n_exp", dbl.n_exp},
                        {"d_exp", dbl.d_exp}};

    if (has("dyadic")) {
        const DyadicCubeSystem sys = build_dyadic_system(space, P.delta);
        const DyadicReport dr = verify_dyadic(space, sys);
        Json j = dyadic_report_to_json(dr);
        j["k_min"] = sys.k_min;
        j["k_max"] = sys.k_max;
        j["generations"] = sys.generations.size();
        rep["dyadic"] = std::move(j);
        for (const auto& chk : dr.checks)
            if (!chk.pass) fail("dyadic " + chk.name + ": " + chk.witness);
    }

    if (has("weights")) {
        const std::vector<double> wv = w.empty() ? std::vector<double>(space.size(), 1.0) : w;
        const WeightLemmaReport wr = verify_weight_lemma(space, wv, P.s, P.s + 1.0, c.seed.value_or(0));
        rep["weights"] = {{"p", wr.p},
                          {"q", wr.q},
                          {"ap_p", wr.ap_p},
                          {"ap_q", wr.ap_q},
                          {"monotone_pass", wr.monotone_pass},
                          {"dual_constant", wr.dual_constant},
                          {"dual_expected", wr.dual_expected},
                          {"dual_pass", wr.dual_pass},
                          {"iv_pairs", wr.iv_pairs},
                          {"iv_worst", wr.iv_worst},
                          {"iv_pass", wr.iv_pass},
                          {"rh_2", rh_constant(space, wv, 2.0)}};
        if (!wr.monotone_pass) fail("weights: A_p monotonicity");
        if (!wr.dual_pass) fail("weights: dual identity");
        if (!wr.iv_pass) fail("weights: ball-ratio inequality at " + wr.iv_witness);
    }

    // Hardy inputs are built first when the tent function derives from them.
    std::optional<SpectralOperator> op;
    std::vector<double> f;
    const bool tent_from_hardy = field<std::string>(c.tent, "generator", "") == "hardy";
    if (has("hardy") || tent_from_hardy) {
        op = as_config_error([&] { return SpectralOperator::build(space, make_graph(c)); });
        f = make_f(c, *op);
    }

    const bool need_tent = has("tent") || has("decompose");
    TentFunction F;
    if (need_tent) F = make_tent(c, space, w, grid, op ? &*op : nullptr, f);

    if (has("tent")) {
        const auto area = area_functional(space, F);
        rep["tent"] = {{"norm_p", lp_norm_weighted(space, area, w, P.p)},
                       {"norm_q", lp_norm_weighted(space, area, w, P.q)},
                       {"support", support(F).count()},
                       {"area", area}};
    }

    if (has("decompose")) {
        DecompParams dp;
        dp.delta = P.delta;
        dp.gamma = P.gamma;
        dp.kappa = P.kappa;
        dp.c1 = P.c1;
        dp.mode = P.mode;
        const AtomicDecomposition d = as_config_error([&] { return decompose(space, F, P.p, P.q, w, dp); });
        const CoefficientReport cr = coefficient_report(space, d, F, w);
        const double err = rel_max_error(reconstruct(d), F);
        std::string witness;
        const bool partition = regions_partition_support(d, F, &witness);
        Json j = coefficient_report_to_json(cr);
        j["atoms"] = d.entries.size();
        j["reconstruction_error"] = err;
        j["partition_pass"] = partition;
        j["mode"] = mode_name(P.mode);
        Json levels = Json::array();
        for (const auto& l : d.levels) levels.push_back({{"k", l.k}, {"atoms", l.atoms}, {"lambda_p_sum", l.lambda_p_sum}});
        j["levels"] = std::move(levels);
        Json lambdas = Json::array();
        for (const auto& e : d.entries) lambdas.push_back({{"k", e.k}, {"j", e.j}, {"lambda", e.lambda}});
        j["lambdas"] = std::move(lambdas);
        rep["decompose"] = std::move(j);
        if (err > 1e-12) fail("decompose: reconstruction error " + csv_number(err));
        if (!partition) fail("decompose: regions do not partition the support: " + witness);
        if (!cr.converse_pass) fail("decompose: converse bound");
        if (cr.support_failures) fail("decompose: atom outside its tent");
        if (P.mode == DecompMode::Strict && cr.min_slack < 0.0) fail("decompose: strict atom over its norm bound");
        write_json(c.out_dir / c.decomposition_name, decomposition_to_json(d));
    }

    if (has("hardy")) {
        const int n_dim = std::max(1, static_cast<int>(std::ceil(dbl.n_exp - 1e-9)));
        const CalculusFunctions calc = as_config_error([&] { return bump_calculus(P.c0, P.M, n_dim); });
        const CalderonResult cal = calderon_reconstruct(*op, grid, f, calc);
        const HeatReport heat = heat_diagnostics(*op, space, grid, P.M);
        HardyParams hp;
        hp.p = P.p;
        hp.q = P.q;
        hp.M = P.M;
        hp.tent.delta = P.delta;
        hp.tent.gamma = P.gamma;
        hp.tent.kappa = P.kappa;
        hp.tent.c1 = P.c1;
        hp.tent.mode = P.mode;
        hp.leak_tol = P.leak_tol;
        const HardyDecomposition hd = as_config_error([&] { return hardy_decompose(*op, space, grid, f, w, calc, hp); });

        double max_leak = 0.0, max_id = 0.0, max_slack = 0.0, max_strict = 0.0, max_total = 0.0;
        const double n_exp = P.n_exp > 0.0 ? P.n_exp : 0.5 * (n_dim * (P.s - P.p) / P.p + 2.0 * P.M);
        Json atoms = Json::array();
        for (const auto& e : hd.entries) {
            const HardyAtomReport ar = validate_hardy_atom(*op, space, e.atom, P.p, P.q, w, P.leak_tol, 1.0 + 0.5 * (P.q - 1.0));
            HardyAtom t = truncate_atom(*op, space, e.atom);
            normalize_atom(*op, space, t, P.p, P.q, w);
            const HardyAtomReport sr = validate_hardy_atom(*op, space, t, P.p, P.q, w, P.leak_tol);
            const SlAtomReport sl = sl_on_atom_report(*op, space, grid, e.atom, P.p, P.q, P.s, w, n_exp);
            max_leak = std::max(max_leak, ar.max_leak);
            max_id = std::max(max_id, ar.identity_error);
            max_slack = std::max(max_slack, ar.slack);
            max_strict = std::max(max_strict, sr.slack);
            max_total = std::max(max_total, sl.total);
            atoms.push_back({{"k", e.k},
                             {"j", e.j},
                             {"lambda", e.lambda},
                             {"radius", e.atom.ball.radius},
                             {"leak", ar.max_leak},
                             {"a_leak", ar.a_leak},
                             {"identity_error", ar.identity_error},
                             {"slack", ar.slack},
                             {"strict_slack", sr.slack},
                             {"downgrade_pass", ar.downgrade_pass},
                             {"sl_i1", sl.i1},
                             {"sl_i2", sl.i2},
                             {"sl_j1", sl.j1},
                             {"sl_j2", sl.j2},
                             {"sl_total", sl.total},
                             {"tail_ratio", sl.tail_ratio},
                             {"weight_inequality_pass", sl.weight_inequality_pass}});
            if (!ar.identity_pass) fail("hardy: a != L^M b for atom (" + std::to_string(e.k) + ", " + std::to_string(e.j) + ")");
            if (!ar.downgrade_pass) fail("hardy: q-downgrade");
            if (!sl.weight_inequality_pass) fail("hardy: dilate weight inequality");
        }
        Json evs = Json::array();
        for (Eigen::Index i = 0; i < op->eigenvalues().size(); ++i) evs.push_back(op->eigenvalues()[i]);
        Json heat_rows = Json::array();
        for (const auto& r : heat.rows) heat_rows.push_back({{"t", r.t}, {"k", r.k}, {"c_inf", r.c_inf}, {"c_fit", r.c_fit}});
        Json j = hardy_to_json(hd);
        j.erase("atoms");
        j["atoms"] = std::move(atoms);
        j["c0"] = P.c0;
        j["c_psi"] = calc.c_psi;
        j["n_dim"] = n_dim;
        j["n_exp"] = n_exp;
        j["operator_error"] = op->reconstruction_error();
        j["max_leak"] = max_leak;
        j["max_identity_error"] = max_id;
        j["max_slack"] = max_slack;
        j["max_strict_slack"] = max_strict;
        j["max_sl_total"] = max_total;
        j["calderon"] = {{"residual", cal.residual},
                         {"predicted", cal.predicted_residual},
                         {"eigenvalues", evs},
                         {"defects", cal.defects}};
        j["heat"] = {{"max_c_fit", heat.max_c_fit}, {"max_row_sum_error", heat.max_row_sum_error}, {"rows", heat_rows}};
        rep["hardy"] = std::move(j);
        if (op->reconstruction_error() > 1e-8) fail("hardy: eigendecomposition does not reproduce L");
        if (hd.residual > hd.calderon_residual + 1e-9) fail("hardy: reconstruction residual above the Calderón residual");
        if (max_leak > P.leak_tol) fail("hardy: support leak " + csv_number(max_leak));
        if (max_strict > 1.0 + 1e-9) fail("hardy: truncated atom norm slack " + csv_number(max_strict));
    }

    rep["failures"] = res.failures;
    rep["pass"] = res.failures.empty();
    res.exit_code = res.failures.empty() ? 0 : 1;

    write_json(c.out_dir / c.report_name, rep);
    for (const auto& k : c.plots) write_atomic(c.out_dir / (k + ".csv"), emit_plot_data(rep, k));
    return res;
}

const std::vector<std::string>& plot_kinds()
{
    static const std::vector<std::string> kinds{"area", "levels", "lambda", "calderon", "heat", "hardy_lambda"};
    return kinds;
}

std::string emit_plot_data(const Json& report, const std::string& kind)
{
    auto need = [&](const char* section) -> const Json& {
        if (!report.contains(section)) throw InvalidInput("plot '" + kind + "': report has no " + section + " section");
        return report.at(section);
    };
    std::string out;
    auto row = [&](std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) out += ',';
            out += c;
            first = false;
        }
        out += '\n';
    };
    auto num = [](const Json& v) { return csv_number(v.get<double>()); };
    auto idx = [](const Json& v) { return std::to_string(v.get<long long>()); };

    if (kind == "area") {
        row({"x", "area"});
        const Json& a = need("tent").at("area");
        for (std::size_t i = 0; i < a.size(); ++i) row({std::to_string(i), num(a[i])});
    } else if (kind == "levels") {
        row({"k", "atoms", "lambda_p_sum"});
        for (const auto& l : need("decompose").at("levels")) row({idx(l.at("k")), idx(l.at("atoms")), num(l.at("lambda_p_sum"))});
    } else if (kind == "lambda") {
        row({"index", "k", "j", "lambda"});
        std::size_t i = 0;
        for (const auto& l : need("decompose").at("lambdas"))
            row({std::to_string(i++), idx(l.at("k")), idx(l.at("j")), num(l.at("lambda"))});
    } else if (kind == "calderon") {
        row({"i", "lambda", "defect"});
        const Json& c = need("hardy").at("calderon");
        for (std::size_t i = 0; i < c.at("eigenvalues").size(); ++i)
            row({std::to_string(i), num(c.at("eigenvalues")[i]), num(c.at("defects")[i])});
    } else if (kind == "heat") {
        row({"t", "k", "c_inf", "c_fit"});
        for (const auto& r : need("hardy").at("heat").at("rows"))
            row({num(r.at("t")), idx(r.at("k")), num(r.at("c_inf")), num(r.at("c_fit"))});
    } else if (kind == "hardy_lambda") {
        row({"index", "k", "j", "lambda", "leak", "strict_slack"});
        std::size_t i = 0;
        for (const auto& a : need("hardy").at("atoms"))
            row({std::to_string(i++), idx(a.at("k")), idx(a.at("j")), num(a.at("lambda")), num(a.at("leak")),
                 num(a.at("strict_slack"))});
    } else {
        throw InvalidInput("unknown plot kind '" + kind + "'");
    }
    return out;
}

}  // namespace tentlab
