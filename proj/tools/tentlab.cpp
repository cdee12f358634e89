// tentlab command-line driver. Exit status: 0 ok, 1 invariant failure, 2 bad
// input or configuration.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tentlab/experiment.hpp"
#include "tentlab/hash.hpp"
#include "tentlab/weights.hpp"

using namespace tentlab;
namespace fs = std::filesystem;

namespace {

std::vector<double> load_weight(const std::string& path, const MetricMeasureSpace& space)
{
    if (path == "none" || path == "-") return {};
    return weight_from_json(read_json(path), space.size());
}

void emit(const Json& doc, const std::string& out)
{
    if (out.empty())
        std::cout << doc.dump(2) << "\n";
    else
        write_json(out, doc);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tentlab: tent-space and Hardy-space atomic decompositions on finite spaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    int status = 0;

    // space check
    auto* space_cmd = app.add_subcommand("space", "metric measure spaces")->require_subcommand(1);
    std::string space_path;
    auto* space_check = space_cmd->add_subcommand("check", "validate a space and print its doubling report");
    space_check->add_option("space", space_path)->required();
    space_check->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        const auto r = doubling_report(s);
        emit({{"points", s.size()},
              {"diameter", s.diameter()},
              {"c_doubling", r.c_doubling},
              {"n_exp", r.n_exp},
              {"d_exp", r.d_exp},
              {"witness_center", r.witness_center},
              {"witness_radius", r.witness_radius},
              {"space_hash", hex_digest(s.fingerprint())}},
             "");
    });

    // dyadic build / verify
    auto* dyadic_cmd = app.add_subcommand("dyadic", "dyadic cube systems")->require_subcommand(1);
    double delta = 1.0 / 16.0;
    std::string out, system_path;
    auto* dy_build = dyadic_cmd->add_subcommand("build", "build a nested cube system");
    dy_build->add_option("space", space_path)->required();
    dy_build->add_option("--delta", delta, "scale ratio, at most 1/12")->capture_default_str();
    dy_build->add_option("--out", out, "system JSON (stdout if omitted)");
    dy_build->callback([&] {
        if (!(delta > 0.0 && delta <= 1.0 / 12.0)) throw InvalidInput("--delta must lie in (0, 1/12]");
        const Json sdoc = read_json(space_path);
        const auto s = space_from_json(sdoc);
        Json doc = dyadic_to_json(build_dyadic_system(s, delta));
        doc["space"] = sdoc;  // keeps the system self-contained for verify
        emit(doc, out);
    });
    auto* dy_verify = dyadic_cmd->add_subcommand("verify", "check the six cube-system properties");
    dy_verify->add_option("system", system_path)->required();
    dy_verify->callback([&] {
        const Json doc = read_json(system_path);
        if (!doc.contains("space")) throw InvalidInput("system file carries no space; rebuild with dyadic build");
        const auto s = space_from_json(doc.at("space"));
        const auto r = verify_dyadic(s, dyadic_from_json(doc));
        emit(dyadic_report_to_json(r), "");
        if (!r.all_pass()) status = 1;
    });

    // weights ap
    auto* weights_cmd = app.add_subcommand("weights", "Muckenhoupt weights")->require_subcommand(1);
    std::string weight_path;
    double ap_p = 2.0;
    auto* w_ap = weights_cmd->add_subcommand("ap", "A_p constant of a weight");
    w_ap->add_option("space", space_path)->required();
    w_ap->add_option("weight", weight_path)->required();
    w_ap->add_option("--p", ap_p)->capture_default_str();
    w_ap->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        const auto w = weight_from_json(read_json(weight_path), s.size());
        emit({{"p", ap_p}, {"ap", ap_constant(s, w, ap_p)}}, "");
    });
    std::string kind = "power";
    std::uint64_t seed = 0;
    double target = 2.0;
    auto* w_gen = weights_cmd->add_subcommand("generate", "generate a weight");
    w_gen->add_option("space", space_path)->required();
    w_gen->add_option("--kind", kind, "constant | power | checkerboard | random-ap")->capture_default_str();
    w_gen->add_option("--p", ap_p, "class exponent for random-ap")->capture_default_str();
    w_gen->add_option("--target", target, "random-ap acceptance bound")->capture_default_str();
    w_gen->add_option("--seed", seed);
    w_gen->add_option("--out", out);
    w_gen->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        WeightParams wp;
        wp.p = ap_p;
        wp.target = target;
        const auto w = generate_weight(s, parse_weight_kind(kind), wp, seed);
        emit(Json(std::vector<double>(w.values().begin(), w.values().end())), out);
    });

    // tent norm / atom-check
    auto* tent_cmd = app.add_subcommand("tent", "tent-space functions")->require_subcommand(1);
    std::string tent_path;
    double tp = 0.5, tq = 2.0;
    auto* t_norm = tent_cmd->add_subcommand("norm", "weighted tent norm");
    t_norm->add_option("space", space_path)->required();
    t_norm->add_option("weight", weight_path, "weight file or 'none'")->required();
    t_norm->add_option("F", tent_path)->required();
    t_norm->add_option("--p", tp)->capture_default_str();
    t_norm->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        const auto w = load_weight(weight_path, s);
        const auto F = tent_from_json(read_json(tent_path), s.size());
        emit({{"p", tp}, {"norm", tent_norm(s, F, tp, w)}}, "");
    });
    std::size_t center = 0;
    double radius = 0.0;
    auto* t_atom = tent_cmd->add_subcommand("atom-check", "check the q-atom conditions for a ball");
    t_atom->add_option("space", space_path)->required();
    t_atom->add_option("weight", weight_path, "weight file or 'none'")->required();
    t_atom->add_option("F", tent_path)->required();
    t_atom->add_option("--center", center)->required();
    t_atom->add_option("--radius", radius)->required();
    t_atom->add_option("--p", tp)->capture_default_str();
    t_atom->add_option("--q", tq)->capture_default_str();
    t_atom->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        const auto w = load_weight(weight_path, s);
        const auto F = tent_from_json(read_json(tent_path), s.size());
        if (center >= s.size()) throw InvalidInput("--center out of range");
        const auto r = validate_q_atom(s, F, {center, radius}, tp, tq, w);
        emit({{"support_pass", r.support_pass},
              {"norm", r.norm},
              {"bound", r.bound},
              {"slack", r.slack},
              {"valid", r.valid()}},
             "");
        if (!r.valid()) status = 1;
    });

    // decompose
    std::string mode = "strict", report_path, plot_dir;
    double dp_p = 0.5, dp_q = 2.0, gamma = 0.5, kappa = 1.0, c1 = 0.0, dec_delta = 1.0 / 16.0;
    auto* dec = app.add_subcommand("decompose", "q-atomic decomposition of a tent function");
    dec->add_option("space", space_path)->required();
    dec->add_option("weight", weight_path, "weight file or 'none'")->required();
    dec->add_option("F", tent_path)->required();
    dec->add_option("--p", dp_p)->capture_default_str();
    dec->add_option("--q", dp_q)->capture_default_str();
    dec->add_option("--mode", mode, "strict | faithful")->capture_default_str();
    dec->add_option("--delta", dec_delta)->capture_default_str();
    dec->add_option("--gamma", gamma)->capture_default_str();
    dec->add_option("--kappa", kappa)->capture_default_str();
    dec->add_option("--c1", c1, "0 selects the default")->capture_default_str();
    std::string dec_out;
    dec->add_option("--out", dec_out, "decomposition JSON");
    dec->add_option("--report", report_path, "report JSON (stdout if omitted)");
    dec->add_option("--emit-plots", plot_dir, "directory for area and level CSV files");
    dec->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        const auto w = load_weight(weight_path, s);
        const auto F = tent_from_json(read_json(tent_path), s.size());
        DecompParams dp;
        dp.delta = dec_delta;
        dp.gamma = gamma;
        dp.kappa = kappa;
        dp.c1 = c1;
        dp.mode = parse_mode(mode);
        const auto d = decompose(s, F, dp_p, dp_q, w, dp);
        const auto cr = coefficient_report(s, d, F, w);
        std::string witness;
        const bool partition = regions_partition_support(d, F, &witness);
        Json rep = coefficient_report_to_json(cr);
        rep["version"] = kVersion;
        rep["space_hash"] = hex_digest(s.fingerprint());
        rep["atoms"] = d.entries.size();
        rep["partition_pass"] = partition;
        rep["tent"] = {{"area", area_functional(s, F)}};
        Json levels = Json::array(), lambdas = Json::array();
        for (const auto& l : d.levels) levels.push_back({{"k", l.k}, {"atoms", l.atoms}, {"lambda_p_sum", l.lambda_p_sum}});
        for (const auto& e : d.entries) lambdas.push_back({{"k", e.k}, {"j", e.j}, {"lambda", e.lambda}});
        rep["decompose"] = {{"levels", levels}, {"lambdas", lambdas}};
        if (!dec_out.empty()) write_json(dec_out, decomposition_to_json(d));
        emit(rep, report_path);
        if (!plot_dir.empty())
            for (const char* k : {"area", "levels", "lambda"})
                write_atomic(fs::path(plot_dir) / (std::string(k) + ".csv"), emit_plot_data(rep, k));
        if (!partition || !cr.converse_pass || cr.support_failures ||
            (dp.mode == DecompMode::Strict && cr.min_slack < 0.0))
            status = 1;
    });

    // hardy decompose / calderon
    auto* hardy_cmd = app.add_subcommand("hardy", "Hardy spaces of a graph operator")->require_subcommand(1);
    std::string graph_path, f_path;
    int hd_M = 2;
    double hp_p = 1.0, hp_q = 2.0, hd_c0 = 1.0, hd_c1 = 0.0;
    std::string hd_out;
    auto* h_dec = hardy_cmd->add_subcommand("decompose", "Hardy atoms of f");
    h_dec->add_option("space", space_path)->required();
    h_dec->add_option("graph", graph_path)->required();
    h_dec->add_option("weight", weight_path, "weight file or 'none'")->required();
    h_dec->add_option("f", f_path)->required();
    h_dec->add_option("--p", hp_p)->capture_default_str();
    h_dec->add_option("--q", hp_q)->capture_default_str();
    h_dec->add_option("--M", hd_M)->capture_default_str();
    h_dec->add_option("--c0", hd_c0, "bump support scale")->capture_default_str();
    h_dec->add_option("--c1", hd_c1, "0 selects the default")->capture_default_str();
    h_dec->add_option("--out", hd_out, "atoms JSON (stdout if omitted)");
    h_dec->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        if (s.size() > 2000) std::cerr << "warning: dense eigendecomposition of " << s.size() << " points\n";
        const auto op = SpectralOperator::build(s, graph_from_json(read_json(graph_path)));
        const auto w = load_weight(weight_path, s);
        const auto f = vector_from_json(read_json(f_path), s.size(), "f document");
        const int n = std::max(1, static_cast<int>(std::ceil(doubling_report(s).n_exp - 1e-9)));
        const auto calc = bump_calculus(hd_c0, hd_M, n);
        HardyParams hp;
        hp.p = hp_p;
        hp.q = hp_q;
        hp.M = hd_M;
        hp.tent.c1 = hd_c1;
        const auto grid = TGrid::defaults(s);
        const auto hd = hardy_decompose(op, s, grid, f, w, calc, hp);
        Json doc = hardy_to_json(hd);
        doc["version"] = kVersion;
        doc["space_hash"] = hex_digest(s.fingerprint());
        doc["grid"] = grid_to_json(grid);
        emit(doc, hd_out);
        if (hd.residual > hd.calderon_residual + 1e-9) status = 1;
    });
    bool sweep = false;
    double t_min = 0.0, t_max = 0.0;
    int M = 1;
    double c0 = 1.0;
    auto* h_cal = hardy_cmd->add_subcommand("calderon", "Calderón reproducing residual");
    h_cal->add_option("space", space_path)->required();
    h_cal->add_option("graph", graph_path)->required();
    h_cal->add_option("f", f_path, "vector file; omit with --sweep-grid");
    h_cal->add_option("--M", M)->capture_default_str();
    h_cal->add_option("--c0", c0)->capture_default_str();
    h_cal->add_option("--t-min", t_min, "0 uses the space default");
    h_cal->add_option("--t-max", t_max);
    h_cal->add_flag("--sweep-grid", sweep, "print (lambda, defect) CSV");
    h_cal->add_option("--out", out);
    h_cal->callback([&] {
        const auto s = space_from_json(read_json(space_path));
        const auto op = SpectralOperator::build(s, graph_from_json(read_json(graph_path)));
        const int n = std::max(1, static_cast<int>(std::ceil(doubling_report(s).n_exp - 1e-9)));
        const auto calc = bump_calculus(c0, M, n);
        TGrid grid = TGrid::defaults(s);
        if (t_min > 0.0) {
            grid.t_min = t_min;
            if (t_max > t_min)
                grid.count = static_cast<std::size_t>(std::floor(std::log(t_max / t_min) / grid.log_ratio() + 1e-9)) + 1;
        }
        if (sweep) {
            std::string csv = "i,lambda,defect\n";
            char buf[96];
            for (std::size_t i = 0; i < op.size(); ++i) {
                const double l = op.eigenvalues()[static_cast<Eigen::Index>(i)];
                std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, l, op.is_null(i) ? 0.0 : calc.calderon_defect(grid, l));
                csv += buf;
            }
            if (out.empty())
                std::cout << csv;
            else
                write_atomic(out, csv);
            return;
        }
        if (f_path.empty()) throw InvalidInput("calderon needs f or --sweep-grid");
        const auto f = vector_from_json(read_json(f_path), s.size(), "f document");
        const auto r = calderon_reconstruct(op, grid, f, calc);
        emit({{"residual", r.residual}, {"predicted", r.predicted_residual}, {"f_hat", r.f_hat}, {"grid", grid_to_json(grid)}},
             out);
    });

    // run
    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path)->required();
    run->add_option("--out-dir", out_dir, "overrides output.dir");
    run->callback([&] {
        Json doc;
        try {
            doc = read_json(config_path);
        } catch (const InvalidInput& e) {
            throw ConfigError(e.what());
        }
        auto cfg = ExperimentConfig::parse(doc, fs::path(config_path).parent_path());
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const auto r = run_experiment(cfg);
        for (const auto& f : r.failures) std::cerr << "FAIL " << f << "\n";
        std::cout << (cfg.out_dir / cfg.report_name).string() << "\n";
        status = r.exit_code;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return status;
}
