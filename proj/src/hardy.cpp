#include "tentlab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tentlab/parallel.hpp"
#include "tentlab/weights.hpp"

namespace tentlab {

namespace {

Eigen::VectorXd to_vector(std::span<const double> f)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) v[static_cast<Eigen::Index>(i)] = f[i];
    return v;
}

std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

double mu_norm2(const MetricMeasureSpace& space, std::span<const double> f)
{
    return lp_norm_weighted(space, f, {}, 2.0);
}

double weight_of(const MetricMeasureSpace& space, std::span<const double> w, const PointSet& s)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (s.contains(i)) acc += (w.empty() ? 1.0 : w[i]) * space.mass(i);
    return acc;
}

// Spectral coefficients of every column of a tent function: N x count.
Eigen::MatrixXd tent_coefficients(const SpectralOperator& op, const TentFunction& f)
{
    const auto n = static_cast<Eigen::Index>(f.points());
    const auto c = static_cast<Eigen::Index>(f.samples());
    Eigen::MatrixXd m(n, c);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < c; ++k)
            m(i, k) = f.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) * op.masses()[i];
    return op.eigenvectors().transpose() * m;
}

std::vector<double> l_power(const SpectralOperator& op, std::vector<double> v, int k)
{
    for (int j = 0; j < k; ++j) v = op.apply_matrix(v);
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpectralOperator

SpectralOperator SpectralOperator::build(const MetricMeasureSpace& space, const GraphSpec& graph)
{
    const std::size_t n = space.size();
    if (n == 0) throw InvalidInput("build_operator: empty space");
    std::map<std::pair<std::size_t, std::size_t>, double> directed;
    auto add = [&](std::size_t i, std::size_t j, double w) {
        if (i >= n || j >= n) throw InvalidInput("build_operator: edge endpoint out of range");
        if (i == j) throw InvalidInput("build_operator: self loop at " + std::to_string(i));
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("build_operator: negative or non-finite edge weight");
        directed[{i, j}] += w;
    };
    switch (graph.kind) {
    case GraphSpec::Kind::Path:
        for (std::size_t i = 0; i + 1 < n; ++i) add(i, i + 1, graph.weight);
        break;
    case GraphSpec::Kind::Grid2d:
        if (graph.rows * graph.cols != n) throw InvalidInput("build_operator: grid2d shape does not match the space");
        for (std::size_t r = 0; r < graph.rows; ++r)
            for (std::size_t c = 0; c < graph.cols; ++c) {
                const std::size_t i = r * graph.cols + c;
                if (c + 1 < graph.cols) add(i, i + 1, graph.weight);
                if (r + 1 < graph.rows) add(i, i + graph.cols, graph.weight);
            }
        break;
    case GraphSpec::Kind::Edges:
        for (const auto& [i, j, w] : graph.edges) add(i, j, w);
        break;
    }

    // One orientation given means undirected; both given must agree.
    Eigen::MatrixXd wmat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& [key, w] : directed) {
        const auto [i, j] = key;
        const auto rev = directed.find({j, i});
        if (rev != directed.end() && rev->second != w)
            throw InvalidInput("build_operator: asymmetric weights on edge " + std::to_string(i) + "-" +
                               std::to_string(j));
        wmat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
        wmat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = w;
    }

    SpectralOperator op;
    const auto N = static_cast<Eigen::Index>(n);
    op.mass_ = to_vector(space.masses());
    Eigen::MatrixXd lap = -wmat;
    for (Eigen::Index i = 0; i < N; ++i) lap(i, i) = wmat.row(i).sum();
    op.l_ = op.mass_.cwiseInverse().asDiagonal() * lap;

    const Eigen::VectorXd rs = op.mass_.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd sym = rs.asDiagonal() * lap * rs.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw InvalidInput("build_operator: eigendecomposition failed");
    op.lambda_ = es.eigenvalues();
    op.u_ = rs.asDiagonal() * es.eigenvectors();
    const double lmax = std::max(0.0, op.lambda_.maxCoeff());
    op.null_tol_ = 1e-10 * std::max(1.0, lmax);
    for (Eigen::Index i = 0; i < N; ++i)
        if (op.lambda_[i] < -op.null_tol_)
            throw InvalidInput("build_operator: eigenvalue " + std::to_string(op.lambda_[i]) + " below -1e-10");
        else if (op.lambda_[i] <= op.null_tol_)
            op.lambda_[i] = 0.0;
    return op;
}

Eigen::VectorXd SpectralOperator::coefficients(std::span<const double> f) const
{
    if (f.size() != size()) throw InvalidInput("spectral_apply: vector does not match the operator");
    return u_.transpose() * mass_.cwiseProduct(to_vector(f));
}

std::vector<double> SpectralOperator::synthesize(const Eigen::VectorXd& c) const { return to_std(u_ * c); }

std::vector<double> SpectralOperator::apply(const std::function<double(double)>& g, std::span<const double> f) const
{
    Eigen::VectorXd c = coefficients(f);
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= g(lambda_[i]);
    return synthesize(c);
}

std::vector<double> SpectralOperator::apply_matrix(std::span<const double> f) const
{
    if (f.size() != size()) throw InvalidInput("apply_matrix: vector does not match the operator");
    return to_std(l_ * to_vector(f));
}

Eigen::MatrixXd SpectralOperator::kernel(const std::function<double(double)>& g) const
{
    Eigen::VectorXd d(lambda_.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = g(lambda_[i]);
    return u_ * d.asDiagonal() * u_.transpose();
}

std::vector<double> SpectralOperator::null_complement(std::span<const double> f) const
{
    Eigen::VectorXd c = coefficients(f);
    Eigen::VectorXd v = to_vector(f);
    for (Eigen::Index i = 0; i < c.size(); ++i)
        if (lambda_[i] == 0.0) v -= c[i] * u_.col(i);
    // What survives at rounding level of f is null-space content, not signal.
    const Eigen::VectorXd m = mass_.cwiseSqrt();
    if ((v.cwiseProduct(m)).norm() <= 1e-13 * (to_vector(f).cwiseProduct(m)).norm()) v.setZero();
    return to_std(v);
}

double SpectralOperator::reconstruction_error() const
{
    const Eigen::MatrixXd r = u_ * lambda_.asDiagonal() * u_.transpose() * mass_.asDiagonal();
    const double nl = l_.norm();
    return nl > 0.0 ? (l_ - r).norm() / nl : (l_ - r).norm();
}

// ---------------------------------------------------------------------------
// Heat kernel diagnostics

HeatReport heat_diagnostics(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid, int M)
{
    grid.validate();
    if (M < 0) throw InvalidInput("heat_diagnostics: M must be nonnegative");
    const std::size_t n = space.size();
    std::vector<int> ks{0, 1};
    if (M > 1) ks.push_back(M);
    std::vector<HeatRow> rows(grid.count * ks.size());
    std::vector<double> row_err(grid.count, 0.0);
    parallel_for(grid.count, [&](std::size_t m) {
        const double t = grid.t(m);
        std::vector<double> vol(n);
        for (std::size_t x = 0; x < n; ++x) vol[x] = space.volume(x, t);
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            const int k = ks[ki];
            const Eigen::MatrixXd K = op.kernel([&](double l) {
                const double s = t * t * l;
                return std::pow(s, k) * std::exp(-s);
            });
            HeatRow row;
            row.t = t;
            row.k = k;
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    row.c_inf = std::max(row.c_inf, std::abs(K(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y))) * vol[x]);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y) {
                    const double v = std::abs(K(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y))) * vol[x];
                    const double d = space.distance(x, y);
                    if (v == 0.0 || d == 0.0) continue;
                    const double c = d * d / (t * t * std::log(2.0 * row.c_inf / v));
                    row.c_fit = std::max(row.c_fit, c);
                }
            if (k == 0)
                for (std::size_t x = 0; x < n; ++x) {
                    double s = 0.0;
                    for (std::size_t y = 0; y < n; ++y) s += K(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) * space.mass(y);
                    row_err[m] = std::max(row_err[m], std::abs(s - 1.0));
                }
            rows[m * ks.size() + ki] = row;
        }
    });
    HeatReport r;
    r.rows = std::move(rows);
    for (const auto& row : r.rows) r.max_c_fit = std::max(r.max_c_fit, row.c_fit);
    for (double e : row_err) r.max_row_sum_error = std::max(r.max_row_sum_error, e);
    return r;
}

// ---------------------------------------------------------------------------
// Bump calculus

double CalculusFunctions::phi(double s) const
{
    const double u = c0 * s;
    if (!(std::abs(u) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

double CalculusFunctions::Phi(double xi) const
{
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) acc += weights_[j] * std::cos(xi * nodes_[j] / c0);
    return 2.0 / c0 * acc;
}

double CalculusFunctions::Psi(double x) const
{
    const double p = Phi(x);
    return std::pow(x, 2.0 * alpha) * p * p * p;
}

double CalculusFunctions::calderon_defect(const TGrid& grid, double lambda) const
{
    if (lambda <= 0.0) return 0.0;
    const double r = std::sqrt(lambda);
    double acc = 0.0;
    for (std::size_t m = 0; m < grid.count; ++m) {
        const double x = grid.t(m) * r;
        acc += Psi(x) * x * x * std::exp(-x * x);
    }
    return 1.0 - c_psi * acc * grid.log_ratio();
}

namespace {

// Trapezoid rule for the even bump on [0, 1]; the end node carries zero.
void bump_rule(std::size_t res, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.resize(res + 1);
    weights.resize(res + 1);
    const double h = 1.0 / static_cast<double>(res);
    for (std::size_t j = 0; j <= res; ++j) {
        const double s = static_cast<double>(j) * h;
        nodes[j] = s;
        weights[j] = (j < res ? std::exp(-1.0 / (1.0 - s * s)) : 0.0) * (j == 0 ? 0.5 * h : h);
    }
}

// int_0^inf Psi(s) s^2 e^{-s^2} ds / s in u = ln s; the integrand is smooth and
// decays at both ends, so the trapezoid rule converges spectrally.
double normalizer(const CalculusFunctions& c, std::size_t nodes)
{
    const double lo = -40.0 / (2.0 * c.alpha + 2.0), hi = 4.0;
    const double h = (hi - lo) / static_cast<double>(nodes);
    double acc = 0.0;
    for (std::size_t j = 0; j <= nodes; ++j) {
        const double x = std::exp(lo + static_cast<double>(j) * h);
        const double v = c.Psi(x) * x * x * std::exp(-x * x);
        acc += (j == 0 || j == nodes) ? 0.5 * v : v;
    }
    return acc * h;
}

}  // namespace

CalculusFunctions bump_calculus(double c0, int M, int n, std::size_t resolution)
{
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw InvalidInput("bump_calculus: c0 must be positive");
    if (M < 0 || n < 1) throw InvalidInput("bump_calculus: need M >= 0 and n >= 1");
    if (resolution < 16) throw InvalidInput("bump_calculus: resolution below 16");
    CalculusFunctions c;
    c.c0 = c0;
    c.M = M;
    c.n = n;
    c.alpha = static_cast<double>(M + n + 1);
    c.resolution = resolution;

    CalculusFunctions fine = c;
    bump_rule(2 * resolution, fine.nodes_, fine.weights_);
    bump_rule(resolution, c.nodes_, c.weights_);
    c.normalizer_integral = normalizer(c, 2 * resolution);
    c.normalizer_check = normalizer(fine, 4 * resolution);
    if (!(c.normalizer_integral > 0.0) ||
        std::abs(c.normalizer_integral - c.normalizer_check) > 1e-10 * std::abs(c.normalizer_check))
        throw InvalidInput("bump_calculus: quadrature did not stabilize at resolution " + std::to_string(resolution));
    c.c_psi = 1.0 / c.normalizer_integral;
    return c;
}

// ---------------------------------------------------------------------------
// Square functions and the Calderón formula

TentFunction heat_tent(const SpectralOperator& op, const TGrid& grid, std::span<const double> f)
{
    grid.validate();
    const Eigen::VectorXd c = op.coefficients(f);
    const auto N = static_cast<Eigen::Index>(op.size());
    const auto C = static_cast<Eigen::Index>(grid.count);
    Eigen::MatrixXd spec(N, C);
    for (Eigen::Index m = 0; m < C; ++m) {
        const double t = grid.t(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < N; ++i) {
            const double s = t * t * op.eigenvalues()[i];
            spec(i, m) = s * std::exp(-s) * c[i];
        }
    }
    const Eigen::MatrixXd vals = op.eigenvectors() * spec;
    TentFunction F(op.size(), grid);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index m = 0; m < C; ++m) F.at(static_cast<std::size_t>(i), static_cast<std::size_t>(m)) = vals(i, m);
    return F;
}

SquareFunctionReport square_function_SL(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                                        std::span<const double> f, std::span<const double> w, double s)
{
    if (!(s > 0.0)) throw InvalidInput("square_function_SL: exponent must be positive");
    SquareFunctionReport r;
    const TentFunction F = heat_tent(op, grid, f);
    r.values = area_functional(space, F);
    const double fs = lp_norm_weighted(space, f, w, s);
    r.ls_ratio = fs > 0.0 ? lp_norm_weighted(space, r.values, w, s) / fs : 0.0;

    const auto fp = op.null_complement(f);
    const double f2 = mu_norm2(space, fp);
    const double lr = grid.log_ratio();
    double vert = 0.0;
    for (std::size_t y = 0; y < space.size(); ++y)
        for (std::size_t m = 0; m < grid.count; ++m) vert += F.at(y, m) * F.at(y, m) * space.mass(y) * lr;
    if (f2 > 0.0) {
        r.l2_ratio = mu_norm2(space, r.values) / f2;
        r.vertical_ratio = std::sqrt(vert) / f2;
    }
    for (Eigen::Index i = 0; i < op.eigenvalues().size(); ++i) {
        double acc = 0.0;
        for (std::size_t m = 0; m < grid.count; ++m) {
            const double x = grid.t(m) * grid.t(m) * op.eigenvalues()[i];
            acc += x * x * std::exp(-2.0 * x) * lr;
        }
        r.kappa_grid = std::max(r.kappa_grid, acc);
    }
    r.kappa_grid = std::sqrt(r.kappa_grid);
    return r;
}

std::vector<double> gstar(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                          std::span<const double> f, double nu, const CalculusFunctions& calc)
{
    if (!(nu > 1.0)) throw InvalidInput("gstar: nu must exceed 1");
    grid.validate();
    const std::size_t n = space.size();
    const Eigen::VectorXd c = op.coefficients(f);
    std::vector<std::vector<double>> g(grid.count);
    for (std::size_t m = 0; m < grid.count; ++m) {
        Eigen::VectorXd cm = c;
        for (Eigen::Index i = 0; i < cm.size(); ++i) cm[i] *= calc.Psi(grid.t(m) * std::sqrt(op.eigenvalues()[i]));
        g[m] = op.synthesize(cm);
    }
    const double e = static_cast<double>(calc.n) * nu;
    const double lr = grid.log_ratio();
    std::vector<double> out(n);
    parallel_for(n, [&](std::size_t x) {
        double acc = 0.0;
        for (std::size_t m = 0; m < grid.count; ++m) {
            const double t = grid.t(m);
            double s = 0.0;
            for (std::size_t y = 0; y < n; ++y)
                s += std::pow(t / (t + space.distance(x, y)), e) * g[m][y] * g[m][y] * space.mass(y);
            acc += s * lr / space.volume(x, t);
        }
        out[x] = std::sqrt(acc);
    });
    return out;
}

std::vector<double> pi_psi(const SpectralOperator& op, const TentFunction& f, const CalculusFunctions& calc)
{
    if (f.points() != op.size()) throw InvalidInput("pi_psi: tent function does not match the operator");
    const TGrid& g = f.grid();
    const Eigen::MatrixXd C = tent_coefficients(op, f);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(C.rows());
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        const double r = std::sqrt(op.eigenvalues()[i]);
        for (Eigen::Index m = 0; m < C.cols(); ++m) v[i] += calc.Psi(g.t(static_cast<std::size_t>(m)) * r) * C(i, m);
    }
    return op.synthesize(v * g.log_ratio());
}

CalderonResult calderon_reconstruct(const SpectralOperator& op, const TGrid& grid, std::span<const double> f,
                                    const CalculusFunctions& calc)
{
    CalderonResult r;
    r.f_perp = op.null_complement(f);
    const TentFunction F = heat_tent(op, grid, r.f_perp);
    r.f_hat = pi_psi(op, F, calc);
    for (double& v : r.f_hat) v *= calc.c_psi;

    const Eigen::VectorXd c = op.coefficients(r.f_perp);
    double num = 0.0, den = 0.0, diff = 0.0;
    r.defects.resize(op.size());
    for (std::size_t i = 0; i < op.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        r.defects[i] = op.is_null(i) ? 0.0 : calc.calderon_defect(grid, op.eigenvalues()[ii]);
        if (op.is_null(i)) continue;
        num += r.defects[i] * r.defects[i] * c[ii] * c[ii];
        den += c[ii] * c[ii];
    }
    for (std::size_t x = 0; x < op.size(); ++x) {
        const double d = r.f_hat[x] - r.f_perp[x];
        diff += d * d * op.masses()[static_cast<Eigen::Index>(x)];
    }
    if (den > 0.0) {
        r.predicted_residual = std::sqrt(num / den);
        r.residual = std::sqrt(diff) / std::sqrt(den);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Hardy atoms

namespace {

struct NormParts {
    std::vector<double> full, inside;  // per k
};

NormParts hardy_norms(const SpectralOperator& op, const MetricMeasureSpace& space, const HardyAtom& atom, double p,
                      double q, std::span<const double> w)
{
    const PointSet ball = space.ball(atom.ball.center, atom.ball.radius);
    const double r = atom.ball.radius;
    const double bound = std::pow(r, 2.0 * atom.M) * std::pow(weight_of(space, w, ball), 1.0 / q - 1.0 / p);
    NormParts out;
    std::vector<double> v = atom.b;
    for (int k = 0; k <= atom.M; ++k) {
        if (k > 0) {
            v = op.apply_matrix(v);
            for (double& x : v) x *= r * r;
        }
        std::vector<double> in(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (ball.contains(i)) in[i] = v[i];
        out.full.push_back(lp_norm_weighted(space, v, w, q) / bound);
        out.inside.push_back(lp_norm_weighted(space, in, w, q) / bound);
    }
    return out;
}

}  // namespace

double hardy_norm_constant(const SpectralOperator& op, const MetricMeasureSpace& space, const HardyAtom& atom,
                           double p, double q, std::span<const double> w)
{
    const auto parts = hardy_norms(op, space, atom, p, q, w);
    return *std::max_element(parts.full.begin(), parts.full.end());
}

HardyAtomReport validate_hardy_atom(const SpectralOperator& op, const MetricMeasureSpace& space, const HardyAtom& atom,
                                    double p, double q, std::span<const double> w, double leak_tol, double q_lower)
{
    if (atom.a.size() != space.size() || atom.b.size() != space.size())
        throw InvalidInput("validate_hardy_atom: atom does not match the space");
    HardyAtomReport r;
    const PointSet ball = space.ball(atom.ball.center, atom.ball.radius);

    const auto lmb = l_power(op, atom.b, atom.M);
    std::vector<double> diff(lmb.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = atom.a[i] - lmb[i];
    const double an = mu_norm2(space, atom.a);
    r.identity_error = an > 0.0 ? mu_norm2(space, diff) / an : mu_norm2(space, diff);
    r.identity_pass = r.identity_error <= 1e-9;

    auto leak_of = [&](const std::vector<double>& v) {
        double out = 0.0, tot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double m = std::abs(v[i]) * space.mass(i);
            tot += m;
            if (!ball.contains(i)) out += m;
        }
        return tot > 0.0 ? out / tot : 0.0;
    };
    std::vector<double> v = atom.b;
    for (int k = 0; k <= atom.M; ++k) {
        if (k > 0) v = op.apply_matrix(v);
        r.leak.push_back(leak_of(v));
        r.max_leak = std::max(r.max_leak, r.leak.back());
    }
    r.support_pass = r.max_leak <= leak_tol;
    r.a_leak = leak_of(atom.a);

    const auto parts = hardy_norms(op, space, atom, p, q, w);
    r.norm_ratio = parts.full;
    r.slack = *std::max_element(parts.full.begin(), parts.full.end());
    r.norm_pass = r.slack <= 1.0 + 1e-9;

    if (q_lower > 0.0) {
        if (!(q_lower < q)) throw InvalidInput("validate_hardy_atom: downgrade exponent must be below q");
        r.q_lower = q_lower;
        const auto low = hardy_norms(op, space, atom, p, q_lower, w);
        r.slack_lower = *std::max_element(low.full.begin(), low.full.end());
        // Hölder on B: the ball-restricted ratio cannot grow as q decreases.
        for (std::size_t k = 0; k < low.inside.size(); ++k)
            if (low.inside[k] > parts.inside[k] * (1.0 + 1e-12)) r.downgrade_pass = false;
    }
    return r;
}

HardyAtom truncate_atom(const SpectralOperator& op, const MetricMeasureSpace& space, const HardyAtom& atom)
{
    HardyAtom out = atom;
    const PointSet ball = space.ball(atom.ball.center, atom.ball.radius);
    for (std::size_t i = 0; i < out.b.size(); ++i)
        if (!ball.contains(i)) out.b[i] = 0.0;
    out.a = l_power(op, out.b, out.M);
    return out;
}

double normalize_atom(const SpectralOperator& op, const MetricMeasureSpace& space, HardyAtom& atom, double p, double q,
                      std::span<const double> w)
{
    const double c = hardy_norm_constant(op, space, atom, p, q, w);
    if (c > 0.0) {
        for (double& v : atom.a) v /= c;
        for (double& v : atom.b) v /= c;
    }
    return c;
}

HardyDecomposition hardy_decompose(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                                   std::span<const double> f, std::span<const double> w, const CalculusFunctions& calc,
                                   const HardyParams& params)
{
    if (params.M != calc.M) throw InvalidInput("hardy_decompose: M differs from the calculus order");
    if (op.size() != space.size() || f.size() != space.size())
        throw InvalidInput("hardy_decompose: sizes of space, operator and f differ");
    HardyDecomposition out;
    out.f_perp = op.null_complement(f);
    out.reconstruction.assign(space.size(), 0.0);
    const TentFunction F = heat_tent(op, grid, out.f_perp);
    out.sl_norm_p = std::pow(tent_norm(space, F, params.p, w), params.p);

    const CalderonResult cal = calderon_reconstruct(op, grid, f, calc);
    out.calderon_residual = cal.residual;

    const AtomicDecomposition d = decompose(space, F, params.p, params.q, w, params.tent);

    // b multiplier per (eigenvalue, sample): c_Psi t^{2 alpha} lambda^{n+1} Phi(t sqrt lambda)^3 ln(ratio).
    const auto N = static_cast<Eigen::Index>(op.size());
    const auto C = static_cast<Eigen::Index>(grid.count);
    Eigen::MatrixXd mult(N, C);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double l = op.eigenvalues()[i];
        for (Eigen::Index m = 0; m < C; ++m) {
            const double t = grid.t(static_cast<std::size_t>(m));
            const double ph = calc.Phi(t * std::sqrt(l));
            mult(i, m) = l == 0.0 ? 0.0
                                  : calc.c_psi * std::pow(t, 2.0 * calc.alpha) * std::pow(l, calc.n + 1) * ph * ph * ph *
                                        grid.log_ratio();
        }
    }
    Eigen::VectorXd lm(N);
    for (Eigen::Index i = 0; i < N; ++i) lm[i] = std::pow(op.eigenvalues()[i], params.M);

    for (const auto& e : d.entries) {
        const Eigen::MatrixXd coef = tent_coefficients(op, e.atom);
        const Eigen::VectorXd bh = mult.cwiseProduct(coef).rowwise().sum();
        HardyEntry h;
        h.k = e.k;
        h.j = e.j;
        h.atom.M = params.M;
        h.atom.ball = {e.ball.center, 3.0 * e.ball.radius};
        h.atom.b = op.synthesize(bh);
        h.atom.a = op.synthesize(lm.cwiseProduct(bh));
        h.harmless = normalize_atom(op, space, h.atom, params.p, params.q, w);
        h.lambda = e.lambda * (h.harmless > 0.0 ? h.harmless : 1.0);
        for (std::size_t x = 0; x < space.size(); ++x) out.reconstruction[x] += h.lambda * h.atom.a[x];
        out.lambda_p_sum += std::pow(std::abs(h.lambda), params.p);
        out.entries.push_back(std::move(h));
    }

    std::vector<double> diff(space.size());
    for (std::size_t x = 0; x < diff.size(); ++x) diff[x] = out.reconstruction[x] - out.f_perp[x];
    const double fn = mu_norm2(space, out.f_perp);
    out.residual = fn > 0.0 ? mu_norm2(space, diff) / fn : 0.0;
    out.ratio = out.sl_norm_p > 0.0 ? out.lambda_p_sum / out.sl_norm_p : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// S_L on one atom

SlAtomReport sl_on_atom_report(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                               const HardyAtom& atom, double p, double q, double s, std::span<const double> w,
                               double n_exp)
{
    if (!(p > 0.0 && p <= 1.0 && q > 1.0 && s >= 1.0 && n_exp > 0.0))
        throw InvalidInput("sl_on_atom_report: need 0 < p <= 1 < q, s >= 1 and N > 0");
    const std::size_t n = space.size();
    const std::size_t xb = atom.ball.center;
    const double r = atom.ball.radius;
    const PointSet B = space.ball(xb, r);
    const PointSet B2 = space.ball(xb, 2.0 * r);
    auto wt = [&](std::size_t i) { return (w.empty() ? 1.0 : w[i]) * space.mass(i); };

    SlAtomReport rep;
    rep.ball_is_space = B2.full();
    const TentFunction F = heat_tent(op, grid, atom.a);
    const auto S = area_functional(space, F);

    double i1q = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        const double v = std::pow(S[x], p) * wt(x);
        if (B2.contains(x)) {
            rep.i1 += v;
            i1q += std::pow(S[x], q) * wt(x);
        } else {
            rep.i2 += v;
        }
    }
    rep.i1_holder = std::pow(i1q, p / q) * std::pow(weight_of(space, w, B2), 1.0 - p / q);
    const double aq = lp_norm_weighted(space, atom.a, w, q);
    rep.lemma43_ratio = aq > 0.0 ? lp_norm_weighted(space, S, w, q) / aq : 0.0;
    rep.total = rep.i1 + rep.i2;

    const double lr = grid.log_ratio();
    const double wB = weight_of(space, w, B);
    const double VB = space.measure(B);
    for (std::size_t x = 0; x < n; ++x) {
        if (B2.contains(x)) continue;
        const auto ord = space.order(x);
        const auto pre = space.prefix_mass(x);
        double j1 = 0.0, j2 = 0.0;
        for (std::size_t m = 0; m < grid.count; ++m) {
            const double t = grid.t(m);
            const std::size_t cnt = space.ball_count(x, t);
            double acc = 0.0;
            for (std::size_t k = 0; k < cnt; ++k) acc += F.at(ord[k], m) * F.at(ord[k], m) * space.mass(ord[k]);
            (t < r ? j1 : j2) += acc * lr / pre[cnt];
        }
        rep.j1 += std::pow(j1, p / 2.0) * wt(x);
        rep.j2 += std::pow(j2, p / 2.0) * wt(x);
        const double d = space.distance(x, xb);
        rep.tail_integral += std::pow(r / d, n_exp * p) * std::pow(space.volume(x, d), -p) * wt(x);
    }

    double l1a = 0.0, l1b = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        l1a += std::abs(atom.a[x]) * space.mass(x);
        l1b += std::abs(atom.b[x]) * space.mass(x);
    }
    if (VB > 0.0 && wB > 0.0) {
        rep.l1_ratio = (l1a + std::pow(r, -2.0 * atom.M) * l1b) / (VB * std::pow(wB, -1.0 / p));
        rep.tail_ratio = rep.tail_integral / (std::pow(VB, -p) * wB);
    }

    // Dyadic dilates 2^k B up to the first one covering X.
    const double as = w.empty() ? 1.0 : ap_constant(space, w, s);
    for (int k = 1; !rep.ball_is_space; ++k) {
        const PointSet Bk = space.ball(xb, std::ldexp(r, k));
        const PointSet Bk1 = space.ball(xb, std::ldexp(r, k + 1));
        const double Vk = space.measure(Bk), wk = weight_of(space, w, Bk);
        const double lhs = std::pow(VB / Vk, p);
        const double rhs = std::pow(as, p / s) * std::pow(wB / wk, p / s);
        if (lhs > rhs * (1.0 + 1e-12)) rep.weight_inequality_pass = false;
        rep.tail_series += std::pow(2.0, -k * n_exp * p) * std::pow(VB, -p) *
                           std::pow(wB / wk, p / s) * weight_of(space, w, Bk1);
        if (Bk.full()) break;
    }
    return rep;
}

}  // namespace tentlab
