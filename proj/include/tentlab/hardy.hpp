#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "tentlab/decomp.hpp"
#include "tentlab/space.hpp"
#include "tentlab/tent.hpp"

namespace tentlab {

struct GraphSpec {
    enum class Kind { Path, Grid2d, Edges };
    Kind kind = Kind::Path;
    std::size_t rows = 0, cols = 0;  // Grid2d; points are row-major
    double weight = 1.0;             // Path / Grid2d edge weight
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;  // Edges
};

// L = mu^{-1} (D - W), self-adjoint for <f, g> = sum f g mu. Stored as
// L = U diag(lambda) U^T M with U^T M U = I.
class SpectralOperator {
public:
    static SpectralOperator build(const MetricMeasureSpace& space, const GraphSpec& graph);

    std::size_t size() const { return static_cast<std::size_t>(lambda_.size()); }
    const Eigen::VectorXd& eigenvalues() const { return lambda_; }
    const Eigen::MatrixXd& eigenvectors() const { return u_; }
    const Eigen::VectorXd& masses() const { return mass_; }
    const Eigen::MatrixXd& matrix() const { return l_; }
    double null_threshold() const { return null_tol_; }
    bool is_null(std::size_t i) const { return lambda_[static_cast<Eigen::Index>(i)] <= null_tol_; }

    /// Spectral coefficients c = U^T M f.
    Eigen::VectorXd coefficients(std::span<const double> f) const;
    std::vector<double> synthesize(const Eigen::VectorXd& c) const;

    /// g(L) f.
    std::vector<double> apply(const std::function<double(double)>& g, std::span<const double> f) const;
    /// L f by direct matrix product.
    std::vector<double> apply_matrix(std::span<const double> f) const;
    /// Kernel K with g(L) f(x) = sum_y K(x, y) f(y) mu_y.
    Eigen::MatrixXd kernel(const std::function<double(double)>& g) const;
    /// f minus its projection on the null space.
    std::vector<double> null_complement(std::span<const double> f) const;
    /// ||L - U Lambda U^T M|| / ||L||, Frobenius.
    double reconstruction_error() const;

private:
    Eigen::MatrixXd l_, u_;
    Eigen::VectorXd lambda_, mass_;
    double null_tol_ = 0.0;
};

struct HeatRow {
    double t = 0.0;
    int k = 0;
    double c_inf = 0.0;  // max |K| V(x, t)
    double c_fit = 0.0;  // smallest c with |K| V exp(d^2 / (c t^2)) <= 2 c_inf everywhere
};

struct HeatReport {
    std::vector<HeatRow> rows;
    double max_c_fit = 0.0;
    double max_row_sum_error = 0.0;  // max |sum_y e^{-t^2 L}(x, y) mu_y - 1|
};

/// Kernels of (t^2 L)^k e^{-t^2 L} for every grid t and k in {0, 1, M}.
HeatReport heat_diagnostics(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid, int M);

// phi(s) = exp(-1 / (1 - (c0 s)^2)) on |s| < 1/c0; Phi its Fourier transform;
// Psi(x) = x^{2 alpha} Phi(x)^3 with alpha = M + n + 1.
class CalculusFunctions {
public:
    double c0 = 1.0;
    int M = 1;
    int n = 1;
    double alpha = 3.0;
    double c_psi = 0.0;
    double normalizer_integral = 0.0;  // 1 / c_psi
    double normalizer_check = 0.0;     // the same at twice the resolution
    std::size_t resolution = 0;

    double phi(double s) const;
    double Phi(double xi) const;
    double Psi(double x) const;

    /// Scalar Calderón defect 1 - c_psi sum_m Psi(t_m r)(t_m r)^2 exp(-t_m^2 r^2) ln(ratio), r = sqrt(lambda).
    double calderon_defect(const TGrid& grid, double lambda) const;

private:
    friend CalculusFunctions bump_calculus(double, int, int, std::size_t);
    std::vector<double> nodes_, weights_;  // trapezoid on [0, 1] for Phi
};

/// Throws InvalidInput if the normalizer does not agree with its
/// doubled-resolution value to 1e-10 relative.
CalculusFunctions bump_calculus(double c0, int M, int n, std::size_t resolution = 512);

/// F(y, t_m) = (t_m^2 L) e^{-t_m^2 L} f (y).
TentFunction heat_tent(const SpectralOperator& op, const TGrid& grid, std::span<const double> f);

struct SquareFunctionReport {
    std::vector<double> values;     // S_L f
    double ls_ratio = 0.0;          // ||S_L f||_{L^s_w} / ||f||_{L^s_w}
    double l2_ratio = 0.0;          // ||S_L f||_2 / ||f_perp||_2
    double vertical_ratio = 0.0;    // (sum_m ln(ratio) ||F(., t_m)||_2^2)^{1/2} / ||f_perp||_2
    double kappa_grid = 0.0;        // (max_i sum_m ln(ratio) g_m(lambda_i)^2)^{1/2}, bound for vertical_ratio
};

SquareFunctionReport square_function_SL(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                                        std::span<const double> f, std::span<const double> w, double s);

/// g*(x)^2 = sum (t/(t+d(x,y)))^{n nu} |Psi(t sqrt L) f(y)|^2 mu_y ln(ratio) / V(x, t).
std::vector<double> gstar(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                          std::span<const double> f, double nu, const CalculusFunctions& calc);

/// sum_m Psi(t_m sqrt L) F(., t_m) ln(ratio).
std::vector<double> pi_psi(const SpectralOperator& op, const TentFunction& f, const CalculusFunctions& calc);

struct CalderonResult {
    std::vector<double> f_perp;
    std::vector<double> f_hat;
    double residual = 0.0;            // ||f_hat - f_perp||_2 / ||f_perp||_2 (mu norm); 0 when f_perp = 0
    std::vector<double> defects;      // per eigenvalue, 0 on the null space
    double predicted_residual = 0.0;  // from the defects and f's spectral coefficients
};

CalderonResult calderon_reconstruct(const SpectralOperator& op, const TGrid& grid, std::span<const double> f,
                                    const CalculusFunctions& calc);

struct HardyAtom {
    std::vector<double> a, b;
    BallSpec ball;  // three times the tent ball
    int M = 1;
};

struct HardyAtomReport {
    double identity_error = 0.0;        // ||a - L^M b||_2 / ||a||_2
    bool identity_pass = true;          // <= 1e-9
    std::vector<double> leak;           // per k: mass of |L^k b| outside B over ||L^k b||_1
    double max_leak = 0.0;
    bool support_pass = true;           // max_leak <= leak_tol
    double a_leak = 0.0;                // the same for a, reported only
    std::vector<double> norm_ratio;     // per k: ||(r^2 L)^k b||_{L^q_w} / (r^{2M} w(B)^{1/q - 1/p})
    double slack = 0.0;                 // max norm_ratio; (iii) holds iff <= 1
    bool norm_pass = true;              // slack <= 1 + 1e-9
    double q_lower = 0.0;               // downgrade exponent checked
    double slack_lower = 0.0;           // max ratio at q_lower
    bool downgrade_pass = true;         // slack_lower <= max(slack, 1) + 1e-9 when leak-free
    bool valid() const { return identity_pass && support_pass && norm_pass; }
};

/// q_lower = 0 skips the downgrade check.
HardyAtomReport validate_hardy_atom(const SpectralOperator& op, const MetricMeasureSpace& space, const HardyAtom& atom,
                                    double p, double q, std::span<const double> w, double leak_tol = 1e-8,
                                    double q_lower = 0.0);

/// b restricted to its ball, a recomputed as L^M b.
HardyAtom truncate_atom(const SpectralOperator& op, const MetricMeasureSpace& space, const HardyAtom& atom);

/// Divides a and b by hardy_norm_constant and returns it (0 leaves the atom unchanged).
double normalize_atom(const SpectralOperator& op, const MetricMeasureSpace& space, HardyAtom& atom, double p, double q,
                      std::span<const double> w);

/// max_k ||(r^2 L)^k b||_{L^q_w} / (r^{2M} w(B)^{1/q - 1/p}).
double hardy_norm_constant(const SpectralOperator& op, const MetricMeasureSpace& space, const HardyAtom& atom,
                           double p, double q, std::span<const double> w);

struct HardyParams {
    double p = 1.0;
    double q = 2.0;
    int M = 1;
    DecompParams tent;
    double leak_tol = 1e-8;
};

struct HardyEntry {
    double lambda = 0.0;
    HardyAtom atom;
    double harmless = 1.0;  // normalizing constant folded into lambda
    int k = 0;
    std::size_t j = 0;
};

struct HardyDecomposition {
    std::vector<HardyEntry> entries;
    std::vector<double> f_perp;
    std::vector<double> reconstruction;  // sum lambda a
    double residual = 0.0;               // ||reconstruction - f_perp||_2 / ||f_perp||_2
    double calderon_residual = 0.0;      // the same for the Calderón sum of the untouched tent function
    double lambda_p_sum = 0.0;
    double sl_norm_p = 0.0;              // ||S_L f||^p_{L^p_w}
    double ratio = 0.0;                  // lambda_p_sum / sl_norm_p
};

HardyDecomposition hardy_decompose(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                                   std::span<const double> f, std::span<const double> w, const CalculusFunctions& calc,
                                   const HardyParams& params);

struct SlAtomReport {
    bool ball_is_space = false;
    double i1 = 0.0;                // sum over 2B of S_L(a)^p w mu
    double i1_holder = 0.0;         // ||S_L a||_{L^q_w(2B)}^p w(2B)^{1 - p/q}, bounds i1
    double lemma43_ratio = 0.0;     // ||S_L a||_{L^q_w} / ||a||_{L^q_w}
    double i2 = 0.0;                // sum off 2B of S_L(a)^p w mu
    double j1 = 0.0;                // sum off 2B of J1^{p/2} w mu (t <= r_B part)
    double j2 = 0.0;                // the same for t > r_B
    double l1_ratio = 0.0;          // (||a||_1 + r^{-2M} ||b||_1) / (V(B) w(B)^{-1/p})
    double tail_integral = 0.0;     // sum off 2B of r^{Np} / (V(x, d)^p d^{Np}) w mu
    double tail_series = 0.0;       // sum_k 2^{-kNp} V(B)^{-p} (w(B)/w(2^k B))^{p/s} w(2^{k+1} B)
    double tail_ratio = 0.0;        // tail_integral / (V(B)^{-p} w(B))
    bool weight_inequality_pass = true;  // (V(B)/V(2^k B))^p <= [w]_{A_s}^{p/s} (w(B)/w(2^k B))^{p/s}
    double total = 0.0;             // i1 + i2 = ||S_L a||^p_{L^p_w}
};

SlAtomReport sl_on_atom_report(const SpectralOperator& op, const MetricMeasureSpace& space, const TGrid& grid,
                               const HardyAtom& atom, double p, double q, double s, std::span<const double> w,
                               double n_exp);

}  // namespace tentlab
