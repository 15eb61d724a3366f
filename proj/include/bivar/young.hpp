#ifndef BIVAR_YOUNG_HPP
#define BIVAR_YOUNG_HPP

#include <optional>
#include <string>

#include "bivar/partitions.hpp"

// 1D/2D Young integrals as limits of step-function Riemann-Stieltjes sums
// along dyadic refinement chains, the telescoping identity connecting
// successive chain sums, and the maximal-inequality bounds.

namespace bivar {

// Riemann zeta, s > 1: partial sum to N = 1e5 plus the integral tail
// N^{1-s}/(s-1); absolute error below N^{-s}
double zeta(double s);

// power-law modulus family: lambda(u) = C_l u^{1/pt}, mu(u) = C_m u^{1/qt},
// rho(u) = u^alpha, sigma(u) = u^{1-alpha} (so rho * sigma = id holds)
struct ControlModulus {
    double c_lambda, p_tilde;
    double c_mu, q_tilde;
    double alpha;

    ControlModulus(double cl, double pt, double cm, double qt, double a);

    double lambda(double u) const;
    double mu(double u) const;
    double rho(double u) const;
    double sigma(double u) const;
    // constant for the rectangle increment bound |DDG| <= C |dx|^{1/pt}|dy|^{1/qt}
    double holder_constant() const { return c_lambda * c_mu; }
};

struct IntegralResult {
    double value = 0.0;
    std::size_t depth_x = 0, depth_y = 0;  // last refinement level evaluated
    double last_delta = 0.0;
    bool converged = false;
};

// uniform 2^n + 1 point grid on [a,b]; nested across n (even points of level
// n+1 are exactly level n) and bitwise equal to linspace(a, b, 2^n + 1)
std::vector<double> dyadic_grid(double a, double b, std::size_t n);

// sum_i f(xi_i) (g(x_i) - g(x_{i-1})) over the step's cells
double rs_sum_1d(const StepFunction1D& step, const SampledFunction1D& g);

// midpoint-tagged sums along the dyadic chain; converges at the first level
// whose sum is within tol of the previous one
IntegralResult young_1d(const SampledFunction1D& f, const SampledFunction1D& g, double tol = 1e-9,
                        std::size_t max_depth = 14);

// (1 + zeta(1/p + 1/q)) [|f(a)| + ||f||_p] ||g||_q ; needs 1/p + 1/q > 1
double young_bound_1d(const SampledFunction1D& f, const SampledFunction1D& g, double p, double q);

// sum_{i,j} F(xi_i, eta_j) DDG(x_i, y_j) over partition cells
double step_integral_2d(const StepFunction2D& stepF, const SampledFunction2D& G);

// S_{n,n'} = sum_{i,j} F(t_i, s_j) DDG(t_i, s_j) over level-n x level-n'
// chain cells (right-endpoint evaluation of F)
double chain_sum_2d(const SampledFunction2D& F, const SampledFunction2D& G,
                    const RefinementChain& cx, const RefinementChain& cy, std::size_t n,
                    std::size_t nprime);

// closed form for DDS_{n,n'} := S_{n,n'} - S_{n-1,n'} - S_{n,n'-1} + S_{n-1,n'-1}:
//   sum_{i=1}^{2^{n-1}} sum_{j=1}^{2^{n'-1}} DDF(t_{2i-1}->t_{2i}, s_{2j-1}->s_{2j})
//                                          * DDG(t_{2i-2}->t_{2i-1}, s_{2j-2}->s_{2j-1})
// with all points taken from chain levels n and n'
double telescope_delta(const SampledFunction2D& F, const SampledFunction2D& G,
                       const RefinementChain& cx, const RefinementChain& cy, std::size_t n,
                       std::size_t nprime);

// midpoint-tagged joint dyadic refinement; stops when |DDS| + both marginal
// increments stay below tol for two successive joint levels. Warns on stderr
// when F does not vanish on the low edges x=a, y=c (existence hypothesis).
IntegralResult young_2d(const SampledFunction2D& F, const SampledFunction2D& G, double tol = 1e-9,
                        std::size_t max_depth = 14);

// the three-term maximal bound assembled from bivariation norms.
// rhs_scaled uses modulus arguments 4(b-a)/m and 4(d-c)/m'; rhs_literal uses
// the bare 4/m and 4/m'. Closed form rhs_powerlaw multiplies the zeta-based
// constants by holder_constant(). Throws hypothesis_error when an exponent
// condition fails (series divergent), naming the condition.
struct MainBoundResult {
    double rhs_scaled = 0.0, tail_scaled = 0.0;
    double rhs_literal = 0.0, tail_literal = 0.0;
    double rhs_powerlaw = 0.0;
    double K = 16.0, K1 = 16.0, K2 = 16.0;  // absolute constants of the series form
    double Kc = 0.0, K1c = 0.0, K2c = 0.0;  // assembled closed-form constants
};

MainBoundResult main_bound(double norm1p, double norm2q, double p, double q,
                           const ControlModulus& mod, double a, double b, double c, double d,
                           std::size_t series_terms = 100000);

// general-modulus variant for user-tabulated values: vectors hold, for
// m = 1..N, lambda(4(b-a)/m), mu(4(d-c)/m'), rho(norm1p/m^{1/p}) and
// sigma(norm2q/m'^{1/q}). No decay model is assumed, so the reported
// tail_cap is the heuristic last-term x N cap, never silently dropped.
struct TabulatedBound {
    double rhs = 0.0;
    double tail_cap = 0.0;
};

TabulatedBound main_bound_tabulated(double norm1p, double norm2q, double p, double q,
                                    const std::vector<double>& lambda_vals,
                                    const std::vector<double>& mu_vals,
                                    const std::vector<double>& rho_vals,
                                    const std::vector<double>& sigma_vals, double lambda_ba,
                                    double mu_dc);

// [(1 + zeta(theta/alpha))^alpha zeta(alpha) + (1 + zeta(theta))] VpF VqG,
// theta = 1/p + 1/q > 1, alpha in (1, theta)
double towghi_bound(double VpF, double VqG, double p, double q, double alpha);

struct BoundReport {
    double lhs = 0.0;             // |integral - corner term|
    double integral_value = 0.0;  // young_2d value
    double corner_term = 0.0;     // F(b,d) DDG over the full rectangle
    bool integral_converged = false;
    std::size_t depth = 0;
    double p = 0.0, q = 0.0;
    double norm_1p = 0.0, norm_2q = 0.0;
    double main_rhs_general = 0.0;  // series form, scaled arguments
    double truncation_error = 0.0;
    double main_rhs_general_literal = 0.0;  // series form, literal arguments
    double truncation_error_literal = 0.0;
    double main_rhs_powerlaw = 0.0;  // closed form
    double K = 16.0, K1 = 16.0, K2 = 16.0;
    double Kc = 0.0, K1c = 0.0, K2c = 0.0;
    std::optional<double> towghi_lhs, towghi_rhs;  // |integral| and its bound
    std::optional<bool> towghi_satisfied;
    double holder_ratio = 0.0;  // worst |DDG| ratio against the modulus
    double min_rhs = 0.0;  // tightest of the three main bounds (incl. truncation)
    std::string tightest;  // its name; the joint-variation bound controls
                           // |integral| itself, so it never enters min_rhs
    bool satisfied = false;     // lhs <= min_rhs
};

// full pipeline: hypothesis checks, integral, norms, all bounds.
// Requires F to vanish on x=a and y=c (within 1e-12) and G to pass the
// rectangle increment check for mod; throws hypothesis_error otherwise.
BoundReport verify_main_inequality(const SampledFunction2D& F, const SampledFunction2D& G,
                                   double p, double q, const ControlModulus& mod,
                                   double tol = 1e-9, std::size_t max_depth = 14,
                                   std::size_t series_terms = 100000);

}  // namespace bivar

#endif
