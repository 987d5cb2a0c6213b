#ifndef VECGP_EXPERIMENTS_HPP
#define VECGP_EXPERIMENTS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vecgp/config.hpp"
#include "vecgp/gp.hpp"
#include "vecgp/norms.hpp"
#include "vecgp/sampler.hpp"

namespace vecgp {

/// One (level, norm) row of a convergence study.  observed_rate is the
/// pairwise log-slope against the previous level (nan on the first).
struct ConvergenceRow {
    Index level = 0;
    Index n_sites = 0;
    double fill = 0;         // h
    double separation = 0;   // q
    double mesh_ratio = 0;   // rho
    std::string norm_tag;
    double error = 0;
    double observed_rate = 0;
    double predicted_rate = 0;
    double jitter = 0;
    bool fit_failed = false;
};

struct NormSummary {
    std::string tag;
    double gamma = 2;
    double predicted_rate = 0;          // nan when no finite order exists
    double ls_rate = 0;                 // least-squares log-log slope
    std::vector<double> pairwise;       // between consecutive levels
    double coarsest_error = 0;
    double finest_error = 0;
    bool monotone_trend = false;        // finest < coarsest
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    std::vector<NormSummary> summaries;
    double eval_margin = 0;
    std::optional<double> tau;   // kernel order
    std::optional<double> beta;  // target order (infinity for entire targets)
};

ConvergenceResult run_convergence(const ExperimentConfig& config);
void write_convergence_csv(const ConvergenceResult& result, std::ostream& out);
void write_convergence_summary(const ConvergenceResult& result, std::ostream& out);

/// Structural certificate: max scaled finite-difference divergence (or curl)
/// of the posterior mean over random probe points.
struct CertificateReport {
    KernelMode mode = KernelMode::divergence_free;
    Index n_sites = 0;
    Index probes = 0;
    double max_scaled_residual = 0;
    double field_scale = 0;
    double tolerance = 1e-5;
    bool passed = false;
    bool negative_control = false;  // diagonal kernel: expected to fail
};

CertificateReport run_divergence_certificate(const ExperimentConfig& config);
void write_certificate_report(const CertificateReport& report, std::ostream& out);

/// Chebyshev tail check: empirical tail frequencies of posterior samples
/// against K_N(x,x)_kk / eps^2 at three eps levels per component.
struct ChebyshevCell {
    Index probe = 0;
    Index component = 0;
    double eps_over_sigma = 0;
    double bound = 0;      // min(1, sigma^2 / eps^2)
    double empirical = 0;
    bool vacuous = false;  // bound >= 1: reported, not gated
    bool passed = true;
};

struct ChebyshevReport {
    std::vector<ChebyshevCell> cells;
    Index n_samples = 0;
    double slack = 0;  // 3 / sqrt(n_samples)
    bool passed = false;
};

ChebyshevReport run_chebyshev_check(const ExperimentConfig& config);
void write_chebyshev_report(const ChebyshevReport& report, std::ostream& out);

/// Power-function map over the evaluation grid at every ladder level.
struct PowerMapResult {
    EvaluationGrid<double> grid;
    std::vector<double> lambda_max;        // finest level, one entry per grid point
    std::vector<double> per_level_max;     // max over the grid per ladder level
    std::vector<Index> per_level_sites;
    bool strictly_decreasing = false;
    // for native-space targets: max over the grid of |v - I_X v| / (sqrt(lambda_max) |v|)
    std::optional<double> sup_error_ratio;
};

PowerMapResult run_power_map(const ExperimentConfig& config);
void write_power_map_csv(const PowerMapResult& result, std::ostream& out);
void write_power_map_summary(const PowerMapResult& result, std::ostream& out);

/// Field samples on a grid, written as one CSV row per (sample, grid point).
struct SampleResult {
    EvaluationGrid<double> grid;
    std::vector<FieldSample<double>> samples;
    std::string source;
};

SampleResult run_sample(const ExperimentConfig& config);
void write_samples_csv(const SampleResult& result, std::ostream& out);

/// Kernel self-check: analytic derivatives against finite differences, the
/// laplacian/trace identity, structural column residuals and gram PSD-ness.
struct KernelCheckReport {
    std::string kernel_name;
    double max_hessian_deviation = 0;   // relative, in units of alpha2 kappa^2
    double max_laplacian_deviation = 0;
    double max_column_residual = 0;     // scaled divergence/curl of columns; nan if not applicable
    double min_gram_eigenvalue = 0;     // relative to trace / (d N)
    bool passed = false;
};

KernelCheckReport run_kernel_check(const ExperimentConfig& config);
void write_kernel_check_report(const KernelCheckReport& report, std::ostream& out);

/// Predicted W_q^s convergence exponent: order - s - d (1/2 - 1/q)_+ with
/// order = tau (matching) or beta (escaping).
double predicted_exponent(double order, const NormRequest& norm, Index dim);

}  // namespace vecgp

#endif  // VECGP_EXPERIMENTS_HPP
