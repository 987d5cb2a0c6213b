#include "vecgp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "vecgp/fd.hpp"
#include "vecgp/format.hpp"

namespace vecgp {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

Vecd random_point(Rng& rng, const Domain<double>& dom) {
    Vecd x(dom.dimension());
    for (Index a = 0; a < dom.dimension(); ++a) x[a] = rng.uniform(dom.lower[a], dom.upper[a]);
    return x;
}

PointSet<double> level_points(const ExperimentConfig& config, std::size_t level) {
    const Index count = config.ladder[level];
    return generate_points(config.point_kind, count, config.domain,
                           derive_stream(config.seed, 100 + level));
}

FitSpec<double> level_fit_spec(const ExperimentConfig& config, double fill) {
    switch (config.fit_mode) {
        case FitMode::interpolate: return FitSpec<double>::interpolate();
        case FitMode::posterior: return FitSpec<double>::posterior(config.sigma2);
        case FitMode::penalized: {
            if (!config.lambda_auto) return FitSpec<double>::penalized(config.lambda);
            // sqrt(lambda) = h^(tau - beta/2); entire targets use beta = tau
            const double tau = *config.kernel_spec.derived_sobolev_order();
            double beta = config.target_smoothness().value_or(tau);
            beta = std::min(beta, tau);
            const double sqrt_lambda = std::pow(fill, tau - beta / 2);
            return FitSpec<double>::penalized(sqrt_lambda * sqrt_lambda);
        }
    }
    throw std::runtime_error("unknown fit mode");
}

// as level_fit_spec, computing the fill distance only when auto-lambda needs it
FitSpec<double> fit_spec_for_sites(const ExperimentConfig& config, const PointSet<double>& sites) {
    if (config.fit_mode == FitMode::penalized && config.lambda_auto)
        return level_fit_spec(config,
                              fill_distance(sites, config.domain, config.probe_resolution));
    return level_fit_spec(config, nan_value);
}

/// Evaluation grid on the margin-inset box, weights from the midpoint rule.
EvaluationGrid<double> make_eval_grid(const ExperimentConfig& config, double margin) {
    const Index d = config.domain.dimension();
    Vecd lower = config.domain.lower, upper = config.domain.upper;
    for (Index a = 0; a < d; ++a) {
        const double extent = upper[a] - lower[a];
        const double inset = std::min(margin, 0.4 * extent);
        lower[a] += inset;
        upper[a] -= inset;
    }
    return EvaluationGrid<double>::midpoint(Domain<double>(lower, upper), config.eval_per_axis);
}

double compute_margin(const ExperimentConfig& config) {
    if (config.boundary_margin >= 0) return config.boundary_margin;
    auto coarsest = level_points(config, 0);
    return fill_distance(coarsest, config.domain, config.probe_resolution);
}

Matd error_on_grid(const GPModel<double>& model, const AnalyticField<double>& field,
                   const EvaluationGrid<double>& grid) {
    Matd err(grid.dimension(), grid.size());
    for (Index i = 0; i < grid.size(); ++i) {
        const Vecd x = grid.points.col(i);
        err.col(i) = model.predict_mean(x) - field.evaluator(x);
    }
    return err;
}

}  // namespace

double predicted_exponent(double order, const NormRequest& norm, Index dim) {
    const double half_minus_one_over_q = std::isinf(norm.q) ? 0.5 : 0.5 - 1.0 / norm.q;
    return order - norm.s - double(dim) * std::max(0.0, half_minus_one_over_q);
}

ConvergenceResult run_convergence(const ExperimentConfig& config) {
    ConvergenceResult result;
    const Index d = config.domain.dimension();
    const auto kernel = config.kernel();
    const auto field = config.make_field();
    result.tau = config.kernel_spec.derived_sobolev_order();
    result.beta = config.target_smoothness();

    result.eval_margin = compute_margin(config);
    const auto grid = make_eval_grid(config, result.eval_margin);

    // rate prediction order: tau in the matching case (beta >= tau), beta
    // with the rho^(tau-beta) caveat otherwise
    std::optional<double> order;
    if (result.tau) {
        order = *result.tau;
        if (result.beta && *result.beta < *result.tau) order = *result.beta;
    }

    struct LevelOutcome {
        Index n_sites = 0;
        GeometryStats<double> geometry{nan_value, nan_value, nan_value};
        double jitter = nan_value;
        std::vector<double> errors;  // one per requested norm
        bool failed = false;
    };
    std::vector<LevelOutcome> levels;

    for (std::size_t level = 0; level < config.ladder.size(); ++level) {
        LevelOutcome outcome;
        outcome.errors.assign(config.norms.size(), nan_value);
        try {
            auto sites = level_points(config, level);
            outcome.n_sites = sites.size();
            outcome.geometry = mesh_ratio(sites, config.domain, config.probe_resolution);
            auto obs = sample_observations(
                field, sites,
                NoiseSpec<double>(config.noise_sigma, derive_stream(config.seed, 1000 + level)));
            auto model = fit(kernel, MeanFunction<double>::zero(), obs,
                             level_fit_spec(config, outcome.geometry.fill_distance));
            outcome.jitter = model.jitter_used();
            const Matd err = error_on_grid(model, field, grid);
            for (std::size_t ni = 0; ni < config.norms.size(); ++ni)
                outcome.errors[ni] =
                    grid_Lq_norm(grid, err, config.norms[ni].q, config.norms[ni].s);
        } catch (const std::exception&) {
            outcome.failed = true;  // recorded per-row, the run continues
        }
        levels.push_back(std::move(outcome));
    }

    for (std::size_t ni = 0; ni < config.norms.size(); ++ni) {
        const auto& norm = config.norms[ni];
        NormSummary summary;
        summary.tag = norm.tag;
        summary.gamma = norm.gamma();
        summary.predicted_rate = order ? predicted_exponent(*order, norm, d) : nan_value;

        std::vector<std::pair<double, double>> pairs;
        for (std::size_t level = 0; level < levels.size(); ++level) {
            const auto& outcome = levels[level];
            ConvergenceRow row;
            row.level = static_cast<Index>(level);
            row.n_sites = outcome.n_sites;
            row.fill = outcome.geometry.fill_distance;
            row.separation = outcome.geometry.separation_radius;
            row.mesh_ratio = outcome.geometry.mesh_ratio;
            row.norm_tag = norm.tag;
            row.error = outcome.errors[ni];
            row.predicted_rate = summary.predicted_rate;
            row.jitter = outcome.jitter;
            row.fit_failed = outcome.failed;
            row.observed_rate = nan_value;
            if (level > 0 && !outcome.failed && !levels[level - 1].failed) {
                const double h0 = levels[level - 1].geometry.fill_distance;
                const double e0 = levels[level - 1].errors[ni];
                if (e0 > 0 && row.error > 0 && h0 > row.fill)
                    row.observed_rate = std::log(e0 / row.error) / std::log(h0 / row.fill);
            }
            result.rows.push_back(row);
            if (!outcome.failed && std::isfinite(row.error))
                pairs.emplace_back(row.fill, row.error);
        }

        if (pairs.size() >= 2) {
            try {
                auto rate = estimate_rate(pairs);
                summary.ls_rate = rate.slope;
                summary.pairwise = rate.pairwise;
            } catch (const std::exception&) {
                summary.ls_rate = nan_value;
            }
            summary.coarsest_error = pairs.front().second;
            summary.finest_error = pairs.back().second;
            summary.monotone_trend = summary.finest_error < summary.coarsest_error;
        } else {
            summary.ls_rate = nan_value;
        }
        result.summaries.push_back(std::move(summary));
    }
    return result;
}

void write_convergence_csv(const ConvergenceResult& result, std::ostream& out) {
    out << "level,N,h,q_sep,rho,norm_tag,error,observed_rate,predicted_rate,jitter\n";
    for (const auto& row : result.rows) {
        out << row.level << ',' << row.n_sites << ',' << fmt_double(row.fill) << ','
            << fmt_double(row.separation) << ',' << fmt_double(row.mesh_ratio) << ','
            << row.norm_tag << ',' << fmt_double(row.error) << ','
            << fmt_double(row.observed_rate) << ',' << fmt_double(row.predicted_rate) << ','
            << fmt_double(row.jitter) << '\n';
    }
}

void write_convergence_summary(const ConvergenceResult& result, std::ostream& out) {
    out << "convergence summary\n";
    if (result.tau) out << "  kernel order tau = " << fmt_double(*result.tau) << "\n";
    else out << "  kernel order tau = infinite (gaussian; rate prediction disabled)\n";
    if (result.beta && std::isfinite(*result.beta))
        out << "  target order beta = " << fmt_double(*result.beta) << "\n";
    else
        out << "  target order beta = infinite (entire target; matching case)\n";
    if (result.tau && result.beta && *result.beta < *result.tau)
        out << "  escaping case: rates use beta; a mesh-ratio amplification rho^(tau-beta) "
               "applies, exponent "
            << fmt_double(*result.tau - *result.beta) << "\n";
    out << "  evaluation margin = " << fmt_double(result.eval_margin) << "\n";
    for (const auto& summary : result.summaries) {
        out << "  norm " << summary.tag << ": gamma = " << fmt_double(summary.gamma)
            << ", predicted rate = " << fmt_double(summary.predicted_rate)
            << ", observed ls rate = " << fmt_double(summary.ls_rate) << "\n";
        out << "    pairwise rates:";
        for (double rate : summary.pairwise) out << ' ' << fmt_double(rate);
        out << "\n";
        out << "    error " << fmt_double(summary.coarsest_error) << " -> "
            << fmt_double(summary.finest_error) << " ("
            << (summary.monotone_trend ? "decreasing" : "NOT decreasing") << ")\n";
        // one-sided: upper bounds only, superconvergence passes
        if (std::isfinite(summary.predicted_rate))
            out << "    one-sided gate (observed >= predicted - 0.5): "
                << (summary.ls_rate >= summary.predicted_rate - 0.5 ? "pass" : "FAIL") << "\n";
    }
}

CertificateReport run_divergence_certificate(const ExperimentConfig& config) {
    CertificateReport report;
    const auto kernel = config.kernel();
    report.mode = kernel.mode;
    report.negative_control = kernel.mode == KernelMode::diagonal;
    report.probes = config.certificate_probes;

    auto sites = level_points(config, 0);
    report.n_sites = sites.size();
    const auto field = config.make_field();
    auto obs = sample_observations(
        field, sites, NoiseSpec<double>(config.noise_sigma, derive_stream(config.seed, 2000)));
    auto model = fit(kernel, MeanFunction<double>::zero(), obs,
                     fit_spec_for_sites(config, sites));

    auto mean_field = [&](const Vecd& x) { return model.predict_mean(x); };
    Rng rng = Rng::stream(config.seed, 0xce27ULL);
    std::vector<Vecd> probes;
    double scale = 0;
    for (Index i = 0; i < config.certificate_probes; ++i) {
        Vecd x = random_point(rng, config.domain);
        scale = std::max(scale, mean_field(x).norm());
        probes.push_back(std::move(x));
    }
    report.field_scale = std::max(1.0, scale);

    double worst = 0;
    const double step = 1e-3;
    for (const auto& x : probes) {
        double residual;
        if (kernel.mode == KernelMode::curl_free)
            residual = fd_curl(mean_field, x, step, 4).norm();
        else
            residual = std::abs(fd_divergence(mean_field, x, step, 4));
        worst = std::max(worst, residual);
    }
    report.max_scaled_residual = worst / report.field_scale;
    report.passed = report.max_scaled_residual <= report.tolerance;
    return report;
}

void write_certificate_report(const CertificateReport& report, std::ostream& out) {
    out << "structural certificate\n";
    out << "  kernel mode = " << kernel_mode_name(report.mode) << "\n";
    out << "  sites = " << report.n_sites << ", probes = " << report.probes << "\n";
    out << "  checked quantity = "
        << (report.mode == KernelMode::curl_free ? "curl of posterior mean"
                                                 : "divergence of posterior mean")
        << "\n";
    out << "  field scale = " << fmt_double(report.field_scale) << "\n";
    out << "  max scaled residual = " << fmt_double(report.max_scaled_residual) << "\n";
    out << "  tolerance = " << fmt_double(report.tolerance) << "\n";
    if (report.negative_control)
        out << "  verdict: " << (report.passed ? "UNCONSTRAINED-PASS (unexpected)" : "FAILS as expected")
            << " (diagonal kernel carries no structural constraint)\n";
    else
        out << "  verdict: " << (report.passed ? "PASS" : "FAIL") << "\n";
}

ChebyshevReport run_chebyshev_check(const ExperimentConfig& config) {
    if (config.fit_mode != FitMode::interpolate)
        throw std::runtime_error("chebyshev: an interpolate-mode model is required");
    ChebyshevReport report;
    report.n_samples = config.chebyshev_samples;
    report.slack = 3.0 / std::sqrt(double(report.n_samples));

    const auto kernel = config.kernel();
    auto sites = level_points(config, 0);
    const auto field = config.make_field();
    auto obs = sample_observations(field, sites);
    auto model =
        fit(kernel, MeanFunction<double>::zero(), obs, FitSpec<double>::interpolate());

    const Index d = config.domain.dimension();
    const double eps_levels[3] = {0.5, 1.0, 2.0};
    Rng probe_rng = Rng::stream(config.seed, 0xcebULL);
    bool all_passed = true;
    for (Index p = 0; p < config.chebyshev_probes; ++p) {
        const Vecd x = random_point(probe_rng, config.domain);
        const Vecd mean = model.predict_mean(x);
        const Matd cov = model.predict_cov(x, x);

        // draw from N(mean, cov) with a jittered factor
        Matd lower = detail::psd_lower_factor(Matd(cov), kernel.base.alpha2);
        std::vector<Vecd> draws;
        draws.reserve(static_cast<std::size_t>(report.n_samples));
        for (Index s = 0; s < report.n_samples; ++s) {
            Rng rng = Rng::stream(derive_stream(config.seed, 3000 + p), s);
            Vecd xi(d);
            for (Index a = 0; a < d; ++a) xi[a] = rng.normal();
            draws.push_back(mean + lower * xi);
        }

        for (Index k = 0; k < d; ++k) {
            const double variance = std::max(cov(k, k), 0.0);
            const double sigma = std::sqrt(variance);
            for (double level : eps_levels) {
                ChebyshevCell cell;
                cell.probe = p;
                cell.component = k;
                cell.eps_over_sigma = level;
                const double eps = level * sigma;
                cell.bound = level > 0 ? std::min(1.0, 1.0 / (level * level)) : 1.0;
                Index exceed = 0;
                if (eps > 0) {
                    for (const auto& draw : draws)
                        if (std::abs(draw[k] - mean[k]) >= eps) ++exceed;
                    cell.empirical = double(exceed) / double(report.n_samples);
                } else {
                    cell.empirical = 0.0;  // degenerate variance: all mass at the mean
                }
                cell.vacuous = cell.bound >= 1.0;
                cell.passed = cell.empirical <= cell.bound + report.slack;
                all_passed = all_passed && cell.passed;
                report.cells.push_back(cell);
            }
        }
    }
    report.passed = all_passed;
    return report;
}

void write_chebyshev_report(const ChebyshevReport& report, std::ostream& out) {
    out << "chebyshev tail check\n";
    out << "  samples per probe = " << report.n_samples
        << ", slack = " << fmt_double(report.slack) << "\n";
    out << "  probe component eps/sigma bound empirical note\n";
    for (const auto& cell : report.cells) {
        out << "  " << cell.probe << " " << cell.component << " "
            << fmt_double(cell.eps_over_sigma) << " " << fmt_double(cell.bound) << " "
            << fmt_double(cell.empirical) << " "
            << (cell.vacuous ? "vacuous" : (cell.passed ? "ok" : "EXCEEDED")) << "\n";
    }
    out << "  verdict: " << (report.passed ? "PASS" : "FAIL") << "\n";
}

PowerMapResult run_power_map(const ExperimentConfig& config) {
    if (config.fit_mode != FitMode::interpolate)
        throw std::runtime_error("powermap: the power function is defined for interpolation only");
    PowerMapResult result;
    const auto kernel = config.kernel();
    const auto field = config.make_field();
    const double margin = compute_margin(config);
    result.grid = make_eval_grid(config, margin);

    const bool native_target =
        config.field_kind == FieldKind::kernel_combo && config.combo_uses_own_kernel;
    double worst_ratio = 0;

    for (std::size_t level = 0; level < config.ladder.size(); ++level) {
        auto sites = level_points(config, level);
        auto obs = sample_observations(field, sites);
        auto model =
            fit(kernel, MeanFunction<double>::zero(), obs, FitSpec<double>::interpolate());

        double level_max = 0;
        const bool finest = level + 1 == config.ladder.size();
        if (finest) result.lambda_max.assign(static_cast<std::size_t>(result.grid.size()), 0.0);
        for (Index i = 0; i < result.grid.size(); ++i) {
            const Vecd x = result.grid.points.col(i);
            const auto power = power_function(model, x);
            level_max = std::max(level_max, power.lambda_max);
            if (finest) result.lambda_max[static_cast<std::size_t>(i)] = power.lambda_max;
            if (finest && native_target && field.native_norm > 0) {
                const double err = (field.evaluator(x) - model.predict_mean(x)).norm();
                const double bound =
                    std::sqrt(std::max(power.lambda_max, 0.0)) * field.native_norm;
                if (bound > 1e-14)
                    worst_ratio = std::max(worst_ratio, err / bound);
            }
        }
        result.per_level_max.push_back(level_max);
        result.per_level_sites.push_back(sites.size());
    }

    result.strictly_decreasing = true;
    for (std::size_t i = 1; i < result.per_level_max.size(); ++i)
        if (!(result.per_level_max[i] < result.per_level_max[i - 1]))
            result.strictly_decreasing = false;
    if (native_target) result.sup_error_ratio = worst_ratio;
    return result;
}

void write_power_map_csv(const PowerMapResult& result, std::ostream& out) {
    const Index d = result.grid.dimension();
    for (Index a = 0; a < d; ++a) out << 'x' << (a + 1) << ',';
    out << "lambda_max\n";
    for (Index i = 0; i < result.grid.size(); ++i) {
        for (Index a = 0; a < d; ++a) out << fmt_double(result.grid.points(a, i)) << ',';
        out << fmt_double(result.lambda_max[static_cast<std::size_t>(i)]) << '\n';
    }
}

void write_power_map_summary(const PowerMapResult& result, std::ostream& out) {
    out << "power map summary\n";
    for (std::size_t i = 0; i < result.per_level_max.size(); ++i)
        out << "  level " << i << ": N = " << result.per_level_sites[i]
            << ", max lambda_max = " << fmt_double(result.per_level_max[i]) << "\n";
    out << "  strictly decreasing across levels: "
        << (result.strictly_decreasing ? "yes" : "NO") << "\n";
    if (result.sup_error_ratio)
        out << "  sup-error / power bound ratio (native target): "
            << fmt_double(*result.sup_error_ratio)
            << (*result.sup_error_ratio <= 1.0 + 1e-9 ? " (bound holds)" : " (bound VIOLATED)")
            << "\n";
}

SampleResult run_sample(const ExperimentConfig& config) {
    SampleResult result;
    result.source = config.sample_source;
    result.grid = EvaluationGrid<double>::midpoint(config.domain, config.sample_grid_per_axis);
    const auto kernel = config.kernel();

    if (config.sample_source == "prior") {
        result.samples =
            sample_gaussian_field(kernel, result.grid, config.sample_count, config.seed);
    } else if (config.sample_source == "posterior") {
        auto sites = level_points(config, 0);
        const auto field = config.make_field();
        auto obs = sample_observations(
            field, sites, NoiseSpec<double>(config.noise_sigma, derive_stream(config.seed, 2000)));
        auto model = fit(kernel, MeanFunction<double>::zero(), obs,
                         fit_spec_for_sites(config, sites));
        result.samples =
            sample_gaussian_field(model, result.grid, config.sample_count, config.seed);
    } else {  // kl
        const Index max_modes = result.grid.size() * config.domain.dimension();
        auto eigs =
            nystrom_eigensystem(kernel, result.grid, std::min(config.kl_modes, max_modes));
        for (Index s = 0; s < config.sample_count; ++s)
            result.samples.push_back(kl_sample(eigs, derive_stream(config.seed, 4000 + s)));
    }
    return result;
}

void write_samples_csv(const SampleResult& result, std::ostream& out) {
    const Index d = result.grid.dimension();
    out << "sample_id";
    for (Index a = 0; a < d; ++a) out << ",x" << (a + 1);
    for (Index a = 0; a < d; ++a) out << ",v" << (a + 1);
    out << '\n';
    for (std::size_t s = 0; s < result.samples.size(); ++s)
        for (Index i = 0; i < result.grid.size(); ++i) {
            out << s;
            for (Index a = 0; a < d; ++a) out << ',' << fmt_double(result.grid.points(a, i));
            for (Index a = 0; a < d; ++a) out << ',' << fmt_double(result.samples[s].values(a, i));
            out << '\n';
        }
}

KernelCheckReport run_kernel_check(const ExperimentConfig& config) {
    KernelCheckReport report;
    const auto& spec = config.kernel_spec;
    const auto kernel = config.kernel();
    {
        std::ostringstream name;
        switch (spec.family) {
            case KernelFamily::gaussian: name << "gaussian"; break;
            case KernelFamily::matern: name << "matern nu=" << spec.matern_nu; break;
            case KernelFamily::wendland: name << "wendland k=" << spec.wendland_k; break;
        }
        name << " kappa=" << spec.kappa << " alpha2=" << spec.alpha2 << " d=" << spec.dim << " "
             << kernel_mode_name(kernel.mode);
        report.kernel_name = name.str();
    }

    const Index d = spec.dim;
    Rng rng = Rng::stream(config.seed, 0xfdc4ULL);
    const double hessian_scale = spec.alpha2 * spec.kappa * spec.kappa;

    // probes for derivative checks stay away from the origin and the
    // compact-support sphere, where C^2-only members break the comparison
    auto probe = [&]() {
        const double rmax =
            spec.family == KernelFamily::wendland ? 1.2 / spec.kappa : 2.0 / spec.kappa;
        for (;;) {
            Vecd z(d);
            for (Index a = 0; a < d; ++a) z[a] = rng.uniform(-rmax, rmax);
            const double r = spec.kappa * z.norm();
            if (r < 5e-3) continue;
            if (spec.family == KernelFamily::wendland && std::abs(r - 1.0) < 5e-3) continue;
            return z;
        }
    };

    for (int trial = 0; trial < 100; ++trial) {
        const Vecd z = probe();
        auto phi = [&](const Vecd& p) { return eval_scalar(spec, p, Vecd(Vecd::Zero(d))); };
        const Matd analytic = hessian(spec, z);
        const Matd numeric = fd_hessian(phi, z, 1e-4);
        const double scale = std::max(analytic.cwiseAbs().maxCoeff(), hessian_scale);
        report.max_hessian_deviation = std::max(
            report.max_hessian_deviation, (analytic - numeric).cwiseAbs().maxCoeff() / scale);
        const double trace_scale = analytic.diagonal().cwiseAbs().sum() + 1e-300;
        report.max_laplacian_deviation =
            std::max(report.max_laplacian_deviation,
                     std::abs(laplacian(spec, z) - analytic.trace()) / trace_scale);
    }

    if (kernel.mode != KernelMode::diagonal && spec.three_times_differentiable()) {
        const double column_scale =
            spec.alpha2 * spec.kappa * spec.kappa * spec.kappa;
        double worst = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const Vecd x = random_point(rng, config.domain);
            const Vecd y = random_point(rng, config.domain);
            for (Index col = 0; col < d; ++col) {
                double residual;
                if (kernel.mode == KernelMode::divergence_free)
                    residual = std::abs(divergence_of_column(kernel, x, y, col));
                else
                    residual = curl_of_column(kernel, x, y, col).norm();
                worst = std::max(worst, residual);
            }
        }
        report.max_column_residual = worst / column_scale;
    } else {
        report.max_column_residual = nan_value;
    }

    {
        auto sites = halton_points(Index(12), config.domain);
        const Matd gram = assemble_gram(kernel, sites);
        Eigen::SelfAdjointEigenSolver<Matd> eig(gram, Eigen::EigenvaluesOnly);
        report.min_gram_eigenvalue =
            eig.eigenvalues().minCoeff() / (gram.trace() / double(gram.rows()));
    }

    report.passed = report.max_hessian_deviation < 1e-5 &&
                    report.max_laplacian_deviation < 1e-12 &&
                    (std::isnan(report.max_column_residual) ||
                     report.max_column_residual < 1e-6) &&
                    report.min_gram_eigenvalue > -1e-10;
    return report;
}

void write_kernel_check_report(const KernelCheckReport& report, std::ostream& out) {
    out << "kernel self-check: " << report.kernel_name << "\n";
    out << "  max hessian deviation (vs finite differences, scaled) = "
        << fmt_double(report.max_hessian_deviation) << "\n";
    out << "  max laplacian/trace deviation = " << fmt_double(report.max_laplacian_deviation)
        << "\n";
    out << "  max structural column residual (scaled) = "
        << fmt_double(report.max_column_residual) << "\n";
    out << "  min gram eigenvalue (relative) = " << fmt_double(report.min_gram_eigenvalue)
        << "\n";
    out << "  verdict: " << (report.passed ? "PASS" : "FAIL") << "\n";
}

}  // namespace vecgp
