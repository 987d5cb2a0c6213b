// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criterion 10 exercises the CLI binary, whose path is argv[1].

#include <Eigen/LU>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vecgp/experiments.hpp"
#include "vecgp/fd.hpp"
#include "vecgp/fields.hpp"
#include "vecgp/format.hpp"
#include "vecgp/model_io.hpp"

using namespace vecgp;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int number;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

std::string cli_path;

// ---------------------------------------------------------------------------
// helpers

Vecd random_box_point(Rng& rng, Index d) {
    Vecd x(d);
    for (Index a = 0; a < d; ++a) x[a] = rng.uniform(0.0, 1.0);
    return x;
}

std::vector<ScalarKernelSpec<double>> every_spec(Index dim) {
    return {
        ScalarKernelSpec<double>::gaussian(1.3, 1.7, dim),
        ScalarKernelSpec<double>::matern(1.5, 1.3, 1.7, dim),
        ScalarKernelSpec<double>::matern(2.5, 1.3, 1.7, dim),
        ScalarKernelSpec<double>::matern(3.5, 1.3, 1.7, dim),
        ScalarKernelSpec<double>::wendland(1, 1.3, 1.7, dim),
        ScalarKernelSpec<double>::wendland(2, 1.3, 1.7, dim),
        ScalarKernelSpec<double>::wendland(3, 1.3, 1.7, dim),
    };
}

Vecd derivative_probe(Rng& rng, const ScalarKernelSpec<double>& spec) {
    const double rmax =
        spec.family == KernelFamily::wendland ? 1.2 / spec.kappa : 2.0 / spec.kappa;
    for (;;) {
        Vecd z(spec.dim);
        for (Index a = 0; a < spec.dim; ++a) z[a] = rng.uniform(-rmax, rmax);
        const double r = spec.kappa * z.norm();
        if (r < 5e-3) continue;
        if (spec.family == KernelFamily::wendland && std::abs(r - 1.0) < 5e-3) continue;
        return z;
    }
}

ExperimentConfig matching_case_config() {
    ExperimentConfig config;
    config.seed = 42;
    config.domain = Domain<double>::unit_box(2);
    config.kernel_spec = ScalarKernelSpec<double>::matern(2.5, 1.0, 1.0, 2);
    config.kernel_mode = KernelMode::divergence_free;
    config.field_kind = FieldKind::kernel_combo;
    config.combo_centers = 4;
    config.combo_seed = 7;
    config.ladder = {5, 9, 17, 33};
    config.probe_resolution = 129;
    config.eval_per_axis = 24;
    config.norms = {NormRequest::parse("L2_s0"), NormRequest::parse("Linf_s0")};
    return config;
}

double summary_rate(const ConvergenceResult& result, const std::string& tag) {
    for (const auto& summary : result.summaries)
        if (summary.tag == tag) return summary.ls_rate;
    throw std::runtime_error("missing norm tag " + tag);
}

// ---------------------------------------------------------------------------
// criteria

Outcome criterion_kernel_derivatives() {
    double worst_hessian = 0, worst_laplacian = 0;
    for (Index dim : {Index(2), Index(3)}) {
        Rng rng(101 + static_cast<std::uint64_t>(dim));
        for (const auto& spec : every_spec(dim)) {
            const double hessian_scale = spec.alpha2 * spec.kappa * spec.kappa;
            for (int trial = 0; trial < 100; ++trial) {
                const Vecd z = derivative_probe(rng, spec);
                auto phi = [&](const Vecd& p) {
                    return eval_scalar(spec, p, Vecd(Vecd::Zero(dim)));
                };
                const Matd analytic = hessian(spec, z);
                const Matd numeric = fd_hessian(phi, z, 1e-4);
                const double scale = std::max(analytic.cwiseAbs().maxCoeff(), hessian_scale);
                worst_hessian = std::max(
                    worst_hessian, (analytic - numeric).cwiseAbs().maxCoeff() / scale);
                const double trace_scale = analytic.diagonal().cwiseAbs().sum() + 1e-300;
                worst_laplacian =
                    std::max(worst_laplacian,
                             std::abs(laplacian(spec, z) - analytic.trace()) / trace_scale);
            }
        }
    }
    Outcome out;
    out.passed = worst_hessian < 1e-5 && worst_laplacian < 1e-13;
    out.detail = "max hessian dev " + fmt_double(worst_hessian) + ", max laplacian dev " +
                 fmt_double(worst_laplacian);
    return out;
}

Outcome criterion_structural_certificates() {
    const Index d = 2;
    Rng rng(202);
    double worst = 0;  // over all structured checks, field-scaled

    auto track = [&](double value) { worst = std::max(worst, value); };

    // kernel columns, divergence-free and curl-free
    for (auto mode : {KernelMode::divergence_free, KernelMode::curl_free}) {
        for (const auto& spec : {ScalarKernelSpec<double>::gaussian(1.0, 1.0, d),
                                 ScalarKernelSpec<double>::matern(2.5, 1.0, 1.0, d)}) {
            MatrixKernel<double> kernel(spec, mode);
            const double scale = spec.alpha2 * std::pow(spec.kappa, 3.0);
            for (int trial = 0; trial < 100; ++trial) {
                const Vecd x = random_box_point(rng, d);
                const Vecd y = random_box_point(rng, d);
                for (Index col = 0; col < d; ++col) {
                    if (mode == KernelMode::divergence_free)
                        track(std::abs(divergence_of_column(kernel, x, y, col)) / scale);
                    else
                        track(curl_of_column(kernel, x, y, col).norm() / scale);
                }
            }
        }
    }

    // posterior means
    {
        MatrixKernel<double> div_kernel(ScalarKernelSpec<double>::matern(2.5, 1.0, 1.0, d),
                                        KernelMode::divergence_free);
        auto sites = grid_points(Index(9), Domain<double>::unit_box(2));
        auto obs = sample_observations(make_stream_field_2d<double>(), sites);
        auto model = fit(div_kernel, MeanFunction<double>::zero(), obs,
                         FitSpec<double>::interpolate());
        auto mean = [&](const Vecd& x) { return model.predict_mean(x); };
        double scale = 1.0;
        std::vector<Vecd> probes;
        for (int trial = 0; trial < 100; ++trial) {
            probes.push_back(random_box_point(rng, d));
            scale = std::max(scale, mean(probes.back()).norm());
        }
        for (const auto& x : probes) track(std::abs(fd_divergence(mean, x, 1e-3, 4)) / scale);

        MatrixKernel<double> curl_kernel(ScalarKernelSpec<double>::matern(2.5, 1.0, 1.0, d),
                                         KernelMode::curl_free);
        auto curl_obs = sample_observations(make_gradient_field<double>(2), sites);
        auto curl_model = fit(curl_kernel, MeanFunction<double>::zero(), curl_obs,
                              FitSpec<double>::interpolate());
        auto curl_mean = [&](const Vecd& x) { return curl_model.predict_mean(x); };
        for (const auto& x : probes)
            track(fd_curl(curl_mean, x, 1e-3, 4).norm() /
                  std::max(1.0, curl_mean(x).norm()));
    }

    // nystrom eigenfunction extensions and a KL sample
    {
        MatrixKernel<double> kernel(ScalarKernelSpec<double>::matern(2.5, 1.0, 1.0, d),
                                    KernelMode::divergence_free);
        auto grid = EvaluationGrid<double>::midpoint(Domain<double>::unit_box(2), 6);
        auto eigs = nystrom_eigensystem(kernel, grid, 8);
        for (Index k = 0; k < eigs.size(); ++k) {
            auto extension = [&](const Vecd& x) { return eigs.extend_eigenfunction(k, x); };
            double scale = 1.0;
            std::vector<Vecd> probes;
            for (int trial = 0; trial < 100; ++trial) {
                probes.push_back(random_box_point(rng, d));
                scale = std::max(scale, extension(probes.back()).norm());
            }
            for (const auto& x : probes)
                track(std::abs(fd_divergence(extension, x, 1e-3, 4)) / scale);
        }
        for (std::uint64_t draw : {99ULL, 100ULL}) {
            auto [sample, xi] = kl_sample_with_coefficients(eigs, draw);
            auto field = [&](const Vecd& x) { return eigs.extend_kl_field(xi, x); };
            double scale = 1.0;
            std::vector<Vecd> probes;
            for (int trial = 0; trial < 100; ++trial) {
                probes.push_back(random_box_point(rng, d));
                scale = std::max(scale, field(probes.back()).norm());
            }
            for (const auto& x : probes)
                track(std::abs(fd_divergence(field, x, 1e-3, 4)) / scale);
        }
    }

    // negative control: diagonal kernel on generic (non-solenoidal) data
    double control = 0;
    {
        MatrixKernel<double> kernel(ScalarKernelSpec<double>::matern(2.5, 1.0, 1.0, d),
                                    KernelMode::diagonal);
        auto sites = grid_points(Index(9), Domain<double>::unit_box(2));
        auto obs = sample_observations(make_gradient_field<double>(2), sites);
        auto model = fit(kernel, MeanFunction<double>::zero(), obs,
                         FitSpec<double>::interpolate());
        auto mean = [&](const Vecd& x) { return model.predict_mean(x); };
        double scale = 1.0;
        for (int trial = 0; trial < 100; ++trial) {
            const Vecd x = random_box_point(rng, d);
            scale = std::max(scale, mean(x).norm());
            control = std::max(control, std::abs(fd_divergence(mean, x, 1e-3, 4)));
        }
        control /= scale;
    }

    Outcome out;
    out.passed = worst <= 1e-5 && control > 1e-2;
    out.detail = "max structured residual " + fmt_double(worst) + ", diagonal control " +
                 fmt_double(control);
    return out;
}

Outcome criterion_interpolation_exactness() {
    MatrixKernel<double> kernel(ScalarKernelSpec<double>::matern(2.5, 1.0, 1.0, 2),
                                KernelMode::divergence_free);
    auto sites = halton_points(Index(100), Domain<double>::unit_box(2));
    auto field = make_stream_field_2d<double>();
    auto obs = sample_observations(field, sites);
    auto model = fit(kernel, MeanFunction<double>::zero(), obs, FitSpec<double>::interpolate());

    double worst = 0, scale = 0;
    for (Index i = 0; i < sites.size(); ++i) {
        worst = std::max(worst,
                         (model.predict_mean(Vecd(sites.point(i))) - obs.values.col(i)).norm());
        scale = std::max(scale, obs.values.col(i).norm());
    }
    const double exactness = worst / scale;

    // norm minimality against constructed pre-images
    double worst_ratio = 0;
    Rng rng(303);
    for (int instance = 0; instance < 3; ++instance) {
        const Index centers = 3 + instance;
        auto combo_centers = uniform_random_points(centers, Domain<double>::unit_box(2),
                                                   500 + static_cast<std::uint64_t>(instance));
        Matd beta(2, centers);
        for (Index j = 0; j < centers; ++j) {
            beta(0, j) = rng.normal();
            beta(1, j) = rng.normal();
        }
        auto target = make_kernel_combo(kernel, combo_centers, beta);
        auto target_obs = sample_observations(target, sites);
        auto interpolant = fit(kernel, MeanFunction<double>::zero(), target_obs,
                               FitSpec<double>::interpolate());
        worst_ratio = std::max(worst_ratio, interpolant.native_norm() / target.native_norm);
    }

    Outcome out;
    out.passed = exactness <= 1e-8 && worst_ratio <= 1.0 + 1e-9;
    out.detail = "site error " + fmt_double(exactness) + ", worst norm ratio " +
                 fmt_double(worst_ratio);
    return out;
}

Outcome criterion_power_identity() {
    MatrixKernel<double> kernel(ScalarKernelSpec<double>::gaussian(1.2, 0.9, 2),
                                KernelMode::divergence_free);
    auto sites = halton_points(Index(12), Domain<double>::unit_box(2));
    auto obs = sample_observations(make_stream_field_2d<double>(), sites);
    auto model = fit(kernel, MeanFunction<double>::zero(), obs, FitSpec<double>::interpolate());

    const Index d = 2, n = sites.size();
    Matd gram = assemble_gram(kernel, sites);
    Eigen::PartialPivLU<Matd> lu(gram);

    double worst_identity = 0;
    Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const Vecd x = random_box_point(rng, d);
        Vecd alpha(2);
        alpha << rng.normal(), rng.normal();

        Matd rhs(d * n, d);
        for (Index i = 0; i < n; ++i)
            rhs.middleRows(d * i, d) = eval_matrix(kernel, sites.point(i), x);
        const Matd cardinal = lu.solve(rhs);
        Matd cross = Matd::Zero(d, d);
        for (Index j = 0; j < n; ++j)
            cross += eval_matrix(kernel, x, sites.point(j)) * cardinal.middleRows(d * j, d);
        const Matd quad = cardinal.transpose() * gram * cardinal;
        const double representer = alpha.dot(eval_matrix(kernel, x, x) * alpha) -
                                   2.0 * alpha.dot(cross * alpha) + alpha.dot(quad * alpha);
        const double via_cov = alpha.dot(model.predict_cov(x, x) * alpha);
        worst_identity = std::max(
            worst_identity, std::abs(representer - via_cov) /
                                std::max(std::abs(representer), 1e-10 * kernel.base.alpha2));
    }

    double worst_site = 0;
    for (Index i = 0; i < n; ++i)
        worst_site = std::max(worst_site, power_function(model, Vecd(sites.point(i))).lambda_max);

    // sup-error bound over a grid for a native-space target
    auto combo_centers = halton_points(Index(4), Domain<double>::unit_box(2));
    Matd beta(2, 4);
    Rng beta_rng(405);
    for (Index j = 0; j < 4; ++j) {
        beta(0, j) = beta_rng.normal();
        beta(1, j) = beta_rng.normal();
    }
    auto target = make_kernel_combo(kernel, combo_centers, beta);
    auto target_obs = sample_observations(target, sites);
    auto target_model = fit(kernel, MeanFunction<double>::zero(), target_obs,
                            FitSpec<double>::interpolate());
    auto grid = EvaluationGrid<double>::midpoint(Domain<double>::unit_box(2), 16);
    double worst_bound_ratio = 0;
    for (Index i = 0; i < grid.size(); ++i) {
        const Vecd x = grid.points.col(i);
        const double err = (target.evaluator(x) - target_model.predict_mean(x)).norm();
        const double bound = std::sqrt(std::max(power_function(target_model, x).lambda_max, 0.0)) *
                             target.native_norm;
        if (bound > 1e-14) worst_bound_ratio = std::max(worst_bound_ratio, err / bound);
    }

    Outcome out;
    out.passed = worst_identity <= 1e-8 && worst_site <= 1e-8 * kernel.base.alpha2 &&
                 worst_bound_ratio <= 1.0 + 1e-9;
    out.detail = "identity dev " + fmt_double(worst_identity) + ", site power " +
                 fmt_double(worst_site) + ", sup-bound ratio " + fmt_double(worst_bound_ratio);
    return out;
}

Outcome criterion_matching_rates() {
    auto config = matching_case_config();
    auto result = run_convergence(config);
    const double l2 = summary_rate(result, "L2_s0");
    const double linf = summary_rate(result, "Linf_s0");
    Outcome out;
    out.passed = l2 >= 2.0 && linf >= 1.0;
    out.detail = "L2 rate " + fmt_double(l2) + " (>= 2.0), Linf rate " + fmt_double(linf) +
                 " (>= 1.0); predicted 2.5 / 1.5";
    return out;
}

Outcome criterion_penalized_lambda() {
    auto config = matching_case_config();
    config.ladder = {5, 9, 17};
    auto interp = run_convergence(config);

    auto auto_cfg = config;
    auto_cfg.fit_mode = FitMode::penalized;
    auto_cfg.lambda_auto = true;
    auto auto_result = run_convergence(auto_cfg);

    const double rate_interp = summary_rate(interp, "L2_s0");
    const double rate_auto = summary_rate(auto_result, "L2_s0");

    // lambda -> 0 consistency of the coefficients on a well-conditioned set
    MatrixKernel<double> kernel(config.kernel_spec, config.kernel_mode);
    auto sites = grid_points(Index(7), config.domain);
    auto obs = sample_observations(config.make_field(), sites);
    auto exact = fit(kernel, MeanFunction<double>::zero(), obs, FitSpec<double>::interpolate());
    auto tiny = fit(kernel, MeanFunction<double>::zero(), obs, FitSpec<double>::penalized(1e-12));
    const double coeff_dev =
        (exact.coefficients() - tiny.coefficients()).norm() / exact.coefficients().norm();

    Outcome out;
    out.passed = std::abs(rate_auto - rate_interp) <= 0.5 && coeff_dev <= 1e-6;
    out.detail = "auto-lambda rate " + fmt_double(rate_auto) + " vs interpolation " +
                 fmt_double(rate_interp) + ", lambda->0 coefficient dev " + fmt_double(coeff_dev);
    return out;
}

Outcome criterion_noise_saturation() {
    auto config = matching_case_config();
    config.noise_sigma = 1e-2;
    config.fit_mode = FitMode::penalized;
    config.lambda_auto = true;
    config.norms = {NormRequest::parse("L2_s0")};
    auto result = run_convergence(config);
    const auto& summary = result.summaries.front();
    const double final_error = summary.finest_error;
    const double last_rate = summary.pairwise.back();
    const double tau = 2.5;
    const bool plateau = last_rate < tau - 0.5;

    // penalized objective certificate on a constructed case
    MatrixKernel<double> kernel(config.kernel_spec, config.kernel_mode);
    auto centers = halton_points(Index(3), config.domain);
    Matd beta(2, 3);
    Rng rng(707);
    for (Index j = 0; j < 3; ++j) {
        beta(0, j) = rng.normal();
        beta(1, j) = rng.normal();
    }
    auto target = make_kernel_combo(kernel, centers, beta);
    auto sites = halton_points(Index(20), config.domain);
    Matd values(2, sites.size());
    double noise_sq = 0;
    for (Index j = 0; j < sites.size(); ++j) {
        Vecd eps(2);
        eps << 0.01 * rng.normal(), 0.01 * rng.normal();
        noise_sq += eps.squaredNorm();
        values.col(j) = target.evaluator(Vecd(sites.point(j))) + eps;
    }
    const double lambda = 1e-3;
    auto model = fit(kernel, MeanFunction<double>::zero(), Observations<double>(sites, values),
                     FitSpec<double>::penalized(lambda));
    double misfit = 0;
    for (Index j = 0; j < sites.size(); ++j)
        misfit += (values.col(j) - model.predict_mean(Vecd(sites.point(j)))).squaredNorm();
    const double lhs = misfit + lambda * model.native_norm() * model.native_norm();
    const double rhs = noise_sq + lambda * target.native_norm * target.native_norm;
    const bool certificate = lhs <= rhs * (1 + 1e-10);

    Outcome out;
    out.passed = final_error >= 1e-3 && final_error <= 1e-1 && plateau && certificate;
    out.detail = "final L2 error " + fmt_double(final_error) + " in [1e-3, 1e-1], last rate " +
                 fmt_double(last_rate) + " (plateau), objective " + fmt_double(lhs) + " <= " +
                 fmt_double(rhs);
    return out;
}

Outcome criterion_chebyshev() {
    auto config = matching_case_config();
    config.field_kind = FieldKind::stream2d;
    config.ladder = {5};
    config.chebyshev_samples = 10000;
    config.chebyshev_probes = 5;
    auto report = run_chebyshev_check(config);
    double worst_excess = 0;
    for (const auto& cell : report.cells)
        worst_excess = std::max(worst_excess, cell.empirical - cell.bound);
    Outcome out;
    out.passed = report.passed;
    out.detail = "worst empirical-bound excess " + fmt_double(worst_excess) + " (slack " +
                 fmt_double(report.slack) + ")";
    return out;
}

Outcome criterion_mercer_kl() {
    MatrixKernel<double> kernel(ScalarKernelSpec<double>::gaussian(1.0, 1.0, 2),
                                KernelMode::divergence_free);
    auto grid = EvaluationGrid<double>::midpoint(Domain<double>::unit_box(2), 6);
    auto eigs = nystrom_eigensystem(kernel, grid, 2 * grid.size());

    std::vector<std::pair<Vecd, Vecd>> pairs;
    pairs.emplace_back(grid.points.col(3), grid.points.col(20));
    pairs.emplace_back(grid.points.col(11), grid.points.col(11));
    pairs.emplace_back(grid.points.col(33), grid.points.col(0));

    const double full = mercer_residual(eigs, pairs);
    bool monotone = true;
    double previous = std::numeric_limits<double>::infinity();
    for (Index m : {Index(4), Index(8), Index(16), Index(32), eigs.size()}) {
        const double r = mercer_residual(eigs, pairs, m);
        if (r > previous + 1e-10) monotone = false;
        previous = r;
    }

    // KL sample covariance against the truncated mercer sum
    auto truncated = nystrom_eigensystem(kernel, grid, 12);
    const Index n_samples = 10000;
    const Index pi = 7, pj = 25;
    Matd empirical = Matd::Zero(2, 2);
    for (Index s = 0; s < n_samples; ++s) {
        auto sample = kl_sample(truncated, 5000 + static_cast<std::uint64_t>(s));
        empirical += sample.values.col(pi) * sample.values.col(pj).transpose();
    }
    empirical /= double(n_samples);
    Matd expected = Matd::Zero(2, 2), cov_ii = Matd::Zero(2, 2), cov_jj = Matd::Zero(2, 2);
    for (Index k = 0; k < truncated.size(); ++k) {
        expected += truncated.eigenvalues[k] * truncated.eigenfunction_block(k, pi) *
                    truncated.eigenfunction_block(k, pj).transpose();
        cov_ii += truncated.eigenvalues[k] * truncated.eigenfunction_block(k, pi) *
                  truncated.eigenfunction_block(k, pi).transpose();
        cov_jj += truncated.eigenvalues[k] * truncated.eigenfunction_block(k, pj) *
                  truncated.eigenfunction_block(k, pj).transpose();
    }
    bool kl_ok = true;
    double worst_sigmas = 0;
    for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b) {
            const double variance =
                cov_ii(a, a) * cov_jj(b, b) + expected(a, b) * expected(a, b);
            const double se = std::sqrt(variance / double(n_samples));
            const double sigmas = std::abs(empirical(a, b) - expected(a, b)) / se;
            worst_sigmas = std::max(worst_sigmas, sigmas);
            if (sigmas > 4.0) kl_ok = false;
        }

    Outcome out;
    out.passed = full <= 1e-8 * kernel.base.alpha2 && monotone && kl_ok;
    out.detail = "full-rank residual " + fmt_double(full) + ", monotone " +
                 (monotone ? std::string("yes") : std::string("no")) + ", KL covariance max " +
                 fmt_double(worst_sigmas) + " SE";
    return out;
}

Outcome criterion_determinism() {
    Outcome out;
    if (cli_path.empty()) {
        out.passed = false;
        out.detail = "CLI path not supplied (argv[1])";
        return out;
    }
    namespace fs = std::filesystem;
    const fs::path scratch = fs::path("acceptance_scratch");
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    const fs::path config_path = scratch / "config.toml";
    {
        std::ofstream config(config_path);
        config << "seed = 42\n"
               << "[domain]\ndim = 2\n"
               << "[kernel]\nfamily = \"matern\"\nnu = 2.5\nmode = \"divergence_free\"\n"
               << "[field]\nkind = \"kernel_combo\"\ncombo_centers = 3\n"
               << "[points]\nkind = \"halton\"\nladder = [12, 20]\nprobe_resolution = 61\n"
               << "[evaluation]\nper_axis = 8\nnorms = [\"L2_s0\", \"Linf_s1\"]\n"
               << "[sample]\nsource = \"kl\"\ncount = 3\ngrid_per_axis = 5\nkl_modes = 10\n"
               << "[chebyshev]\nsamples = 2000\nprobes = 2\n"
               << "[certificate]\nprobes = 50\n";
    }

    const std::vector<std::string> subcommands = {"convergence", "certificate", "chebyshev",
                                                  "powermap",    "sample",      "kernel-check"};
    for (const auto& sub : subcommands) {
        for (const char* run : {"a", "b"}) {
            const fs::path out_dir = scratch / (sub + "_" + run);
            std::ostringstream cmd;
            cmd << '"' << cli_path << '"' << ' ' << sub << " --config " << config_path
                << " --out " << out_dir << " --quiet";
            const int rc = std::system(cmd.str().c_str());
            if (rc != 0) {
                out.passed = false;
                out.detail = sub + " exited with " + std::to_string(rc);
                return out;
            }
        }
        const fs::path dir_a = scratch / (sub + "_a");
        for (const auto& entry : fs::directory_iterator(dir_a)) {
            const fs::path twin = scratch / (sub + "_b") / entry.path().filename();
            std::ifstream fa(entry.path(), std::ios::binary);
            std::ifstream fb(twin, std::ios::binary);
            std::stringstream ba, bb;
            ba << fa.rdbuf();
            bb << fb.rdbuf();
            if (!fb || ba.str() != bb.str()) {
                out.passed = false;
                out.detail = sub + ": " + entry.path().filename().string() +
                             " differs between identical runs";
                return out;
            }
        }
    }
    out.passed = true;
    out.detail = "6 subcommands, byte-identical outputs";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) cli_path = argv[1];

    std::vector<Criterion> criteria = {
        {1, "kernel-derivative correctness", 5.0, criterion_kernel_derivatives},
        {2, "structural certificates", 30.0, criterion_structural_certificates},
        {3, "interpolation exactness & norm minimality", 10.0, criterion_interpolation_exactness},
        {4, "power-function identity", 10.0, criterion_power_identity},
        {5, "convergence rates, matching case", 60.0, criterion_matching_rates},
        {6, "penalized-lambda behavior", 60.0, criterion_penalized_lambda},
        {7, "noise saturation", 60.0, criterion_noise_saturation},
        {8, "chebyshev tail bound", 30.0, criterion_chebyshev},
        {9, "mercer/kl consistency", 60.0, criterion_mercer_kl},
        {10, "determinism of the CLI", 60.0, criterion_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& err) {
            outcome.passed = false;
            outcome.detail = std::string("exception: ") + err.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed < criterion.budget_seconds;
        const bool passed = outcome.passed && in_budget;
        if (!passed) ++failures;
        std::ostringstream line;
        line << (passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << ": "
             << criterion.name << " (" << std::fixed << std::setprecision(1) << elapsed << "s < "
             << criterion.budget_seconds << "s" << (in_budget ? "" : " EXCEEDED") << ") - "
             << outcome.detail;
        std::cout << line.str() << std::endl;
    }
    if (failures == 0) std::cout << "all acceptance criteria passed" << std::endl;
    else std::cout << failures << " acceptance criteria failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
