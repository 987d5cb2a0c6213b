#ifndef VECGP_MODEL_IO_HPP
#define VECGP_MODEL_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vecgp/format.hpp"
#include "vecgp/gp.hpp"

// Flat text dump of a fitted model: kernel configuration, sites, coefficient
// blocks and the jitter that was used.  Floats are written with 17
// significant digits, which round-trips IEEE doubles exactly, so a reloaded
// model predicts bit-identically.  Only zero prior means are serializable
// (the format stores no mean function); loading rebuilds the Gram matrix and
// refactorizes with the stored shift, without jitter escalation.

namespace vecgp {

inline void save_model(const GPModel<double>& model, std::ostream& out) {
    if (!model.prior_mean().is_zero())
        throw std::invalid_argument("save_model: only zero prior means are serializable");
    const auto& spec = model.kernel().base;
    out << "vecgp-model 1\n";
    out << "family ";
    switch (spec.family) {
        case KernelFamily::gaussian: out << "gaussian"; break;
        case KernelFamily::matern: out << "matern " << fmt_double(spec.matern_nu); break;
        case KernelFamily::wendland: out << "wendland " << spec.wendland_k; break;
    }
    out << "\n";
    out << "kappa " << fmt_double(spec.kappa) << "\n";
    out << "alpha2 " << fmt_double(spec.alpha2) << "\n";
    out << "dim " << spec.dim << "\n";
    out << "mode " << kernel_mode_name(model.kernel().mode) << "\n";
    out << "fit " << fit_mode_name(model.mode()) << " "
        << fmt_double(model.regularization()) << "\n";
    out << "jitter " << fmt_double(model.jitter_used()) << "\n";
    out << "sites " << model.sites().size() << "\n";
    const auto& pts = model.sites().points();
    for (Index j = 0; j < pts.cols(); ++j) {
        for (Index a = 0; a < pts.rows(); ++a)
            out << (a ? " " : "") << fmt_double(pts(a, j));
        out << "\n";
    }
    out << "coefficients " << model.coefficients().size() << "\n";
    for (Index i = 0; i < model.coefficients().size(); ++i)
        out << fmt_double(model.coefficients()[i]) << "\n";
}

inline void save_model(const GPModel<double>& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path);
    save_model(model, out);
}

inline GPModel<double> load_model(std::istream& in) {
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (tag != "vecgp-model" || version != 1)
        throw std::runtime_error("load_model: unrecognized header");

    std::string key, family_name;
    in >> key >> family_name;
    if (key != "family") throw std::runtime_error("load_model: expected family");
    ScalarKernelSpec<double> spec;
    if (family_name == "gaussian") {
        spec.family = KernelFamily::gaussian;
    } else if (family_name == "matern") {
        spec.family = KernelFamily::matern;
        in >> spec.matern_nu;
    } else if (family_name == "wendland") {
        spec.family = KernelFamily::wendland;
        in >> spec.wendland_k;
    } else {
        throw std::runtime_error("load_model: unknown family " + family_name);
    }

    auto read_scalar = [&](const char* expected) {
        std::string k;
        double v;
        in >> k >> v;
        if (k != expected) throw std::runtime_error(std::string("load_model: expected ") + expected);
        return v;
    };
    spec.kappa = read_scalar("kappa");
    spec.alpha2 = read_scalar("alpha2");
    {
        std::string k;
        in >> k >> spec.dim;
        if (k != "dim") throw std::runtime_error("load_model: expected dim");
    }
    spec.validate();

    std::string mode_name;
    in >> key >> mode_name;
    if (key != "mode") throw std::runtime_error("load_model: expected mode");
    KernelMode mode;
    if (mode_name == "divergence_free") mode = KernelMode::divergence_free;
    else if (mode_name == "curl_free") mode = KernelMode::curl_free;
    else if (mode_name == "diagonal") mode = KernelMode::diagonal;
    else throw std::runtime_error("load_model: unknown mode " + mode_name);
    MatrixKernel<double> kernel(spec, mode);

    std::string fit_name;
    double regularization = 0;
    in >> key >> fit_name >> regularization;
    if (key != "fit") throw std::runtime_error("load_model: expected fit");
    FitSpec<double> fit_spec;
    if (fit_name == "interpolate") fit_spec = FitSpec<double>::interpolate();
    else if (fit_name == "posterior") fit_spec = FitSpec<double>::posterior(regularization);
    else if (fit_name == "penalized") fit_spec = FitSpec<double>::penalized(regularization);
    else throw std::runtime_error("load_model: unknown fit mode " + fit_name);

    const double jitter = read_scalar("jitter");

    Index n = 0;
    in >> key >> n;
    if (key != "sites") throw std::runtime_error("load_model: expected sites");
    MatX<double> pts(spec.dim, n);
    for (Index j = 0; j < n; ++j)
        for (Index a = 0; a < spec.dim; ++a) in >> pts(a, j);
    PointSet<double> sites(std::move(pts));

    Index coeff_count = 0;
    in >> key >> coeff_count;
    if (key != "coefficients") throw std::runtime_error("load_model: expected coefficients");
    if (coeff_count != spec.dim * n)
        throw std::runtime_error("load_model: coefficient count mismatch");
    VecX<double> coefficients(coeff_count);
    for (Index i = 0; i < coeff_count; ++i) in >> coefficients[i];
    if (!in) throw std::runtime_error("load_model: truncated file");

    MatX<double> gram = n > 0 ? assemble_gram(kernel, sites) : MatX<double>(0, 0);
    Eigen::LLT<MatX<double>> llt;
    if (n > 0) {
        MatX<double> shifted = gram;
        const double shift = fit_spec.mode == FitMode::interpolate ? 0.0 : fit_spec.value;
        shifted.diagonal().array() += shift + jitter;
        llt.compute(shifted);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("load_model: stored gram failed to refactorize");
    }
    return GPModel<double>(std::move(kernel), MeanFunction<double>::zero(), std::move(sites),
                           fit_spec, std::move(gram), std::move(llt), std::move(coefficients),
                           jitter, 0);
}

inline GPModel<double> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path);
    return load_model(in);
}

}  // namespace vecgp

#endif  // VECGP_MODEL_IO_HPP
