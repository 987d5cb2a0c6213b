#ifndef VECGP_CONFIG_HPP
#define VECGP_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "vecgp/fields.hpp"
#include "vecgp/geometry.hpp"
#include "vecgp/gp.hpp"
#include "vecgp/kernels.hpp"

namespace vecgp {

/// Flat key/section config file, TOML-compatible syntax:
///   # comment
///   key = value
///   [section]
///   key = value            numbers, true/false, "strings", [arrays]
/// Keys are addressed as "section.key".
class ConfigFile {
public:
    using Value = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;

    static ConfigFile parse(std::istream& in);
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<std::string> texts(const std::string& key) const;

private:
    std::map<std::string, Value> values_;
};

/// One requested error norm: q in {1, 2, inf}, s in {0, 1}.  Tags look like
/// "L2_s0", "Linf_s1".
struct NormRequest {
    double q = 2;  // infinity() for the max norm
    int s = 0;
    std::string tag;

    static NormRequest parse(const std::string& tag);
    /// gamma = max{2, q} entering the sampling-inequality exponents
    double gamma() const;
};

/// Fully typed experiment configuration assembled from a config file.
struct ExperimentConfig {
    std::uint64_t seed = 0;

    Domain<double> domain = Domain<double>::unit_box(2);

    // kernel block
    ScalarKernelSpec<double> kernel_spec = ScalarKernelSpec<double>::gaussian(1.0, 1.0, 2);
    KernelMode kernel_mode = KernelMode::divergence_free;

    // field block
    FieldKind field_kind = FieldKind::stream2d;
    double field_amplitude = 1.0;
    double field_a = 1.0, field_b = 1.0, field_c = 1.0;
    Index combo_centers = 4;
    std::uint64_t combo_seed = 7;
    bool combo_uses_own_kernel = true;
    ScalarKernelSpec<double> combo_spec = ScalarKernelSpec<double>::gaussian(1.0, 1.0, 2);
    double noise_sigma = 0.0;

    // fit block
    FitMode fit_mode = FitMode::interpolate;
    double sigma2 = 0.0;
    double lambda = 0.0;
    bool lambda_auto = false;

    // points block
    PointKind point_kind = PointKind::grid;
    std::vector<Index> ladder = {5, 9, 17};
    Index probe_resolution = 201;

    // evaluation block
    Index eval_per_axis = 24;
    double boundary_margin = -1.0;  // < 0: one coarsest-level fill distance
    std::vector<NormRequest> norms = {NormRequest::parse("L2_s0"),
                                      NormRequest::parse("Linf_s0")};

    // sample block
    std::string sample_source = "posterior";  // prior | posterior | kl
    Index sample_count = 4;
    Index sample_grid_per_axis = 8;
    Index kl_modes = 16;

    // chebyshev block
    Index chebyshev_samples = 10000;
    Index chebyshev_probes = 5;

    // certificate block
    Index certificate_probes = 200;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_config(const ConfigFile& file);

    MatrixKernel<double> kernel() const { return MatrixKernel<double>(kernel_spec, kernel_mode); }
    MatrixKernel<double> combo_kernel() const {
        return MatrixKernel<double>(combo_uses_own_kernel ? kernel_spec : combo_spec, kernel_mode);
    }

    /// Target field built from the field block.
    AnalyticField<double> make_field() const;

    /// Smoothness beta of the target: the combo's base-kernel order for
    /// kernel_combo targets, infinity for entire trigonometric fields, no
    /// value when the base is gaussian.
    std::optional<double> target_smoothness() const;
};

}  // namespace vecgp

#endif  // VECGP_CONFIG_HPP
