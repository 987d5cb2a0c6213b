#include "vecgp/config.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vecgp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strip a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& token, const std::string& key) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad number for '" + key + "': " + token);
    }
    if (used != token.size())
        throw std::runtime_error("config: trailing characters in number for '" + key + "'");
    return v;
}

ConfigFile::Value parse_value(const std::string& raw, const std::string& key) {
    const std::string token = trim(raw);
    if (token.empty()) throw std::runtime_error("config: empty value for '" + key + "'");
    if (token == "true") return true;
    if (token == "false") return false;
    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"')
            throw std::runtime_error("config: unterminated string for '" + key + "'");
        return token.substr(1, token.size() - 2);
    }
    if (token.front() == '[') {
        if (token.back() != ']')
            throw std::runtime_error("config: unterminated array for '" + key + "'");
        std::string body = token.substr(1, token.size() - 2);
        std::vector<std::string> items;
        std::string current;
        bool quoted = false;
        for (char ch : body) {
            if (ch == '"') quoted = !quoted;
            if (ch == ',' && !quoted) {
                items.push_back(trim(current));
                current.clear();
            } else {
                current += ch;
            }
        }
        if (!trim(current).empty()) items.push_back(trim(current));
        if (items.empty()) return std::vector<double>{};
        if (!items.front().empty() && items.front().front() == '"') {
            std::vector<std::string> out;
            for (const auto& item : items) {
                if (item.size() < 2 || item.front() != '"' || item.back() != '"')
                    throw std::runtime_error("config: bad string array for '" + key + "'");
                out.push_back(item.substr(1, item.size() - 2));
            }
            return out;
        }
        std::vector<double> out;
        for (const auto& item : items) out.push_back(parse_number(item, key));
        return out;
    }
    return parse_number(token, key);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
    ConfigFile file;
    std::string line, section;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: bad section header at line " +
                                         std::to_string(line_number));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at line " +
                                     std::to_string(line_number));
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("config: empty key at line " + std::to_string(line_number));
        const std::string full = section.empty() ? key : section + "." + key;
        file.values_[full] = parse_value(line.substr(eq + 1), full);
    }
    return file;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse(in);
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

double ConfigFile::number(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    throw std::runtime_error("config: '" + key + "' is not a number");
}

double ConfigFile::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

bool ConfigFile::boolean_or(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const bool* v = std::get_if<bool>(&it->second)) return *v;
    throw std::runtime_error("config: '" + key + "' is not a boolean");
}

std::string ConfigFile::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
    throw std::runtime_error("config: '" + key + "' is not a string");
}

std::string ConfigFile::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

std::vector<double> ConfigFile::numbers(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    if (const double* v = std::get_if<double>(&it->second)) return {*v};
    throw std::runtime_error("config: '" + key + "' is not a number array");
}

std::vector<std::string> ConfigFile::texts(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    if (const auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
    if (const std::string* v = std::get_if<std::string>(&it->second)) return {*v};
    throw std::runtime_error("config: '" + key + "' is not a string array");
}

NormRequest NormRequest::parse(const std::string& tag) {
    NormRequest req;
    req.tag = tag;
    std::string body = tag;
    if (body.rfind("L", 0) != 0) throw std::runtime_error("norm tag must look like L2_s0: " + tag);
    const auto underscore = body.find("_s");
    if (underscore == std::string::npos)
        throw std::runtime_error("norm tag must look like L2_s0: " + tag);
    const std::string qpart = body.substr(1, underscore - 1);
    const std::string spart = body.substr(underscore + 2);
    if (qpart == "inf")
        req.q = std::numeric_limits<double>::infinity();
    else if (qpart == "1")
        req.q = 1;
    else if (qpart == "2")
        req.q = 2;
    else
        throw std::runtime_error("norm tag q must be 1, 2 or inf: " + tag);
    if (spart == "0")
        req.s = 0;
    else if (spart == "1")
        req.s = 1;
    else
        throw std::runtime_error("norm tag s must be 0 or 1: " + tag);
    return req;
}

double NormRequest::gamma() const { return std::isinf(q) ? q : std::max(2.0, q); }

namespace {

// prefix carries its separator: "kernel." or "field.combo_"
ScalarKernelSpec<double> kernel_spec_from(const ConfigFile& file, const std::string& prefix,
                                          Index dim) {
    const std::string family = file.text_or(prefix + "family", "matern");
    const double kappa = file.number_or(prefix + "kappa", 1.0);
    const double alpha2 = file.number_or(prefix + "alpha2", 1.0);
    if (family == "gaussian") return ScalarKernelSpec<double>::gaussian(kappa, alpha2, dim);
    if (family == "matern") {
        const double nu = file.number_or(prefix + "nu", 2.5);
        return ScalarKernelSpec<double>::matern(nu, kappa, alpha2, dim);
    }
    if (family == "wendland") {
        const int k = static_cast<int>(file.number_or(prefix + "k", 2));
        return ScalarKernelSpec<double>::wendland(k, kappa, alpha2, dim);
    }
    throw std::runtime_error("config: unknown kernel family '" + family + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const ConfigFile& file) {
    ExperimentConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(file.number_or("seed", 0));

    const Index dim = static_cast<Index>(file.number_or("domain.dim", 2));
    Vecd lower = Vecd::Zero(dim), upper = Vecd::Ones(dim);
    if (file.has("domain.lower")) {
        auto values = file.numbers("domain.lower");
        if (static_cast<Index>(values.size()) != dim)
            throw std::runtime_error("config: domain.lower must have dim entries");
        for (Index i = 0; i < dim; ++i) lower[i] = values[static_cast<std::size_t>(i)];
    }
    if (file.has("domain.upper")) {
        auto values = file.numbers("domain.upper");
        if (static_cast<Index>(values.size()) != dim)
            throw std::runtime_error("config: domain.upper must have dim entries");
        for (Index i = 0; i < dim; ++i) upper[i] = values[static_cast<std::size_t>(i)];
    }
    cfg.domain = Domain<double>(lower, upper);

    cfg.kernel_spec = kernel_spec_from(file, "kernel.", dim);
    const std::string mode = file.text_or("kernel.mode", "divergence_free");
    if (mode == "divergence_free") cfg.kernel_mode = KernelMode::divergence_free;
    else if (mode == "curl_free") cfg.kernel_mode = KernelMode::curl_free;
    else if (mode == "diagonal") cfg.kernel_mode = KernelMode::diagonal;
    else throw std::runtime_error("config: unknown kernel mode '" + mode + "'");

    const std::string kind = file.text_or("field.kind", dim == 3 ? "vectorpotential3d" : "stream2d");
    if (kind == "stream2d") cfg.field_kind = FieldKind::stream2d;
    else if (kind == "gradient") cfg.field_kind = FieldKind::gradient;
    else if (kind == "vectorpotential3d") cfg.field_kind = FieldKind::vectorpotential3d;
    else if (kind == "kernel_combo") cfg.field_kind = FieldKind::kernel_combo;
    else throw std::runtime_error("config: unknown field kind '" + kind + "'");
    cfg.field_amplitude = file.number_or("field.amplitude", 1.0);
    cfg.field_a = file.number_or("field.a", 1.0);
    cfg.field_b = file.number_or("field.b", 1.0);
    cfg.field_c = file.number_or("field.c", 1.0);
    cfg.combo_centers = static_cast<Index>(file.number_or("field.combo_centers", 4));
    cfg.combo_seed = static_cast<std::uint64_t>(file.number_or("field.combo_seed", 7));
    cfg.combo_uses_own_kernel = !file.has("field.combo_family");
    if (!cfg.combo_uses_own_kernel)
        cfg.combo_spec = kernel_spec_from(file, "field.combo_", dim);
    cfg.noise_sigma = file.number_or("field.noise_sigma", 0.0);

    const std::string fit_mode = file.text_or("fit.mode", "interpolate");
    if (fit_mode == "interpolate") cfg.fit_mode = FitMode::interpolate;
    else if (fit_mode == "posterior") cfg.fit_mode = FitMode::posterior;
    else if (fit_mode == "penalized") cfg.fit_mode = FitMode::penalized;
    else throw std::runtime_error("config: unknown fit mode '" + fit_mode + "'");
    cfg.sigma2 = file.number_or("fit.sigma2", 0.0);
    cfg.lambda_auto = file.boolean_or("fit.lambda_auto", false);
    if (file.has("fit.lambda")) {
        // lambda is either a number or the literal "auto"
        try {
            cfg.lambda = file.number("fit.lambda");
        } catch (const std::exception&) {
            if (file.text("fit.lambda") != "auto")
                throw std::runtime_error("config: fit.lambda must be a number or \"auto\"");
            cfg.lambda_auto = true;
        }
    }
    if (cfg.lambda_auto && !cfg.kernel_spec.derived_sobolev_order())
        throw std::runtime_error("config: lambda_auto needs a finite sobolev order (not gaussian)");

    const std::string points = file.text_or("points.kind", "grid");
    if (points == "grid") cfg.point_kind = PointKind::grid;
    else if (points == "halton") cfg.point_kind = PointKind::halton;
    else if (points == "uniform_random") cfg.point_kind = PointKind::uniform_random;
    else throw std::runtime_error("config: unknown points kind '" + points + "'");
    if (file.has("points.ladder")) {
        cfg.ladder.clear();
        for (double v : file.numbers("points.ladder")) cfg.ladder.push_back(static_cast<Index>(v));
        if (cfg.ladder.empty()) throw std::runtime_error("config: points.ladder is empty");
        for (std::size_t i = 1; i < cfg.ladder.size(); ++i)
            if (cfg.ladder[i] <= cfg.ladder[i - 1])
                throw std::runtime_error("config: points.ladder must be strictly increasing");
    }
    cfg.probe_resolution = static_cast<Index>(file.number_or("points.probe_resolution",
                                                             dim == 3 ? 41 : 201));

    cfg.eval_per_axis = static_cast<Index>(file.number_or("evaluation.per_axis", dim == 3 ? 10 : 24));
    cfg.boundary_margin = file.number_or("evaluation.boundary_margin", -1.0);
    if (file.has("evaluation.norms")) {
        cfg.norms.clear();
        for (const auto& tag : file.texts("evaluation.norms"))
            cfg.norms.push_back(NormRequest::parse(tag));
        if (cfg.norms.empty()) throw std::runtime_error("config: evaluation.norms is empty");
    }

    cfg.sample_source = file.text_or("sample.source", "posterior");
    if (cfg.sample_source != "prior" && cfg.sample_source != "posterior" &&
        cfg.sample_source != "kl")
        throw std::runtime_error("config: sample.source must be prior, posterior or kl");
    cfg.sample_count = static_cast<Index>(file.number_or("sample.count", 4));
    cfg.sample_grid_per_axis = static_cast<Index>(file.number_or("sample.grid_per_axis", 8));
    cfg.kl_modes = static_cast<Index>(file.number_or("sample.kl_modes", 16));

    cfg.chebyshev_samples = static_cast<Index>(file.number_or("chebyshev.samples", 10000));
    cfg.chebyshev_probes = static_cast<Index>(file.number_or("chebyshev.probes", 5));
    cfg.certificate_probes = static_cast<Index>(file.number_or("certificate.probes", 200));
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    return from_config(ConfigFile::parse_file(path));
}

AnalyticField<double> ExperimentConfig::make_field() const {
    const Index dim = domain.dimension();
    switch (field_kind) {
        case FieldKind::stream2d: {
            if (dim != 2) throw std::runtime_error("config: stream2d needs a 2-d domain");
            return make_stream_field_2d<double>({{field_amplitude, field_a, field_b}});
        }
        case FieldKind::gradient:
            return make_gradient_field<double>(dim,
                                               {{field_amplitude, field_a, field_b, field_c}});
        case FieldKind::vectorpotential3d: {
            if (dim != 3) throw std::runtime_error("config: vectorpotential3d needs a 3-d domain");
            return make_vectorpotential_field_3d<double>(0.0, 0.0, field_amplitude, field_a,
                                                         field_b, field_c);
        }
        case FieldKind::kernel_combo: {
            auto centers = halton_points(combo_centers, domain);
            Matd betas(dim, combo_centers);
            Rng rng = Rng::stream(combo_seed, 0xbe7a5ULL);
            for (Index j = 0; j < combo_centers; ++j)
                for (Index a = 0; a < dim; ++a)
                    betas(a, j) = field_amplitude * rng.normal();
            return make_kernel_combo(combo_kernel(), centers, betas);
        }
    }
    throw std::runtime_error("config: unknown field kind");
}

std::optional<double> ExperimentConfig::target_smoothness() const {
    if (field_kind != FieldKind::kernel_combo)
        return std::numeric_limits<double>::infinity();  // entire trigonometric targets
    const auto& base = combo_uses_own_kernel ? kernel_spec : combo_spec;
    return base.derived_sobolev_order();
}

}  // namespace vecgp
