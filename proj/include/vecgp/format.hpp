#ifndef VECGP_FORMAT_HPP
#define VECGP_FORMAT_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace vecgp {

/// 17 significant digits: round-trips IEEE doubles exactly, so identical runs
/// produce byte-identical files.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace vecgp

#endif  // VECGP_FORMAT_HPP
