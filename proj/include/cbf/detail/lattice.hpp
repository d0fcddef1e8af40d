#pragma once

#include <array>
#include <complex>

namespace cbf::detail {

inline double squared_magnitude(int k0, int k1, int k2) {
    return static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1 +
           static_cast<double>(k2) * k2;
}

/// Remove the component of c along k (k != 0): c - k (k.c)/|k|^2.
inline void project_mode(int k0, int k1, int k2, std::complex<double>& c0,
                         std::complex<double>& c1, std::complex<double>& c2) {
    const double kk = squared_magnitude(k0, k1, k2);
    if (kk == 0.0) return;
    const std::complex<double> kdotc = double(k0) * c0 + double(k1) * c1 + double(k2) * c2;
    const std::complex<double> s = kdotc / kk;
    c0 -= double(k0) * s;
    c1 -= double(k1) * s;
    c2 -= double(k2) * s;
}

}  // namespace cbf::detail
