#include "asepqh/qfun.hpp"

#include <cmath>

namespace asepqh {

int qproduct_terms(double q) {
    if (q <= 0.0) return 1;
    const int n = static_cast<int>(std::ceil(std::log(1e-17) / std::log(q)));
    return n < 1 ? 1 : n;
}

double qpoch(double z, double q, int n) {
    double prod = 1.0;
    double zq = z;
    for (int k = 0; k < n; ++k) {
        prod *= 1.0 - zq;
        zq *= q;
    }
    return prod;
}

std::complex<double> qpoch(std::complex<double> z, double q, int n) {
    std::complex<double> prod = 1.0;
    std::complex<double> zq = z;
    for (int k = 0; k < n; ++k) {
        prod *= 1.0 - zq;
        zq *= q;
    }
    return prod;
}

double qpoch_inf(double z, double q) {
    return qpoch(z, q, qproduct_terms(q));
}

double qpoch_pair_inf(double re, double abs2, double q) {
    const int n = qproduct_terms(q);
    double prod = 1.0;
    double qk = 1.0;
    for (int k = 0; k < n; ++k) {
        prod *= 1.0 - 2.0 * re * qk + abs2 * qk * qk;
        qk *= q;
    }
    return prod;
}

double qnum(int n, double q) {
    double s = 0.0;
    double qk = 1.0;
    for (int k = 0; k < n; ++k) {
        s += qk;
        qk *= q;
    }
    return s;
}

double polyval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

std::vector<double> polyder(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    return d;
}

} // namespace asepqh
