#include "findex/numeric.hpp"

#include <cmath>

namespace findex {

double bisect_root(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0) != (fm < 0)) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace findex
