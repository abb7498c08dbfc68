#pragma once

#include <complex>
#include <map>

namespace findex {

/// Real trigonometric polynomial on [0,1], stored as complex Fourier
/// coefficients f(t) = sum_m c_m e^{i 2 pi m t} with c_{-m} = conj(c_m).
/// Products and integrals of integer-frequency trig factors are exact up to
/// floating-point rounding, which keeps Galerkin couplings quadrature-free.
class TrigScalar {
  public:
    TrigScalar() = default;

    static TrigScalar constant(double c);
    static TrigScalar cosine(int k);  // cos(2 pi k t)
    static TrigScalar sine(int k);    // sin(2 pi k t)

    TrigScalar operator*(const TrigScalar& other) const;
    TrigScalar operator+(const TrigScalar& other) const;
    TrigScalar& operator+=(const TrigScalar& other);
    TrigScalar scaled(double s) const;

    /// Integral over one period: the frequency-zero coefficient.
    double integral() const;

    double operator()(double t) const;

    int max_frequency() const;

  private:
    std::map<int, std::complex<double>> coeff_;
    void add(int freq, std::complex<double> c);
};

/// Exact value of the triple product integral
///   int_0^1 T1(2 pi f1 t) T2(2 pi f2 t) T3(2 pi f3 t) dt,
/// where each factor is cos (is_sin=false) or sin (is_sin=true).
double trig_triple_moment(bool s1, int f1, bool s2, int f2, bool s3, int f3);

}  // namespace findex
