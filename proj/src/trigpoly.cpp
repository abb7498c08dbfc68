#include "findex/trigpoly.hpp"

#include <cmath>
#include <cstdlib>

namespace findex {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void TrigScalar::add(int freq, std::complex<double> c) {
    auto it = coeff_.find(freq);
    if (it == coeff_.end()) {
        coeff_.emplace(freq, c);
    } else {
        it->second += c;
        if (std::abs(it->second) == 0.0) coeff_.erase(it);
    }
}

TrigScalar TrigScalar::constant(double c) {
    TrigScalar f;
    if (c != 0.0) f.add(0, {c, 0.0});
    return f;
}

TrigScalar TrigScalar::cosine(int k) {
    TrigScalar f;
    if (k == 0) return constant(1.0);
    f.add(k, {0.5, 0.0});
    f.add(-k, {0.5, 0.0});
    return f;
}

TrigScalar TrigScalar::sine(int k) {
    TrigScalar f;
    if (k == 0) return f;  // sin(0) = 0
    // sin = (e^{ik.} - e^{-ik.}) / (2i)
    f.add(k, {0.0, -0.5});
    f.add(-k, {0.0, 0.5});
    return f;
}

TrigScalar TrigScalar::operator*(const TrigScalar& other) const {
    TrigScalar out;
    for (const auto& [m, a] : coeff_)
        for (const auto& [k, b] : other.coeff_) out.add(m + k, a * b);
    return out;
}

TrigScalar TrigScalar::operator+(const TrigScalar& other) const {
    TrigScalar out = *this;
    out += other;
    return out;
}

TrigScalar& TrigScalar::operator+=(const TrigScalar& other) {
    for (const auto& [m, c] : other.coeff_) add(m, c);
    return *this;
}

TrigScalar TrigScalar::scaled(double s) const {
    TrigScalar out;
    if (s == 0.0) return out;
    for (const auto& [m, c] : coeff_) out.coeff_.emplace(m, c * s);
    return out;
}

double TrigScalar::integral() const {
    auto it = coeff_.find(0);
    return it == coeff_.end() ? 0.0 : it->second.real();
}

double TrigScalar::operator()(double t) const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [m, c] : coeff_) acc += c * std::polar(1.0, kTwoPi * m * t);
    return acc.real();
}

int TrigScalar::max_frequency() const {
    int mx = 0;
    for (const auto& [m, c] : coeff_) mx = std::max(mx, std::abs(m));
    return mx;
}

double trig_triple_moment(bool s1, int f1, bool s2, int f2, bool s3, int f3) {
    auto mk = [](bool is_sin, int f) { return is_sin ? TrigScalar::sine(f) : TrigScalar::cosine(f); };
    return (mk(s1, f1) * mk(s2, f2) * mk(s3, f3)).integral();
}

}  // namespace findex
