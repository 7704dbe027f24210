#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace cspin {

using cplx = std::complex<double>;

// Dense 2x2 complex matrix, row-major. Basis order is (down, up) to match the
// register convention: bit value 1 encodes spin up.
struct Mat2 {
    std::array<cplx, 4> m{};

    cplx& operator()(int r, int c) { return m[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

    static Mat2 identity() {
        Mat2 out;
        out(0, 0) = 1.0;
        out(1, 1) = 1.0;
        return out;
    }

    Mat2 dagger() const {
        Mat2 out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) out(r, c) = std::conj((*this)(c, r));
        return out;
    }

    cplx trace() const { return m[0] + m[3]; }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
    return out;
}

inline Mat2 operator*(cplx s, const Mat2& a) {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.m[i] = s * a.m[i];
    return out;
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.m[i] = a.m[i] - b.m[i];
    return out;
}

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.m[i] = a.m[i] + b.m[i];
    return out;
}

inline double frobenius_norm(const Mat2& a) {
    double s = 0;
    for (const cplx& v : a.m) s += std::norm(v);
    return std::sqrt(s);
}

// Distance between two 2x2 matrices minimized over a global phase applied to b.
inline double phase_distance(const Mat2& a, const Mat2& b) {
    cplx overlap = 0;
    for (int i = 0; i < 4; ++i) overlap += std::conj(b.m[i]) * a.m[i];
    cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
    return frobenius_norm(a - phase * b);
}

}  // namespace cspin
