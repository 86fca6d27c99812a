#pragma once

#include <cmath>
#include <cstdint>

namespace qkp {

// Value stored as mant * 2^exp2 with |mant| in [0.5, 1).  The determinant
// minors grow like xi_+^m and overflow double precision near m ~ 700, so
// every recursion that runs deep keeps its state in this form.
struct ScaledValue {
    double mant = 0.0;
    std::int64_t exp2 = 0;

    static ScaledValue from_double(double v) {
        ScaledValue s;
        if (v == 0.0 || !std::isfinite(v)) {
            s.mant = v;
            return s;
        }
        int e = 0;
        s.mant = std::frexp(v, &e);
        s.exp2 = e;
        return s;
    }

    ScaledValue& normalize() {
        if (mant == 0.0 || !std::isfinite(mant)) {
            exp2 = 0;
            return *this;
        }
        int e = 0;
        mant = std::frexp(mant, &e);
        exp2 += e;
        return *this;
    }

    bool is_zero() const { return mant == 0.0; }

    int sign() const { return (mant > 0.0) - (mant < 0.0); }

    // May overflow to +-inf or underflow to 0; callers that care use log_abs().
    double to_double() const {
        if (mant == 0.0) return 0.0;
        if (exp2 > 2000) return mant > 0 ? HUGE_VAL : -HUGE_VAL;
        if (exp2 < -2000) return mant > 0 ? 0.0 : -0.0;
        return std::ldexp(mant, static_cast<int>(exp2));
    }

    double log_abs() const {
        if (mant == 0.0) return -HUGE_VAL;
        return std::log(std::fabs(mant)) + static_cast<double>(exp2) * 0.6931471805599453;
    }
};

inline ScaledValue operator*(ScaledValue a, double s) {
    a.mant *= s;
    return a.normalize();
}

inline ScaledValue operator*(ScaledValue a, ScaledValue b) {
    ScaledValue r;
    r.mant = a.mant * b.mant;
    r.exp2 = a.exp2 + b.exp2;
    return r.normalize();
}

inline ScaledValue operator+(ScaledValue a, ScaledValue b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.exp2 < b.exp2) {
        ScaledValue t = a;
        a = b;
        b = t;
    }
    std::int64_t d = b.exp2 - a.exp2;  // <= 0
    ScaledValue r;
    r.mant = a.mant + (d < -1074 ? 0.0 : std::ldexp(b.mant, static_cast<int>(d)));
    r.exp2 = a.exp2;
    return r.normalize();
}

inline ScaledValue operator-(ScaledValue a, ScaledValue b) {
    b.mant = -b.mant;
    return a + b;
}

// Ratio collapsed back to double; overflows honestly if the exponents differ
// by more than the double range.
inline double ratio(ScaledValue num, ScaledValue den) {
    if (den.is_zero()) return num.mant / den.mant;  // inf or nan, as IEEE says
    double m = num.mant / den.mant;
    std::int64_t e = num.exp2 - den.exp2;
    if (e > 2000) return m > 0 ? HUGE_VAL : -HUGE_VAL;
    if (e < -2000) return 0.0;
    return std::ldexp(m, static_cast<int>(e));
}

}  // namespace qkp
