#include "briervar/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace briervar {
namespace {

// Coefficients of the near-minimax rational approximations from
// W. J. Cody, "Rational Chebyshev approximation for the error function",
// Math. Comp. 23 (1969), 631-637, as published in netlib SPECFUN.
constexpr double kA[5] = {3.16112374387056560, 1.13864154151050156e2, 3.77485237685302021e2,
                          3.20937758913846947e3, 1.85777706184603153e-1};
constexpr double kB[4] = {2.36012909523441209e1, 2.44024637934444173e2, 1.28261652607737228e3,
                          2.84423683343917062e3};
constexpr double kC[9] = {5.64188496988670089e-1, 8.88314979438837594, 6.61191906371416295e1,
                          2.98635138197400131e2,  8.81952221241769090e2, 1.71204761263407058e3,
                          2.05107837782607147e3,  1.23033935479799725e3, 2.15311535474403846e-8};
constexpr double kD[8] = {1.57449261107098347e1, 1.17693950891312499e2, 5.37181101862009858e2,
                          1.62138957456669019e3, 3.29079923573345963e3, 4.36261909014324716e3,
                          3.43936767414372164e3, 1.23033935480374942e3};
constexpr double kP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
                          1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047, 5.27905102951428412e-1,
                          6.05183413124413191e-2, 2.33520497626869185e-3};

constexpr double kInvSqrtPi = 5.6418958354775628695e-1;
constexpr double kThreshold = 0.46875;
constexpr double kXBig = 26.543;  // erfc underflows beyond this

// erf on [-threshold, threshold].
double erf_small(double x) {
    const double z = x * x;
    double num = kA[4] * z;
    double den = z;
    for (int i = 0; i < 3; ++i) {
        num = (num + kA[i]) * z;
        den = (den + kB[i]) * z;
    }
    return x * (num + kA[3]) / (den + kB[3]);
}

// erfc for threshold < |x|; takes y = |x|.
double erfc_tail(double y) {
    double result;
    if (y <= 4.0) {
        double num = kC[8] * y;
        double den = y;
        for (int i = 0; i < 7; ++i) {
            num = (num + kC[i]) * y;
            den = (den + kD[i]) * y;
        }
        result = (num + kC[7]) / (den + kD[7]);
    } else if (y < kXBig) {
        const double z = 1.0 / (y * y);
        double num = kP[5] * z;
        double den = z;
        for (int i = 0; i < 4; ++i) {
            num = (num + kP[i]) * z;
            den = (den + kQ[i]) * z;
        }
        result = z * (num + kP[4]) / (den + kQ[4]);
        result = (kInvSqrtPi - result) / y;
    } else {
        return 0.0;
    }
    // exp(-y^2) split into an exact part and a small correction to dodge the
    // cancellation in forming y*y directly.
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

}  // namespace

double erf_rational(double x) {
    const double y = std::fabs(x);
    if (y <= kThreshold) return erf_small(x);
    const double tail = 1.0 - erfc_tail(y);
    return x < 0.0 ? -tail : tail;
}

double erfc_rational(double x) {
    const double y = std::fabs(x);
    if (y <= kThreshold) return 1.0 - erf_small(x);
    const double tail = erfc_tail(y);
    return x < 0.0 ? 2.0 - tail : tail;
}

double gaussian_cdf(double x) {
    constexpr double kInvSqrt2 = 7.07106781186547524401e-1;
    return 0.5 * erfc_rational(-x * kInvSqrt2);
}

double gaussian_cdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("gaussian_cdf requires sigma > 0");
    return gaussian_cdf((x - mu) / sigma);
}

}  // namespace briervar
