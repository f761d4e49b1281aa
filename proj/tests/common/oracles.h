#ifndef AGREEMENT_TESTS_ORACLES_H_
#define AGREEMENT_TESTS_ORACLES_H_

// Reference values computed independently of the library: closed forms
// evaluated by hand or with arbitrary-precision arithmetic, and a direct
// numerical integration of the chi-square(1) density.

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

// P(X > x) for X ~ chi2(1). With X = U^2, U standard normal, this equals
// the integral of 2 phi(u) over [sqrt(x), inf). Composite Simpson over a
// window wide enough that the remaining tail is below 1e-30.
inline double ChiSquare1Survival(double x) {
  const double a = std::sqrt(x);
  const double b = a + 14.0;
  const int n = 200000;
  const double h = (b - a) / n;
  auto f = [](double u) { return 2.0 * std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); };
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

struct FrozenSurvival {
  double chi2;
  double p_value;
};

// 40-digit evaluations of erfc(sqrt(x / 2)), rounded to double.
inline const std::vector<FrozenSurvival>& FrozenSurvivals() {
  static const std::vector<FrozenSurvival> v = {
      {0.0, 1.0},
      {0.5, 0.47950012218695346232},
      {1.0, 0.31731050786291410283},
      {2.0, 0.15729920705028513066},
      {3.0, 0.083264516663550401855},
      {5.0, 0.025347318677468263932},
      {10.0, 0.0015654022580025496775},
      {17.344, 0.00003118813667570819025},
      {50.0, 1.5374597944280348502e-12},
  };
  return v;
}

// (2 - 18)^2 / 18 + (98 - 82)^2 / 82
inline constexpr double kChi2TwoOfHundred = 256.0 / 18.0 + 256.0 / 82.0;

// Shrinkage oracle for counts {a: 7, b: 2, c: 1}: n = 10, V = 3,
// p_ML = (0.7, 0.2, 0.1), sum p^2 = 0.54,
// sum (1/3 - p)^2 = 0.20666..., lambda = 0.46 / (9 * 0.20666...) = 23 / 93.
inline constexpr double kLambda721 = 23.0 / 93.0;
inline constexpr double kProbs721[] = {0.6093189964157705, 0.23297491039426524,
                                       0.15770609318996417};
inline constexpr double kEntropy721Shrunk = 1.3453924293549944;
inline constexpr double kEntropy721Ml = 1.1567796494470395;

// Pearson r for [1, 2, 3, 4] vs [2, 4, 5, 9]: cross-deviation sum 11,
// squared deviations 5 and 26 -> 11 / sqrt(130).
inline const double kPearson1234 = 11.0 / std::sqrt(130.0);

}  // namespace oracle

#endif  // AGREEMENT_TESTS_ORACLES_H_
