#pragma once

#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "graftlab/schwarzian_dev.hpp"

namespace graftlab::testing {

// Ratio of solutions of w'' = (9/8) z w from their Taylor series at 0, in
// 50-digit arithmetic. The recessive solution of sector k is Ai(kappa u),
// u = z exp(-2 pi i k / 3), kappa^3 = 9/8; the dominant one has w(0) = 1,
// w'(0) = 0.
class AiryOracle {
 public:
  using Cx = boost::multiprecision::cpp_complex_50;

  static Cx series(const Cx& z, const Cx& w0, const Cx& dw0) {
    const Cx a(Real(9) / 8);
    Cx c[3] = {w0, dw0, Cx(0)};
    Cx sum = w0 + dw0 * z;
    Cx zn = z * z;
    // c_{n+3} = a c_n / ((n + 3)(n + 2)); z^{n+3} accumulated in zn
    Real recent = 0;
    for (int n = 0; n < 3000; ++n) {
      const Cx next = a * c[n % 3] / Real((n + 3) * (n + 2));
      c[n % 3] = next;
      zn *= z;
      const Cx term = next * zn;
      sum += term;
      recent = std::max(recent, Real(abs(term)));
      // chains with zero start vanish, so test once per full period
      if (n % 3 == 2) {
        if (n > 30 && recent < Real("1e-55") * abs(sum)) break;
        recent = 0;
      }
    }
    return sum;
  }

  static std::complex<double> ratio(std::complex<double> z, int sector) {
    static const Real ai0("0.35502805388781723926006318600418317639797917419918");
    static const Real dai0("-0.25881940379280679840518356018920396347909113835493");
    const Real kappa = boost::multiprecision::cbrt(Real(9) / 8);
    const double ang = -2.0 * std::numbers::pi * sector / 3.0;
    const Cx u = Cx(Real(z.real()), Real(z.imag())) * Cx(Real(std::cos(ang)), Real(std::sin(ang)));
    const Cx rec = series(u, Cx(ai0), Cx(kappa * dai0));
    const Cx dom = series(Cx(Real(z.real()), Real(z.imag())), Cx(1), Cx(0));
    const Cx r = rec / dom;
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
  }

  // The model error computed from the series ratio with the same scale fit
  // and arc sampling as model_compare.
  static double model_error(double R, int sector, int m, const ModelCompareOptions& opt = {}) {
    const AntiStokesSector s{sector};
    const double c = s.center();
    std::complex<double> num = 0.0;
    double den = 0.0;
    for (double off : {0.0, opt.anchor_spread, -opt.anchor_spread}) {
      const std::complex<double> z = std::polar(opt.anchor_radius, c + off);
      const std::complex<double> e = model_function(s, z);
      num += std::conj(e) * ratio(z, sector);
      den += std::norm(e);
    }
    const std::complex<double> lambda = num / den;
    double worst = 0.0;
    for (double side : {1.0, -1.0}) {
      for (int i = 0; i <= opt.arc_points; ++i) {
        const std::complex<double> z = std::polar(R, c + side * AntiStokesSector::kHalfWidth / 3.0 * i / opt.arc_points);
        worst = std::max(worst, std::abs(ratio(z, sector) / lambda - model_function(s, z)) * std::pow(R, m));
      }
    }
    return worst;
  }

 private:
  using Real = boost::multiprecision::cpp_bin_float_50;
};

}  // namespace graftlab::testing
