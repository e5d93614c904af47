#pragma once

#include "starsplit/manifold.hpp"
#include "starsplit/metric.hpp"

namespace starsplit {

// Lambda^k u.
Form lambda_power(const HermitianMetric& g, const Form& u, int k);
// Scalar value of a 0-form (its constant coefficient).
cplx scalar_value(const Form& u);

// T(alpha) = -alpha + (Lambda alpha / (n-1)) omega on (1,1)-forms.
Form T(const HermitianMetric& g, const Form& alpha);
// T as the composite (omega_{n-2} ^ .)^{-1} o *.
Form T_composite(const HermitianMetric& g, const Form& alpha);
// S(Omega) = -Omega + (Lambda(*Omega) / (n-1)) omega_{n-1} on (n-1,n-1)-forms.
Form S(const HermitianMetric& g, const Form& big_omega);
// S as the composite * o (omega_{n-2} ^ .)^{-1}.
Form S_composite(const HermitianMetric& g, const Form& big_omega);

// P(alpha) = (omega_{n-2} ^ .)^{-1}(i ddbar alpha ^ omega_{n-3}); n >= 3.
Form P(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha);
// Lambda(i ddbar alpha) - Lambda^2(i ddbar alpha) omega / (2(n-1)).
Form P_trace(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha);
// R(alpha) = (i del^* dbar^* alpha) omega.
Form R(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha);
// Q(alpha) = P + R - i del Lambda(dbar alpha) - i del^*(omega ^ dbar^* alpha)
//            - dbar^* Lambda(dbar alpha) omega / (n-1).
Form Q(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha);

// Torsion operators tau = [Lambda, del omega ^ .] and taubar = [Lambda, dbar omega ^ .].
Form torsion_tau(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u);
Form torsion_tau_bar(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u);

}  // namespace starsplit
