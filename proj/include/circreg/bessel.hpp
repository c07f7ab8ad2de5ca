#pragma once

namespace circreg {

// Modified Bessel function of the first kind and order zero, I0(kappa).
//
// With scaled=true returns exp(-kappa) * I0(kappa), which stays finite for
// all kappa and is the form needed by the von Mises density at large
// concentrations. Power series below kappa = 15, asymptotic expansion of
// the scaled function above.
//
// Throws InvalidInputError for negative or non-finite kappa.
double bessel_i0(double kappa, bool scaled = false);

}  // namespace circreg
