#pragma once

namespace circreg {

enum class KernelKind {
    VonMises,  // circular predictor, concentration parameter kappa
    Gaussian,  // linear predictor, bandwidth parameter h
};

// A smoothing kernel together with its parameter. Use the factories so the
// parameter is validated at construction.
struct KernelSpec {
    KernelKind kind;
    double param;

    static KernelSpec von_mises(double kappa);
    static KernelSpec gaussian(double h);
};

// Kernel weight at signed offset t from the evaluation point.
//
// Von Mises: exp(kappa * cos t) / (2 pi I0(kappa)), computed in the
// exponentially scaled form so large kappa does not overflow. kappa = 0 is
// the uniform density 1 / (2 pi).
// Gaussian: the N(0, h^2) density at t.
double kernel_eval(const KernelSpec& spec, double t);

}  // namespace circreg
