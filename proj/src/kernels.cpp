#include "circreg/kernels.hpp"

#include <cmath>

#include "circreg/angles.hpp"
#include "circreg/bessel.hpp"
#include "circreg/errors.hpp"

namespace circreg {

KernelSpec KernelSpec::von_mises(double kappa) {
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw InvalidInputError("KernelSpec::von_mises: kappa must be finite and nonnegative");
    }
    return KernelSpec{KernelKind::VonMises, kappa};
}

KernelSpec KernelSpec::gaussian(double h) {
    if (!std::isfinite(h) || h <= 0.0) {
        throw InvalidInputError("KernelSpec::gaussian: h must be finite and positive");
    }
    return KernelSpec{KernelKind::Gaussian, h};
}

double kernel_eval(const KernelSpec& spec, double t) {
    if (!std::isfinite(t)) {
        throw InvalidInputError("kernel_eval: offset must be finite");
    }
    switch (spec.kind) {
        case KernelKind::VonMises: {
            // exp(kappa cos t) / (2 pi I0(kappa))
            //   = exp(kappa (cos t - 1)) / (2 pi exp(-kappa) I0(kappa)),
            // stable for any kappa since cos t - 1 <= 0.
            const double kappa = spec.param;
            const double scaled_i0 = bessel_i0(kappa, /*scaled=*/true);
            return std::exp(kappa * (std::cos(t) - 1.0)) / (kTwoPi * scaled_i0);
        }
        case KernelKind::Gaussian: {
            const double h = spec.param;
            const double z = t / h;
            return std::exp(-0.5 * z * z) / (h * std::sqrt(kTwoPi));
        }
    }
    throw InvalidInputError("kernel_eval: unknown kernel kind");
}

}  // namespace circreg
