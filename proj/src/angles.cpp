#include "circreg/angles.hpp"

#include <cmath>

#include "circreg/errors.hpp"

namespace circreg {

double wrap_angle(double x) {
    if (!std::isfinite(x)) {
        throw InvalidInputError("wrap_angle: input is not finite");
    }
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    // fmod can land exactly on 2*pi after the correction above.
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

Angle::Angle(double radians) : value_(wrap_angle(radians)) {}

Angle Angle::rotated(double delta) const { return Angle(value_ + delta); }

AngleVector wrap_angles(std::span<const double> values) {
    AngleVector out;
    out.reserve(values.size());
    for (double v : values) {
        out.emplace_back(v);
    }
    return out;
}

std::vector<double> angle_values(const AngleVector& angles) {
    std::vector<double> out;
    out.reserve(angles.size());
    for (Angle a : angles) {
        out.push_back(a.value());
    }
    return out;
}

double circ_distance(double a, double b) { return 1.0 - std::cos(a - b); }

double geodesic_distance(double a, double b) {
    const double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

double resultant_length(std::span<const double> angles) {
    double c = 0.0;
    double s = 0.0;
    for (double a : angles) {
        c += std::cos(a);
        s += std::sin(a);
    }
    return std::hypot(c, s);
}

double mean_direction(std::span<const double> angles) {
    if (angles.empty()) {
        throw InvalidInputError("mean_direction: empty input");
    }
    double c = 0.0;
    double s = 0.0;
    for (double a : angles) {
        c += std::cos(a);
        s += std::sin(a);
    }
    const double r = std::hypot(c, s);
    if (r < 1e-12 * static_cast<double>(angles.size())) {
        throw ZeroResultantError("mean_direction: resultant length is zero");
    }
    return wrap_angle(std::atan2(s, c));
}

double circular_variance(std::span<const double> angles) {
    if (angles.empty()) {
        throw InvalidInputError("circular_variance: empty input");
    }
    return 1.0 - resultant_length(angles) / static_cast<double>(angles.size());
}

}  // namespace circreg
