#pragma once

#include <span>
#include <vector>

namespace circreg {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Maps any finite real to its representative in [0, 2*pi).
// Throws InvalidInputError on non-finite input.
double wrap_angle(double x);

// A point on the unit circumference, stored as radians in [0, 2*pi).
class Angle {
public:
    Angle() = default;
    explicit Angle(double radians);

    double value() const { return value_; }

    // Rotation by an arbitrary real offset, result wrapped.
    Angle rotated(double delta) const;

    friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }

private:
    double value_ = 0.0;
};

using AngleVector = std::vector<Angle>;

AngleVector wrap_angles(std::span<const double> values);
std::vector<double> angle_values(const AngleVector& angles);

// Circular (cosine) distance 1 - cos(a - b), in [0, 2].
double circ_distance(double a, double b);

// Geodesic (shorter-arc) distance min{|a-b|, 2*pi - |a-b|}, in [0, pi].
// Inputs may be arbitrary reals; they are reduced mod 2*pi first.
double geodesic_distance(double a, double b);

// Length of the resultant vector (hypot of summed cosines and sines).
double resultant_length(std::span<const double> angles);

// Direction of the resultant vector, wrapped to [0, 2*pi).
// Throws ZeroResultantError when the resultant length is below
// 1e-12 * n (the direction is meaningless below float noise).
double mean_direction(std::span<const double> angles);

// 1 - (resultant length)/n, in [0, 1].
double circular_variance(std::span<const double> angles);

}  // namespace circreg
