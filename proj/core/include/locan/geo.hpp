#pragma once

#include <stdexcept>

namespace locan {

/// A geodetic point. Construction rejects out-of-range coordinates.
struct GeoPoint {
    double lat_deg;
    double lon_deg;

    GeoPoint(double lat, double lon);

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Spherical earth model used by all distance computations.
struct EarthModel {
    double radius_km = 6371.0;

    EarthModel() = default;
    explicit EarthModel(double radius);
};

/// Great-circle distance in km between two points (haversine, spherical earth).
/// Symmetric in its arguments; result lies in [0, pi * radius].
double haversine_km(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth = {});

/// Initial great-circle bearing from one point to another, in degrees
/// clockwise from true north, range [0, 360).
/// Throws std::domain_error if the points coincide (bearing undefined).
double bearing_deg(const GeoPoint& from, const GeoPoint& to);

/// Minimal absolute angular difference between an antenna azimuth and a
/// bearing, wrapping at 360. Result in [0, 180].
double azimuth_offset_deg(double antenna_azimuth_deg, double bearing_to_other_deg);

} // namespace locan
