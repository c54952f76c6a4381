#include "locan/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace locan {

namespace {

constexpr double kPi = std::numbers::pi;

double deg_to_rad(double deg) {
    return kPi * deg / 180.0;
}

} // namespace

GeoPoint::GeoPoint(double lat, double lon) : lat_deg(lat), lon_deg(lon) {
    if (!(lat >= -90.0 && lat <= 90.0)) {
        throw std::out_of_range("latitude out of [-90, 90]: " + std::to_string(lat));
    }
    if (!(lon >= -180.0 && lon <= 180.0)) {
        throw std::out_of_range("longitude out of [-180, 180]: " + std::to_string(lon));
    }
}

EarthModel::EarthModel(double radius) : radius_km(radius) {
    if (!(radius > 0.0)) {
        throw std::out_of_range("earth radius must be positive: " + std::to_string(radius));
    }
}

double haversine_km(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth) {
    const double delta_phi = deg_to_rad(a.lat_deg - b.lat_deg);
    const double delta_lambda = deg_to_rad(a.lon_deg - b.lon_deg);

    const double sin_phi = std::sin(delta_phi / 2.0);
    const double sin_lambda = std::sin(delta_lambda / 2.0);
    double h = sin_phi * sin_phi +
               std::cos(deg_to_rad(a.lat_deg)) * std::cos(deg_to_rad(b.lat_deg)) *
                   sin_lambda * sin_lambda;

    // Floating-point drift can push h marginally outside [0, 1].
    h = std::clamp(h, 0.0, 1.0);

    return 2.0 * earth.radius_km * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

double bearing_deg(const GeoPoint& from, const GeoPoint& to) {
    if (from.lat_deg == to.lat_deg && from.lon_deg == to.lon_deg) {
        throw std::domain_error("bearing undefined for coincident points");
    }

    const double phi1 = deg_to_rad(from.lat_deg);
    const double phi2 = deg_to_rad(to.lat_deg);
    const double delta_lambda = deg_to_rad(to.lon_deg - from.lon_deg);

    const double y = std::sin(delta_lambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) -
                     std::sin(phi1) * std::cos(phi2) * std::cos(delta_lambda);

    const double deg = std::atan2(y, x) * 180.0 / kPi;
    const double wrapped = std::fmod(deg + 360.0, 360.0);
    return wrapped == 360.0 ? 0.0 : wrapped;
}

double azimuth_offset_deg(double antenna_azimuth_deg, double bearing_to_other_deg) {
    const double a = std::fmod(std::fmod(antenna_azimuth_deg, 360.0) + 360.0, 360.0);
    const double b = std::fmod(std::fmod(bearing_to_other_deg, 360.0) + 360.0, 360.0);
    const double diff = std::fabs(a - b);
    return std::min(diff, 360.0 - diff);
}

} // namespace locan
