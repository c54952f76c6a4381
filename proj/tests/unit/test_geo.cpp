#include <cmath>
#include <random>

#include "doctest.h"
#include "locan/geo.hpp"
#include "../support/oracles.hpp"

using locan::EarthModel;
using locan::GeoPoint;

namespace {

GeoPoint random_point(std::mt19937_64& rng) {
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    return GeoPoint(-90.0 + unit() * 180.0, -180.0 + unit() * 360.0);
}

} // namespace

TEST_CASE("geo point validation") {
    CHECK_NOTHROW(GeoPoint(90.0, 180.0));
    CHECK_NOTHROW(GeoPoint(-90.0, -180.0));
    CHECK_THROWS_AS(GeoPoint(90.5, 0.0), std::out_of_range);
    CHECK_THROWS_AS(GeoPoint(-91.0, 0.0), std::out_of_range);
    CHECK_THROWS_AS(GeoPoint(0.0, 180.5), std::out_of_range);
    CHECK_THROWS_AS(GeoPoint(std::nan(""), 0.0), std::out_of_range);
    CHECK_THROWS_AS(EarthModel(0.0), std::out_of_range);
    CHECK_THROWS_AS(EarthModel(-1.0), std::out_of_range);
}

TEST_CASE("haversine km reference values") {
    CHECK(locan::haversine_km({0, 0}, {0, 0}) == 0.0);

    // One degree of equatorial arc: R * pi / 180.
    CHECK(locan::haversine_km({0, 0}, {0, 1}) == doctest::Approx(111.1949266).epsilon(1e-9));

    // New York to Los Angeles, value frozen from an external oracle run.
    CHECK(locan::haversine_km({40.7128, -74.0060}, {34.0522, -118.2437}) ==
          doctest::Approx(3935.746254609723).epsilon(1e-9));

    // Custom earth radius scales linearly.
    CHECK(locan::haversine_km({0, 0}, {0, 1}, EarthModel(6371.0 * 2)) ==
          doctest::Approx(2 * 111.1949266).epsilon(1e-9));
}

TEST_CASE("haversine properties against the independent oracle") {
    std::mt19937_64 rng(20240314);
    const double pi_r = 3.14159265358979323846 * 6371.0;
    double max_rel_err = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const GeoPoint a = random_point(rng);
        const GeoPoint b = random_point(rng);
        const double d = locan::haversine_km(a, b);
        const double d_rev = locan::haversine_km(b, a);
        CHECK(d == d_rev); // symmetric
        CHECK(d >= 0.0);
        CHECK(d <= pi_r + 1e-9);

        const double ref = oracle::distance_km(a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg);
        const double rel = std::fabs(d - ref) / std::max(ref, 1e-12);
        max_rel_err = std::max(max_rel_err, rel);
    }
    CHECK(max_rel_err < 1e-9);
}

TEST_CASE("haversine triangle inequality") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const GeoPoint a = random_point(rng);
        const GeoPoint b = random_point(rng);
        const GeoPoint c = random_point(rng);
        const double ab = locan::haversine_km(a, b);
        const double bc = locan::haversine_km(b, c);
        const double ac = locan::haversine_km(a, c);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("initial bearing") {
    CHECK(locan::bearing_deg({0, 0}, {1, 0}) == doctest::Approx(0.0));
    CHECK(locan::bearing_deg({0, 0}, {0, 1}) == doctest::Approx(90.0));
    CHECK(locan::bearing_deg({0, 0}, {0, -1}) == doctest::Approx(270.0));

    // Frozen from an external oracle run.
    CHECK(locan::bearing_deg({10, 10}, {20, 25}) ==
          doctest::Approx(53.61555076442198).epsilon(1e-12));

    CHECK_THROWS_AS(locan::bearing_deg({10, 10}, {10, 10}), std::domain_error);

    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        const GeoPoint a = random_point(rng);
        const GeoPoint b = random_point(rng);
        if (a.lat_deg == b.lat_deg && a.lon_deg == b.lon_deg) continue;
        const double bearing = locan::bearing_deg(a, b);
        CHECK(bearing >= 0.0);
        CHECK(bearing < 360.0);
        CHECK(bearing == doctest::Approx(oracle::initial_bearing_deg(a.lat_deg, a.lon_deg,
                                                                     b.lat_deg, b.lon_deg))
                             .epsilon(1e-12));
    }
}

TEST_CASE("azimuth offset") {
    CHECK(locan::azimuth_offset_deg(0, 0) == 0.0);
    CHECK(locan::azimuth_offset_deg(350, 10) == doctest::Approx(20.0));
    CHECK(locan::azimuth_offset_deg(10, 350) == doctest::Approx(20.0));
    CHECK(locan::azimuth_offset_deg(90, 300) == doctest::Approx(150.0));
    CHECK(locan::azimuth_offset_deg(0, 180) == doctest::Approx(180.0));

    std::mt19937_64 rng(3);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 1000; ++i) {
        const double offset = locan::azimuth_offset_deg(unit() * 360.0, unit() * 360.0);
        CHECK(offset >= 0.0);
        CHECK(offset <= 180.0);
    }
}
