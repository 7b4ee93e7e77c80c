#pragma once

#include <cmath>
#include <numbers>

namespace skycloud {

/// Mean Earth radius (IUGG), kilometres.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct GeoPoint {
  double lat = 0.0;  // degrees north
  double lon = 0.0;  // degrees east
};

inline bool in_range(const GeoPoint& p) {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

/// Great-circle distance by the haversine formula.
template <typename Scalar = double>
Scalar haversine_km(Scalar lat1, Scalar lon1, Scalar lat2, Scalar lon2) {
  constexpr Scalar kDeg = std::numbers::pi_v<Scalar> / Scalar(180);
  const Scalar dlat = (lat2 - lat1) * kDeg;
  const Scalar dlon = (lon2 - lon1) * kDeg;
  const Scalar s_lat = std::sin(dlat / 2);
  const Scalar s_lon = std::sin(dlon / 2);
  const Scalar h = s_lat * s_lat + std::cos(lat1 * kDeg) * std::cos(lat2 * kDeg) * s_lon * s_lon;
  return Scalar(2) * Scalar(kEarthRadiusKm) * std::asin(std::sqrt(std::min(Scalar(1), h)));
}

inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  return haversine_km<double>(a.lat, a.lon, b.lat, b.lon);
}

}  // namespace skycloud
