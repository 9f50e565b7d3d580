#pragma once

#include <stdexcept>

namespace d2dsim {

inline constexpr double kBitsPerByte = 8.0;

/// Token-bucket shaped control traffic: rate phi and burst omega, both in bits.
struct TokenBucket {
  double rate_bps = 0.0;
  double bucket_bits = 0.0;
};

/// Traffic description as configured: packet counts plus a packet size.
struct TrafficParams {
  double latency_s = 0.020;
  double packet_size_bytes = 32.0;
  double bucket_size_packets = 60.0;
  double token_rate_packets_per_s = 60.0;

  TokenBucket token_bucket() const;
};

struct QosSpec {
  double tau_s = 0.0;
  double phi_bps = 0.0;
  double omega_bits = 0.0;
  double channel_bandwidth_hz = 0.0;
  double sinr_min_cu = 0.0;
  double sinr_min_d2d = 0.0;
};

/// Minimum linear SINR for which a channel of width W drains a burst of
/// omega + phi*tau bits within tau: 2^((omega + phi*tau) / (W*tau)) - 1.
/// Throws std::domain_error for non-positive tau or W, or negative phi/omega.
double sinr_threshold(double tau_s, double phi_bps, double omega_bits,
                      double channel_bandwidth_hz);

QosSpec make_qos(const TrafficParams& traffic, double channel_bandwidth_hz);

}  // namespace d2dsim
