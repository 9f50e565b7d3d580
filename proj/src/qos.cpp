#include "d2dsim/qos.hpp"

#include <cmath>

namespace d2dsim {

TokenBucket TrafficParams::token_bucket() const {
  const double bits_per_packet = packet_size_bytes * kBitsPerByte;
  return {token_rate_packets_per_s * bits_per_packet, bucket_size_packets * bits_per_packet};
}

double sinr_threshold(double tau_s, double phi_bps, double omega_bits,
                      double channel_bandwidth_hz) {
  if (!(tau_s > 0.0) || !std::isfinite(tau_s))
    throw std::domain_error("latency budget tau must be positive");
  if (!(channel_bandwidth_hz > 0.0) || !std::isfinite(channel_bandwidth_hz))
    throw std::domain_error("channel bandwidth W must be positive");
  if (!(phi_bps >= 0.0) || !(omega_bits >= 0.0))
    throw std::domain_error("token rate and bucket size must be non-negative");
  const double spectral_efficiency =
      (omega_bits + phi_bps * tau_s) / (channel_bandwidth_hz * tau_s);
  // exp2m1 form keeps small thresholds accurate
  return std::expm1(spectral_efficiency * std::log(2.0));
}

QosSpec make_qos(const TrafficParams& traffic, double channel_bandwidth_hz) {
  const TokenBucket bucket = traffic.token_bucket();
  QosSpec q;
  q.tau_s = traffic.latency_s;
  q.phi_bps = bucket.rate_bps;
  q.omega_bits = bucket.bucket_bits;
  q.channel_bandwidth_hz = channel_bandwidth_hz;
  q.sinr_min_cu = sinr_threshold(q.tau_s, q.phi_bps, q.omega_bits, channel_bandwidth_hz);
  q.sinr_min_d2d = q.sinr_min_cu;
  return q;
}

}  // namespace d2dsim
