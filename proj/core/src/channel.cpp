#include "mafl/channel.hpp"

#include <cmath>

#include "mafl/errors.hpp"

namespace mafl {

FadingState::FadingState(std::uint64_t master_seed, int vehicle_id, double rho)
    : coeff_(0.0, 0.0),
      rng_(derive_seed(master_seed, "fading", static_cast<std::uint64_t>(vehicle_id))),
      rho_(rho) {
  coeff_ = rng_.complex_normal();
}

void FadingState::step() {
  std::complex<double> innovation = rng_.complex_normal();
  coeff_ = rho_ * coeff_ + std::sqrt(1.0 - rho_ * rho_) * innovation;
  ++slot_;
}

void FadingState::advance_to_slot(long slot) {
  while (slot_ < slot) step();
}

Position3D position_at(const VehicleProfile& profile, const SimConfig& cfg,
                       double t) {
  double x = profile.initial_x + cfg.velocity * t;
  if (cfg.boundary_policy == BoundaryPolicy::wrap) {
    // map into [-R, +R) on the 2R-wide segment
    double width = 2.0 * cfg.coverage_half_width;
    x = std::fmod(x + cfg.coverage_half_width, width);
    if (x < 0) x += width;
    x -= cfg.coverage_half_width;
  }
  return {x, cfg.lane_offset, 0.0};
}

double distance_to_rsu(const Position3D& p, const SimConfig& cfg) {
  double dz = p.z - cfg.rsu_height;
  return std::sqrt(p.x * p.x + p.y * p.y + dz * dz);
}

double tx_rate(const SimConfig& cfg, double gain, double distance_m) {
  if (distance_m <= 0.0)
    throw NumericError("tx_rate: distance must be positive");
  double snr = cfg.tx_power * gain * std::pow(distance_m, -cfg.path_loss_exp) /
               cfg.noise_power;
  return cfg.bandwidth * std::log2(1.0 + snr);
}

double upload_delay(const SimConfig& cfg, double rate_bps) {
  if (rate_bps <= 0.0)
    throw LinkUnusableError("upload_delay: link rate is zero");
  return cfg.model_size_bits / rate_bps;
}

}  // namespace mafl
