#pragma once

#include <complex>
#include <cstdint>

#include "mafl/config.hpp"
#include "mafl/rng.hpp"

namespace mafl {

struct Position3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// AR(1) Rayleigh fading coefficient for one vehicle. The coefficient starts
// CN(0,1) so the stationary mean power gain |g|^2 is 1, and evolves one step
// per slot:  g' = rho*g + sqrt(1-rho^2)*n,  n ~ CN(0,1).
class FadingState {
 public:
  // Stream seed is derived from (master seed, vehicle id) only, so streams
  // are independent of vehicle iteration order.
  FadingState(std::uint64_t master_seed, int vehicle_id, double rho);

  void step();
  void advance_to_slot(long slot);  // no-op if already there

  double gain() const { return std::norm(coeff_); }
  std::complex<double> coeff() const { return coeff_; }
  long slot() const { return slot_; }

 private:
  std::complex<double> coeff_;
  Rng rng_;
  double rho_;
  long slot_ = 0;
};

// Constant-velocity eastbound position at time t. Under the wrap policy x is
// mapped into [-R, +R); under exit it is left unadjusted (the caller decides
// when the vehicle has left coverage).
Position3D position_at(const VehicleProfile& profile, const SimConfig& cfg,
                       double t);

// Euclidean distance to the RSU antenna at (0, 0, H).
double distance_to_rsu(const Position3D& p, const SimConfig& cfg);

// Shannon uplink rate B*log2(1 + p_m*h*d^-alpha / sigma^2), bits/s.
// Throws on d <= 0.
double tx_rate(const SimConfig& cfg, double gain, double distance_m);

// Payload bits over link rate. Throws LinkUnusableError when rate <= 0.
double upload_delay(const SimConfig& cfg, double rate_bps);

}  // namespace mafl
