#pragma once

// Constructive constants behind the boundedness argument: the waiting time
// tau(L), the cascade lower bounds l2, l3, l4, the exact threshold L*, the
// polynomial growth envelopes and the global bound certificate M1..M4.

#include <optional>

#include "afb/model.hpp"

namespace afb {

/// Constants of the waiting-time fixed point tau = psi1 + psi2 / (L + a1 tau).
struct FixedPointConstants {
  double psi1;  // delta2 + delta3
  double psi2;  // ln 2 / a8
};

FixedPointConstants fixed_point_constants(const Params& p);

/// Unique positive root of tau = delta2 + delta3 + delta4(L, tau).
/// Throws DomainError for L <= 0.
double tau(const Params& p, double L);

/// delta4(L, t) = ln 2 / (a8 U(L, t)).
double delta4(const Params& p, double L, double t);

/// U(L, t) = L + a1 t, the a priori ceiling on x1 after time t from level L.
double window_upper(const Params& p, double L, double t);

double ell2(const Params& p, double L);
double ell3(const Params& p, double L);
double ell4(const Params& p, double L, double T);

/// L * l4(L, tau(L)), the feedback product guaranteed after the waiting time.
double threshold_map(const Params& p, double L);

/// Exact threshold: the unique L* with threshold_map(L*) = a1 / a2.
double solve_L_star(const Params& p);

struct BoundCertificate {
  Params params;
  State x0;
  double L_star;
  double L_used;
  double T0;
  double M1;
  double M2;
  double M3;
  double M4;
  double gamma;
  double W0;
};

/// Global bounds for the solution from x0. With no override the exact
/// threshold is used; an override below it throws CertificateError.
BoundCertificate certificate(const Params& p, const State& x0,
                             std::optional<double> L_override = std::nullopt);

/// Polynomial upper envelopes for x1..x4 at time t (degrees 1 to 4 in t).
Vec4 growth_envelope(const Params& p, const State& x0, double t);

}  // namespace afb
