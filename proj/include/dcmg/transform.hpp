#pragma once

#include <optional>

#include "dcmg/plant.hpp"

namespace dcmg {

/**
 * Energy coordinates of the exactly linearized converter. zeta1 is the
 * stored magnetic plus electrostatic energy; zeta2 is its rate, the net
 * power balance of the bus. In these coordinates the plant is a double
 * integrator driven by a(x) + b(x)*mu.
 */
struct CanonicalState {
    double zeta1 = 0.0;  // [J]
    double zeta2 = 0.0;  // [W]
};

struct LinearizationCoeffs {
    double a_x = 0.0;  // drift term [W/s]
    double b_x = 0.0;  // input gain [W/s per unit duty]
};

/// Reference signals in energy coordinates. References are piecewise
/// constant, so the time derivatives are identically zero.
struct ReferenceFrame {
    double v_dc_ref = 0.0;
    double i_l_ref = 0.0;
    double zeta1_ref = 0.0;
    double zeta1_ref_dot = 0.0;
    double zeta1_ref_ddot = 0.0;
};

CanonicalState to_canonical(const PlantState& state, const PlantParams& params, double v_in,
                            double delta_p_vir);

/// Throws SingularLinearization when b(x) <= b_min.
LinearizationCoeffs linearization_coeffs(const PlantState& state, const PlantParams& params,
                                         double v_in, double delta_p_vir, double b_min = 1e-6);

/// v_in defaults to the nominal supply; pass the scheduled value so the
/// current reference follows supply sags.
ReferenceFrame reference_frame(double v_dc_ref, const PlantParams& params,
                               std::optional<double> v_in = std::nullopt);

}  // namespace dcmg
