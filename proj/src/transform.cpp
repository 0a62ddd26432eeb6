#include "dcmg/transform.hpp"

#include <cmath>

#include "dcmg/errors.hpp"

namespace dcmg {

CanonicalState to_canonical(const PlantState& state, const PlantParams& params, double v_in,
                            double delta_p_vir) {
    const double c = params.c_eff();
    CanonicalState out;
    out.zeta1 = 0.5 * params.l_ind * state.i_l * state.i_l + 0.5 * c * state.v_dc * state.v_dc;
    double p_cvl = params.r_load ? state.v_dc * state.v_dc / *params.r_load : 0.0;
    out.zeta2 = v_in * state.i_l - p_cvl + delta_p_vir - params.p_cpl;
    return out;
}

LinearizationCoeffs linearization_coeffs(const PlantState& state, const PlantParams& params,
                                         double v_in, double delta_p_vir, double b_min) {
    const double l = params.l_ind;
    const double c = params.c_eff();
    const double v = state.v_dc;
    const double i = state.i_l;

    LinearizationCoeffs out;
    out.a_x = v_in * (v_in - v) / l;
    out.b_x = v_in * v / l;
    if (params.r_load) {
        const double rl = *params.r_load;
        const double bus_balance = i - v / rl + delta_p_vir / v - params.p_cpl / v;
        out.a_x -= (2.0 * v) / (rl * c) * bus_balance;
        out.b_x += 2.0 * i * v / (rl * c);
    }
    if (!(out.b_x > b_min))
        throw SingularLinearization("linearization_coeffs: b(x) below invertibility floor");
    return out;
}

ReferenceFrame reference_frame(double v_dc_ref, const PlantParams& params,
                               std::optional<double> v_in) {
    const double supply = v_in.value_or(params.v_in_nominal);
    if (!(v_dc_ref > 0.0) || !(supply > 0.0))
        throw InvalidInput("reference_frame: v_dc_ref and v_in must be > 0");
    ReferenceFrame out;
    out.v_dc_ref = v_dc_ref;
    out.i_l_ref = params.p_cpl / supply;
    out.zeta1_ref = 0.5 * params.l_ind * out.i_l_ref * out.i_l_ref +
                    0.5 * params.c_eff() * v_dc_ref * v_dc_ref;
    out.zeta1_ref_dot = 0.0;
    out.zeta1_ref_ddot = 0.0;
    return out;
}

}  // namespace dcmg
