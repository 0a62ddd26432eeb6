#include "dcmg/plant.hpp"

#include <cmath>

#include "dcmg/errors.hpp"

namespace dcmg {

namespace {
bool finite(double x) { return std::isfinite(x); }
}  // namespace

void PlantParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0)
            throw InvalidInput(std::string(name) + " must be finite and > 0");
    };
    auto non_negative = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidInput(std::string(name) + " must be finite and >= 0");
    };
    positive(v_in_nominal, "plant.v_in_nominal");
    positive(l_ind, "plant.l_ind");
    positive(c_dc, "plant.c_dc");
    positive(v_cpl_min, "plant.v_cpl_min");
    non_negative(p_cpl, "plant.p_cpl");
    non_negative(c_vir, "plant.c_vir");
    non_negative(r_series, "plant.r_series");
    if (r_load && (!std::isfinite(*r_load) || *r_load <= 0.0))
        throw InvalidInput("plant.r_load must be finite and > 0 when present");
}

double cpl_current(double p_cpl, double v_dc, double v_cpl_min) {
    if (!finite(p_cpl) || !finite(v_dc) || !finite(v_cpl_min))
        throw InvalidInput("cpl_current: non-finite input");
    if (p_cpl < 0.0) throw InvalidInput("cpl_current: p_cpl must be >= 0");
    if (v_cpl_min <= 0.0) throw InvalidInput("cpl_current: v_cpl_min must be > 0");
    return p_cpl / std::max(v_dc, v_cpl_min);
}

double nii_impedance(double p_cpl, double v_dc) {
    if (!finite(p_cpl) || !finite(v_dc))
        throw InvalidInput("nii_impedance: non-finite input");
    if (p_cpl <= 0.0)
        throw UndefinedImpedance("nii_impedance: undefined for zero-power load");
    return -(v_dc * v_dc) / p_cpl;
}

double effective_capacitance(double c_dc, double c_vir) {
    if (!finite(c_dc) || !finite(c_vir))
        throw InvalidInput("effective_capacitance: non-finite input");
    if (c_dc < 0.0 || c_vir < 0.0)
        throw InvalidInput("effective_capacitance: negative capacitance");
    return c_dc + c_vir;
}

double virtual_power(double v_dc, double dv_dc_dt, double c_vir) {
    if (!finite(v_dc) || !finite(dv_dc_dt) || !finite(c_vir))
        throw InvalidInput("virtual_power: non-finite input");
    return v_dc * c_vir * dv_dc_dt;
}

PlantDerivative plant_derivatives(const PlantState& state, double mu, double v_in,
                                  const PlantParams& params, double prev_dv_dc_dt) {
    if (!finite(state.i_l) || !finite(state.v_dc) || !finite(mu) || !finite(v_in))
        throw InvalidInput("plant_derivatives: non-finite input");

    const double l = params.l_ind;
    const double c = params.c_eff();

    if (state.v_dc <= 0.0 && params.p_cpl > 0.0)
        throw PlantCollapse("bus voltage reached zero with active CPL", 0.0);

    double di = (v_in - state.v_dc) / l + (state.v_dc / l) * mu;
    if (params.use_r_series) di -= (params.r_series / l) * state.i_l;

    const double i_cvl = params.r_load ? state.v_dc / *params.r_load : 0.0;
    const double i_cpl =
        params.p_cpl > 0.0 ? cpl_current(params.p_cpl, state.v_dc, params.v_cpl_min) : 0.0;
    // delta_p_vir / v_dc reduces to c_vir * dV/dt; using the reduced form
    // keeps the dead-circuit case (v_dc = 0, no CPL) well defined.
    const double i_vir = params.c_vir * prev_dv_dc_dt;

    const double dv = (state.i_l - i_cvl + i_vir - i_cpl) / c - (state.i_l / c) * mu;

    return PlantDerivative{di, dv};
}

}  // namespace dcmg
